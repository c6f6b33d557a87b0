#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "steklov/config.hpp"
#include "steklov/perturb.hpp"
#include "steklov/problem.hpp"
#include "steklov/sweep.hpp"
#include "steklov/validate.hpp"

using namespace steklov;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kConfigError = 2;

struct SolveArgs {
  std::string domain = "strip";
  std::string alpha = "1";
  std::string eps = "0";
  std::string mode = "mixed";
  std::string profile = "triangle-wave";
  std::string amplitude = "1";
  std::optional<std::string> weight;
  int nx_per_period = 8;
  int nx = 0;
  int rows = 64;
  int rings = 64;
  int sectors = 256;
  int n_modes = 4;
  std::string width = "1";
  std::string depth = "1";
  double tol = 1e-9;
  std::string out;
  std::string export_mesh;
};

struct SweepArgs {
  std::string config;
  std::vector<std::string> settings;
  std::optional<std::string> alphas, eps, profile, out, timing;
  std::optional<int> n_modes, nx_per_period, rows, threads;
  std::optional<double> tol;
};

struct ValidateArgs {
  bool strict = false;
  bool coarse = false;
  std::string json;
};

struct EmapArgs {
  std::string alpha = "2";
  std::string eps_list = "1/4,1/8,1/16,1/32";
  std::string profile = "triangle-wave";
  std::string amplitude = "1";
  double k_hat = 8.0;
  int rows = 0;
  std::string out;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path);
    if (!file_) throw ConfigError("cannot write '" + path + "'");
  }
  std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

ProblemMode parse_mode(const std::string& name, const ProfileSpec& profile,
                       const std::optional<std::string>& weight) {
  if (name == "full") return ProblemMode::full();
  if (name == "mixed") return ProblemMode::mixed();
  if (name == "weighted") return ProblemMode::weighted(weight ? parse_real(*weight) : c_b(profile));
  throw ConfigError("unknown mode '" + name + "' (full, mixed, weighted)");
}

ProfileSpec parse_profile(const std::string& kind, const std::string& amplitude) {
  try {
    return {parse_profile_kind(kind), parse_real(amplitude)};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

int run_solve(const SolveArgs& a) {
  const ProfileSpec profile = parse_profile(a.profile, a.amplitude);
  const ProblemMode mode = parse_mode(a.mode, profile, a.weight);
  std::shared_ptr<const Mesh> mesh;
  if (a.domain == "disk") {
    if (mode.kind != ModeKind::Full) throw ConfigError("the disk supports --mode full only");
    mesh = std::make_shared<const Mesh>(build_disk_mesh(a.rings, a.sectors));
  } else if (a.domain == "strip") {
    const DomainSpec domain{parse_real(a.width), parse_real(a.depth), parse_real(a.alpha), parse_real(a.eps), profile};
    domain.validate();
    MeshResolution res = MeshResolution::for_domain(domain, a.nx_per_period, a.rows);
    if (a.nx > 0) res.nx = a.nx;
    check_resolution(domain, res);
    mesh = std::make_shared<const Mesh>(build_strip_mesh(domain, res));
  } else {
    throw ConfigError("unknown domain '" + a.domain + "' (strip, disk)");
  }
  if (!a.export_mesh.empty()) write_vtk(*mesh, a.export_mesh);

  ResolventOptions options;
  options.tol = a.tol;
  const SteklovSpectrum s = solve_steklov(mesh, mode, a.n_modes, options);
  Output out(a.out);
  out.get() << "n,lambda,residual,dofs\n";
  const int first = mode.kind == ModeKind::Full ? 0 : 1;
  for (int k = 0; k < s.size(); ++k)
    out.get() << first + k << ',' << format_real(s.lambdas[k]) << ',' << format_real(s.residuals[k]) << ','
              << s.free_dofs << '\n';
  return kOk;
}

int run_sweep_command(const SweepArgs& a) {
  SweepConfig config = a.config.empty() ? SweepConfig{} : load_sweep_config(a.config);
  for (const auto& s : a.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
  }
  if (a.alphas) apply_setting(config, "alphas", *a.alphas);
  if (a.eps) apply_setting(config, "eps", *a.eps);
  if (a.profile) apply_setting(config, "profile", *a.profile);
  if (a.out) config.output = *a.out;
  if (a.timing) apply_setting(config, "timing", *a.timing);
  if (a.n_modes) config.n_modes = *a.n_modes;
  if (a.nx_per_period) config.nx_per_period = *a.nx_per_period;
  if (a.rows) config.rows = *a.rows;
  if (a.threads) config.threads = *a.threads;
  if (a.tol) config.tol = *a.tol;
  config.validate();

  const SweepResult result = run_sweep(config);
  Output out(config.output);
  write_csv(result, out.get(), config.record_timing);

  bool ok = true;
  for (const auto& r : result.records) {
    if (r.error) {
      std::cerr << "cell alpha=" << r.alpha << " eps=" << r.eps << " failed: " << *r.error << '\n';
      ok = false;
    }
  }
  for (const auto& v : result.verdicts)
    std::cerr << "alpha=" << v.alpha << " n=" << v.n << ": mu_eps "
              << (v.decreasing ? "strictly decreasing" : "NOT strictly decreasing") << '\n';
  return ok ? kOk : kCheckFailed;
}

int run_validate_command(const ValidateArgs& a) {
  const auto results = run_validate({a.strict, a.coarse});
  print_report(results, std::cout);
  if (!a.json.empty()) {
    Output out(a.json);
    out.get() << report_json(results) << '\n';
  }
  const bool ok = all_passed(results);
  std::cout << (ok ? "all checks passed" : "some checks FAILED") << '\n';
  return ok ? kOk : kCheckFailed;
}

int run_emap(const EmapArgs& a) {
  const ProfileSpec profile = parse_profile(a.profile, a.amplitude);
  const double alpha = parse_real(a.alpha);
  const std::vector<double> eps_list = parse_real_list(a.eps_list);
  if (eps_list.empty()) throw ConfigError("--eps-list is empty");
  std::vector<DomainSpec> cells;
  for (double eps : eps_list) {
    const DomainSpec domain{1.0, 1.0, alpha, eps, profile};
    domain.validate();
    if (!domain.whole_periods()) throw ConfigError("eps = " + format_real(eps) + " needs 1/eps integer");
    ConnectingMap probe(domain, a.k_hat);
    cells.push_back(domain);
  }
  const auto u = [](const Point& p) { return p.x1 + p.x2; };
  Output out(a.out);
  out.get() << kEmapCsvHeader << '\n';
  for (const auto& domain : cells) {
    MeshResolution res = emap_resolution(domain);
    if (a.rows > 0) res.ny = a.rows;
    write_emap_row(emap_diagnostic(domain, a.k_hat, u, res), out.get());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FEM lab for Steklov eigenvalues on domains with oscillating boundary"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve one Steklov problem and print its eigenvalues");
  s->add_option("--domain", solve.domain, "strip or disk")->capture_default_str();
  s->add_option("--alpha", solve.alpha, "Oscillation exponent")->capture_default_str();
  s->add_option("--eps", solve.eps, "Period (0: flat strip)")->capture_default_str();
  s->add_option("--mode", solve.mode, "full, mixed or weighted")->capture_default_str();
  s->add_option("--weight", solve.weight, "Gamma weight for --mode weighted (default C_b)");
  s->add_option("--profile", solve.profile, "triangle-wave, raised-cosine or zero")->capture_default_str();
  s->add_option("--amplitude", solve.amplitude)->capture_default_str();
  s->add_option("--nx-per-period", solve.nx_per_period)->capture_default_str();
  s->add_option("--nx", solve.nx, "Explicit column count");
  s->add_option("--rows", solve.rows)->capture_default_str();
  s->add_option("--rings", solve.rings)->capture_default_str();
  s->add_option("--sectors", solve.sectors)->capture_default_str();
  s->add_option("--n-modes", solve.n_modes)->capture_default_str();
  s->add_option("--width", solve.width)->capture_default_str();
  s->add_option("--depth", solve.depth)->capture_default_str();
  s->add_option("--tol", solve.tol)->capture_default_str();
  s->add_option("--out", solve.out, "CSV path (default stdout)");
  s->add_option("--export-mesh", solve.export_mesh, "Write the mesh as legacy VTK");

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "Run the alpha x eps table of mixed eigenvalues");
  w->add_option("--config", sweep.config, "key=value file");
  w->add_option("--set", sweep.settings, "Override key=value (repeatable)");
  w->add_option("--alphas", sweep.alphas);
  w->add_option("--eps", sweep.eps);
  w->add_option("--profile", sweep.profile);
  w->add_option("--n-modes", sweep.n_modes);
  w->add_option("--nx-per-period", sweep.nx_per_period);
  w->add_option("--rows", sweep.rows);
  w->add_option("--tol", sweep.tol);
  w->add_option("--threads", sweep.threads);
  w->add_option("--timing", sweep.timing, "on/off");
  w->add_option("--out", sweep.out, "CSV path (default stdout)");

  ValidateArgs validate;
  auto* v = app.add_subcommand("validate", "Run oracle and identity checks");
  v->add_flag("--strict", validate.strict, "Also run path equivalence and the trichotomy sweep");
  v->add_flag("--coarse-oracle", validate.coarse, "Use a 4x4 strip mesh for the oracle");
  v->add_option("--json", validate.json, "Write the report as JSON");

  EmapArgs emap;
  auto* e = app.add_subcommand("emap", "Connecting-map norm diagnostics for u = x1 + x2");
  e->add_option("--alpha", emap.alpha)->capture_default_str();
  e->add_option("--eps-list", emap.eps_list)->capture_default_str();
  e->add_option("--profile", emap.profile)->capture_default_str();
  e->add_option("--amplitude", emap.amplitude)->capture_default_str();
  e->add_option("--k-hat", emap.k_hat)->capture_default_str();
  e->add_option("--rows", emap.rows, "Override the eps^2 row rule");
  e->add_option("--out", emap.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*s) return run_solve(solve);
    if (*w) return run_sweep_command(sweep);
    if (*v) return run_validate_command(validate);
    if (*e) return run_emap(emap);
  } catch (const std::invalid_argument& err) {
    std::cerr << "configuration error: " << err.what() << '\n';
    return kConfigError;
  } catch (const MeshError& err) {
    std::cerr << "configuration error: " << err.what() << '\n';
    return kConfigError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kCheckFailed;
  }
  return kConfigError;
}
