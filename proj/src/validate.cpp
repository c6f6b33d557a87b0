#include "steklov/validate.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "steklov/oracle.hpp"
#include "steklov/perturb.hpp"
#include "steklov/problem.hpp"
#include "steklov/sweep.hpp"

namespace steklov {

namespace {

using MeshPtr = std::shared_ptr<const Mesh>;

MeshPtr strip(double alpha, double eps, int nx, int ny) {
  return std::make_shared<const Mesh>(build_strip_mesh(DomainSpec{1.0, 1.0, alpha, eps, {}}, {nx, ny}));
}

double coefficient_stddev(const Eigen::VectorXd& v) {
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().mean());
}

CheckResult below(std::string name, double measured, double threshold, std::string detail = {}) {
  std::ostringstream rule;
  rule << "<= " << threshold;
  return {std::move(name), rule.str(), measured, threshold, measured <= threshold, std::move(detail)};
}

CheckResult above(std::string name, double measured, double threshold, std::string detail = {}) {
  std::ostringstream rule;
  rule << ">= " << threshold;
  return {std::move(name), rule.str(), measured, threshold, measured >= threshold, std::move(detail)};
}

void guarded(std::vector<CheckResult>& out, const std::string& name,
             const std::function<void(std::vector<CheckResult>&)>& body) {
  try {
    body(out);
  } catch (const std::exception& e) {
    out.push_back({name, "no error", NAN, NAN, false, e.what()});
  }
}

void check_strip_oracle(std::vector<CheckResult>& out, bool coarse) {
  const double exact = strip_mixed_eigenvalue(1);
  const int n_coarse = coarse ? 4 : 64;
  const double l64 = solve_steklov(strip(1.0, 0.0, n_coarse, n_coarse), ProblemMode::mixed(), 1).lambdas[0];
  const double l128 = solve_steklov(strip(1.0, 0.0, 128, 128), ProblemMode::mixed(), 1).lambdas[0];
  const double e64 = std::abs(l64 - exact) / exact;
  const double e128 = std::abs(l128 - exact) / exact;
  out.push_back(below("strip oracle lambda_1, h=1/" + std::to_string(n_coarse), e64, 0.01));
  out.push_back(below("strip oracle lambda_1, h=1/128", e128, 0.003));
  out.push_back(above("strip oracle convergence order", std::log(e64 / e128) / std::log(128.0 / n_coarse), 1.8));
}

void check_disk_oracle(std::vector<CheckResult>& out) {
  auto mesh = std::make_shared<const Mesh>(build_disk_mesh(64, 256));
  const SteklovSpectrum s = solve_steklov(mesh, ProblemMode::full(), 6);
  double worst = 0.0;
  std::ostringstream detail;
  detail.precision(8);
  for (int n = 1; n <= 5; ++n) {
    worst = std::max(worst, std::abs(s.lambdas[n] - disk_eigenvalue(n)) / disk_eigenvalue(n));
    detail << s.lambdas[n] << ' ';
  }
  out.push_back(below("disk oracle lambda_1..5 (256 sectors, 64 rings)", worst, 0.02, detail.str()));
}

void check_zero_mode(std::vector<CheckResult>& out) {
  const std::vector<std::pair<std::string, MeshPtr>> meshes = {
      {"flat strip", strip(1.0, 0.0, 32, 32)},
      {"strip alpha=1 eps=1/8", strip(1.0, 0.125, 64, 32)},
      {"strip alpha=1/2 eps=1/4", strip(0.5, 0.25, 32, 32)},
      {"disk", std::make_shared<const Mesh>(build_disk_mesh(16, 64))}};
  double worst_lambda = 0.0;
  double worst_std = 0.0;
  for (const auto& [name, mesh] : meshes) {
    const SteklovSpectrum s = solve_steklov(mesh, ProblemMode::full(), 2);
    worst_lambda = std::max(worst_lambda, std::abs(s.lambdas[0]));
    worst_std = std::max(worst_std, coefficient_stddev(s.eigenfunctions[0].values));
  }
  out.push_back(below("zero mode lambda_0", worst_lambda, 1e-8));
  out.push_back(below("zero mode eigenvector stddev", worst_std, 1e-8));
}

void check_assembly_identities(std::vector<CheckResult>& out) {
  const DomainSpec domain{1.0, 1.0, 1.0, 0.125, {}};
  const Mesh mesh = build_strip_mesh(domain, {64, 16});
  const SparseMatrix K = assemble_stiffness(mesh);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(K.rows());
  out.push_back(below("stiffness kernel |K 1|_inf", (K * ones).cwiseAbs().maxCoeff(), 1e-12));
  const SparseMatrix M = assemble_boundary_mass(mesh, TagSet::all());
  out.push_back(below("boundary mass 1'M1 vs exact perimeter",
                      std::abs(ones.dot(M * ones) - exact_perimeter(domain).value), 1e-12));
  const double area = domain.width * domain.depth + domain.eps * domain.profile.mean_value() * domain.width;
  out.push_back(below("area identity", std::abs(mesh.total_area() - area), 1e-12));
}

void check_jacobian(std::vector<CheckResult>& out) {
  double lo = 1.0;
  double hi = 0.0;
  for (double alpha : {2.0, 1.0, 0.5}) {
    for (double eps : {0.25, 0.125, 0.0625, 0.03125}) {
      const JacobianCertificate c = jacobian_certificate(DomainSpec{1.0, 1.0, alpha, eps, {}}, 8.0);
      lo = std::min(lo, c.min);
      hi = std::max(hi, c.max);
    }
  }
  CheckResult r{"Jacobian certificate min (k_hat=8, default grid)", "in (0.75, 1]", lo, 0.75,
                lo > 0.75 && hi <= 1.0, "max " + std::to_string(hi)};
  out.push_back(r);
}

void check_orthogonality_and_minimax(std::vector<CheckResult>& out) {
  const SteklovForms forms = SteklovForms::assemble(strip(1.0, 0.0, 32, 32), ProblemMode::mixed());
  const SteklovSpectrum s = solve_steklov(forms, 5);
  const GramReport g = orthogonality_gram(s, forms);
  out.push_back(below("boundary Gram deviation from I", g.boundary_deviation, 1e-8));
  out.push_back(below("stiffness Gram off-diagonal", g.stiffness_offdiag, 1e-8));
  double worst = 0.0;
  for (int n = 0; n <= 4; ++n)
    worst = std::max(worst, std::abs(minimax_check(s, forms, n) - s.lambdas[n]) / s.lambdas[n]);
  out.push_back(below("minimax max-on-span vs lambda_n, n<=4", worst, 1e-8));
}

void check_path_equivalence(std::vector<CheckResult>& out) {
  double worst = 0.0;
  const std::vector<std::pair<MeshPtr, ProblemMode>> cases = {
      {strip(1.0, 0.0, 32, 32), ProblemMode::mixed()},
      {strip(2.0, 0.125, 64, 32), ProblemMode::mixed()},
      {std::make_shared<const Mesh>(build_disk_mesh(16, 64)), ProblemMode::full()}};
  for (const auto& [mesh, mode] : cases) {
    const SteklovForms forms = SteklovForms::assemble(mesh, mode);
    const SteklovSpectrum s = solve_steklov(forms, 4);
    const std::vector<bool> on_boundary = mesh->boundary_vertices(mode.steklov_tags());
    std::vector<int> boundary, interior;
    for (std::size_t i = 0; i < mesh->num_vertices(); ++i) {
      if (!forms.dirichlet.empty() && forms.dirichlet[i]) continue;
      (on_boundary[i] ? boundary : interior).push_back(static_cast<int>(i));
    }
    const Eigen::MatrixXd dtn = dtn_schur(forms.K, boundary, interior);
    const Eigen::MatrixXd mass = Eigen::MatrixXd(extract_block(forms.M, boundary, boundary));
    const EigenPairs dense = solve_gevp_dense(dtn, mass);
    for (int k = 0; k < 4; ++k)
      worst = std::max(worst, std::abs(s.lambdas[k] - dense.lambda[k]) / std::max(1.0, std::abs(dense.lambda[k])));
  }
  out.push_back(below("resolvent vs DtN dense path", worst, 1e-8));
}

void check_trichotomy(std::vector<CheckResult>& out) {
  SweepConfig config;
  config.n_modes = 1;
  const SweepResult r = run_sweep(config);
  auto series = [&](double alpha) {
    std::vector<double> mu;
    for (const auto& rec : r.records)
      if (!rec.reference && rec.alpha == alpha) mu.push_back(rec.mu_eps);
    return mu;
  };
  const double mu0 = r.records.front().mu0;
  const double cb = r.records.front().c_b;
  const auto stable = series(2.0);
  const auto homog = series(1.0);
  const auto degen = series(0.5);
  bool dec2 = true, dec1 = true, dec05 = true;
  for (std::size_t i = 1; i < stable.size(); ++i) {
    dec2 = dec2 && std::abs(stable[i] - mu0) < std::abs(stable[i - 1] - mu0);
    dec1 = dec1 && std::abs(homog[i] - mu0 / cb) < std::abs(homog[i - 1] - mu0 / cb);
    dec05 = dec05 && degen[i] < degen[i - 1];
  }
  CheckResult a = below("trichotomy alpha=2: |mu-mu0|/mu0 at eps=1/32", std::abs(stable.back() - mu0) / mu0, 0.02);
  a.pass = a.pass && dec2;
  a.detail = dec2 ? "gap strictly decreasing" : "gap NOT decreasing";
  out.push_back(a);
  const double ratio = homog.back() * cb / mu0;
  CheckResult b{"trichotomy alpha=1: mu C_b/mu0 at eps=1/32", "in [0.97, 1.03]", ratio, 1.0,
                ratio >= 0.97 && ratio <= 1.03 && dec1, dec1 ? "gap decreasing" : "gap NOT decreasing"};
  out.push_back(b);
  CheckResult c = below("trichotomy alpha=1/2: mu/mu0 at eps=1/32", degen.back() / mu0, 0.5);
  c.pass = c.pass && dec05;
  c.detail = dec05 ? "strictly decreasing" : "NOT decreasing";
  out.push_back(c);
}

}  // namespace

std::vector<CheckResult> run_validate(const ValidateOptions& options) {
  std::vector<CheckResult> out;
  guarded(out, "strip oracle", [&](auto& o) { check_strip_oracle(o, options.coarse_oracle); });
  guarded(out, "disk oracle", check_disk_oracle);
  guarded(out, "zero mode", check_zero_mode);
  guarded(out, "assembly identities", check_assembly_identities);
  guarded(out, "Jacobian certificate", check_jacobian);
  guarded(out, "orthogonality and minimax", check_orthogonality_and_minimax);
  if (options.strict) {
    guarded(out, "path equivalence", check_path_equivalence);
    guarded(out, "trichotomy", check_trichotomy);
  }
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

void print_report(const std::vector<CheckResult>& results, std::ostream& out) {
  for (const auto& r : results) {
    char line[512];
    std::snprintf(line, sizeof line, "[%s] %-52s measured %-12.4g %s", r.pass ? "PASS" : "FAIL",
                  r.name.c_str(), r.measured, r.rule.c_str());
    out << line;
    if (!r.detail.empty()) out << "  (" << r.detail << ")";
    out << '\n';
  }
}

std::string report_json(const std::vector<CheckResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) {
    arr.push_back({{"name", r.name},
                   {"rule", r.rule},
                   {"measured", std::isnan(r.measured) ? nlohmann::json(nullptr) : nlohmann::json(r.measured)},
                   {"threshold", std::isnan(r.threshold) ? nlohmann::json(nullptr) : nlohmann::json(r.threshold)},
                   {"pass", r.pass},
                   {"detail", r.detail}});
  }
  return arr.dump(2);
}

}  // namespace steklov
