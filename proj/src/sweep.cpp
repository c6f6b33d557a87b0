#include "steklov/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

#include "steklov/perturb.hpp"
#include "steklov/problem.hpp"

namespace steklov {

namespace {

struct CellResult {
  std::vector<double> mu;
  std::vector<double> residual;
  int dofs = 0;
  double ms = 0.0;
  std::optional<std::string> error;
};

CellResult solve_cell(const DomainSpec& domain, const MeshResolution& res, int n_modes,
                      const ResolventOptions& options) {
  CellResult cell;
  const auto start = std::chrono::steady_clock::now();
  try {
    auto mesh = std::make_shared<const Mesh>(build_strip_mesh(domain, res));
    const SteklovSpectrum spec = solve_steklov(mesh, ProblemMode::mixed(), n_modes, options);
    for (int k = 0; k < n_modes; ++k) {
      cell.mu.push_back(spec.lambdas[k]);
      cell.residual.push_back(spec.residuals[k]);
    }
    cell.dofs = spec.free_dofs;
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  cell.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return cell;
}

template <class Task>
void run_parallel(std::size_t count, int threads, Task task) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

MeshResolution sweep_resolution(const SweepConfig& config) {
  const long periods = std::lround(config.width / config.min_eps());
  return {static_cast<int>(config.nx_per_period * periods), config.rows};
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  SweepResult result;
  result.resolution = sweep_resolution(config);
  ResolventOptions options;
  options.tol = config.tol;
  options.seed = config.seed;

  const double cb = c_b(config.profile);
  const DomainSpec flat{config.width, config.depth, 1.0, 0.0, config.profile};
  const CellResult ref = solve_cell(flat, result.resolution, config.n_modes, options);
  if (ref.error) throw std::runtime_error("reference solve failed: " + *ref.error);
  for (int k = 0; k < config.n_modes; ++k) {
    SweepRecord r;
    r.reference = true;
    r.n = k + 1;
    r.mu_eps = r.mu0 = r.predicted = ref.mu[k];
    r.c_b = cb;
    r.ratio = 1.0;
    r.residual = ref.residual[k];
    r.dofs = ref.dofs;
    r.ms = ref.ms;
    result.records.push_back(r);
  }

  struct Cell {
    double alpha;
    double eps;
  };
  std::vector<Cell> cells;
  for (double a : config.alphas)
    for (double e : config.eps_list) cells.push_back({a, e});
  std::vector<CellResult> solved(cells.size());
  const int threads = config.threads > 0 ? config.threads : default_thread_count();
  run_parallel(cells.size(), threads, [&](std::size_t i) {
    const DomainSpec domain{config.width, config.depth, cells[i].alpha, cells[i].eps, config.profile};
    solved[i] = solve_cell(domain, result.resolution, config.n_modes, options);
  });

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const CellResult& cell = solved[i];
    if (cell.error) {
      SweepRecord r;
      r.alpha = cells[i].alpha;
      r.eps = cells[i].eps;
      r.n = 0;
      r.mu_eps = r.mu0 = r.predicted = r.residual = nan;
      r.c_b = cb;
      r.ms = cell.ms;
      r.error = cell.error;
      result.records.push_back(r);
      continue;
    }
    for (int k = 0; k < config.n_modes; ++k) {
      SweepRecord r;
      r.alpha = cells[i].alpha;
      r.eps = cells[i].eps;
      r.n = k + 1;
      r.mu_eps = cell.mu[k];
      r.mu0 = ref.mu[k];
      r.c_b = cb;
      r.predicted = predicted_limit(r.alpha, r.mu0, cb);
      if (regime_for(r.alpha) != Regime::Degeneration) r.ratio = r.mu_eps / r.predicted;
      r.residual = cell.residual[k];
      r.dofs = cell.dofs;
      r.ms = cell.ms;
      result.records.push_back(r);
    }
  }

  for (double a : config.alphas) {
    if (regime_for(a) != Regime::Degeneration) continue;
    for (int k = 1; k <= config.n_modes; ++k) {
      // Collect mu_eps in order of decreasing eps.
      std::vector<std::pair<double, double>> series;
      for (const auto& r : result.records)
        if (!r.reference && !r.error && r.alpha == a && r.n == k) series.emplace_back(r.eps, r.mu_eps);
      std::sort(series.begin(), series.end(), [](auto x, auto y) { return x.first > y.first; });
      bool decreasing = series.size() >= 2;
      for (std::size_t j = 1; j < series.size(); ++j)
        decreasing = decreasing && series[j].second < series[j - 1].second;
      result.verdicts.push_back({a, k, decreasing});
    }
  }
  return result;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const SweepResult& result, std::ostream& out, bool record_timing) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : result.records) {
    out << format_real(r.alpha) << ',' << format_real(r.eps) << ',' << r.n << ','
        << format_real(r.mu_eps) << ',' << format_real(r.mu0) << ',' << format_real(r.c_b) << ','
        << format_real(r.predicted) << ',' << (r.ratio ? format_real(*r.ratio) : std::string()) << ','
        << format_real(r.residual) << ',' << r.dofs << ','
        << (record_timing ? format_real(std::round(r.ms * 1000.0) / 1000.0) : std::string("0")) << '\n';
  }
}

MeshResolution emap_resolution(const DomainSpec& domain) {
  if (domain.eps == 0.0) return {64, 64};
  const double spacing = domain.eps * domain.eps;
  const long periods = domain.periods();
  const long unit = 2 * periods;
  long nx = std::max<long>(8 * periods, static_cast<long>(std::ceil(domain.width / spacing - 1e-9)));
  nx = ((nx + unit - 1) / unit) * unit;
  const long ny = static_cast<long>(std::ceil(domain.depth / spacing - 1e-9));
  return {static_cast<int>(nx), static_cast<int>(ny)};
}

EmapRow emap_diagnostic(const DomainSpec& domain, double k_hat,
                        const std::function<double(const Point&)>& u) {
  return emap_diagnostic(domain, k_hat, u, emap_resolution(domain));
}

EmapRow emap_diagnostic(const DomainSpec& domain, double k_hat,
                        const std::function<double(const Point&)>& u, const MeshResolution& res) {
  const ConnectingMap map(domain, k_hat);
  auto flat_mesh = std::make_shared<const Mesh>(build_strip_mesh(domain.unperturbed(), res));
  auto eps_mesh = std::make_shared<const Mesh>(build_strip_mesh(domain, res));
  const FeFunction u0 = FeFunction::interpolate(flat_mesh, u);
  const FeFunction transported = apply_E(u0, eps_mesh, map);
  const LimitDescriptor limit(domain.profile);

  EmapRow row;
  row.alpha = domain.alpha;
  row.eps = domain.eps;
  row.norm_eps = fe_norms(transported, TagSet::all()).combined;
  row.norm_0 = fe_norms(u0, TagSet::all()).combined;
  row.norm_gamma = fe_norms(u0, TagSet::all(), limit.gamma()).combined;
  row.gap_0 = std::abs(row.norm_eps - row.norm_0) / row.norm_0;
  row.gap_gamma = std::abs(row.norm_eps - row.norm_gamma) / row.norm_gamma;
  row.jac_min = map.certificate().min;
  row.jac_max = map.certificate().max;
  row.nx = res.nx;
  row.ny = res.ny;
  return row;
}

void write_emap_row(const EmapRow& r, std::ostream& out) {
  out << format_real(r.alpha) << ',' << format_real(r.eps) << ',' << format_real(r.norm_eps) << ','
      << format_real(r.norm_0) << ',' << format_real(r.norm_gamma) << ',' << format_real(r.gap_0)
      << ',' << format_real(r.gap_gamma) << ',' << format_real(r.jac_min) << ','
      << format_real(r.jac_max) << ',' << r.nx << ',' << r.ny << '\n';
}

}  // namespace steklov
