#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "steklov/oracle.hpp"
#include "steklov/perturb.hpp"
#include "steklov/problem.hpp"
#include "steklov/sweep.hpp"

using namespace steklov;

namespace {

using MeshPtr = std::shared_ptr<const Mesh>;
using Clock = std::chrono::steady_clock;

const std::vector<double> kEps = {0.25, 0.125, 0.0625, 0.03125};

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto start = Clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail << " exception: " << e.what();
  }
  const double s = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("[%s] criterion %2d: %s (%.1f s)%s\n", v.pass ? "PASS" : "FAIL", id, title.c_str(), s,
              v.detail.str().c_str());
  std::fflush(stdout);
  failures += !v.pass;
}

MeshPtr strip_mesh(const DomainSpec& d, MeshResolution res) { return std::make_shared<const Mesh>(build_strip_mesh(d, res)); }

DomainSpec strip(double alpha, double eps) { return {1.0, 1.0, alpha, eps, {}}; }

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

std::string list(const std::vector<double>& v) {
  std::ostringstream s;
  s.precision(4);
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? " " : "") << v[i];
  return s.str();
}

std::vector<double> series(const SweepResult& r, double alpha) {
  std::vector<double> mu;
  for (const auto& rec : r.records)
    if (!rec.reference && rec.alpha == alpha && rec.n == 1) mu.push_back(rec.mu_eps);
  return mu;
}

}  // namespace

int main() {
  report(1, "strip oracle, h = 1/64 and 1/128", [](Verdict& v) {
    const auto start = Clock::now();
    const double exact = strip_mixed_eigenvalue(1);
    std::vector<double> err;
    for (int n : {64, 128}) {
      const double l = solve_steklov(strip_mesh(strip(1.0, 0.0), {n, n}), ProblemMode::mixed(), 1).lambdas[0];
      err.push_back(std::abs(l - exact) / exact);
    }
    const double order = std::log2(err[0] / err[1]);
    const double t = seconds_since(start);
    v.detail << " rel err " << list(err) << ", order " << order;
    v.require(err[0] < 0.01, "h=1/64 error < 1%");
    v.require(err[1] < 0.003, "h=1/128 error < 0.3%");
    v.require(order >= 1.8, "order >= 1.8");
    v.require(t < 30.0, "runtime < 30 s");
  });

  report(2, "disk oracle, 256 sectors, 64 rings", [](Verdict& v) {
    const auto start = Clock::now();
    const auto s = solve_steklov(std::make_shared<const Mesh>(build_disk_mesh(64, 256)), ProblemMode::full(), 6);
    double worst = 0.0;
    std::vector<double> l;
    for (int n = 1; n <= 5; ++n) {
      l.push_back(s.lambdas[n]);
      worst = std::max(worst, std::abs(s.lambdas[n] - disk_eigenvalue(n)) / disk_eigenvalue(n));
    }
    v.detail << " lambda_1..5 " << list(l) << ", max rel err " << worst;
    v.require(worst < 0.02, "within 2%");
    v.require(seconds_since(start) < 60.0, "runtime < 60 s");
  });

  report(3, "zero mode on every test mesh", [](Verdict& v) {
    std::vector<MeshPtr> meshes = {strip_mesh(strip(1.0, 0.0), {64, 64}),
                                   std::make_shared<const Mesh>(build_disk_mesh(64, 256)),
                                   std::make_shared<const Mesh>(build_disk_mesh(8, 32))};
    for (double alpha : {2.0, 1.0, 0.5})
      for (double eps : {0.25, 0.03125}) meshes.push_back(strip_mesh(strip(alpha, eps), {256, 64}));
    double worst_l = 0.0, worst_s = 0.0;
    for (const auto& m : meshes) {
      const auto s = solve_steklov(m, ProblemMode::full(), 2);
      const Eigen::VectorXd& u = s.eigenfunctions[0].values;
      worst_l = std::max(worst_l, std::abs(s.lambdas[0]));
      worst_s = std::max(worst_s, std::sqrt((u.array() - u.mean()).square().mean()));
      v.require(s.lambdas[0] >= 0.0 && s.lambdas[0] <= 1e-8, "lambda_0 in [0, 1e-8]");
    }
    v.detail << " " << meshes.size() << " meshes, max lambda_0 " << worst_l << ", max stddev " << worst_s;
    v.require(worst_s <= 1e-8, "constant eigenvector");
  });

  SweepConfig config;
  config.n_modes = 1;
  SweepResult sweep;
  const auto sweep_start = Clock::now();
  bool sweep_ok = true;
  try {
    sweep = run_sweep(config);
  } catch (const std::exception& e) {
    std::printf("sweep failed: %s\n", e.what());
    sweep_ok = false;
  }
  std::printf("       default sweep (nx = %d, rows = %d) took %.1f s\n", sweep.resolution.nx, sweep.resolution.ny,
              seconds_since(sweep_start));
  const double mu0 = sweep_ok ? sweep.records.front().mu0 : NAN;

  report(4, "trichotomy, alpha = 2", [&](Verdict& v) {
    v.require(sweep_ok, "sweep ran");
    std::vector<double> gap;
    for (double mu : series(sweep, 2.0)) gap.push_back(std::abs(mu - mu0));
    v.detail << " |mu - mu0| " << list(gap) << ", rel at 1/32 " << gap.back() / mu0;
    v.require(gap.size() == 4 && strictly_decreasing(gap), "gap strictly decreasing");
    v.require(gap.back() / mu0 < 0.02, "< 2% at eps = 1/32");
  });

  report(5, "trichotomy, alpha = 1", [&](Verdict& v) {
    v.require(sweep_ok, "sweep ran");
    const double cb = std::sqrt(2.0);
    const auto mu = series(sweep, 1.0);
    std::vector<double> gap, ratio;
    for (double m : mu) {
      gap.push_back(std::abs(m - mu0 / cb));
      ratio.push_back(m * cb / mu0);
    }
    v.detail << " mu C_b / mu0 " << list(ratio);
    v.require(mu.size() == 4 && ratio.back() >= 0.97 && ratio.back() <= 1.03, "ratio in [0.97, 1.03]");
    v.require(strictly_decreasing(gap), "gap decreasing");
  });

  report(6, "trichotomy, alpha = 1/2", [&](Verdict& v) {
    v.require(sweep_ok, "sweep ran");
    const auto mu = series(sweep, 0.5);
    v.detail << " mu " << list(mu) << ", mu0 " << mu0;
    v.require(mu.size() == 4 && strictly_decreasing(mu), "strictly decreasing");
    v.require(!mu.empty() && mu.back() < 0.5 * mu0, "mu(1/32) < mu0 / 2");
  });

  report(7, "connecting-system norms", [](Verdict& v) {
    const auto u = [](const Point& p) { return p.x1 + p.x2; };
    std::vector<double> g2, g1;
    for (double eps : kEps) g2.push_back(emap_diagnostic(strip(2.0, eps), 8.0, u).gap_0);
    for (double eps : {0.125, 0.0625, 0.03125}) g1.push_back(emap_diagnostic(strip(1.0, eps), 8.0, u).gap_gamma);
    v.detail << " alpha=2 gap_0 " << list(g2) << "; alpha=1 gap_gamma " << list(g1);
    v.require(strictly_decreasing(g2) && g2.back() < 0.01, "alpha = 2");
    v.require(strictly_decreasing(g1) && g1.back() < 0.01, "alpha = 1");
  });

  report(8, "Jacobian certificate, k_hat = 8", [](Verdict& v) {
    double lo = INFINITY, hi = -INFINITY;
    for (double alpha : {2.0, 1.0, 0.5})
      for (double eps : kEps) {
        const JacobianCertificate c = jacobian_certificate(strip(alpha, eps), 8.0);
        lo = std::min(lo, c.min);
        hi = std::max(hi, c.max);
      }
    v.detail << " range [" << lo << ", " << hi << "]";
    v.require(lo > 0.75 && hi <= 1.0, "inside (0.75, 1]");
  });

  report(9, "orthogonality and minimax", [](Verdict& v) {
    double ortho = 0.0, minimax = 0.0;
    const SteklovForms strip_forms = SteklovForms::assemble(strip_mesh(strip(1.0, 0.0), {64, 64}), ProblemMode::mixed());
    const SteklovSpectrum s = solve_steklov(strip_forms, 5);
    GramReport g = orthogonality_gram(s, strip_forms);
    ortho = std::max({ortho, g.boundary_deviation, g.stiffness_offdiag});
    for (int n = 0; n <= 4; ++n)
      minimax = std::max(minimax, std::abs(minimax_check(s, strip_forms, n) - s.lambdas[n]) / s.lambdas[n]);
    const SteklovForms disk_forms =
        SteklovForms::assemble(std::make_shared<const Mesh>(build_disk_mesh(16, 64)), ProblemMode::full());
    g = orthogonality_gram(solve_steklov(disk_forms, 6), disk_forms);
    ortho = std::max({ortho, g.boundary_deviation, g.stiffness_offdiag});
    v.detail << " max Gram deviation " << ortho << ", minimax rel dev " << minimax;
    v.require(ortho < 1e-8, "Gram off-diagonal < 1e-8");
    v.require(minimax < 1e-8, "minimax = lambda_n");
  });

  report(10, "geometry discontinuity witness", [](Verdict& v) {
    std::vector<double> gap, resid;
    double per1 = 0.0;
    for (double eps : kEps) {
      gap.push_back(exact_perimeter(strip(2.0, eps)).value - 4.0);
      per1 = std::max(per1, std::abs(exact_perimeter(strip(1.0, eps)).value - (3.0 + std::sqrt(2.0))));
      resid.push_back(weak_l1_residual(strip(1.0, eps), [](double x) { return x; }, std::sqrt(2.0)));
    }
    v.detail << " alpha=2 Per gap " << list(gap) << "; alpha=1 |Per - (3+sqrt2)| " << per1
             << "; weak-L1 residual " << list(resid);
    for (std::size_t i = 1; i < gap.size(); ++i) {
      v.require(gap[i] <= 0.5 * gap[i - 1] && gap[i] > 0.0, "perimeter gap at least halves");
      v.require(resid[i] <= 0.5 * resid[i - 1] + 1e-15, "weak-L1 residual halves");
    }
    v.require(per1 < 1e-14, "Per = 3 + sqrt 2 for alpha = 1");
  });

  report(11, "resolvent and DtN paths agree", [](Verdict& v) {
    struct Case {
      MeshPtr mesh;
      ProblemMode mode;
    };
    std::vector<Case> cases = {{strip_mesh(strip(1.0, 0.0), {32, 32}), ProblemMode::mixed()},
                               {strip_mesh(strip(1.0, 0.0), {32, 32}), ProblemMode::full()},
                               {strip_mesh(strip(1.0, 0.25), {64, 16}), ProblemMode::weighted(std::sqrt(2.0))},
                               {std::make_shared<const Mesh>(build_disk_mesh(16, 128)), ProblemMode::full()},
                               {std::make_shared<const Mesh>(build_disk_mesh(32, 1024)), ProblemMode::full()},
                               {strip_mesh(strip(1.0, 0.03125), {1024, 16}), ProblemMode::mixed()},
                               {strip_mesh(strip(1.0, 0.0625), {960, 32}), ProblemMode::full()}};
    for (double alpha : {2.0, 1.0, 0.5})
      for (double eps : {0.25, 0.125, 0.0625}) cases.push_back({strip_mesh(strip(alpha, eps), {128, 16}), ProblemMode::mixed()});
    double worst = 0.0;
    int max_boundary = 0;
    for (const auto& c : cases) {
      const SteklovForms forms = SteklovForms::assemble(c.mesh, c.mode);
      const auto on = c.mesh->boundary_vertices(c.mode.steklov_tags());
      std::vector<int> bnd, in;
      for (std::size_t i = 0; i < on.size(); ++i) {
        if (!forms.dirichlet.empty() && forms.dirichlet[i]) continue;
        (on[i] ? bnd : in).push_back(static_cast<int>(i));
      }
      max_boundary = std::max(max_boundary, static_cast<int>(bnd.size()));
      const SteklovSpectrum s = solve_steklov(forms, 4);
      const EigenPairs d = solve_gevp_dense(dtn_schur(forms.K, bnd, in), Eigen::MatrixXd(extract_block(forms.M, bnd, bnd)));
      for (int k = 0; k < 4; ++k)
        worst = std::max(worst, std::abs(s.lambdas[k] - d.lambda[k]) / std::max(1.0, std::abs(d.lambda[k])));
    }
    v.detail << " " << cases.size() << " meshes, up to " << max_boundary << " boundary dofs, max rel diff " << worst;
    v.require(worst < 1e-8, "agreement to 1e-8");
  });

  report(12, "eigenfunction convergence, alpha = 2", [&](Verdict& v) {
    const MeshResolution res = sweep.resolution.nx > 0 ? sweep.resolution : MeshResolution{256, 64};
    const FeFunction u0 = solve_steklov(strip_mesh(strip(2.0, 0.0), res), ProblemMode::mixed(), 1).eigenfunctions[0];
    std::vector<double> err;
    for (double eps : kEps) {
      const FeFunction ue = solve_steklov(strip_mesh(strip(2.0, eps), res), ProblemMode::mixed(), 1).eigenfunctions[0];
      err.push_back(aligned_h1_intersection_error(ue, u0));
    }
    v.detail << " H1 error " << list(err);
    v.require(strictly_decreasing(err), "decreasing over eps");
  });

  std::printf("%s: %d of 12 criteria failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
