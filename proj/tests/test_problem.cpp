#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>

#include "steklov/oracle.hpp"
#include "steklov/problem.hpp"

using namespace steklov;

namespace {

using MeshPtr = std::shared_ptr<const Mesh>;

MeshPtr strip(double alpha, double eps, int per_period, int rows) {
  const DomainSpec d{1.0, 1.0, alpha, eps, {}};
  return std::make_shared<const Mesh>(build_strip_mesh(d, MeshResolution::for_domain(d, per_period, rows)));
}

MeshPtr square(int n) {
  return std::make_shared<const Mesh>(build_strip_mesh(DomainSpec{1.0, 1.0, 1.0, 0.0, {}}, {n, n}));
}

double stddev(const Eigen::VectorXd& v) { return std::sqrt((v.array() - v.mean()).square().mean()); }

}  // namespace

TEST_CASE("mode tag sets") {
  CHECK(ProblemMode::full().steklov_tags().sigma);
  CHECK_FALSE(ProblemMode::mixed().steklov_tags().sigma);
  CHECK(ProblemMode::weighted(2.0).steklov_tags().gamma);
  CHECK_FALSE(ProblemMode::full().has_dirichlet());
  CHECK(ProblemMode::weighted(2.0).has_dirichlet());
}

TEST_CASE("full mode has the constant zero mode") {
  for (const auto& m : {square(16), strip(1.0, 0.125, 8, 16), strip(0.5, 0.25, 8, 16),
                        MeshPtr(std::make_shared<const Mesh>(build_disk_mesh(8, 32)))}) {
    const SteklovSpectrum s = solve_steklov(m, ProblemMode::full(), 3);
    CHECK(s.lambdas[0] >= 0.0);
    CHECK(s.lambdas[0] <= 1e-8);
    CHECK(s.lambdas[1] > 0.0);
    CHECK(stddev(s.eigenfunctions[0].values) <= 1e-8);
    CHECK(s.eigenfunctions[0].values.mean() > 0.0);
  }
}

TEST_CASE("mixed mode has no zero eigenvalue") {
  const SteklovSpectrum s = solve_steklov(strip(1.0, 0.125, 8, 16), ProblemMode::mixed(), 4);
  for (int k = 0; k < 4; ++k) CHECK(s.lambdas[k] > 0.1);
  CHECK_THROWS_AS(solve_steklov(std::make_shared<const Mesh>(build_disk_mesh(4, 16)), ProblemMode::mixed(), 1),
                  std::invalid_argument);
}

TEST_CASE("mixed spectrum converges at second order toward the strip oracle") {
  const SteklovSpectrum coarse = solve_steklov(square(32), ProblemMode::mixed(), 4);
  const SteklovSpectrum fine = solve_steklov(square(64), ProblemMode::mixed(), 4);
  for (int k = 1; k <= 4; ++k) {
    const double exact = strip_mixed_eigenvalue(k);
    const double e1 = std::abs(coarse.lambdas[k - 1] - exact);
    const double e2 = std::abs(fine.lambdas[k - 1] - exact);
    CHECK(std::log2(e1 / e2) >= 1.8);
  }
}

TEST_CASE("weighted spectrum is the mixed spectrum divided by C") {
  const auto m = strip(1.0, 0.125, 8, 16);
  const SteklovSpectrum mixed = solve_steklov(m, ProblemMode::mixed(), 4);
  for (double c : {std::sqrt(2.0), 3.0}) {
    const SteklovSpectrum w = solve_steklov(m, ProblemMode::weighted(c), 4);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(w.lambdas[k] * c - mixed.lambdas[k]) <= 1e-12 * mixed.lambdas[k]);
  }
  CHECK_THROWS_AS(solve_steklov(m, ProblemMode::weighted(0.5), 2), std::invalid_argument);
}

TEST_CASE("Dirichlet constraints never lower lambda_1") {
  for (const auto& m : {square(16), strip(1.0, 0.25, 8, 16), strip(2.0, 0.125, 8, 16)}) {
    const double full = solve_steklov(m, ProblemMode::full(), 2).lambdas[1];
    const double mixed = solve_steklov(m, ProblemMode::mixed(), 1).lambdas[0];
    CHECK(mixed >= full);
  }
}

TEST_CASE("eigenfunction normalization and sign") {
  const auto m = strip(1.0, 0.125, 8, 16);
  const SteklovForms forms = SteklovForms::assemble(m, ProblemMode::mixed());
  const SteklovSpectrum s = solve_steklov(forms, 4);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m->num_vertices());
  for (const auto& u : s.eigenfunctions) {
    CHECK(u.values.dot(forms.M * u.values) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ones.dot(forms.M * u.values) >= 0.0);
  }
  const auto on_sigma = m->boundary_vertices(TagSet::sigma_only());
  for (std::size_t i = 0; i < on_sigma.size(); ++i)
    if (on_sigma[i]) CHECK(s.eigenfunctions[0].values[i] == 0.0);
}

TEST_CASE("re-solving gives bitwise identical eigenfunctions") {
  const auto m = strip(1.0, 0.25, 8, 8);
  const SteklovSpectrum a = solve_steklov(m, ProblemMode::mixed(), 3);
  const SteklovSpectrum b = solve_steklov(m, ProblemMode::mixed(), 3);
  for (int k = 0; k < 3; ++k) CHECK(a.eigenfunctions[k].values == b.eigenfunctions[k].values);
}

TEST_CASE("Rayleigh quotient examples") {
  const auto m = square(8);
  const FeFunction one = FeFunction::interpolate(m, [](const Point&) { return 1.0; });
  CHECK(rayleigh_quotient(m, one, ProblemMode::full()) == doctest::Approx(0.0));
  const FeFunction x1 = FeFunction::interpolate(m, [](const Point& p) { return p.x1; });
  CHECK(rayleigh_quotient(m, x1, ProblemMode::full()) == doctest::Approx(0.6).epsilon(1e-13));

  const SteklovForms forms = SteklovForms::assemble(square(16), ProblemMode::mixed());
  const SteklovSpectrum s = solve_steklov(forms, 3);
  for (int k = 0; k < 3; ++k)
    CHECK(std::abs(rayleigh_quotient(forms, s.eigenfunctions[k]) - s.lambdas[k]) < 1e-9);
}

TEST_CASE("Rayleigh quotient rejects functions without boundary trace") {
  const auto m = square(8);
  const FeFunction bubble = FeFunction::interpolate(
      m, [](const Point& p) { return p.x1 * (1 - p.x1) * p.x2 * (1 + p.x2); });
  CHECK_THROWS_AS(rayleigh_quotient(m, bubble, ProblemMode::full()), std::domain_error);
  const FeFunction sides = FeFunction::interpolate(m, [](const Point& p) { return p.x2 * (1 + p.x2); });
  CHECK_THROWS_AS(rayleigh_quotient(m, sides, ProblemMode::mixed()), std::domain_error);
}

TEST_CASE("eigenvalue clusters") {
  Eigen::VectorXd l(5);
  l << 0.0, 1.0, 1.0 + 1e-9, 2.0, 2.0 + 1e-3;
  const auto c = eigen_clusters(l);
  REQUIRE(c.size() == 4);
  CHECK(c[1] == std::pair<int, int>{1, 3});
  CHECK(c[3] == std::pair<int, int>{4, 5});
}

TEST_CASE("Gram matrices are diagonal") {
  const SteklovForms forms = SteklovForms::assemble(square(24), ProblemMode::mixed());
  const SteklovSpectrum s = solve_steklov(forms, 4);
  const GramReport g = orthogonality_gram(s, forms);
  CHECK(g.boundary_deviation < 1e-8);
  CHECK(g.stiffness_offdiag < 1e-8);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(g.stiffness(k, k) - s.lambdas[k]) <= 1e-8 * s.lambdas[k]);

  const SteklovSpectrum one = solve_steklov(forms, 1);
  const GramReport g1 = orthogonality_gram(one, forms);
  CHECK(g1.boundary.rows() == 1);
  CHECK(g1.stiffness_offdiag == 0.0);
}

TEST_CASE("Gram checks on the disk respect clusters") {
  const SteklovForms forms = SteklovForms::assemble(std::make_shared<const Mesh>(build_disk_mesh(8, 32)),
                                                    ProblemMode::full());
  const SteklovSpectrum s = solve_steklov(forms, 5);
  const GramReport g = orthogonality_gram(s, forms);
  CHECK(g.boundary_deviation < 1e-8);
  CHECK(g.stiffness_offdiag < 1e-8);
  CHECK(g.stiffness_diag_deviation < 1e-8);
}

TEST_CASE("minimax characterization") {
  const SteklovForms full = SteklovForms::assemble(square(16), ProblemMode::full());
  const SteklovSpectrum sf = solve_steklov(full, 3);
  CHECK(std::abs(minimax_check(sf, full, 0)) < 1e-10);

  const SteklovForms forms = SteklovForms::assemble(square(16), ProblemMode::mixed());
  const SteklovSpectrum s = solve_steklov(forms, 5);
  for (int n = 0; n < 5; ++n) CHECK(std::abs(minimax_check(s, forms, n) - s.lambdas[n]) <= 1e-8 * s.lambdas[n]);
  CHECK_THROWS_AS(minimax_check(s, forms, 5), std::invalid_argument);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  std::vector<Eigen::VectorXd> basis;
  for (int k = 0; k <= 2; ++k) basis.push_back(s.eigenfunctions[k].values);
  const double base = max_quotient_on_span(forms, basis);
  CHECK(base == doctest::Approx(s.lambdas[2]).epsilon(1e-10));
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd extra(forms.mesh->num_vertices());
    for (Eigen::Index i = 0; i < extra.size(); ++i) extra[i] = forms.dirichlet[i] ? 0.0 : n01(rng);
    auto bigger = basis;
    bigger.push_back(extra);
    CHECK(max_quotient_on_span(forms, bigger) >= base * (1 - 1e-12));
  }
}
