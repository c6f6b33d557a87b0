#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "steklov/eigsolve.hpp"
#include "steklov/fem.hpp"

namespace steklov {

enum class ModeKind { Full, Mixed, Weighted };

/// full:      u_nu = lambda u on the whole boundary.
/// mixed:     u = 0 on Sigma, u_nu = lambda u on Gamma.
/// weighted:  mixed, with u_nu = lambda C u on Gamma.
struct ProblemMode {
  ModeKind kind = ModeKind::Full;
  double weight = 1.0;

  static ProblemMode full() { return {ModeKind::Full, 1.0}; }
  static ProblemMode mixed() { return {ModeKind::Mixed, 1.0}; }
  static ProblemMode weighted(double c) { return {ModeKind::Weighted, c}; }

  TagSet steklov_tags() const;
  bool has_dirichlet() const { return kind != ModeKind::Full; }
};

/// Stiffness, mode boundary mass and Dirichlet mask for one mesh.
struct SteklovForms {
  std::shared_ptr<const Mesh> mesh;
  ProblemMode mode;
  SparseMatrix K;
  SparseMatrix M;
  std::vector<bool> dirichlet;

  static SteklovForms assemble(std::shared_ptr<const Mesh> mesh, ProblemMode mode);
};

struct SteklovSpectrum {
  ProblemMode mode;
  std::shared_ptr<const Mesh> mesh;
  Eigen::VectorXd lambdas;
  /// Normalized so that the weighted Steklov-boundary mass is 1.
  std::vector<FeFunction> eigenfunctions;
  Eigen::VectorXd residuals;
  int free_dofs = 0;
  int iterations = 0;

  int size() const { return static_cast<int>(lambdas.size()); }
};

SteklovSpectrum solve_steklov(const SteklovForms& forms, int n_modes,
                              const ResolventOptions& options = {});
SteklovSpectrum solve_steklov(std::shared_ptr<const Mesh> mesh, ProblemMode mode, int n_modes,
                              const ResolventOptions& options = {});

/// u^T K u / u^T M u with the mode's boundary part and weight. Throws
/// std::domain_error when u has no boundary trace there: the quotient is
/// unbounded along such directions.
double rayleigh_quotient(const SteklovForms& forms, const FeFunction& u);
double rayleigh_quotient(std::shared_ptr<const Mesh> mesh, const FeFunction& u,
                         ProblemMode mode);

/// Indices [begin, end) of eigenvalues within 1e-6 relative of each other.
std::vector<std::pair<int, int>> eigen_clusters(const Eigen::VectorXd& lambdas,
                                                double rel_tol = 1e-6);

struct GramReport {
  Eigen::MatrixXd boundary;
  Eigen::MatrixXd stiffness;
  /// max |boundary - I| over all entries.
  double boundary_deviation = 0.0;
  /// max |stiffness(i,j)| for i, j in different clusters.
  double stiffness_offdiag = 0.0;
  /// max |stiffness(n,n) - lambda_n| / max lambda (clusters: trace of the block).
  double stiffness_diag_deviation = 0.0;
};

GramReport orthogonality_gram(const SteklovSpectrum& spectrum, const SteklovForms& forms);

/// Largest Rayleigh quotient over span{u_0..u_n}: top eigenvalue of the
/// projected (n+1)x(n+1) pencil. Equals lambda_n.
double minimax_check(const SteklovSpectrum& spectrum, const SteklovForms& forms, int n);

/// Largest Rayleigh quotient over the span of arbitrary functions.
double max_quotient_on_span(const SteklovForms& forms, const std::vector<Eigen::VectorXd>& basis);

}  // namespace steklov
