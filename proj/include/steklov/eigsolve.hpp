#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "steklov/fem.hpp"

namespace steklov {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotConvergedError : public SolverError {
 public:
  NotConvergedError(int iterations, Eigen::VectorXd residuals);
  const Eigen::VectorXd& residuals() const { return residuals_; }
  int iterations() const { return iterations_; }

 private:
  int iterations_;
  Eigen::VectorXd residuals_;
};

/// Stiffness and boundary mass restricted to the free (non-Dirichlet) dofs,
/// together with T = K + M.
struct OperatorBundle {
  SparseMatrix K;
  SparseMatrix M;
  SparseMatrix T;
  /// free_dofs[k] is the global index of local dof k.
  std::vector<int> free_dofs;
  int n_global = 0;

  /// Removes the rows and columns flagged in `dirichlet` (empty: none).
  static OperatorBundle build(const SparseMatrix& K, const SparseMatrix& M,
                              const std::vector<bool>& dirichlet = {});

  int size() const { return static_cast<int>(free_dofs.size()); }
  /// Free dofs carrying boundary mass, i.e. the rank bound of M.
  int boundary_dofs() const;
  Eigen::VectorXd expand(const Eigen::VectorXd& local) const;
};

struct EigenPairs {
  /// Eigenvalues of S = T^-1 M, descending.
  Eigen::VectorXd mu;
  /// lambda = 1/mu - 1, ascending.
  Eigen::VectorXd lambda;
  /// One column per pair.
  Eigen::MatrixXd vectors;
  Eigen::VectorXd residuals;
  int iterations = 0;
};

struct ResolventOptions {
  double tol = 1e-9;
  int max_iter = 500;
  /// Block size is n_modes + guard.
  int guard = 5;
  /// Systems up to this size are factorized; larger ones use Jacobi-CG.
  int direct_limit = 50000;
  double inner_tol = 1e-12;
  std::uint64_t seed = 20240521;
};

/// Block subspace iteration on S = T^-1 M with Rayleigh-Ritz in the T inner
/// product. Returns the n_modes largest mu (smallest lambda) with
/// T-orthonormal vectors and residuals ||K v - lambda M v||_2 / ||v||_T.
EigenPairs solve_via_resolvent(const OperatorBundle& bundle, int n_modes,
                               const ResolventOptions& options = {});

/// Dense boundary Schur complement K_bb - K_bi K_ii^-1 K_ib.
Eigen::MatrixXd dtn_schur(const SparseMatrix& K, const std::vector<int>& boundary,
                          const std::vector<int>& interior);

/// A v = lambda B v for dense symmetric A and SPD B, via B = L L^T and the
/// standard problem L^-1 A L^-T. Eigenvalues ascending, vectors
/// B-orthonormal; mu is filled as 1/(1 + lambda).
EigenPairs solve_gevp_dense(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

/// Sparse submatrix A(rows, cols).
SparseMatrix extract_block(const SparseMatrix& A, const std::vector<int>& rows,
                           const std::vector<int>& cols);

}  // namespace steklov
