#include "steklov/eigsolve.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>

namespace steklov {

namespace {

std::string describe_residuals(int iterations, const Eigen::VectorXd& residuals) {
  std::ostringstream msg;
  msg.precision(3);
  msg << "subspace iteration did not converge after " << iterations
      << " iterations; residuals:";
  for (Eigen::Index i = 0; i < residuals.size(); ++i) msg << ' ' << residuals[i];
  return msg.str();
}

// Applies T^-1 column by column: sparse Cholesky for moderate sizes,
// Jacobi-preconditioned CG above the direct limit.
class SpdSolver {
 public:
  SpdSolver(const SparseMatrix& T, const ResolventOptions& options)
      : direct_(T.rows() <= options.direct_limit) {
    if (direct_) {
      llt_.compute(T);
      if (llt_.info() != Eigen::Success)
        throw SolverError("T = K + M is not symmetric positive definite (Cholesky failed)");
    } else {
      cg_.setTolerance(options.inner_tol);
      cg_.setMaxIterations(std::max<Eigen::Index>(1000, 10 * T.rows()));
      cg_.compute(T);
      if (cg_.info() != Eigen::Success) throw SolverError("CG setup failed for T");
    }
  }

  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const {
    Eigen::MatrixXd out(rhs.rows(), rhs.cols());
    for (Eigen::Index j = 0; j < rhs.cols(); ++j) {
      if (direct_) {
        out.col(j) = llt_.solve(rhs.col(j));
      } else {
        out.col(j) = cg_.solve(rhs.col(j));
        if (cg_.info() != Eigen::Success)
          throw SolverError("CG did not reach the inner tolerance for T z = M y");
      }
    }
    return out;
  }

 private:
  bool direct_;
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt_;
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg_;
};

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& A) { return 0.5 * (A + A.transpose()); }

}  // namespace

NotConvergedError::NotConvergedError(int iterations, Eigen::VectorXd residuals)
    : SolverError(describe_residuals(iterations, residuals)),
      iterations_(iterations),
      residuals_(std::move(residuals)) {}

SparseMatrix extract_block(const SparseMatrix& A, const std::vector<int>& rows,
                           const std::vector<int>& cols) {
  std::vector<int> row_map(static_cast<std::size_t>(A.rows()), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) row_map[rows[i]] = static_cast<int>(i);
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t jj = 0; jj < cols.size(); ++jj) {
    for (SparseMatrix::InnerIterator it(A, cols[jj]); it; ++it) {
      const int ii = row_map[it.row()];
      if (ii >= 0) triplets.emplace_back(ii, static_cast<int>(jj), it.value());
    }
  }
  SparseMatrix B(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  B.setFromTriplets(triplets.begin(), triplets.end());
  B.makeCompressed();
  return B;
}

OperatorBundle OperatorBundle::build(const SparseMatrix& K, const SparseMatrix& M,
                                     const std::vector<bool>& dirichlet) {
  if (K.rows() != M.rows() || K.rows() != K.cols() || M.rows() != M.cols())
    throw std::invalid_argument("K and M must be square and of equal size");
  OperatorBundle b;
  b.n_global = static_cast<int>(K.rows());
  for (int i = 0; i < b.n_global; ++i)
    if (dirichlet.empty() || !dirichlet[i]) b.free_dofs.push_back(i);
  b.K = extract_block(K, b.free_dofs, b.free_dofs);
  b.M = extract_block(M, b.free_dofs, b.free_dofs);
  b.T = b.K + b.M;
  return b;
}

int OperatorBundle::boundary_dofs() const {
  int count = 0;
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    if (M.coeff(i, i) > 0.0) ++count;
  return count;
}

Eigen::VectorXd OperatorBundle::expand(const Eigen::VectorXd& local) const {
  Eigen::VectorXd global = Eigen::VectorXd::Zero(n_global);
  for (std::size_t k = 0; k < free_dofs.size(); ++k)
    global[free_dofs[k]] = local[static_cast<Eigen::Index>(k)];
  return global;
}

EigenPairs solve_via_resolvent(const OperatorBundle& bundle, int n_modes,
                               const ResolventOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  const int n = bundle.size();
  const int nb = bundle.boundary_dofs();
  if (n_modes < 1 || n_modes > nb) {
    std::ostringstream msg;
    msg << "requested " << n_modes << " modes but only " << nb
        << " free boundary dofs carry boundary mass";
    throw std::invalid_argument(msg.str());
  }
  const int block = std::min(n_modes + options.guard, nb);

  const SpdSolver solver(bundle.T, options);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd Y(n, block);
  for (Eigen::Index j = 0; j < Y.cols(); ++j)
    for (Eigen::Index i = 0; i < Y.rows(); ++i) Y(i, j) = normal(rng);

  EigenPairs out;
  Eigen::VectorXd mu(block);
  Eigen::VectorXd residuals = Eigen::VectorXd::Constant(n_modes, INFINITY);
  for (int it = 1; it <= options.max_iter; ++it) {
    const Eigen::MatrixXd Z = solver.solve(bundle.M * Y);

    // T-orthonormalize the block (SVQB), dropping numerically dependent directions.
    const Eigen::MatrixXd gram = symmetrized(Z.transpose() * (bundle.T * Z));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram_eig(gram);
    const Eigen::VectorXd& d = gram_eig.eigenvalues();
    const double cutoff = 1e-14 * d.maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < d.size(); ++k)
      if (d[k] > cutoff) keep.push_back(k);
    if (static_cast<int>(keep.size()) < n_modes)
      throw SolverError("subspace collapsed below the number of requested modes");
    Eigen::MatrixXd basis(Z.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k)
      basis.col(static_cast<Eigen::Index>(k)) =
          Z * gram_eig.eigenvectors().col(keep[k]) / std::sqrt(d[keep[k]]);

    // Rayleigh-Ritz: basis^T M basis c = mu c, since basis^T T basis = I.
    const Eigen::MatrixXd projected = symmetrized(basis.transpose() * (bundle.M * basis));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(projected);
    const Eigen::Index m = projected.rows();
    Y.resize(n, m);
    mu.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      mu[k] = ritz.eigenvalues()[m - 1 - k];
      Y.col(k) = basis * ritz.eigenvectors().col(m - 1 - k);
    }

    for (int k = 0; k < n_modes; ++k) {
      const double lambda = std::max(0.0, 1.0 / std::min(mu[k], 1.0) - 1.0);
      const Eigen::VectorXd y = Y.col(k);
      residuals[k] = (bundle.K * y - lambda * (bundle.M * y)).norm();
    }
    out.iterations = it;
    if (residuals.maxCoeff() < options.tol) break;
    if (it == options.max_iter) throw NotConvergedError(it, residuals);
  }

  out.mu = mu.head(n_modes);
  out.lambda.resize(n_modes);
  for (int k = 0; k < n_modes; ++k)
    // mu in (0, 1]; values above 1 are roundoff on the constant mode.
    out.lambda[k] = std::max(0.0, 1.0 / std::min(out.mu[k], 1.0) - 1.0);
  out.vectors = Y.leftCols(n_modes);
  out.residuals = residuals;
  return out;
}

Eigen::MatrixXd dtn_schur(const SparseMatrix& K, const std::vector<int>& boundary,
                          const std::vector<int>& interior) {
  const Eigen::MatrixXd Kbb = Eigen::MatrixXd(extract_block(K, boundary, boundary));
  if (interior.empty()) return Kbb;
  const SparseMatrix Kii = extract_block(K, interior, interior);
  const SparseMatrix Kib = extract_block(K, interior, boundary);
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt(Kii);
  if (llt.info() != Eigen::Success)
    throw SolverError("interior stiffness block is singular (Cholesky failed)");

  Eigen::MatrixXd S = Kbb;
  for (Eigen::Index j = 0; j < Kib.cols(); ++j) {
    const Eigen::VectorXd rhs = Eigen::VectorXd(Kib.col(j));
    const Eigen::VectorXd x = llt.solve(rhs);
    S.col(j) -= Kib.transpose() * x;
  }
  return symmetrized(S);
}

EigenPairs solve_gevp_dense(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw std::invalid_argument("A and B must be square and of equal size");
  const Eigen::LLT<Eigen::MatrixXd> llt(B);
  if (llt.info() != Eigen::Success) throw SolverError("B is not symmetric positive definite");
  const auto L = llt.matrixL();
  const Eigen::MatrixXd left = L.solve(A);                                  // L^-1 A
  const Eigen::MatrixXd C = L.solve(left.transpose()).transpose();          // L^-1 A L^-T
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrized(C));
  if (eig.info() != Eigen::Success) throw SolverError("dense symmetric eigensolver failed");

  EigenPairs out;
  out.lambda = eig.eigenvalues();
  out.vectors = llt.matrixU().solve(eig.eigenvectors());                    // L^-T W
  out.mu = (1.0 + out.lambda.array()).inverse().matrix();
  out.residuals.resize(out.lambda.size());
  for (Eigen::Index k = 0; k < out.lambda.size(); ++k) {
    const Eigen::VectorXd v = out.vectors.col(k);
    out.residuals[k] = (A * v - out.lambda[k] * (B * v)).norm();
  }
  return out;
}

}  // namespace steklov
