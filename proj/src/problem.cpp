#include "steklov/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace steklov {

namespace {

Eigen::MatrixXd eigenfunction_matrix(const SteklovSpectrum& spectrum, int count) {
  const auto n = static_cast<Eigen::Index>(spectrum.mesh->num_vertices());
  Eigen::MatrixXd V(n, count);
  for (int k = 0; k < count; ++k) V.col(k) = spectrum.eigenfunctions[k].values;
  return V;
}

double projected_max(const SteklovForms& forms, const Eigen::MatrixXd& V) {
  const Eigen::MatrixXd A = V.transpose() * (forms.K * V);
  const Eigen::MatrixXd B = V.transpose() * (forms.M * V);
  const EigenPairs pairs = solve_gevp_dense(A, B);
  return pairs.lambda[pairs.lambda.size() - 1];
}

}  // namespace

TagSet ProblemMode::steklov_tags() const {
  return kind == ModeKind::Full ? TagSet::all() : TagSet::gamma_only();
}

SteklovForms SteklovForms::assemble(std::shared_ptr<const Mesh> mesh, ProblemMode mode) {
  SteklovForms forms;
  forms.mesh = std::move(mesh);
  forms.mode = mode;
  const Mesh& m = *forms.mesh;
  if (mode.has_dirichlet()) {
    const bool has_sigma = std::any_of(m.boundary_edges.begin(), m.boundary_edges.end(),
                                       [](const BoundaryEdge& e) { return e.tag == EdgeTag::Sigma; });
    if (!has_sigma) throw std::invalid_argument("mixed problem needs Sigma-tagged boundary edges");
    forms.dirichlet = m.boundary_vertices(TagSet::sigma_only());
  }
  forms.K = assemble_stiffness(m);
  forms.M = assemble_boundary_mass(
      m, mode.steklov_tags(),
      mode.kind == ModeKind::Weighted ? constant_weight(mode.weight) : BoundaryWeight{});
  return forms;
}

SteklovSpectrum solve_steklov(const SteklovForms& forms, int n_modes,
                              const ResolventOptions& options) {
  if (n_modes < 1) throw std::invalid_argument("n_modes must be at least 1");
  const OperatorBundle bundle = OperatorBundle::build(forms.K, forms.M, forms.dirichlet);
  const EigenPairs pairs = solve_via_resolvent(bundle, n_modes, options);

  SteklovSpectrum spec;
  spec.mode = forms.mode;
  spec.mesh = forms.mesh;
  spec.lambdas = pairs.lambda;
  spec.residuals = pairs.residuals;
  spec.free_dofs = bundle.size();
  spec.iterations = pairs.iterations;

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(forms.K.rows());
  const Eigen::VectorXd boundary_measure = forms.M * ones;
  for (int k = 0; k < n_modes; ++k) {
    Eigen::VectorXd v = bundle.expand(pairs.vectors.col(k));
    v /= std::sqrt(v.dot(forms.M * v));
    const double mean = boundary_measure.dot(v);
    double sign = mean < 0.0 ? -1.0 : 1.0;
    if (std::abs(mean) < 1e-12) {
      const double scale = v.cwiseAbs().maxCoeff();
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (boundary_measure[i] > 0.0 && std::abs(v[i]) > 1e-12 * scale) {
          sign = v[i] < 0.0 ? -1.0 : 1.0;
          break;
        }
      }
    }
    spec.eigenfunctions.emplace_back(forms.mesh, sign * v);
  }
  return spec;
}

SteklovSpectrum solve_steklov(std::shared_ptr<const Mesh> mesh, ProblemMode mode, int n_modes,
                              const ResolventOptions& options) {
  return solve_steklov(SteklovForms::assemble(std::move(mesh), mode), n_modes, options);
}

double rayleigh_quotient(const SteklovForms& forms, const FeFunction& u) {
  const double num = u.values.dot(forms.K * u.values);
  const double den = u.values.dot(forms.M * u.values);
  if (!(den > 1e-14 * std::abs(num)) || den <= 0.0)
    throw std::domain_error(
        "function has no trace on the Steklov boundary: the Rayleigh quotient is unbounded");
  return num / den;
}

double rayleigh_quotient(std::shared_ptr<const Mesh> mesh, const FeFunction& u,
                         ProblemMode mode) {
  return rayleigh_quotient(SteklovForms::assemble(std::move(mesh), mode), u);
}

std::vector<std::pair<int, int>> eigen_clusters(const Eigen::VectorXd& lambdas, double rel_tol) {
  std::vector<std::pair<int, int>> clusters;
  const int n = static_cast<int>(lambdas.size());
  int begin = 0;
  for (int i = 1; i <= n; ++i) {
    const bool split =
        i == n || std::abs(lambdas[i] - lambdas[i - 1]) >
                      rel_tol * std::max(std::abs(lambdas[i]), std::abs(lambdas[i - 1]));
    if (split) {
      clusters.emplace_back(begin, i);
      begin = i;
    }
  }
  return clusters;
}

GramReport orthogonality_gram(const SteklovSpectrum& spectrum, const SteklovForms& forms) {
  const int n = spectrum.size();
  const Eigen::MatrixXd V = eigenfunction_matrix(spectrum, n);
  GramReport r;
  r.boundary = V.transpose() * (forms.M * V);
  r.stiffness = V.transpose() * (forms.K * V);
  r.boundary_deviation = (r.boundary - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();

  std::vector<int> cluster_of(n);
  const auto clusters = eigen_clusters(spectrum.lambdas);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (int i = clusters[c].first; i < clusters[c].second; ++i) cluster_of[i] = static_cast<int>(c);

  const double scale = std::max(spectrum.lambdas.cwiseAbs().maxCoeff(), 1e-300);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double entry = r.stiffness(i, j);
      if (cluster_of[i] != cluster_of[j]) {
        r.stiffness_offdiag = std::max(r.stiffness_offdiag, std::abs(entry));
      } else {
        const double expected = i == j ? spectrum.lambdas[i] : 0.0;
        r.stiffness_diag_deviation =
            std::max(r.stiffness_diag_deviation, std::abs(entry - expected) / scale);
      }
    }
  }
  return r;
}

double minimax_check(const SteklovSpectrum& spectrum, const SteklovForms& forms, int n) {
  if (n < 0 || n + 1 > spectrum.size())
    throw std::invalid_argument("minimax_check needs n + 1 <= available modes");
  return projected_max(forms, eigenfunction_matrix(spectrum, n + 1));
}

double max_quotient_on_span(const SteklovForms& forms, const std::vector<Eigen::VectorXd>& basis) {
  if (basis.empty()) throw std::invalid_argument("empty span");
  Eigen::MatrixXd V(basis.front().size(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) V.col(static_cast<Eigen::Index>(k)) = basis[k];
  return projected_max(forms, V);
}

}  // namespace steklov
