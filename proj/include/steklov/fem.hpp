#pragma once

#include <functional>
#include <memory>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "steklov/mesh.hpp"

namespace steklov {

/// Symmetric sparse matrix, both triangles stored.
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Piecewise-constant boundary weight, sampled at each edge midpoint.
using BoundaryWeight = std::function<double(const Point& midpoint, EdgeTag tag)>;

/// Constant weight c on every edge.
BoundaryWeight constant_weight(double c);

/// P1 function: one coefficient per mesh vertex.
struct FeFunction {
  std::shared_ptr<const Mesh> mesh;
  Eigen::VectorXd values;

  FeFunction() = default;
  FeFunction(std::shared_ptr<const Mesh> m, Eigen::VectorXd v);

  /// Nodal interpolant of f.
  static FeFunction interpolate(std::shared_ptr<const Mesh> m,
                                const std::function<double(const Point&)>& f);

  double evaluate(const Location& loc) const;
};

struct NormReport {
  double h1_semi = 0.0;
  double l2 = 0.0;
  double boundary_l2 = 0.0;
  /// sqrt(h1_semi^2 + boundary_l2^2): ||.||_0 on the flat domain, ||.||_eps on
  /// a perturbed one, ||.||_gamma when a weight is supplied.
  double combined = 0.0;
};

/// Constant-gradient stiffness of one triangle: |T| G G^T.
Eigen::Matrix3d local_stiffness(Point a, Point b, Point c);

SparseMatrix assemble_stiffness(const Mesh& mesh);

/// Boundary mass over edges whose tag is in `tags`; c (l/6) [[2,1],[1,2]] per
/// edge. A null weight means 1. Throws std::invalid_argument for an empty
/// tag set or a weight below 1.
SparseMatrix assemble_boundary_mass(const Mesh& mesh, TagSet tags,
                                    const BoundaryWeight& weight = {});

SparseMatrix assemble_volume_mass(const Mesh& mesh);

NormReport fe_norms(const FeFunction& u, TagSet tags, const BoundaryWeight& weight = {});

/// Evaluates u (living on its own mesh) at every vertex of `dst`.
FeFunction interpolate_onto(const FeFunction& u, std::shared_ptr<const Mesh> dst);

/// Same, reusing a prebuilt locator for u's mesh.
FeFunction interpolate_onto(const PointLocator& src_locator, const FeFunction& u,
                            std::shared_ptr<const Mesh> dst);

}  // namespace steklov
