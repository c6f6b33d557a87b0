#include "steklov/fem.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace steklov {

namespace {

using Triplet = Eigen::Triplet<double>;

SparseMatrix from_triplets(std::size_t n, const std::vector<Triplet>& triplets) {
  SparseMatrix A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  return A;
}

double edge_weight(const Mesh& mesh, const BoundaryEdge& e, const BoundaryWeight& weight) {
  if (!weight) return 1.0;
  const Point a = mesh.vertices[e.v[0]], b = mesh.vertices[e.v[1]];
  const double c = weight({0.5 * (a.x1 + b.x1), 0.5 * (a.x2 + b.x2)}, e.tag);
  if (!(c >= 1.0)) {
    std::ostringstream msg;
    msg << "boundary weight " << c << " is below 1";
    throw std::invalid_argument(msg.str());
  }
  return c;
}

}  // namespace

BoundaryWeight constant_weight(double c) {
  return [c](const Point&, EdgeTag) { return c; };
}

FeFunction::FeFunction(std::shared_ptr<const Mesh> m, Eigen::VectorXd v)
    : mesh(std::move(m)), values(std::move(v)) {
  if (static_cast<std::size_t>(values.size()) != mesh->num_vertices())
    throw std::invalid_argument("coefficient count does not match the vertex count");
}

FeFunction FeFunction::interpolate(std::shared_ptr<const Mesh> m,
                                   const std::function<double(const Point&)>& f) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(m->num_vertices()));
  for (std::size_t i = 0; i < m->num_vertices(); ++i) v[static_cast<Eigen::Index>(i)] = f(m->vertices[i]);
  return FeFunction(std::move(m), std::move(v));
}

double FeFunction::evaluate(const Location& loc) const {
  const auto& tri = mesh->triangles[loc.triangle];
  return loc.bary[0] * values[tri[0]] + loc.bary[1] * values[tri[1]] +
         loc.bary[2] * values[tri[2]];
}

Eigen::Matrix3d local_stiffness(Point a, Point b, Point c) {
  const double area2 = (b.x1 - a.x1) * (c.x2 - a.x2) - (b.x2 - a.x2) * (c.x1 - a.x1);
  if (!(area2 > 0.0)) throw DegenerateTriangleError(0, 0.5 * area2);
  // Rows: gradients of the barycentric coordinates, scaled by 2|T|.
  Eigen::Matrix<double, 3, 2> G;
  G << b.x2 - c.x2, c.x1 - b.x1,
       c.x2 - a.x2, a.x1 - c.x1,
       a.x2 - b.x2, b.x1 - a.x1;
  return (G * G.transpose()) / (2.0 * area2);
}

SparseMatrix assemble_stiffness(const Mesh& mesh) {
  std::vector<Triplet> triplets;
  triplets.reserve(9 * mesh.num_triangles());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    Eigen::Matrix3d K;
    try {
      K = local_stiffness(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
    } catch (const DegenerateTriangleError&) {
      throw DegenerateTriangleError(t, mesh.signed_area(t));
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) triplets.emplace_back(tri[i], tri[j], K(i, j));
  }
  return from_triplets(mesh.num_vertices(), triplets);
}

SparseMatrix assemble_boundary_mass(const Mesh& mesh, TagSet tags, const BoundaryWeight& weight) {
  if (tags.empty()) throw std::invalid_argument("boundary mass needs a non-empty tag set");
  std::vector<Triplet> triplets;
  triplets.reserve(4 * mesh.boundary_edges.size());
  for (const auto& e : mesh.boundary_edges) {
    if (!tags.contains(e.tag)) continue;
    const double c = edge_weight(mesh, e, weight) * mesh.edge_length(e) / 6.0;
    triplets.emplace_back(e.v[0], e.v[0], 2.0 * c);
    triplets.emplace_back(e.v[0], e.v[1], c);
    triplets.emplace_back(e.v[1], e.v[0], c);
    triplets.emplace_back(e.v[1], e.v[1], 2.0 * c);
  }
  return from_triplets(mesh.num_vertices(), triplets);
}

SparseMatrix assemble_volume_mass(const Mesh& mesh) {
  std::vector<Triplet> triplets;
  triplets.reserve(9 * mesh.num_triangles());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = mesh.signed_area(t);
    if (!(area > 0.0)) throw DegenerateTriangleError(t, area);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        triplets.emplace_back(tri[i], tri[j], (i == j ? 2.0 : 1.0) * area / 12.0);
  }
  return from_triplets(mesh.num_vertices(), triplets);
}

// Element loops rather than global matrices: the connecting-map norms run on
// meshes with ~10^6 vertices where assembling K would dominate memory.
NormReport fe_norms(const FeFunction& u, TagSet tags, const BoundaryWeight& weight) {
  const Mesh& mesh = *u.mesh;
  const Eigen::VectorXd& c = u.values;
  double semi = 0.0;
  double l2 = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Eigen::Vector3d ul(c[tri[0]], c[tri[1]], c[tri[2]]);
    const Eigen::Matrix3d K =
        local_stiffness(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
    semi += ul.dot(K * ul);
    const double area = mesh.signed_area(t);
    l2 += area / 12.0 * (ul.squaredNorm() + ul.sum() * ul.sum());
  }
  double boundary = 0.0;
  for (const auto& e : mesh.boundary_edges) {
    if (!tags.contains(e.tag)) continue;
    const double a = c[e.v[0]], b = c[e.v[1]];
    boundary += edge_weight(mesh, e, weight) * mesh.edge_length(e) / 6.0 *
                (2.0 * a * a + 2.0 * a * b + 2.0 * b * b);
  }
  NormReport r;
  r.h1_semi = std::sqrt(std::max(semi, 0.0));
  r.l2 = std::sqrt(l2);
  r.boundary_l2 = std::sqrt(boundary);
  r.combined = std::sqrt(std::max(semi, 0.0) + boundary);
  return r;
}

FeFunction interpolate_onto(const PointLocator& src_locator, const FeFunction& u,
                            std::shared_ptr<const Mesh> dst) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(dst->num_vertices()));
  for (std::size_t i = 0; i < dst->num_vertices(); ++i) {
    const auto loc = src_locator.try_locate(dst->vertices[i]);
    if (!loc) {
      throw MeshError("destination vertex " + std::to_string(i) +
                      " cannot be located in the source mesh");
    }
    v[static_cast<Eigen::Index>(i)] = u.evaluate(*loc);
  }
  return FeFunction(std::move(dst), std::move(v));
}

FeFunction interpolate_onto(const FeFunction& u, std::shared_ptr<const Mesh> dst) {
  return interpolate_onto(PointLocator(u.mesh), u, std::move(dst));
}

}  // namespace steklov
