#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "steklov/geometry.hpp"

namespace steklov {

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

/// Gamma: Steklov part (graph of g_eps, or the whole circle for the disk).
/// Sigma: lateral sides and bottom of the strip.
enum class EdgeTag { Gamma, Sigma };

struct TagSet {
  bool gamma = true;
  bool sigma = true;

  static TagSet all() { return {true, true}; }
  static TagSet gamma_only() { return {true, false}; }
  static TagSet sigma_only() { return {false, true}; }

  bool contains(EdgeTag tag) const { return tag == EdgeTag::Gamma ? gamma : sigma; }
  bool empty() const { return !gamma && !sigma; }
};

struct BoundaryEdge {
  std::array<int, 2> v{};
  EdgeTag tag = EdgeTag::Sigma;
};

/// Conforming P1 triangulation. Triangles are counter-clockwise; boundary
/// edges are listed in counter-clockwise loop order.
struct Mesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  double h = 0.0;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }

  double signed_area(std::size_t t) const;
  double total_area() const;
  double edge_length(const BoundaryEdge& e) const;
  double boundary_length(TagSet tags = TagSet::all()) const;
  /// Vertex mask: true for every endpoint of a boundary edge with a tag in `tags`.
  std::vector<bool> boundary_vertices(TagSet tags) const;
  /// Largest edge-length ratio max/min over all triangles.
  double max_aspect_ratio() const;
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateTriangleError : public MeshError {
 public:
  DegenerateTriangleError(std::size_t index, double area);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

struct MeshResolution {
  int nx = 8;
  int ny = 8;

  /// Columns that resolve every kink: `per_period` subdivisions per period.
  static MeshResolution for_domain(const DomainSpec& domain, int per_period, int rows);
};

/// Throws MeshError naming the required nx when `res` does not place a node
/// at every half period of g_eps.
void check_resolution(const DomainSpec& domain, const MeshResolution& res);

/// Structured grid on (0,w)x(-d,0), each cell split along its lower-left to
/// upper-right diagonal, then sheared by (x1, x2) -> (x1, x2 + (1 + x2/d) g(x1)).
Mesh build_strip_mesh(const DomainSpec& domain, const MeshResolution& res);

/// Polygonal unit disk: a center fan plus (n_rings - 1) quad rings split in
/// two, n_sectors vertices per ring. All boundary edges are Gamma.
Mesh build_disk_mesh(int n_rings, int n_sectors);

struct Location {
  std::size_t triangle = 0;
  std::array<double, 3> bary{};
};

class PointNotFoundError : public MeshError {
 public:
  explicit PointNotFoundError(Point p);
  Point point() const { return point_; }

 private:
  Point point_;
};

/// Uniform bucket grid over the mesh bounding box. Read-only after
/// construction; `locate` is safe to call concurrently.
class PointLocator {
 public:
  explicit PointLocator(std::shared_ptr<const Mesh> mesh);

  /// Throws PointNotFoundError when p lies outside every triangle by more
  /// than 1e-12 h.
  Location locate(Point p) const;
  std::optional<Location> try_locate(Point p) const;

  const Mesh& mesh() const { return *mesh_; }

 private:
  std::shared_ptr<const Mesh> mesh_;
  double xmin_ = 0.0, ymin_ = 0.0;
  double dx_ = 1.0, dy_ = 1.0;
  int bx_ = 1, by_ = 1;
  double tol_ = 0.0;
  std::vector<int> bucket_start_;
  std::vector<int> bucket_items_;
};

/// Convenience wrapper building a locator per call.
Location locate_point(const std::shared_ptr<const Mesh>& mesh, Point p);

/// Legacy ASCII VTK POLYDATA: points, boundary LINES, triangle POLYS and an
/// integer cell field `tag` (0 triangle, 1 Gamma edge, 2 Sigma edge).
void write_vtk(const Mesh& mesh, std::ostream& out);
void write_vtk(const Mesh& mesh, const std::string& path);

}  // namespace steklov
