#include "steklov/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace steklov {

namespace {

double cross(Point o, Point a, Point b) {
  return (a.x1 - o.x1) * (b.x2 - o.x2) - (a.x2 - o.x2) * (b.x1 - o.x1);
}

double distance(Point a, Point b) { return std::hypot(b.x1 - a.x1, b.x2 - a.x2); }

double max_edge_length(const Mesh& mesh) {
  double h = 0.0;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k)
      h = std::max(h, distance(mesh.vertices[t[k]], mesh.vertices[t[(k + 1) % 3]]));
  }
  return h;
}

void check_orientation(const Mesh& mesh) {
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const double area = mesh.signed_area(t);
    if (!(area > 0.0)) throw DegenerateTriangleError(t, area);
  }
}

std::string describe(Point p) {
  std::ostringstream s;
  s.precision(17);
  s << "(" << p.x1 << ", " << p.x2 << ")";
  return s.str();
}

}  // namespace

double Mesh::signed_area(std::size_t t) const {
  const auto& tri = triangles[t];
  return 0.5 * cross(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
}

double Mesh::total_area() const {
  double total = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) total += signed_area(t);
  return total;
}

double Mesh::edge_length(const BoundaryEdge& e) const {
  return distance(vertices[e.v[0]], vertices[e.v[1]]);
}

double Mesh::boundary_length(TagSet tags) const {
  double total = 0.0;
  for (const auto& e : boundary_edges)
    if (tags.contains(e.tag)) total += edge_length(e);
  return total;
}

std::vector<bool> Mesh::boundary_vertices(TagSet tags) const {
  std::vector<bool> mask(vertices.size(), false);
  for (const auto& e : boundary_edges) {
    if (!tags.contains(e.tag)) continue;
    mask[e.v[0]] = true;
    mask[e.v[1]] = true;
  }
  return mask;
}

double Mesh::max_aspect_ratio() const {
  double worst = 1.0;
  for (const auto& t : triangles) {
    double lo = std::numeric_limits<double>::max();
    double hi = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double l = distance(vertices[t[k]], vertices[t[(k + 1) % 3]]);
      lo = std::min(lo, l);
      hi = std::max(hi, l);
    }
    worst = std::max(worst, hi / lo);
  }
  return worst;
}

DegenerateTriangleError::DegenerateTriangleError(std::size_t index, double area)
    : MeshError("degenerate or inverted triangle " + std::to_string(index) +
                " (signed area " + std::to_string(area) + ")"),
      index_(index) {}

PointNotFoundError::PointNotFoundError(Point p)
    : MeshError("point " + describe(p) + " is not inside any triangle"), point_(p) {}

MeshResolution MeshResolution::for_domain(const DomainSpec& domain, int per_period,
                                          int rows) {
  if (domain.eps == 0.0) return {per_period, rows};
  return {static_cast<int>(per_period * domain.periods()), rows};
}

void check_resolution(const DomainSpec& domain, const MeshResolution& res) {
  if (res.nx < 1 || res.ny < 1)
    throw MeshError("mesh resolution needs nx >= 1 and ny >= 1");
  if (domain.eps == 0.0) return;
  if (!domain.whole_periods()) {
    std::ostringstream msg;
    msg << "w/eps = " << domain.width / domain.eps
        << " must be an integer for a kink-resolving strip mesh";
    throw MeshError(msg.str());
  }
  const long periods = domain.periods();
  if (res.nx % (2 * periods) != 0 || res.nx < 8 * periods) {
    std::ostringstream msg;
    msg << "nx = " << res.nx << " does not resolve the oscillation: nx must be a multiple of "
        << 2 * periods << " and at least " << 8 * periods << " (8 per period)";
    throw MeshError(msg.str());
  }
}

Mesh build_strip_mesh(const DomainSpec& domain, const MeshResolution& res) {
  domain.validate();
  check_resolution(domain, res);

  const int nx = res.nx;
  const int ny = res.ny;
  const double w = domain.width;
  const double d = domain.depth;
  auto index = [nx](int i, int j) { return j * (nx + 1) + i; };

  Mesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  std::vector<double> top(nx + 1);
  for (int i = 0; i <= nx; ++i) {
    const double x1 = (i == nx) ? w : w * i / nx;
    top[i] = g_eps_unchecked(domain, x1).value;
  }
  for (int j = 0; j <= ny; ++j) {
    const double y = (j == ny) ? 0.0 : -d + d * j / ny;
    for (int i = 0; i <= nx; ++i) {
      const double x1 = (i == nx) ? w : w * i / nx;
      // j == ny lands exactly on the graph; j == 0 stays at -d.
      double x2;
      if (j == ny)
        x2 = top[i];
      else if (j == 0)
        x2 = -d;
      else
        x2 = y + (1.0 + y / d) * top[i];
      mesh.vertices.push_back({x1, x2});
    }
  }

  mesh.triangles.reserve(2 * static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = index(i, j), v10 = index(i + 1, j);
      const int v11 = index(i + 1, j + 1), v01 = index(i, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }

  // Counter-clockwise loop: bottom, right side, top (Gamma), left side.
  for (int i = 0; i < nx; ++i)
    mesh.boundary_edges.push_back({{index(i, 0), index(i + 1, 0)}, EdgeTag::Sigma});
  for (int j = 0; j < ny; ++j)
    mesh.boundary_edges.push_back({{index(nx, j), index(nx, j + 1)}, EdgeTag::Sigma});
  for (int i = nx; i > 0; --i)
    mesh.boundary_edges.push_back({{index(i, ny), index(i - 1, ny)}, EdgeTag::Gamma});
  for (int j = ny; j > 0; --j)
    mesh.boundary_edges.push_back({{index(0, j), index(0, j - 1)}, EdgeTag::Sigma});

  check_orientation(mesh);
  mesh.h = max_edge_length(mesh);
  return mesh;
}

Mesh build_disk_mesh(int n_rings, int n_sectors) {
  if (n_rings < 2) throw MeshError("disk mesh needs n_rings >= 2");
  if (n_sectors < 8) throw MeshError("disk mesh needs n_sectors >= 8");

  Mesh mesh;
  mesh.vertices.push_back({0.0, 0.0});
  for (int r = 1; r <= n_rings; ++r) {
    const double radius = static_cast<double>(r) / n_rings;
    for (int s = 0; s < n_sectors; ++s) {
      const double theta = 2.0 * std::numbers::pi * s / n_sectors;
      mesh.vertices.push_back({radius * std::cos(theta), radius * std::sin(theta)});
    }
  }
  auto ring = [n_sectors](int r, int s) { return 1 + (r - 1) * n_sectors + (s % n_sectors); };

  for (int s = 0; s < n_sectors; ++s) mesh.triangles.push_back({0, ring(1, s), ring(1, s + 1)});
  for (int r = 1; r < n_rings; ++r) {
    for (int s = 0; s < n_sectors; ++s) {
      const int a = ring(r, s), b = ring(r + 1, s), c = ring(r + 1, s + 1), e = ring(r, s + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, e});
    }
  }
  for (int s = 0; s < n_sectors; ++s)
    mesh.boundary_edges.push_back({{ring(n_rings, s), ring(n_rings, s + 1)}, EdgeTag::Gamma});

  check_orientation(mesh);
  mesh.h = max_edge_length(mesh);
  return mesh;
}

PointLocator::PointLocator(std::shared_ptr<const Mesh> mesh) : mesh_(std::move(mesh)) {
  const Mesh& m = *mesh_;
  tol_ = 1e-12 * m.h;
  double xmax = -std::numeric_limits<double>::max();
  double ymax = xmax;
  xmin_ = ymin_ = std::numeric_limits<double>::max();
  for (const auto& p : m.vertices) {
    xmin_ = std::min(xmin_, p.x1);
    ymin_ = std::min(ymin_, p.x2);
    xmax = std::max(xmax, p.x1);
    ymax = std::max(ymax, p.x2);
  }
  const double lx = std::max(xmax - xmin_, 1e-300);
  const double ly = std::max(ymax - ymin_, 1e-300);
  const double target = std::max(1.0, std::sqrt(static_cast<double>(m.triangles.size()) / 2.0));
  const double scale = std::sqrt(lx / ly);
  bx_ = std::max(1, static_cast<int>(std::ceil(target * scale)));
  by_ = std::max(1, static_cast<int>(std::ceil(target / scale)));
  dx_ = lx / bx_;
  dy_ = ly / by_;

  auto bucket_range = [&](const std::array<int, 3>& tri, int& i0, int& i1, int& j0, int& j1) {
    double lo_x = std::numeric_limits<double>::max(), hi_x = -lo_x;
    double lo_y = lo_x, hi_y = -lo_x;
    for (int v : tri) {
      lo_x = std::min(lo_x, m.vertices[v].x1);
      hi_x = std::max(hi_x, m.vertices[v].x1);
      lo_y = std::min(lo_y, m.vertices[v].x2);
      hi_y = std::max(hi_y, m.vertices[v].x2);
    }
    i0 = std::clamp(static_cast<int>(std::floor((lo_x - tol_ - xmin_) / dx_)), 0, bx_ - 1);
    i1 = std::clamp(static_cast<int>(std::floor((hi_x + tol_ - xmin_) / dx_)), 0, bx_ - 1);
    j0 = std::clamp(static_cast<int>(std::floor((lo_y - tol_ - ymin_) / dy_)), 0, by_ - 1);
    j1 = std::clamp(static_cast<int>(std::floor((hi_y + tol_ - ymin_) / dy_)), 0, by_ - 1);
  };

  const std::size_t nb = static_cast<std::size_t>(bx_) * by_;
  std::vector<int> count(nb + 1, 0);
  for (const auto& tri : m.triangles) {
    int i0, i1, j0, j1;
    bucket_range(tri, i0, i1, j0, j1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) ++count[static_cast<std::size_t>(j) * bx_ + i + 1];
  }
  for (std::size_t b = 0; b < nb; ++b) count[b + 1] += count[b];
  bucket_start_ = count;
  bucket_items_.assign(static_cast<std::size_t>(count[nb]), 0);
  std::vector<int> fill(count.begin(), count.end() - 1);
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    int i0, i1, j0, j1;
    bucket_range(m.triangles[t], i0, i1, j0, j1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i)
        bucket_items_[fill[static_cast<std::size_t>(j) * bx_ + i]++] = static_cast<int>(t);
  }
}

std::optional<Location> PointLocator::try_locate(Point p) const {
  const Mesh& m = *mesh_;
  const int i = static_cast<int>(std::floor((p.x1 - xmin_) / dx_));
  const int j = static_cast<int>(std::floor((p.x2 - ymin_) / dy_));
  // Points on the far bounding-box edge fall one bucket past the grid.
  const bool near_x = p.x1 >= xmin_ - tol_ && p.x1 <= xmin_ + bx_ * dx_ + tol_;
  const bool near_y = p.x2 >= ymin_ - tol_ && p.x2 <= ymin_ + by_ * dy_ + tol_;
  if (!near_x || !near_y) return std::nullopt;
  const std::size_t bucket =
      static_cast<std::size_t>(std::clamp(j, 0, by_ - 1)) * bx_ + std::clamp(i, 0, bx_ - 1);

  std::optional<Location> best;
  double best_margin = -std::numeric_limits<double>::max();
  for (int k = bucket_start_[bucket]; k < bucket_start_[bucket + 1]; ++k) {
    const std::size_t t = static_cast<std::size_t>(bucket_items_[k]);
    const auto& tri = m.triangles[t];
    const Point a = m.vertices[tri[0]], b = m.vertices[tri[1]], c = m.vertices[tri[2]];
    const double area2 = cross(a, b, c);
    const std::array<double, 3> signed_dist = {cross(p, b, c) / distance(b, c),
                                               cross(p, c, a) / distance(c, a),
                                               cross(p, a, b) / distance(a, b)};
    const double margin = std::min({signed_dist[0], signed_dist[1], signed_dist[2]});
    if (margin < -tol_ || margin <= best_margin) continue;
    best_margin = margin;
    Location loc;
    loc.triangle = t;
    loc.bary = {cross(p, b, c) / area2, cross(p, c, a) / area2, 0.0};
    loc.bary[2] = cross(p, a, b) / area2;
    best = loc;
  }
  return best;
}

Location PointLocator::locate(Point p) const {
  auto loc = try_locate(p);
  if (!loc) throw PointNotFoundError(p);
  return *loc;
}

Location locate_point(const std::shared_ptr<const Mesh>& mesh, Point p) {
  return PointLocator(mesh).locate(p);
}

void write_vtk(const Mesh& mesh, std::ostream& out) {
  out.precision(17);
  out << "# vtk DataFile Version 3.0\n"
      << "steklov mesh\n"
      << "ASCII\n"
      << "DATASET POLYDATA\n";
  out << "POINTS " << mesh.vertices.size() << " double\n";
  for (const auto& p : mesh.vertices) out << p.x1 << ' ' << p.x2 << " 0\n";
  const std::size_t ne = mesh.boundary_edges.size();
  const std::size_t nt = mesh.triangles.size();
  out << "LINES " << ne << ' ' << 3 * ne << '\n';
  for (const auto& e : mesh.boundary_edges) out << "2 " << e.v[0] << ' ' << e.v[1] << '\n';
  out << "POLYS " << nt << ' ' << 4 * nt << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  // VTK orders cell data as verts, lines, polys.
  out << "CELL_DATA " << ne + nt << '\n' << "SCALARS tag int 1\nLOOKUP_TABLE default\n";
  for (const auto& e : mesh.boundary_edges) out << (e.tag == EdgeTag::Gamma ? 1 : 2) << '\n';
  for (std::size_t t = 0; t < nt; ++t) out << "0\n";
}

void write_vtk(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_vtk(mesh, out);
}

}  // namespace steklov
