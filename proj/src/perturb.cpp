#include "steklov/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace steklov {

JacobianCertificate jacobian_certificate(const DomainSpec& domain, double k_hat, int per_period,
                                         int per_layer) {
  JacobianCertificate cert;
  const double kappa = domain.amplitude();
  const double layer = k_hat * kappa;
  const long columns = std::max<long>(64, per_period * std::max<long>(1, domain.periods()));
  cert.min = 1.0;
  cert.max = -1.0;
  for (long i = 0; i < columns; ++i) {
    const double x1 = (static_cast<double>(i) + 0.5) * domain.width / static_cast<double>(columns);
    const double g = g_eps_unchecked(domain, x1).value;
    const double g_tilde = g - layer;
    for (int j = 0; j < per_layer; ++j) {
      const double frac = (j + 0.5) / per_layer;
      // Below the layer the map is the identity.
      const double below = -domain.depth + frac * (std::max(g_tilde, -domain.depth) + domain.depth);
      double jac = 1.0;
      if (below > -domain.depth) {
        cert.min = std::min(cert.min, jac);
        cert.max = std::max(cert.max, jac);
        ++cert.samples;
      }
      if (layer == 0.0) continue;
      const double x2 = g_tilde + frac * layer;
      if (x2 <= -domain.depth) continue;
      jac = 1.0 - 2.0 * g * (x2 - g_tilde) / (layer * layer);
      cert.min = std::min(cert.min, jac);
      cert.max = std::max(cert.max, jac);
      ++cert.samples;
    }
  }
  return cert;
}

ConnectingMap::ConnectingMap(const DomainSpec& domain, double k_hat)
    : domain_(domain), k_hat_(k_hat), kappa_(domain.amplitude()), k_eps_(k_hat * kappa_) {
  domain_.validate();
  if (!(k_hat > 4.0)) throw std::invalid_argument("connecting map needs k_hat > 4");
  if (!(k_eps_ < domain.depth)) {
    std::ostringstream msg;
    msg << "blend layer k_hat * kappa = " << k_eps_ << " reaches the bottom of the strip (depth "
        << domain.depth << ")";
    throw std::invalid_argument(msg.str());
  }
  certificate_ = jacobian_certificate(domain_, k_hat_);
}

double ConnectingMap::g_tilde(double x1) const {
  return g_eps_unchecked(domain_, x1).value - k_eps_;
}

double ConnectingMap::h(Point x) const {
  if (k_eps_ == 0.0) return 0.0;
  const double g = g_eps_unchecked(domain_, x.x1).value;
  const double gt = g - k_eps_;
  if (x.x2 <= gt) return 0.0;
  const double s = (x.x2 - gt) / k_eps_;
  return g * s * s;
}

double ConnectingMap::dh_dx2(Point x) const {
  if (k_eps_ == 0.0) return 0.0;
  const double g = g_eps_unchecked(domain_, x.x1).value;
  const double gt = g - k_eps_;
  if (x.x2 <= gt) return 0.0;
  return 2.0 * g * (x.x2 - gt) / (k_eps_ * k_eps_);
}

Point ConnectingMap::phi(Point x) const { return {x.x1, x.x2 - h(x)}; }

FeFunction apply_E(const FeFunction& u, std::shared_ptr<const Mesh> eps_mesh,
                   const ConnectingMap& map) {
  const PointLocator locator(u.mesh);
  Eigen::VectorXd v(static_cast<Eigen::Index>(eps_mesh->num_vertices()));
  for (std::size_t i = 0; i < eps_mesh->num_vertices(); ++i) {
    const Point target = map.phi(eps_mesh->vertices[i]);
    v[static_cast<Eigen::Index>(i)] = u.evaluate(locator.locate(target));
  }
  return FeFunction(std::move(eps_mesh), std::move(v));
}

LimitDescriptor::LimitDescriptor(const ProfileSpec& profile) : c_b(steklov::c_b(profile)) {}

BoundaryWeight LimitDescriptor::gamma() const {
  const double c = c_b;
  return [c](const Point&, EdgeTag tag) { return tag == EdgeTag::Gamma ? c : 1.0; };
}

Regime regime_for(double alpha) {
  if (std::abs(alpha - 1.0) <= 1e-12) return Regime::Homogenized;
  return alpha > 1.0 ? Regime::Stability : Regime::Degeneration;
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Stability:
      return "stability";
    case Regime::Homogenized:
      return "homogenized";
    case Regime::Degeneration:
      return "degeneration";
  }
  return "unknown";
}

double predicted_limit(double alpha, double mu0, double c_b) {
  switch (regime_for(alpha)) {
    case Regime::Stability:
      return mu0;
    case Regime::Homogenized:
      return mu0 / c_b;
    case Regime::Degeneration:
      return 0.0;
  }
  return 0.0;
}

namespace {

double h1_norm_of_difference(const FeFunction& restricted, const FeFunction& u, double sign) {
  FeFunction diff(u.mesh, sign * restricted.values - u.values);
  const NormReport r = fe_norms(diff, TagSet::all());
  return std::sqrt(r.h1_semi * r.h1_semi + r.l2 * r.l2);
}

}  // namespace

double h1_intersection_error(const FeFunction& u_eps, const FeFunction& u) {
  return h1_norm_of_difference(interpolate_onto(u_eps, u.mesh), u, 1.0);
}

double aligned_h1_intersection_error(const FeFunction& u_eps, const FeFunction& u) {
  const FeFunction restricted = interpolate_onto(u_eps, u.mesh);
  return std::min(h1_norm_of_difference(restricted, u, 1.0),
                  h1_norm_of_difference(restricted, u, -1.0));
}

double weak_l1_residual(const DomainSpec& domain, const std::function<double(double)>& phi,
                        double target_weight) {
  if (!(domain.eps > 0.0)) throw std::invalid_argument("weak_l1_residual needs eps > 0");
  return std::abs(integrate_top(domain, [&](double x1, double slope) {
    return (std::sqrt(1.0 + slope * slope) - target_weight) * phi(x1);
  }));
}

double sublevel_measure(const DomainSpec& domain, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("sublevel_measure needs t > 0");
  if (t < 1.0) return 0.0;
  if (domain.eps == 0.0) return domain.width;

  std::vector<double> pts = top_breakpoints(domain);
  if (domain.profile.kind == ProfileKind::RaisedCosine) {
    // |g'| = c |sin(2 pi y)| crosses sqrt(t^2 - 1) four times per period.
    const double c = std::pow(domain.eps, domain.alpha - 1.0) * 0.5 * std::numbers::pi *
                     domain.profile.amplitude;
    const double level = std::sqrt(t * t - 1.0);
    if (c > 0.0 && level < c) {
      const double a = std::asin(level / c) / (2.0 * std::numbers::pi);
      const long last = static_cast<long>(std::ceil(domain.width / domain.eps));
      for (long p = 0; p <= last; ++p) {
        for (double y : {a, 0.5 - a, 0.5 + a, 1.0 - a}) {
          const double x = (static_cast<double>(p) + y) * domain.eps;
          if (x > 0.0 && x < domain.width) pts.push_back(x);
        }
      }
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    }
  }
  double measure = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double mid = 0.5 * (pts[i] + pts[i + 1]);
    const double s = g_eps_unchecked(domain, mid).slope;
    if (std::sqrt(1.0 + s * s) <= t) measure += pts[i + 1] - pts[i];
  }
  return measure;
}

}  // namespace steklov
