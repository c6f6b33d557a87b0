#pragma once

#include <functional>
#include <memory>

#include "steklov/fem.hpp"
#include "steklov/geometry.hpp"

namespace steklov {

struct JacobianCertificate {
  double min = 1.0;
  double max = 1.0;
  long samples = 0;
};

/// Samples det(D Phi_eps) = 1 - dh/dx2 at interior points of Omega_eps:
/// `per_period` midpoints per period in x1 (at least 64 over W) times
/// `per_layer` midpoints across the blend layer, plus the same count below it.
JacobianCertificate jacobian_certificate(const DomainSpec& domain, double k_hat,
                                         int per_period = 64, int per_layer = 64);

/// Single-chart connecting map Phi_eps(x1, x2) = (x1, x2 - h_eps(x1, x2)) from
/// Omega_eps onto the flat strip Omega (g = 0). With
///   kappa = ||g_eps||_inf, k = k_hat kappa, g~ = g_eps - k,
/// h_eps vanishes below g~ and equals g_eps ((x2 - g~) / k)^2 above it.
class ConnectingMap {
 public:
  /// Throws std::invalid_argument for k_hat <= 4 or when the blend layer
  /// (thickness k_hat kappa) reaches the bottom of the strip.
  ConnectingMap(const DomainSpec& domain, double k_hat = 8.0);

  const DomainSpec& domain() const { return domain_; }
  double k_hat() const { return k_hat_; }
  double kappa() const { return kappa_; }
  double layer() const { return k_eps_; }
  const JacobianCertificate& certificate() const { return certificate_; }

  double g_tilde(double x1) const;
  double h(Point x) const;
  double dh_dx2(Point x) const;
  Point phi(Point x) const;

 private:
  DomainSpec domain_;
  double k_hat_;
  double kappa_;
  double k_eps_;
  JacobianCertificate certificate_;
};

/// (E_eps u)(x) = u(Phi_eps(x)) at every vertex of the Omega_eps mesh.
FeFunction apply_E(const FeFunction& u, std::shared_ptr<const Mesh> eps_mesh,
                   const ConnectingMap& map);

/// Boundary weight gamma: C_b on Gamma, 1 on Sigma.
struct LimitDescriptor {
  double c_b = 1.0;

  explicit LimitDescriptor(const ProfileSpec& profile);
  BoundaryWeight gamma() const;
};

enum class Regime { Stability, Homogenized, Degeneration };

Regime regime_for(double alpha);
const char* to_string(Regime r);

/// mu0 for alpha > 1, mu0 / C_b for alpha = 1, 0 for alpha < 1.
double predicted_limit(double alpha, double mu0, double c_b);

/// Full H^1 norm over Omega of (u_eps restricted to Omega) - u. Requires
/// Omega within Omega_eps (g_eps >= 0).
double h1_intersection_error(const FeFunction& u_eps, const FeFunction& u);

/// min over s = +-1 of h1_intersection_error(s u_eps, u).
double aligned_h1_intersection_error(const FeFunction& u_eps, const FeFunction& u);

/// | integral_W sqrt(1 + g_eps'^2) phi - target integral_W phi |.
double weak_l1_residual(const DomainSpec& domain, const std::function<double(double)>& phi,
                        double target_weight);

/// Measure of {x1 in W : sqrt(1 + g_eps'(x1)^2) <= t}; exact for the built-in
/// profiles.
double sublevel_measure(const DomainSpec& domain, double t);

}  // namespace steklov
