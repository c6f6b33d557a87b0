#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace steklov {

enum class ProfileKind { TriangleWave, RaisedCosine, Zero };

std::string_view to_string(ProfileKind kind);
ProfileKind parse_profile_kind(std::string_view name);

/// Periodic oscillation profile b on the unit cell Y = (-1/2, 1/2).
///
/// triangle-wave:  b(t) = A * dist(t, Z), slope +-A
/// raised-cosine:  b(t) = A * (1 - cos 2 pi t) / 4
/// zero:           b = 0
///
/// Both non-trivial kinds have max b = A/2 and cell mean A/4.
struct ProfileSpec {
  ProfileKind kind = ProfileKind::TriangleWave;
  double amplitude = 1.0;

  double max_value() const;
  double mean_value() const;
  double lipschitz_constant() const;
};

struct ProfileValue {
  double value = 0.0;
  double slope = 0.0;
};

/// Evaluates b and b' at any real t (wraps by periodicity).
///
/// Triangle-wave kinks: the slope is +A on frac(t) in [0, 1/2] and -A on
/// (1/2, 1), i.e. the right limit at the zeros and the left limit at the
/// peaks.
ProfileValue eval_profile(const ProfileSpec& profile, double t);

/// Positions in [0, 1) where b' is discontinuous.
std::vector<double> profile_kinks(const ProfileSpec& profile);

/// Perturbed strip Omega_eps = {0 < x1 < w, -d < x2 < g_eps(x1)}.
struct DomainSpec {
  double width = 1.0;
  double depth = 1.0;
  double alpha = 1.0;
  double eps = 0.0;
  ProfileSpec profile{};

  /// eps^alpha * max b, i.e. ||g_eps||_inf.
  double amplitude() const;
  /// w / eps rounded, or 0 for eps == 0.
  long periods() const;
  bool whole_periods() const;
  DomainSpec unperturbed() const;

  /// Throws std::invalid_argument unless w, d, alpha > 0, eps >= 0 and
  /// eps^alpha * max b < d/2.
  void validate() const;
};

/// g_eps(x1) = eps^alpha b(x1/eps) and its slope. Throws std::domain_error
/// for x1 outside [0, w].
ProfileValue g_eps(const DomainSpec& domain, double x1);

/// Same as g_eps without the range check (used by quadrature and maps).
ProfileValue g_eps_unchecked(const DomainSpec& domain, double x1);

/// Sorted breakpoints of the top graph in [0, w] (endpoints and kinks).
std::vector<double> top_breakpoints(const DomainSpec& domain);

/// Composite 5-point Gauss-Legendre over [a, b] split into `panels` pieces.
double gauss_composite(const std::function<double(double)>& f, double a, double b,
                       int panels);

/// Integral over [0, w] of f(x1, g_eps'(x1)), split at every kink of g_eps.
double integrate_top(const DomainSpec& domain,
                     const std::function<double(double x1, double slope)>& f);

/// C_b = integral over Y of sqrt(1 + b'(y)^2).
double c_b(const ProfileSpec& profile);

struct PerimeterResult {
  double value = 0.0;
  double top_length = 0.0;
  bool whole_periods = true;
  std::string warning;
};

/// |boundary of Omega_eps| = w + (d + g(0)) + (d + g(w)) + top arc length.
PerimeterResult exact_perimeter(const DomainSpec& domain);

}  // namespace steklov
