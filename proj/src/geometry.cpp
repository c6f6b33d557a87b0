#include "steklov/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace steklov {

namespace {

// Gauss-Legendre, 5 points on [-1, 1].
constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
    0.5384693101056830910363144, 0.9061798459386639927976269};
constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561890875142640, 0.4786286704993664680412915,
    0.5688888888888888888888889, 0.4786286704993664680412915,
    0.2369268850561890875142640};

double frac(double t) {
  double f = t - std::floor(t);
  // t slightly below an integer can round up to exactly 1
  return f >= 1.0 ? 0.0 : f;
}

// Panels per smooth piece: one is exact for piecewise-constant slopes.
int panels_per_piece(const ProfileSpec& profile) {
  return profile.kind == ProfileKind::RaisedCosine ? 16 : 1;
}

// Piece boundaries of the profile within one period [0, 1].
std::vector<double> cell_breaks(const ProfileSpec& profile) {
  switch (profile.kind) {
    case ProfileKind::Zero:
      return {0.0, 1.0};
    case ProfileKind::TriangleWave:
    case ProfileKind::RaisedCosine:
      return {0.0, 0.5, 1.0};
  }
  return {0.0, 1.0};
}

}  // namespace

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::TriangleWave:
      return "triangle-wave";
    case ProfileKind::RaisedCosine:
      return "raised-cosine";
    case ProfileKind::Zero:
      return "zero";
  }
  return "unknown";
}

ProfileKind parse_profile_kind(std::string_view name) {
  if (name == "triangle-wave" || name == "triangle") return ProfileKind::TriangleWave;
  if (name == "raised-cosine" || name == "cosine") return ProfileKind::RaisedCosine;
  if (name == "zero" || name == "flat") return ProfileKind::Zero;
  throw std::invalid_argument("unknown profile kind '" + std::string(name) +
                              "' (expected triangle-wave, raised-cosine or zero)");
}

double ProfileSpec::max_value() const {
  return kind == ProfileKind::Zero ? 0.0 : 0.5 * amplitude;
}

double ProfileSpec::mean_value() const {
  return kind == ProfileKind::Zero ? 0.0 : 0.25 * amplitude;
}

double ProfileSpec::lipschitz_constant() const {
  switch (kind) {
    case ProfileKind::TriangleWave:
      return amplitude;
    case ProfileKind::RaisedCosine:
      return 0.5 * std::numbers::pi * amplitude;
    case ProfileKind::Zero:
      return 0.0;
  }
  return 0.0;
}

ProfileValue eval_profile(const ProfileSpec& profile, double t) {
  const double f = frac(t);
  switch (profile.kind) {
    case ProfileKind::TriangleWave:
      if (f <= 0.5) return {profile.amplitude * f, profile.amplitude};
      return {profile.amplitude * (1.0 - f), -profile.amplitude};
    case ProfileKind::RaisedCosine: {
      const double arg = 2.0 * std::numbers::pi * f;
      return {0.25 * profile.amplitude * (1.0 - std::cos(arg)),
              0.5 * std::numbers::pi * profile.amplitude * std::sin(arg)};
    }
    case ProfileKind::Zero:
      return {0.0, 0.0};
  }
  return {0.0, 0.0};
}

std::vector<double> profile_kinks(const ProfileSpec& profile) {
  if (profile.kind == ProfileKind::TriangleWave && profile.amplitude != 0.0)
    return {0.0, 0.5};
  return {};
}

double DomainSpec::amplitude() const {
  if (eps == 0.0) return 0.0;
  return std::pow(eps, alpha) * profile.max_value();
}

long DomainSpec::periods() const {
  if (eps == 0.0) return 0;
  return std::lround(width / eps);
}

bool DomainSpec::whole_periods() const {
  if (eps == 0.0) return true;
  const double ratio = width / eps;
  return std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio && std::round(ratio) >= 1.0;
}

DomainSpec DomainSpec::unperturbed() const {
  DomainSpec flat = *this;
  flat.eps = 0.0;
  return flat;
}

void DomainSpec::validate() const {
  if (!(width > 0.0)) throw std::invalid_argument("domain width must be positive");
  if (!(depth > 0.0)) throw std::invalid_argument("domain depth must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(eps >= 0.0)) throw std::invalid_argument("eps must be nonnegative");
  if (profile.amplitude < 0.0)
    throw std::invalid_argument("profile amplitude must be nonnegative");
  if (!(amplitude() < 0.5 * depth)) {
    std::ostringstream msg;
    msg << "perturbation amplitude eps^alpha*max(b) = " << amplitude()
        << " must stay below depth/2 = " << 0.5 * depth;
    throw std::invalid_argument(msg.str());
  }
}

ProfileValue g_eps_unchecked(const DomainSpec& domain, double x1) {
  if (domain.eps == 0.0) return {0.0, 0.0};
  const ProfileValue b = eval_profile(domain.profile, x1 / domain.eps);
  return {std::pow(domain.eps, domain.alpha) * b.value,
          std::pow(domain.eps, domain.alpha - 1.0) * b.slope};
}

ProfileValue g_eps(const DomainSpec& domain, double x1) {
  if (!(x1 >= 0.0 && x1 <= domain.width)) {
    std::ostringstream msg;
    msg << "x1 = " << x1 << " lies outside [0, " << domain.width << "]";
    throw std::domain_error(msg.str());
  }
  return g_eps_unchecked(domain, x1);
}

std::vector<double> top_breakpoints(const DomainSpec& domain) {
  std::vector<double> pts{0.0};
  if (domain.eps > 0.0) {
    const std::vector<double> cell = cell_breaks(domain.profile);
    const long first_period = 0;
    const long last_period = static_cast<long>(std::ceil(domain.width / domain.eps));
    for (long p = first_period; p <= last_period; ++p) {
      for (std::size_t i = 0; i + 1 < cell.size(); ++i) {
        const double x = (static_cast<double>(p) + cell[i]) * domain.eps;
        if (x > 0.0 && x < domain.width) pts.push_back(x);
      }
    }
  }
  pts.push_back(domain.width);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double gauss_composite(const std::function<double(double)>& f, double a, double b,
                       int panels) {
  const double step = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * step;
    const double mid = lo + 0.5 * step;
    double sum = 0.0;
    for (std::size_t q = 0; q < kGaussNodes.size(); ++q)
      sum += kGaussWeights[q] * f(mid + 0.5 * step * kGaussNodes[q]);
    total += 0.5 * step * sum;
  }
  return total;
}

double integrate_top(const DomainSpec& domain,
                     const std::function<double(double, double)>& f) {
  const std::vector<double> pts = top_breakpoints(domain);
  const int panels = domain.eps > 0.0 ? panels_per_piece(domain.profile) : 1;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i];
    const double b = pts[i + 1];
    // Slope sampled strictly inside the piece so kink conventions never leak in.
    total += gauss_composite(
        [&](double x) { return f(x, g_eps_unchecked(domain, x).slope); }, a, b, panels);
  }
  return total;
}

double c_b(const ProfileSpec& profile) {
  const std::vector<double> cell = cell_breaks(profile);
  const int panels = panels_per_piece(profile);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cell.size(); ++i) {
    total += gauss_composite(
        [&](double y) {
          const double s = eval_profile(profile, y).slope;
          return std::sqrt(1.0 + s * s);
        },
        cell[i], cell[i + 1], panels);
  }
  return total;
}

PerimeterResult exact_perimeter(const DomainSpec& domain) {
  PerimeterResult result;
  result.whole_periods = domain.whole_periods();
  if (!result.whole_periods) {
    std::ostringstream msg;
    msg << "w/eps = " << domain.width / domain.eps
        << " is not an integer; side heights use g(0) and g(w) separately";
    result.warning = msg.str();
  }
  result.top_length = integrate_top(
      domain, [](double, double slope) { return std::sqrt(1.0 + slope * slope); });
  const double left = domain.depth + g_eps_unchecked(domain, 0.0).value;
  const double right = domain.depth + g_eps_unchecked(domain, domain.width).value;
  result.value = domain.width + left + right + result.top_length;
  return result;
}

}  // namespace steklov
