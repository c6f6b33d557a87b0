#include "steklov/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace steklov {

double stable_coth(double x) { return 1.0 + 2.0 / std::expm1(2.0 * x); }

double strip_mixed_eigenvalue(int k, double width, double depth) {
  if (k < 1) throw std::invalid_argument("strip oracle index starts at k = 1");
  const double wave = k * std::numbers::pi / width;
  return wave * stable_coth(wave * depth);
}

OracleValue strip_mixed_oracle(int k, double width, double depth) {
  return {k, strip_mixed_eigenvalue(k, width, depth), "separation of variables, sin x sinh"};
}

double disk_eigenvalue(int n) {
  if (n < 0) throw std::invalid_argument("disk oracle index starts at n = 0");
  return static_cast<double>((n + 1) / 2);
}

OracleValue disk_oracle(int n) {
  return {n, disk_eigenvalue(n), "polar separation, r^k cos/sin k theta"};
}

}  // namespace steklov
