#pragma once

#include <string>

namespace steklov {

struct OracleValue {
  int index = 0;
  double value = 0.0;
  std::string derivation;
};

/// coth(x) = 1 + 2 / (e^{2x} - 1), stable for large x.
double stable_coth(double x);

/// Mixed problem on (0,w)x(-d,0) with u = 0 on the sides and bottom:
/// lambda_k = (k pi / w) coth(k pi d / w), eigenfunction
/// sin(k pi x1 / w) sinh(k pi (x2 + d) / w). Requires k >= 1.
double strip_mixed_eigenvalue(int k, double width = 1.0, double depth = 1.0);
OracleValue strip_mixed_oracle(int k, double width = 1.0, double depth = 1.0);

/// Steklov spectrum of the unit disk: 0, 1, 1, 2, 2, 3, 3, ...
double disk_eigenvalue(int n);
OracleValue disk_oracle(int n);

}  // namespace steklov
