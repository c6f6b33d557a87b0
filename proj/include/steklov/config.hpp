#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "steklov/geometry.hpp"

namespace steklov {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses a real number or a fraction such as "1/32".
double parse_real(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

struct SweepConfig {
  ProfileSpec profile{};
  std::vector<double> alphas{2.0, 1.0, 0.5};
  std::vector<double> eps_list{0.25, 0.125, 0.0625, 0.03125};
  int n_modes = 2;
  /// Subdivisions per period at the smallest eps; the column count is shared
  /// by every cell of the sweep and by the eps = 0 reference.
  int nx_per_period = 8;
  int rows = 64;
  double width = 1.0;
  double depth = 1.0;
  double tol = 1e-9;
  std::string output;
  std::uint64_t seed = 20240521;
  /// Off: the ms column is written as 0 so reruns are byte-identical.
  bool record_timing = true;
  /// 0: STEKLOV_THREADS, else hardware concurrency.
  int threads = 0;

  /// Throws ConfigError.
  void validate() const;
  double min_eps() const;
};

/// Applies one `key=value` setting. Keys: profile, amplitude, alphas, eps,
/// n_modes, nx_per_period, rows, width, depth, tol, out, seed, timing, threads.
void apply_setting(SweepConfig& config, const std::string& key, const std::string& value);

/// Flat key=value lines; '#' starts a comment.
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig load_sweep_config(const std::string& path);

/// STEKLOV_THREADS if set and positive, else hardware concurrency (>= 1).
int default_thread_count();

}  // namespace steklov
