#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "steklov/config.hpp"
#include "steklov/mesh.hpp"

namespace steklov {

inline constexpr const char* kSweepCsvHeader =
    "alpha,eps,n,mu_eps,mu0,c_b,predicted,ratio,residual,dofs,ms";

struct SweepRecord {
  double alpha = 0.0;
  double eps = 0.0;
  int n = 0;
  double mu_eps = 0.0;
  double mu0 = 0.0;
  double c_b = 1.0;
  double predicted = 0.0;
  /// Absent in the degeneration regime (limit 0).
  std::optional<double> ratio;
  double residual = 0.0;
  int dofs = 0;
  double ms = 0.0;
  /// Reference rows (eps = 0) carry alpha = 0.
  bool reference = false;
  /// Set when the (alpha, eps) cell failed; numeric fields are then NaN.
  std::optional<std::string> error;
};

/// alpha < 1 rows: is mu_eps strictly decreasing as eps decreases?
struct MonotonicityVerdict {
  double alpha = 0.0;
  int n = 0;
  bool decreasing = false;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<MonotonicityVerdict> verdicts;
  MeshResolution resolution;
};

/// Shared column count: nx_per_period subdivisions per period at min eps.
MeshResolution sweep_resolution(const SweepConfig& config);

/// Reference rows first (eps = 0), then alpha outer, eps inner, n innermost.
/// Cells run on up to `threads` workers; row order does not depend on
/// completion order. A failing cell yields one error row and the run goes on.
SweepResult run_sweep(const SweepConfig& config);

std::string format_real(double v);
void write_csv(const SweepResult& result, std::ostream& out, bool record_timing = true);

/// Connecting-map norm diagnostics for one (alpha, eps) cell.
struct EmapRow {
  double alpha = 0.0;
  double eps = 0.0;
  double norm_eps = 0.0;    // ||E_eps u||_eps on Omega_eps
  double norm_0 = 0.0;      // ||u||_0 on Omega
  double norm_gamma = 0.0;  // ||u||_gamma on Omega
  double gap_0 = 0.0;       // | norm_eps - norm_0 | / norm_0
  double gap_gamma = 0.0;   // | norm_eps - norm_gamma | / norm_gamma
  double jac_min = 1.0;
  double jac_max = 1.0;
  int nx = 0;
  int ny = 0;
};

/// Grid spacing <= eps^2 in both directions, columns kink-resolving.
MeshResolution emap_resolution(const DomainSpec& domain);

EmapRow emap_diagnostic(const DomainSpec& domain, double k_hat,
                        const std::function<double(const Point&)>& u);
EmapRow emap_diagnostic(const DomainSpec& domain, double k_hat,
                        const std::function<double(const Point&)>& u,
                        const MeshResolution& res);

inline constexpr const char* kEmapCsvHeader =
    "alpha,eps,norm_eps,norm_0,norm_gamma,gap_0,gap_gamma,jac_min,jac_max,nx,ny";
void write_emap_row(const EmapRow& row, std::ostream& out);

}  // namespace steklov
