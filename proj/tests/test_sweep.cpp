#include "doctest.h"

#include <cmath>
#include <sstream>
#include <string>

#include "steklov/sweep.hpp"

using namespace steklov;

namespace {

SweepConfig small_config() {
  SweepConfig c;
  c.eps_list = {0.25, 0.125};
  c.n_modes = 2;
  c.rows = 16;
  c.record_timing = false;
  return c;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char ch : s) n += ch == '\n';
  return n;
}

}  // namespace

TEST_CASE("sweep row layout") {
  const SweepConfig c = small_config();
  const SweepResult r = run_sweep(c);
  CHECK(r.resolution.nx == 64);
  REQUIRE(r.records.size() == 2 + 3 * 2 * 2);
  CHECK(r.records[0].reference);
  CHECK(r.records[0].alpha == 0.0);
  CHECK(r.records[0].eps == 0.0);
  CHECK(r.records[1].n == 2);
  CHECK(r.records[2].alpha == 2.0);
  CHECK(r.records[2].eps == 0.25);
  CHECK(r.records[3].n == 2);
  CHECK(r.records[4].eps == 0.125);
  CHECK(r.records.back().alpha == 0.5);
  for (const auto& rec : r.records) {
    CHECK(rec.mu_eps > 0.0);
    CHECK(rec.c_b == doctest::Approx(std::sqrt(2.0)));
    CHECK_FALSE(rec.error.has_value());
    if (rec.reference) continue;
    if (rec.alpha == 2.0) CHECK(rec.predicted == rec.mu0);
    if (rec.alpha == 1.0) CHECK(rec.predicted == doctest::Approx(rec.mu0 / std::sqrt(2.0)));
    if (rec.alpha == 0.5) {
      CHECK(rec.predicted == 0.0);
      CHECK_FALSE(rec.ratio.has_value());
    } else {
      REQUIRE(rec.ratio.has_value());
      CHECK(*rec.ratio == doctest::Approx(rec.mu_eps / rec.predicted));
    }
  }
  REQUIRE(r.verdicts.size() == 2);
  CHECK(r.verdicts[0].alpha == 0.5);
  CHECK(r.verdicts[0].decreasing);
}

TEST_CASE("default grid has 24 data rows and 2 reference rows") {
  SweepConfig c;
  c.rows = 4;
  c.nx_per_period = 8;
  const SweepResult r = run_sweep(c);
  int reference = 0;
  for (const auto& rec : r.records) reference += rec.reference;
  CHECK(reference == 2);
  CHECK(r.records.size() == 26);
}

TEST_CASE("sweep CSV is byte identical across reruns and thread counts") {
  SweepConfig c = small_config();
  c.threads = 1;
  std::ostringstream a, b;
  write_csv(run_sweep(c), a, false);
  c.threads = 3;
  write_csv(run_sweep(c), b, false);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind(std::string(kSweepCsvHeader) + "\n", 0) == 0);
  CHECK(count_lines(a.str()) == 1 + 14);
}

TEST_CASE("CSV fields round-trip") {
  const SweepResult r = run_sweep(small_config());
  std::ostringstream out;
  write_csv(r, out, false);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  std::getline(in, line);
  std::istringstream fields(line);
  std::string f;
  std::vector<std::string> cols;
  while (std::getline(fields, f, ',')) cols.push_back(f);
  REQUIRE(cols.size() == 11);
  CHECK(std::stod(cols[3]) == r.records[1].mu_eps);
  CHECK(cols[10] == "0");
}

TEST_CASE("format_real") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(2.0) == "2");
  CHECK(format_real(NAN) == "nan");
  CHECK(std::stod(format_real(M_PI)) == M_PI);
}

TEST_CASE("degeneration row without a ratio leaves the column empty") {
  SweepConfig c = small_config();
  c.alphas = {0.5};
  c.n_modes = 1;
  std::ostringstream out;
  write_csv(run_sweep(c), out, false);
  CHECK(out.str().find(",0,,") != std::string::npos);
}

TEST_CASE("failing cell becomes an error row") {
  SweepConfig c = small_config();
  c.alphas = {0.5};
  c.eps_list = {0.5, 0.25};
  c.profile.amplitude = 1.8;
  c.n_modes = 1;
  const SweepResult r = run_sweep(c);
  REQUIRE(r.records.size() == 3);
  CHECK(r.records[1].error.has_value());
  CHECK(r.records[1].n == 0);
  CHECK(std::isnan(r.records[1].mu_eps));
  CHECK_FALSE(r.records[2].error.has_value());
  std::ostringstream out;
  write_csv(r, out, false);
  CHECK(out.str().find("nan") != std::string::npos);
}

TEST_CASE("emap resolution follows the eps squared rule") {
  const DomainSpec d{1.0, 1.0, 2.0, 0.125, {}};
  const MeshResolution res = emap_resolution(d);
  CHECK(res.nx == 64);
  CHECK(res.ny == 64);
  CHECK_NOTHROW(check_resolution(d, res));
  CHECK(emap_resolution(DomainSpec{1.0, 1.0, 2.0, 0.25, {}}.unperturbed()).nx == 64);
}

TEST_CASE("emap diagnostic row") {
  const DomainSpec d{1.0, 1.0, 2.0, 0.25, {}};
  const EmapRow row = emap_diagnostic(d, 8.0, [](const Point& p) { return p.x1 + p.x2; });
  CHECK(row.gap_0 < 0.01);
  CHECK(row.norm_0 == doctest::Approx(std::sqrt(10.0 / 3)).epsilon(1e-12));
  CHECK(row.jac_min > 0.75);
  std::ostringstream out;
  write_emap_row(row, out);
  CHECK(count_lines(out.str()) == 1);
}
