#include "steklov/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace steklov {

namespace {

std::string trim(const std::string& s) {
  const auto begin = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
  const auto end = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); }).base();
  return begin < end ? std::string(begin, end) : std::string();
}

double parse_plain(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw ConfigError("not a number: '" + text + "'");
  return v;
}

int parse_int(const std::string& text) {
  const double v = parse_plain(trim(text));
  if (v != static_cast<int>(v)) throw ConfigError("not an integer: '" + text + "'");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "1" || t == "true" || t == "on" || t == "yes") return true;
  if (t == "0" || t == "false" || t == "off" || t == "no") return false;
  throw ConfigError("not a boolean: '" + text + "'");
}

}  // namespace

double parse_real(const std::string& text) {
  const std::string t = trim(text);
  const auto slash = t.find('/');
  if (slash == std::string::npos) return parse_plain(t);
  const double num = parse_plain(trim(t.substr(0, slash)));
  const double den = parse_plain(trim(t.substr(slash + 1)));
  if (den == 0.0) throw ConfigError("zero denominator in '" + text + "'");
  return num / den;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_real(item));
  }
  return out;
}

double SweepConfig::min_eps() const {
  return *std::min_element(eps_list.begin(), eps_list.end());
}

void SweepConfig::validate() const {
  if (alphas.empty()) throw ConfigError("alphas must not be empty");
  if (eps_list.empty()) throw ConfigError("eps list must not be empty");
  if (n_modes < 1) throw ConfigError("n_modes must be at least 1");
  if (rows < 1) throw ConfigError("rows must be at least 1");
  if (nx_per_period < 8 || nx_per_period % 2 != 0)
    throw ConfigError("nx_per_period must be even and at least 8");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (!(width > 0.0) || !(depth > 0.0)) throw ConfigError("width and depth must be positive");
  for (double a : alphas)
    if (!(a > 0.0)) throw ConfigError("every alpha must be positive");
  for (double e : eps_list) {
    DomainSpec probe{width, depth, 1.0, e, profile};
    if (!(e > 0.0) || !probe.whole_periods()) {
      std::ostringstream msg;
      msg << "eps = " << e << " must be positive with width/eps an integer";
      throw ConfigError(msg.str());
    }
  }
  // Every eps must divide the shared column count into whole half periods.
  const double columns = nx_per_period * width / min_eps();
  for (double e : eps_list) {
    const double per_half = columns / (2.0 * width / e);
    if (std::abs(per_half - std::round(per_half)) > 1e-9) {
      std::ostringstream msg;
      msg << "eps = " << e << " is not commensurate with the smallest eps " << min_eps();
      throw ConfigError(msg.str());
    }
  }
}

void apply_setting(SweepConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  try {
    if (key == "profile")
      c.profile.kind = parse_profile_kind(value);
    else if (key == "amplitude")
      c.profile.amplitude = parse_real(value);
    else if (key == "alphas" || key == "alpha")
      c.alphas = parse_real_list(value);
    else if (key == "eps" || key == "eps_list")
      c.eps_list = parse_real_list(value);
    else if (key == "n_modes")
      c.n_modes = parse_int(value);
    else if (key == "nx_per_period")
      c.nx_per_period = parse_int(value);
    else if (key == "rows")
      c.rows = parse_int(value);
    else if (key == "width")
      c.width = parse_real(value);
    else if (key == "depth")
      c.depth = parse_real(value);
    else if (key == "tol")
      c.tol = parse_real(value);
    else if (key == "out" || key == "output")
      c.output = value;
    else if (key == "seed")
      c.seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "timing" || key == "record_timing")
      c.record_timing = parse_bool(value);
    else if (key == "threads")
      c.threads = parse_int(value);
    else
      throw ConfigError("unknown configuration key '" + key + "'");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

SweepConfig parse_sweep_config(std::istream& in) {
  SweepConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
  }
  return config;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_sweep_config(in);
}

int default_thread_count() {
  if (const char* env = std::getenv("STEKLOV_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace steklov
