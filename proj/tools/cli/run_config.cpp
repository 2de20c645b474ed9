#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "optomech/error.hpp"
#include "optomech/model_core.hpp"

namespace optomech::cli {

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::Config, what); }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, std::string_view key) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    config_error("'" + std::string(key) + "': not a finite number: '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view text, std::string_view key) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    config_error("'" + std::string(key) + "': not a non-negative integer: '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view text, std::string_view key) {
  text = trim(text);
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  config_error("'" + std::string(key) + "': expected true or false");
}

const std::set<std::string, std::less<>> kSystemOnly = {
    "omega1",    "omega2",    "g1",       "g2",       "alpha1_re", "alpha1_im",
    "alpha2_re", "alpha2_im", "beta_re",  "beta_im"};
const std::set<std::string, std::less<>> kLinearizedOnly = {"Omega1", "Omega2", "G1", "G2", "lambda"};
const std::set<std::string, std::less<>> kShared = {"omega_m", "G_cross", "gamma_c1",
                                                    "gamma_c2", "gamma_m", "T_dim"};
const std::set<std::string, std::less<>> kRunKeys = {
    "sweep", "grid", "seed", "trajectories", "steps", "segment", "overlap",
    "dt",    "band", "decimation", "trajectory", "allow_unstable"};

void set_run_key(RunConfig& cfg, std::string_view key, std::string_view value) {
  if (key == "sweep") {
    cfg.sweep = parse_sweep(value);
  } else if (key == "grid") {
    cfg.grid = parse_grid(value);
  } else if (key == "seed") {
    cfg.seed = parse_u64(value, key);
  } else if (key == "trajectories") {
    cfg.trajectories = parse_u64(value, key);
  } else if (key == "steps") {
    cfg.steps = parse_u64(value, key);
  } else if (key == "segment") {
    cfg.segment = parse_u64(value, key);
  } else if (key == "overlap") {
    cfg.overlap = parse_double(value, key);
  } else if (key == "dt") {
    cfg.dt = parse_double(value, key);
  } else if (key == "band") {
    cfg.band = parse_double(value, key);
  } else if (key == "decimation") {
    cfg.decimation = parse_u64(value, key);
  } else if (key == "trajectory") {
    cfg.write_trajectory = parse_bool(value, key);
  } else if (key == "allow_unstable") {
    cfg.allow_unstable = parse_bool(value, key);
  }
}

void set_param_key(RunConfig& cfg, std::string_view key, double v) {
  SystemParams& s = cfg.system;
  LinearizedParams& l = cfg.params;
  MeanFields& m = cfg.mean_fields;
  if (key == "omega1") s.omega1 = v;
  else if (key == "omega2") s.omega2 = v;
  else if (key == "g1") s.g1 = v;
  else if (key == "g2") s.g2 = v;
  else if (key == "alpha1_re") m.alpha1.real(v);
  else if (key == "alpha1_im") m.alpha1.imag(v);
  else if (key == "alpha2_re") m.alpha2.real(v);
  else if (key == "alpha2_im") m.alpha2.imag(v);
  else if (key == "beta_re") m.beta_mf.real(v);
  else if (key == "beta_im") m.beta_mf.imag(v);
  else if (key == "Omega1") l.Omega1 = v;
  else if (key == "Omega2") l.Omega2 = v;
  else if (key == "G1") l.G1 = v;
  else if (key == "G2") l.G2 = v;
  else if (key == "lambda") l.lambda = v;
  else if (key == "omega_m") s.omega_m = l.omega_m = v;
  else if (key == "G_cross") s.G_cross = l.G_cross = v;
  else if (key == "gamma_c1") s.gamma_c1 = l.gamma_c1 = v;
  else if (key == "gamma_c2") s.gamma_c2 = l.gamma_c2 = v;
  else if (key == "gamma_m") s.gamma_m = l.gamma_m = v;
  else if (key == "T_dim") s.T_dim = l.T_dim = v;
}

void apply_pairs(const std::vector<std::pair<std::string, std::string>>& pairs, RunConfig& cfg) {
  std::set<std::string, std::less<>> seen;
  bool system = false, linearized = false;
  for (const auto& [key, value] : pairs) {
    if (!seen.insert(key).second) config_error("duplicate key '" + key + "'");
    if (kSystemOnly.count(key)) system = true;
    else if (kLinearizedOnly.count(key)) linearized = true;
    else if (!kShared.count(key) && !kRunKeys.count(key)) config_error("unknown key '" + key + "'");
  }
  if (system && linearized) {
    config_error("system keys (omega1, g1, ...) and linearized keys (Omega1, G1, ...) are mixed");
  }

  RunConfig next = cfg;
  next.form = system ? ParamForm::System : ParamForm::Linearized;
  next.system = SystemParams{};
  next.mean_fields = MeanFields{};
  next.params = LinearizedParams{};
  for (const auto& [key, value] : pairs) {
    if (kRunKeys.count(key)) set_run_key(next, key, value);
    else set_param_key(next, key, parse_double(value, key));
  }
  cfg = std::move(next);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> GridSpec::points() const {
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = start;
    return g;
  }
  const double step = (stop - start) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = start + step * static_cast<double>(i);
  if (n > 1) g[n - 1] = stop;
  return g;
}

std::string GridSpec::to_string() const {
  return format_double(start) + ":" + format_double(stop) + ":" + std::to_string(n);
}

std::string SweepSpec::to_string() const {
  return std::string(optomech::to_string(axis)) + "=" + grid.to_string();
}

GridSpec parse_grid(std::string_view text) {
  text = trim(text);
  const auto a = text.find(':');
  const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
  if (a == std::string_view::npos || b == std::string_view::npos) {
    config_error("grid '" + std::string(text) + "' is not start:stop:n");
  }
  GridSpec g;
  g.start = parse_double(text.substr(0, a), "grid start");
  g.stop = parse_double(text.substr(a + 1, b - a - 1), "grid stop");
  g.n = parse_u64(text.substr(b + 1), "grid n");
  if (g.n == 0) config_error("grid '" + std::string(text) + "' is empty");
  if (g.n > 1 && !(g.stop > g.start)) {
    config_error("grid '" + std::string(text) + "' is not strictly increasing");
  }
  return g;
}

SweepSpec parse_sweep(std::string_view text) {
  text = trim(text);
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) config_error("sweep '" + std::string(text) + "' is not axis=start:stop:n");
  SweepSpec s;
  try {
    s.axis = parse_axis(trim(text.substr(0, eq)));
  } catch (const Error& e) {
    config_error(e.what());
  }
  s.grid = parse_grid(text.substr(eq + 1));
  return s;
}

void apply_config_text(std::string_view text, RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      config_error("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) config_error("line " + std::to_string(line_no) + ": empty key");
    pairs.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  apply_pairs(pairs, cfg);
}

void apply_config_file(const std::filesystem::path& path, RunConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot read config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  cfg.source = "config:" + path.string();

  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      config_error("'" + path.string() + "': " + e.what());
    }
    if (!j.contains("config") || !j["config"].is_object()) {
      config_error("'" + path.string() + "': JSON has no \"config\" object");
    }
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& [key, value] : j["config"].items()) {
      if (!value.is_string()) config_error("'" + key + "': sidecar config values must be strings");
      pairs.emplace_back(key, value.get<std::string>());
    }
    apply_pairs(pairs, cfg);
    return;
  }
  apply_config_text(text, cfg);
}

void resolve_params(RunConfig& cfg) {
  if (cfg.form != ParamForm::System) return;
  try {
    cfg.params = linearize(cfg.system, cfg.mean_fields);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) config_error(e.what());
    throw;
  }
}

std::map<std::string, std::string> RunConfig::to_keys() const {
  std::map<std::string, std::string> k;
  auto put = [&](const char* key, double v) { k[key] = format_double(v); };
  if (form == ParamForm::System) {
    put("omega1", system.omega1);
    put("omega2", system.omega2);
    put("omega_m", system.omega_m);
    put("g1", system.g1);
    put("g2", system.g2);
    put("G_cross", system.G_cross);
    put("gamma_c1", system.gamma_c1);
    put("gamma_c2", system.gamma_c2);
    put("gamma_m", system.gamma_m);
    put("T_dim", system.T_dim);
    put("alpha1_re", mean_fields.alpha1.real());
    put("alpha1_im", mean_fields.alpha1.imag());
    put("alpha2_re", mean_fields.alpha2.real());
    put("alpha2_im", mean_fields.alpha2.imag());
    put("beta_re", mean_fields.beta_mf.real());
    put("beta_im", mean_fields.beta_mf.imag());
  } else {
    put("Omega1", params.Omega1);
    put("Omega2", params.Omega2);
    put("omega_m", params.omega_m);
    put("G1", params.G1);
    put("G2", params.G2);
    put("lambda", params.lambda);
    put("G_cross", params.G_cross);
    put("gamma_c1", params.gamma_c1);
    put("gamma_c2", params.gamma_c2);
    put("gamma_m", params.gamma_m);
    put("T_dim", params.T_dim);
  }
  if (sweep) k["sweep"] = sweep->to_string();
  if (grid) k["grid"] = grid->to_string();
  k["seed"] = std::to_string(seed);
  k["trajectories"] = std::to_string(trajectories);
  k["steps"] = std::to_string(steps);
  k["segment"] = std::to_string(segment);
  put("overlap", overlap);
  put("dt", dt);
  put("band", band);
  k["decimation"] = std::to_string(decimation);
  k["trajectory"] = write_trajectory ? "true" : "false";
  k["allow_unstable"] = allow_unstable ? "true" : "false";
  return k;
}

}  // namespace optomech::cli
