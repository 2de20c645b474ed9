#include <functional>
#include <map>

#include "optomech/error.hpp"
#include "run_config.hpp"

namespace optomech::cli {

namespace {

constexpr char kSqueezeNote[] =
    "fixed couplings 0.01 omega_m with Omega1 = Omega2 = omega_m; the energy plots share the "
    "squeezing-figure parameters, whose values are not printed for them";

LinearizedParams equal_modes(double G1, double G2, double lambda) {
  LinearizedParams lp;
  lp.Omega1 = 1.0;
  lp.Omega2 = 1.0;
  lp.omega_m = 1.0;
  lp.G1 = G1;
  lp.G2 = G2;
  lp.lambda = lambda;
  return lp;
}

void sweep_preset(RunConfig& cfg, LinearizedParams lp, CouplingAxis axis, double stop) {
  cfg.form = ParamForm::Linearized;
  cfg.params = lp;
  cfg.sweep = SweepSpec{axis, GridSpec{0.0, stop, 241}};
  cfg.notes["assumption"] = kSqueezeNote;
  cfg.notes["sweep_range"] = "0 to 1.2 times the critical value, chosen to show the transition";
}

void fig4(RunConfig& cfg) {
  constexpr double kG = 1.5;
  constexpr double kBeta = 0.06;
  LinearizedParams lp;
  lp.Omega1 = 1.3;
  lp.Omega2 = 1.5;
  lp.omega_m = 1.0;
  lp.G1 = 2.0;
  lp.G2 = 6.0;
  lp.G_cross = kG;
  lp.lambda = 2.0 * kG * kBeta;
  lp.gamma_c1 = 0.2;
  lp.gamma_c2 = 0.6;
  lp.gamma_m = 1e-4;
  lp.T_dim = 1e5;
  cfg.form = ParamForm::Linearized;
  cfg.params = lp;
  cfg.notes["lambda"] = "lambda = 2 G beta with G = 1.5, beta = 0.06";
  cfg.notes["detunings"] = "Delta1 = -Omega1 = -1.3, Delta2 = -Omega2 = -1.5";
  cfg.notes["stability"] =
      "the drift matrix has an eigenvalue with positive real part at these values; "
      "spectrum needs --allow-unstable and simulate refuses";
}

void nms_stable(RunConfig& cfg) {
  LinearizedParams lp;
  lp.Omega1 = 0.8;
  lp.Omega2 = 1.4;
  lp.omega_m = 1.0;
  lp.G1 = 0.3;
  lp.G2 = 0.5;
  lp.G_cross = 0.5;
  lp.lambda = 0.0;
  lp.gamma_c1 = 0.1;
  lp.gamma_c2 = 0.2;
  lp.gamma_m = 1e-4;
  lp.T_dim = 1e5;
  cfg.form = ParamForm::Linearized;
  cfg.params = lp;
  cfg.notes["purpose"] =
      "dynamically stable parameter set with three resolved spectral peaks, for Langevin cross-checks";
}

const std::map<std::string, std::function<void(RunConfig&)>, std::less<>>& registry() {
  static const std::map<std::string, std::function<void(RunConfig&)>, std::less<>> presets = {
      {"fig2a", [](RunConfig& c) { sweep_preset(c, equal_modes(0.01, 0.01, 0.0), CouplingAxis::Lambda, 1.2); }},
      {"fig2b", [](RunConfig& c) { sweep_preset(c, equal_modes(0.0, 0.01, 0.01), CouplingAxis::G1, 1.2); }},
      {"fig2c", [](RunConfig& c) { sweep_preset(c, equal_modes(0.01, 0.0, 0.01), CouplingAxis::G2, 1.2); }},
      {"fig3a", [](RunConfig& c) { sweep_preset(c, equal_modes(0.01, 0.01, 0.0), CouplingAxis::Lambda, 1.2); }},
      {"fig3b", [](RunConfig& c) { sweep_preset(c, equal_modes(0.0, 0.01, 0.01), CouplingAxis::G1, 1.2); }},
      {"fig3c", [](RunConfig& c) { sweep_preset(c, equal_modes(0.01, 0.0, 0.01), CouplingAxis::G2, 1.2); }},
      {"fig4", fig4},
      {"nms_stable", nms_stable},
  };
  return presets;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

void apply_preset(std::string_view name, RunConfig& cfg) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw Error(ErrorCode::Config, "unknown preset '" + std::string(name) + "'");
  cfg.source = "preset:" + std::string(name);
  it->second(cfg);
}

}  // namespace optomech::cli
