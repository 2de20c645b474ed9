#pragma once

#include "run_config.hpp"

namespace optomech::cli {

// Each command computes everything first and then writes its files, so a
// failure leaves nothing behind.
void cmd_modes(const RunConfig& cfg);
void cmd_squeeze(const RunConfig& cfg);
void cmd_spectrum(const RunConfig& cfg);
void cmd_simulate(const RunConfig& cfg);

}  // namespace optomech::cli
