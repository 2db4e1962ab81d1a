#pragma once

#include <string>

#include "config.hpp"

namespace hspde::cli {

int run_simulate(const RunSpec& spec);
int run_characteristics(const RunSpec& spec);
int run_wavefront(const RunSpec& spec);
int run_wong_zakai(const RunSpec& spec);
int run_small_noise(const RunSpec& spec);
int run_ldp(const RunSpec& spec);
int run_support(const RunSpec& spec);
int run_malliavin(const RunSpec& spec);
int run_check_conditions(const RunSpec& spec);
int run_selftest();

}  // namespace hspde::cli
