#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wgqed/cli/config_file.hpp"
#include "wgqed/dynamics.hpp"

namespace wgqed::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of the `wgqed` tool. Subcommands: wstate-check, sweep, evolve.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// `quantity,value` report of the heralded stationary state.
std::string wstate_report(const RunConfig& config);

/// time, p1..pN, ptotal, then C_jl for every pair j < l.
std::string evolve_csv(const TimeSeries& series);

std::string events_csv(const std::vector<SuddenDeathEvent>& events);

/// Sidecar next to an evolve CSV: `<out>.events.csv`.
std::filesystem::path events_path(const std::filesystem::path& out);

}  // namespace wgqed::cli
