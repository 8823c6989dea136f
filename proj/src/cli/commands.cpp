#include "wgqed/cli/commands.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wgqed/cli/csv.hpp"
#include "wgqed/cli/sweep.hpp"
#include "wgqed/entanglement.hpp"

namespace wgqed::cli {
namespace {

std::string pair_label(EmitterPair p) { return std::to_string(p.first) + std::to_string(p.second); }

}  // namespace

std::filesystem::path events_path(const std::filesystem::path& out) {
  auto p = out;
  p += ".events.csv";
  return p;
}

std::string wstate_report(const RunConfig& config) {
  const auto sol = solve_stationary(config.chain);
  const auto state = project_state(sol);
  const std::size_t n = sol.size();

  std::string out = csv_row({"quantity", "value"});
  auto add = [&](const std::string& name, double v) { out += csv_row({name, format_number(v)}); };
  for (std::size_t j = 0; j < n; ++j) add("p" + std::to_string(j + 1), sol.excitation(j));
  for (std::size_t j = 0; j < n; ++j) add("phi" + std::to_string(j + 1), sol.phase(j));
  add("Pherald", state.herald_probability);
  add("fidelity_W", state_fidelity(state, w_state(n)));
  if (n == 3) {
    CVector clone(3);
    clone << 2.0, 1.0, 1.0;
    add("fidelity_clone", state_fidelity(state, make_state(clone)));
  }
  if (n <= kMaxQubits) {
    const auto rho = density_from_pure(state);
    if (n == 3) add("N123", tripartite_negativity(rho));
    for (const auto& p : all_pairs(n)) {
      const int keep[] = {p.first, p.second};
      add("C" + pair_label(p), concurrence(partial_trace(rho, keep)));
    }
  }
  add("t_re", sol.transmission.real());
  add("t_im", sol.transmission.imag());
  add("r_re", sol.reflection.real());
  add("r_im", sol.reflection.imag());
  return out;
}

std::string evolve_csv(const TimeSeries& series) {
  std::vector<std::string> header{"time"};
  for (std::size_t j = 0; j < series.emitters(); ++j) header.push_back("p" + std::to_string(j + 1));
  header.push_back("ptotal");
  for (const auto& p : series.pairs) header.push_back("C" + pair_label(p));
  std::string out = csv_row(header);
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    std::vector<std::string> row{format_number(series.times[i])};
    for (const auto& e : series.excitation) row.push_back(format_number(e[i]));
    row.push_back(format_number(series.total[i]));
    for (const auto& c : series.concurrence) row.push_back(format_number(c[i]));
    out += csv_row(row);
  }
  return out;
}

std::string events_csv(const std::vector<SuddenDeathEvent>& events) {
  std::string out = csv_row({"pair", "death_time", "revival_time"});
  for (const auto& e : events)
    out += csv_row({std::to_string(e.pair.first) + "-" + std::to_string(e.pair.second),
                    format_number(e.death_time), format_number(e.revival_time)});
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-photon entanglement generation in a waveguide-coupled emitter chain"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--out", out_path, "output CSV path")->required();
  };

  auto* wstate = app.add_subcommand("wstate-check", "heralded stationary state and its entanglement");
  add_common(wstate);

  auto* sweep = app.add_subcommand("sweep", "stationary measures along one parameter axis");
  add_common(sweep);
  std::string axis;
  double from = 0.0, to = 1.0;
  std::size_t points = 0;
  sweep->add_option("--axis", axis, "swept parameter")
      ->required()
      ->check(CLI::IsMember({"V_ratio", "delta_ratio", "gamma_scale", "spacing_phase", "delta3_over_delta1"}));
  sweep->add_option("--from", from, "first axis value")->required();
  sweep->add_option("--to", to, "last axis value")->required();
  sweep->add_option("--points", points, "number of grid points (>= 2)")->required();

  auto* evolve_cmd = app.add_subcommand("evolve", "time evolution for a shaped photon");
  add_common(evolve_cmd);
  std::string shape, tau_text;
  double threshold = -1.0;
  evolve_cmd->add_option("--shape", shape, "photon envelope")->check(CLI::IsMember({"decay", "growth"}));
  evolve_cmd->add_option("--tau", tau_text, "intensity 1/e time, e.g. 0.1 or '0.3333/Gwg'");
  evolve_cmd->add_option("--threshold", threshold, "sudden-death concurrence threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig config = load_config(config_path);

    if (wstate->parsed()) {
      write_text(out_path, wstate_report(config));
      return kExitOk;
    }

    if (sweep->parsed()) {
      SweepSpec spec{*parse_axis(axis), from, to, points, config.chain};
      ensure_valid(spec);
      write_text(out_path, sweep_csv(run_sweep(spec)));
      return kExitOk;
    }

    if (!shape.empty())
      config.waveform.shape = shape == "growth" ? PulseShape::ExponentialGrowth : PulseShape::ExponentialDecay;
    if (!tau_text.empty()) {
      try {
        config.waveform.time_constant = parse_quantity(tau_text, UnitKind::Time, config.rate_unit);
      } catch (const std::exception& e) {
        throw ConfigParseError(0, std::string("--tau: ") + e.what());
      }
    }
    if (threshold > 0.0) config.grid.threshold = threshold;
    else if (threshold != -1.0) throw ConfigParseError(0, "--threshold must be positive");

    auto times = default_time_grid(config.chain, config.waveform, config.grid.t_points);
    if (config.grid.t_start || config.grid.t_end) {
      const double lo = config.grid.t_start.value_or(times.front());
      const double hi = config.grid.t_end.value_or(times.back());
      if (!(lo < hi)) throw ConfigParseError(0, "t_start must be below t_end");
      for (std::size_t i = 0; i < times.size(); ++i)
        times[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(times.size() - 1);
    }

    EvolveOptions options;
    options.quadrature = config.grid.quadrature;
    options.polish_minima = true;
    const auto series = evolve(config.chain, config.waveform, times, options);
    std::vector<SuddenDeathEvent> events;
    for (const auto& p : series.pairs) {
      auto found = detect_sudden_death(series, p, config.grid.threshold);
      events.insert(events.end(), found.begin(), found.end());
    }
    write_text(out_path, evolve_csv(series));
    write_text(events_path(out_path), events_csv(events));
    return kExitOk;
  } catch (const ConfigParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidConfig& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidWaveform& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidSweep& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const QuadratureNotConverged& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const SingularSystem& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ZeroExcitation& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace wgqed::cli
