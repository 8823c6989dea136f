#include "wgqed/cli/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "wgqed/cli/csv.hpp"
#include "wgqed/entanglement.hpp"

namespace wgqed::cli {

std::optional<SweepAxis> parse_axis(std::string_view name) {
  if (name == "V_ratio") return SweepAxis::VRatio;
  if (name == "delta_ratio") return SweepAxis::DeltaRatio;
  if (name == "gamma_scale") return SweepAxis::GammaScale;
  if (name == "spacing_phase") return SweepAxis::SpacingPhase;
  if (name == "delta3_over_delta1") return SweepAxis::Delta3OverDelta1;
  return std::nullopt;
}

std::string_view axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::VRatio:
      return "V_ratio";
    case SweepAxis::DeltaRatio:
      return "delta_ratio";
    case SweepAxis::GammaScale:
      return "gamma_scale";
    case SweepAxis::SpacingPhase:
      return "spacing_phase";
    case SweepAxis::Delta3OverDelta1:
      return "delta3_over_delta1";
  }
  return "?";
}

void ensure_valid(const SweepSpec& spec) {
  if (!(spec.lo < spec.hi)) throw InvalidSweep("sweep range needs lo < hi");
  if (spec.points < 2) throw InvalidSweep("sweep needs at least 2 points");
  if (spec.baseline.size() != 3) throw InvalidSweep("sweeps are defined for exactly 3 emitters");
  wgqed::ensure_valid(spec.baseline);
}

ChainConfig apply_axis(const ChainConfig& baseline, SweepAxis axis, double value) {
  ChainConfig c = baseline;
  auto& e = c.emitters;
  switch (axis) {
    case SweepAxis::VRatio:
      e[0].coupling = value * e[1].coupling;
      break;
    case SweepAxis::DeltaRatio:
      e[1].detuning = value * e[0].detuning;
      break;
    case SweepAxis::Delta3OverDelta1:
      e[2].detuning = value * e[0].detuning;
      break;
    case SweepAxis::GammaScale: {
      const double unit = waveguide_rate(baseline.emitters[0], baseline.group_velocity);
      const double g1 = baseline.emitters[0].dissipation;
      for (auto& em : e) {
        const double weight = g1 > 0.0 ? em.dissipation / g1 : 1.0;
        em.dissipation = value * unit * weight;
      }
      break;
    }
    case SweepAxis::SpacingPhase:
      for (std::size_t j = 1; j < e.size(); ++j)
        e[j].position = e[j - 1].position + position_from_phase(value, c.wavenumber);
      break;
  }
  return c;
}

std::vector<double> sweep_values(const SweepSpec& spec) {
  std::vector<double> v(spec.points);
  const double step = (spec.hi - spec.lo) / static_cast<double>(spec.points - 1);
  for (std::size_t i = 0; i < spec.points; ++i) v[i] = spec.lo + step * static_cast<double>(i);
  v.back() = spec.hi;
  return v;
}

SweepRow evaluate_point(const ChainConfig& config, double axis_value) {
  SweepRow row;
  row.axis = axis_value;
  if (config.size() != 3) throw InvalidSweep("sweep rows need exactly 3 emitters");
  ScatteringSolution sol;
  try {
    sol = solve_stationary(config);
  } catch (const SingularSystem&) {
    row.status = "singular";
    return row;
  }
  row.transmission = sol.transmission;
  row.reflection = sol.reflection;
  row.herald_probability = sol.total_excitation();
  for (std::size_t j = 0; j < 3; ++j) {
    row.excitation[j] = sol.excitation(j);
    row.phase[j] = sol.phase(j);
  }
  if (!(row.herald_probability > 0.0)) {
    row.status = "no_excitation";
    return row;
  }
  const auto rho = density_from_pure(project_state(sol));
  row.tripartite_negativity = tripartite_negativity(rho);
  const int p12[] = {1, 2}, p13[] = {1, 3}, p23[] = {2, 3};
  row.c12 = concurrence(partial_trace(rho, p12));
  row.c13 = concurrence(partial_trace(rho, p13));
  row.c23 = concurrence(partial_trace(rho, p23));
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  ensure_valid(spec);
  const auto values = sweep_values(spec);
  std::vector<SweepRow> rows(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++)
      rows[i] = evaluate_point(apply_axis(spec.baseline, spec.axis, values[i]), values[i]);
  };
  const std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), values.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out(kSweepHeader);
  out += '\n';
  for (const auto& r : rows) {
    std::vector<std::string> f{format_number(r.axis)};
    if (r.ok()) {
      for (double p : r.excitation) f.push_back(format_number(p));
      for (double p : r.phase) f.push_back(format_number(p));
      for (double v : {r.tripartite_negativity, r.c12, r.c13, r.c23, r.herald_probability, r.transmission.real(),
                       r.transmission.imag(), r.reflection.real(), r.reflection.imag()})
        f.push_back(format_number(v));
    } else {
      f.resize(16);
    }
    f.push_back(r.status);
    out += csv_row(f);
  }
  return out;
}

}  // namespace wgqed::cli
