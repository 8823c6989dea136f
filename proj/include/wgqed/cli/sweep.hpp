#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wgqed/scattering.hpp"

namespace wgqed::cli {

/// Stationary-state parameter a sweep can vary.
///   V_ratio             V_1 / V_2
///   delta_ratio         delta_2 / delta_1
///   gamma_scale         Gamma_1 / Gamma_wg1, other Gamma_j keep their ratio to Gamma_1
///   spacing_phase       k (d_{j+1} - d_j) / 2pi for every gap
///   delta3_over_delta1  delta_3 / delta_1
enum class SweepAxis { VRatio, DeltaRatio, GammaScale, SpacingPhase, Delta3OverDelta1 };

std::optional<SweepAxis> parse_axis(std::string_view name);
std::string_view axis_name(SweepAxis axis);

struct SweepSpec {
  SweepAxis axis = SweepAxis::VRatio;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t points = 2;
  ChainConfig baseline;
};

class InvalidSweep : public Error {
 public:
  using Error::Error;
};

void ensure_valid(const SweepSpec& spec);

/// Baseline with the axis parameter set to `value`.
ChainConfig apply_axis(const ChainConfig& baseline, SweepAxis axis, double value);

/// Linear grid lo..hi with `points` entries, endpoints exact.
std::vector<double> sweep_values(const SweepSpec& spec);

struct SweepRow {
  double axis = 0.0;
  std::string status = "ok";  ///< ok | singular | no_excitation
  std::array<double, 3> excitation{};
  std::array<double, 3> phase{};
  double tripartite_negativity = 0.0;
  double c12 = 0.0, c13 = 0.0, c23 = 0.0;
  double herald_probability = 0.0;
  Complex transmission{};
  Complex reflection{};

  bool ok() const noexcept { return status == "ok"; }
};

/// Stationary measures of a three-emitter chain.
SweepRow evaluate_point(const ChainConfig& config, double axis_value);

/// One row per grid point, in axis order. Rows are computed on a worker pool.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

inline constexpr std::string_view kSweepHeader =
    "axis,p1,p2,p3,phi1,phi2,phi3,N123,C12,C13,C23,Pherald,t_re,t_im,r_re,r_im,status";

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace wgqed::cli
