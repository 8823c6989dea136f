#pragma once

// Time evolution of a shaped single photon through the emitter chain.
//
// The incident photon psi(x) e^{i k0 x} is expanded on the left-incident
// scattering eigenstates. With f(k) the Fourier amplitude of the envelope
// and xi_j(k) the stationary amplitudes at wavenumber k,
//
//   xi_j(t) = (1/2pi) \int f(k) xi_j(k) e^{-i v_g (k - k0) t} dk
//
// in the frame rotating at the carrier. The integral is a trapezoid sum over
// k0 +/- K plus a closed-form correction for the truncated 1/(k-k0)^2 tails.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wgqed/scattering.hpp"

namespace wgqed {

enum class PulseShape { ExponentialDecay, ExponentialGrowth };

/// Exponentially decaying or growing single-photon envelope. `time_constant`
/// is the 1/e time of the intensity; `front_position` is where the sharp
/// edge sits at t = 0 (leading edge for decay, trailing edge for growth).
struct WaveformSpec {
  PulseShape shape = PulseShape::ExponentialDecay;
  double time_constant = 1.0;
  double carrier = 1.0;
  double front_position = 0.0;
};

void ensure_valid(const WaveformSpec& waveform);

/// Fourier amplitude f(k) = \int psi(x) e^{-i (k - k0) x} dx, normalised so
/// that \int |f|^2 dk / 2pi = 1.
Complex spectral_amplitude(const WaveformSpec& waveform, double k, double group_velocity = 1.0);

/// Half width at half maximum of |f(k)|^2, 1 / (2 v_g tau).
double spectral_half_width(const WaveformSpec& waveform, double group_velocity = 1.0);

struct QuadratureOptions {
  double half_width = 40.0;  ///< multiple of the spectral scale, see spectral_window
  std::size_t points = 4096;
  int max_doublings = 3;
  double tolerance = 1e-3;  ///< largest allowed probability change on doubling
  bool tail_correction = true;
};

struct WavenumberGrid {
  std::vector<double> nodes;
  std::vector<double> weights;  ///< trapezoid weights
  double half_width = 0.0;      ///< K, so nodes span k0 - K .. k0 + K
};

/// Half width K of the k window: `half_width_factor` times the larger of the
/// photon scale 1 / (v_g tau) and the emitter scale
/// (max_j (|delta_j| + Gamma_j / 2) + sum_j V_j^2 / v_g) / v_g. Beyond K the
/// integrand must already follow its 1/(k - k0)^2 asymptote.
double spectral_window(const ChainConfig& config, const WaveformSpec& waveform, double half_width_factor);

/// Trapezoid grid over carrier +/- half_width.
WavenumberGrid make_grid(const WaveformSpec& waveform, std::size_t points, double half_width);

/// \int |f|^2 dk / 2pi over the grid, optionally adding the exact Lorentzian
/// tails outside it.
double spectral_norm(const WaveformSpec& waveform, const WavenumberGrid& grid,
                     double group_velocity = 1.0, bool include_tails = true);

/// Precomputed spectral sum for one configuration, waveform and grid.
class SpectralPropagator {
 public:
  SpectralPropagator(const ChainConfig& config, const WaveformSpec& waveform, std::size_t points,
                     double half_width_factor, bool tail_correction);

  /// Emitter amplitudes xi_j(t), rotating frame.
  CVector amplitudes(double t) const;

  std::size_t emitters() const noexcept { return static_cast<std::size_t>(weighted_.cols()); }
  std::size_t points() const noexcept { return offsets_.size(); }

 private:
  std::vector<double> offsets_;  // k_n - k0
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> weighted_;  // w_n f(k_n) xi(k_n) / 2pi
  CVector tail_coeff_;
  std::vector<double> tail_shift_;  // x0 - d_j
  double half_width_ = 0.0;
  double group_velocity_ = 1.0;
  bool tail_ = true;
};

/// 1-based emitter pair, first < second.
struct EmitterPair {
  int first = 1;
  int second = 2;
  friend bool operator==(const EmitterPair&, const EmitterPair&) = default;
};

struct TimeSeries {
  std::vector<double> times;
  std::vector<std::vector<Complex>> amplitude;   ///< [emitter][time]
  std::vector<std::vector<double>> excitation;   ///< [emitter][time]
  std::vector<double> total;                     ///< [time]
  std::vector<EmitterPair> pairs;                ///< all j < l
  std::vector<std::vector<double>> concurrence;  ///< [pair][time]

  std::size_t emitters() const noexcept { return excitation.size(); }
  std::optional<std::size_t> pair_index(EmitterPair pair) const;
  const std::vector<double>& concurrence_of(EmitterPair pair) const;
};

struct EvolveOptions {
  QuadratureOptions quadrature;
  /// Locate interior concurrence minima below `polish_below` with Brent's
  /// method and add those instants to the series.
  bool polish_minima = false;
  double polish_below = 0.05;
  /// Concurrences are reported as 0 when the total excitation is below this.
  double excitation_floor = 1e-9;
};

/// Emitter amplitudes, excitations and conditional pairwise concurrences on
/// an increasing time grid. Throws QuadratureNotConverged when the grid
/// doublings run out before probabilities settle.
TimeSeries evolve(const ChainConfig& config, const WaveformSpec& waveform, std::span<const double> times,
                  const EvolveOptions& options = {});

/// Conditional concurrences of the normalised single-excitation state with
/// the given amplitudes, one per pair.
std::vector<double> pair_concurrences(const CVector& amplitudes, const std::vector<EmitterPair>& pairs,
                                      double excitation_floor);

std::vector<EmitterPair> all_pairs(std::size_t emitters);

/// Time at which the sharp edge of the photon reaches emitter j (0-based).
double arrival_time(const ChainConfig& config, const WaveformSpec& waveform, std::size_t emitter);

/// Uniform grid covering the photon passage plus `decay_constants` time
/// constants after the edge has crossed the last emitter.
std::vector<double> default_time_grid(const ChainConfig& config, const WaveformSpec& waveform,
                                      std::size_t points, double decay_constants = 12.0);

/// Maximum over time of sum_j |xi_j(t)|^2, with the maximum located by
/// Brent's method on the converged quadrature.
double peak_success_probability(const ChainConfig& config, const WaveformSpec& waveform,
                                const QuadratureOptions& quadrature = {});

inline constexpr double kDefaultDeathThreshold = 1e-4;

struct SuddenDeathEvent {
  EmitterPair pair;
  double death_time = 0.0;
  double revival_time = 0.0;
};

/// Intervals where the pair concurrence drops below `threshold` and later
/// recovers. Boundaries are the linearly interpolated threshold crossings.
/// Decay that never recovers is not an event.
std::vector<SuddenDeathEvent> detect_sudden_death(const TimeSeries& series, EmitterPair pair,
                                                  double threshold = kDefaultDeathThreshold);

}  // namespace wgqed
