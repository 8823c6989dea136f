#pragma once

// Parameter records shared by the scattering, entanglement and dynamics code.
//
// Units: hbar = 1. Rates (detuning, dissipation, waveguide rate) are angular
// frequencies, couplings are sqrt(rate * velocity), positions are lengths and
// wavenumbers are inverse lengths. The group velocity is carried explicitly
// but is 1 in every shipped configuration.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "wgqed/errors.hpp"

namespace wgqed {

/// One two-level emitter side-coupled to the waveguide.
struct EmitterParams {
  double position = 0.0;     ///< d_j
  double coupling = 0.0;     ///< V_j >= 0
  double detuning = 0.0;     ///< delta_j = E - omega_j at the carrier wavenumber
  double dissipation = 0.0;  ///< Gamma_j >= 0, loss outside the guided mode
};

struct ChainConfig {
  std::vector<EmitterParams> emitters;
  double wavenumber = 1.0;  ///< k of the incident photon
  double group_velocity = 1.0;

  std::size_t size() const noexcept { return emitters.size(); }
};

enum class ConfigFault {
  EmptyChain,
  NonIncreasingPositions,
  NegativeCoupling,
  NegativeDissipation,
  NonPositiveVelocity,
  NonPositiveWavenumber,
  NonFiniteValue,
};

std::string_view to_string(ConfigFault fault) noexcept;

class InvalidConfig : public Error {
 public:
  explicit InvalidConfig(ConfigFault fault);
  ConfigFault fault() const noexcept { return fault_; }

 private:
  ConfigFault fault_;
};

/// First violated invariant, or nullopt when the configuration is usable.
std::optional<ConfigFault> validate(const ChainConfig& config) noexcept;

/// Throws InvalidConfig naming the first violated invariant.
void ensure_valid(const ChainConfig& config);

/// Waveguide-induced decay rate 2 V^2 / v_g of one emitter.
double waveguide_rate(const EmitterParams& emitter, double group_velocity) noexcept;

/// Position whose carrier phase k*d equals 2*pi*cycles.
double position_from_phase(double cycles, double wavenumber) noexcept;

/// Carrier phase k*d of a position, in units of 2*pi.
double phase_from_position(double position, double wavenumber) noexcept;

/// N identical emitters with gaps of `spacing_cycles` carrier wavelengths,
/// the first one at the origin.
ChainConfig uniform_chain(std::size_t count, double coupling, double detuning,
                          double dissipation, double spacing_cycles, double wavenumber,
                          double group_velocity = 1.0);

}  // namespace wgqed
