#include "wgqed/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace wgqed {

std::string_view to_string(ConfigFault fault) noexcept {
  switch (fault) {
    case ConfigFault::EmptyChain:
      return "EmptyChain";
    case ConfigFault::NonIncreasingPositions:
      return "NonIncreasingPositions";
    case ConfigFault::NegativeCoupling:
      return "NegativeCoupling";
    case ConfigFault::NegativeDissipation:
      return "NegativeDissipation";
    case ConfigFault::NonPositiveVelocity:
      return "NonPositiveVelocity";
    case ConfigFault::NonPositiveWavenumber:
      return "NonPositiveWavenumber";
    case ConfigFault::NonFiniteValue:
      return "NonFiniteValue";
  }
  return "Unknown";
}

InvalidConfig::InvalidConfig(ConfigFault fault)
    : Error("invalid chain configuration: " + std::string(to_string(fault))), fault_(fault) {}

std::optional<ConfigFault> validate(const ChainConfig& config) noexcept {
  if (config.emitters.empty()) return ConfigFault::EmptyChain;
  if (!std::isfinite(config.group_velocity) || !std::isfinite(config.wavenumber))
    return ConfigFault::NonFiniteValue;
  for (std::size_t j = 0; j < config.emitters.size(); ++j) {
    const auto& e = config.emitters[j];
    if (!std::isfinite(e.position) || !std::isfinite(e.coupling) || !std::isfinite(e.detuning) ||
        !std::isfinite(e.dissipation))
      return ConfigFault::NonFiniteValue;
    if (j > 0 && !(config.emitters[j - 1].position < e.position))
      return ConfigFault::NonIncreasingPositions;
    if (e.coupling < 0.0) return ConfigFault::NegativeCoupling;
    if (e.dissipation < 0.0) return ConfigFault::NegativeDissipation;
  }
  if (!(config.group_velocity > 0.0)) return ConfigFault::NonPositiveVelocity;
  if (!(config.wavenumber > 0.0)) return ConfigFault::NonPositiveWavenumber;
  return std::nullopt;
}

void ensure_valid(const ChainConfig& config) {
  if (auto fault = validate(config)) throw InvalidConfig(*fault);
}

double waveguide_rate(const EmitterParams& emitter, double group_velocity) noexcept {
  return 2.0 * emitter.coupling * emitter.coupling / group_velocity;
}

double position_from_phase(double cycles, double wavenumber) noexcept {
  return 2.0 * std::numbers::pi * cycles / wavenumber;
}

double phase_from_position(double position, double wavenumber) noexcept {
  return wavenumber * position / (2.0 * std::numbers::pi);
}

ChainConfig uniform_chain(std::size_t count, double coupling, double detuning,
                          double dissipation, double spacing_cycles, double wavenumber,
                          double group_velocity) {
  ChainConfig config;
  config.wavenumber = wavenumber;
  config.group_velocity = group_velocity;
  config.emitters.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    config.emitters.push_back(
        {position_from_phase(spacing_cycles * static_cast<double>(j), wavenumber), coupling,
         detuning, dissipation});
  }
  return config;
}

}  // namespace wgqed
