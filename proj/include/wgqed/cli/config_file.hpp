#pragma once

// Line-oriented run configuration:
//
//   # comment
//   [photon]
//   k = 10000
//   shape = decay
//   tau = 0.3333 /Gwg
//
//   [emitter.1]
//   V = 1
//   delta = 0.001 Gwg
//
//   [emitter.2]
//   V = 1
//   spacing_phase = 1      # k (d_2 - d_1) / 2pi
//
//   [grid]
//   t_points = 1201
//
// `Gwg` multiplies a rate by the waveguide rate of emitter 1; `/Gwg` turns a
// number into a time in units of 1 / Gamma_wg1.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "wgqed/dynamics.hpp"
#include "wgqed/model.hpp"

namespace wgqed::cli {

class ConfigParseError : public Error {
 public:
  ConfigParseError(std::size_t line, const std::string& message);
  /// 1-based line, 0 when the problem is not tied to one line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnknownKey : public ConfigParseError {
 public:
  using ConfigParseError::ConfigParseError;
};

class MissingSection : public ConfigParseError {
 public:
  using ConfigParseError::ConfigParseError;
};

struct GridSettings {
  std::optional<double> t_start;
  std::optional<double> t_end;
  std::size_t t_points = 1201;
  QuadratureOptions quadrature;
  double threshold = kDefaultDeathThreshold;
};

struct RunConfig {
  ChainConfig chain;
  WaveformSpec waveform;
  GridSettings grid;
  /// Gamma_wg of emitter 1, the unit behind `Gwg`.
  double rate_unit = 0.0;
};

/// Quantity with an optional unit: "0.5", "0.001 Gwg", "0.3333 /Gwg".
enum class UnitKind { Plain, Rate, Time };
double parse_quantity(std::string_view text, UnitKind kind, double rate_unit);

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace wgqed::cli
