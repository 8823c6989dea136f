#pragma once

// Stationary single-photon scattering off a chain of emitters.
//
// A photon of wavenumber k enters from the left. The stationary amplitudes
// xi_j solve the N x N system A xi = b with
//
//   A_jl = -i (V_j V_l / v_g) exp(i k |d_j - d_l|) - [j == l] (delta_j + i Gamma_j / 2)
//   b_j  = -V_j exp(i k d_j)
//
// and the photon field follows from the jump conditions at each emitter.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "wgqed/model.hpp"

namespace wgqed {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Reciprocal condition estimates below this raise SingularSystem.
inline constexpr double kSingularRcond = 1e-12;

struct CouplingMatrix {
  CMatrix entries;
};

CouplingMatrix build_matrix(const ChainConfig& config);

/// Right-hand side -V_j exp(i k d_j) of the stationary equations.
CVector drive_vector(const ChainConfig& config);

struct ScatteringSolution {
  CVector xi;
  Complex transmission{1.0, 0.0};
  Complex reflection{0.0, 0.0};
  /// Right-moving amplitude a_i between emitters i and i+1 (N-1 entries).
  std::vector<Complex> segment_right;
  /// Left-moving amplitude b_i between emitters i and i+1 (N-1 entries).
  std::vector<Complex> segment_left;

  std::size_t size() const noexcept { return static_cast<std::size_t>(xi.size()); }
  double excitation(std::size_t j) const { return std::norm(xi(static_cast<Eigen::Index>(j))); }
  double phase(std::size_t j) const { return std::arg(xi(static_cast<Eigen::Index>(j))); }
  double total_excitation() const { return xi.squaredNorm(); }
};

/// Solves the stationary equations. Emitters with V_j = 0 are decoupled and
/// get xi_j = 0 without entering the solve.
ScatteringSolution solve_stationary(const ChainConfig& config);

/// Stationary solution at wavenumber k when the configured detunings refer to
/// `carrier`, so every delta_j shifts by v_g (k - carrier). Any finite k is
/// accepted: with linear dispersion the equations are analytic in k, and a
/// broad photon spectrum around a small carrier reaches k <= 0.
ScatteringSolution solve_stationary_at(const ChainConfig& config, double k, double carrier);

struct FieldValue {
  Complex right;
  Complex left;
};

/// Piecewise plane-wave photon field at x, with theta(0) = 1/2 at emitters.
FieldValue field_profile(const ChainConfig& config, const ScatteringSolution& solution, double x);

/// Normalised single-excitation state sum_j c_j sigma_j^+ |g...g>.
struct MultipartiteState {
  CVector amplitudes;
  double herald_probability = 1.0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(amplitudes.size()); }
};

/// Normalises `amplitudes` and fixes the global phase so that the first
/// nonzero amplitude is real and positive.
MultipartiteState make_state(const CVector& amplitudes, double herald_probability = 1.0);

/// Heralded emitter state after no photon is detected at either end.
MultipartiteState project_state(const ScatteringSolution& solution);

/// |<a|b>|^2.
double state_fidelity(const MultipartiteState& a, const MultipartiteState& b);

/// Symmetric W state over `count` emitters.
MultipartiteState w_state(std::size_t count);

}  // namespace wgqed
