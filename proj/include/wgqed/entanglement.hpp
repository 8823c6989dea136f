#pragma once

// Dense qubit density matrices and the entanglement measures built on them.
//
// Basis convention: the order of `labels` is the tensor-product order, most
// significant qubit first, and |e> is bit value 1. A qubit at position p of
// an n-qubit register therefore owns the bit 1 << (n - 1 - p).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wgqed/scattering.hpp"

namespace wgqed {

/// Largest register handled by the dense representation.
inline constexpr std::size_t kMaxQubits = 10;

struct DensityMatrix {
  std::vector<int> labels;  ///< emitter indices, 1-based
  CMatrix rho;

  std::size_t qubits() const noexcept { return labels.size(); }
};

/// Empty when rho is Hermitian, unit-trace and positive semidefinite within
/// the usual tolerances; otherwise a description of the first violation.
std::optional<std::string> check_density(const DensityMatrix& rho);

/// |psi><psi| for a pure state given by its full 2^n amplitude vector.
DensityMatrix pure_density(const CVector& amplitudes, std::vector<int> labels);

/// Full 2^N amplitude vector of a single-excitation state, labels 1..N.
CVector embed_state(const MultipartiteState& state);

DensityMatrix density_from_pure(const MultipartiteState& state);

/// Reduced density matrix over `keep`. The result lists the kept labels in
/// their original order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// Partial transpose with respect to one qubit.
CMatrix partial_transpose(const DensityMatrix& rho, int label);

/// Sum of |lambda| over negative eigenvalues of the partial transpose.
double negativity(const DensityMatrix& rho, int label);

/// Negativity of a pure state from its Schmidt coefficients, for the cut
/// (qubit at `position`) | rest. `amplitudes` has 2^qubits entries.
double schmidt_negativity(const CVector& amplitudes, std::size_t qubits, std::size_t position);

/// Same as above for a single-excitation state; `label` is 1-based.
double schmidt_negativity(const MultipartiteState& state, int label);

/// (N_1 N_2 N_3)^(1/3) for a three-qubit state.
double tripartite_negativity(const DensityMatrix& rho);

/// Wootters concurrence of a two-qubit state.
double concurrence(const DensityMatrix& rho);

/// Descending eigenvalues of rho * rho_tilde, computed from the Hermitian
/// matrix sqrt(rho) rho_tilde sqrt(rho). Not clamped.
std::vector<double> wootters_eigenvalues(const DensityMatrix& rho);

}  // namespace wgqed
