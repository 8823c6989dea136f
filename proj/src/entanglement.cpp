#include "wgqed/entanglement.hpp"

#include <algorithm>
#include <cmath>

namespace wgqed {
namespace {

constexpr double kZeroEigen = 1e-12;

std::size_t dimension_for(std::size_t qubits) { return std::size_t{1} << qubits; }

std::size_t position_of(const DensityMatrix& rho, int label) {
  auto it = std::find(rho.labels.begin(), rho.labels.end(), label);
  if (it == rho.labels.end()) throw UnknownLabel("qubit " + std::to_string(label) + " is not in this state");
  return static_cast<std::size_t>(it - rho.labels.begin());
}

std::size_t bit_of(std::size_t qubits, std::size_t position) {
  return std::size_t{1} << (qubits - 1 - position);
}

void require_shape(const DensityMatrix& rho) {
  const auto dim = static_cast<Eigen::Index>(dimension_for(rho.qubits()));
  if (rho.qubits() == 0 || rho.qubits() > kMaxQubits || rho.rho.rows() != dim || rho.rho.cols() != dim)
    throw DimensionMismatch("density matrix size does not match its " + std::to_string(rho.qubits()) +
                            " labels");
}

}  // namespace

std::optional<std::string> check_density(const DensityMatrix& rho) {
  try {
    require_shape(rho);
  } catch (const DimensionMismatch& e) {
    return std::string(e.what());
  }
  if ((rho.rho - rho.rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) return "not Hermitian";
  if (std::abs(rho.rho.trace() - Complex(1.0, 0.0)) > 1e-12) return "trace differs from 1";
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho.rho, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) return "negative eigenvalue";
  return std::nullopt;
}

DensityMatrix pure_density(const CVector& amplitudes, std::vector<int> labels) {
  if (static_cast<std::size_t>(amplitudes.size()) != dimension_for(labels.size()))
    throw DimensionMismatch("amplitude vector does not have 2^n entries");
  return {std::move(labels), amplitudes * amplitudes.adjoint()};
}

CVector embed_state(const MultipartiteState& state) {
  const std::size_t n = state.size();
  if (n == 0 || n > kMaxQubits)
    throw DimensionMismatch("dense states support 1.." + std::to_string(kMaxQubits) + " qubits");
  CVector full = CVector::Zero(static_cast<Eigen::Index>(dimension_for(n)));
  for (std::size_t j = 0; j < n; ++j)
    full(static_cast<Eigen::Index>(bit_of(n, j))) = state.amplitudes(static_cast<Eigen::Index>(j));
  return full;
}

DensityMatrix density_from_pure(const MultipartiteState& state) {
  std::vector<int> labels(state.size());
  for (std::size_t j = 0; j < labels.size(); ++j) labels[j] = static_cast<int>(j + 1);
  return pure_density(embed_state(state), std::move(labels));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  require_shape(rho);
  if (keep.empty()) throw EmptyKeepSet("partial trace must keep at least one qubit");
  const std::size_t n = rho.qubits();
  std::vector<bool> kept(n, false);
  for (int label : keep) kept[position_of(rho, label)] = true;

  std::vector<std::size_t> keep_bits, trace_bits;
  std::vector<int> labels;
  for (std::size_t p = 0; p < n; ++p) {
    if (kept[p]) {
      keep_bits.push_back(bit_of(n, p));
      labels.push_back(rho.labels[p]);
    } else {
      trace_bits.push_back(bit_of(n, p));
    }
  }

  // Scatter a compact index (most significant bit first) onto the given bits.
  auto scatter = [](std::size_t compact, const std::vector<std::size_t>& bits) {
    std::size_t full = 0;
    const std::size_t m = bits.size();
    for (std::size_t q = 0; q < m; ++q)
      if (compact & (std::size_t{1} << (m - 1 - q))) full |= bits[q];
    return full;
  };

  const std::size_t kd = dimension_for(keep_bits.size());
  const std::size_t td = dimension_for(trace_bits.size());
  std::vector<std::size_t> keep_index(kd), trace_index(td);
  for (std::size_t a = 0; a < kd; ++a) keep_index[a] = scatter(a, keep_bits);
  for (std::size_t e = 0; e < td; ++e) trace_index[e] = scatter(e, trace_bits);

  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(kd), static_cast<Eigen::Index>(kd));
  for (std::size_t a = 0; a < kd; ++a)
    for (std::size_t b = 0; b < kd; ++b) {
      Complex sum{};
      for (std::size_t e = 0; e < td; ++e)
        sum += rho.rho(static_cast<Eigen::Index>(keep_index[a] | trace_index[e]),
                       static_cast<Eigen::Index>(keep_index[b] | trace_index[e]));
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = sum;
    }
  return {std::move(labels), std::move(out)};
}

CMatrix partial_transpose(const DensityMatrix& rho, int label) {
  require_shape(rho);
  const std::size_t mask = bit_of(rho.qubits(), position_of(rho, label));
  const auto dim = rho.rho.rows();
  CMatrix out(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) {
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      const auto si = static_cast<Eigen::Index>((ui & ~mask) | (uj & mask));
      const auto sj = static_cast<Eigen::Index>((uj & ~mask) | (ui & mask));
      out(i, j) = rho.rho(si, sj);
    }
  return out;
}

double negativity(const DensityMatrix& rho, int label) {
  const CMatrix pt = partial_transpose(rho, label);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(pt, Eigen::EigenvaluesOnly);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double lambda = eig.eigenvalues()(i);
    if (lambda < -kZeroEigen) sum -= lambda;
  }
  return sum;
}

double schmidt_negativity(const CVector& amplitudes, std::size_t qubits, std::size_t position) {
  if (static_cast<std::size_t>(amplitudes.size()) != dimension_for(qubits) || position >= qubits)
    throw DimensionMismatch("bad register for Schmidt decomposition");
  const std::size_t mask = bit_of(qubits, position);
  const std::size_t low = mask - 1;
  // Row: the chosen qubit; column: the remaining bits packed together.
  CMatrix m = CMatrix::Zero(2, static_cast<Eigen::Index>(dimension_for(qubits - 1)));
  for (std::size_t i = 0; i < dimension_for(qubits); ++i) {
    const std::size_t row = (i & mask) ? 1 : 0;
    const std::size_t col = ((i >> 1) & ~low) | (i & low);
    m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = amplitudes(static_cast<Eigen::Index>(i));
  }
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    for (Eigen::Index j = i + 1; j < s.size(); ++j) sum += s(i) * s(j);
  return sum;
}

double schmidt_negativity(const MultipartiteState& state, int label) {
  if (label < 1 || static_cast<std::size_t>(label) > state.size())
    throw UnknownLabel("qubit " + std::to_string(label) + " is not in this state");
  return schmidt_negativity(embed_state(state), state.size(), static_cast<std::size_t>(label - 1));
}

double tripartite_negativity(const DensityMatrix& rho) {
  if (rho.qubits() != 3)
    throw WrongQubitCount("tripartite negativity needs 3 qubits, got " + std::to_string(rho.qubits()));
  double product = 1.0;
  for (int label : rho.labels) product *= negativity(rho, label);
  return std::cbrt(product);
}

namespace {

// Square roots of the eigenvalues of rho * rho_tilde, descending. They are the
// singular values of A = sqrt(rho) Y sqrt(rho)^*, since sqrt(rho) rho_tilde
// sqrt(rho) = A A^dagger; taking them from A avoids square roots of round-off.
Eigen::Vector4d wootters_roots(const DensityMatrix& rho) {
  if (rho.qubits() != 2)
    throw WrongQubitCount("concurrence needs 2 qubits, got " + std::to_string(rho.qubits()));
  require_shape(rho);

  // sigma_y (x) sigma_y
  CMatrix flip = CMatrix::Zero(4, 4);
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho.rho);
  Eigen::Vector4d root;
  for (Eigen::Index i = 0; i < 4; ++i) {
    const double mu = eig.eigenvalues()(i);
    root(i) = mu > kZeroEigen ? std::sqrt(mu) : 0.0;
  }
  const CMatrix sqrt_rho = eig.eigenvectors() * root.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  const CMatrix a = sqrt_rho * flip * sqrt_rho.conjugate();
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues();
}

}  // namespace

std::vector<double> wootters_eigenvalues(const DensityMatrix& rho) {
  const Eigen::Vector4d s = wootters_roots(rho);
  std::vector<double> lambdas(4);
  for (Eigen::Index i = 0; i < 4; ++i) lambdas[static_cast<std::size_t>(i)] = s(i) * s(i);
  return lambdas;
}

double concurrence(const DensityMatrix& rho) {
  const Eigen::Vector4d s = wootters_roots(rho);
  return std::clamp(s(0) - s(1) - s(2) - s(3), 0.0, 1.0);
}

}  // namespace wgqed
