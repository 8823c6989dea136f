#include "wgqed/scattering.hpp"

#include <cmath>
#include <string>

namespace wgqed {
namespace {

constexpr Complex kI{0.0, 1.0};

CMatrix matrix_at(const ChainConfig& config, double k) {
  const auto n = static_cast<Eigen::Index>(config.size());
  const double vg = config.group_velocity;
  CMatrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& ej = config.emitters[static_cast<std::size_t>(j)];
    for (Eigen::Index l = 0; l <= j; ++l) {
      const auto& el = config.emitters[static_cast<std::size_t>(l)];
      const double gap = std::abs(ej.position - el.position);
      const Complex m = -kI * (ej.coupling * el.coupling / vg) * std::polar(1.0, k * gap);
      a(j, l) = m;
      a(l, j) = m;
    }
    a(j, j) -= Complex(ej.detuning, 0.5 * ej.dissipation);
  }
  return a;
}

CVector drive_at(const ChainConfig& config, double k) {
  const auto n = static_cast<Eigen::Index>(config.size());
  CVector b(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& e = config.emitters[static_cast<std::size_t>(j)];
    b(j) = -e.coupling * std::polar(1.0, k * e.position);
  }
  return b;
}

ScatteringSolution solve_at(const ChainConfig& config, double k) {
  const CMatrix a = matrix_at(config, k);
  const CVector b = drive_at(config, k);
  const std::size_t n = config.size();

  std::vector<Eigen::Index> coupled;
  for (std::size_t j = 0; j < n; ++j)
    if (config.emitters[j].coupling > 0.0) coupled.push_back(static_cast<Eigen::Index>(j));

  ScatteringSolution sol;
  sol.xi = CVector::Zero(static_cast<Eigen::Index>(n));
  if (!coupled.empty()) {
    const auto m = static_cast<Eigen::Index>(coupled.size());
    CMatrix sub(m, m);
    CVector rhs(m);
    for (Eigen::Index p = 0; p < m; ++p) {
      rhs(p) = b(coupled[p]);
      for (Eigen::Index q = 0; q < m; ++q) sub(p, q) = a(coupled[p], coupled[q]);
    }
    Eigen::PartialPivLU<CMatrix> lu(sub);
    const double rcond = lu.rcond();
    if (!(rcond >= kSingularRcond))
      throw SingularSystem("stationary equations are singular (rcond " + std::to_string(rcond) + ")",
                           rcond);
    const CVector x = lu.solve(rhs);
    for (Eigen::Index p = 0; p < m; ++p) sol.xi(coupled[p]) = x(p);
  }

  // Each emitter shifts the right-mover envelope by -i V xi e^{-ikd} / v_g and
  // the left-mover envelope by +i V xi e^{ikd} / v_g (going left to right).
  const double vg = config.group_velocity;
  std::vector<Complex> right_jump(n), left_jump(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& e = config.emitters[j];
    const Complex vx = e.coupling / vg * sol.xi(static_cast<Eigen::Index>(j));
    right_jump[j] = -kI * vx * std::polar(1.0, -k * e.position);
    left_jump[j] = kI * vx * std::polar(1.0, k * e.position);
  }

  Complex right{1.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    right += right_jump[j];
    if (j + 1 < n) sol.segment_right.push_back(right);
  }
  sol.transmission = right;

  // Left movers vanish to the right of the chain; accumulate leftwards.
  sol.segment_left.assign(n > 0 ? n - 1 : 0, Complex{});
  Complex left{0.0, 0.0};
  for (std::size_t j = n; j-- > 0;) {
    left -= left_jump[j];
    if (j > 0) sol.segment_left[j - 1] = left;
  }
  sol.reflection = left;
  return sol;
}

}  // namespace

CouplingMatrix build_matrix(const ChainConfig& config) {
  ensure_valid(config);
  return {matrix_at(config, config.wavenumber)};
}

CVector drive_vector(const ChainConfig& config) { return drive_at(config, config.wavenumber); }

ScatteringSolution solve_stationary(const ChainConfig& config) {
  ensure_valid(config);
  return solve_at(config, config.wavenumber);
}

ScatteringSolution solve_stationary_at(const ChainConfig& config, double k, double carrier) {
  ensure_valid(config);
  if (!std::isfinite(k)) throw InvalidConfig(ConfigFault::NonFiniteValue);
  ChainConfig shifted = config;
  const double shift = config.group_velocity * (k - carrier);
  for (auto& e : shifted.emitters) e.detuning += shift;
  return solve_at(shifted, k);
}

FieldValue field_profile(const ChainConfig& config, const ScatteringSolution& solution, double x) {
  const std::size_t n = config.size();
  if (solution.size() != n) throw DimensionMismatch("solution does not match configuration");

  // Envelope of segment s (0 = left of the chain, n = right of it).
  auto right_env = [&](std::size_t s) -> Complex {
    if (s == 0) return 1.0;
    if (s == n) return solution.transmission;
    return solution.segment_right[s - 1];
  };
  auto left_env = [&](std::size_t s) -> Complex {
    if (s == 0) return solution.reflection;
    if (s == n) return 0.0;
    return solution.segment_left[s - 1];
  };

  Complex r_env{}, l_env{};
  bool on_emitter = false;
  for (std::size_t j = 0; j < n; ++j) {
    if (x == config.emitters[j].position) {
      r_env = 0.5 * (right_env(j) + right_env(j + 1));
      l_env = 0.5 * (left_env(j) + left_env(j + 1));
      on_emitter = true;
      break;
    }
  }
  if (!on_emitter) {
    std::size_t s = 0;
    while (s < n && config.emitters[s].position < x) ++s;
    r_env = right_env(s);
    l_env = left_env(s);
  }
  const double k = config.wavenumber;
  return {r_env * std::polar(1.0, k * x), l_env * std::polar(1.0, -k * x)};
}

MultipartiteState make_state(const CVector& amplitudes, double herald_probability) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw ZeroExcitation("state has no excitation");
  CVector c = amplitudes / norm;
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    if (std::abs(c(j)) > 0.0) {
      c *= std::polar(1.0, -std::arg(c(j)));
      c(j) = std::abs(c(j));
      break;
    }
  }
  return {std::move(c), herald_probability};
}

MultipartiteState project_state(const ScatteringSolution& solution) {
  const double total = solution.total_excitation();
  if (!(total > 0.0)) throw ZeroExcitation("no emitter is excited; nothing to herald");
  return make_state(solution.xi, total);
}

double state_fidelity(const MultipartiteState& a, const MultipartiteState& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("fidelity between states of " + std::to_string(a.size()) + " and " +
                            std::to_string(b.size()) + " emitters");
  return std::norm(a.amplitudes.dot(b.amplitudes));
}

MultipartiteState w_state(std::size_t count) {
  return make_state(CVector::Ones(static_cast<Eigen::Index>(count)));
}

}  // namespace wgqed
