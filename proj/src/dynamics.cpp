#include "wgqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include <boost/math/tools/minima.hpp>
#include <gsl/gsl_sf_expint.h>

#include "wgqed/entanglement.hpp"

namespace wgqed {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};
// Largest k grid chosen to keep periodic images out of the time window.
constexpr std::size_t kMaxSpanPoints = std::size_t{1} << 22;

double sign_of(PulseShape shape) { return shape == PulseShape::ExponentialDecay ? 1.0 : -1.0; }

// \int_{|u| > K} e^{-i u T} / u^2 du
double truncated_tail(double K, double T) {
  const double a = std::abs(T);
  if (a == 0.0) return 2.0 / K;
  return 2.0 * (std::cos(K * a) / K - a * (0.5 * kPi - gsl_sf_Si(K * a)));
}

// Runs body(i) for i in [0, count) on a few threads; each index is written by
// exactly one worker.
template <class Body>
void parallel_for(std::size_t count, Body body) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), (count + 63) / 64);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
}

void require_front_left_of_chain(const ChainConfig& config, const WaveformSpec& waveform) {
  if (!(waveform.front_position < config.emitters.front().position))
    throw InvalidWaveform("photon edge must start to the left of the first emitter");
}

// Longest decay time among the collective modes the photon drives at the
// carrier. The Markovian emitter dynamics is d xi / dt = -i A xi with A the
// stationary matrix, so mode m decays at -Im(lambda_m); modes whose share of
// the drive vector is below 1e-6 are ignored. Modes slower than a thousand
// photon or emitter times count as trapped and are capped there.
double slowest_time(const ChainConfig& config, const WaveformSpec& waveform) {
  ChainConfig coupled;
  coupled.wavenumber = waveform.carrier;
  coupled.group_velocity = config.group_velocity;
  for (const auto& e : config.emitters)
    if (e.coupling > 0.0) coupled.emitters.push_back(e);
  if (coupled.emitters.empty()) return 0.0;

  Eigen::ComplexEigenSolver<CMatrix> eig(build_matrix(coupled).entries);
  const CVector drive = drive_vector(coupled);
  const CVector share = eig.eigenvectors().partialPivLu().solve(drive);
  double slowest_rate = std::numeric_limits<double>::infinity();
  double fastest_rate = 0.0;
  for (Eigen::Index m = 0; m < share.size(); ++m) {
    const double rate = -eig.eigenvalues()(m).imag();
    fastest_rate = std::max(fastest_rate, rate);
    if (std::abs(share(m)) * eig.eigenvectors().col(m).norm() > 1e-6 * drive.norm())
      slowest_rate = std::min(slowest_rate, rate);
  }
  const double cap = 1e3 * std::max(waveform.time_constant, fastest_rate > 0.0 ? 1.0 / fastest_rate : 0.0);
  return slowest_rate > 1.0 / cap ? 1.0 / slowest_rate : cap;
}

bool any_coupled(const ChainConfig& config) {
  return std::any_of(config.emitters.begin(), config.emitters.end(),
                     [](const EmitterParams& e) { return e.coupling > 0.0; });
}

// Time span the computed signal must fit in to stay clear of the periodic
// images of a uniform k grid.
double signal_span(const ChainConfig& config, const WaveformSpec& waveform, double t_lo, double t_hi) {
  const double tau = waveform.time_constant;
  const double start = arrival_time(config, waveform, 0) -
                       (waveform.shape == PulseShape::ExponentialGrowth ? 40.0 * tau : 0.0);
  const double end = arrival_time(config, waveform, config.size() - 1) + 40.0 * tau +
                     40.0 * slowest_time(config, waveform);
  return std::max(t_hi, end) - std::min(t_lo, start);
}

std::size_t points_for_span(const ChainConfig& config, const WaveformSpec& waveform, double half_width_factor,
                            std::size_t requested, double span) {
  // Image period of the trapezoid sum is 2 pi / (v_g dk) with dk = 2K / (n - 1).
  const double group_velocity = config.group_velocity;
  const double K = spectral_window(config, waveform, half_width_factor);
  const double needed = 2.0 * span * group_velocity * K / kPi + 1.0;
  std::size_t n = requested;
  while (static_cast<double>(n) < needed && n < kMaxSpanPoints) n *= 2;
  return n;
}

struct Converged {
  SpectralPropagator propagator;
  std::vector<CVector> amplitudes;
};

std::vector<CVector> sample(const SpectralPropagator& prop, std::span<const double> times) {
  std::vector<CVector> out(times.size());
  parallel_for(times.size(), [&](std::size_t i) { out[i] = prop.amplitudes(times[i]); });
  return out;
}

Converged converge(const ChainConfig& config, const WaveformSpec& waveform, std::span<const double> times,
                   const QuadratureOptions& quad) {
  const double t_lo = times.empty() ? 0.0 : times.front();
  const double t_hi = times.empty() ? 0.0 : times.back();
  std::size_t points = points_for_span(config, waveform, quad.half_width, quad.points,
                                       signal_span(config, waveform, t_lo, t_hi));

  SpectralPropagator coarse(config, waveform, points, quad.half_width, quad.tail_correction);
  auto coarse_amp = sample(coarse, times);
  double change = 0.0;
  for (int doubling = 0; doubling < std::max(quad.max_doublings, 1); ++doubling) {
    points *= 2;
    SpectralPropagator fine(config, waveform, points, quad.half_width, quad.tail_correction);
    auto fine_amp = sample(fine, times);
    change = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
      for (Eigen::Index j = 0; j < fine_amp[i].size(); ++j)
        change = std::max(change, std::abs(std::norm(fine_amp[i](j)) - std::norm(coarse_amp[i](j))));
    if (change < quad.tolerance) return {std::move(fine), std::move(fine_amp)};
    coarse = std::move(fine);
    coarse_amp = std::move(fine_amp);
  }
  throw QuadratureNotConverged("k quadrature did not converge; last change " + std::to_string(change), change);
}

TimeSeries assemble(std::vector<double> times, const std::vector<CVector>& amps, std::size_t n,
                    double excitation_floor) {
  TimeSeries s;
  s.times = std::move(times);
  const std::size_t count = s.times.size();
  s.amplitude.assign(n, std::vector<Complex>(count));
  s.excitation.assign(n, std::vector<double>(count));
  s.total.assign(count, 0.0);
  s.pairs = all_pairs(n);
  s.concurrence.assign(s.pairs.size(), std::vector<double>(count, 0.0));

  std::vector<std::vector<double>> conc(count);
  parallel_for(count, [&](std::size_t i) { conc[i] = pair_concurrences(amps[i], s.pairs, excitation_floor); });
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex a = amps[i](static_cast<Eigen::Index>(j));
      s.amplitude[j][i] = a;
      s.excitation[j][i] = std::norm(a);
      s.total[i] += std::norm(a);
    }
    for (std::size_t p = 0; p < s.pairs.size(); ++p) s.concurrence[p][i] = conc[i][p];
  }
  return s;
}

}  // namespace

void ensure_valid(const WaveformSpec& waveform) {
  if (!(waveform.time_constant > 0.0) || !std::isfinite(waveform.time_constant))
    throw InvalidWaveform("time constant must be positive");
  if (!(waveform.carrier > 0.0) || !std::isfinite(waveform.carrier))
    throw InvalidWaveform("carrier wavenumber must be positive");
  if (!std::isfinite(waveform.front_position)) throw InvalidWaveform("front position must be finite");
}

double spectral_half_width(const WaveformSpec& waveform, double group_velocity) {
  return 1.0 / (2.0 * group_velocity * waveform.time_constant);
}

Complex spectral_amplitude(const WaveformSpec& waveform, double k, double group_velocity) {
  const double gamma = spectral_half_width(waveform, group_velocity);
  const double u = k - waveform.carrier;
  const double scale = 1.0 / std::sqrt(group_velocity * waveform.time_constant);
  const Complex denom{gamma, -sign_of(waveform.shape) * u};
  return scale * std::polar(1.0, -u * waveform.front_position) / denom;
}

double spectral_window(const ChainConfig& config, const WaveformSpec& waveform, double half_width_factor) {
  const double vg = config.group_velocity;
  double local = 0.0, collective = 0.0;
  for (const auto& e : config.emitters) {
    local = std::max(local, std::abs(e.detuning) + 0.5 * e.dissipation);
    collective += e.coupling * e.coupling / vg;
  }
  return half_width_factor * std::max(1.0 / (vg * waveform.time_constant), (local + collective) / vg);
}

WavenumberGrid make_grid(const WaveformSpec& waveform, std::size_t points, double half_width) {
  if (points < 2) throw InvalidWaveform("quadrature needs at least two points");
  if (!(half_width > 0.0)) throw InvalidWaveform("quadrature half width must be positive");
  WavenumberGrid g;
  g.half_width = half_width;
  const double step = 2.0 * g.half_width / static_cast<double>(points - 1);
  g.nodes.resize(points);
  g.weights.assign(points, step);
  for (std::size_t n = 0; n < points; ++n)
    g.nodes[n] = waveform.carrier - g.half_width + step * static_cast<double>(n);
  g.nodes.back() = waveform.carrier + g.half_width;
  g.weights.front() *= 0.5;
  g.weights.back() *= 0.5;
  return g;
}

double spectral_norm(const WaveformSpec& waveform, const WavenumberGrid& grid, double group_velocity,
                     bool include_tails) {
  double sum = 0.0;
  for (std::size_t n = 0; n < grid.nodes.size(); ++n)
    sum += grid.weights[n] * std::norm(spectral_amplitude(waveform, grid.nodes[n], group_velocity));
  if (include_tails) {
    // |f|^2 = (1 / v_g tau) / (u^2 + gamma^2)
    const double gamma = spectral_half_width(waveform, group_velocity);
    const double height = 1.0 / (group_velocity * waveform.time_constant);
    sum += 2.0 * height / gamma * (0.5 * kPi - std::atan(grid.half_width / gamma));
  }
  return sum / (2.0 * kPi);
}

SpectralPropagator::SpectralPropagator(const ChainConfig& config, const WaveformSpec& waveform,
                                       std::size_t points, double half_width_factor, bool tail_correction)
    : group_velocity_(config.group_velocity), tail_(tail_correction) {
  ensure_valid(config);
  ensure_valid(waveform);
  require_front_left_of_chain(config, waveform);

  const auto grid = make_grid(waveform, points, spectral_window(config, waveform, half_width_factor));
  const auto n = static_cast<Eigen::Index>(config.size());
  half_width_ = grid.half_width;
  offsets_.resize(points);
  weighted_.resize(static_cast<Eigen::Index>(points), n);

  std::vector<std::optional<SingularSystem>> failures(points);
  parallel_for(points, [&](std::size_t m) {
    const double k = grid.nodes[m];
    offsets_[m] = k - waveform.carrier;
    try {
      const auto sol = solve_stationary_at(config, k, waveform.carrier);
      const Complex w = grid.weights[m] * spectral_amplitude(waveform, k, config.group_velocity) / (2.0 * kPi);
      weighted_.row(static_cast<Eigen::Index>(m)) = (w * sol.xi).transpose();
    } catch (const SingularSystem& e) {
      failures[m] = e;
    }
  });
  for (const auto& f : failures)
    if (f) throw *f;

  // Leading tail of f(k) xi_j(k): sign * i * V_j e^{i k0 d_j} / (v_g sqrt(v_g tau)) / u^2.
  tail_coeff_.resize(n);
  tail_shift_.resize(static_cast<std::size_t>(n));
  const double scale = 1.0 / std::sqrt(config.group_velocity * waveform.time_constant);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& e = config.emitters[static_cast<std::size_t>(j)];
    tail_coeff_(j) = sign_of(waveform.shape) * kI * scale * e.coupling / config.group_velocity *
                     std::polar(1.0, waveform.carrier * e.position) / (2.0 * kPi);
    tail_shift_[static_cast<std::size_t>(j)] = waveform.front_position - e.position;
  }
}

CVector SpectralPropagator::amplitudes(double t) const {
  const auto n = weighted_.cols();
  CVector out = CVector::Zero(n);
  // Nodes are uniform, so the phase advances by a fixed rotation; it is
  // re-anchored exactly every kAnchor nodes to stop round-off from drifting.
  constexpr std::size_t kAnchor = 64;
  const std::size_t count = offsets_.size();
  const double step = count > 1 ? (offsets_.back() - offsets_.front()) / static_cast<double>(count - 1) : 0.0;
  const Complex rotation = std::polar(1.0, -group_velocity_ * step * t);
  Complex phase{1.0, 0.0};
  for (std::size_t m = 0; m < count; ++m) {
    if (m % kAnchor == 0 || m + 1 == count) phase = std::polar(1.0, -group_velocity_ * offsets_[m] * t);
    const auto row = static_cast<Eigen::Index>(m);
    for (Eigen::Index j = 0; j < n; ++j) out(j) += phase * weighted_(row, j);
    phase *= rotation;
  }
  if (tail_) {
    for (Eigen::Index j = 0; j < n; ++j)
      out(j) += tail_coeff_(j) * truncated_tail(half_width_, group_velocity_ * t + tail_shift_[static_cast<std::size_t>(j)]);
  }
  return out;
}

std::optional<std::size_t> TimeSeries::pair_index(EmitterPair pair) const {
  for (std::size_t p = 0; p < pairs.size(); ++p)
    if (pairs[p] == pair) return p;
  return std::nullopt;
}

const std::vector<double>& TimeSeries::concurrence_of(EmitterPair pair) const {
  const auto p = pair_index(pair);
  if (!p)
    throw UnknownPair("no concurrence recorded for pair (" + std::to_string(pair.first) + "," +
                      std::to_string(pair.second) + ")");
  return concurrence[*p];
}

std::vector<EmitterPair> all_pairs(std::size_t emitters) {
  std::vector<EmitterPair> pairs;
  for (std::size_t j = 1; j <= emitters; ++j)
    for (std::size_t l = j + 1; l <= emitters; ++l) pairs.push_back({static_cast<int>(j), static_cast<int>(l)});
  return pairs;
}

std::vector<double> pair_concurrences(const CVector& amplitudes, const std::vector<EmitterPair>& pairs,
                                      double excitation_floor) {
  std::vector<double> out(pairs.size(), 0.0);
  if (amplitudes.squaredNorm() < excitation_floor || pairs.empty()) return out;
  const auto rho = density_from_pure(make_state(amplitudes));
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const int keep[] = {pairs[p].first, pairs[p].second};
    out[p] = concurrence(partial_trace(rho, keep));
  }
  return out;
}

double arrival_time(const ChainConfig& config, const WaveformSpec& waveform, std::size_t emitter) {
  return (config.emitters.at(emitter).position - waveform.front_position) / config.group_velocity;
}

std::vector<double> default_time_grid(const ChainConfig& config, const WaveformSpec& waveform,
                                      std::size_t points, double decay_constants) {
  const double tau = waveform.time_constant;
  double start = arrival_time(config, waveform, 0);
  if (waveform.shape == PulseShape::ExponentialGrowth) start -= decay_constants * tau;
  const double end = arrival_time(config, waveform, config.size() - 1) + decay_constants * tau;
  std::vector<double> times(std::max<std::size_t>(points, 2));
  const double step = (end - start) / static_cast<double>(times.size() - 1);
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = start + step * static_cast<double>(i);
  times.back() = end;
  return times;
}

TimeSeries evolve(const ChainConfig& config, const WaveformSpec& waveform, std::span<const double> times,
                  const EvolveOptions& options) {
  ensure_valid(config);
  ensure_valid(waveform);
  require_front_left_of_chain(config, waveform);
  if (!std::is_sorted(times.begin(), times.end()) ||
      std::adjacent_find(times.begin(), times.end()) != times.end())
    throw InvalidWaveform("time grid must be strictly increasing");

  const std::size_t n = config.size();
  auto [prop, amps] = converge(config, waveform, times, options.quadrature);
  std::vector<double> grid(times.begin(), times.end());

  if (options.polish_minima && times.size() >= 3) {
    const auto pairs = all_pairs(n);
    std::vector<std::vector<double>> conc(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
      conc[i] = pair_concurrences(amps[i], pairs, options.excitation_floor);

    std::vector<double> extra;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      for (std::size_t i = 1; i + 1 < times.size(); ++i) {
        const double c = conc[i][p];
        if (!(c < conc[i - 1][p] && c <= conc[i + 1][p] && c < options.polish_below)) continue;
        // Ignore dips that only reflect the excitation floor.
        if (amps[i - 1].squaredNorm() < options.excitation_floor ||
            amps[i + 1].squaredNorm() < options.excitation_floor)
          continue;
        auto objective = [&](double t) {
          const std::vector<EmitterPair> one{pairs[p]};
          return pair_concurrences(prop.amplitudes(t), one, options.excitation_floor)[0];
        };
        std::uintmax_t iterations = 200;
        const auto best = boost::math::tools::brent_find_minima(objective, times[i - 1], times[i + 1], 50,
                                                                iterations);
        if (best.second < c) extra.push_back(best.first);
      }
    }
    if (!extra.empty()) {
      std::sort(extra.begin(), extra.end());
      std::vector<CVector> extra_amp = sample(prop, extra);
      std::vector<double> merged_t;
      std::vector<CVector> merged_a;
      std::size_t a = 0, b = 0;
      while (a < grid.size() || b < extra.size()) {
        const bool take_extra = b < extra.size() && (a >= grid.size() || extra[b] < grid[a]);
        const double t = take_extra ? extra[b] : grid[a];
        const CVector& v = take_extra ? extra_amp[b] : amps[a];
        if (merged_t.empty() || t > merged_t.back()) {
          merged_t.push_back(t);
          merged_a.push_back(v);
        }
        take_extra ? ++b : ++a;
      }
      grid = std::move(merged_t);
      amps = std::move(merged_a);
    }
  }
  return assemble(std::move(grid), amps, n, options.excitation_floor);
}

double peak_success_probability(const ChainConfig& config, const WaveformSpec& waveform,
                                const QuadratureOptions& quadrature) {
  ensure_valid(config);
  ensure_valid(waveform);
  require_front_left_of_chain(config, waveform);
  if (!any_coupled(config)) return 0.0;

  const double tau = waveform.time_constant;
  const double window = 20.0 * std::max(tau, slowest_time(config, waveform));
  double start = arrival_time(config, waveform, 0);
  if (waveform.shape == PulseShape::ExponentialGrowth) start -= 20.0 * tau;
  const double end = arrival_time(config, waveform, config.size() - 1) + window;
  constexpr std::size_t kSamples = 2001;
  std::vector<double> times(kSamples);
  for (std::size_t i = 0; i < kSamples; ++i)
    times[i] = start + (end - start) * static_cast<double>(i) / static_cast<double>(kSamples - 1);

  auto [prop, amps] = converge(config, waveform, times, quadrature);
  std::size_t best = 0;
  for (std::size_t i = 1; i < kSamples; ++i)
    if (amps[i].squaredNorm() > amps[best].squaredNorm()) best = i;

  const double lo = times[best == 0 ? 0 : best - 1];
  const double hi = times[std::min(best + 1, kSamples - 1)];
  std::uintmax_t iterations = 200;
  const auto found = boost::math::tools::brent_find_minima(
      [&](double t) { return -prop.amplitudes(t).squaredNorm(); }, lo, hi, 40, iterations);
  return std::max(amps[best].squaredNorm(), -found.second);
}

std::vector<SuddenDeathEvent> detect_sudden_death(const TimeSeries& series, EmitterPair pair, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("sudden-death threshold must be positive");
  const auto& c = series.concurrence_of(pair);
  const auto& t = series.times;

  auto crossing = [&](std::size_t i, std::size_t j) {
    // Linear interpolation of the threshold crossing between samples i and j.
    const double span = c[j] - c[i];
    if (span == 0.0) return t[i];
    return t[i] + (threshold - c[i]) / span * (t[j] - t[i]);
  };

  std::vector<SuddenDeathEvent> events;
  std::size_t i = 1;
  while (i < c.size()) {
    if (c[i] < threshold && c[i - 1] >= threshold) {
      std::size_t end = i;
      while (end + 1 < c.size() && c[end + 1] < threshold) ++end;
      if (end + 1 >= c.size()) break;
      events.push_back({pair, crossing(i - 1, i), crossing(end, end + 1)});
      i = end + 1;
    } else {
      ++i;
    }
  }
  return events;
}

}  // namespace wgqed
