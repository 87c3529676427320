#pragma once

// Trajectories, positive-increment quadrature of the non-Markovianity
// functional, witness intervals and the supremum search over initial states.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "nmcoh/channels.hpp"
#include "nmcoh/coherence.hpp"
#include "nmcoh/error.hpp"

namespace nmcoh {

struct TimeSeries {
  double t0 = 0.0;
  double dt = 1e-4;
  std::vector<double> values;

  double t(std::size_t i) const noexcept { return t0 + static_cast<double>(i) * dt; }
  std::size_t size() const noexcept { return values.size(); }
};

inline void validate(const TimeSeries& s) {
  require(s.dt > 0.0 && std::isfinite(s.dt), ErrorCode::EmptyGrid, "series step must be positive");
  require(s.values.size() >= 3, ErrorCode::EmptyGrid, "series needs at least 3 samples");
}

struct Interval {
  double t_start = 0.0;
  double t_end = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct WitnessIntervals {
  std::vector<Interval> intervals;
  std::size_t size() const noexcept { return intervals.size(); }
  bool empty() const noexcept { return intervals.empty(); }
};

// ---------------------------------------------------------------- trajectories

inline TimeSeries trajectory(const ChannelFactors& factors, const InitialQubitState& state,
                             const CoherenceMeasure& measure) {
  validate(state);
  const ReferenceBasis basis{2};
  TimeSeries out{0.0, factors.grid.dt, std::vector<double>(factors.grid.size)};
  for (std::size_t i = 0; i < factors.grid.size; ++i) out.values[i] = evaluate(measure, factors.evolve(state, i), basis);
  return out;
}

inline TimeSeries trajectory(const ChannelSpec& channel, const InitialQubitState& state,
                             const CoherenceMeasure& measure, const TimeGrid& grid) {
  return trajectory(channel_factors(channel, grid), state, measure);
}

/// Trace distance between the two evolved states at every grid point.
inline TimeSeries blp_witness(const ChannelFactors& factors, const std::pair<InitialQubitState, InitialQubitState>& pair) {
  validate(pair.first);
  validate(pair.second);
  TimeSeries out{0.0, factors.grid.dt, std::vector<double>(factors.grid.size)};
  for (std::size_t i = 0; i < factors.grid.size; ++i)
    out.values[i] = trace_distance(factors.evolve(pair.first, i), factors.evolve(pair.second, i));
  return out;
}

inline TimeSeries blp_witness(const ChannelSpec& channel, const std::pair<InitialQubitState, InitialQubitState>& pair,
                              const TimeGrid& grid) {
  return blp_witness(channel_factors(channel, grid), pair);
}

// ---------------------------------------------------------------- increments

/// Sum of the step increments that exceed `threshold` (all positive ones by
/// default). This is the restricted integral of dC/dt over {dC/dt > 0}.
inline double positive_increment_integral(const TimeSeries& series, double threshold = 0.0) {
  validate(series);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < series.size(); ++i) {
    const double d = series.values[i + 1] - series.values[i];
    if (d > threshold) sum += d;
  }
  return sum;
}

/// Maximal runs of steps whose increment exceeds `threshold`. A run over
/// steps k..m is reported as [t_k, t_{m+1}].
inline WitnessIntervals witness_intervals(const TimeSeries& series, double threshold = 1e-12) {
  validate(series);
  WitnessIntervals out;
  std::optional<std::size_t> open;
  const std::size_t steps = series.size() - 1;
  for (std::size_t k = 0; k < steps; ++k) {
    const bool up = series.values[k + 1] - series.values[k] > threshold;
    if (up && !open) open = k;
    if (!up && open) {
      out.intervals.push_back({series.t(*open), series.t(k)});
      open.reset();
    }
  }
  if (open) out.intervals.push_back({series.t(*open), series.t(steps)});
  return out;
}

/// Runs of grid steps whose midpoint rate is negative, in the same [t_k, t_{m+1}]
/// convention as witness_intervals.
inline WitnessIntervals gamma_negative_intervals(const DecayProfile& profile, const TimeGrid& grid) {
  validate(profile);
  require(grid.size >= 3, ErrorCode::EmptyGrid, "grid needs at least 3 points");
  TimeSeries marker{0.0, grid.dt, std::vector<double>(grid.size, 0.0)};
  // Encode "step k has gamma < 0" as a unit increment so the run logic is shared.
  double level = 0.0;
  for (std::size_t k = 0; k + 1 < grid.size; ++k) {
    if (gamma_eval(profile, grid.t(k) + 0.5 * grid.dt) < 0.0) level += 1.0;
    else level -= 1.0;
    marker.values[k + 1] = level;
  }
  return witness_intervals(marker, 0.0);
}

/// Exact {gamma < 0} set of the Lorentzian dephasing rate on [0, t_max]: for
/// W > lambda/2 the rate changes sign at its poles t = 2(k pi - atan(d/lambda))/d
/// and its zeros t = 2 k pi / d, and is negative in between. Empty otherwise.
inline WitnessIntervals lorentzian_backflow_intervals(double W, double lambda, double t_max) {
  WitnessIntervals out;
  if (!(W > lambda / 2.0)) return out;
  const double pi = 3.141592653589793;
  const double d = std::sqrt(4.0 * W * W - lambda * lambda);
  for (int k = 1;; ++k) {
    const double pole = 2.0 * (k * pi - std::atan(d / lambda)) / d;
    if (pole >= t_max) break;
    out.intervals.push_back({pole, std::min(t_max, 2.0 * k * pi / d)});
  }
  return out;
}

struct EquivalenceResult {
  bool matched = false;
  double max_boundary_gap = 0.0;
};

/// Matched iff both sets have the same number of intervals and every pair of
/// corresponding boundaries lies within 2 dt. The gap is reported whenever
/// the counts agree (infinity otherwise).
inline EquivalenceResult equivalence_report(const WitnessIntervals& a, const WitnessIntervals& b, double dt) {
  if (a.size() != b.size()) return {false, std::numeric_limits<double>::infinity()};
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    gap = std::max(gap, std::abs(a.intervals[i].t_start - b.intervals[i].t_start));
    gap = std::max(gap, std::abs(a.intervals[i].t_end - b.intervals[i].t_end));
  }
  return {gap <= 2.0 * dt * (1.0 + 1e-9), gap};
}

// ---------------------------------------------------------------- search

/// Grid over the unit square (x, y) mapped onto coherent states of a family:
///   PD  a = 2x - 1,  |b| = y sqrt(1 - a^2)
///   AD  a = x,       |b| = y sqrt(a (1 - a))
///   RU  (r1, r2) = y (cos 2 pi x, sin 2 pi x), r3 = 0
/// With full_ball the RU search adds a third axis z, r3 = (2z - 1) sqrt(1 - y^2).
/// y runs over (0, 1] so every point carries coherence.
struct InitialStateSearch {
  ChannelFamily family = ChannelFamily::PD;
  std::size_t points_x = 21;
  std::size_t points_y = 21;
  int refinement = 3;
  bool full_ball = false;
  std::size_t points_z = 11;
  double increment_threshold = 1e-12;
  bool keep_table = false;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct StateValue {
  InitialQubitState state;
  double value = 0.0;
};

struct NonMarkovReport {
  double measure_value = 0.0;
  InitialQubitState argmax_state;
  WitnessIntervals intervals;
  std::vector<StateValue> per_state_values;
  double dt = 0.0;
  double t_max = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

inline constexpr double kTwoPi = 6.283185307179586;

struct SearchPoint {
  double x = 0.0, y = 0.0, z = 0.5;
};

inline InitialQubitState map_point(ChannelFamily family, const SearchPoint& p) {
  switch (family) {
    case ChannelFamily::PD: {
      const double a = 2.0 * p.x - 1.0;
      return PdState{a, p.y * std::sqrt(std::max(0.0, 1.0 - a * a))};
    }
    case ChannelFamily::AD: {
      const double a = p.x;
      return AdState{a, p.y * std::sqrt(std::max(0.0, a * (1.0 - a)))};
    }
    case ChannelFamily::RU: {
      // Inside the ball: in-plane radius y, r3 fills the remaining height.
      const double r3 = (2.0 * p.z - 1.0) * std::sqrt(std::max(0.0, 1.0 - p.y * p.y));
      return RuState{p.y * std::cos(kTwoPi * p.x), p.y * std::sin(kTwoPi * p.x), r3};
    }
  }
  fail(ErrorCode::UnsupportedChannel, "unknown family");
}

// Tie-break key: smaller |a| first, then larger |b|.
inline std::pair<double, double> tie_key(const InitialQubitState& s) {
  if (const auto* pd = std::get_if<PdState>(&s)) return {std::abs(pd->a), -std::abs(pd->b)};
  if (const auto* ad = std::get_if<AdState>(&s)) return {std::abs(ad->a), -std::abs(ad->b)};
  const auto& ru = std::get<RuState>(s);
  return {std::abs(ru.r3), -std::hypot(ru.r1, ru.r2)};
}

inline bool better(double v, const InitialQubitState& s, double best_v, const InitialQubitState& best_s) {
  if (v != best_v) return v > best_v;
  return tie_key(s) < tie_key(best_s);
}

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_lock;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += threads) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_lock);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline std::vector<double> axis(std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

}  // namespace detail

/// sup over coherent initial states of the positive-increment integral.
/// Coarse grid first, then `refinement` rounds of a 5-point-per-axis local
/// grid whose spacing halves every round, centred on the incumbent.
inline NonMarkovReport nonmarkov_measure(const ChannelSpec& channel, const CoherenceMeasure& measure,
                                         const InitialStateSearch& search, const TimeGrid& grid) {
  require(family_of(channel) == search.family, ErrorCode::UnsupportedChannel, "search family differs from channel");
  require(search.points_x >= 1 && search.points_y >= 1 && (!search.full_ball || search.points_z >= 1),
          ErrorCode::EmptySearchGrid, "search grid has no points");
  require(search.refinement >= 0, ErrorCode::EmptySearchGrid, "negative refinement rounds");
  const bool three_d = search.family == ChannelFamily::RU && search.full_ball;
  const ChannelFactors factors = channel_factors(channel, grid);

  NonMarkovReport report;
  report.dt = grid.dt;
  report.t_max = grid.t_max();
  bool have_best = false;
  detail::SearchPoint best_point;
  double best_value = 0.0;

  auto run = [&](const std::vector<detail::SearchPoint>& points) {
    std::vector<InitialQubitState> states;
    states.reserve(points.size());
    std::vector<detail::SearchPoint> kept;
    for (const auto& p : points) {
      auto s = detail::map_point(search.family, p);
      if (!is_coherent(s)) continue;
      states.push_back(s);
      kept.push_back(p);
    }
    std::vector<double> values(states.size());
    detail::parallel_for(states.size(), search.threads, [&](std::size_t i) {
      values[i] = positive_increment_integral(trajectory(factors, states[i], measure), search.increment_threshold);
    });
    // Reduction in grid order keeps the result independent of scheduling.
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (search.keep_table) report.per_state_values.push_back({states[i], values[i]});
      if (!have_best || detail::better(values[i], states[i], best_value, report.argmax_state)) {
        have_best = true;
        best_value = values[i];
        best_point = kept[i];
        report.argmax_state = states[i];
      }
    }
    report.evaluations += states.size();
  };

  std::vector<detail::SearchPoint> coarse;
  const auto xs = detail::axis(search.points_x, 0.0, 1.0);
  std::vector<double> ys(search.points_y);
  for (std::size_t j = 0; j < search.points_y; ++j)
    ys[j] = static_cast<double>(j + 1) / static_cast<double>(search.points_y);
  const auto zs = three_d ? detail::axis(search.points_z, 0.0, 1.0) : std::vector<double>{0.5};
  for (double z : zs)
    for (double x : xs)
      for (double y : ys) coarse.push_back({x, y, z});
  run(coarse);
  require(have_best, ErrorCode::EmptySearchGrid, "search grid contains no coherent state");

  double hx = search.points_x > 1 ? 1.0 / static_cast<double>(search.points_x - 1) : 0.5;
  double hy = 1.0 / static_cast<double>(search.points_y);
  double hz = three_d && search.points_z > 1 ? 1.0 / static_cast<double>(search.points_z - 1) : 0.0;
  for (int round = 0; round < search.refinement; ++round) {
    hx /= 2.0;
    hy /= 2.0;
    hz /= 2.0;
    std::vector<detail::SearchPoint> local;
    const detail::SearchPoint c = best_point;
    for (int k = three_d ? -2 : 0; k <= (three_d ? 2 : 0); ++k)
      for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j) {
          if (i == 0 && j == 0 && k == 0) continue;
          const double x = c.x + i * hx, y = c.y + j * hy, z = c.z + k * hz;
          if (x < 0.0 || x > 1.0 || y <= 0.0 || y > 1.0 || z < 0.0 || z > 1.0) continue;
          local.push_back({x, y, z});
        }
    run(local);
  }

  report.measure_value = best_value;
  report.intervals =
      witness_intervals(trajectory(factors, report.argmax_state, measure), search.increment_threshold);
  return report;
}

}  // namespace nmcoh
