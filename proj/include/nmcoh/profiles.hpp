#pragma once

// Time grids, dephasing-rate profiles and the coherence factors they induce.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "nmcoh/error.hpp"

namespace nmcoh {

/// Uniform grid t_i = i * dt, i = 0 .. size-1.
struct TimeGrid {
  double dt = 1e-4;
  std::size_t size = 0;

  static TimeGrid from_step(double dt, double t_max) {
    require(dt > 0.0 && std::isfinite(dt), ErrorCode::EmptyGrid, "grid step must be positive");
    require(t_max >= 0.0 && std::isfinite(t_max), ErrorCode::EmptyGrid, "grid end must be non-negative");
    const auto steps = static_cast<std::size_t>(std::llround(t_max / dt));
    return TimeGrid{dt, steps + 1};
  }

  double t(std::size_t i) const noexcept { return static_cast<double>(i) * dt; }
  double t_max() const noexcept { return size == 0 ? 0.0 : t(size - 1); }
  bool empty() const noexcept { return size == 0; }
};

/// Rate of the Lorentzian-bath dephasing model: W is the transition
/// strength, lambda the spectral width.
struct DephasingLorentzian {
  double W = 14.0;
  double lambda = 1.0;
};

struct ConstantRate {
  double gamma0 = 0.0;
};

/// Piecewise-linear rate samples on a strictly increasing time axis.
struct Tabulated {
  std::vector<double> times;
  std::vector<double> values;
};

using DecayProfile = std::variant<DephasingLorentzian, ConstantRate, Tabulated>;

/// Samples of f(t), h(t) or Gamma_i(t) on a uniform grid.
struct CoherenceFactorSeries {
  TimeGrid grid;
  std::vector<double> values;
};

namespace detail {

inline void validate_table(const std::vector<double>& times, const std::vector<double>& values) {
  require(times.size() == values.size(), ErrorCode::InvalidProfile, "table columns differ in length");
  require(times.size() >= 2, ErrorCode::InvalidProfile, "table needs at least two rows");
  for (std::size_t i = 1; i < times.size(); ++i)
    require(times[i] > times[i - 1], ErrorCode::InvalidProfile, "table times must be strictly increasing");
  for (std::size_t i = 0; i < times.size(); ++i)
    require(std::isfinite(times[i]) && std::isfinite(values[i]), ErrorCode::InvalidProfile, "non-finite table entry");
}

inline double interpolate(const std::vector<double>& times, const std::vector<double>& values, double t) {
  const double slack = 1e-9 * std::max(1.0, std::abs(times.back()));
  require(t >= times.front() - slack && t <= times.back() + slack, ErrorCode::OutOfRange,
          "t=" + std::to_string(t) + " outside tabulated range [" + std::to_string(times.front()) + ", " +
              std::to_string(times.back()) + "]");
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  return values[lo] + w * (values[hi] - values[lo]);
}

// sinh(x)/x and tanh(x)/x with their removable singularities filled in.
inline double shc(double x) { return std::abs(x) < 1e-8 ? 1.0 + x * x / 6.0 : std::sinh(x) / x; }
inline double thc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 3.0 : std::tanh(x) / x; }

}  // namespace detail

inline void validate(const DecayProfile& profile) {
  if (const auto* p = std::get_if<DephasingLorentzian>(&profile)) {
    require(p->W > 0.0 && p->lambda > 0.0, ErrorCode::InvalidProfile, "Lorentzian profile needs W > 0 and lambda > 0");
  } else if (const auto* c = std::get_if<ConstantRate>(&profile)) {
    require(std::isfinite(c->gamma0), ErrorCode::InvalidProfile, "non-finite constant rate");
  } else {
    const auto& t = std::get<Tabulated>(profile);
    detail::validate_table(t.times, t.values);
  }
}

/// Damped Jaynes-Cummings amplitude
///   G(t) = e^{-lambda t/2} [cos(dt/2) + (lambda/d) sin(dt/2)],  W > lambda/2,
/// with cosh/sinh for W <= lambda/2 and d = sqrt|lambda^2 - 4W^2|. The
/// Lorentzian rate is gamma = -2 d/dt ln|G|, so exp(-2 int gamma) = G^4.
inline double lorentzian_amplitude(double W, double lambda, double t) {
  if (W > lambda / 2.0) {
    const double d = std::sqrt(4.0 * W * W - lambda * lambda);
    const double x = d * t / 2.0;
    return std::exp(-lambda * t / 2.0) * (std::cos(x) + (lambda / d) * std::sin(x));
  }
  const double d = std::sqrt(std::max(0.0, lambda * lambda - 4.0 * W * W));
  const double x = d * t / 2.0;
  if (x > 20.0) {
    return 0.5 * (1.0 + lambda / d) * std::exp((d - lambda) * t / 2.0) +
           0.5 * (1.0 - lambda / d) * std::exp(-(d + lambda) * t / 2.0);
  }
  return std::exp(-lambda * t / 2.0) * (std::cosh(x) + lambda * (t / 2.0) * detail::shc(x));
}

/// Decay rate gamma(t) of a profile. Lorentzian profiles follow
///   4W^2 sinh(dt/2) / (d cosh(dt/2) + lambda sinh(dt/2)),  W <= lambda/2,
///   4W^2 sin(dt/2)  / (d cos(dt/2)  + lambda sin(dt/2)),   W >  lambda/2.
/// The oscillatory branch has poles; there the value is +-inf or huge.
inline double gamma_eval(const DecayProfile& profile, double t) {
  require(t >= 0.0, ErrorCode::NegativeTime, "t=" + std::to_string(t));
  if (const auto* p = std::get_if<DephasingLorentzian>(&profile)) {
    const double W = p->W, lambda = p->lambda;
    if (W > lambda / 2.0) {
      const double d = std::sqrt(4.0 * W * W - lambda * lambda);
      const double x = d * t / 2.0;
      return 4.0 * W * W * std::sin(x) / (d * std::cos(x) + lambda * std::sin(x));
    }
    const double d = std::sqrt(std::max(0.0, lambda * lambda - 4.0 * W * W));
    // tanh(x)/d = (t/2) thc(x) stays finite as d -> 0.
    const double ratio = (t / 2.0) * detail::thc(d * t / 2.0);
    return 4.0 * W * W * ratio / (1.0 + lambda * ratio);
  }
  if (const auto* c = std::get_if<ConstantRate>(&profile)) return c->gamma0;
  const auto& tab = std::get<Tabulated>(profile);
  return detail::interpolate(tab.times, tab.values, t);
}

/// Running integral of uniformly spaced samples: composite Simpson on
/// pairs of steps, with a third-order start step for odd indices.
inline std::vector<double> cumulative_simpson(std::span<const double> y, double dt) {
  std::vector<double> out(y.size(), 0.0);
  if (y.size() < 2) return out;
  out[1] = y.size() >= 3 ? dt * (5.0 * y[0] + 8.0 * y[1] - y[2]) / 12.0 : 0.5 * dt * (y[0] + y[1]);
  for (std::size_t i = 2; i < y.size(); ++i) out[i] = out[i - 2] + dt / 3.0 * (y[i - 2] + 4.0 * y[i - 1] + y[i]);
  return out;
}

/// Gamma(t) = int_0^t gamma. Lorentzian profiles use the exact antiderivative
/// -2 ln|G(t)| (their poles are not integrable by quadrature); the other
/// kinds use cumulative Simpson on the grid samples.
inline std::vector<double> integrated_rate(const DecayProfile& profile, const TimeGrid& grid) {
  validate(profile);
  require(!grid.empty(), ErrorCode::EmptyGrid, "empty time grid");
  std::vector<double> out(grid.size);
  if (const auto* p = std::get_if<DephasingLorentzian>(&profile)) {
    for (std::size_t i = 0; i < grid.size; ++i)
      out[i] = -2.0 * std::log(std::abs(lorentzian_amplitude(p->W, p->lambda, grid.t(i))));
    return out;
  }
  std::vector<double> rate(grid.size);
  for (std::size_t i = 0; i < grid.size; ++i) rate[i] = gamma_eval(profile, grid.t(i));
  return cumulative_simpson(rate, grid.dt);
}

/// f(t) = exp(-2 int_0^t gamma).
inline CoherenceFactorSeries f_from_gamma(const DecayProfile& profile, const TimeGrid& grid) {
  require(!grid.empty(), ErrorCode::EmptyGrid, "empty time grid");
  validate(profile);
  CoherenceFactorSeries out{grid, std::vector<double>(grid.size)};
  if (const auto* p = std::get_if<DephasingLorentzian>(&profile)) {
    for (std::size_t i = 0; i < grid.size; ++i) {
      const double g = lorentzian_amplitude(p->W, p->lambda, grid.t(i));
      out.values[i] = (g * g) * (g * g);
    }
    return out;
  }
  const auto integral = integrated_rate(profile, grid);
  for (std::size_t i = 0; i < grid.size; ++i) out.values[i] = std::exp(-2.0 * integral[i]);
  return out;
}

/// Two-column CSV (time, value). A non-numeric first row is taken as a
/// header; '#' starts a comment line.
inline Tabulated load_tabulated_csv(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open " + path);
  Tabulated tab;
  std::string line;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    require(comma != std::string::npos, ErrorCode::Config, path + ":" + std::to_string(lineno) + ": expected two columns");
    try {
      std::size_t used_t = 0, used_v = 0;
      const std::string ts = line.substr(0, comma), vs = line.substr(comma + 1);
      const double t = std::stod(ts, &used_t);
      const double v = std::stod(vs, &used_v);
      tab.times.push_back(t);
      tab.values.push_back(v);
    } catch (const std::exception&) {
      require(first, ErrorCode::Config, path + ":" + std::to_string(lineno) + ": non-numeric row");
    }
    first = false;
  }
  detail::validate_table(tab.times, tab.values);
  return tab;
}

}  // namespace nmcoh
