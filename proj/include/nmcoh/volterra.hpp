#pragma once

// Solver for the amplitude-damping memory equation
//   dh/dt = -int_0^t K(t - s) h(s) ds,   h(0) = 1.

#include <cmath>
#include <cstddef>
#include <variant>
#include <vector>

#include "nmcoh/error.hpp"
#include "nmcoh/profiles.hpp"

namespace nmcoh {

/// K(tau) = amplitude * exp(-decay * tau). A Lorentzian spectral density of
/// coupling W and width lambda gives amplitude W^2, decay lambda.
struct ExponentialKernel {
  double amplitude = 0.0;
  double decay = 1.0;

  static ExponentialKernel from_coupling(double W, double lambda) { return {W * W, lambda}; }
};

struct TabulatedKernel {
  std::vector<double> times;
  std::vector<double> values;
};

using MemoryKernel = std::variant<ExponentialKernel, TabulatedKernel>;

struct VolterraOptions {
  /// Richardson extrapolation levels on top of the second-order base scheme
  /// (0 = plain scheme; each level halves the step once more).
  int richardson_levels = 2;
  double corrector_tolerance = 1e-15;
  int max_corrector_iterations = 50;
};

inline void validate(const MemoryKernel& kernel) {
  if (const auto* e = std::get_if<ExponentialKernel>(&kernel)) {
    require(e->amplitude >= 0.0 && std::isfinite(e->amplitude), ErrorCode::InvalidProfile, "kernel amplitude must be >= 0");
    require(e->decay > 0.0 && std::isfinite(e->decay), ErrorCode::InvalidProfile, "kernel decay must be > 0");
  } else {
    const auto& t = std::get<TabulatedKernel>(kernel);
    detail::validate_table(t.times, t.values);
  }
}

inline double kernel_eval(const MemoryKernel& kernel, double tau) {
  if (const auto* e = std::get_if<ExponentialKernel>(&kernel)) return e->amplitude * std::exp(-e->decay * tau);
  const auto& t = std::get<TabulatedKernel>(kernel);
  return detail::interpolate(t.times, t.values, tau);
}

/// Largest |K|, the scale entering the step bound.
inline double kernel_scale(const MemoryKernel& kernel) {
  if (const auto* e = std::get_if<ExponentialKernel>(&kernel)) return e->amplitude;
  double m = 0.0;
  for (double v : std::get<TabulatedKernel>(kernel).values) m = std::max(m, std::abs(v));
  return m;
}

namespace detail {

// One pass of the base scheme on n_steps steps of size dt: trapezoidal
// history quadrature, AB2 predictor, trapezoidal corrector iterated to its
// fixed point.
inline std::vector<double> volterra_pass(const MemoryKernel& kernel, double dt, std::size_t n_steps,
                                         const VolterraOptions& opt) {
  std::vector<double> h(n_steps + 1, 0.0);
  h[0] = 1.0;
  if (n_steps == 0) return h;

  const auto* expo = std::get_if<ExponentialKernel>(&kernel);
  std::vector<double> samples;
  if (!expo) {
    samples.resize(n_steps + 1);
    for (std::size_t m = 0; m <= n_steps; ++m) samples[m] = kernel_eval(kernel, static_cast<double>(m) * dt);
  }
  const double k0 = expo ? expo->amplitude : samples[0];
  const double step_decay = expo ? std::exp(-expo->decay * dt) : 0.0;

  double q_prev = 0.0;  // Q_{n-1}
  double q = 0.0;       // Q_n = trapezoidal int_0^{t_n} K(t_n - s) h(s) ds
  double tail = 0.0;    // exponential kernels: sum_{j=1}^{n} e^{-decay (t_{n+1} - t_j)} h_j

  for (std::size_t n = 0; n < n_steps; ++n) {
    // History part of Q_{n+1}: every node except the unknown h_{n+1}.
    double history;
    if (expo) {
      if (n > 0) tail = step_decay * (tail + h[n]);
      history = dt * expo->amplitude * (0.5 * std::exp(-expo->decay * static_cast<double>(n + 1) * dt) + tail);
    } else {
      double s = 0.5 * samples[n + 1] * h[0];
      for (std::size_t j = 1; j <= n; ++j) s += samples[n + 1 - j] * h[j];
      history = dt * s;
    }

    double x = n == 0 ? h[n] - dt * q : h[n] - 0.5 * dt * (3.0 * q - q_prev);
    for (int it = 0; it < opt.max_corrector_iterations; ++it) {
      const double q_next = history + 0.5 * dt * k0 * x;
      const double updated = h[n] - 0.5 * dt * (q + q_next);
      const bool done = std::abs(updated - x) <= opt.corrector_tolerance * std::max(1.0, std::abs(updated));
      x = updated;
      if (done) break;
    }
    h[n + 1] = x;
    q_prev = q;
    q = history + 0.5 * dt * k0 * x;
  }
  return h;
}

}  // namespace detail

/// Numerical h(t) on the grid. The base scheme is second order; Richardson
/// extrapolation over successively halved steps removes the dt^2 and dt^4
/// error terms. Throws StepTooLarge when dt * sqrt(max|K|) > 0.1 or, for
/// exponential kernels, dt * decay > 0.01.
inline CoherenceFactorSeries solve_h_volterra(const MemoryKernel& kernel, const TimeGrid& grid,
                                              const VolterraOptions& opt = {}) {
  validate(kernel);
  require(!grid.empty(), ErrorCode::EmptyGrid, "empty time grid");
  require(grid.dt * std::sqrt(kernel_scale(kernel)) <= 0.1, ErrorCode::StepTooLarge,
          "dt * sqrt(kernel amplitude) = " + std::to_string(grid.dt * std::sqrt(kernel_scale(kernel))) + " > 0.1");
  if (const auto* e = std::get_if<ExponentialKernel>(&kernel))
    require(grid.dt * e->decay <= 1e-2, ErrorCode::StepTooLarge,
            "dt * decay = " + std::to_string(grid.dt * e->decay) + " > 0.01");
  require(opt.richardson_levels >= 0 && opt.richardson_levels <= 4, ErrorCode::Config,
          "richardson levels must be in [0, 4]");

  const std::size_t steps = grid.size - 1;
  const int levels = opt.richardson_levels;
  // table[l][i]: pass with step dt / 2^l sampled at coarse node i.
  std::vector<std::vector<double>> table;
  for (int l = 0; l <= levels; ++l) {
    const std::size_t refine = std::size_t{1} << l;
    const auto fine = detail::volterra_pass(kernel, grid.dt / static_cast<double>(refine), steps * refine, opt);
    std::vector<double> coarse(grid.size);
    for (std::size_t i = 0; i < grid.size; ++i) coarse[i] = fine[i * refine];
    table.push_back(std::move(coarse));
  }
  // Neville-style elimination of the even error powers.
  for (int k = 1; k <= levels; ++k) {
    const double factor = std::pow(4.0, k);
    for (int l = levels; l >= k; --l)
      for (std::size_t i = 0; i < grid.size; ++i)
        table[l][i] = (factor * table[l][i] - table[l - 1][i]) / (factor - 1.0);
  }
  return {grid, std::move(table[levels])};
}

/// Exponential kernels turn the memory equation into the local oscillator
///   h'' + decay h' + amplitude h = 0,  h(0) = 1, h'(0) = 0,
/// integrated here with classical RK4 using `substeps` steps per grid step.
inline CoherenceFactorSeries solve_h_local_ode(const ExponentialKernel& kernel, const TimeGrid& grid,
                                               int substeps = 10) {
  validate(MemoryKernel{kernel});
  require(!grid.empty(), ErrorCode::EmptyGrid, "empty time grid");
  CoherenceFactorSeries out{grid, std::vector<double>(grid.size)};
  const double step = grid.dt / substeps;
  double y = 1.0, v = 0.0;
  auto accel = [&](double yy, double vv) { return -kernel.decay * vv - kernel.amplitude * yy; };
  out.values[0] = y;
  for (std::size_t i = 1; i < grid.size; ++i) {
    for (int s = 0; s < substeps; ++s) {
      const double k1y = v, k1v = accel(y, v);
      const double k2y = v + 0.5 * step * k1v, k2v = accel(y + 0.5 * step * k1y, v + 0.5 * step * k1v);
      const double k3y = v + 0.5 * step * k2v, k3v = accel(y + 0.5 * step * k2y, v + 0.5 * step * k2v);
      const double k4y = v + step * k3v, k4v = accel(y + step * k3y, v + step * k3v);
      y += step / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
      v += step / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    out.values[i] = y;
  }
  return out;
}

}  // namespace nmcoh
