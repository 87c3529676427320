#pragma once

// The three incoherent qubit channel families: phase damping (PD),
// amplitude damping (AD) and random unitary (RU) dynamics.

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nmcoh/error.hpp"
#include "nmcoh/linalg.hpp"
#include "nmcoh/profiles.hpp"
#include "nmcoh/volterra.hpp"

namespace nmcoh {

/// rho(0) = 1/2 [[1 + a, b], [b*, 1 - a]]; PSD iff a^2 + |b|^2 <= 1.
struct PdState {
  double a = 0.0;
  cplx b = 1.0;
};

/// rho(0) = [[1 - a, b], [b*, a]]; PSD iff a in [0, 1] and a(1 - a) >= |b|^2.
struct AdState {
  double a = 0.5;
  cplx b = 0.5;
};

/// rho(0) = 1/2 [[1 + r3, r1 - i r2], [r1 + i r2, 1 - r3]], |r| <= 1.
struct RuState {
  double r1 = 1.0;
  double r2 = 0.0;
  double r3 = 0.0;
};

using InitialQubitState = std::variant<PdState, AdState, RuState>;

enum class ChannelFamily { PD, AD, RU };

inline std::string to_string(ChannelFamily f) {
  switch (f) {
    case ChannelFamily::PD: return "pd";
    case ChannelFamily::AD: return "ad";
    case ChannelFamily::RU: return "ru";
  }
  return "?";
}

inline ChannelFamily family_of(const InitialQubitState& s) {
  if (std::holds_alternative<PdState>(s)) return ChannelFamily::PD;
  if (std::holds_alternative<AdState>(s)) return ChannelFamily::AD;
  return ChannelFamily::RU;
}

namespace detail {
inline constexpr double kParamTol = 1e-12;
}

inline void validate(const PdState& s) {
  require(std::isfinite(s.a) && std::isfinite(std::abs(s.b)) &&
              s.a * s.a + std::norm(s.b) <= 1.0 + detail::kParamTol,
          ErrorCode::StateInvariantViolated,
          "PD state needs a^2 + |b|^2 <= 1 (a=" + std::to_string(s.a) + ", |b|=" + std::to_string(std::abs(s.b)) + ")");
}

inline void validate(const AdState& s) {
  require(s.a >= -detail::kParamTol && s.a <= 1.0 + detail::kParamTol &&
              s.a * (1.0 - s.a) >= std::norm(s.b) - detail::kParamTol,
          ErrorCode::StateInvariantViolated,
          "AD state needs a in [0,1] and a(1-a) >= |b|^2 (a=" + std::to_string(s.a) +
              ", |b|=" + std::to_string(std::abs(s.b)) + ")");
}

inline void validate(const RuState& s) {
  require(s.r1 * s.r1 + s.r2 * s.r2 + s.r3 * s.r3 <= 1.0 + detail::kParamTol, ErrorCode::StateInvariantViolated,
          "RU Bloch vector longer than 1");
}

inline void validate(const InitialQubitState& s) {
  std::visit([](const auto& v) { validate(v); }, s);
}

/// Whether the initial state has nonzero coherence.
inline bool is_coherent(const InitialQubitState& s) {
  if (const auto* p = std::get_if<PdState>(&s)) return std::abs(p->b) > 0.0;
  if (const auto* p = std::get_if<AdState>(&s)) return std::abs(p->b) > 0.0;
  const auto& r = std::get<RuState>(s);
  return r.r1 != 0.0 || r.r2 != 0.0;
}

/// PD output 1/2 [[1 + a, b f], [b* f, 1 - a]].
inline DensityMatrix pd_apply(const PdState& s, double f) {
  validate(s);
  require(std::abs(f) <= 1.0 + detail::kParamTol, ErrorCode::StateInvariantViolated,
          "PD coherence factor |f| = " + std::to_string(std::abs(f)) + " > 1");
  ComplexMatrix m(2);
  m(0, 0) = 0.5 * (1.0 + s.a);
  m(1, 1) = 0.5 * (1.0 - s.a);
  m(0, 1) = 0.5 * s.b * f;
  m(1, 0) = std::conj(m(0, 1));
  return DensityMatrix::trusted(std::move(m));
}

/// AD output [[1 - |h|^2 a, b h], [b* h*, |h|^2 a]].
inline DensityMatrix ad_apply(const AdState& s, cplx h) {
  validate(s);
  require(std::abs(h) <= 1.0 + detail::kParamTol, ErrorCode::StateInvariantViolated,
          "AD amplitude |h| = " + std::to_string(std::abs(h)) + " > 1");
  const double h2 = std::norm(h);
  ComplexMatrix m(2);
  m(0, 0) = 1.0 - h2 * s.a;
  m(1, 1) = h2 * s.a;
  m(0, 1) = s.b * h;
  m(1, 0) = std::conj(m(0, 1));
  return DensityMatrix::trusted(std::move(m));
}

/// RU output for integrated rates Gamma_i = int_0^t gamma_i: the Bloch
/// components decay as r1 e^{-2(G2+G3)}, r2 e^{-2(G1+G3)}, r3 e^{-2(G1+G2)}.
inline DensityMatrix ru_apply(const RuState& s, double g1, double g2, double g3) {
  validate(s);
  require(!std::isnan(g1) && !std::isnan(g2) && !std::isnan(g3), ErrorCode::StateInvariantViolated,
          "NaN integrated rate");
  const double x = s.r1 * std::exp(-2.0 * (g2 + g3));
  const double y = s.r2 * std::exp(-2.0 * (g1 + g3));
  const double z = s.r3 * std::exp(-2.0 * (g1 + g2));
  require(x * x + y * y + z * z <= 1.0 + 1e-10, ErrorCode::StateInvariantViolated,
          "RU rates drive the Bloch vector outside the unit ball");
  ComplexMatrix m(2);
  m(0, 0) = 0.5 * (1.0 + z);
  m(1, 1) = 0.5 * (1.0 - z);
  m(0, 1) = 0.5 * cplx(x, -y);
  m(1, 0) = std::conj(m(0, 1));
  return DensityMatrix::trusted(std::move(m));
}

inline DensityMatrix initial_matrix(const InitialQubitState& s) {
  if (const auto* p = std::get_if<PdState>(&s)) return pd_apply(*p, 1.0);
  if (const auto* p = std::get_if<AdState>(&s)) return ad_apply(*p, 1.0);
  return ru_apply(std::get<RuState>(s), 0.0, 0.0, 0.0);
}

// ---------------------------------------------------------------------------
// Kraus representations

/// K0 = sqrt(1 - h/2) I, K1 = sqrt(h/2) sigma_z with h = 1 - f.
inline std::vector<ComplexMatrix> pd_kraus(double f) {
  const double h = 1.0 - f;
  require(h >= -detail::kParamTol && h <= 2.0 + detail::kParamTol, ErrorCode::StateInvariantViolated,
          "PD Kraus weights need f in [-1, 1], got f=" + std::to_string(f));
  const double w0 = std::sqrt(std::max(0.0, 1.0 - h / 2.0));
  const double w1 = std::sqrt(std::max(0.0, h / 2.0));
  return {ComplexMatrix::identity(2) * w0, pauli::z() * w1};
}

/// K0 = diag(1, h*), K1 = sqrt(1 - |h|^2) sigma_minus; the conjugate keeps the
/// off-diagonal equal to b h as in ad_apply.
inline std::vector<ComplexMatrix> ad_kraus(cplx h) {
  require(std::abs(h) <= 1.0 + detail::kParamTol, ErrorCode::StateInvariantViolated,
          "AD Kraus needs |h| <= 1, got " + std::to_string(std::abs(h)));
  ComplexMatrix k0{{1.0, 0.0}, {0.0, std::conj(h)}};
  return {std::move(k0), pauli::minus() * std::sqrt(std::max(0.0, 1.0 - std::norm(h)))};
}

inline ComplexMatrix apply_kraus(std::span<const ComplexMatrix> ops, const ComplexMatrix& rho) {
  ComplexMatrix out(rho.dim());
  for (const auto& k : ops) out += k * rho * k.adjoint();
  return out;
}

struct KrausReport {
  double completeness_defect = 0.0;  // max-entry |sum K^dag K - I|
  bool incoherent = true;            // every K maps basis states onto multiples of basis states
};

inline KrausReport kraus_validate(std::span<const ComplexMatrix> ops) {
  require(!ops.empty(), ErrorCode::UnsupportedChannel, "no Kraus operators");
  const std::size_t n = ops.front().dim();
  ComplexMatrix sum(n);
  KrausReport rep;
  for (const auto& k : ops) {
    sum += k.adjoint() * k;
    for (std::size_t col = 0; col < n; ++col) {
      int nonzero = 0;
      for (std::size_t row = 0; row < n; ++row)
        if (std::abs(k(row, col)) > 1e-14) ++nonzero;
      if (nonzero > 1) rep.incoherent = false;
    }
  }
  rep.completeness_defect = max_abs_diff(sum, ComplexMatrix::identity(n));
  return rep;
}

/// Kraus check of a channel family at one instant; `factor` is f(t) for PD
/// and h(t) for AD. The RU family has no Kraus form here.
inline KrausReport kraus_validate(ChannelFamily family, cplx factor) {
  switch (family) {
    case ChannelFamily::PD: {
      require(factor.imag() == 0.0, ErrorCode::StateInvariantViolated, "PD factor must be real");
      const auto ops = pd_kraus(factor.real());
      return kraus_validate(ops);
    }
    case ChannelFamily::AD: {
      const auto ops = ad_kraus(factor);
      return kraus_validate(ops);
    }
    case ChannelFamily::RU: break;
  }
  fail(ErrorCode::UnsupportedChannel, "random unitary channel has no Kraus form");
}

// ---------------------------------------------------------------------------
// Channel specifications and their time-dependent factors

struct PhaseDamping {
  DecayProfile profile = DephasingLorentzian{};
};

struct AmplitudeDamping {
  MemoryKernel kernel = ExponentialKernel::from_coupling(14.0, 1.0);
  VolterraOptions solver{};
};

struct RandomUnitary {
  std::array<DecayProfile, 3> rates{ConstantRate{}, ConstantRate{}, ConstantRate{}};
};

using ChannelSpec = std::variant<PhaseDamping, AmplitudeDamping, RandomUnitary>;

inline ChannelFamily family_of(const ChannelSpec& c) {
  if (std::holds_alternative<PhaseDamping>(c)) return ChannelFamily::PD;
  if (std::holds_alternative<AmplitudeDamping>(c)) return ChannelFamily::AD;
  return ChannelFamily::RU;
}

/// Everything needed to evolve any initial state of one family on a grid:
/// f(t) for PD, h(t) for AD, Gamma_1..3(t) for RU.
struct ChannelFactors {
  ChannelFamily family = ChannelFamily::PD;
  TimeGrid grid;
  std::vector<double> f;
  std::vector<double> h;
  std::array<std::vector<double>, 3> gamma_integrals;

  DensityMatrix evolve(const InitialQubitState& state, std::size_t i) const {
    require(family_of(state) == family, ErrorCode::UnsupportedChannel,
            "state family " + to_string(family_of(state)) + " does not match channel " + to_string(family));
    switch (family) {
      case ChannelFamily::PD: return pd_apply(std::get<PdState>(state), f[i]);
      case ChannelFamily::AD: return ad_apply(std::get<AdState>(state), h[i]);
      case ChannelFamily::RU:
        return ru_apply(std::get<RuState>(state), gamma_integrals[0][i], gamma_integrals[1][i], gamma_integrals[2][i]);
    }
    fail(ErrorCode::UnsupportedChannel, "unknown family");
  }
};

inline ChannelFactors channel_factors(const ChannelSpec& channel, const TimeGrid& grid) {
  require(!grid.empty(), ErrorCode::EmptyGrid, "empty time grid");
  ChannelFactors out;
  out.family = family_of(channel);
  out.grid = grid;
  if (const auto* pd = std::get_if<PhaseDamping>(&channel)) {
    out.f = f_from_gamma(pd->profile, grid).values;
    for (std::size_t i = 0; i < out.f.size(); ++i)
      require(out.f[i] <= 1.0 + detail::kParamTol, ErrorCode::StateInvariantViolated,
              "rate profile drives f above 1 at t=" + std::to_string(grid.t(i)));
  } else if (const auto* ad = std::get_if<AmplitudeDamping>(&channel)) {
    out.h = solve_h_volterra(ad->kernel, grid, ad->solver).values;
  } else {
    const auto& ru = std::get<RandomUnitary>(channel);
    for (std::size_t k = 0; k < 3; ++k) out.gamma_integrals[k] = integrated_rate(ru.rates[k], grid);
  }
  return out;
}

/// Rates recovered from h(t): the population decay rate -2 Re(h'/h) and the
/// frequency shift -2 Im(h'/h).
inline double ad_decay_rate(cplx h, cplx dh) { return -2.0 * (dh / h).real(); }
inline double lamb_shift_rate(cplx h, cplx dh) { return -2.0 * (dh / h).imag(); }

}  // namespace nmcoh
