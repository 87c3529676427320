#pragma once

// Closed-form coherence values, their time derivatives and the auxiliary
// sign functions for the PD, AD and RU qubit families.
//
// Conventions: b may be complex; every formula depends on |b| only. For PD,
// f is the coherence factor and gamma the dephasing rate (df/dt = -2 gamma f).
// For AD, h is |h(t)| and dh_dt its time derivative.

#include <cmath>
#include <complex>
#include <limits>

#include "nmcoh/channels.hpp"
#include "nmcoh/error.hpp"

namespace nmcoh::analytic {

/// Closed-form value plus a flag for the maximally mixed limit, where the
/// formula is 0/0 and the continuous extension (0) is returned.
struct FlaggedValue {
  double value = 0.0;
  bool degenerate = false;
};

struct AnalyticScalars {
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  double s = nan;
  double s_tilde = nan;
  double g = nan;
  double g_tilde = nan;
  double G = nan;
  cplx omega{nan, nan};
  double lamb_shift_rate = nan;
};

namespace detail {
inline constexpr double kDegenerate = 1e-12;
inline constexpr double kPure = 1e-10;

inline void check_pd(double a, cplx b, double f) {
  validate(PdState{a, b});
  require(std::abs(f) <= 1.0 + 1e-12, ErrorCode::StateInvariantViolated, "|f| > 1");
}

inline void check_ad(double a, double b_abs, double h_abs) {
  validate(AdState{a, b_abs});
  require(h_abs >= 0.0 && h_abs <= 1.0 + 1e-12, ErrorCode::StateInvariantViolated, "|h| outside [0, 1]");
}

// a - a^2 |h|^2 - |b|^2, which equals det rho(t) / |h|^2 for AD.
inline double ad_radicand(double a, double b_abs, double h_abs) { return a - a * a * h_abs * h_abs - b_abs * b_abs; }

inline void check_interior(double a, double b_abs, double h_abs) {
  require(a > 0.0 && a < 1.0, ErrorCode::DomainViolation, "a must lie in (0, 1)");
  require(h_abs >= 0.0 && h_abs <= 1.0, ErrorCode::DomainViolation, "|h| must lie in [0, 1]");
  require(ad_radicand(a, b_abs, h_abs) > 0.0, ErrorCode::DomainViolation,
          "a - a^2|h|^2 - |b|^2 must be positive (got " + std::to_string(ad_radicand(a, b_abs, h_abs)) + ")");
}
}  // namespace detail

// ---------------------------------------------------------------- PD

/// s(t) = sqrt(|b|^2 f^2 + a^2), the Bloch length of the PD output.
inline double pd_s(double a, cplx b, double f) { return std::sqrt(std::norm(b) * f * f + a * a); }

/// g(t) = s^4 - (sqrt(1 - s^2) - 1)^2 a^2.
inline double pd_g(double a, cplx b, double f) {
  const double s = pd_s(a, b, f);
  const double r = std::sqrt(std::max(0.0, 1.0 - s * s));
  return s * s * s * s - (r - 1.0) * (r - 1.0) * a * a;
}

/// Skew coherence of the PD output from its spectral data,
///   1 - T1^2 - T2^2,  T1 = sqrt(l1) (s+a)/(2s) + sqrt(l2) (s-a)/(2s),
///                     T2 = sqrt(l1) (s-a)/(2s) + sqrt(l2) (s+a)/(2s),
/// with l1,2 = (1 +- s)/2.
inline FlaggedValue cs_pd(double a, cplx b, double f) {
  detail::check_pd(a, b, f);
  const double s = pd_s(a, b, f);
  if (s < detail::kDegenerate) return {0.0, true};
  const double up = std::sqrt((1.0 + s) / 2.0);
  const double rest = std::max(0.0, (1.0 - a) * (1.0 + a) - std::norm(b) * f * f);
  const double lo = std::sqrt(rest / (2.0 * (1.0 + s)));
  const double wp = (s + a) / (2.0 * s), wm = (s - a) / (2.0 * s);
  const double t1 = up * wp + lo * wm;
  const double t2 = up * wm + lo * wp;
  return {1.0 - t1 * t1 - t2 * t2, false};
}

/// d/dt C_S = -gamma |b|^2 f^2 g / (s^4 sqrt(1 - s^2)).
inline double dcs_pd(double a, cplx b, double f, double gamma) {
  detail::check_pd(a, b, f);
  const double s = pd_s(a, b, f);
  require(s >= detail::kDegenerate, ErrorCode::DegenerateState, "s = 0 (maximally mixed output)");
  const double one_minus = 1.0 - s * s;
  require(one_minus >= detail::kPure, ErrorCode::SingularPureState, "PD output is pure; derivative singular");
  const double s4 = s * s * s * s;
  return -gamma * std::norm(b) * f * f * pd_g(a, b, f) / (s4 * std::sqrt(one_minus));
}

/// Modified Tsallis (alpha = 2) coherence of the PD output,
///   sqrt(1 + 2a + s^2)/2 + sqrt(1 - 2a + s^2)/2 - 1.
inline double c2_pd(double a, cplx b, double f) {
  detail::check_pd(a, b, f);
  const double s2 = std::norm(b) * f * f + a * a;
  return std::sqrt(1.0 + 2.0 * a + s2) / 2.0 + std::sqrt(1.0 - 2.0 * a + s2) / 2.0 - 1.0;
}

inline double dc2_pd(double a, cplx b, double f, double gamma) {
  detail::check_pd(a, b, f);
  const double s2 = std::norm(b) * f * f + a * a;
  const double p = std::sqrt(s2 + 2.0 * a + 1.0);
  const double m = std::sqrt(s2 - 2.0 * a + 1.0);
  return -gamma * std::norm(b) * f * f * (p + m) / (p * m);
}

// ---------------------------------------------------------------- AD

/// s~(t) = sqrt((2a|h|^2 - 1)^2 + 4|b|^2 |h|^2).
inline double ad_s_tilde(double a, cplx b, double h_abs) {
  const double h2 = h_abs * h_abs;
  return std::sqrt((2.0 * a * h2 - 1.0) * (2.0 * a * h2 - 1.0) + 4.0 * std::norm(b) * h2);
}

/// Skew coherence of the AD output, 1 - T1^2 - T2^2 with diagonal weights
/// (s~ -+ (2a|h|^2 - 1)) / (2 s~).
inline FlaggedValue cs_ad(double a, cplx b, double h_abs) {
  detail::check_ad(a, std::abs(b), h_abs);
  const double st = ad_s_tilde(a, b, h_abs);
  if (st < detail::kDegenerate) return {0.0, true};
  const double c = 2.0 * a * h_abs * h_abs - 1.0;
  const double up = std::sqrt((1.0 + st) / 2.0);
  // (1 - s~)/2 = 2|h|^2 R / (1 + s~), free of cancellation near pure outputs.
  const double det = h_abs * h_abs * std::max(0.0, detail::ad_radicand(a, std::abs(b), h_abs));
  const double lo = std::sqrt(2.0 * det / (1.0 + st));
  const double wp = (st - c) / (2.0 * st), wm = (st + c) / (2.0 * st);
  const double t1 = up * wp + lo * wm;
  const double t2 = up * wm + lo * wp;
  return {1.0 - t1 * t1 - t2 * t2, false};
}

/// Numerator of g~ as printed:
///   |h|(a-|b|^2)(4a^2|h|^4 - 8a|h|^2 + 3) - 4|b|^4|h|^3 + (4a^2|h|^4 - 1) sqrt(R),
/// R = a - a^2|h|^2 - |b|^2.
inline double g_tilde_numerator(double a, double b_abs, double h_abs) {
  const double h = h_abs, b2 = b_abs * b_abs;
  const double h2 = h * h, h4 = h2 * h2;
  const double root = std::sqrt(detail::ad_radicand(a, b_abs, h_abs));
  return h * (a - b2) * (4.0 * a * a * h4 - 8.0 * a * h2 + 3.0) - 4.0 * b2 * b2 * h2 * h +
         (4.0 * a * a * h4 - 1.0) * root;
}

/// The same numerator in factored form, -[|h|(a - |b|^2) + sqrt R] (2|h| sqrt R - 1)^2.
inline double g_tilde_numerator_factored(double a, double b_abs, double h_abs) {
  const double root = std::sqrt(detail::ad_radicand(a, b_abs, h_abs));
  const double q = 2.0 * h_abs * root - 1.0;
  return -(h_abs * (a - b_abs * b_abs) + root) * q * q;
}

/// g~ = numerator / (sqrt(R) s~^4). Negative throughout the interior domain.
inline double g_tilde(double a, double b_abs, double h_abs) {
  detail::check_interior(a, b_abs, h_abs);
  const double h2 = h_abs * h_abs;
  const double sq = 4.0 * a * a * h2 * h2 - 4.0 * a * h2 + 4.0 * b_abs * b_abs * h2 + 1.0;
  return g_tilde_numerator(a, b_abs, h_abs) / (std::sqrt(detail::ad_radicand(a, b_abs, h_abs)) * sq * sq);
}

/// d/dt C_S for AD, -4|b|^2 |h| (d|h|/dt) g~. Same sign as d|h|/dt.
inline double dcs_ad(double a, cplx b, double h_abs, double dh_dt) {
  const double b_abs = std::abs(b);
  return -4.0 * b_abs * b_abs * h_abs * dh_dt * g_tilde(a, b_abs, h_abs);
}

/// Modified Tsallis (alpha = 2) coherence of the AD output,
///   sqrt((1 - |h|^2 a)^2 + |b|^2|h|^2) + sqrt(|b|^2|h|^2 + |h|^4 a^2) - 1.
inline double c2_ad(double a, cplx b, double h_abs) {
  detail::check_ad(a, std::abs(b), h_abs);
  const double h2 = h_abs * h_abs, b2 = std::norm(b);
  return std::sqrt((1.0 - h2 * a) * (1.0 - h2 * a) + b2 * h2) + std::sqrt(b2 * h2 + h2 * h2 * a * a) - 1.0;
}

/// G = [(2a^2|h|^2 + |b|^2)(sqrt P + sqrt Q) - 2a sqrt Q] / (sqrt P sqrt Q),
/// P = 1 - 2a|h|^2 + a^2|h|^4 + |b|^2|h|^2, Q = a^2|h|^4 + |b|^2|h|^2.
inline double G_func(double a, double b_abs, double h_abs) {
  require(h_abs > 0.0, ErrorCode::DomainViolation, "G undefined at |h| = 0");
  const double h2 = h_abs * h_abs, b2 = b_abs * b_abs;
  const double p = 1.0 - 2.0 * a * h2 + a * a * h2 * h2 + b2 * h2;
  const double q = a * a * h2 * h2 + b2 * h2;
  require(p > 0.0 && q > 0.0, ErrorCode::DomainViolation, "G needs P > 0 and Q > 0");
  const double sp = std::sqrt(p), sq = std::sqrt(q);
  return ((2.0 * a * a * h2 + b2) * (sp + sq) - 2.0 * a * sq) / (sp * sq);
}

/// d/dt C~_2 for AD, |h| (d|h|/dt) G.
inline double dc2_ad(double a, cplx b, double h_abs, double dh_dt) {
  if (dh_dt == 0.0) return 0.0;
  return h_abs * dh_dt * G_func(a, std::abs(b), h_abs);
}

/// Lower bound used to certify G > 0:
///   (2 sqrt Q - 2a|h|^2)(1 - a|h|^2) + 2|b|^2|h|^2
/// bounds 2a^2|h|^4 + 2|b|^2|h|^2 - 2a|h|^2 + 2 sqrt Q sqrt P from below.
inline double G_certificate_bound(double a, double b_abs, double h_abs) {
  const double h2 = h_abs * h_abs, b2 = b_abs * b_abs;
  const double q = a * a * h2 * h2 + b2 * h2;
  return (2.0 * std::sqrt(q) - 2.0 * a * h2) * (1.0 - a * h2) + 2.0 * b2 * h2;
}

inline double G_certificate_quantity(double a, double b_abs, double h_abs) {
  const double h2 = h_abs * h_abs, b2 = b_abs * b_abs;
  const double p = 1.0 - 2.0 * a * h2 + a * a * h2 * h2 + b2 * h2;
  const double q = a * a * h2 * h2 + b2 * h2;
  return 2.0 * a * a * h2 * h2 + 2.0 * b2 * h2 - 2.0 * a * h2 + 2.0 * std::sqrt(q) * std::sqrt(p);
}

// ---------------------------------------------------------------- RU / l1

/// Off-diagonal Bloch combination of the RU output,
///   omega(t) = e^{-2 G3} (e^{-2 G2} r1 - i e^{-2 G1} r2),
/// consistent with ru_apply (rho_01 = omega / 2).
inline cplx ru_omega(const RuState& s, double g1, double g2, double g3) {
  return std::exp(-2.0 * g3) * cplx(std::exp(-2.0 * g2) * s.r1, -std::exp(-2.0 * g1) * s.r2);
}

/// C_S of [[1/2, c], [c*, 1/2]] as a function of its l1 coherence 2|c|:
/// 1/2 - sqrt(1 - C_l1^2)/2, strictly increasing on (0, 1).
inline double prop1_relation(double c_l1_value) {
  require(c_l1_value >= 0.0 && c_l1_value <= 1.0, ErrorCode::OutOfRange,
          "C_l1 = " + std::to_string(c_l1_value) + " outside [0, 1]");
  return 0.5 - std::sqrt((1.0 - c_l1_value) * (1.0 + c_l1_value)) / 2.0;
}

/// dC_S / dC_l1 on the same family, C_l1 / (2 sqrt(1 - C_l1^2)).
inline double prop1_slope(double c_l1_value) {
  require(c_l1_value >= 0.0 && c_l1_value < 1.0, ErrorCode::OutOfRange, "slope needs C_l1 in [0, 1)");
  return c_l1_value / (2.0 * std::sqrt((1.0 - c_l1_value) * (1.0 + c_l1_value)));
}

// ---------------------------------------------------------------- scalars

inline AnalyticScalars pd_scalars(double a, cplx b, double f) {
  AnalyticScalars out;
  out.s = pd_s(a, b, f);
  out.g = pd_g(a, b, f);
  return out;
}

inline AnalyticScalars ad_scalars(double a, cplx b, cplx h, cplx dh) {
  AnalyticScalars out;
  const double h_abs = std::abs(h), b_abs = std::abs(b);
  out.s_tilde = ad_s_tilde(a, b, h_abs);
  if (a > 0.0 && a < 1.0 && detail::ad_radicand(a, b_abs, h_abs) > 0.0) out.g_tilde = g_tilde(a, b_abs, h_abs);
  if (h_abs > 0.0 && (a > 0.0 || b_abs > 0.0)) out.G = G_func(a, b_abs, h_abs);
  if (h_abs > 0.0) out.lamb_shift_rate = lamb_shift_rate(h, dh);
  return out;
}

inline AnalyticScalars ru_scalars(const RuState& s, double g1, double g2, double g3) {
  AnalyticScalars out;
  out.omega = ru_omega(s, g1, g2, g3);
  return out;
}

}  // namespace nmcoh::analytic
