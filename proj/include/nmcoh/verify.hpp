#pragma once

// Randomized certifications and oracle comparisons behind `nmcoh verify`.
// Every check is deterministic for a given seed; the text report contains
// no timings so repeated runs are byte-identical.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nmcoh/analytic.hpp"
#include "nmcoh/channels.hpp"
#include "nmcoh/coherence.hpp"
#include "nmcoh/nonmarkov.hpp"
#include "nmcoh/volterra.hpp"

namespace nmcoh::verify {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 20240607;
  std::size_t sign_samples = 10000;
  std::size_t oracle_samples = 1000;
};

inline std::vector<std::string> suite_names() { return {"signs", "oracles", "equivalence", "prop1"}; }

namespace detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

inline std::string sci(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline int sign(double v) { return (v > 0.0) - (v < 0.0); }

// Independent random streams per check, so adding a check never shifts others.
inline Rng stream(const VerifyOptions& opt, std::uint64_t salt) { return Rng(opt.seed * 0x9E3779B97F4A7C15ull + salt); }

inline PdState random_pd(Rng& r) {
  const double a = r.uniform(-1.0, 1.0);
  const double mag = r.uniform() * std::sqrt(1.0 - a * a);
  return PdState{a, std::polar(mag, r.uniform(0.0, 6.283185307179586))};
}

inline AdState random_ad(Rng& r) {
  const double a = r.uniform();
  const double mag = r.uniform() * std::sqrt(a * (1.0 - a));
  return AdState{a, std::polar(mag, r.uniform(0.0, 6.283185307179586))};
}

inline DensityMatrix random_qubit(Rng& r) {
  // Uniform direction, radius^(1/3) for volume-uniform Bloch vectors.
  const double z = r.uniform(-1.0, 1.0), phi = r.uniform(0.0, 6.283185307179586);
  const double rad = std::cbrt(r.uniform());
  const double rho = std::sqrt(1.0 - z * z);
  return ru_apply(RuState{rad * rho * std::cos(phi), rad * rho * std::sin(phi), rad * z}, 0.0, 0.0, 0.0);
}

inline bool match(const WitnessIntervals& a, const WitnessIntervals& b, double dt, std::string& detail) {
  const auto rep = equivalence_report(a, b, dt);
  detail = "intervals=" + std::to_string(a.size()) + " reference=" + std::to_string(b.size()) +
           " max_gap=" + (std::isfinite(rep.max_boundary_gap) ? sci(rep.max_boundary_gap) : std::string("inf")) +
           " tol=" + sci(2.0 * dt);
  return rep.matched;
}

}  // namespace detail

// ---------------------------------------------------------------- signs

inline std::vector<CheckResult> run_signs(const VerifyOptions& opt) {
  std::vector<CheckResult> out;

  {  // g~ < 0 and the factored numerator.
    auto r = detail::stream(opt, 1);
    std::size_t n = 0, violations = 0, factor_bad = 0;
    double worst = -std::numeric_limits<double>::infinity(), factor_err = 0.0;
    while (n < opt.sign_samples) {
      const double a = r.uniform(), h = r.uniform(), b = r.uniform() * std::sqrt(a * (1.0 - a));
      if (!(a > 0.0 && a < 1.0) || analytic::detail::ad_radicand(a, b, h) <= 0.0) continue;
      ++n;
      const double g = analytic::g_tilde(a, b, h);
      worst = std::max(worst, g);
      if (!(g < 0.0)) ++violations;
      const double e = analytic::g_tilde_numerator(a, b, h), f = analytic::g_tilde_numerator_factored(a, b, h);
      const double err = std::abs(e - f) / (1.0 + std::abs(f));
      factor_err = std::max(factor_err, err);
      if (err > 1e-12) ++factor_bad;
    }
    out.push_back({"signs", "g_tilde_negative", violations == 0,
                   "samples=" + std::to_string(n) + " violations=" + std::to_string(violations) + " max=" + detail::sci(worst)});
    out.push_back({"signs", "g_tilde_factored_numerator", factor_bad == 0,
                   "samples=" + std::to_string(n) + " max_rel_err=" + detail::sci(factor_err) + " tol=1e-12"});
  }
  {  // G > 0 with the lower-bound chain.
    auto r = detail::stream(opt, 2);
    std::size_t n = 0, violations = 0, chain_bad = 0;
    double worst = std::numeric_limits<double>::infinity();
    while (n < opt.sign_samples) {
      const double a = r.uniform(), h = 1.0 - r.uniform(), b = (1.0 - r.uniform()) * std::sqrt(a * (1.0 - a));
      if (!(b > 0.0)) continue;
      ++n;
      const double G = analytic::G_func(a, b, h);
      worst = std::min(worst, G);
      if (!(G > 0.0)) ++violations;
      const double lo = analytic::G_certificate_bound(a, b, h), q = analytic::G_certificate_quantity(a, b, h);
      if (!(q >= lo - 1e-12 * (1.0 + std::abs(q)) && q > 0.0)) ++chain_bad;
    }
    out.push_back({"signs", "G_positive", violations == 0,
                   "samples=" + std::to_string(n) + " violations=" + std::to_string(violations) + " min=" + detail::sci(worst)});
    out.push_back({"signs", "G_bound_chain", chain_bad == 0,
                   "samples=" + std::to_string(n) + " violations=" + std::to_string(chain_bad)});
  }
  {  // Derivative signs follow d|h|/dt (AD) and -gamma (PD).
    auto r = detail::stream(opt, 3);
    std::size_t n = 0, bad_cs = 0, bad_c2 = 0;
    while (n < opt.sign_samples) {
      const double a = r.uniform(), h = 1.0 - r.uniform(), b = (1.0 - r.uniform()) * std::sqrt(a * (1.0 - a));
      const double dh = r.uniform(-1.0, 1.0);
      if (!(a > 0.0 && a < 1.0) || !(b > 0.0) || analytic::detail::ad_radicand(a, b, h) <= 0.0 || dh == 0.0) continue;
      ++n;
      if (detail::sign(analytic::dcs_ad(a, b, h, dh)) != detail::sign(dh)) ++bad_cs;
      if (detail::sign(analytic::dc2_ad(a, b, h, dh)) != detail::sign(dh)) ++bad_c2;
    }
    out.push_back({"signs", "ad_skew_derivative_sign", bad_cs == 0,
                   "samples=" + std::to_string(n) + " violations=" + std::to_string(bad_cs)});
    out.push_back({"signs", "ad_mtsallis2_derivative_sign", bad_c2 == 0,
                   "samples=" + std::to_string(n) + " violations=" + std::to_string(bad_c2)});
  }
  {
    auto r = detail::stream(opt, 4);
    std::size_t n = 0, bad_g = 0, bad_cs = 0, bad_c2 = 0;
    while (n < opt.sign_samples) {
      const auto s = detail::random_pd(r);
      const double f = r.uniform(), gamma = r.uniform(-1.0, 1.0);
      const double sv = analytic::pd_s(s.a, s.b, f);
      if (std::abs(s.b) * f == 0.0 || sv < 1e-6 || 1.0 - sv * sv < 1e-6 || gamma == 0.0) continue;
      ++n;
      if (!(analytic::pd_g(s.a, s.b, f) > 0.0)) ++bad_g;
      if (detail::sign(analytic::dcs_pd(s.a, s.b, f, gamma)) != -detail::sign(gamma)) ++bad_cs;
      if (detail::sign(analytic::dc2_pd(s.a, s.b, f, gamma)) != -detail::sign(gamma)) ++bad_c2;
    }
    out.push_back({"signs", "pd_g_positive", bad_g == 0, "samples=" + std::to_string(n) + " violations=" + std::to_string(bad_g)});
    out.push_back({"signs", "pd_derivative_signs", bad_cs + bad_c2 == 0,
                   "samples=" + std::to_string(n) + " violations=" + std::to_string(bad_cs + bad_c2)});
  }
  return out;
}

// ---------------------------------------------------------------- oracles

inline std::vector<CheckResult> run_oracles(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const ReferenceBasis basis;
  auto record = [&](const std::string& name, double err, double tol, std::size_t n) {
    out.push_back({"oracles", name, err <= tol,
                   "draws=" + std::to_string(n) + " max_err=" + detail::sci(err) + " tol=" + detail::sci(tol)});
  };

  {  // Closed forms against channel apply + measure.
    auto r = detail::stream(opt, 11);
    double e_cs = 0.0, e_c2 = 0.0;
    for (std::size_t i = 0; i < opt.oracle_samples; ++i) {
      const auto s = detail::random_pd(r);
      const double f = r.uniform();
      const auto rho = pd_apply(s, f);
      e_cs = std::max(e_cs, std::abs(analytic::cs_pd(s.a, s.b, f).value - c_skew(rho, basis)));
      e_c2 = std::max(e_c2, std::abs(analytic::c2_pd(s.a, s.b, f) - c_tsallis_mod(rho, 2.0, basis)));
    }
    record("pd_skew_closed_form", e_cs, 1e-10, opt.oracle_samples);
    record("pd_mtsallis2_closed_form", e_c2, 1e-10, opt.oracle_samples);
  }
  {
    auto r = detail::stream(opt, 12);
    double e_cs = 0.0, e_c2 = 0.0;
    for (std::size_t i = 0; i < opt.oracle_samples; ++i) {
      const auto s = detail::random_ad(r);
      const double h = r.uniform();
      const auto rho = ad_apply(s, h);
      e_cs = std::max(e_cs, std::abs(analytic::cs_ad(s.a, s.b, h).value - c_skew(rho, basis)));
      e_c2 = std::max(e_c2, std::abs(analytic::c2_ad(s.a, s.b, h) - c_tsallis_mod(rho, 2.0, basis)));
    }
    record("ad_skew_closed_form", e_cs, 1e-10, opt.oracle_samples);
    record("ad_mtsallis2_closed_form", e_c2, 1e-10, opt.oracle_samples);
  }
  {  // Derivatives against central differences of the definitional path.
    constexpr double step = 1e-5, eps = 1e-4;
    auto r = detail::stream(opt, 13);
    double e_cs = 0.0, e_c2 = 0.0;
    std::size_t n = 0;
    while (n < opt.oracle_samples) {
      const auto s = detail::random_pd(r);
      const double f0 = r.uniform(0.0, 0.999), gamma = r.uniform(-2.0, 2.0);
      const double sv = analytic::pd_s(s.a, s.b, f0);
      if (1.0 - sv < eps || sv < eps) continue;
      ++n;
      // f(t) = f0 exp(-2 gamma (t - t0)).
      const double fp = f0 * std::exp(-2.0 * gamma * step), fm = f0 * std::exp(2.0 * gamma * step);
      const double fd_cs = (c_skew(pd_apply(s, fp), basis) - c_skew(pd_apply(s, fm), basis)) / (2.0 * step);
      const double fd_c2 =
          (c_tsallis_mod(pd_apply(s, fp), 2.0, basis) - c_tsallis_mod(pd_apply(s, fm), 2.0, basis)) / (2.0 * step);
      const double v_cs = analytic::dcs_pd(s.a, s.b, f0, gamma), v_c2 = analytic::dc2_pd(s.a, s.b, f0, gamma);
      e_cs = std::max(e_cs, std::abs(v_cs - fd_cs) / (1.0 + std::abs(v_cs)));
      e_c2 = std::max(e_c2, std::abs(v_c2 - fd_c2) / (1.0 + std::abs(v_c2)));
    }
    record("pd_skew_derivative", e_cs, 1e-5, n);
    record("pd_mtsallis2_derivative", e_c2, 1e-5, n);
  }
  {
    constexpr double step = 1e-5, eps = 1e-4;
    auto r = detail::stream(opt, 14);
    double e_cs = 0.0, e_c2 = 0.0;
    std::size_t n = 0;
    while (n < opt.oracle_samples) {
      const auto s = detail::random_ad(r);
      const double b = std::abs(s.b);
      // |h(t)| = h0 + v (t - t0).
      const double h0 = r.uniform(eps, 1.0 - eps), v = r.uniform(-1.0, 1.0);
      if (!(s.a > 0.0 && s.a < 1.0) || b < eps) continue;
      if (analytic::detail::ad_radicand(s.a, b, h0) < eps) continue;
      ++n;
      const auto at = [&](double h) { return ad_apply(s, h); };
      const double hp = h0 + v * step, hm = h0 - v * step;
      const double fd_cs = (c_skew(at(hp), basis) - c_skew(at(hm), basis)) / (2.0 * step);
      const double fd_c2 = (c_tsallis_mod(at(hp), 2.0, basis) - c_tsallis_mod(at(hm), 2.0, basis)) / (2.0 * step);
      const double v_cs = analytic::dcs_ad(s.a, b, h0, v), v_c2 = analytic::dc2_ad(s.a, b, h0, v);
      e_cs = std::max(e_cs, std::abs(v_cs - fd_cs) / (1.0 + std::abs(v_cs)));
      e_c2 = std::max(e_c2, std::abs(v_c2 - fd_c2) / (1.0 + std::abs(v_c2)));
    }
    record("ad_skew_derivative", e_cs, 1e-5, n);
    record("ad_mtsallis2_derivative", e_c2, 1e-5, n);
  }
  {  // Tsallis identities.
    auto r = detail::stream(opt, 15);
    double e_half = 0.0, e_lim = 0.0;
    for (std::size_t i = 0; i < opt.oracle_samples; ++i) {
      const auto rho = detail::random_qubit(r);
      e_half = std::max(e_half, std::abs(c_tsallis_mod(rho, 0.5, basis) - 2.0 * c_skew(rho, basis)));
      const double rel = c_relent(rho, basis, LogBase::E);
      for (double alpha : {1.0 - 1e-4, 1.0 + 1e-4}) e_lim = std::max(e_lim, std::abs(c_tsallis(rho, alpha, basis) - rel));
    }
    record("mtsallis_half_is_twice_skew", e_half, 1e-12, opt.oracle_samples);
    record("tsallis_alpha_to_one_limit", e_lim, 1e-3, opt.oracle_samples);
  }
  {  // Memory-kernel solver against the equivalent local ODE.
    const auto grid = TimeGrid::from_step(1e-3, 5.0);
    for (double W : {0.5, 14.0}) {
      const auto kernel = ExponentialKernel::from_coupling(W, 1.0);
      const auto h = solve_h_volterra(kernel, grid);
      const auto ref = solve_h_local_ode(kernel, grid, 20);
      double err = 0.0;
      for (std::size_t i = 0; i < grid.size; ++i) err = std::max(err, std::abs(h.values[i] - ref.values[i]));
      record("volterra_vs_local_ode_W" + detail::num(W), err, 1e-6, grid.size);
    }
  }
  return out;
}

// ---------------------------------------------------------------- equivalence

inline std::vector<CheckResult> run_equivalence(const VerifyOptions& opt) {
  (void)opt;
  std::vector<CheckResult> out;
  const double W = 14.0, lambda = 1.0, dt = 1e-4, t_max = 1.0;
  const auto grid = TimeGrid::from_step(dt, t_max);
  const auto reference = lorentzian_backflow_intervals(W, lambda, t_max);

  {
    const PhaseDamping pd{DephasingLorentzian{W, lambda}};
    const auto factors = channel_factors(pd, grid);
    const PdState plus{0.0, 1.0};
    const std::vector<std::pair<std::string, CoherenceMeasure>> measures = {
        {"skew", CoherenceMeasure::skew()},
        {"mtsallis2", CoherenceMeasure::modified_tsallis(2.0)},
        {"l1", CoherenceMeasure::l1()}};
    std::string d;
    const bool rate_ok = detail::match(gamma_negative_intervals(pd.profile, grid), reference, dt, d);
    out.push_back({"equivalence", "pd_rate_sign_grid", rate_ok, d});
    for (const auto& [name, m] : measures) {
      const bool ok = detail::match(witness_intervals(trajectory(factors, plus, m), 0.0), reference, dt, d);
      out.push_back({"equivalence", "pd_" + name + "_vs_rate", ok, d});
    }
    const auto blp = blp_witness(factors, {PdState{0.0, 1.0}, PdState{0.0, -1.0}});
    const bool ok = detail::match(witness_intervals(blp, 0.0), reference, dt, d);
    out.push_back({"equivalence", "pd_blp_vs_rate", ok, d});

    // Positive increments of C_S equal the closed-form rise over each interval,
    // up to the O(dt^2) part of each maximum that falls between grid points.
    const auto series = trajectory(factors, plus, CoherenceMeasure::skew());
    double exact = 0.0;
    for (const auto& iv : reference.intervals) {
      const auto f_at = [&](double t) {
        const double g = lorentzian_amplitude(W, lambda, t);
        return (g * g) * (g * g);
      };
      exact += analytic::cs_pd(0.0, 1.0, f_at(iv.t_end)).value - analytic::cs_pd(0.0, 1.0, f_at(iv.t_start)).value;
    }
    const double sum = positive_increment_integral(series);
    const double rel = std::abs(sum - exact) / exact;
    out.push_back({"equivalence", "pd_increment_sum_vs_closed_form", rel <= 1e-5,
                   "sum=" + detail::num(sum) + " exact=" + detail::num(exact) + " rel_err=" + detail::sci(rel) + " tol=1e-05"});
  }
  {
    const AmplitudeDamping ad{ExponentialKernel::from_coupling(W, lambda), {}};
    const auto factors = channel_factors(ad, grid);
    const AdState plus{0.5, 0.5};
    TimeSeries habs{0.0, dt, factors.h};
    for (double& v : habs.values) v = std::abs(v);
    std::string d;
    out.push_back({"equivalence", "ad_abs_h_vs_closed_form", detail::match(witness_intervals(habs, 0.0), reference, dt, d), d});
    for (const auto& [name, m] : std::vector<std::pair<std::string, CoherenceMeasure>>{
             {"skew", CoherenceMeasure::skew()}, {"mtsallis2", CoherenceMeasure::modified_tsallis(2.0)}}) {
      const auto w = witness_intervals(trajectory(factors, plus, m), 0.0);
      std::string d2;
      const bool ok = detail::match(w, reference, dt, d) && detail::match(w, witness_intervals(habs, 0.0), dt, d2);
      out.push_back({"equivalence", "ad_" + name + "_vs_abs_h", ok, d});
    }
  }
  {  // Markovian profiles give a zero measure for every quantifier.
    const auto coarse = TimeGrid::from_step(1e-3, 5.0);
    InitialStateSearch search;
    search.points_x = 7;
    search.points_y = 7;
    search.refinement = 1;
    const std::vector<CoherenceMeasure> measures = {
        CoherenceMeasure::skew(),          CoherenceMeasure::l1(),           CoherenceMeasure::relative_entropy(),
        CoherenceMeasure::tsallis(0.5),    CoherenceMeasure::tsallis(2.0),   CoherenceMeasure::modified_tsallis(0.5),
        CoherenceMeasure::modified_tsallis(2.0)};
    const std::vector<std::pair<std::string, ChannelSpec>> channels = {
        {"pd_W0.4", PhaseDamping{DephasingLorentzian{0.4, 1.0}}},
        {"ad_W0.4", AmplitudeDamping{ExponentialKernel::from_coupling(0.4, 1.0), {}}}};
    for (const auto& [label, channel] : channels) {
      search.family = family_of(channel);
      double worst = 0.0;
      std::string which = "none";
      for (const auto& m : measures) {
        const auto rep = nonmarkov_measure(channel, m, search, coarse);
        if (rep.measure_value > worst) {
          worst = rep.measure_value;
          which = m.name();
        }
      }
      out.push_back({"equivalence", "markov_null_" + label, worst == 0.0,
                     "measures=" + std::to_string(measures.size()) + " max_value=" + detail::sci(worst) + " at=" + which});
    }
  }
  {  // Small-alpha Tsallis detects fewer backflow intervals than its modified form.
    const PhaseDamping pd{DephasingLorentzian{W, lambda}};
    const auto factors = channel_factors(pd, grid);
    const PdState plus{0.0, 1.0};
    const auto original = witness_intervals(trajectory(factors, plus, CoherenceMeasure::tsallis(0.001)), 1e-6);
    const auto modified = witness_intervals(trajectory(factors, plus, CoherenceMeasure::modified_tsallis(0.001)), 1e-6);
    out.push_back({"equivalence", "small_alpha_detection", original.size() < modified.size(),
                   "tsallis=" + std::to_string(original.size()) + " mtsallis=" + std::to_string(modified.size()) +
                       " threshold=1e-06"});
  }
  return out;
}

// ---------------------------------------------------------------- prop1

/// Random-unitary channel whose gamma1 dips below -gamma3 on a known window:
/// gamma1 = 0.3 outside [0.4, 1.0], -0.8 on [0.5, 0.9], linear in between;
/// gamma2 = 0.4, gamma3 = 0.2. gamma1 + gamma3 < 0 exactly on (0.4 + 0.5/11, 0.9 + 0.6/11).
inline RandomUnitary prop1_channel() {
  RandomUnitary ru;
  ru.rates = {Tabulated{{0.0, 0.4, 0.5, 0.9, 1.0, 2.0}, {0.3, 0.3, -0.8, -0.8, 0.3, 0.3}}, ConstantRate{0.4},
              ConstantRate{0.2}};
  return ru;
}

inline Interval prop1_backflow_window() { return {0.4 + 0.5 / 11.0, 0.9 + 0.6 / 11.0}; }

inline std::vector<CheckResult> run_prop1(const VerifyOptions& opt) {
  (void)opt;
  std::vector<CheckResult> out;
  const double dt = 1e-3;
  const auto grid = TimeGrid::from_step(dt, 2.0);
  const auto factors = channel_factors(prop1_channel(), grid);
  const std::vector<std::pair<std::string, RuState>> states = {{"r2_axis", RuState{0.0, 0.8, 0.0}},
                                                               {"in_plane", RuState{0.5, 0.5, 0.0}}};
  for (const auto& [label, s] : states) {
    const auto cs = trajectory(factors, s, CoherenceMeasure::skew());
    const auto cl = trajectory(factors, s, CoherenceMeasure::l1());
    std::size_t checked = 0, bad = 0;
    double rel_err = 0.0;
    for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
      rel_err = std::max(rel_err, std::abs(cs.values[i] - analytic::prop1_relation(cl.values[i])));
      if (cl.values[i] <= 1e-8) continue;
      ++checked;
      if (detail::sign(cs.values[i + 1] - cs.values[i]) != detail::sign(cl.values[i + 1] - cl.values[i])) ++bad;
    }
    out.push_back({"prop1", label + "_sign_agreement", bad == 0 && checked > 0,
                   "steps=" + std::to_string(checked) + " disagreements=" + std::to_string(bad)});
    out.push_back({"prop1", label + "_relation", rel_err <= 1e-12, "max_err=" + detail::sci(rel_err) + " tol=1e-12"});
  }
  {
    const auto cs = trajectory(factors, RuState{0.0, 0.8, 0.0}, CoherenceMeasure::skew());
    WitnessIntervals ref;
    ref.intervals.push_back(prop1_backflow_window());
    std::string d;
    out.push_back({"prop1", "r2_axis_window", detail::match(witness_intervals(cs, 0.0), ref, dt, d), d});
  }
  return out;
}

inline std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& opt) {
  if (suite == "signs") return run_signs(opt);
  if (suite == "oracles") return run_oracles(opt);
  if (suite == "equivalence") return run_equivalence(opt);
  if (suite == "prop1") return run_prop1(opt);
  if (suite == "all") {
    std::vector<CheckResult> all;
    for (const auto& name : suite_names()) {
      auto part = run_suite(name, opt);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  fail(ErrorCode::Config, "unknown verify suite '" + suite + "' (signs, oracles, equivalence, prop1, all)");
}

inline std::string format_results(const std::vector<CheckResult>& results, std::uint64_t seed) {
  std::string out = "# seed=" + std::to_string(seed) + "\n";
  std::size_t failed = 0;
  for (const auto& r : results) {
    out += std::string(r.passed ? "PASS " : "FAIL ") + r.suite + "/" + r.name + " " + r.detail + "\n";
    if (!r.passed) ++failed;
  }
  out += "summary checks=" + std::to_string(results.size()) + " failed=" + std::to_string(failed) + "\n";
  return out;
}

}  // namespace nmcoh::verify
