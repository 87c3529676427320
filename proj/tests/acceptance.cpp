// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nmcoh/analytic.hpp"
#include "nmcoh/nonmarkov.hpp"
#include "nmcoh/verify.hpp"
#include "oracle.hpp"

using namespace nmcoh;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

constexpr double kLambda = 1.0;
constexpr double kW = 14.0;
constexpr std::uint64_t kSeed = 20240607;

// Test-side closed forms for the Lorentzian bath, oscillatory regime.
double omega_d(double W) { return std::sqrt(4.0 * W * W - kLambda * kLambda); }

double amp(double W, double t) {
  const double d = omega_d(W);
  return std::exp(-kLambda * t / 2.0) * (std::cos(d * t / 2.0) + (kLambda / d) * std::sin(d * t / 2.0));
}

double amp_dot(double W, double t) {
  const double d = omega_d(W);
  return -(2.0 * W * W / d) * std::exp(-kLambda * t / 2.0) * std::sin(d * t / 2.0);
}

double pd_rate(double W, double t) { return -2.0 * amp_dot(W, t) / amp(W, t); }

oracle::Mat pd_matrix(double a, oracle::cd b, double f) {
  oracle::Mat m;
  m << 0.5 * (1.0 + a), 0.5 * b * f, 0.5 * std::conj(b) * f, 0.5 * (1.0 - a);
  return m;
}

oracle::Mat ad_matrix(double a, oracle::cd b, double h) {
  oracle::Mat m;
  m << 1.0 - h * h * a, b * h, std::conj(b) * h, h * h * a;
  return m;
}

double min_eigenvalue(const oracle::Mat& m) {
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(m);
  return es.eigenvalues()(0);
}

oracle::cd random_b(std::mt19937_64& rng, double max_abs) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = max_abs * std::sqrt(u(rng));
  const double phi = 2.0 * M_PI * u(rng);
  return std::polar(r, phi);
}

// Ground-truth set where the Lorentzian rate is negative on [0, t_max]: from
// each zero of the amplitude up to the next zero of its derivative.
WitnessIntervals reference_intervals(double W, double t_max) {
  const double d = omega_d(W);
  WitnessIntervals out;
  for (int k = 1;; ++k) {
    const double start = 2.0 * (k * M_PI - std::atan(d / kLambda)) / d;
    if (start >= t_max) break;
    out.intervals.push_back({start, std::min(t_max, 2.0 * k * M_PI / d)});
  }
  return out;
}

Outcome compare_intervals(const std::string& label, const WitnessIntervals& got, const WitnessIntervals& ref, double dt) {
  const auto eq = equivalence_report(got, ref, dt);
  return {eq.matched, label + " n=" + std::to_string(got.size()) + "/" + std::to_string(ref.size()) +
                          " gap=" + sci(eq.max_boundary_gap)};
}

Outcome all_of(const std::vector<Outcome>& parts) {
  Outcome out{true, ""};
  for (const auto& p : parts) {
    out.passed = out.passed && p.passed;
    out.detail += (out.detail.empty() ? "" : "; ") + p.detail;
  }
  return out;
}

// 1. Closed forms against channel output plus eigendecomposition.
Outcome closed_forms() {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double e_cs_pd = 0, e_c2_pd = 0, e_cs_ad = 0, e_c2_ad = 0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const double a = u(rng) * 2.0 - 1.0;
    const auto b = random_b(rng, std::sqrt(1.0 - a * a));
    const double f = u(rng);
    const auto m = pd_matrix(a, b, f);
    e_cs_pd = std::max(e_cs_pd, std::abs(analytic::cs_pd(a, b, f).value - oracle::skew(m)));
    e_c2_pd = std::max(e_c2_pd, std::abs(analytic::c2_pd(a, b, f) - oracle::tsallis_mod(m, 2.0)));
  }
  for (int i = 0; i < n; ++i) {
    const double a = u(rng);
    const auto b = random_b(rng, std::sqrt(a * (1.0 - a)));
    const double h = u(rng);
    const auto m = ad_matrix(a, b, h);
    e_cs_ad = std::max(e_cs_ad, std::abs(analytic::cs_ad(a, b, h).value - oracle::skew(m)));
    e_c2_ad = std::max(e_c2_ad, std::abs(analytic::c2_ad(a, b, h) - oracle::tsallis_mod(m, 2.0)));
  }
  const double worst = std::max({e_cs_pd, e_c2_pd, e_cs_ad, e_c2_ad});
  return {worst <= 1e-10, "draws=" + std::to_string(n) + " cs_pd=" + sci(e_cs_pd) + " c2_pd=" + sci(e_c2_pd) +
                              " cs_ad=" + sci(e_cs_ad) + " c2_ad=" + sci(e_c2_ad)};
}

// 2. Closed-form derivatives against central differences in time.
Outcome derivatives() {
  std::mt19937_64 rng(kSeed + 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double step = 1e-5, eps = 1e-4;
  const int n = 1000;
  double worst[4] = {0, 0, 0, 0};
  int used[4] = {0, 0, 0, 0};
  auto record = [&](int k, double closed, double fd) {
    worst[k] = std::max(worst[k], std::abs(closed - fd) / (1.0 + std::abs(closed)));
    ++used[k];
  };
  for (int i = 0; i < n; ++i) {
    const double a = u(rng) * 2.0 - 1.0;
    const auto b = random_b(rng, std::sqrt(1.0 - a * a));
    const double t = 0.01 + 0.98 * u(rng);
    const double f = std::pow(amp(kW, t), 4);
    const double s = std::sqrt(std::norm(b) * f * f + a * a);
    if (s < eps || 1.0 - s * s < eps) continue;
    const double fp = std::pow(amp(kW, t + step), 4), fm = std::pow(amp(kW, t - step), 4);
    const double g = pd_rate(kW, t);
    record(0, analytic::dcs_pd(a, b, f, g),
           (oracle::skew(pd_matrix(a, b, fp)) - oracle::skew(pd_matrix(a, b, fm))) / (2.0 * step));
    record(1, analytic::dc2_pd(a, b, f, g),
           (oracle::tsallis_mod(pd_matrix(a, b, fp), 2.0) - oracle::tsallis_mod(pd_matrix(a, b, fm), 2.0)) / (2.0 * step));
  }
  for (int i = 0; i < n; ++i) {
    const double a = 0.01 + 0.98 * u(rng);
    const auto b = random_b(rng, std::sqrt(a * (1.0 - a)));
    const double t = 0.01 + 0.98 * u(rng);
    const double h = amp(kW, t);
    const double habs = std::abs(h);
    if (habs < eps || min_eigenvalue(ad_matrix(a, b, habs)) < eps) continue;
    const double dh = (h > 0 ? 1.0 : -1.0) * amp_dot(kW, t);
    const double hp = std::abs(amp(kW, t + step)), hm = std::abs(amp(kW, t - step));
    record(2, analytic::dcs_ad(a, b, habs, dh),
           (oracle::skew(ad_matrix(a, b, hp)) - oracle::skew(ad_matrix(a, b, hm))) / (2.0 * step));
    record(3, analytic::dc2_ad(a, b, habs, dh),
           (oracle::tsallis_mod(ad_matrix(a, b, hp), 2.0) - oracle::tsallis_mod(ad_matrix(a, b, hm), 2.0)) / (2.0 * step));
  }
  const double w = *std::max_element(worst, worst + 4);
  const bool enough = *std::min_element(used, used + 4) >= 500;
  return {w <= 1e-5 && enough, "dcs_pd=" + sci(worst[0]) + " dc2_pd=" + sci(worst[1]) + " dcs_ad=" + sci(worst[2]) +
                                   " dc2_ad=" + sci(worst[3]) + " used=" + std::to_string(used[0]) + "/" +
                                   std::to_string(used[2])};
}

// 3. Sign lemmas on random interior samples.
Outcome sign_lemmas() {
  std::mt19937_64 rng(kSeed + 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bad_g = 0, bad_G = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    double a, h, v;
    do {
      a = u(rng);
      h = u(rng);
      v = u(rng);
    } while (a == 0.0 || h == 0.0 || v == 0.0);
    const double b = std::sqrt(v * a * (1.0 - a));
    if (!(analytic::g_tilde(a, b, h) < 0.0)) ++bad_g;
    if (!(analytic::G_func(a, b, h) > 0.0)) ++bad_G;
  }
  return {bad_g == 0 && bad_G == 0,
          "samples=" + std::to_string(n) + " g_tilde_violations=" + std::to_string(bad_g) + " G_violations=" + std::to_string(bad_G)};
}

// 4. Phase damping witness intervals against the negative-rate set.
Outcome pd_equivalence() {
  const double dt = 1e-4, t_max = 1.0;
  const auto grid = TimeGrid::from_step(dt, t_max);
  const ChannelSpec ch = PhaseDamping{DephasingLorentzian{kW, kLambda}};
  const auto factors = channel_factors(ch, grid);
  const auto ref = reference_intervals(kW, t_max);
  const InitialQubitState plus = PdState{0.0, 1.0};
  const InitialQubitState general = PdState{0.3, cplx(0.5, 0.4)};
  std::vector<Outcome> parts;
  parts.push_back(compare_intervals("gamma", gamma_negative_intervals(DephasingLorentzian{kW, kLambda}, grid), ref, dt));
  for (const auto& [label, state] : {std::pair{"+", plus}, std::pair{"g", general}}) {
    for (const auto& m : {CoherenceMeasure::skew(), CoherenceMeasure::modified_tsallis(2.0), CoherenceMeasure::l1()})
      parts.push_back(compare_intervals(m.name() + "[" + label + "]",
                                        witness_intervals(trajectory(factors, state, m), 0.0), ref, dt));
  }
  const auto blp = blp_witness(factors, {PdState{0.0, 1.0}, PdState{0.0, -1.0}});
  parts.push_back(compare_intervals("blp", witness_intervals(blp, 0.0), ref, dt));
  return all_of(parts);
}

// 5. Amplitude damping witness intervals against the growth set of |h|.
Outcome ad_equivalence() {
  const double dt = 1e-4, t_max = 1.0;
  const auto grid = TimeGrid::from_step(dt, t_max);
  const ChannelSpec ch = AmplitudeDamping{ExponentialKernel::from_coupling(kW, kLambda)};
  const auto factors = channel_factors(ch, grid);
  double h_err = 0.0;
  for (std::size_t i = 0; i < grid.size; ++i) h_err = std::max(h_err, std::abs(factors.h[i] - amp(kW, grid.t(i))));
  const auto ref = reference_intervals(kW, t_max);
  std::vector<Outcome> parts;
  parts.push_back({h_err <= 1e-8, "h_err=" + sci(h_err)});
  for (const InitialQubitState& state : {InitialQubitState{AdState{0.5, 0.5}}, InitialQubitState{AdState{0.3, cplx(0.2, 0.3)}}})
    for (const auto& m : {CoherenceMeasure::skew(), CoherenceMeasure::modified_tsallis(2.0)})
      parts.push_back(compare_intervals(m.name(), witness_intervals(trajectory(factors, state, m), 0.0), ref, dt));
  return all_of(parts);
}

// 6. Markovian dynamics give a zero measure for every measure family.
Outcome markov_null() {
  const auto grid = TimeGrid::from_step(1e-3, 5.0);
  const std::vector<CoherenceMeasure> measures = {
      CoherenceMeasure::skew(),           CoherenceMeasure::tsallis(0.5),          CoherenceMeasure::tsallis(1.5),
      CoherenceMeasure::modified_tsallis(0.5), CoherenceMeasure::modified_tsallis(2.0), CoherenceMeasure::l1(),
      CoherenceMeasure::relative_entropy()};
  std::vector<std::pair<ChannelSpec, ChannelFamily>> channels = {
      {PhaseDamping{DephasingLorentzian{0.4, kLambda}}, ChannelFamily::PD},
      {AmplitudeDamping{ExponentialKernel::from_coupling(0.4, kLambda)}, ChannelFamily::AD}};
  double worst = 0.0;
  std::size_t evaluations = 0;
  for (const auto& [ch, fam] : channels) {
    InitialStateSearch search;
    search.family = fam;
    search.points_x = 9;
    search.points_y = 9;
    search.refinement = 1;
    search.increment_threshold = 1e-12;
    for (const auto& m : measures) {
      const auto rep = nonmarkov_measure(ch, m, search, grid);
      worst = std::max(worst, rep.measure_value);
      evaluations += rep.evaluations;
    }
  }
  return {worst == 0.0, "max_measure=" + sci(worst) + " evaluations=" + std::to_string(evaluations)};
}

// 7. Volterra solution against the local oscillator ODE and its closed form.
Outcome volterra() {
  const auto grid = TimeGrid::from_step(1e-3, 5.0);
  double worst = 0.0;
  std::string detail;
  for (double W : {0.5, 14.0}) {
    const auto kernel = ExponentialKernel::from_coupling(W, kLambda);
    const auto h = solve_h_volterra(kernel, grid);
    const auto ode = solve_h_local_ode(kernel, grid, 20);
    double e_ode = 0.0, e_exact = 0.0;
    for (std::size_t i = 0; i < grid.size; ++i) {
      const double t = grid.t(i);
      const double exact = W == 0.5 ? std::exp(-t / 2.0) * (1.0 + t / 2.0) : amp(W, t);
      e_ode = std::max(e_ode, std::abs(h.values[i] - ode.values[i]));
      e_exact = std::max(e_exact, std::abs(h.values[i] - exact));
    }
    worst = std::max({worst, e_ode, e_exact});
    detail += "W=" + std::string(W == 0.5 ? "0.5" : "14") + " ode=" + sci(e_ode) + " exact=" + sci(e_exact) + " ";
  }
  return {worst <= 1e-6, detail};
}

// 8. Tsallis identities on random states.
Outcome tsallis_identities() {
  std::mt19937_64 rng(kSeed + 3);
  const ReferenceBasis basis{2};
  double e_half = 0.0, e_half_oracle = 0.0, e_limit = 0.0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const auto m = oracle::random_state(rng);
    const auto rho = oracle::from_eigen(m);
    const double half = c_tsallis_mod(rho, 0.5, basis);
    e_half = std::max(e_half, std::abs(half - 2.0 * c_skew(rho, basis)));
    e_half_oracle = std::max(e_half_oracle, std::abs(half - 2.0 * oracle::skew(m)));
    const double rel = oracle::relent_nats(m);
    e_limit = std::max({e_limit, std::abs(c_tsallis(rho, 1.0 - 1e-4, basis) - rel),
                        std::abs(c_tsallis(rho, 1.0 + 1e-4, basis) - rel)});
  }
  return {e_half <= 1e-12 && e_half_oracle <= 1e-12 && e_limit <= 1e-3,
          "half=" + sci(e_half) + " half_vs_oracle=" + sci(e_half_oracle) + " alpha_to_1=" + sci(e_limit)};
}

// 9. Random unitary channel: skew and l1 coherence move together.
Outcome proposition1() {
  Tabulated g1{{0.0, 0.4, 0.5, 0.9, 1.0, 2.0}, {0.3, 0.3, -0.8, -0.8, 0.3, 0.3}};
  const double g3 = 0.2;
  const ChannelSpec ch = RandomUnitary{{g1, ConstantRate{0.4}, ConstantRate{g3}}};
  const auto grid = TimeGrid::from_step(1e-3, 2.0);
  std::size_t negative_steps = 0;
  for (std::size_t i = 0; i < grid.size; ++i)
    if (gamma_eval(g1, grid.t(i)) + g3 < 0.0) ++negative_steps;
  const auto factors = channel_factors(ch, grid);
  std::size_t compared = 0, disagreements = 0, increases = 0;
  double rel_err = 0.0;
  for (const auto& s : {RuState{0.0, 0.8, 0.0}, RuState{0.5, 0.5, 0.0}, RuState{0.9, 0.0, 0.0}, RuState{0.3, -0.6, 0.0}}) {
    const auto cs = trajectory(factors, s, CoherenceMeasure::skew());
    const auto cl = trajectory(factors, s, CoherenceMeasure::l1());
    for (std::size_t i = 0; i < grid.size; ++i) {
      const double c = cl.values[i];
      rel_err = std::max(rel_err, std::abs(cs.values[i] - (0.5 - std::sqrt(1.0 - c * c) / 2.0)));
      if (i + 1 == grid.size || c <= 1e-8) continue;
      const double ds = cs.values[i + 1] - cs.values[i], dl = cl.values[i + 1] - c;
      ++compared;
      if ((ds > 0) != (dl > 0) || (ds < 0) != (dl < 0)) ++disagreements;
      if (dl > 0) ++increases;
    }
  }
  return {negative_steps > 0 && increases > 0 && disagreements == 0 && rel_err <= 1e-12,
          "negative_rate_steps=" + std::to_string(negative_steps) + " compared=" + std::to_string(compared) +
              " increases=" + std::to_string(increases) + " disagreements=" + std::to_string(disagreements) +
              " relation_err=" + sci(rel_err)};
}

// 10. At tiny alpha the plain Tsallis measure misses increases that the
// modified one detects.
Outcome small_alpha() {
  const auto grid = TimeGrid::from_step(1e-4, 1.0);
  const auto factors = channel_factors(PhaseDamping{DephasingLorentzian{kW, kLambda}}, grid);
  const InitialQubitState plus = PdState{0.0, 1.0};
  const auto plain = witness_intervals(trajectory(factors, plus, CoherenceMeasure::tsallis(0.001)), 1e-6);
  const auto mod = witness_intervals(trajectory(factors, plus, CoherenceMeasure::modified_tsallis(0.001)), 1e-6);
  return {plain.size() < mod.size(),
          "tsallis=" + std::to_string(plain.size()) + " mtsallis=" + std::to_string(mod.size())};
}

// 11. The full verification suite is byte-reproducible and fast.
Outcome determinism() {
  const verify::VerifyOptions opt;
  const auto t0 = std::chrono::steady_clock::now();
  const auto first = verify::format_results(verify::run_suite("all", opt), opt.seed);
  const auto t1 = std::chrono::steady_clock::now();
  const auto second = verify::format_results(verify::run_suite("all", opt), opt.seed);
  const double s1 = std::chrono::duration<double>(t1 - t0).count();
  const bool all_pass = first.find("failed=0\n") != std::string::npos;
  return {first == second && s1 < 60.0 && all_pass,
          std::string(first == second ? "identical" : "different") + " bytes=" + std::to_string(first.size()) +
              " seconds=" + sci(s1) + (all_pass ? " suite_pass" : " suite_fail")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"closed_forms", 5.0, closed_forms},
      {"derivatives", 5.0, derivatives},
      {"sign_lemmas", 0.0, sign_lemmas},
      {"pd_equivalence", 0.0, pd_equivalence},
      {"ad_equivalence", 0.0, ad_equivalence},
      {"markov_null", 0.0, markov_null},
      {"volterra", 0.0, volterra},
      {"tsallis_identities", 0.0, tsallis_identities},
      {"proposition1", 0.0, proposition1},
      {"small_alpha", 0.0, small_alpha},
      {"determinism", 60.0, determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && secs >= c.budget_s) {
      o.passed = false;
      o.detail += " over_budget";
    }
    if (!o.passed) ++failed;
    std::printf("%s %zu %s time=%.2fs %s\n", o.passed ? "PASS" : "FAIL", i + 1, c.name, secs, o.detail.c_str());
  }
  std::printf("acceptance criteria=%zu failed=%d\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
