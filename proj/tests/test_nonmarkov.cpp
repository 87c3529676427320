#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nmcoh/analytic.hpp"
#include "nmcoh/nonmarkov.hpp"

using namespace nmcoh;

namespace {
TimeSeries series(std::vector<double> v, double dt = 0.1) { return TimeSeries{0.0, dt, std::move(v)}; }

const ChannelSpec kStrong = PhaseDamping{DephasingLorentzian{14.0, 1.0}};
}  // namespace

TEST(PositiveIncrement, Examples) {
  EXPECT_NEAR(positive_increment_integral(series({0.0, 0.1, 0.05, 0.2})), 0.25, 1e-15);
  EXPECT_EQ(positive_increment_integral(series({1.0, 0.8, 0.5, 0.1})), 0.0);
  EXPECT_NEAR(positive_increment_integral(series({0.0, 0.1, 0.05, 0.2}), 0.12), 0.15, 1e-15);
  EXPECT_THROW(positive_increment_integral(series({0.0, 1.0})), Error);
}

TEST(WitnessIntervals, Examples) {
  EXPECT_TRUE(witness_intervals(series({1.0, 0.9, 0.8, 0.7})).empty());
  const auto one = witness_intervals(series({0.5, 0.4, 0.6, 0.8, 0.3}));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one.intervals[0].t_start, 0.1, 1e-15);
  EXPECT_NEAR(one.intervals[0].t_end, 0.3, 1e-15);
  const auto open = witness_intervals(series({0.5, 0.4, 0.6, 0.8}));
  ASSERT_EQ(open.size(), 1u);
  EXPECT_NEAR(open.intervals[0].t_end, 0.3, 1e-15);
}

TEST(Trajectory, ConstantRateIsNonIncreasing) {
  const auto s = trajectory(PhaseDamping{ConstantRate{0.5}}, PdState{0.2, 0.7}, CoherenceMeasure::skew(),
                            TimeGrid::from_step(1e-3, 2.0));
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LT(s.values[i], s.values[i - 1]);
}

TEST(Trajectory, FrozenDynamicsIsConstant) {
  const auto s = trajectory(PhaseDamping{ConstantRate{0.0}}, PdState{0.2, 0.7}, CoherenceMeasure::l1(),
                            TimeGrid::from_step(1e-3, 1.0));
  for (double v : s.values) EXPECT_DOUBLE_EQ(v, 0.7);
}

TEST(Trajectory, StrongCouplingOscillates) {
  const auto grid = TimeGrid::from_step(1e-4, 1.0);
  const auto s = trajectory(kStrong, PdState{0.0, 1.0}, CoherenceMeasure::skew(), grid);
  EXPECT_DOUBLE_EQ(s.values[0], 0.5);
  EXPECT_GT(positive_increment_integral(s), 0.0);
  // Frozen samples; the closed form is an independent check of the same points.
  for (std::size_t i : {std::size_t{1000}, std::size_t{3000}, std::size_t{7500}}) {
    const double g = lorentzian_amplitude(14.0, 1.0, grid.t(i));
    EXPECT_NEAR(s.values[i], analytic::cs_pd(0.0, 1.0, g * g * g * g).value, 1e-14);
  }
  EXPECT_NEAR(s.values[1000], 5.4469473592790735e-07, 1e-16);
  EXPECT_NEAR(s.values[3000], 4.2618536207693374e-04, 1e-15);
  EXPECT_NEAR(s.values[7500], 5.9466782986829462e-05, 1e-15);
}

TEST(Trajectory, IncrementMatchesDerivativeQuadrature) {
  // Over one negative-rate interval the summed increments equal the integral
  // of the closed-form derivative.
  const auto grid = TimeGrid::from_step(1e-4, 1.0);
  const auto s = trajectory(kStrong, PdState{0.3, 0.6}, CoherenceMeasure::skew(), grid);
  const auto ref = lorentzian_backflow_intervals(14.0, 1.0, 1.0);
  ASSERT_EQ(ref.size(), 4u);
  const auto& iv = ref.intervals[0];
  auto rate = [&](double t) {
    const double g = lorentzian_amplitude(14.0, 1.0, t);
    const double f = g * g * g * g;
    return analytic::dcs_pd(0.3, 0.6, f, gamma_eval(DephasingLorentzian{14.0, 1.0}, t));
  };
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(rate, iv.t_start + 1e-9, iv.t_end, 10, 1e-13);
  const auto k0 = static_cast<std::size_t>(std::ceil(iv.t_start / grid.dt));
  const auto k1 = static_cast<std::size_t>(std::floor(iv.t_end / grid.dt));
  double sum = 0.0;
  for (std::size_t k = k0; k < k1; ++k) sum += std::max(0.0, s.values[k + 1] - s.values[k]);
  EXPECT_GT(integral, 0.0);
  EXPECT_NEAR(sum, integral, 1e-3 * integral);
}

TEST(Blp, PhaseDampingPairGivesF) {
  const auto grid = TimeGrid::from_step(1e-3, 1.0);
  const auto factors = channel_factors(kStrong, grid);
  const auto d = blp_witness(factors, {PdState{0.0, 1.0}, PdState{0.0, -1.0}});
  for (std::size_t i = 0; i < grid.size; ++i) EXPECT_NEAR(d.values[i], std::abs(factors.f[i]), 1e-14);
  const auto z = blp_witness(factors, {PdState{0.1, 0.5}, PdState{0.1, 0.5}});
  for (double v : z.values) EXPECT_EQ(v, 0.0);
}

TEST(Blp, AmplitudeDampingPairGivesHSquared) {
  const auto grid = TimeGrid::from_step(1e-3, 1.0);
  const auto factors = channel_factors(AmplitudeDamping{ExponentialKernel::from_coupling(3.0, 1.0)}, grid);
  const auto d = blp_witness(factors, {AdState{1.0, 0.0}, AdState{0.0, 0.0}});
  for (std::size_t i = 0; i < grid.size; ++i) EXPECT_NEAR(d.values[i], factors.h[i] * factors.h[i], 1e-14);
}

TEST(Equivalence, Examples) {
  const WitnessIntervals a{{{0.1, 0.2}, {0.5, 0.6}}};
  auto r = equivalence_report(a, a, 0.01);
  EXPECT_TRUE(r.matched);
  EXPECT_EQ(r.max_boundary_gap, 0.0);
  const WitnessIntervals shifted{{{0.11, 0.21}, {0.51, 0.61}}};
  r = equivalence_report(a, shifted, 0.01);
  EXPECT_TRUE(r.matched);
  EXPECT_NEAR(r.max_boundary_gap, 0.01, 1e-15);
  const WitnessIntervals fewer{{{0.1, 0.2}}};
  EXPECT_FALSE(equivalence_report(a, fewer, 0.01).matched);
  const WitnessIntervals far{{{0.14, 0.2}, {0.5, 0.6}}};
  EXPECT_FALSE(equivalence_report(a, far, 0.01).matched);
}

TEST(Equivalence, GammaSignMatchesAnalyticBoundaries) {
  const auto grid = TimeGrid::from_step(1e-4, 1.0);
  const auto got = gamma_negative_intervals(DephasingLorentzian{14.0, 1.0}, grid);
  const auto ref = lorentzian_backflow_intervals(14.0, 1.0, 1.0);
  ASSERT_EQ(ref.size(), 4u);
  EXPECT_NEAR(ref.intervals[0].t_start, 0.1148, 1e-4);
  EXPECT_NEAR(ref.intervals[3].t_end, 0.8982, 1e-4);
  EXPECT_TRUE(equivalence_report(got, ref, grid.dt).matched);
  EXPECT_TRUE(lorentzian_backflow_intervals(0.4, 1.0, 5.0).empty());
}

TEST(Measure, WeakCouplingIsZero) {
  InitialStateSearch search;
  search.points_x = 5;
  search.points_y = 5;
  search.refinement = 1;
  const auto grid = TimeGrid::from_step(1e-3, 3.0);
  for (const auto& m : {CoherenceMeasure::skew(), CoherenceMeasure::l1(), CoherenceMeasure::tsallis(0.5)})
    EXPECT_EQ(nonmarkov_measure(PhaseDamping{DephasingLorentzian{0.4, 1.0}}, m, search, grid).measure_value, 0.0);
  EXPECT_EQ(nonmarkov_measure(PhaseDamping{ConstantRate{0.5}}, CoherenceMeasure::skew(), search, grid).measure_value, 0.0);
}

TEST(Measure, StrongCouplingPrefersMaximalCoherence) {
  InitialStateSearch search;
  search.points_x = 7;
  search.points_y = 7;
  search.refinement = 2;
  search.keep_table = true;
  const auto grid = TimeGrid::from_step(1e-4, 1.0);
  const auto rep = nonmarkov_measure(kStrong, CoherenceMeasure::skew(), search, grid);
  EXPECT_GT(rep.measure_value, 0.0);
  const auto& best = std::get<PdState>(rep.argmax_state);
  EXPECT_NEAR(best.a, 0.0, 1e-12);
  EXPECT_NEAR(std::abs(best.b), 1.0, 1e-12);
  EXPECT_EQ(rep.intervals.size(), 4u);
  EXPECT_EQ(rep.per_state_values.size(), rep.evaluations);
  EXPECT_NEAR(rep.measure_value,
              positive_increment_integral(trajectory(kStrong, PdState{0.0, 1.0}, CoherenceMeasure::skew(), grid), 1e-12),
              1e-15);
}

TEST(Measure, ThreadCountDoesNotChangeResult) {
  InitialStateSearch search;
  search.points_x = 6;
  search.points_y = 6;
  search.refinement = 1;
  search.keep_table = true;
  const auto grid = TimeGrid::from_step(1e-3, 1.0);
  search.threads = 1;
  const auto a = nonmarkov_measure(kStrong, CoherenceMeasure::l1(), search, grid);
  search.threads = 3;
  const auto b = nonmarkov_measure(kStrong, CoherenceMeasure::l1(), search, grid);
  EXPECT_EQ(a.measure_value, b.measure_value);
  ASSERT_EQ(a.per_state_values.size(), b.per_state_values.size());
  for (std::size_t i = 0; i < a.per_state_values.size(); ++i)
    EXPECT_EQ(a.per_state_values[i].value, b.per_state_values[i].value);
}

TEST(Measure, FamilyMismatch) {
  InitialStateSearch search;
  search.family = ChannelFamily::AD;
  try {
    nonmarkov_measure(kStrong, CoherenceMeasure::skew(), search, TimeGrid::from_step(1e-3, 0.1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedChannel);
  }
}
