#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <fstream>

#include "nmcoh/profiles.hpp"

using namespace nmcoh;

TEST(Gamma, ZeroAtOrigin) {
  for (double W : {0.1, 0.4, 0.5, 3.0, 14.0}) EXPECT_EQ(gamma_eval(DephasingLorentzian{W, 1.0}, 0.0), 0.0);
}

TEST(Gamma, OscillatoryAtQuarterPeriod) {
  const double d = std::sqrt(783.0);
  EXPECT_NEAR(gamma_eval(DephasingLorentzian{14.0, 1.0}, M_PI / d), 784.0, 1e-9);
}

TEST(Gamma, OverdampedAsymptote) {
  // 4W^2 / (d + lambda), d = sqrt(lambda^2 - 4W^2) = 0.6; at t = 20 the
  // remaining transient is 4W^2 tanh(6) / (0.6 + tanh(6)).
  const double th = std::tanh(6.0);
  EXPECT_NEAR(gamma_eval(DephasingLorentzian{0.4, 1.0}, 20.0), 0.64 * th / (0.6 + th), 1e-14);
  EXPECT_NEAR(gamma_eval(DephasingLorentzian{0.4, 1.0}, 20.0), 0.4, 1e-5);
  EXPECT_NEAR(gamma_eval(DephasingLorentzian{0.4, 1.0}, 80.0), 0.4, 1e-14);
}

TEST(Gamma, CriticalLimitIsContinuous) {
  const double below = gamma_eval(DephasingLorentzian{0.5 - 1e-9, 1.0}, 1.3);
  const double at = gamma_eval(DephasingLorentzian{0.5, 1.0}, 1.3);
  const double above = gamma_eval(DephasingLorentzian{0.5 + 1e-9, 1.0}, 1.3);
  EXPECT_NEAR(below, at, 1e-7);
  EXPECT_NEAR(above, at, 1e-7);
}

TEST(Gamma, NegativeTime) {
  try {
    gamma_eval(ConstantRate{1.0}, -0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeTime);
  }
}

TEST(FFromGamma, ConstantRate) {
  const auto grid = TimeGrid::from_step(1e-3, 1.0);
  const auto f = f_from_gamma(ConstantRate{0.5}, grid);
  EXPECT_EQ(f.values.front(), 1.0);
  EXPECT_NEAR(f.values.back(), std::exp(-1.0), 1e-12);
}

TEST(FFromGamma, StartsAtOne) {
  const auto grid = TimeGrid::from_step(1e-3, 0.5);
  for (const DecayProfile& p : {DecayProfile{DephasingLorentzian{14.0, 1.0}}, DecayProfile{DephasingLorentzian{0.4, 1.0}},
                                DecayProfile{ConstantRate{2.0}}})
    EXPECT_EQ(f_from_gamma(p, grid).values.front(), 1.0);
}

TEST(FFromGamma, LorentzianMatchesAdaptiveQuadrature) {
  // Before the first pole (t ~ 0.115) the rate is smooth, so quadrature applies.
  const DephasingLorentzian p{14.0, 1.0};
  const auto rate = [&](double t) { return gamma_eval(p, t); };
  const auto grid = TimeGrid::from_step(1e-4, 0.1);
  const auto f = f_from_gamma(p, grid);
  for (std::size_t i : {std::size_t{100}, std::size_t{500}, std::size_t{1000}}) {
    const double t = grid.t(i);
    const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(rate, 0.0, t, 15, 1e-14);
    EXPECT_NEAR(f.values[i], std::exp(-2.0 * integral), 1e-12) << t;
  }
  // Frozen value at t = 0.01.
  EXPECT_NEAR(f.values[100], 0.9615609185868854, 1e-13);
}

TEST(FFromGamma, WeakCouplingSimpsonAgreesWithClosedForm) {
  // A tabulated copy of the smooth W = 0.4 rate goes through Simpson.
  const DephasingLorentzian p{0.4, 1.0};
  Tabulated tab;
  for (int i = 0; i <= 5000; ++i) {
    tab.times.push_back(i * 1e-3);
    tab.values.push_back(gamma_eval(p, i * 1e-3));
  }
  const auto grid = TimeGrid::from_step(1e-3, 5.0);
  const auto exact = f_from_gamma(p, grid);
  const auto simpson = f_from_gamma(tab, grid);
  for (std::size_t i = 0; i < grid.size; ++i) EXPECT_NEAR(simpson.values[i], exact.values[i], 1e-10);
}

TEST(FFromGamma, EmptyGrid) {
  try {
    f_from_gamma(ConstantRate{1.0}, TimeGrid{1e-3, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyGrid);
  }
}

TEST(CumulativeSimpson, PolynomialExact) {
  std::vector<double> y;
  const double dt = 0.01;
  for (int i = 0; i <= 100; ++i) y.push_back(std::pow(i * dt, 2));
  const auto c = cumulative_simpson(y, dt);
  for (int i = 0; i <= 100; ++i) EXPECT_NEAR(c[i], std::pow(i * dt, 3) / 3.0, 1e-14);
}

TEST(Tabulated, OutOfRange) {
  const Tabulated tab{{0.0, 1.0}, {0.5, 0.5}};
  EXPECT_DOUBLE_EQ(gamma_eval(tab, 0.5), 0.5);
  try {
    gamma_eval(tab, 1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfRange);
  }
}

TEST(Tabulated, LoadCsvWithHeader) {
  const std::string path = testing::TempDir() + "rate.csv";
  {
    std::ofstream out(path);
    out << "# comment\ntime,gamma\n0,0.1\n0.5,0.2\n1.0,-0.3\n";
  }
  const auto tab = load_tabulated_csv(path);
  ASSERT_EQ(tab.times.size(), 3u);
  EXPECT_DOUBLE_EQ(tab.values[2], -0.3);
  EXPECT_NEAR(gamma_eval(tab, 0.75), -0.05, 1e-15);
}

TEST(Tabulated, RejectsUnsortedTimes) {
  try {
    validate(DecayProfile{Tabulated{{0.0, 0.5, 0.4}, {0.0, 0.0, 0.0}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidProfile);
  }
}

TEST(Lorentzian, AmplitudeStartsAtOneWithZeroSlope) {
  for (double W : {0.2, 0.5, 14.0}) {
    EXPECT_DOUBLE_EQ(lorentzian_amplitude(W, 1.0, 0.0), 1.0);
    const double h = 1e-6;
    EXPECT_NEAR((lorentzian_amplitude(W, 1.0, h) - 1.0) / h, 0.0, 1e-3);
  }
}
