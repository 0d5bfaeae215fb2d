#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "phasebell/nelder_mead.hpp"
#include "phasebell/optimize.hpp"

using namespace phasebell;
using optimize::OptimizerConfig;

namespace {

OptimizerConfig quick(int restarts = 8) {
  OptimizerConfig cfg;
  cfg.multistart_count = restarts;
  return cfg;
}

}  // namespace

TEST(NelderMead, Rosenbrock) {
  auto f = [](const std::vector<double>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  opt::SimplexOptions opts;
  opts.max_evaluations = 5000;
  opts.f_tolerance = 1e-14;
  const auto r = opt::nelder_mead(f, {-1.2, 1.0}, opts);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
}

TEST(NelderMead, QuadraticInTwelveDimensions) {
  auto f = [](const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * std::pow(x[i] - 0.1 * i, 2);
    return s;
  };
  opt::SimplexOptions opts;
  opts.max_evaluations = 40000;
  opts.f_tolerance = 1e-16;
  opts.x_tolerance = 1e-10;
  auto r = opt::nelder_mead(f, std::vector<double>(12, 0.0), opts);
  r = opt::nelder_mead(f, r.x, opts);
  EXPECT_LT(r.value, 1e-8);
}

TEST(NelderMead, NonFiniteTreatedAsWorst) {
  auto f = [](const std::vector<double>& x) { return x[0] < -0.5 ? std::nan("") : (x[0] - 1.0) * (x[0] - 1.0); };
  const auto r = opt::nelder_mead(f, {0.0}, {});
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
}

TEST(Config, Validation) {
  OptimizerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.multistart_count = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.tolerance = 0.0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.threads = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
  EXPECT_THROW(optimize::threshold_efficiency(StateSpec::ghz_ecs(1.0), SParameter(0.0), 3.0, quick()), DomainError);
}

TEST(Config, DefaultSearchScale) {
  EXPECT_DOUBLE_EQ(optimize::default_search_scale(StateSpec::single_photon_w(1.0)), 1.0);
  EXPECT_DOUBLE_EQ(optimize::default_search_scale(StateSpec::ghz_ecs(0.4)), 1.0);
  EXPECT_DOUBLE_EQ(optimize::default_search_scale(StateSpec::ghz_ecs(2.0)), 2.0);
  EXPECT_DOUBLE_EQ(optimize::default_search_scale(StateSpec::squeezed_vacuum3(0.5)), std::exp(0.5));
}

TEST(Maximize, Deterministic) {
  const auto st = StateSpec::single_photon_w(1.0);
  const auto a = optimize::maximize_svetlichny(st, SParameter(-1.0), quick());
  const auto b = optimize::maximize_svetlichny(st, SParameter(-1.0), quick());
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.settings, b.settings);
  EXPECT_EQ(a.sign, b.sign);
}

TEST(Maximize, ThreadCountInvariant) {
  const auto st = StateSpec::ghz_ecs(0.5);
  auto cfg = quick();
  const auto serial = optimize::maximize_mk(st, SParameter(0.0), cfg);
  cfg.threads = 4;
  const auto parallel = optimize::maximize_mk(st, SParameter(0.0), cfg);
  EXPECT_EQ(serial.value, parallel.value);
  EXPECT_EQ(serial.settings, parallel.settings);
}

TEST(Maximize, ValueReproducesFromSettings) {
  const auto st = StateSpec::ghz_ecs(1.0);
  const auto o = optimize::maximize_svetlichny(st, SParameter(0.0), quick());
  const auto r = bell::evaluate(st, o.settings, SParameter(0.0));
  EXPECT_NEAR(o.value, r.svetlichny, 1e-9);
  EXPECT_NEAR(o.value, bell::svetlichny(st, o.settings, SParameter(0.0), o.sign), 1e-9);
  EXPECT_GT(o.value, 4.0);
  EXPECT_LE(o.value, 4.0 * std::sqrt(2.0) + 1e-6);
}

TEST(Maximize, VacuumRespectsClassicalBounds) {
  const auto vac = StateSpec::squeezed_vacuum3(0.0);
  for (double s : {0.0, -1.0}) {
    EXPECT_LE(optimize::maximize_mk(vac, SParameter(s), quick()).value, 2.0 + 1e-6);
    EXPECT_LE(optimize::maximize_svetlichny(vac, SParameter(s), quick()).value, 4.0 + 1e-6);
  }
}

TEST(Maximize, WStateViolatesAtHusimiOrdering) {
  const auto st = StateSpec::single_photon_w(1.0);
  const double husimi = optimize::maximize_svetlichny(st, SParameter(-1.0), quick()).value;
  EXPECT_GT(husimi, 4.0 + 1e-3);
  EXPECT_GT(husimi, optimize::maximize_svetlichny(st, SParameter(-0.5), quick()).value);
}

TEST(Maximize, TwoModeEntanglementOnlyViolatesMk) {
  const auto st = StateSpec::single_photon_w(0.0);
  EXPECT_LE(optimize::maximize_svetlichny(st, SParameter(-1.0), quick()).value, 4.0 + 1e-6);
  EXPECT_GT(optimize::maximize_mk(st, SParameter(-1.0), quick()).value, 2.0 + 1e-3);
}

TEST(Maximize, SqueezedMkPrefersHusimi) {
  const auto st = StateSpec::squeezed_vacuum3(0.5);
  const double q = optimize::maximize_mk(st, SParameter(-1.0), quick()).value;
  EXPECT_GT(q, 2.0);
  EXPECT_GT(q, optimize::maximize_mk(st, SParameter(0.0), quick()).value);
}

TEST(Maximize, WarmStartNeverWorse) {
  const auto st = StateSpec::ghz_ecs(0.8);
  const auto first = optimize::maximize_svetlichny(st, SParameter(0.0), quick(4));
  const bell::MeasurementSettings warm[1] = {first.settings};
  const auto again = optimize::maximize(st, SParameter(0.0), optimize::Objective::Svetlichny, quick(1), {}, warm);
  EXPECT_GE(again.value, first.value - 1e-12);
}

TEST(ScanS, OnePointPerGridValue) {
  const double grid[3] = {-1.0, -0.5, 0.0};
  const auto pts = optimize::scan_s(StateSpec::single_photon_w(1.0), grid, quick(4));
  ASSERT_EQ(pts.size(), 3U);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(pts[i].s, grid[i]);
    EXPECT_LE(pts[i].mk.value, 4.0 + 1e-9);
  }
  EXPECT_GT(pts[0].svetlichny.value, 4.0);
}

TEST(Damping, ZeroEndpointIsNoiseless) {
  const auto st = StateSpec::ghz_ecs(1.0);
  const noise::ThermalChannel chans[2] = {{0.0, 0.0}, {0.2, 0.0}};
  const auto curve = optimize::damping_curve(st, SParameter(0.0), chans, quick());
  const auto ideal = optimize::maximize_svetlichny(st, SParameter(0.0), quick());
  EXPECT_NEAR(curve[0].svetlichny.value, ideal.value, 1e-9);
  EXPECT_LT(curve[1].svetlichny.value, curve[0].svetlichny.value);
}

TEST(Threshold, NoViolationSentinel) {
  EXPECT_FALSE(optimize::threshold_efficiency(StateSpec::squeezed_vacuum3(0.0), SParameter(0.0), 4.0, quick(4)));
}
