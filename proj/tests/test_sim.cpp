#include <cmath>
#include <functional>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "qe/sim.hpp"

namespace {

using qe::Basis;

constexpr double kDeg = std::numbers::pi / 180.0;

qe::PureState case_a() { return qe::prepare_after_polarizer(qe::PolarizerChannel(43 * kDeg, 0.200)).state; }
qe::PureState case_b() { return qe::prepare_after_polarizer(qe::PolarizerChannel(21 * kDeg, 0.324)).state; }

qe::ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const qe::Error& e) {
    return e.kind();
  }
  return qe::ErrorKind::InvalidState;
}

TEST(Dephasing, Limits) {
  const auto rho = qe::to_density(case_a());
  EXPECT_LT((qe::apply_overlap_dephasing(rho, 1.0).matrix() - rho.matrix()).norm(), 1e-15);
  EXPECT_NEAR(qe::visibility(qe::apply_overlap_dephasing(rho, 0.0)), 0.0, 1e-15);
  EXPECT_EQ(kind_of([&] { qe::apply_overlap_dephasing(rho, 1.2); }), qe::ErrorKind::DomainError);
  EXPECT_EQ(kind_of([&] { qe::apply_overlap_dephasing(rho, -0.1); }), qe::ErrorKind::DomainError);
}

TEST(Dephasing, ScalesCoherenceOnly) {
  qe::Rng rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const auto s = qe::random_pure_state(rng);
    const auto rho = qe::to_density(s);
    for (double eta : {0.0, 0.5, 0.94}) {
      const auto d = qe::apply_overlap_dephasing(rho, eta);
      const auto m = oracle::density(s);
      oracle::Mat4 expected = m;
      expected.block<2, 2>(0, 2) *= eta;
      expected.block<2, 2>(2, 0) *= eta;
      ASSERT_LT((d.matrix() - expected).norm(), 1e-15);
      ASSERT_NEAR(qe::distinguishability(d), qe::distinguishability(rho), 1e-12);
      ASSERT_NEAR(qe::visibility(d), eta * qe::visibility(rho), 1e-12);
      for (double theta : {-0.4, 0.3, 1.2}) {
        ASSERT_NEAR(qe::measured_distinguishability(d, theta), qe::measured_distinguishability(rho, theta), 1e-12);
        ASSERT_NEAR(qe::conditioned_visibility(d, theta), eta * qe::conditioned_visibility(rho, theta), 1e-12);
      }
    }
  }
}

TEST(Dephasing, SingletConditionedVisibilityPeak) {
  const auto d = qe::apply_overlap_dephasing(qe::to_density(qe::make_singlet()), 0.94);
  EXPECT_NEAR(qe::conditioned_visibility(d, std::numbers::pi / 4), 0.94, 1e-12);
}

TEST(Counts, ImpossibleOutcomesNeverOccur) {
  qe::Rng rng(42);
  const auto r = qe::simulate_counts(qe::make_singlet(), 0.0, Basis::Z, 1'000'000, rng);
  EXPECT_EQ(r.n_pm + r.n_mp, 0u);
  EXPECT_EQ(r.n_pp + r.n_mm, 1'000'000u);
  EXPECT_EQ(r.n_total, 1'000'000u);
}

TEST(Counts, WithinFourSigmaOfExpectation) {
  qe::Rng rng(43);
  const std::uint64_t n = 1'000'000;
  const auto r = qe::simulate_counts(qe::make_singlet(), std::numbers::pi / 4, Basis::Z, n, rng);
  const double sigma = std::sqrt(n * 0.25 * 0.75);
  for (auto k : {r.n_pp, r.n_pm, r.n_mp, r.n_mm}) EXPECT_LT(std::abs(static_cast<double>(k) - 250'000.0), 4 * sigma);
}

TEST(Counts, MarginalMeansMatchProbabilities) {
  // Each cell of the multinomial is Binomial(N, p); check the sample mean over
  // repeated draws against N p at five standard errors.
  const auto s = case_a();
  const double theta = 0.35;
  const auto p = qe::coincidence_probs(s, theta, Basis::X);
  const std::uint64_t n = 10'000;
  const int reps = 400;
  double sum[4] = {0, 0, 0, 0};
  qe::Rng rng(44);
  for (int i = 0; i < reps; ++i) {
    const auto r = qe::simulate_counts(s, theta, Basis::X, n, rng);
    ASSERT_EQ(r.n_pp + r.n_pm + r.n_mp + r.n_mm, n);
    sum[0] += r.n_pp;
    sum[1] += r.n_pm;
    sum[2] += r.n_mp;
    sum[3] += r.n_mm;
  }
  const double probs[4] = {p.p_pp, p.p_pm, p.p_mp, p.p_mm};
  for (int k = 0; k < 4; ++k) {
    const double se = std::sqrt(n * probs[k] * (1 - probs[k]) / reps);
    EXPECT_LT(std::abs(sum[k] / reps - n * probs[k]), 5 * se) << k;
  }
}

TEST(Counts, SeedDeterminism) {
  const auto s = case_b();
  qe::Rng a(7), b(7), c(8);
  const auto ra = qe::simulate_counts(s, 0.2, Basis::Z, 100'000, a);
  const auto rb = qe::simulate_counts(s, 0.2, Basis::Z, 100'000, b);
  const auto rc = qe::simulate_counts(s, 0.2, Basis::Z, 100'000, c);
  EXPECT_EQ(ra.n_pp, rb.n_pp);
  EXPECT_EQ(ra.n_pm, rb.n_pm);
  EXPECT_EQ(ra.n_mp, rb.n_mp);
  EXPECT_EQ(ra.n_mm, rb.n_mm);
  EXPECT_NE(ra.n_pp, rc.n_pp);
}

TEST(Counts, RejectsZeroShots) {
  qe::Rng rng(1);
  EXPECT_EQ(kind_of([&] { qe::simulate_counts(qe::make_singlet(), 0.0, Basis::Z, 0, rng); }),
            qe::ErrorKind::DomainError);
}

TEST(CountEstimates, SingletPathKnowledge) {
  qe::Rng rng(45);
  const auto s = qe::make_singlet();
  const double theta = std::numbers::pi / 3;
  const auto z = qe::simulate_counts(s, theta, Basis::Z, 100'000, rng);
  const auto x = qe::simulate_counts(s, theta, Basis::X, 100'000, rng);
  const auto e = qe::estimate_from_counts(z, x);
  ASSERT_TRUE(e.se_d_m.has_value());
  EXPECT_LT(std::abs(e.value.d_m - 0.5), 4 * *e.se_d_m);
}

TEST(CountEstimates, CaseAPredictabilityAtThetaZero) {
  qe::Rng rng(46);
  const auto s = case_a();
  const double theta0 = qe::theta_zero(s);
  const auto z = qe::simulate_counts(s, theta0, Basis::Z, 100'000, rng);
  const auto x = qe::simulate_counts(s, theta0, Basis::X, 100'000, rng);
  const auto e = qe::estimate_from_counts(z, x);
  ASSERT_TRUE(e.se_p_pred.has_value());
  EXPECT_LT(std::abs(e.value.p_pred - qe::predictability(s)), 4 * *e.se_p_pred);
  EXPECT_EQ(z.n_pm, 0u);
}

TEST(CountEstimates, StandardErrorsCoverTheTruth) {
  // Over many independent draws, |estimate - truth| < 2 se should hold about
  // 95% of the time for points away from the kinks.
  const auto s = case_b();
  const auto rho = qe::to_density(s);
  const double theta = 0.9;
  int covered = 0, counted = 0;
  qe::Rng rng(47);
  for (int i = 0; i < 400; ++i) {
    const auto z = qe::simulate_counts(rho, theta, Basis::Z, 20'000, rng);
    const auto x = qe::simulate_counts(rho, theta, Basis::X, 20'000, rng);
    const auto e = qe::estimate_from_counts(z, x);
    if (!e.se_v_c) continue;
    ++counted;
    if (std::abs(e.value.v_c - qe::conditioned_visibility(rho, theta)) < 2 * *e.se_v_c) ++covered;
  }
  ASSERT_GT(counted, 300);
  EXPECT_GT(static_cast<double>(covered) / counted, 0.9);
}

TEST(CountEstimates, NoStandardErrorAtAKink) {
  qe::Rng rng(48);
  const auto s = qe::make_singlet();
  const double theta = std::numbers::pi / 4;  // both path-knowledge arguments vanish
  const auto e = qe::estimate_from_counts(qe::simulate_counts(s, theta, Basis::Z, 100'000, rng),
                                          qe::simulate_counts(s, theta, Basis::X, 100'000, rng));
  EXPECT_FALSE(e.se_d_m.has_value());
  EXPECT_TRUE(e.se_v_c.has_value());
}

TEST(CountEstimates, Errors) {
  qe::CountRecord z{0.0, Basis::Z, 20, 20, 20, 20, 80};
  qe::CountRecord x{0.0, Basis::X, 20, 20, 20, 20, 80};
  EXPECT_EQ(kind_of([&] { qe::estimate_from_counts(z, x); }), qe::ErrorKind::InsufficientCounts);
  z = {0.0, Basis::Z, 50, 50, 50, 50, 200};
  x = {0.0, Basis::X, 50, 50, 50, 49, 200};
  EXPECT_EQ(kind_of([&] { qe::estimate_from_counts(z, x); }), qe::ErrorKind::DomainError);
}

TEST(Grid, UniformGrid) {
  EXPECT_EQ(qe::uniform_grid(0, 90, 1).size(), 91u);
  EXPECT_EQ(qe::uniform_grid(5, 5, 1).size(), 1u);
  EXPECT_EQ(qe::uniform_grid(0, 1, 0.1).size(), 11u);
  EXPECT_EQ(kind_of([] { qe::uniform_grid(0, 1, 0); }), qe::ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] { qe::uniform_grid(1, 0, 0.1); }), qe::ErrorKind::DomainError);
}

TEST(SimConfig, Validation) {
  qe::SimConfig c;
  c.theta_grid = {0.0, 0.1};
  EXPECT_NO_THROW(c.validate());
  c.theta_grid = {0.1, 0.1};
  EXPECT_THROW(c.validate(), qe::Error);
  c.theta_grid = {};
  EXPECT_THROW(c.validate(), qe::Error);
  c.theta_grid = {0.0};
  c.eta_overlap = 1.5;
  EXPECT_THROW(c.validate(), qe::Error);
  c.eta_overlap = 0.9;
  c.shots_per_point = 0;
  EXPECT_THROW(c.validate(), qe::Error);
}

TEST(PointSeed, DistinctStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t seed : {0ull, 1ull, 12345ull})
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(qe::point_seed(seed, i));
  EXPECT_EQ(seen.size(), 3000u);
}

qe::SimConfig degree_grid(double start, double stop, double step, std::uint64_t shots, double eta) {
  qe::SimConfig c;
  c.theta_grid = qe::uniform_grid(start * kDeg, stop * kDeg, step * kDeg);
  c.shots_per_point = shots;
  c.eta_overlap = eta;
  c.seed = 2024;
  return c;
}

void expect_identical(const qe::SweepSeries& a, const qe::SweepSeries& b) {
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const auto &p = a.points[i], &q = b.points[i];
    ASSERT_EQ(p.theta, q.theta);
    ASSERT_EQ(p.d_m, q.d_m);
    ASSERT_EQ(p.v_c, q.v_c);
    for (auto [u, v] : {std::pair{p.z, q.z}, std::pair{p.x, q.x}}) {
      ASSERT_EQ(u.p_pp, v.p_pp);
      ASSERT_EQ(u.p_pm, v.p_pm);
      ASSERT_EQ(u.p_mp, v.p_mp);
      ASSERT_EQ(u.p_mm, v.p_mm);
    }
  }
  EXPECT_EQ(a.header.dist, b.header.dist);
  EXPECT_EQ(a.header.vis, b.header.vis);
}

TEST(Sweep, ParallelMatchesSerialBitForBit) {
  const auto rho = qe::to_density(case_b());
  const auto mc = degree_grid(0, 90, 1, 50'000, 0.94);
  expect_identical(qe::sweep(rho, mc, qe::SweepMode::MonteCarlo), qe::sweep_serial(rho, mc, qe::SweepMode::MonteCarlo));
  expect_identical(qe::sweep(rho, mc, qe::SweepMode::Analytic), qe::sweep_serial(rho, mc, qe::SweepMode::Analytic));
  expect_identical(qe::sweep(rho, mc, qe::SweepMode::MonteCarlo), qe::sweep(rho, mc, qe::SweepMode::MonteCarlo));
}

TEST(Sweep, ParallelFailureIsRethrown) {
  const auto c = degree_grid(0, 10, 1, 50, 1.0);
  EXPECT_EQ(kind_of([&] { qe::sweep(qe::make_singlet(), c, qe::SweepMode::MonteCarlo); }),
            qe::ErrorKind::InsufficientCounts);
}

TEST(Sweep, SingletWithOverlapFactor) {
  const auto series = qe::sweep(qe::make_singlet(), degree_grid(0, 45, 1, 1, 0.94), qe::SweepMode::Analytic);
  ASSERT_EQ(series.points.size(), 46u);
  EXPECT_NEAR(series.points.front().d_m_sq(), 1.0, 1e-12);
  EXPECT_NEAR(series.points.front().v_c_sq(), 0.0, 1e-12);
  EXPECT_NEAR(series.points.back().d_m_sq(), 0.0, 1e-12);
  EXPECT_NEAR(series.points.back().v_c_sq(), 0.8836, 1e-12);
  EXPECT_EQ(series.header.eta, 0.94);
  EXPECT_NEAR(series.header.dist, 1.0, 1e-12);
  for (std::size_t i = 1; i < series.points.size(); ++i) {
    EXPECT_LT(series.points[i].d_m, series.points[i - 1].d_m);
    EXPECT_GT(series.points[i].v_c, series.points[i - 1].v_c);
  }
}

TEST(Sweep, CaseBFloorWindow) {
  const auto s = case_b();
  const double p = qe::predictability(s), v = qe::visibility(s);
  const auto series = qe::sweep(s, degree_grid(0, 90, 0.5, 1, 1.0), qe::SweepMode::Analytic);
  double first = -1, last = -1;
  for (const auto& pt : series.points) {
    if (std::abs(pt.d_m - p) < 1e-6 && std::abs(pt.v_c - v) < 1e-6) {
      if (first < 0) first = pt.theta / kDeg;
      last = pt.theta / kDeg;
    }
  }
  ASSERT_GE(first, 0.0);
  EXPECT_GT(first, 10.0);
  EXPECT_LT(last, 30.0);
  EXPECT_GT(last - first, 5.0);
}

TEST(Sweep, MonteCarloTracksAnalytic) {
  const auto rho = qe::to_density(case_a());
  const auto config = degree_grid(0, 90, 5, 1'000'000, 0.94);
  const auto mc = qe::sweep(rho, config, qe::SweepMode::MonteCarlo);
  const auto exact = qe::sweep(rho, config, qe::SweepMode::Analytic);
  for (std::size_t i = 0; i < mc.points.size(); ++i) {
    EXPECT_LT(std::abs(mc.points[i].d_m - exact.points[i].d_m), 5e-3);
    EXPECT_LT(std::abs(mc.points[i].v_c - exact.points[i].v_c), 5e-3);
    EXPECT_NEAR(mc.points[i].z.sum(), 1.0, 1e-12);
  }
}

}  // namespace
