#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "motionfeas/fixtures.h"
#include "motionfeas/reward.h"

using namespace motionfeas;

namespace {

ScoreReport random_terms(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScoreReport r;
  r.v_vel = u(rng);
  r.v_spen = u(rng);
  r.v_lim = u(rng);
  r.v_slip = u(rng);
  r.v_gpen = u(rng);
  r.v_float = u(rng);
  r.v_bal = u(rng);
  r.s_tau = u(rng);
  r.s_grf = u(rng);
  r.s_met = u(rng);
  return r;
}

ScoreReport score_doc(const MotionDocument& doc) {
  BodyModel body = body_for_document(doc);
  return score_trajectory(doc.trajectory, body, doc.mesh ? &*doc.mesh : nullptr);
}

}  // namespace

TEST(Aggregate, IdentitiesHoldOnRandomTerms) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 1000; ++i) {
    ScoreReport r = random_terms(rng);
    finalize_report(r);
    // The plain double formulas carry a few eps of absolute rounding error.
    constexpr double kTol = 4e-16;
    EXPECT_NEAR(r.f_kin, 1.0 - (r.v_vel + r.v_spen + r.v_lim) / 3.0, kTol);
    EXPECT_NEAR(r.f_con, 1.0 - (r.v_slip + r.v_gpen + r.v_float + r.v_bal) / 4.0, kTol);
    EXPECT_NEAR(r.f_dyn, (r.s_tau + r.s_grf + r.s_met) / 3.0, kTol);
    EXPECT_NEAR(r.r_motion, (r.f_kin + r.f_con + r.f_dyn) / 3.0, kTol);
    EXPECT_GE(r.r_motion, 0.0);
    EXPECT_LE(r.r_motion, 1.0);
  }
}

TEST(Aggregate, Examples) {
  EXPECT_NEAR(aggregate_reward(0.9, 0.6, 0.9), 0.8, 1e-15);
  ScoreReport worst;
  worst.v_vel = worst.v_spen = worst.v_lim = 1.0;
  worst.v_slip = worst.v_gpen = worst.v_float = worst.v_bal = 1.0;
  worst.s_tau = worst.s_grf = worst.s_met = 0.0;
  finalize_report(worst);
  EXPECT_EQ(worst.r_motion, 0.0);
  ScoreReport best;
  finalize_report(best);
  EXPECT_EQ(best.r_motion, 1.0);
}

TEST(Aggregate, CustomWeights) {
  RewardWeights w{2.0, 1.0, 1.0};
  EXPECT_NEAR(aggregate_reward(1.0, 0.0, 0.0, w), 0.5, 1e-15);
  EXPECT_THROW(aggregate_reward(1.0, 1.0, 1.0, RewardWeights{1.0, -1.0, 0.0}), std::invalid_argument);
}

TEST(Aggregate, MonotoneInEveryTerm) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 0.2);
  for (int i = 0; i < 500; ++i) {
    ScoreReport r = random_terms(rng);
    finalize_report(r);
    ScoreReport worse = r;
    const std::size_t k = static_cast<std::size_t>(i) % 10;
    double* terms[10] = {&worse.v_vel,   &worse.v_spen, &worse.v_lim, &worse.v_slip,
                         &worse.v_gpen,  &worse.v_float, &worse.v_bal, &worse.s_tau,
                         &worse.s_grf,   &worse.s_met};
    if (k < 7) {
      *terms[k] = std::min(1.0, *terms[k] + u(rng));
    } else {
      *terms[k] = std::max(0.0, *terms[k] - u(rng));
    }
    finalize_report(worse);
    EXPECT_LE(worse.r_motion, r.r_motion + 1e-15);
  }
}

TEST(ScoreTrajectory, StandingFixtureIsExactlyOne) {
  const auto r = score_doc(fixtures::standing(16, true));
  for (auto name : kTermNames) {
    const double expected = name.front() == 's' ? 1.0 : 0.0;
    EXPECT_EQ(score_field(r, name), expected) << name;
  }
  EXPECT_EQ(r.r_motion, 1.0);
  EXPECT_TRUE(r.flags.empty());
}

TEST(ScoreTrajectory, SkeletonOnlyInputIsFlagged) {
  const auto r = score_doc(fixtures::standing(8, false));
  EXPECT_NE(std::find(r.flags.begin(), r.flags.end(), "spen-skipped"), r.flags.end());
  EXPECT_NE(std::find(r.flags.begin(), r.flags.end(), "contact-from-skeleton"), r.flags.end());
  EXPECT_EQ(r.v_spen, 0.0);
}

TEST(ScoreTrajectory, InvalidInputThrowsValidationError) {
  auto doc = fixtures::standing(4, false);
  doc.trajectory.frames[2].positions[5].x() = std::nan("");
  EXPECT_THROW(score_doc(doc), ValidationError);
}

TEST(ScoreTrajectory, DiagnosticsOnRequest) {
  const auto doc = fixtures::swaying(1);
  const BodyModel body = body_for_document(doc);
  const auto plain = score_trajectory(doc.trajectory, body, nullptr);
  EXPECT_FALSE(plain.diagnostics);
  const auto traced = score_trajectory(doc.trajectory, body, nullptr, {}, {true});
  ASSERT_TRUE(traced.diagnostics);
  EXPECT_EQ(traced.diagnostics->balance_distance.size(), doc.trajectory.num_frames());
  EXPECT_EQ(traced.r_motion, plain.r_motion);
}

TEST(Normalize, Examples) {
  const std::vector<std::string> g2(2, "p");
  const std::vector<double> two = {0.0, 1.0};
  const auto a = normalize_rewards(two, g2);
  EXPECT_NEAR(a[0], 0.4, 1e-15);
  EXPECT_NEAR(a[1], 0.6, 1e-15);

  const std::vector<std::string> g3(3, "p");
  const std::vector<double> flat = {0.7, 0.7, 0.7};
  for (double v : normalize_rewards(flat, g3)) EXPECT_EQ(v, 0.5);

  // One outlier among many clips at +5.
  std::vector<double> many(101, 0.0);
  many[0] = 1.0;
  const std::vector<std::string> g101(101, "p");
  EXPECT_EQ(normalize_rewards(many, g101)[0], 1.0);

  const std::vector<std::string> single = {"alone"};
  const std::vector<double> one = {0.3};
  EXPECT_EQ(normalize_rewards(one, single)[0], 0.5);
}

TEST(Normalize, GroupsAreIndependent) {
  const std::vector<double> r = {0.0, 10.0, 1.0, 0.5};
  const std::vector<std::string> g = {"a", "b", "a", "c"};
  const auto n = normalize_rewards(r, g);
  EXPECT_NEAR(n[0], 0.4, 1e-15);
  EXPECT_NEAR(n[2], 0.6, 1e-15);
  EXPECT_EQ(n[1], 0.5);
  EXPECT_EQ(n[3], 0.5);
}

TEST(Normalize, AffineInvariantAndBounded) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0), scale(0.1, 10.0), shift(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 9);
    std::vector<double> r(n);
    for (auto& x : r) x = u(rng);
    const std::vector<std::string> g(n, "p");
    const double a = scale(rng), b = shift(rng);
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = a * r[i] + b;
    const auto nr = normalize_rewards(r, g);
    const auto nt = normalize_rewards(t, g);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(nr[i], nt[i], 1e-9);
      EXPECT_GE(nr[i], 0.0);
      EXPECT_LE(nr[i], 1.0);
      mean += nr[i];
    }
    // Unclipped z-scores average to zero.
    EXPECT_NEAR(mean / static_cast<double>(n), 0.5, 1e-12);
  }
}

TEST(Normalize, MismatchedLengthsThrow) {
  const std::vector<double> r = {1.0, 2.0};
  const std::vector<std::string> g = {"a"};
  EXPECT_THROW(normalize_rewards(r, g), std::invalid_argument);
}

TEST(ReportJson, HasEveryFieldAndFlags) {
  const auto r = score_doc(fixtures::standing(8, false));
  const auto j = nlohmann::json::parse(report_to_json(r));
  for (auto name : kScoreFieldNames) {
    ASSERT_TRUE(j.contains(std::string(name))) << name;
    EXPECT_EQ(j[std::string(name)].get<double>(), score_field(r, name));
  }
  EXPECT_EQ(j["flags"].size(), r.flags.size());
  EXPECT_FALSE(j.contains("diagnostics"));
}

TEST(ReportJson, RoundTripsDoublesExactly) {
  std::mt19937_64 rng(34);
  ScoreReport r = random_terms(rng);
  finalize_report(r);
  const auto j = nlohmann::json::parse(report_to_json(r, nullptr, -1));
  EXPECT_EQ(j["r_motion"].get<double>(), r.r_motion);
  EXPECT_EQ(j["v_bal"].get<double>(), r.v_bal);
}
