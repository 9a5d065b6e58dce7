#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "motionfeas/body_model.h"
#include "motionfeas/contact.h"
#include "motionfeas/fixtures.h"

using namespace motionfeas;

namespace {

// pelvis, left ankle/toe, right ankle/toe.
BodyModel feet_body() {
  return make_body_model({"pelvis", "left_ankle", "left_foot", "right_ankle", "right_foot"},
                         {-1, 0, 1, 0, 3});
}

struct FootPath {
  Vec3 start;
  Vec3 velocity = Vec3::Zero();  // m/s
};

// Ankle sits 5 cm above the toe; `start` is the toe.
MotionTrajectory feet_traj(std::size_t T, FootPath left, FootPath right, FootPath root,
                           double f = 16.0) {
  MotionTrajectory traj;
  traj.frame_rate_hz = f;
  for (std::size_t i = 0; i < T; ++i) {
    const double t = static_cast<double>(i) / f;
    Frame fr;
    const Vec3 r = root.start + root.velocity * t;
    const Vec3 l = left.start + left.velocity * t;
    const Vec3 rt = right.start + right.velocity * t;
    fr.positions = {r, l + Vec3(0, 0, 0.05), l, rt + Vec3(0, 0, 0.05), rt};
    fr.rotations.assign(5, Quat::Identity());
    traj.frames.push_back(std::move(fr));
  }
  return traj;
}

const FootPath kRoot{{0, 0, 1}};

}  // namespace

TEST(Contacts, RestingFootIsInContactEveryFrame) {
  const auto traj = feet_traj(10, {{0.1, 0, 0}}, {{-0.1, 0, 0}}, kRoot);
  const auto c = detect_contacts(traj, feet_body(), nullptr);
  EXPECT_FALSE(c.from_mesh);
  EXPECT_EQ(c.contact.count(), 20);
}

TEST(Contacts, HeightGate) {
  const auto traj = feet_traj(10, {{0.1, 0, 0.5}}, {{-0.1, 0, 0}}, kRoot);
  const auto c = detect_contacts(traj, feet_body(), nullptr);
  EXPECT_EQ(c.contact.col(0).count(), 0);
  EXPECT_EQ(c.contact.col(1).count(), 10);
}

TEST(Contacts, VelocityGate) {
  const auto traj = feet_traj(10, {{0.1, 0, 0.01}, {0.2, 0, 0}}, {{-0.1, 0, 0}}, kRoot);
  const auto c = detect_contacts(traj, feet_body(), nullptr);
  EXPECT_EQ(c.contact.col(0).count(), 0);
  EXPECT_NEAR(c.foot_speed(3, 0), 0.2, 1e-12);
}

TEST(Contacts, ContactImpliesBothGates) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> h(-0.01, 0.05), v(-0.1, 0.1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto traj = feet_traj(12, {{0, 0, h(rng)}, {v(rng), v(rng), 0}},
                                {{0.3, 0, h(rng)}, {v(rng), 0, 0}}, kRoot);
    const auto c = detect_contacts(traj, feet_body(), nullptr);
    for (Eigen::Index t = 0; t < 12; ++t) {
      for (int k = 0; k < 2; ++k) {
        if (c.contact(t, k)) {
          EXPECT_LT(c.foot_height(t, k), 0.02);
          EXPECT_LT(c.foot_speed(t, k), 0.05);
        }
      }
    }
  }
}

TEST(Contacts, MeshSoleVerticesTakePrecedence) {
  const auto doc = fixtures::standing(4, true);
  BodyModel body = smplx_body();
  body.foot_vertices = *doc.foot_vertex_sets;
  const auto c = detect_contacts(doc.trajectory, body, &*doc.mesh);
  EXPECT_TRUE(c.from_mesh);
  EXPECT_EQ(c.contact.count(), 8);
  EXPECT_EQ(c.foot_height.maxCoeff(), 0.0);
}

TEST(Contacts, NoFootGeometryIsAnError) {
  BodyModel body = make_body_model({"root", "a"}, {-1, 0});
  MotionTrajectory traj;
  traj.frames.assign(3, Frame{{Vec3::Zero(), Vec3::Zero()}, {Quat::Identity(), Quat::Identity()}});
  EXPECT_THROW(detect_contacts(traj, body, nullptr), MissingFootGeometryError);
}

TEST(Slip, NoContactsOrStillFeetGiveZero) {
  const auto air = feet_traj(8, {{0, 0, 0.5}}, {{0.2, 0, 0.5}}, kRoot);
  EXPECT_EQ(slip_violation(detect_contacts(air, feet_body(), nullptr), 16.0).value, 0.0);
  const auto still = feet_traj(8, {{0, 0, 0}}, {{0.2, 0, 0}}, kRoot);
  EXPECT_EQ(slip_violation(detect_contacts(still, feet_body(), nullptr), 16.0).value, 0.0);
}

TEST(Slip, SlidingAtFourCentimetersPerSecondIsHalf) {
  const auto traj = feet_traj(16, {{0, 0, 0}, {0.04, 0, 0}}, {{0.2, 0, 0.5}}, kRoot);
  const auto c = detect_contacts(traj, feet_body(), nullptr);
  ASSERT_EQ(c.contact.col(0).count(), 16);
  const auto s = slip_violation(c, 16.0);
  EXPECT_NEAR(s.raw, 0.04 / 16.0 / 2.0, 1e-15);
  EXPECT_NEAR(s.value, 0.5, 1e-12);
}

TEST(Penetration, Examples) {
  const auto above = feet_traj(10, {{0, 0, 0}}, {{0.2, 0, 0.3}}, kRoot);
  EXPECT_EQ(penetration_violation(detect_contacts(above, feet_body(), nullptr)).value, 0.0);

  const auto sunk = feet_traj(10, {{0, 0, -0.05}}, {{0.2, 0, 0}}, kRoot);
  const auto p = penetration_violation(detect_contacts(sunk, feet_body(), nullptr));
  EXPECT_NEAR(p.raw, 0.025, 1e-15);
  EXPECT_NEAR(p.value, 0.5, 1e-12);

  auto dip = feet_traj(20, {{0, 0, 0}}, {{0.2, 0, 0}}, kRoot);
  for (std::size_t t : {4u, 5u}) dip.frames[t].positions[2].z() = -0.01;
  EXPECT_NEAR(penetration_violation(detect_contacts(dip, feet_body(), nullptr)).raw, 0.0005,
              1e-15);
}

TEST(Float, PlantedFootUnderMovingRootIsNotFlagged) {
  const auto traj = feet_traj(16, {{0, 0, 0}}, {{0.2, 0, 0}}, {{0, 0, 1}, {1.0, 0, 0}});
  const auto c = detect_contacts(traj, feet_body(), nullptr);
  const auto fl = float_violation(traj, c, feet_body());
  EXPECT_NEAR(fl.ratio(3, 0), 1.0 / 1.001, 1e-9);
  EXPECT_EQ(fl.flags.count(), 0);
  EXPECT_EQ(fl.v_float, 0.0);
}

TEST(Float, FeetCarriedRigidlyByAFastRootAreFlagged) {
  const Vec3 v(2.0, 0, 0);
  const auto traj = feet_traj(16, {{0, 0, 0.3}, v}, {{0.2, 0, 0.3}, v}, {{0, 0, 1}, v});
  const auto c = detect_contacts(traj, feet_body(), nullptr);
  const auto fl = float_violation(traj, c, feet_body());
  EXPECT_LT(fl.ratio.maxCoeff(), 0.6);
  EXPECT_EQ(fl.ratio_flags.count(), 32);
  EXPECT_EQ(fl.v_float, 1.0);
}

TEST(Float, StationaryRootIsExemptFromTheRatio) {
  const auto traj = feet_traj(8, {{0, 0, 0}}, {{0.2, 0, 0}}, kRoot);
  const auto fl = float_violation(traj, detect_contacts(traj, feet_body(), nullptr), feet_body());
  EXPECT_EQ(fl.ratio_flags.count(), 0);
}

TEST(Float, ProjectileRootPassesTheBallisticCheck) {
  const auto doc = fixtures::ballistic(10);
  const BodyModel body = smplx_body();
  const auto c = detect_contacts(doc.trajectory, body, nullptr);
  EXPECT_EQ(c.contact.count(), 0);
  const auto fl = float_violation(doc.trajectory, c, body);
  ASSERT_EQ(fl.runs.size(), 1u);
  EXPECT_TRUE(fl.runs[0].ballistic);
  EXPECT_LT(fl.runs[0].rms, 1e-9);
  EXPECT_EQ(fl.forced.count(), 0);
}

TEST(Float, HoveringRunIsForced) {
  // Root drifts upward linearly with the feet in the air: not a parabola
  // with curvature -g/2.
  const auto traj = feet_traj(12, {{0, 0, 0.4}, {0, 0, 1.5}}, {{0.2, 0, 0.4}, {0, 0, 1.5}},
                              {{0, 0, 1.4}, {0, 0, 1.5}});
  const auto c = detect_contacts(traj, feet_body(), nullptr);
  const auto fl = float_violation(traj, c, feet_body());
  ASSERT_EQ(fl.runs.size(), 1u);
  EXPECT_FALSE(fl.runs[0].ballistic);
  EXPECT_EQ(fl.forced.count(), 24);
  EXPECT_EQ(fl.v_float, 1.0);
}

TEST(Float, ShortAirborneRunsAreNotFitted) {
  auto traj = feet_traj(10, {{0, 0, 0}}, {{0.2, 0, 0}}, kRoot);
  // Lifting both feet at frames 4 and 5 also breaks contact at frame 3
  // through the forward velocity: three airborne frames.
  for (std::size_t t = 4; t < 6; ++t) {
    for (std::size_t j = 1; j < 5; ++j) traj.frames[t].positions[j].z() += 0.3;
  }
  const auto c = detect_contacts(traj, feet_body(), nullptr);
  EXPECT_EQ((c.contact.col(0) || c.contact.col(1)).count(), 7);
  EXPECT_TRUE(float_violation(traj, c, feet_body()).runs.empty());
}

TEST(BallisticFit, ExactParabolaHasZeroResidual) {
  std::vector<double> z;
  for (int i = 0; i < 8; ++i) {
    const double t = i / 16.0;
    z.push_back(1.0 + 2.0 * t - 0.5 * 9.81 * t * t);
  }
  EXPECT_LT(ballistic_fit_rms(z, 16.0, 9.81), 1e-12);
}

TEST(Balance, ComBetweenPlantedFeetIsZero) {
  const auto traj = feet_traj(6, {{0.1, 0, 0}}, {{-0.1, 0, 0}}, kRoot);
  const auto c = detect_contacts(traj, feet_body(), nullptr);
  const auto b = balance_violation(traj, c, feet_body());
  EXPECT_EQ(b.v_bal, 0.0);
}

TEST(Balance, NoContactIsOne) {
  const auto traj = feet_traj(6, {{0.1, 0, 0.4}}, {{-0.1, 0, 0.4}}, kRoot);
  const auto b = balance_violation(traj, detect_contacts(traj, feet_body(), nullptr), feet_body());
  EXPECT_EQ(b.v_bal, 1.0);
  for (double d : b.distance) EXPECT_EQ(d, 1.0);
}

TEST(Balance, QuarterMeterFromTheSingleSupportIsHalf) {
  // COM x = (3 * 0.35 + 0 + 0 + 0.35 + 0.35) / 7 = 0.25 from the left ankle.
  auto traj = feet_traj(6, {{0, 0, 0}}, {{0.35, 0, 0.5}}, {{0.35, 0, 1}});
  const auto c = detect_contacts(traj, feet_body(), nullptr);
  ASSERT_EQ(c.contact.col(0).count(), 6);
  ASSERT_EQ(c.contact.col(1).count(), 0);
  const auto b = balance_violation(traj, c, feet_body());
  for (double d : b.distance) EXPECT_NEAR(d, 0.25, 1e-12);
  EXPECT_NEAR(b.v_bal, 0.5, 1e-12);
}

TEST(ContactScore, Examples) {
  EXPECT_EQ(contact_score(0, 0, 0, 0), 1.0);
  EXPECT_EQ(contact_score(1, 1, 1, 1), 0.0);
  EXPECT_NEAR(contact_score(0.2, 0, 0.4, 0.2), 0.8, 1e-15);
  EXPECT_THROW(contact_score(0, 0, 1.01, 0), std::domain_error);
}

TEST(EvaluateContact, StaticStandingFixtureIsPerfect) {
  const auto doc = fixtures::standing(16, true);
  BodyModel body = smplx_body();
  body.foot_vertices = *doc.foot_vertex_sets;
  const auto c = evaluate_contact(doc.trajectory, body, &*doc.mesh);
  EXPECT_EQ(c.v_slip, 0.0);
  EXPECT_EQ(c.v_gpen, 0.0);
  EXPECT_EQ(c.v_float, 0.0);
  EXPECT_EQ(c.v_bal, 0.0);
  EXPECT_EQ(c.f_con, 1.0);
}

TEST(EvaluateContact, HorizontalTranslationChangesNothing) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (std::size_t i = 0; i < 6; ++i) {
    const auto doc = fixtures::swaying(i);
    auto moved = doc;
    const Vec3 shift(u(rng), u(rng), 0.0);
    for (auto& f : moved.trajectory.frames) {
      for (auto& p : f.positions) p += shift;
    }
    const BodyModel body = smplx_body();
    const auto a = evaluate_contact(doc.trajectory, body, nullptr);
    const auto b = evaluate_contact(moved.trajectory, body, nullptr);
    EXPECT_NEAR(a.v_slip, b.v_slip, 1e-9);
    EXPECT_NEAR(a.v_gpen, b.v_gpen, 1e-12);
    EXPECT_NEAR(a.v_float, b.v_float, 1e-12);
    EXPECT_NEAR(a.v_bal, b.v_bal, 1e-9);
  }
}

TEST(ContactScore, MonotoneInEachViolation) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    double v[4] = {u(rng), u(rng), u(rng), u(rng)};
    const double base = contact_score(v[0], v[1], v[2], v[3]);
    v[i % 4] = std::min(1.0, v[i % 4] + 0.1 * u(rng));
    EXPECT_LE(contact_score(v[0], v[1], v[2], v[3]), base);
  }
}
