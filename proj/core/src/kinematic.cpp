#include "motionfeas/kinematic.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace motionfeas {

namespace {

double mean_of(const FlagMatrix& flags) {
  if (flags.size() == 0) return 0.0;
  return static_cast<double>(flags.count()) / static_cast<double>(flags.size());
}

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

double rotation_distance(const Quat& a, const Quat& b) {
  const double dot = std::abs(a.coeffs().dot(b.coeffs()));
  return 2.0 * std::acos(std::min(1.0, dot));
}

Vec3 intrinsic_xyz_angles(const Quat& q) {
  const Eigen::Matrix3d r = q.normalized().toRotationMatrix();
  const double y = std::asin(std::clamp(r(0, 2), -1.0, 1.0));
  const double x = std::atan2(-r(1, 2), r(2, 2));
  const double z = std::atan2(-r(0, 1), r(0, 0));
  return Vec3(x, y, z);
}

Eigen::MatrixXd angular_velocity(const MotionTrajectory& traj) {
  const std::size_t T = traj.num_frames();
  if (T < 2) throw TooFewFramesError(T, 2);
  const std::size_t J = traj.num_joints();
  Eigen::MatrixXd omega(static_cast<Eigen::Index>(T - 1), static_cast<Eigen::Index>(J));
  for (std::size_t t = 0; t + 1 < T; ++t) {
    const auto& now = traj.frames[t].rotations;
    const auto& next = traj.frames[t + 1].rotations;
    for (std::size_t j = 0; j < J; ++j) {
      omega(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
          traj.frame_rate_hz * rotation_distance(next[j], now[j]);
    }
  }
  return omega;
}

VelocityViolation velocity_violation(const Eigen::MatrixXd& omega, const BodyModel& body) {
  if (static_cast<std::size_t>(omega.cols()) != body.omega_max.size()) {
    throw std::invalid_argument("velocity_violation: joint count mismatch");
  }
  VelocityViolation out;
  out.flags.resize(omega.rows(), omega.cols());
  for (Eigen::Index j = 0; j < omega.cols(); ++j) {
    out.flags.col(j) = omega.col(j).array() > body.omega_max[static_cast<std::size_t>(j)];
  }
  out.v_vel = mean_of(out.flags);
  return out;
}

LimitViolation joint_limit_violation(const MotionTrajectory& traj, const BodyModel& body) {
  if (body.joint_limits.empty()) {
    throw MissingLimitsError("body model has no joint limits configured");
  }
  const std::size_t T = traj.num_frames();
  const std::size_t J = traj.num_joints();
  if (body.joint_limits.size() != J) {
    throw MissingLimitsError("joint limits cover " + std::to_string(body.joint_limits.size()) +
                             " joints, trajectory has " + std::to_string(J));
  }
  LimitViolation out;
  out.flags.resize(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(3 * J));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t j = 0; j < J; ++j) {
      const Vec3 angles = intrinsic_xyz_angles(traj.frames[t].rotations[j]);
      for (int a = 0; a < 3; ++a) {
        out.flags(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(3 * j + a)) =
            !body.joint_limits[j][a].contains(angles[a]);
      }
    }
  }
  out.v_lim = mean_of(out.flags);
  return out;
}

double spen_violation(double spen_percent, const SpenParams& params) {
  const double span = params.severe - params.baseline;
  return std::clamp((spen_percent - params.baseline) / span, 0.0, 1.0);
}

double kinematic_score(double v_vel, double v_spen, double v_lim) {
  require_unit_interval(v_vel, "v_vel");
  require_unit_interval(v_spen, "v_spen");
  require_unit_interval(v_lim, "v_lim");
  using L = long double;
  return static_cast<double>(1.0L - (L(v_vel) + L(v_spen) + L(v_lim)) / 3.0L);
}

KinematicViolations evaluate_kinematics(const MotionTrajectory& traj, const BodyModel& body,
                                        const MeshSequence* mesh, const SpenParams& params) {
  KinematicViolations out;
  auto vel = velocity_violation(angular_velocity(traj), body);
  out.v_vel = vel.v_vel;
  out.per_joint_velocity_flags = std::move(vel.flags);

  auto lim = joint_limit_violation(traj, body);
  out.v_lim = lim.v_lim;
  out.per_joint_limit_flags = std::move(lim.flags);

  if (mesh != nullptr) {
    out.spen = self_penetration_rate(*mesh);
    out.v_spen = spen_violation(out.spen->mean, params);
  } else {
    out.spen_skipped = true;
  }
  out.f_kin = kinematic_score(out.v_vel, out.v_spen, out.v_lim);
  return out;
}

}  // namespace motionfeas
