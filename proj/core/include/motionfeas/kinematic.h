#pragma once

#include <optional>
#include <vector>

#include "motionfeas/body_model.h"
#include "motionfeas/config.h"
#include "motionfeas/geometry.h"
#include "motionfeas/motion.h"

namespace motionfeas {

// Geodesic angle between two rotations, 2*acos(|<a, b>|), in [0, pi].
double rotation_distance(const Quat& a, const Quat& b);

// Intrinsic X-Y-Z Euler angles (R = Rx * Ry * Rz). y lies in [-pi/2, pi/2].
Vec3 intrinsic_xyz_angles(const Quat& q);

// (T-1) x J matrix of f * rotation_distance(q[t+1,j], q[t,j]), rad/s.
Eigen::MatrixXd angular_velocity(const MotionTrajectory& traj);

struct VelocityViolation {
  double v_vel = 0.0;
  FlagMatrix flags;  // (T-1) x J, omega > omega_max
};

VelocityViolation velocity_violation(const Eigen::MatrixXd& omega, const BodyModel& body);

struct LimitViolation {
  double v_lim = 0.0;
  FlagMatrix flags;  // T x 3J, column 3j+a is axis a of joint j
};

// Closed-interval test of every Euler angle against the body's limits.
LimitViolation joint_limit_violation(const MotionTrajectory& traj, const BodyModel& body);

// clip((spen - baseline) / (severe - baseline), 0, 1).
double spen_violation(double spen_percent, const SpenParams& params = {});

// 1 - (v_vel + v_spen + v_lim) / 3. Throws std::domain_error outside [0, 1].
double kinematic_score(double v_vel, double v_spen, double v_lim);

struct KinematicViolations {
  double v_vel = 0.0;
  double v_spen = 0.0;
  double v_lim = 0.0;
  double f_kin = 1.0;
  bool spen_skipped = false;
  std::optional<SelfPenetration> spen;
  FlagMatrix per_joint_velocity_flags;
  FlagMatrix per_joint_limit_flags;
};

// Without a mesh v_spen is 0 and spen_skipped is set.
KinematicViolations evaluate_kinematics(const MotionTrajectory& traj, const BodyModel& body,
                                        const MeshSequence* mesh,
                                        const SpenParams& params = {});

}  // namespace motionfeas
