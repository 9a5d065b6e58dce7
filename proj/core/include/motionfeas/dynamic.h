#pragma once

#include "motionfeas/body_model.h"
#include "motionfeas/config.h"
#include "motionfeas/motion.h"

namespace motionfeas {

// Weighted mean of joint positions, T x 3.
Eigen::MatrixXd com_trajectory(const MotionTrajectory& traj, const BodyModel& body);

// Newtonian ground reaction force from the COM's second difference:
// [m*ax, m*ay, m*(g + az)], T x 3 newtons.
Eigen::MatrixXd grf_estimate(const Eigen::MatrixXd& com, double frame_rate_hz,
                             const BodyModel& body);

struct GrfScore {
  double v_vertical = 0.0;
  double v_horizontal = 0.0;
  double s_grf = 1.0;
};

GrfScore grf_score(const Eigen::MatrixXd& grf, const BodyModel& body,
                   const DynamicsParams& params = {});

struct TorqueScore {
  Eigen::MatrixXd torque;             // T x J, I_j * |x_ddot|
  Eigen::VectorXd violation_fraction;  // per joint
  double s_tau = 1.0;
};

TorqueScore torque_score(const MotionTrajectory& traj, const BodyModel& body);

struct MetScore {
  double met = 0.0;
  double s_met = 1.0;
};

// MET = sum_t sum_j tau * |x_dot| * dt with per-frame forward-difference
// joint speeds; s_met = max(0, 1 - MET / met_norm).
MetScore met_score(const MotionTrajectory& traj, const Eigen::MatrixXd& torque,
                   const DynamicsParams& params = {});

// (s_tau + s_grf + s_met) / 3. Throws std::domain_error outside [0, 1].
double dynamic_score(double s_tau, double s_grf, double s_met);

struct DynamicsTrace {
  Eigen::MatrixXd com;
  Eigen::MatrixXd com_acc;
  Eigen::MatrixXd grf;
  Eigen::MatrixXd torque;
  double met_total = 0.0;
  GrfScore grf_terms;
  Eigen::VectorXd torque_violation_fraction;
  double s_tau = 1.0;
  double s_grf = 1.0;
  double s_met = 1.0;
  double f_dyn = 1.0;
};

DynamicsTrace evaluate_dynamics(const MotionTrajectory& traj, const BodyModel& body,
                                const DynamicsParams& params = {});

}  // namespace motionfeas
