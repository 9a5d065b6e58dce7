#include "motionfeas/dynamic.h"

#include <algorithm>
#include <stdexcept>

namespace motionfeas {

namespace {

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

Eigen::MatrixXd com_trajectory(const MotionTrajectory& traj, const BodyModel& body) {
  const std::size_t T = traj.num_frames();
  const std::size_t J = traj.num_joints();
  if (body.com_weights.size() != J) {
    throw std::invalid_argument("com_trajectory: com_weights size does not match joints");
  }
  double total = 0.0;
  for (double w : body.com_weights) total += w;
  Eigen::MatrixXd com(static_cast<Eigen::Index>(T), 3);
  for (std::size_t t = 0; t < T; ++t) {
    Vec3 sum = Vec3::Zero();
    for (std::size_t j = 0; j < J; ++j) sum += body.com_weights[j] * traj.frames[t].positions[j];
    com.row(static_cast<Eigen::Index>(t)) = (sum / total).transpose();
  }
  return com;
}

Eigen::MatrixXd grf_estimate(const Eigen::MatrixXd& com, double frame_rate_hz,
                             const BodyModel& body) {
  Eigen::MatrixXd acc = finite_difference(com, frame_rate_hz, 2);
  Eigen::MatrixXd grf = body.mass_kg * acc;
  grf.col(2) = body.mass_kg * (acc.col(2).array() + body.gravity);
  return grf;
}

GrfScore grf_score(const Eigen::MatrixXd& grf, const BodyModel& body,
                   const DynamicsParams& params) {
  const double weight = body.body_weight();
  const double vertical_limit = params.vertical_grf_factor * weight;
  const double horizontal_limit = params.horizontal_grf_factor * weight;
  const auto T = static_cast<double>(grf.rows());
  GrfScore out;
  out.v_vertical = static_cast<double>((grf.col(2).array() > vertical_limit).count()) / T;
  out.v_horizontal =
      static_cast<double>((grf.leftCols(2).rowwise().norm().array() > horizontal_limit).count()) /
      T;
  out.s_grf = 1.0 - (out.v_vertical + out.v_horizontal) / 2.0;
  return out;
}

TorqueScore torque_score(const MotionTrajectory& traj, const BodyModel& body) {
  const std::size_t T = traj.num_frames();
  if (T < 3) throw TooFewFramesError(T, 3);
  const std::size_t J = traj.num_joints();
  TorqueScore out;
  out.torque.resize(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(J));
  out.violation_fraction.resize(static_cast<Eigen::Index>(J));
  for (std::size_t j = 0; j < J; ++j) {
    const auto jc = static_cast<Eigen::Index>(j);
    const Eigen::MatrixXd acc = finite_difference(traj.joint_series(j), traj.frame_rate_hz, 2);
    out.torque.col(jc) = body.inertia[j] * row_norms(acc);
    out.violation_fraction(jc) =
        static_cast<double>((out.torque.col(jc).array() > body.torque_max[j]).count()) /
        static_cast<double>(T);
  }
  out.s_tau = 1.0 - out.violation_fraction.sum() / static_cast<double>(J);
  return out;
}

MetScore met_score(const MotionTrajectory& traj, const Eigen::MatrixXd& torque,
                   const DynamicsParams& params) {
  const std::size_t J = traj.num_joints();
  if (static_cast<std::size_t>(torque.cols()) != J ||
      static_cast<std::size_t>(torque.rows()) != traj.num_frames()) {
    throw std::invalid_argument("met_score: torque trace shape does not match trajectory");
  }
  MetScore out;
  for (std::size_t j = 0; j < J; ++j) {
    const Eigen::VectorXd speed =
        row_norms(frame_velocity(traj.joint_series(j), traj.frame_rate_hz));
    out.met += torque.col(static_cast<Eigen::Index>(j)).dot(speed) * traj.dt();
  }
  out.s_met = std::max(0.0, 1.0 - out.met / params.met_norm);
  return out;
}

double dynamic_score(double s_tau, double s_grf, double s_met) {
  require_unit_interval(s_tau, "s_tau");
  require_unit_interval(s_grf, "s_grf");
  require_unit_interval(s_met, "s_met");
  using L = long double;
  return static_cast<double>((L(s_tau) + L(s_grf) + L(s_met)) / 3.0L);
}

DynamicsTrace evaluate_dynamics(const MotionTrajectory& traj, const BodyModel& body,
                                const DynamicsParams& params) {
  DynamicsTrace out;
  out.com = com_trajectory(traj, body);
  out.com_acc = finite_difference(out.com, traj.frame_rate_hz, 2);
  out.grf = grf_estimate(out.com, traj.frame_rate_hz, body);
  out.grf_terms = grf_score(out.grf, body, params);
  auto tau = torque_score(traj, body);
  const auto met = met_score(traj, tau.torque, params);
  out.torque = std::move(tau.torque);
  out.torque_violation_fraction = std::move(tau.violation_fraction);
  out.met_total = met.met;
  out.s_tau = tau.s_tau;
  out.s_grf = out.grf_terms.s_grf;
  out.s_met = met.s_met;
  out.f_dyn = dynamic_score(out.s_tau, out.s_grf, out.s_met);
  return out;
}

}  // namespace motionfeas
