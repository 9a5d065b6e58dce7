#include "motionfeas/contact.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "motionfeas/dynamic.h"

namespace motionfeas {

namespace {

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0, 1]");
  }
}

// Lowest point and centroid of a point set, per frame.
template <typename PointsOfFrame>
void sole_track(std::size_t T, PointsOfFrame&& points, Eigen::MatrixXd& position,
                Eigen::Ref<Eigen::VectorXd> height) {
  position.resize(static_cast<Eigen::Index>(T), 3);
  for (std::size_t t = 0; t < T; ++t) {
    Vec3 sum = Vec3::Zero();
    double lowest = std::numeric_limits<double>::infinity();
    std::size_t n = 0;
    points(t, [&](const Vec3& p) {
      sum += p;
      lowest = std::min(lowest, p.z());
      ++n;
    });
    position.row(static_cast<Eigen::Index>(t)) = (sum / static_cast<double>(n)).transpose();
    height(static_cast<Eigen::Index>(t)) = lowest;
  }
}

}  // namespace

ContactTimeline detect_contacts(const MotionTrajectory& traj, const BodyModel& body,
                                const MeshSequence* mesh, const ContactParams& params) {
  const std::size_t T = traj.num_frames();
  if (T < 2) throw TooFewFramesError(T, 2);

  ContactTimeline out;
  out.foot_height.resize(static_cast<Eigen::Index>(T), 2);
  out.foot_speed.resize(static_cast<Eigen::Index>(T), 2);
  out.contact.resize(static_cast<Eigen::Index>(T), 2);

  const bool use_mesh = mesh != nullptr && !body.foot_vertices[0].empty() &&
                        !body.foot_vertices[1].empty();
  out.from_mesh = use_mesh;
  for (int k = 0; k < 2; ++k) {
    if (use_mesh) {
      const auto& ids = body.foot_vertices[k];
      sole_track(T, [&](std::size_t t, auto&& visit) {
        for (auto v : ids) visit(mesh->vertex_frames[t][v]);
      }, out.foot_position[k], out.foot_height.col(k));
    } else {
      const auto& joints = body.foot_joints[k];
      if (joints.empty()) {
        throw MissingFootGeometryError(
            "no foot geometry: provide a mesh with sole vertex sets or ankle/foot joints");
      }
      sole_track(T, [&](std::size_t t, auto&& visit) {
        for (int j : joints) visit(traj.frames[t].positions[static_cast<std::size_t>(j)]);
      }, out.foot_position[k], out.foot_height.col(k));
    }
    out.foot_speed.col(k) = row_norms(frame_velocity(out.foot_position[k], traj.frame_rate_hz));
  }
  out.contact = (out.foot_height.array() < params.height_max) &&
                (out.foot_speed.array() < params.vel_max);
  return out;
}

NormalizedTerm slip_violation(const ContactTimeline& timeline, double frame_rate_hz,
                              const ContactParams& params) {
  const double dt = 1.0 / frame_rate_hz;
  double total = 0.0;
  for (Eigen::Index t = 0; t < timeline.contact.rows(); ++t) {
    for (int k = 0; k < 2; ++k) {
      if (timeline.contact(t, k)) total += timeline.foot_speed(t, k) * dt;
    }
  }
  NormalizedTerm out;
  out.raw = total / (2.0 * static_cast<double>(timeline.num_frames()));
  out.value = std::clamp(out.raw / params.slip_norm, 0.0, 1.0);
  return out;
}

NormalizedTerm penetration_violation(const ContactTimeline& timeline,
                                     const ContactParams& params) {
  NormalizedTerm out;
  out.raw = (-timeline.foot_height.array()).max(0.0).sum() /
            (2.0 * static_cast<double>(timeline.num_frames()));
  out.value = std::clamp(out.raw / params.gpen_norm, 0.0, 1.0);
  return out;
}

bool FloatViolation::ballistic_ok() const {
  return std::all_of(runs.begin(), runs.end(), [](const AirborneRun& r) { return r.ballistic; });
}

double ballistic_fit_rms(std::span<const double> root_z, double frame_rate_hz, double gravity) {
  const std::size_t n = root_z.size();
  if (n < 2) return 0.0;
  // Remove the known curvature, then fit a line by least squares.
  Eigen::MatrixXd design(static_cast<Eigen::Index>(n), 2);
  Eigen::VectorXd target(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / frame_rate_hz;
    design(static_cast<Eigen::Index>(i), 0) = 1.0;
    design(static_cast<Eigen::Index>(i), 1) = t;
    target(static_cast<Eigen::Index>(i)) = root_z[i] + 0.5 * gravity * t * t;
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(target);
  const Eigen::VectorXd residual = target - design * coef;
  return std::sqrt(residual.squaredNorm() / static_cast<double>(n));
}

FloatViolation float_violation(const MotionTrajectory& traj, const ContactTimeline& timeline,
                               const BodyModel& body, const ContactParams& params) {
  const std::size_t T = traj.num_frames();
  const auto rows = static_cast<Eigen::Index>(T);
  const Eigen::MatrixXd root = traj.joint_series(0);
  const Eigen::VectorXd root_speed = row_norms(frame_velocity(root, traj.frame_rate_hz));

  FloatViolation out;
  out.ratio.resize(rows, 2);
  out.ratio_flags.resize(rows, 2);
  out.forced = FlagMatrix::Constant(rows, 2, false);
  for (int k = 0; k < 2; ++k) {
    const Eigen::VectorXd rel_speed =
        row_norms(frame_velocity(timeline.foot_position[k] - root, traj.frame_rate_hz));
    out.ratio.col(k) = rel_speed.array() / (root_speed.array() + params.rho_eps);
    out.ratio_flags.col(k) = (root_speed.array() >= params.root_speed_min) &&
                             ((out.ratio.col(k).array() < params.rho_min) ||
                              (out.ratio.col(k).array() > params.rho_max));
  }

  // Sequence-level check over sustained airborne runs.
  std::vector<double> root_z(T);
  for (std::size_t t = 0; t < T; ++t) root_z[t] = root(static_cast<Eigen::Index>(t), 2);
  std::size_t t = 0;
  while (t < T) {
    const auto ti = static_cast<Eigen::Index>(t);
    if (timeline.contact(ti, 0) || timeline.contact(ti, 1)) {
      ++t;
      continue;
    }
    std::size_t end = t;
    while (end < T && !timeline.contact(static_cast<Eigen::Index>(end), 0) &&
           !timeline.contact(static_cast<Eigen::Index>(end), 1)) {
      ++end;
    }
    const std::size_t length = end - t;
    if (length > static_cast<std::size_t>(params.ballistic_min_frames)) {
      AirborneRun run;
      run.first = t;
      run.length = length;
      run.rms = ballistic_fit_rms(std::span(root_z).subspan(t, length), traj.frame_rate_hz,
                                  body.gravity);
      run.ballistic = run.rms <= params.ballistic_rms_max;
      if (!run.ballistic) {
        out.forced.middleRows(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(length))
            .setConstant(true);
      }
      out.runs.push_back(run);
    }
    t = end;
  }

  out.flags = out.ratio_flags || out.forced;
  out.v_float = static_cast<double>(out.flags.count()) / (2.0 * static_cast<double>(T));
  return out;
}

BalanceViolation balance_violation(const MotionTrajectory& traj, const ContactTimeline& timeline,
                                   const BodyModel& body, const ContactParams& params) {
  if (body.ankle_joints[0] < 0 || body.ankle_joints[1] < 0) {
    throw MissingFootGeometryError("balance needs left and right ankle joints");
  }
  const Eigen::MatrixXd com = com_trajectory(traj, body);
  const std::size_t T = traj.num_frames();

  BalanceViolation out;
  out.com_xy = com.leftCols(2);
  out.distance.resize(T);
  double sum = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    const auto ti = static_cast<Eigen::Index>(t);
    std::vector<Vec2> support;
    for (int k = 0; k < 2; ++k) {
      if (!timeline.contact(ti, k)) continue;
      const Vec3& ankle = traj.frames[t].positions[static_cast<std::size_t>(body.ankle_joints[k])];
      support.emplace_back(ankle.x(), ankle.y());
    }
    double d = params.balance_no_contact;
    if (!support.empty()) {
      d = point_polygon_distance(out.com_xy.row(ti).transpose(), convex_hull_2d(support));
    }
    out.distance[t] = d;
    sum += std::clamp(d, 0.0, params.balance_clip) / params.balance_clip;
  }
  out.v_bal = sum / static_cast<double>(T);
  return out;
}

double contact_score(double v_slip, double v_gpen, double v_float, double v_bal) {
  require_unit_interval(v_slip, "v_slip");
  require_unit_interval(v_gpen, "v_gpen");
  require_unit_interval(v_float, "v_float");
  require_unit_interval(v_bal, "v_bal");
  // Accumulated in extended precision so the result is the correctly rounded
  // mean up to one ulp.
  using L = long double;
  return static_cast<double>(1.0L - (L(v_slip) + L(v_gpen) + L(v_float) + L(v_bal)) / 4.0L);
}

ContactViolations evaluate_contact(const MotionTrajectory& traj, const BodyModel& body,
                                   const MeshSequence* mesh, const ContactParams& params) {
  ContactViolations out;
  out.timeline = detect_contacts(traj, body, mesh, params);
  const auto slip = slip_violation(out.timeline, traj.frame_rate_hz, params);
  const auto gpen = penetration_violation(out.timeline, params);
  out.raw_slip = slip.raw;
  out.v_slip = slip.value;
  out.raw_gpen = gpen.raw;
  out.v_gpen = gpen.value;
  out.floating = float_violation(traj, out.timeline, body, params);
  out.v_float = out.floating.v_float;
  out.balance = balance_violation(traj, out.timeline, body, params);
  out.v_bal = out.balance.v_bal;
  out.f_con = contact_score(out.v_slip, out.v_gpen, out.v_float, out.v_bal);
  return out;
}

}  // namespace motionfeas
