#include "motionfeas/motion.h"

#include <cmath>
#include <sstream>

#include "motionfeas/body_model.h"

namespace motionfeas {

namespace {

std::string join_violations(const ValidationResult& r) {
  std::ostringstream out;
  out << "validation failed";
  for (const auto& v : r.violations) out << "; " << v;
  return out.str();
}

std::string at(std::size_t t, std::size_t j) {
  return "(" + std::to_string(t) + "," + std::to_string(j) + ")";
}

}  // namespace

ValidationError::ValidationError(ValidationResult result)
    : Error(join_violations(result)), result_(std::move(result)) {}

Eigen::MatrixXd MotionTrajectory::joint_series(std::size_t joint) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(frames.size()), 3);
  for (std::size_t t = 0; t < frames.size(); ++t) {
    out.row(static_cast<Eigen::Index>(t)) = frames[t].positions[joint].transpose();
  }
  return out;
}

ValidationResult validate_trajectory(const MotionTrajectory& traj,
                                     const BodyModel& body,
                                     const MeshSequence* mesh) {
  ValidationResult r;
  auto& v = r.violations;

  if (!(traj.frame_rate_hz > 0.0) || !std::isfinite(traj.frame_rate_hz)) {
    v.push_back("frame rate must be positive and finite");
  }
  const std::size_t T = traj.num_frames();
  if (T < 2) v.push_back("trajectory needs at least 2 frames, has " + std::to_string(T));

  const std::size_t J = body.num_joints();
  for (std::size_t t = 0; t < T; ++t) {
    const Frame& f = traj.frames[t];
    if (f.positions.size() != J || f.rotations.size() != J) {
      v.push_back("frame " + std::to_string(t) + " has " +
                  std::to_string(f.positions.size()) + " positions and " +
                  std::to_string(f.rotations.size()) + " rotations, expected " +
                  std::to_string(J));
      continue;
    }
    for (std::size_t j = 0; j < J; ++j) {
      if (!f.positions[j].allFinite()) v.push_back("non-finite position at " + at(t, j));
      const Quat& q = f.rotations[j];
      if (!q.coeffs().allFinite()) {
        v.push_back("non-finite rotation at " + at(t, j));
      } else if (std::abs(q.norm() - 1.0) > kUnitQuatTolerance) {
        v.push_back("non-unit quaternion at " + at(t, j));
      }
    }
  }

  if (mesh != nullptr) {
    const std::size_t V = mesh->num_vertices();
    if (mesh->faces.empty()) v.push_back("mesh has no faces");
    for (std::size_t k = 0; k < mesh->faces.size(); ++k) {
      const Face& face = mesh->faces[k];
      if (face[0] >= V || face[1] >= V || face[2] >= V) {
        v.push_back("face index out of range in face " + std::to_string(k));
        break;
      }
    }
    if (mesh->num_frames() != T) {
      v.push_back("mesh has " + std::to_string(mesh->num_frames()) +
                  " frames, trajectory has " + std::to_string(T));
    }
    for (std::size_t t = 0; t < mesh->num_frames(); ++t) {
      const auto& verts = mesh->vertex_frames[t];
      if (verts.size() != V) {
        v.push_back("mesh frame " + std::to_string(t) + " has " +
                    std::to_string(verts.size()) + " vertices, expected " +
                    std::to_string(V));
        continue;
      }
      for (std::size_t i = 0; i < V; ++i) {
        if (!verts[i].allFinite()) {
          v.push_back("non-finite vertex at " + at(t, i));
          break;
        }
      }
    }
    for (int k = 0; k < 2; ++k) {
      for (auto idx : body.foot_vertices[k]) {
        if (idx >= V) {
          v.push_back("foot vertex index out of range");
          break;
        }
      }
    }
  }
  return r;
}

void normalize_rotations(MotionTrajectory& traj) {
  for (auto& frame : traj.frames) {
    for (auto& q : frame.rotations) {
      const double n = q.norm();
      const double dev = std::abs(n - 1.0);
      if (dev > kUnitQuatTolerance && dev <= kUnitQuatHardLimit) q.coeffs() /= n;
    }
  }
}

Eigen::MatrixXd finite_difference(const Eigen::MatrixXd& series,
                                  double frame_rate_hz, int order) {
  const Eigen::Index T = series.rows();
  if (order == 1) {
    if (T < 2) throw TooFewFramesError(static_cast<std::size_t>(T), 2);
    return (series.bottomRows(T - 1) - series.topRows(T - 1)) * frame_rate_hz;
  }
  if (order == 2) {
    if (T < 3) throw TooFewFramesError(static_cast<std::size_t>(T), 3);
    const double f2 = frame_rate_hz * frame_rate_hz;
    Eigen::MatrixXd out(T, series.cols());
    out.middleRows(1, T - 2) = (series.bottomRows(T - 2) - 2.0 * series.middleRows(1, T - 2) +
                                series.topRows(T - 2)) * f2;
    out.row(0) = (series.row(0) - 2.0 * series.row(1) + series.row(2)) * f2;
    out.row(T - 1) = (series.row(T - 1) - 2.0 * series.row(T - 2) + series.row(T - 3)) * f2;
    return out;
  }
  throw std::invalid_argument("finite_difference: order must be 1 or 2");
}

Eigen::MatrixXd frame_velocity(const Eigen::MatrixXd& series, double frame_rate_hz) {
  const Eigen::Index T = series.rows();
  Eigen::MatrixXd forward = finite_difference(series, frame_rate_hz, 1);
  Eigen::MatrixXd out(T, series.cols());
  out.topRows(T - 1) = forward;
  out.row(T - 1) = forward.row(T - 2);
  return out;
}

Eigen::VectorXd row_norms(const Eigen::MatrixXd& m) {
  return m.rowwise().norm();
}

}  // namespace motionfeas
