#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "motionfeas/errors.h"

namespace motionfeas {

// Units are meters, seconds and radians. +Z is up and the ground is z = 0.
using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;
using FlagMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// One pose sample. Rotations are parent-relative (the root's is global) and
// are serialized w-x-y-z.
struct Frame {
  std::vector<Vec3> positions;
  std::vector<Quat> rotations;
};

struct MotionTrajectory {
  double frame_rate_hz = 16.0;
  std::vector<Frame> frames;
  std::string subject_id;
  std::string prompt_id;

  std::size_t num_frames() const { return frames.size(); }
  std::size_t num_joints() const {
    return frames.empty() ? 0 : frames.front().positions.size();
  }
  double dt() const { return 1.0 / frame_rate_hz; }

  // Position of one joint across all frames as a T x 3 matrix.
  Eigen::MatrixXd joint_series(std::size_t joint) const;
};

using Face = std::array<std::uint32_t, 3>;

// Shared triangle topology with per-frame vertex positions.
struct MeshSequence {
  std::vector<Face> faces;
  std::vector<std::vector<Vec3>> vertex_frames;

  std::size_t num_faces() const { return faces.size(); }
  std::size_t num_vertices() const {
    return vertex_frames.empty() ? 0 : vertex_frames.front().size();
  }
  std::size_t num_frames() const { return vertex_frames.size(); }
};

struct ValidationResult {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  explicit operator bool() const { return ok(); }
};

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationResult result);
  const ValidationResult& result() const noexcept { return result_; }

 private:
  ValidationResult result_;
};

struct BodyModel;

// Tolerances applied to stored quaternions.
inline constexpr double kUnitQuatTolerance = 1e-6;
inline constexpr double kUnitQuatHardLimit = 1e-3;

ValidationResult validate_trajectory(const MotionTrajectory& traj,
                                     const BodyModel& body,
                                     const MeshSequence* mesh = nullptr);

// Rescales quaternions whose norm deviates from one by more than
// kUnitQuatTolerance. Deviations beyond kUnitQuatHardLimit are left alone so
// validation can reject them.
void normalize_rotations(MotionTrajectory& traj);

// order 1: forward differences scaled by f, T-1 rows.
// order 2: central second differences scaled by f^2, T rows; boundary rows use
// the one-sided stencil x[0] - 2x[1] + x[2] (mirrored at the end).
Eigen::MatrixXd finite_difference(const Eigen::MatrixXd& series,
                                  double frame_rate_hz, int order);

// Per-frame velocity aligned with the T input frames: forward differences,
// with the final frame repeating the last difference.
Eigen::MatrixXd frame_velocity(const Eigen::MatrixXd& series,
                               double frame_rate_hz);

// Row-wise Euclidean norm.
Eigen::VectorXd row_norms(const Eigen::MatrixXd& m);

}  // namespace motionfeas
