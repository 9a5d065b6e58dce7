#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "motionfeas/motion.h"

namespace motionfeas {

enum class JointType {
  kRoot,
  kSpine,
  kNeck,
  kHead,
  kFace,
  kCollar,
  kShoulder,
  kElbow,
  kWrist,
  kFinger,
  kHip,
  kKnee,
  kAnkle,
  kFoot,
  kOther,
};

// Torque limit classes. Everything outside the four named classes uses
// kDefault.
enum class TorqueClass { kAnkle, kKnee, kHip, kSpine, kDefault };

std::string_view to_string(JointType type);
std::string_view to_string(TorqueClass cls);
TorqueClass torque_class(JointType type);

// Closed interval on one intrinsic Euler axis, radians.
struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double angle) const { return angle >= lo && angle <= hi; }
};

// Intrinsic X-Y-Z Euler ranges of a joint's parent-relative rotation.
using JointRange = std::array<AxisRange, 3>;

inline constexpr std::array<char, 3> kEulerAxes = {'x', 'y', 'z'};

struct TorqueLimits {
  double ankle = 200.0;
  double knee = 300.0;
  double hip = 400.0;
  double spine = 200.0;
  double fallback = 200.0;

  double for_class(TorqueClass cls) const;
};

struct BodyModel {
  std::vector<std::string> joint_names;
  std::vector<int> parents;
  std::vector<JointType> joint_types;

  // Empty means no limits are configured; joint_limit_violation then fails.
  std::vector<JointRange> joint_limits;
  std::vector<double> omega_max;   // rad/s
  std::vector<double> torque_max;  // N*m, resolved from torque_limits
  std::vector<double> inertia;     // kg*m^2
  std::vector<double> com_weights;

  TorqueLimits torque_limits;
  double mass_kg = 70.0;
  double gravity = 9.81;

  // Sole vertex indices into the mesh; empty when no mesh layout is known.
  std::array<std::vector<std::uint32_t>, 2> foot_vertices;
  // Joints standing in for the sole when no mesh is available
  // (ankle and toe per foot).
  std::array<std::vector<int>, 2> foot_joints;
  std::array<int, 2> ankle_joints = {-1, -1};

  std::size_t num_joints() const { return joint_names.size(); }
  std::optional<std::size_t> find_joint(std::string_view name) const;
  double body_weight() const { return mass_kg * gravity; }

  // Re-derives torque_max from joint_types and torque_limits.
  void resolve_torque_limits();
};

// Builds a body from a named joint tree. Joint types are inferred from the
// names and every per-joint threshold gets its type default.
BodyModel make_body_model(std::vector<std::string> joint_names,
                          std::vector<int> parents);

// 55-joint SMPL-X skeleton with default limits.
BodyModel smplx_body();

const std::vector<std::string>& smplx_joint_names();
const std::vector<int>& smplx_parents();

JointType infer_joint_type(std::string_view name, int parent);
JointRange default_joint_range(JointType type, std::string_view name);
double default_omega_max(JointType type);

// Structural checks: tree rooted at 0, consistent array sizes, finite and
// ordered limits, positive weights.
ValidationResult validate_body(const BodyModel& body);

}  // namespace motionfeas
