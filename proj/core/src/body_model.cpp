#include "motionfeas/body_model.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace motionfeas {

namespace {

using std::numbers::pi;

bool contains(std::string_view haystack, std::string_view needle) {
  return haystack.find(needle) != std::string_view::npos;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

constexpr JointRange symmetric(double x, double y, double z) {
  return {AxisRange{-x, x}, AxisRange{-y, y}, AxisRange{-z, z}};
}

}  // namespace

std::string_view to_string(JointType type) {
  switch (type) {
    case JointType::kRoot: return "root";
    case JointType::kSpine: return "spine";
    case JointType::kNeck: return "neck";
    case JointType::kHead: return "head";
    case JointType::kFace: return "face";
    case JointType::kCollar: return "collar";
    case JointType::kShoulder: return "shoulder";
    case JointType::kElbow: return "elbow";
    case JointType::kWrist: return "wrist";
    case JointType::kFinger: return "finger";
    case JointType::kHip: return "hip";
    case JointType::kKnee: return "knee";
    case JointType::kAnkle: return "ankle";
    case JointType::kFoot: return "foot";
    case JointType::kOther: return "other";
  }
  return "other";
}

std::string_view to_string(TorqueClass cls) {
  switch (cls) {
    case TorqueClass::kAnkle: return "ankle";
    case TorqueClass::kKnee: return "knee";
    case TorqueClass::kHip: return "hip";
    case TorqueClass::kSpine: return "spine";
    case TorqueClass::kDefault: return "default";
  }
  return "default";
}

TorqueClass torque_class(JointType type) {
  switch (type) {
    case JointType::kAnkle: return TorqueClass::kAnkle;
    case JointType::kKnee: return TorqueClass::kKnee;
    case JointType::kHip: return TorqueClass::kHip;
    // The pelvis carries the trunk, so it shares the spine limit.
    case JointType::kRoot:
    case JointType::kSpine: return TorqueClass::kSpine;
    default: return TorqueClass::kDefault;
  }
}

double TorqueLimits::for_class(TorqueClass cls) const {
  switch (cls) {
    case TorqueClass::kAnkle: return ankle;
    case TorqueClass::kKnee: return knee;
    case TorqueClass::kHip: return hip;
    case TorqueClass::kSpine: return spine;
    case TorqueClass::kDefault: return fallback;
  }
  return fallback;
}

std::optional<std::size_t> BodyModel::find_joint(std::string_view name) const {
  auto it = std::find(joint_names.begin(), joint_names.end(), name);
  if (it == joint_names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - joint_names.begin());
}

void BodyModel::resolve_torque_limits() {
  torque_max.resize(joint_types.size());
  for (std::size_t j = 0; j < joint_types.size(); ++j) {
    torque_max[j] = torque_limits.for_class(torque_class(joint_types[j]));
  }
}

JointType infer_joint_type(std::string_view raw_name, int parent) {
  if (parent < 0) return JointType::kRoot;
  const std::string name = lower(raw_name);
  if (contains(name, "pelvis") || contains(name, "root")) return JointType::kRoot;
  if (contains(name, "index") || contains(name, "middle") || contains(name, "pinky") ||
      contains(name, "ring") || contains(name, "thumb") || contains(name, "finger")) {
    return JointType::kFinger;
  }
  if (contains(name, "spine") || contains(name, "chest") || contains(name, "torso") ||
      contains(name, "abdomen") || contains(name, "waist")) {
    return JointType::kSpine;
  }
  if (contains(name, "neck")) return JointType::kNeck;
  if (contains(name, "head")) return JointType::kHead;
  if (contains(name, "jaw") || contains(name, "eye")) return JointType::kFace;
  if (contains(name, "collar") || contains(name, "clavicle")) return JointType::kCollar;
  if (contains(name, "shoulder")) return JointType::kShoulder;
  if (contains(name, "elbow")) return JointType::kElbow;
  if (contains(name, "wrist") || contains(name, "hand")) return JointType::kWrist;
  if (contains(name, "hip")) return JointType::kHip;
  if (contains(name, "knee")) return JointType::kKnee;
  if (contains(name, "ankle")) return JointType::kAnkle;
  if (contains(name, "foot") || contains(name, "toe")) return JointType::kFoot;
  return JointType::kOther;
}

// Ranges are engineering defaults over the parent-relative rotation,
// decomposed as intrinsic X-Y-Z Euler angles.
JointRange default_joint_range(JointType type, std::string_view /*name*/) {
  switch (type) {
    case JointType::kRoot: return symmetric(pi, pi, pi);
    case JointType::kSpine: return symmetric(0.8, 0.6, 0.6);
    case JointType::kNeck: return symmetric(0.9, 1.2, 0.7);
    case JointType::kHead: return symmetric(0.7, 1.0, 0.6);
    case JointType::kFace: return symmetric(0.6, 0.6, 0.6);
    case JointType::kCollar: return symmetric(0.6, 0.6, 0.6);
    case JointType::kShoulder: return symmetric(1.6, 2.0, 2.4);
    case JointType::kElbow: return symmetric(0.5, 2.8, 0.5);
    case JointType::kWrist: return symmetric(1.2, 1.2, 1.2);
    case JointType::kFinger: return symmetric(1.6, 1.6, 1.6);
    case JointType::kHip:
      return {AxisRange{-2.4, 0.9}, AxisRange{-1.0, 1.0}, AxisRange{-1.0, 1.0}};
    case JointType::kKnee:
      return {AxisRange{-0.15, 2.7}, AxisRange{-0.4, 0.4}, AxisRange{-0.4, 0.4}};
    case JointType::kAnkle: return symmetric(0.9, 0.6, 0.6);
    case JointType::kFoot: return symmetric(0.8, 0.8, 0.8);
    case JointType::kOther: return symmetric(pi, pi, pi);
  }
  return symmetric(pi, pi, pi);
}

double default_omega_max(JointType type) {
  switch (type) {
    case JointType::kRoot:
    case JointType::kSpine:
    case JointType::kNeck:
    case JointType::kHead:
    case JointType::kFace:
      return pi;
    default:
      return 2.0 * pi;
  }
}

BodyModel make_body_model(std::vector<std::string> joint_names, std::vector<int> parents) {
  BodyModel body;
  const std::size_t J = joint_names.size();
  body.joint_names = std::move(joint_names);
  body.parents = std::move(parents);
  body.joint_types.resize(J);
  body.joint_limits.resize(J);
  body.omega_max.resize(J);
  body.inertia.assign(J, 1.0);
  body.com_weights.assign(J, 1.0);
  if (J > 0) body.com_weights[0] = 3.0;

  for (std::size_t j = 0; j < J; ++j) {
    const int parent = j < body.parents.size() ? body.parents[j] : -1;
    const JointType type = infer_joint_type(body.joint_names[j], parent);
    body.joint_types[j] = type;
    body.joint_limits[j] = default_joint_range(type, body.joint_names[j]);
    body.omega_max[j] = default_omega_max(type);
  }
  body.resolve_torque_limits();

  const std::array<const char*, 2> sides = {"left", "right"};
  for (int k = 0; k < 2; ++k) {
    const std::string side = sides[k];
    if (auto ankle = body.find_joint(side + "_ankle")) {
      body.ankle_joints[k] = static_cast<int>(*ankle);
      body.foot_joints[k].push_back(static_cast<int>(*ankle));
    }
    if (auto toe = body.find_joint(side + "_foot")) {
      body.foot_joints[k].push_back(static_cast<int>(*toe));
    }
  }
  return body;
}

const std::vector<std::string>& smplx_joint_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n = {
        "pelvis",         "left_hip",       "right_hip",       "spine1",
        "left_knee",      "right_knee",     "spine2",          "left_ankle",
        "right_ankle",    "spine3",         "left_foot",       "right_foot",
        "neck",           "left_collar",    "right_collar",    "head",
        "left_shoulder",  "right_shoulder", "left_elbow",      "right_elbow",
        "left_wrist",     "right_wrist",    "jaw",             "left_eye_smplhf",
        "right_eye_smplhf"};
    for (const char* side : {"left", "right"}) {
      for (const char* finger : {"index", "middle", "pinky", "ring", "thumb"}) {
        for (int k = 1; k <= 3; ++k) {
          n.push_back(std::string(side) + "_" + finger + std::to_string(k));
        }
      }
    }
    return n;
  }();
  return names;
}

const std::vector<int>& smplx_parents() {
  static const std::vector<int> parents = {
      -1, 0,  0,  0,  1,  2,  3,  4,  5,  6,  7,  8,  9,  9,
      9,  12, 13, 14, 16, 17, 18, 19, 15, 15, 15, 20, 25, 26,
      20, 28, 29, 20, 31, 32, 20, 34, 35, 20, 37, 38, 21, 40,
      41, 21, 43, 44, 21, 46, 47, 21, 49, 50, 21, 52, 53};
  return parents;
}

BodyModel smplx_body() {
  return make_body_model(smplx_joint_names(), smplx_parents());
}

ValidationResult validate_body(const BodyModel& body) {
  ValidationResult r;
  auto& v = r.violations;
  const std::size_t J = body.num_joints();
  if (J == 0) v.push_back("body model has no joints");

  auto check_size = [&](std::size_t n, const char* what) {
    if (n != J) {
      v.push_back(std::string(what) + " has " + std::to_string(n) + " entries, expected " +
                  std::to_string(J));
    }
  };
  check_size(body.parents.size(), "parents");
  check_size(body.joint_types.size(), "joint_types");
  check_size(body.omega_max.size(), "omega_max");
  check_size(body.torque_max.size(), "torque_max");
  check_size(body.inertia.size(), "inertia");
  check_size(body.com_weights.size(), "com_weights");
  if (!body.joint_limits.empty()) check_size(body.joint_limits.size(), "joint_limits");
  if (!v.empty()) return r;

  if (body.parents[0] != -1) v.push_back("joint 0 must be the root (parent -1)");
  for (std::size_t j = 1; j < J; ++j) {
    const int p = body.parents[j];
    // Parents precede children, which also rules out cycles.
    if (p < 0 || static_cast<std::size_t>(p) >= j) {
      v.push_back("joint " + std::to_string(j) + " has invalid parent " + std::to_string(p));
    }
  }
  for (std::size_t j = 0; j < body.joint_limits.size(); ++j) {
    for (int a = 0; a < 3; ++a) {
      const AxisRange& range = body.joint_limits[j][a];
      if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || range.lo > range.hi) {
        v.push_back("invalid limit on " + body.joint_names[j] + "." + kEulerAxes[a]);
      }
    }
  }
  for (std::size_t j = 0; j < J; ++j) {
    if (!(body.com_weights[j] > 0.0)) v.push_back("com weight must be positive at " + body.joint_names[j]);
    if (!std::isfinite(body.omega_max[j])) v.push_back("omega_max not finite at " + body.joint_names[j]);
    if (!std::isfinite(body.torque_max[j])) v.push_back("torque_max not finite at " + body.joint_names[j]);
    if (!std::isfinite(body.inertia[j])) v.push_back("inertia not finite at " + body.joint_names[j]);
  }
  if (!(body.mass_kg > 0.0) || !std::isfinite(body.mass_kg)) v.push_back("mass must be positive");
  if (!(body.gravity > 0.0) || !std::isfinite(body.gravity)) v.push_back("gravity must be positive");
  return r;
}

}  // namespace motionfeas
