#include "motionfeas/fixtures.h"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "motionfeas/body_model.h"

namespace motionfeas::fixtures {

namespace {

constexpr double u = 1.0 / 64.0;

// Left-side and midline joints; right-side joints mirror x.
Vec3 left_or_center(const std::string& name) {
  if (name == "pelvis") return {0, 0, 60 * u};
  if (name == "spine1") return {0, 0, 68 * u};
  if (name == "spine2") return {0, 0, 76 * u};
  if (name == "spine3") return {0, 0, 84 * u};
  if (name == "neck") return {0, 0, 96 * u};
  if (name == "head") return {0, 0, 104 * u};
  if (name == "jaw") return {0, 0, 100 * u};
  if (name == "hip") return {8 * u, 0, 56 * u};
  if (name == "knee") return {8 * u, 0, 32 * u};
  if (name == "ankle") return {8 * u, 0, 4 * u};
  if (name == "foot") return {8 * u, 0, 0};
  if (name == "collar") return {4 * u, 0, 92 * u};
  if (name == "shoulder") return {12 * u, 0, 92 * u};
  if (name == "elbow") return {16 * u, 0, 76 * u};
  if (name == "wrist") return {16 * u, 0, 60 * u};
  if (name == "eye_smplhf") return {2 * u, 0, 108 * u};
  static const char* fingers[] = {"index", "middle", "pinky", "ring", "thumb"};
  for (int f = 0; f < 5; ++f) {
    for (int k = 1; k <= 3; ++k) {
      if (name == std::string(fingers[f]) + std::to_string(k)) {
        return {(16 + f) * u, 0, (60 - 2 * k) * u};
      }
    }
  }
  return {0, 0, 64 * u};
}

Vec3 standing_position(const std::string& joint) {
  if (joint.rfind("left_", 0) == 0) return left_or_center(joint.substr(5));
  if (joint.rfind("right_", 0) == 0) {
    Vec3 p = left_or_center(joint.substr(6));
    p.x() = -p.x();
    return p;
  }
  return left_or_center(joint);
}

Frame standing_frame() {
  Frame f;
  for (const auto& name : smplx_joint_names()) {
    f.positions.push_back(standing_position(name));
    f.rotations.push_back(Quat::Identity());
  }
  return f;
}

MotionDocument smplx_document() {
  MotionDocument doc;
  doc.joint_names = smplx_joint_names();
  doc.parents = smplx_parents();
  doc.trajectory.frame_rate_hz = 16.0;
  return doc;
}

// Box triangulated with outward faces; appends to `faces`.
void add_box(std::vector<Face>& faces, std::vector<Vec3>& verts, const Vec3& lo, const Vec3& hi) {
  const auto base = static_cast<std::uint32_t>(verts.size());
  for (int i = 0; i < 8; ++i) {
    verts.emplace_back((i & 1) ? hi.x() : lo.x(), (i & 2) ? hi.y() : lo.y(),
                       (i & 4) ? hi.z() : lo.z());
  }
  static const std::uint32_t quads[6][4] = {
      {0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
  for (const auto& q : quads) {
    faces.push_back({base + q[0], base + q[1], base + q[2]});
    faces.push_back({base + q[0], base + q[2], base + q[3]});
  }
}

}  // namespace

MotionDocument standing(std::size_t frames, bool with_mesh) {
  MotionDocument doc = smplx_document();
  doc.trajectory.prompt_id = "standing";
  doc.trajectory.subject_id = "fixture";
  doc.trajectory.frames.assign(frames, standing_frame());
  if (with_mesh) {
    MeshSequence mesh;
    std::vector<Vec3> verts;
    std::array<std::vector<std::uint32_t>, 2> soles;
    for (int side = 0; side < 2; ++side) {
      const double s = side == 0 ? 1.0 : -1.0;
      const double x0 = s * 4 * u;
      const double x1 = s * 12 * u;
      const auto base = static_cast<std::uint32_t>(verts.size());
      add_box(mesh.faces, verts, {std::min(x0, x1), -4 * u, 0},
              {std::max(x0, x1), 8 * u, 4 * u});
      // Bottom corners are the first four box vertices.
      for (std::uint32_t k = 0; k < 4; ++k) soles[side].push_back(base + k);
    }
    mesh.vertex_frames.assign(frames, verts);
    doc.mesh = std::move(mesh);
    doc.foot_vertex_sets = soles;
  }
  return doc;
}

MotionDocument ballistic(std::size_t frames, double gravity) {
  MotionDocument doc = smplx_document();
  doc.trajectory.prompt_id = "jump";
  doc.trajectory.subject_id = "fixture";
  const Frame pose = standing_frame();
  const double vx = 0.5, z0 = 0.25, vz = 2.5;
  for (std::size_t i = 0; i < frames; ++i) {
    const double t = static_cast<double>(i) / doc.trajectory.frame_rate_hz;
    const Vec3 offset(vx * t, 0.0, z0 + vz * t - 0.5 * gravity * t * t);
    Frame f = pose;
    for (auto& p : f.positions) p += offset;
    doc.trajectory.frames.push_back(std::move(f));
  }
  return doc;
}

MotionDocument smplx_sized(std::size_t frames, std::uint64_t seed) {
  constexpr std::uint32_t kVertices = 10475;
  constexpr std::size_t kFaces = 20908;
  MotionDocument doc = smplx_document();
  doc.trajectory.prompt_id = "smplx-sized";
  doc.trajectory.subject_id = "fixture";

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  auto f32 = [](double v) { return static_cast<double>(static_cast<float>(v)); };

  const Frame pose = standing_frame();
  for (std::size_t t = 0; t < frames; ++t) {
    Frame f = pose;
    for (std::size_t j = 0; j < f.positions.size(); ++j) {
      for (int a = 0; a < 3; ++a) f.positions[j][a] = f32(f.positions[j][a] + 0.01 * coord(rng));
      Quat q(coord(rng), coord(rng), coord(rng), coord(rng));
      q.normalize();
      f.rotations[j] = Quat(f32(q.w()), f32(q.x()), f32(q.y()), f32(q.z()));
    }
    doc.trajectory.frames.push_back(std::move(f));
  }

  MeshSequence mesh;
  std::uniform_int_distribution<std::uint32_t> index(0, kVertices - 1);
  mesh.faces.reserve(kFaces);
  while (mesh.faces.size() < kFaces) {
    const Face face{index(rng), index(rng), index(rng)};
    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) continue;
    mesh.faces.push_back(face);
  }
  for (std::size_t t = 0; t < frames; ++t) {
    std::vector<Vec3> verts(kVertices);
    for (auto& v : verts) v = Vec3(f32(0.3 * coord(rng)), f32(0.2 * coord(rng)), f32(0.9 + 0.8 * coord(rng)));
    mesh.vertex_frames.push_back(std::move(verts));
  }
  doc.mesh = std::move(mesh);
  std::array<std::vector<std::uint32_t>, 2> soles;
  for (std::uint32_t k = 0; k < 64; ++k) {
    soles[0].push_back(k);
    soles[1].push_back(kVertices - 1 - k);
  }
  doc.foot_vertex_sets = soles;
  return doc;
}

MotionDocument swaying(std::size_t index, std::size_t prompts, std::size_t frames) {
  MotionDocument doc = smplx_document();
  doc.trajectory.prompt_id = "prompt-" + std::to_string(index % std::max<std::size_t>(prompts, 1));
  doc.trajectory.subject_id = "sway-" + std::to_string(index);
  const Frame pose = standing_frame();
  const double amplitude = 0.01 * static_cast<double>(1 + index % 7);
  const double freq = 0.5 + 0.25 * static_cast<double>(index % 3);
  const double lift = 0.02 * static_cast<double>(index % 4);
  const auto lknee = *smplx_body().find_joint("left_knee");
  for (std::size_t i = 0; i < frames; ++i) {
    const double t = static_cast<double>(i) / doc.trajectory.frame_rate_hz;
    const double phase = 2.0 * std::numbers::pi * freq * t;
    Frame f = pose;
    // Upper body sways over fixed feet.
    for (std::size_t j = 0; j < f.positions.size(); ++j) {
      if (f.positions[j].z() > 0.5) f.positions[j].x() += amplitude * std::sin(phase);
      if (f.positions[j].z() < 0.1 && f.positions[j].x() > 0) f.positions[j].z() += lift * (1 - std::cos(phase));
    }
    f.rotations[lknee] = Quat(Eigen::AngleAxisd(0.3 * std::sin(phase), Vec3::UnitX()));
    doc.trajectory.frames.push_back(std::move(f));
  }
  return doc;
}

MeshSequence cube(double size) {
  MeshSequence mesh;
  std::vector<Vec3> verts;
  add_box(mesh.faces, verts, Vec3::Zero(), Vec3::Constant(size));
  mesh.vertex_frames.push_back(std::move(verts));
  return mesh;
}

MeshSequence sphere(std::size_t bands, std::size_t segments, double radius,
                    std::size_t frames) {
  if (bands < 2 || segments < 3) throw std::invalid_argument("sphere: too coarse");
  MeshSequence mesh;
  std::vector<Vec3> verts;
  verts.emplace_back(0, 0, radius);
  for (std::size_t i = 1; i < bands; ++i) {
    const double theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(bands);
    for (std::size_t j = 0; j < segments; ++j) {
      const double phi =
          2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(segments);
      verts.emplace_back(radius * std::sin(theta) * std::cos(phi),
                         radius * std::sin(theta) * std::sin(phi), radius * std::cos(theta));
    }
  }
  verts.emplace_back(0, 0, -radius);
  const auto ring = [&](std::size_t i, std::size_t j) {
    return static_cast<std::uint32_t>(1 + (i - 1) * segments + j % segments);
  };
  const auto south = static_cast<std::uint32_t>(verts.size() - 1);
  for (std::size_t j = 0; j < segments; ++j) {
    mesh.faces.push_back({0, ring(1, j), ring(1, j + 1)});
    for (std::size_t i = 1; i + 1 < bands; ++i) {
      mesh.faces.push_back({ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)});
      mesh.faces.push_back({ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)});
    }
    mesh.faces.push_back({ring(bands - 1, j), south, ring(bands - 1, j + 1)});
  }
  mesh.vertex_frames.assign(frames, verts);
  return mesh;
}

MeshSequence crossing_pairs(std::size_t total_faces, std::size_t pairs, std::size_t frames) {
  if (2 * pairs > total_faces) throw std::invalid_argument("crossing_pairs: too many pairs");
  MeshSequence mesh;
  std::vector<Vec3> verts;
  auto add_triangle = [&](const Vec3& a, const Vec3& b, const Vec3& c) {
    const auto base = static_cast<std::uint32_t>(verts.size());
    verts.push_back(a);
    verts.push_back(b);
    verts.push_back(c);
    mesh.faces.push_back({base, base + 1, base + 2});
  };
  for (std::size_t k = 0; k < pairs; ++k) {
    const Vec3 o(3.0 * static_cast<double>(k), 0, 0);
    add_triangle(o + Vec3(0, 0, 0), o + Vec3(1, 0, 0), o + Vec3(0, 1, 0));
    add_triangle(o + Vec3(0.25, 0.25, -0.5), o + Vec3(0.5, 0.25, 0), o + Vec3(0.25, 0.25, 0.5));
  }
  for (std::size_t k = 0; mesh.faces.size() < total_faces; ++k) {
    const Vec3 o(2.0 * static_cast<double>(k), 10.0, 0);
    add_triangle(o, o + Vec3(1, 0, 0), o + Vec3(0, 1, 0.5));
  }
  mesh.vertex_frames.assign(frames, verts);
  return mesh;
}

}  // namespace motionfeas::fixtures
