#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "motionfeas/body_model.h"
#include "motionfeas/motion.h"

namespace motionfeas {

inline constexpr int kFormatVersion = 1;
inline constexpr std::string_view kBinaryMagic = "MFT1";

// Everything a trajectory file can carry.
struct MotionDocument {
  MotionTrajectory trajectory;
  std::vector<std::string> joint_names;
  std::vector<int> parents;
  std::optional<MeshSequence> mesh;
  std::optional<std::array<std::vector<std::uint32_t>, 2>> foot_vertex_sets;
  std::map<std::string, JointRange> joint_limits;
};

// JSON container. Parsing normalizes near-unit quaternions; structural
// problems raise ParseError with the byte offset of the failure.
MotionDocument parse_motion_json(std::string_view text);
// Canonical form: compact, keys sorted, shortest round-trip number text.
std::string to_motion_json(const MotionDocument& doc);

// "MFT1" container: magic, u32 header length, JSON header, then
// little-endian blocks (f32 positions T*J*3, f32 rotations T*J*4, u32 faces
// F*3, f32 vertices T*V*3). Values are stored at float32 precision.
MotionDocument parse_motion_binary(std::string_view bytes);
std::string to_motion_binary(const MotionDocument& doc);

// Dispatches on the leading magic bytes.
MotionDocument parse_motion(std::string_view bytes);
MotionDocument read_motion_file(const std::filesystem::path& path);
void write_motion_file(const std::filesystem::path& path, const MotionDocument& doc,
                       bool binary = false);

// Standalone mesh file: JSON {faces, vertex_frames}, or any motion file that
// carries a mesh.
MeshSequence read_mesh_file(const std::filesystem::path& path);

std::string read_file_bytes(const std::filesystem::path& path);

// Body model for a document: SMPL-X defaults when the joint names match,
// otherwise a model inferred from the names. File-supplied foot vertex sets
// and joint limits are layered on top.
BodyModel body_for_document(const MotionDocument& doc);

}  // namespace motionfeas
