#include "motionfeas/io.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace motionfeas {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) {
  throw ParseError("invalid trajectory document: " + what);
}

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& v, const char* what) {
  // null stands for a non-finite value; validation reports it later.
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) schema_error(std::string(what) + " must be numeric");
  return v.get<double>();
}

template <int N>
std::array<double, N> fixed_row(const json& v, const char* what) {
  if (!v.is_array() || v.size() != N) {
    schema_error(std::string(what) + " rows must have " + std::to_string(N) + " entries");
  }
  std::array<double, N> out{};
  for (int i = 0; i < N; ++i) out[i] = number(v[i], what);
  return out;
}

std::vector<std::uint32_t> index_list(const json& v, const char* what) {
  if (!v.is_array()) schema_error(std::string(what) + " must be an array");
  std::vector<std::uint32_t> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number_unsigned()) schema_error(std::string(what) + " must hold non-negative integers");
    out.push_back(e.get<std::uint32_t>());
  }
  return out;
}

json vec_json(const Vec3& p) { return json::array({p.x(), p.y(), p.z()}); }
json quat_json(const Quat& q) { return json::array({q.w(), q.x(), q.y(), q.z()}); }

std::vector<Vec3> parse_points(const json& arr, const char* what) {
  if (!arr.is_array()) schema_error(std::string(what) + " must be an array");
  std::vector<Vec3> out;
  out.reserve(arr.size());
  for (const auto& row : arr) {
    const auto p = fixed_row<3>(row, what);
    out.emplace_back(p[0], p[1], p[2]);
  }
  return out;
}

std::vector<Face> parse_faces(const json& arr) {
  if (!arr.is_array()) schema_error("mesh.faces must be an array");
  std::vector<Face> faces;
  faces.reserve(arr.size());
  for (const auto& row : arr) {
    if (!row.is_array() || row.size() != 3) schema_error("mesh.faces rows must have 3 entries");
    Face f{};
    for (int i = 0; i < 3; ++i) {
      if (!row[i].is_number_unsigned()) schema_error("mesh.faces must hold non-negative integers");
      f[i] = row[i].get<std::uint32_t>();
    }
    faces.push_back(f);
  }
  return faces;
}

MeshSequence parse_mesh_json(const json& m) {
  MeshSequence mesh;
  mesh.faces = parse_faces(require(m, "faces"));
  const json& frames = require(m, "vertex_frames");
  if (!frames.is_array()) schema_error("mesh.vertex_frames must be an array");
  for (const auto& f : frames) mesh.vertex_frames.push_back(parse_points(f, "mesh.vertex_frames"));
  return mesh;
}

json mesh_json(const MeshSequence& mesh) {
  json faces = json::array();
  for (const auto& f : mesh.faces) faces.push_back(json::array({f[0], f[1], f[2]}));
  json frames = json::array();
  for (const auto& verts : mesh.vertex_frames) {
    json rows = json::array();
    for (const auto& v : verts) rows.push_back(vec_json(v));
    frames.push_back(std::move(rows));
  }
  return json{{"faces", std::move(faces)}, {"vertex_frames", std::move(frames)}};
}

// Fields shared between the JSON document and the binary header.
void parse_common(const json& j, MotionDocument& doc) {
  if (!j.is_object()) schema_error("top level must be an object");
  const json& version = require(j, "version");
  if (!version.is_number_integer() || version.get<int>() != kFormatVersion) {
    schema_error("unsupported version");
  }
  doc.trajectory.frame_rate_hz = number(require(j, "frame_rate_hz"), "frame_rate_hz");

  const json& names = require(j, "joint_names");
  if (!names.is_array()) schema_error("joint_names must be an array");
  for (const auto& n : names) {
    if (!n.is_string()) schema_error("joint_names must hold strings");
    doc.joint_names.push_back(n.get<std::string>());
  }
  const json& parents = require(j, "parents");
  if (!parents.is_array() || parents.size() != doc.joint_names.size()) {
    schema_error("parents must have one entry per joint");
  }
  for (const auto& p : parents) {
    if (!p.is_number_integer()) schema_error("parents must hold integers");
    doc.parents.push_back(p.get<int>());
  }
  if (auto it = j.find("subject_id"); it != j.end()) {
    if (!it->is_string()) schema_error("subject_id must be a string");
    doc.trajectory.subject_id = it->get<std::string>();
  }
  if (auto it = j.find("prompt_id"); it != j.end()) {
    if (!it->is_string()) schema_error("prompt_id must be a string");
    doc.trajectory.prompt_id = it->get<std::string>();
  }
  if (auto it = j.find("foot_vertex_sets"); it != j.end()) {
    std::array<std::vector<std::uint32_t>, 2> sets;
    sets[0] = index_list(require(*it, "left"), "foot_vertex_sets.left");
    sets[1] = index_list(require(*it, "right"), "foot_vertex_sets.right");
    doc.foot_vertex_sets = std::move(sets);
  }
  if (auto it = j.find("joint_limits"); it != j.end()) {
    if (!it->is_object()) schema_error("joint_limits must be an object");
    for (const auto& [joint, axes] : it->items()) {
      JointRange range{};
      for (int a = 0; a < 3; ++a) {
        const std::string axis(1, kEulerAxes[a]);
        const auto lohi = fixed_row<2>(require(axes, axis.c_str()), "joint_limits");
        range[a] = AxisRange{lohi[0], lohi[1]};
      }
      doc.joint_limits[joint] = range;
    }
  }
}

void write_common(json& j, const MotionDocument& doc) {
  j["version"] = kFormatVersion;
  j["frame_rate_hz"] = doc.trajectory.frame_rate_hz;
  j["joint_names"] = doc.joint_names;
  j["parents"] = doc.parents;
  if (!doc.trajectory.subject_id.empty()) j["subject_id"] = doc.trajectory.subject_id;
  if (!doc.trajectory.prompt_id.empty()) j["prompt_id"] = doc.trajectory.prompt_id;
  if (doc.foot_vertex_sets) {
    j["foot_vertex_sets"] = json{{"left", (*doc.foot_vertex_sets)[0]},
                                 {"right", (*doc.foot_vertex_sets)[1]}};
  }
  if (!doc.joint_limits.empty()) {
    json limits = json::object();
    for (const auto& [joint, range] : doc.joint_limits) {
      json axes = json::object();
      for (int a = 0; a < 3; ++a) {
        axes[std::string(1, kEulerAxes[a])] = json::array({range[a].lo, range[a].hi});
      }
      limits[joint] = std::move(axes);
    }
    j["joint_limits"] = std::move(limits);
  }
}

// Little-endian block writer/reader.
class ByteWriter {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
  }
  void f32(double v) { u32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
  void raw(std::string_view s) { out_.append(s); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  double f32() { return static_cast<double>(std::bit_cast<float>(u32())); }
  std::string_view raw(std::size_t n) {
    need(n);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw ParseError("truncated binary trajectory", pos_);
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::size_t checked_count(const json& header, const char* key) {
  const json& v = require(header, key);
  if (!v.is_number_unsigned()) schema_error(std::string(key) + " must be a non-negative integer");
  return v.get<std::size_t>();
}

}  // namespace

MotionDocument parse_motion_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
  }

  MotionDocument doc;
  parse_common(j, doc);
  const json& frames = require(j, "frames");
  if (!frames.is_array()) schema_error("frames must be an array");
  for (const auto& f : frames) {
    Frame frame;
    frame.positions = parse_points(require(f, "positions"), "positions");
    const json& rots = require(f, "rotations");
    if (!rots.is_array()) schema_error("rotations must be an array");
    frame.rotations.reserve(rots.size());
    for (const auto& r : rots) {
      const auto q = fixed_row<4>(r, "rotations");
      frame.rotations.emplace_back(q[0], q[1], q[2], q[3]);
    }
    doc.trajectory.frames.push_back(std::move(frame));
  }
  if (auto it = j.find("mesh"); it != j.end()) doc.mesh = parse_mesh_json(*it);
  normalize_rotations(doc.trajectory);
  return doc;
}

std::string to_motion_json(const MotionDocument& doc) {
  json j;
  write_common(j, doc);
  json frames = json::array();
  for (const auto& f : doc.trajectory.frames) {
    json pos = json::array();
    for (const auto& p : f.positions) pos.push_back(vec_json(p));
    json rot = json::array();
    for (const auto& q : f.rotations) rot.push_back(quat_json(q));
    frames.push_back(json{{"positions", std::move(pos)}, {"rotations", std::move(rot)}});
  }
  j["frames"] = std::move(frames);
  if (doc.mesh) j["mesh"] = mesh_json(*doc.mesh);
  return j.dump();
}

MotionDocument parse_motion_binary(std::string_view bytes) {
  ByteReader in(bytes);
  if (in.raw(4) != kBinaryMagic) throw ParseError("bad magic, expected MFT1", 0);
  const std::uint32_t header_len = in.u32();
  const std::size_t header_at = in.position();
  const std::string_view header_text = in.raw(header_len);
  json header;
  try {
    header = json::parse(header_text.begin(), header_text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed binary header: ") + e.what(), header_at + e.byte);
  }

  MotionDocument doc;
  parse_common(header, doc);
  const std::size_t T = checked_count(header, "num_frames");
  const std::size_t J = checked_count(header, "num_joints");
  std::size_t F = 0, V = 0;
  const bool has_mesh = header.contains("mesh");
  if (has_mesh) {
    F = checked_count(header["mesh"], "num_faces");
    V = checked_count(header["mesh"], "num_vertices");
  }
  const std::size_t expected = 4 * (T * J * 7 + F * 3 + T * V * 3);
  if (in.remaining() != expected) {
    throw ParseError("binary payload has " + std::to_string(in.remaining()) +
                         " bytes, header implies " + std::to_string(expected),
                     in.position());
  }

  auto& frames = doc.trajectory.frames;
  frames.resize(T);
  for (auto& f : frames) {
    f.positions.resize(J);
    f.rotations.resize(J);
  }
  for (auto& f : frames) {
    for (auto& p : f.positions) {
      const double x = in.f32(), y = in.f32(), z = in.f32();
      p = Vec3(x, y, z);
    }
  }
  for (auto& f : frames) {
    for (auto& q : f.rotations) {
      const double w = in.f32(), x = in.f32(), y = in.f32(), z = in.f32();
      q = Quat(w, x, y, z);
    }
  }
  if (has_mesh) {
    MeshSequence mesh;
    mesh.faces.resize(F);
    for (auto& face : mesh.faces) {
      for (auto& idx : face) idx = in.u32();
    }
    mesh.vertex_frames.assign(T, std::vector<Vec3>(V));
    for (auto& verts : mesh.vertex_frames) {
      for (auto& v : verts) {
        const double x = in.f32(), y = in.f32(), z = in.f32();
        v = Vec3(x, y, z);
      }
    }
    doc.mesh = std::move(mesh);
  }
  normalize_rotations(doc.trajectory);
  return doc;
}

std::string to_motion_binary(const MotionDocument& doc) {
  const auto& traj = doc.trajectory;
  const std::size_t T = traj.num_frames();
  const std::size_t J = doc.joint_names.size();
  for (const auto& f : traj.frames) {
    if (f.positions.size() != J || f.rotations.size() != J) {
      throw Error("cannot write binary trajectory: ragged frames");
    }
  }
  json header;
  write_common(header, doc);
  header["num_frames"] = T;
  header["num_joints"] = J;
  if (doc.mesh) {
    if (doc.mesh->num_frames() != T) {
      throw Error("cannot write binary trajectory: mesh frame count differs");
    }
    header["mesh"] = json{{"num_faces", doc.mesh->num_faces()},
                          {"num_vertices", doc.mesh->num_vertices()}};
  }
  const std::string header_text = header.dump();

  ByteWriter out;
  out.raw(kBinaryMagic);
  out.u32(static_cast<std::uint32_t>(header_text.size()));
  out.raw(header_text);
  for (const auto& f : traj.frames) {
    for (const auto& p : f.positions) {
      out.f32(p.x());
      out.f32(p.y());
      out.f32(p.z());
    }
  }
  for (const auto& f : traj.frames) {
    for (const auto& q : f.rotations) {
      out.f32(q.w());
      out.f32(q.x());
      out.f32(q.y());
      out.f32(q.z());
    }
  }
  if (doc.mesh) {
    for (const auto& face : doc.mesh->faces) {
      for (auto idx : face) out.u32(idx);
    }
    const std::size_t V = doc.mesh->num_vertices();
    for (const auto& verts : doc.mesh->vertex_frames) {
      if (verts.size() != V) throw Error("cannot write binary trajectory: ragged mesh frames");
      for (const auto& v : verts) {
        out.f32(v.x());
        out.f32(v.y());
        out.f32(v.z());
      }
    }
  }
  return out.take();
}

MotionDocument parse_motion(std::string_view bytes) {
  if (bytes.starts_with(kBinaryMagic)) return parse_motion_binary(bytes);
  return parse_motion_json(bytes);
}

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return buf.str();
}

MotionDocument read_motion_file(const std::filesystem::path& path) {
  return parse_motion(read_file_bytes(path));
}

void write_motion_file(const std::filesystem::path& path, const MotionDocument& doc,
                       bool binary) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << (binary ? to_motion_binary(doc) : to_motion_json(doc));
  if (!out) throw IoError("error writing " + path.string());
}

MeshSequence read_mesh_file(const std::filesystem::path& path) {
  const std::string bytes = read_file_bytes(path);
  if (!bytes.starts_with(kBinaryMagic)) {
    json j;
    try {
      j = json::parse(bytes);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
    }
    if (j.is_object() && j.contains("faces")) return parse_mesh_json(j);
  }
  MotionDocument doc = parse_motion(bytes);
  if (!doc.mesh) throw ParseError("file " + path.string() + " carries no mesh");
  return std::move(*doc.mesh);
}

BodyModel body_for_document(const MotionDocument& doc) {
  BodyModel body = (doc.joint_names == smplx_joint_names() && doc.parents == smplx_parents())
                       ? smplx_body()
                       : make_body_model(doc.joint_names, doc.parents);
  if (doc.foot_vertex_sets) body.foot_vertices = *doc.foot_vertex_sets;
  for (const auto& [joint, range] : doc.joint_limits) {
    auto j = body.find_joint(joint);
    if (!j) schema_error("joint_limits names unknown joint '" + joint + "'");
    body.joint_limits[*j] = range;
  }
  return body;
}

}  // namespace motionfeas
