#include "motionfeas/geometry.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace motionfeas {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double orient2(const Vec2& a, const Vec2& b, const Vec2& c) { return cross2(b - a, c - a); }

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool segments_intersect_2d(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const double d1 = orient2(q1, q2, p1);
  const double d2 = orient2(q1, q2, p2);
  const double d3 = orient2(p1, p2, q1);
  const double d4 = orient2(p1, p2, q2);
  if (sign(d1) * sign(d2) < 0 && sign(d3) * sign(d4) < 0) return true;
  if (d1 == 0.0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0.0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0.0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0.0 && on_segment(p1, p2, q2)) return true;
  return false;
}

bool point_in_triangle_2d(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  const double d1 = orient2(a, b, p);
  const double d2 = orient2(b, c, p);
  const double d3 = orient2(c, a, p);
  const bool has_neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
  const bool has_pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
  return !(has_neg && has_pos);
}

bool coplanar_overlap(const Triangle& t1, const Triangle& t2, const Vec3& normal) {
  // Drop the dominant normal axis and work in the remaining two.
  int drop = 0;
  normal.cwiseAbs().maxCoeff(&drop);
  const int u = drop == 0 ? 1 : 0;
  const int v = drop == 2 ? 1 : 2;
  std::array<Vec2, 3> a, b;
  for (int i = 0; i < 3; ++i) {
    a[i] = Vec2(t1[i][u], t1[i][v]);
    b[i] = Vec2(t2[i][u], t2[i][v]);
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (segments_intersect_2d(a[i], a[(i + 1) % 3], b[j], b[(j + 1) % 3])) return true;
    }
  }
  return point_in_triangle_2d(a[0], b[0], b[1], b[2]) ||
         point_in_triangle_2d(b[0], a[0], a[1], a[2]);
}

struct Interval {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double x) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
};

// Projection onto `dir` of the part of `t` lying on the other triangle's
// plane, given snapped signed distances.
Interval plane_section(const Triangle& t, const std::array<double, 3>& d, const Vec3& dir) {
  Interval out;
  for (int i = 0; i < 3; ++i) {
    if (d[i] == 0.0) out.add(dir.dot(t[i]));
    const int j = (i + 1) % 3;
    if ((d[i] < 0.0 && d[j] > 0.0) || (d[i] > 0.0 && d[j] < 0.0)) {
      const double s = d[i] / (d[i] - d[j]);
      out.add(dir.dot(t[i] + s * (t[j] - t[i])));
    }
  }
  return out;
}

// Signed distances of `t`'s vertices to the plane (n, p0), with |d| <= eps
// snapped to zero. Returns false if all three lie strictly on one side.
bool plane_distances(const Triangle& t, const Vec3& n, const Vec3& p0, double eps,
                     std::array<double, 3>& d) {
  for (int i = 0; i < 3; ++i) {
    d[i] = n.dot(t[i] - p0);
    if (std::abs(d[i]) <= eps) d[i] = 0.0;
  }
  const bool all_pos = d[0] > 0.0 && d[1] > 0.0 && d[2] > 0.0;
  const bool all_neg = d[0] < 0.0 && d[1] < 0.0 && d[2] < 0.0;
  return !(all_pos || all_neg);
}

}  // namespace

Triangle triangle_of(const Face& face, std::span<const Vec3> vertices) {
  return Triangle{vertices[face[0]], vertices[face[1]], vertices[face[2]]};
}

bool triangles_intersect(const Triangle& t1, const Triangle& t2, double eps) {
  Vec3 n1 = (t1.b - t1.a).cross(t1.c - t1.a);
  Vec3 n2 = (t2.b - t2.a).cross(t2.c - t2.a);
  const double len1 = n1.norm();
  const double len2 = n2.norm();
  if (len1 == 0.0 || len2 == 0.0) return false;
  n1 /= len1;
  n2 /= len2;

  std::array<double, 3> d1{}, d2{};
  if (!plane_distances(t1, n2, t2.a, eps, d1)) return false;
  if (!plane_distances(t2, n1, t1.a, eps, d2)) return false;

  if (d1[0] == 0.0 && d1[1] == 0.0 && d1[2] == 0.0) return coplanar_overlap(t1, t2, n1);

  Vec3 dir = n1.cross(n2);
  const double dir_len = dir.norm();
  // Planes parallel but both triangles within eps of the other's plane.
  if (dir_len < 1e-12) return coplanar_overlap(t1, t2, n1);
  dir /= dir_len;

  const Interval i1 = plane_section(t1, d1, dir);
  const Interval i2 = plane_section(t2, d2, dir);
  return i1.lo <= i2.hi + eps && i2.lo <= i1.hi + eps;
}

bool share_vertex(const Face& f1, const Face& f2) {
  for (auto a : f1) {
    for (auto b : f2) {
      if (a == b) return true;
    }
  }
  return false;
}

bool exclude_shared_vertex(const Face& f1, const Face& f2) { return share_vertex(f1, f2); }

TriangleBvh TriangleBvh::build(std::span<const Face> faces, std::span<const Vec3> vertices,
                               double margin) {
  if (faces.empty()) throw GeometryError("cannot build a BVH over an empty mesh");
  const std::size_t V = vertices.size();
  std::vector<Vec3> centroids(faces.size());
  std::vector<Aabb> boxes(faces.size());
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const Face& f = faces[i];
    if (f[0] >= V || f[1] >= V || f[2] >= V) {
      throw GeometryError("face " + std::to_string(i) + " references a missing vertex");
    }
    for (auto idx : f) boxes[i].expand(vertices[idx]);
    boxes[i].inflate(margin);
    centroids[i] = (vertices[f[0]] + vertices[f[1]] + vertices[f[2]]) / 3.0;
  }

  TriangleBvh bvh;
  bvh.order_.resize(faces.size());
  std::iota(bvh.order_.begin(), bvh.order_.end(), 0u);
  bvh.nodes_.reserve(2 * faces.size());
  bvh.build_node(centroids, boxes, 0, static_cast<std::uint32_t>(faces.size()));
  return bvh;
}

std::uint32_t TriangleBvh::build_node(std::span<const Vec3> centroids,
                                      const std::vector<Aabb>& boxes, std::uint32_t first,
                                      std::uint32_t count) {
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();

  Aabb box, centroid_box;
  for (std::uint32_t i = first; i < first + count; ++i) {
    box.expand(boxes[order_[i]]);
    centroid_box.expand(centroids[order_[i]]);
  }
  nodes_[index].box = box;

  if (count == 1) {
    nodes_[index].first = first;
    nodes_[index].count = 1;
    return index;
  }

  int axis = 0;
  centroid_box.extent().maxCoeff(&axis);
  const std::uint32_t half = count / 2;
  auto begin = order_.begin() + first;
  // Index tie-break makes the partition independent of nth_element's
  // internal ordering.
  std::nth_element(begin, begin + half, begin + count,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = centroids[a][axis];
                     const double cb = centroids[b][axis];
                     return ca < cb || (ca == cb && a < b);
                   });
  const std::uint32_t left = build_node(centroids, boxes, first, half);
  const std::uint32_t right = build_node(centroids, boxes, first + half, count - half);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

std::size_t TriangleBvh::num_leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

std::size_t TriangleBvh::depth() const {
  std::size_t best = 0;
  std::vector<std::pair<std::uint32_t, std::size_t>> stack = {{0, 0}};
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (!nodes_[i].is_leaf()) {
      stack.emplace_back(nodes_[i].left, d + 1);
      stack.emplace_back(nodes_[i].right, d + 1);
    }
  }
  return best;
}

namespace {

class PairCounter {
 public:
  PairCounter(const TriangleBvh& bvh, std::span<const Face> faces,
              std::span<const Vec3> vertices, const PairExclusion& exclusion, double eps)
      : bvh_(bvh), faces_(faces), vertices_(vertices), exclusion_(exclusion), eps_(eps) {}

  std::size_t run() {
    within(0);
    return count_;
  }

 private:
  using Node = TriangleBvh::Node;

  void within(std::uint32_t n) {
    const Node& node = bvh_.nodes()[n];
    if (node.is_leaf()) return;
    within(node.left);
    within(node.right);
    across(node.left, node.right);
  }

  void across(std::uint32_t a, std::uint32_t b) {
    const Node& na = bvh_.nodes()[a];
    const Node& nb = bvh_.nodes()[b];
    if (!na.box.overlaps(nb.box)) return;
    if (na.is_leaf() && nb.is_leaf()) {
      for (auto i : bvh_.triangles(na)) {
        for (auto j : bvh_.triangles(nb)) test(i, j);
      }
      return;
    }
    if (na.is_leaf()) {
      across(a, nb.left);
      across(a, nb.right);
    } else {
      across(na.left, b);
      across(na.right, b);
    }
  }

  void test(std::uint32_t i, std::uint32_t j) {
    const Face& fi = faces_[i];
    const Face& fj = faces_[j];
    if (exclusion_ && exclusion_(fi, fj)) return;
    if (triangles_intersect(triangle_of(fi, vertices_), triangle_of(fj, vertices_), eps_)) {
      ++count_;
    }
  }

  const TriangleBvh& bvh_;
  std::span<const Face> faces_;
  std::span<const Vec3> vertices_;
  const PairExclusion& exclusion_;
  double eps_;
  std::size_t count_ = 0;
};

}  // namespace

std::size_t intersecting_pairs(const TriangleBvh& bvh, std::span<const Face> faces,
                               std::span<const Vec3> vertices, const PairExclusion& exclusion,
                               double epsilon) {
  if (bvh.num_triangles() != faces.size()) {
    throw GeometryError("BVH was built over a different face set");
  }
  return PairCounter(bvh, faces, vertices, exclusion, epsilon).run();
}

SelfPenetration self_penetration_rate(const MeshSequence& mesh) {
  SelfPenetration out;
  const double F = static_cast<double>(mesh.num_faces());
  if (mesh.faces.empty()) throw GeometryError("mesh has no faces");
  out.per_frame.reserve(mesh.num_frames());
  for (const auto& verts : mesh.vertex_frames) {
    const TriangleBvh bvh = TriangleBvh::build(mesh.faces, verts);
    const auto pairs = intersecting_pairs(bvh, mesh.faces, verts);
    out.per_frame.push_back(100.0 * static_cast<double>(pairs) / F);
  }
  double sum = 0.0;
  for (double v : out.per_frame) sum += v;
  out.mean = out.per_frame.empty() ? 0.0 : sum / static_cast<double>(out.per_frame.size());
  return out;
}

SupportPolygon convex_hull_2d(std::span<const Vec2> input) {
  std::vector<Vec2> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return SupportPolygon{std::move(pts)};

  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && orient2(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec2& p = pts[i];
    while (k >= lower && orient2(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return SupportPolygon{std::move(hull)};
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

double point_polygon_distance(const Vec2& p, const SupportPolygon& polygon) {
  const auto& v = polygon.vertices;
  switch (v.size()) {
    case 0: return std::numeric_limits<double>::infinity();
    case 1: return (p - v[0]).norm();
    case 2: return point_segment_distance(p, v[0], v[1]);
    default: break;
  }
  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % v.size()];
    if (orient2(a, b, p) < 0.0) inside = false;
    best = std::min(best, point_segment_distance(p, a, b));
  }
  return inside ? 0.0 : best;
}

}  // namespace motionfeas
