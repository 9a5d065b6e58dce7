#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "motionfeas/motion.h"

namespace motionfeas {

inline constexpr double kCoplanarEpsilon = 1e-9;  // m

struct Aabb {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());

  void expand(const Vec3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  void expand(const Aabb& b) {
    lo = lo.cwiseMin(b.lo);
    hi = hi.cwiseMax(b.hi);
  }
  void inflate(double margin) {
    lo.array() -= margin;
    hi.array() += margin;
  }
  bool overlaps(const Aabb& b) const {
    return (lo.array() <= b.hi.array()).all() && (b.lo.array() <= hi.array()).all();
  }
  bool contains(const Aabb& b) const {
    return (lo.array() <= b.lo.array()).all() && (b.hi.array() <= hi.array()).all();
  }
  Vec3 extent() const { return hi - lo; }
};

struct Triangle {
  Vec3 a, b, c;

  const Vec3& operator[](int i) const { return i == 0 ? a : i == 1 ? b : c; }
};

Triangle triangle_of(const Face& face, std::span<const Vec3> vertices);

// Closed intersection test: touching triangles intersect, and coplanar
// triangles intersect iff their regions overlap. Signed distances within
// epsilon of a plane are treated as lying on it. Zero-area triangles never
// intersect.
bool triangles_intersect(const Triangle& t1, const Triangle& t2,
                         double epsilon = kCoplanarEpsilon);

bool share_vertex(const Face& f1, const Face& f2);

// Binary tree of boxes over a triangle set, one triangle per leaf. Nodes
// split at the median centroid along the longest axis of the centroid
// bounds, so construction is deterministic for a given input order.
class TriangleBvh {
 public:
  struct Node {
    Aabb box;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t first = 0;  // into triangle_order()
    std::uint32_t count = 0;  // non-zero only for leaves

    bool is_leaf() const { return count > 0; }
  };

  // Leaf boxes are inflated by `margin` so that pairs the triangle test can
  // accept are never culled.
  static TriangleBvh build(std::span<const Face> faces, std::span<const Vec3> vertices,
                           double margin = kCoplanarEpsilon);

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& root() const { return nodes_.front(); }
  std::span<const std::uint32_t> triangles(const Node& node) const {
    return std::span(order_).subspan(node.first, node.count);
  }
  const std::vector<std::uint32_t>& triangle_order() const { return order_; }
  std::size_t num_triangles() const { return order_.size(); }
  std::size_t num_leaves() const;
  // Edges on the longest root-to-leaf path; a lone leaf has depth 0.
  std::size_t depth() const;

 private:
  std::uint32_t build_node(std::span<const Vec3> centroids, const std::vector<Aabb>& boxes,
                           std::uint32_t first, std::uint32_t count);

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> order_;
};

// Returns true when a face pair must not be counted.
using PairExclusion = std::function<bool(const Face&, const Face&)>;

// Pairs sharing at least one vertex index.
bool exclude_shared_vertex(const Face& f1, const Face& f2);

// Unordered pairs (f1 != f2) of geometrically intersecting triangles that the
// exclusion predicate does not remove.
std::size_t intersecting_pairs(const TriangleBvh& bvh, std::span<const Face> faces,
                               std::span<const Vec3> vertices,
                               const PairExclusion& exclusion = exclude_shared_vertex,
                               double epsilon = kCoplanarEpsilon);

struct SelfPenetration {
  std::vector<double> per_frame;  // percent of F
  double mean = 0.0;
};

// spen_t = 100 * pairs_t / F, averaged over frames. Shared-vertex pairs are
// excluded.
SelfPenetration self_penetration_rate(const MeshSequence& mesh);

using Vec2 = Eigen::Vector2d;

// Convex polygon in the ground plane, counter-clockwise, no collinear
// vertices. Fewer than three vertices encode the empty/point/segment cases.
struct SupportPolygon {
  std::vector<Vec2> vertices;

  bool empty() const { return vertices.empty(); }
  std::size_t size() const { return vertices.size(); }
};

// Monotone chain; ties on x are broken by y.
SupportPolygon convex_hull_2d(std::span<const Vec2> points);

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

// Zero inside or on the boundary of a polygon with at least three vertices,
// otherwise the distance to the nearest edge. Point and segment polygons
// measure to that point/segment. An empty polygon yields +infinity.
double point_polygon_distance(const Vec2& p, const SupportPolygon& polygon);

}  // namespace motionfeas
