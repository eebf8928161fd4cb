#pragma once

// Planar primitives, Delaunay triangulation, convex hull and Voronoi cells
// clipped to a working rectangle.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "georand/error.hpp"

namespace georand {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
  friend auto operator<=>(const Point2&, const Point2&) = default;
};

inline bool is_finite(const Point2& p) {
  return std::isfinite(p.x) && std::isfinite(p.y);
}

/// Axis-aligned working plane. Construction enforces xmin < xmax and
/// ymin < ymax.
class Rect {
 public:
  Rect() = default;
  Rect(double xmin, double ymin, double xmax, double ymax)
      : xmin_(xmin), ymin_(ymin), xmax_(xmax), ymax_(ymax) {
    if (!(std::isfinite(xmin) && std::isfinite(ymin) && std::isfinite(xmax) &&
          std::isfinite(ymax)) ||
        !(xmin < xmax) || !(ymin < ymax)) {
      std::ostringstream os;
      os << "invalid rectangle (" << xmin << ", " << ymin << ", " << xmax
         << ", " << ymax << ")";
      throw Error(ErrorCode::invalid_argument, os.str());
    }
  }

  double xmin() const { return xmin_; }
  double ymin() const { return ymin_; }
  double xmax() const { return xmax_; }
  double ymax() const { return ymax_; }
  double width() const { return xmax_ - xmin_; }
  double height() const { return ymax_ - ymin_; }
  double area() const { return width() * height(); }

  bool contains_strictly(const Point2& p) const {
    return p.x > xmin_ && p.x < xmax_ && p.y > ymin_ && p.y < ymax_;
  }

  /// Counterclockwise corners starting at (xmin, ymin).
  std::vector<Point2> corners() const {
    return {{xmin_, ymin_}, {xmax_, ymin_}, {xmax_, ymax_}, {xmin_, ymax_}};
  }

  friend bool operator==(const Rect&, const Rect&) = default;

 private:
  double xmin_ = 0.0;
  double ymin_ = 0.0;
  double xmax_ = 20.0;
  double ymax_ = 20.0;
};

namespace detail {

inline constexpr double kEpsilon = 0x1p-53;
// Forward error bounds of the floating-point determinants.
inline constexpr double kOrientBound = (3.0 + 16.0 * kEpsilon) * kEpsilon;
inline constexpr double kIncircleBound = (10.0 + 96.0 * kEpsilon) * kEpsilon;

// Sign of the incircle determinant of (a, b, c, d); positive when d is inside
// the circle through a counterclockwise triangle (a, b, c). Results inside
// the error bound are reported as 0.
inline int incircle_sign(const Point2& a, const Point2& b, const Point2& c,
                         const Point2& d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                     clift * (adxbdy - bdxady);
  const double permanent =
      (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
      (std::abs(cdxady) + std::abs(adxcdy)) * blift +
      (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  const double bound = kIncircleBound * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return 0;
}

inline double cross(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

inline void require_finite(std::span<const Point2> points, const char* op) {
  for (const auto& p : points) {
    if (!is_finite(p)) {
      throw Error(ErrorCode::invalid_argument,
                  std::string(op) + ": non-finite coordinate");
    }
  }
}

}  // namespace detail

/// Orientation of c relative to the directed line a->b: +1 counterclockwise,
/// -1 clockwise, 0 collinear (including determinants too small to resolve in
/// double precision).
inline int orient2d(const Point2& a, const Point2& b, const Point2& c) {
  const double detleft = (a.x - c.x) * (b.y - c.y);
  const double detright = (a.y - c.y) * (b.x - c.x);
  const double det = detleft - detright;
  const double bound =
      detail::kOrientBound * (std::abs(detleft) + std::abs(detright));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return 0;
}

/// True iff d lies strictly inside the circumcircle of triangle (a, b, c).
/// The triangle may be given in either orientation; collinear (a, b, c)
/// throws.
inline bool in_circumcircle(const Point2& a, const Point2& b, const Point2& c,
                            const Point2& d) {
  const int orientation = orient2d(a, b, c);
  if (orientation == 0) {
    throw Error(ErrorCode::degenerate_input,
                "in_circumcircle: triangle vertices are collinear");
  }
  return orientation * detail::incircle_sign(a, b, c, d) > 0;
}

inline double triangle_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * std::abs(detail::cross(a, b, c));
}

/// Shoelace area of a simple polygon, independent of vertex orientation.
inline double polygon_area(std::span<const Point2> vertices) {
  if (vertices.size() < 3) {
    throw Error(ErrorCode::invalid_argument,
                "polygon_area: need at least 3 vertices");
  }
  // Centering on the first vertex keeps the products well conditioned.
  const Point2 origin = vertices[0];
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < vertices.size(); ++i) {
    const double ax = vertices[i].x - origin.x, ay = vertices[i].y - origin.y;
    const double bx = vertices[i + 1].x - origin.x;
    const double by = vertices[i + 1].y - origin.y;
    twice += ax * by - ay * bx;
  }
  return 0.5 * std::abs(twice);
}

/// Closed half-plane {p : (p - point) . inward_normal >= 0}.
struct HalfPlane {
  Point2 point;
  Point2 inward_normal;

  double signed_offset(const Point2& p) const {
    return (p.x - point.x) * inward_normal.x + (p.y - point.y) * inward_normal.y;
  }
};

/// Sutherland-Hodgman clip of a convex counterclockwise polygon. Returns an
/// empty list when the intersection has no interior.
inline std::vector<Point2> clip_convex_by_halfplane(
    std::span<const Point2> poly, const HalfPlane& halfplane) {
  std::vector<Point2> out;
  const std::size_t n = poly.size();
  if (n < 3) return out;
  out.reserve(n + 1);

  auto push = [&out](const Point2& p) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  };

  for (std::size_t i = 0; i < n; ++i) {
    const Point2& cur = poly[i];
    const Point2& nxt = poly[(i + 1) % n];
    const double dc = halfplane.signed_offset(cur);
    const double dn = halfplane.signed_offset(nxt);
    if (dc >= 0.0) push(cur);
    if ((dc > 0.0 && dn < 0.0) || (dc < 0.0 && dn > 0.0)) {
      const double t = dc / (dc - dn);
      push({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
    }
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  if (out.size() < 3 || polygon_area(out) <= 0.0) out.clear();
  return out;
}

/// Counterclockwise convex hull (indices into `points`), starting at the
/// lexicographically smallest point. Points lying on a hull edge are not hull
/// vertices.
inline std::vector<std::uint32_t> convex_hull(std::span<const Point2> points) {
  if (points.size() < 3) {
    throw Error(ErrorCode::degenerate_input,
                "convex_hull: need at least 3 points");
  }
  detail::require_finite(points, "convex_hull");
  std::vector<std::uint32_t> order(points.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return points[a] < points[b] || (points[a] == points[b] && a < b);
  });

  std::vector<std::uint32_t> hull(2 * order.size());
  std::size_t k = 0;
  auto build = [&](auto first, auto last, std::size_t floor) {
    for (auto it = first; it != last; ++it) {
      while (k >= floor &&
             orient2d(points[hull[k - 2]], points[hull[k - 1]], points[*it]) <=
                 0) {
        --k;
      }
      hull[k++] = *it;
    }
  };
  build(order.begin(), order.end(), 2);
  build(order.rbegin() + 1, order.rend(), k + 1);
  hull.resize(k - 1);
  if (hull.size() < 3) {
    throw Error(ErrorCode::degenerate_input,
                "convex_hull: all points are collinear");
  }
  return hull;
}

struct Triangulation {
  std::vector<Point2> points;
  /// Counterclockwise index triples rotated so the smallest index comes
  /// first, listed in ascending order of their sorted triples.
  std::vector<std::array<std::uint32_t, 3>> triangles;
  /// Counterclockwise convex hull (see convex_hull).
  std::vector<std::uint32_t> hull;

  std::size_t n() const { return points.size(); }
  std::size_t hull_size() const { return hull.size(); }

  double area(std::size_t t) const {
    const auto& tri = triangles[t];
    return triangle_area(points[tri[0]], points[tri[1]], points[tri[2]]);
  }

  std::vector<double> areas() const {
    std::vector<double> out(triangles.size());
    for (std::size_t t = 0; t < triangles.size(); ++t) out[t] = area(t);
    return out;
  }
};

namespace detail {

inline constexpr std::uint32_t kGhost = std::numeric_limits<std::uint32_t>::max();
inline constexpr std::int32_t kNoFace = -1;

// Incremental Bowyer-Watson over a triangulation closed by "ghost" faces that
// share one vertex at infinity. The ghost faces play the role of a
// super-triangle pushed to infinity: they are never clipped away, so the hull
// of the result is exactly the hull of the input.
class DelaunayBuilder {
 public:
  explicit DelaunayBuilder(std::span<const Point2> points) : pts_(points) {}

  void build() {
    const auto n = static_cast<std::uint32_t>(pts_.size());
    const std::vector<std::uint32_t> order = insertion_order();

    std::size_t third = 2;
    while (third < n &&
           orient2d(pts_[order[0]], pts_[order[1]], pts_[order[third]]) == 0) {
      ++third;
    }
    if (third == n) {
      throw Error(ErrorCode::degenerate_input,
                  "delaunay: all points are collinear");
    }
    faces_.reserve(2 * static_cast<std::size_t>(n) + 8);
    start_.assign(static_cast<std::size_t>(n) + 1, kNoFace);
    seed_triangle(order[0], order[1], order[third]);
    for (std::size_t i = 2; i < n; ++i) {
      if (i != third) insert(order[i]);
    }
    resolve_cocircular();
  }

  /// Real triangles, rotated to start at their smallest index and listed in
  /// ascending order of their sorted index triples.
  std::vector<std::array<std::uint32_t, 3>> real_triangles() const {
    // Sorted triple packed into 63 bits, top bit set when the rotated
    // triangle reads (min, max, mid).
    if (pts_.size() >= (std::size_t{1} << 21)) return real_triangles_wide();
    std::vector<std::uint64_t> keys;
    keys.reserve(faces_.size());
    for (const auto& f : faces_) {
      if (!f.alive || f.ghost >= 0) continue;
      auto tri = f.v;
      const auto m = std::min_element(tri.begin(), tri.end()) - tri.begin();
      std::rotate(tri.begin(), tri.begin() + m, tri.end());
      const bool flipped = tri[1] > tri[2];
      const std::uint64_t lo = std::min(tri[1], tri[2]);
      const std::uint64_t hi = std::max(tri[1], tri[2]);
      keys.push_back(std::uint64_t{tri[0]} << 42 | lo << 21 | hi |
                     std::uint64_t{flipped} << 63);
    }
    constexpr std::uint64_t kTriple = (std::uint64_t{1} << 63) - 1;
    std::sort(keys.begin(), keys.end(), [](std::uint64_t a, std::uint64_t b) {
      return (a & kTriple) < (b & kTriple);
    });
    std::vector<std::array<std::uint32_t, 3>> out(keys.size());
    constexpr std::uint64_t kMask = (std::uint64_t{1} << 21) - 1;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const auto a = static_cast<std::uint32_t>(keys[i] >> 42 & kMask);
      const auto lo = static_cast<std::uint32_t>(keys[i] >> 21 & kMask);
      const auto hi = static_cast<std::uint32_t>(keys[i] & kMask);
      out[i] = keys[i] >> 63 ? std::array{a, hi, lo} : std::array{a, lo, hi};
    }
    return out;
  }

  std::vector<std::array<std::uint32_t, 3>> real_triangles_wide() const {
    using Triple = std::array<std::uint32_t, 3>;
    std::vector<std::pair<Triple, Triple>> keyed;
    keyed.reserve(faces_.size());
    for (const auto& f : faces_) {
      if (!f.alive || f.ghost >= 0) continue;
      auto tri = f.v;
      const auto m = std::min_element(tri.begin(), tri.end()) - tri.begin();
      std::rotate(tri.begin(), tri.begin() + m, tri.end());
      keyed.push_back({{tri[0], std::min(tri[1], tri[2]), std::max(tri[1], tri[2])},
                       tri});
    }
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Triple> out(keyed.size());
    for (std::size_t i = 0; i < keyed.size(); ++i) out[i] = keyed[i].second;
    return out;
  }

  /// Counterclockwise hull read off the ghost faces, without vertices that
  /// are collinear with their neighbours, starting at the lexicographically
  /// smallest point.
  std::vector<std::uint32_t> hull() const {
    // Ghost face (u, w, inf) carries hull edge u->w; the hull runs w->u.
    std::vector<std::uint32_t> next(pts_.size(), kGhost);
    std::uint32_t any = kGhost;
    for (const auto& f : faces_) {
      if (!f.alive || f.ghost < 0) continue;
      const std::uint32_t u = f.v[(f.ghost + 1) % 3];
      const std::uint32_t w = f.v[(f.ghost + 2) % 3];
      next[w] = u;
      any = w;
    }
    std::vector<std::uint32_t> ring;
    std::uint32_t v = any;
    do {
      ring.push_back(v);
      v = next[v];
    } while (v != any && ring.size() <= pts_.size());

    std::vector<std::uint32_t> strict;
    const std::size_t m = ring.size();
    for (std::size_t i = 0; i < m; ++i) {
      const auto& prev = pts_[ring[(i + m - 1) % m]];
      const auto& nxt = pts_[ring[(i + 1) % m]];
      if (orient2d(prev, pts_[ring[i]], nxt) != 0) strict.push_back(ring[i]);
    }
    const auto first = std::min_element(
        strict.begin(), strict.end(),
        [&](std::uint32_t a, std::uint32_t b) { return pts_[a] < pts_[b]; });
    std::rotate(strict.begin(), first, strict.end());
    return strict;
  }

 private:
  struct Face {
    std::array<std::uint32_t, 3> v;
    // adj[i] is the face across the edge opposite v[i].
    std::array<std::int32_t, 3> adj{kNoFace, kNoFace, kNoFace};
    std::int8_t ghost = -1;  // slot of the vertex at infinity, -1 if none
    bool alive = true;
  };

  struct BoundaryEdge {
    std::uint32_t a;
    std::uint32_t b;
    std::int32_t outside;
  };

  // Points sorted along a Hilbert curve over their bounding box, so each
  // walk starts next to the previous insertion. Ties on the curve index fall
  // back to coordinates, which also puts duplicates side by side.
  std::vector<std::uint32_t> insertion_order() const {
    double xmin = pts_[0].x, xmax = xmin, ymin = pts_[0].y, ymax = ymin;
    for (const auto& p : pts_) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    constexpr std::uint32_t kSide = 1u << 16;
    const double sx = xmax > xmin ? (kSide - 1) / (xmax - xmin) : 0.0;
    const double sy = ymax > ymin ? (kSide - 1) / (ymax - ymin) : 0.0;
    std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(pts_.size());
    for (std::uint32_t i = 0; i < pts_.size(); ++i) {
      auto x = static_cast<std::uint32_t>((pts_[i].x - xmin) * sx);
      auto y = static_cast<std::uint32_t>((pts_[i].y - ymin) * sy);
      std::uint64_t d = 0;
      for (std::uint32_t s = kSide / 2; s > 0; s /= 2) {
        const std::uint32_t rx = (x & s) ? 1 : 0;
        const std::uint32_t ry = (y & s) ? 1 : 0;
        d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
        if (ry == 0) {
          if (rx == 1) {
            x = kSide - 1 - x;
            y = kSide - 1 - y;
          }
          std::swap(x, y);
        }
      }
      keyed[i] = {d, i};
    }
    std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return pts_[a.second] < pts_[b.second] ||
             (pts_[a.second] == pts_[b.second] && a.second < b.second);
    });
    std::vector<std::uint32_t> order(keyed.size());
    for (std::size_t i = 0; i < keyed.size(); ++i) {
      order[i] = keyed[i].second;
      if (i > 0 && pts_[order[i]] == pts_[order[i - 1]]) {
        std::ostringstream os;
        os << "delaunay: duplicate points " << std::min(order[i - 1], order[i])
           << " and " << std::max(order[i - 1], order[i]);
        throw Error(ErrorCode::duplicate_point, os.str());
      }
    }
    return order;
  }

  static bool strictly_between(const Point2& a, const Point2& b,
                               const Point2& p) {
    if (a.x != b.x) {
      return (p.x > std::min(a.x, b.x)) && (p.x < std::max(a.x, b.x));
    }
    return (p.y > std::min(a.y, b.y)) && (p.y < std::max(a.y, b.y));
  }

  bool in_conflict(const Face& f, std::uint32_t q) const {
    const Point2& p = pts_[q];
    if (f.ghost < 0) {
      return incircle_sign(pts_[f.v[0]], pts_[f.v[1]], pts_[f.v[2]], p) > 0;
    }
    // Ghost face (u, w, inf): the hull edge u->w with the exterior on its left.
    const Point2& u = pts_[f.v[(f.ghost + 1) % 3]];
    const Point2& w = pts_[f.v[(f.ghost + 2) % 3]];
    const int o = orient2d(u, w, p);
    if (o != 0) return o > 0;
    return strictly_between(u, w, p);
  }

  std::int32_t new_face(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    Face f;
    f.v = {a, b, c};
    f.ghost = a == kGhost ? 0 : b == kGhost ? 1 : c == kGhost ? 2 : -1;
    if (!free_.empty()) {
      const std::int32_t id = free_.back();
      free_.pop_back();
      faces_[id] = f;
      return id;
    }
    faces_.push_back(f);
    mark_.push_back(0);
    return static_cast<std::int32_t>(faces_.size() - 1);
  }

  // Slot in face f of the edge a->b (the slot of the vertex opposite it).
  int edge_slot(std::int32_t f, std::uint32_t a, std::uint32_t b) const {
    const auto& v = faces_[f].v;
    for (int i = 0; i < 3; ++i) {
      if (v[(i + 1) % 3] == a && v[(i + 2) % 3] == b) return i;
    }
    return -1;
  }

  std::size_t start_slot(std::uint32_t v) const {
    return v == kGhost ? start_.size() - 1 : v;
  }

  void seed_triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    if (orient2d(pts_[a], pts_[b], pts_[c]) < 0) std::swap(b, c);
    const auto t = new_face(a, b, c);
    const auto gab = new_face(b, a, kGhost);
    const auto gbc = new_face(c, b, kGhost);
    const auto gca = new_face(a, c, kGhost);
    faces_[t].adj = {gbc, gca, gab};
    faces_[gab].adj = {gca, gbc, t};
    faces_[gbc].adj = {gab, gca, t};
    faces_[gca].adj = {gbc, gab, t};
    last_ = t;
  }

  std::int32_t locate(std::uint32_t q) const {
    std::int32_t f = last_;
    const Point2& p = pts_[q];
    const std::size_t limit = 4 * faces_.size() + 16;
    for (std::size_t step = 0; step < limit; ++step) {
      const Face& face = faces_[f];
      if (face.ghost >= 0) {
        if (in_conflict(face, q)) return f;
        f = face.adj[face.ghost];  // the real face behind this hull edge
        continue;
      }
      bool moved = false;
      for (int k = 0; k < 3; ++k) {
        const int i = static_cast<int>((k + step) % 3);
        const Point2& a = pts_[face.v[(i + 1) % 3]];
        const Point2& b = pts_[face.v[(i + 2) % 3]];
        if (orient2d(a, b, p) < 0) {
          f = face.adj[i];
          moved = true;
          break;
        }
      }
      if (!moved) {
        if (in_conflict(face, q)) return f;
        break;
      }
    }
    return scan_for_conflict(q);
  }

  std::int32_t scan_for_conflict(std::uint32_t q) const {
    for (std::size_t i = 0; i < faces_.size(); ++i) {
      if (faces_[i].alive && in_conflict(faces_[i], q)) {
        return static_cast<std::int32_t>(i);
      }
    }
    std::ostringstream os;
    os << "delaunay: no conflict region for point " << q;
    throw Error(ErrorCode::degenerate_input, os.str());
  }

  void insert(std::uint32_t q) {
    const std::int32_t seed = locate(q);

    // mark_: 2*epoch for cavity faces, 2*epoch+1 for tested boundary faces.
    epoch_ += 2;
    const std::uint64_t in_cavity = epoch_;
    const std::uint64_t rejected = epoch_ + 1;
    cavity_.clear();
    boundary_.clear();
    mark_[seed] = in_cavity;
    cavity_.push_back(seed);

    for (std::size_t c = 0; c < cavity_.size(); ++c) {
      const std::int32_t f = cavity_[c];
      for (int i = 0; i < 3; ++i) {
        const std::int32_t nb = faces_[f].adj[i];
        if (mark_[nb] == in_cavity) continue;
        if (mark_[nb] != rejected) {
          if (in_conflict(faces_[nb], q)) {
            mark_[nb] = in_cavity;
            cavity_.push_back(nb);
            continue;
          }
          mark_[nb] = rejected;
        }
        boundary_.push_back({faces_[f].v[(i + 1) % 3], faces_[f].v[(i + 2) % 3], nb});
      }
    }

    for (const auto f : cavity_) {
      faces_[f].alive = false;
      free_.push_back(f);
    }

    created_.clear();
    for (const auto& e : boundary_) {
      const std::int32_t nf = new_face(e.a, e.b, q);
      faces_[nf].adj[2] = e.outside;
      faces_[e.outside].adj[edge_slot(e.outside, e.b, e.a)] = nf;
      start_[start_slot(e.a)] = nf;
      created_.push_back(nf);
    }
    // New face (a, b, q) meets (b, *, q) across b->q.
    for (const auto nf : created_) {
      const std::int32_t next = start_[start_slot(faces_[nf].v[1])];
      faces_[nf].adj[0] = next;
      faces_[next].adj[1] = nf;
    }
    last_ = created_.front();
  }

  // Cocircular quadrilaterals keep the diagonal incident to their
  // lowest-indexed vertex, independent of insertion order.
  void resolve_cocircular() {
    const std::size_t limit = 8 * faces_.size() + 16;
    std::size_t flips = 0;
    bool changed = true;
    while (changed && flips < limit) {
      changed = false;
      for (std::size_t fi = 0; fi < faces_.size() && flips < limit; ++fi) {
        const auto f = static_cast<std::int32_t>(fi);
        if (!faces_[f].alive || faces_[f].ghost >= 0) continue;
        for (int i = 0; i < 3; ++i) {
          const std::int32_t g = faces_[f].adj[i];
          if (g < f || faces_[g].ghost >= 0) continue;
          const std::uint32_t c = faces_[f].v[i];
          const std::uint32_t a = faces_[f].v[(i + 1) % 3];
          const std::uint32_t b = faces_[f].v[(i + 2) % 3];
          const int j = edge_slot(g, b, a);
          const std::uint32_t d = faces_[g].v[j];
          if (std::min(c, d) >= std::min(a, b)) continue;
          if (incircle_sign(pts_[c], pts_[a], pts_[b], pts_[d]) != 0) continue;
          if (orient2d(pts_[c], pts_[d], pts_[a]) *
                  orient2d(pts_[c], pts_[d], pts_[b]) >= 0) {
            continue;
          }
          flip(f, i, g, j);
          ++flips;
          changed = true;
          break;
        }
      }
    }
  }

  // Flip the edge shared by f (opposite slot i) and g (opposite slot j).
  void flip(std::int32_t f, int i, std::int32_t g, int j) {
    const std::uint32_t c = faces_[f].v[i];
    const std::uint32_t a = faces_[f].v[(i + 1) % 3];
    const std::uint32_t b = faces_[f].v[(i + 2) % 3];
    const std::uint32_t d = faces_[g].v[j];
    // f = (c, a, b), g = (d, b, a). Outer neighbours:
    const std::int32_t n_ca = faces_[f].adj[(i + 2) % 3];  // across c->a
    const std::int32_t n_bc = faces_[f].adj[(i + 1) % 3];  // across b->c
    const std::int32_t n_db = faces_[g].adj[(j + 2) % 3];  // across d->b
    const std::int32_t n_ad = faces_[g].adj[(j + 1) % 3];  // across a->d
    // New faces: f = (c, a, d), g = (d, b, c).
    faces_[f].v = {c, a, d};
    faces_[f].adj = {n_ad, g, n_ca};
    faces_[g].v = {d, b, c};
    faces_[g].adj = {n_bc, f, n_db};
    faces_[n_ad].adj[edge_slot(n_ad, d, a)] = f;
    faces_[n_bc].adj[edge_slot(n_bc, c, b)] = g;
  }

  std::span<const Point2> pts_;
  std::vector<Face> faces_;
  std::vector<std::int32_t> free_;
  std::vector<std::uint64_t> mark_;
  std::vector<std::int32_t> start_;
  std::vector<std::int32_t> cavity_;
  std::vector<BoundaryEdge> boundary_;
  std::vector<std::int32_t> created_;
  std::uint64_t epoch_ = 0;
  std::int32_t last_ = kNoFace;
};
}  // namespace detail

/// Delaunay triangulation of a planar point set. Throws on fewer than three
/// points, duplicate points, non-finite coordinates, or all-collinear input.
inline Triangulation delaunay(std::span<const Point2> points) {
  if (points.size() < 3) {
    throw Error(ErrorCode::degenerate_input,
                "delaunay: need at least 3 points");
  }
  if (points.size() >= detail::kGhost) {
    throw Error(ErrorCode::invalid_argument, "delaunay: too many points");
  }
  detail::require_finite(points, "delaunay");
  Triangulation t;
  t.points.assign(points.begin(), points.end());
  detail::DelaunayBuilder builder(t.points);
  builder.build();
  t.triangles = builder.real_triangles();
  t.hull = builder.hull();
  return t;
}

struct VoronoiCell {
  std::uint32_t site = 0;
  /// Convex counterclockwise polygon inside the working rectangle.
  std::vector<Point2> vertices;

  double area() const { return polygon_area(vertices); }
};

/// Voronoi cells of `sites` clipped to `bounds`, one per site in site order.
/// Each cell is the rectangle cut by the perpendicular-bisector half-planes
/// toward every other site; a bucket grid limits the cuts to the sites that
/// can still reach the cell.
inline std::vector<VoronoiCell> voronoi_cells(std::span<const Point2> sites,
                                              const Rect& bounds) {
  if (sites.empty()) {
    throw Error(ErrorCode::invalid_argument, "voronoi_cells: no sites");
  }
  detail::require_finite(sites, "voronoi_cells");
  const std::size_t n = sites.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!bounds.contains_strictly(sites[i])) {
      std::ostringstream os;
      os << "voronoi_cells: site " << i << " (" << sites[i].x << ", "
         << sites[i].y << ") is not strictly inside the working rectangle";
      throw Error(ErrorCode::out_of_bounds, os.str());
    }
  }
  {
    std::vector<std::uint32_t> order(n);
    for (std::uint32_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return sites[a] < sites[b];
    });
    for (std::size_t i = 1; i < n; ++i) {
      if (sites[order[i]] == sites[order[i - 1]]) {
        std::ostringstream os;
        os << "voronoi_cells: duplicate sites "
           << std::min(order[i - 1], order[i]) << " and "
           << std::max(order[i - 1], order[i]);
        throw Error(ErrorCode::duplicate_point, os.str());
      }
    }
  }

  const auto side = static_cast<std::size_t>(
      std::max(1.0, std::floor(std::sqrt(static_cast<double>(n) / 2.0))));
  const double cell_w = bounds.width() / static_cast<double>(side);
  const double cell_h = bounds.height() / static_cast<double>(side);
  auto bucket_of = [&](const Point2& p) {
    auto bx = static_cast<std::size_t>((p.x - bounds.xmin()) / cell_w);
    auto by = static_cast<std::size_t>((p.y - bounds.ymin()) / cell_h);
    return std::pair{std::min(bx, side - 1), std::min(by, side - 1)};
  };
  std::vector<std::vector<std::uint32_t>> buckets(side * side);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto [bx, by] = bucket_of(sites[i]);
    buckets[by * side + bx].push_back(i);
  }
  const double ring_step = std::min(cell_w, cell_h);

  std::vector<VoronoiCell> cells(n);
  const auto rect = bounds.corners();
  for (std::uint32_t s = 0; s < n; ++s) {
    const Point2 site = sites[s];
    std::vector<Point2> poly = rect;
    auto reach2 = [&]() {
      double r = 0.0;
      for (const auto& v : poly) {
        const double dx = v.x - site.x, dy = v.y - site.y;
        r = std::max(r, dx * dx + dy * dy);
      }
      return 4.0 * r;  // (2R)^2: farther sites cannot cut the cell
    };
    double limit2 = reach2();
    const auto [bx, by] = bucket_of(site);
    const auto sbx = static_cast<std::ptrdiff_t>(bx);
    const auto sby = static_cast<std::ptrdiff_t>(by);
    const auto iside = static_cast<std::ptrdiff_t>(side);
    for (std::ptrdiff_t ring = 0; ring < iside; ++ring) {
      const double gap = static_cast<double>(ring > 0 ? ring - 1 : 0) * ring_step;
      if (gap * gap >= limit2) break;
      for (std::ptrdiff_t gy = sby - ring; gy <= sby + ring; ++gy) {
        if (gy < 0 || gy >= iside) continue;
        const bool edge_row = (gy == sby - ring || gy == sby + ring);
        for (std::ptrdiff_t gx = sbx - ring; gx <= sbx + ring;
             gx += (edge_row ? 1 : 2 * std::max<std::ptrdiff_t>(ring, 1))) {
          if (gx < 0 || gx >= iside) continue;
          for (const auto o : buckets[static_cast<std::size_t>(gy * iside + gx)]) {
            if (o == s) continue;
            const Point2 other = sites[o];
            const double dx = other.x - site.x, dy = other.y - site.y;
            if (dx * dx + dy * dy >= limit2) continue;
            const HalfPlane h{{0.5 * (site.x + other.x), 0.5 * (site.y + other.y)},
                              {site.x - other.x, site.y - other.y}};
            poly = clip_convex_by_halfplane(poly, h);
            limit2 = reach2();
          }
          if (ring == 0) break;
        }
      }
    }
    cells[s].site = s;
    cells[s].vertices = std::move(poly);
  }
  return cells;
}

}  // namespace georand
