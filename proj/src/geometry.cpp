#include "pagelayout/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace pagelayout {

double Polyline::length() const { return polyline_length(points); }

Box bounding_box(std::span<const Point> points) {
  Box box;
  if (points.empty()) return box;
  box.min = points.front();
  box.max = points.front();
  for (const auto& p : points) {
    box.min = box.min.cwiseMin(p);
    box.max = box.max.cwiseMax(p);
  }
  return box;
}

Interval x_extent(std::span<const Point> points) {
  const Box box = bounding_box(points);
  return {box.min.x(), box.max.x()};
}

double signed_area(std::span<const Point> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) twice += cross(ring[i], ring[(i + 1) % n]);
  return 0.5 * twice;
}

double area(const Polygon& polygon) { return std::abs(signed_area(polygon.ring)); }

bool contains(std::span<const Point> ring, const Point& p) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = ring[i];
    const Point& b = ring[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

double distance_to_segment(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double distance_to_polyline(const Point& p, std::span<const Point> points) {
  if (points.size() == 1) return (p - points.front()).norm();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    best = std::min(best, distance_to_segment(p, points[i], points[i + 1]));
  return best;
}

double distance_to_ring(const Point& p, std::span<const Point> ring) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i)
    best = std::min(best, distance_to_segment(p, ring[i], ring[(i + 1) % n]));
  return best;
}

namespace {

int orientation_sign(const Point& a, const Point& b, const Point& c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

} // namespace

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
  const int o1 = orientation_sign(a, b, c);
  const int o2 = orientation_sign(a, b, d);
  const int o3 = orientation_sign(c, d, a);
  const int o4 = orientation_sign(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

bool is_simple(std::span<const Point> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % n];
    if (a == b) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(a, b, ring[j], ring[(j + 1) % n])) return false;
    }
  }
  return true;
}

double polyline_length(std::span<const Point> points) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) total += (points[i + 1] - points[i]).norm();
  return total;
}

Point point_at_arc_length(std::span<const Point> points, double s) {
  if (points.empty()) return Point::Zero();
  if (s <= 0.0) return points.front();
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double seg = (points[i + 1] - points[i]).norm();
    if (s <= seg && seg > 0.0) return points[i] + (s / seg) * (points[i + 1] - points[i]);
    s -= seg;
  }
  return points.back();
}

Point polyline_midpoint(std::span<const Point> points) {
  return point_at_arc_length(points, 0.5 * polyline_length(points));
}

std::vector<Point> sample_polyline(std::span<const Point> points, double step) {
  std::vector<Point> samples;
  if (points.empty()) return samples;
  samples.push_back(points.front());
  double carried = 0.0; // arc length already walked since the last sample
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Point a = points[i];
    const Point d = points[i + 1] - a;
    const double seg = d.norm();
    if (seg == 0.0) continue;
    double s = step - carried;
    while (s <= seg + 1e-12) {
      samples.push_back(a + (s / seg) * d);
      s += step;
    }
    carried = seg - (s - step);
  }
  if ((samples.back() - points.back()).norm() > 1e-9) samples.push_back(points.back());
  return samples;
}

std::vector<Point> densify_ring(std::span<const Point> ring, double max_spacing) {
  std::vector<Point> out;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % n];
    out.push_back(a);
    const double len = (b - a).norm();
    const int pieces = max_spacing > 0.0 ? static_cast<int>(std::ceil(len / max_spacing)) : 1;
    for (int k = 1; k < pieces; ++k) out.push_back(a + (static_cast<double>(k) / pieces) * (b - a));
  }
  return out;
}

double horizontal_overlap(Interval a, Interval b) {
  return std::max(0.0, std::min(a.hi, b.hi) - std::max(a.lo, b.lo));
}

std::vector<Point> clip_convex(std::span<const Point> subject, std::span<const Point> clip) {
  std::vector<Point> output(subject.begin(), subject.end());
  const std::size_t m = clip.size();
  for (std::size_t i = 0; i < m && !output.empty(); ++i) {
    const Point a = clip[i];
    const Point edge = clip[(i + 1) % m] - a;
    const std::vector<Point> input = std::move(output);
    output.clear();
    const std::size_t n = input.size();
    for (std::size_t j = 0; j < n; ++j) {
      const Point& cur = input[j];
      const Point& prev = input[(j + n - 1) % n];
      const double side_cur = cross(edge, cur - a);
      const double side_prev = cross(edge, prev - a);
      if (side_cur >= 0.0) {
        if (side_prev < 0.0) output.push_back(prev + (side_prev / (side_prev - side_cur)) * (cur - prev));
        output.push_back(cur);
      } else if (side_prev >= 0.0) {
        output.push_back(prev + (side_prev / (side_prev - side_cur)) * (cur - prev));
      }
    }
  }
  return output;
}

namespace {

struct FanTriangle {
  std::array<Point, 3> p;
  double sign;
  Box box;
};

std::vector<FanTriangle> fan(std::span<const Point> ring) {
  std::vector<FanTriangle> out;
  for (std::size_t i = 1; i + 1 < ring.size(); ++i) {
    FanTriangle t{{ring[0], ring[i], ring[i + 1]}, 1.0, {}};
    const double a = signed_area(t.p);
    if (a == 0.0) continue;
    if (a < 0.0) {
      std::swap(t.p[1], t.p[2]);
      t.sign = -1.0;
    }
    t.box = bounding_box(t.p);
    out.push_back(t);
  }
  return out;
}

} // namespace

double intersection_area(const Polygon& a, const Polygon& b) {
  if (a.ring.size() < 3 || b.ring.size() < 3) return 0.0;
  if (!bounding_box(a.ring).intersects(bounding_box(b.ring))) return 0.0;
  const auto fa = fan(a.ring);
  const auto fb = fan(b.ring);
  double total = 0.0;
  for (const auto& ta : fa) {
    for (const auto& tb : fb) {
      if (!ta.box.intersects(tb.box)) continue;
      const auto piece = clip_convex(ta.p, tb.p);
      total += ta.sign * tb.sign * signed_area(piece);
    }
  }
  return std::abs(total);
}

double polygon_iou(const Polygon& a, const Polygon& b, Diagnostics* diag) {
  const double area_a = area(a);
  const double area_b = area(b);
  if (area_a <= 0.0 || area_b <= 0.0) {
    warn(diag, "polygon_iou: degenerate polygon with zero area");
    return 0.0;
  }
  const double inter = intersection_area(a, b);
  const double uni = area_a + area_b - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

Polygon convex_hull(std::span<const Point> points) {
  std::vector<Point> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return Polygon{pts};

  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Point& p = pts[i];
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return Polygon{hull};
}

double circumradius(const Point& a, const Point& b, const Point& c) {
  const double ab = (b - a).norm();
  const double bc = (c - b).norm();
  const double ca = (a - c).norm();
  const double twice_area = std::abs(cross(b - a, c - a));
  if (twice_area == 0.0) return std::numeric_limits<double>::infinity();
  return ab * bc * ca / (2.0 * twice_area);
}

namespace {

// Positive when d lies strictly inside the circumcircle of the
// counterclockwise triangle (a, b, c).
long double incircle(const Point& a, const Point& b, const Point& c, const Point& d) {
  const long double adx = static_cast<long double>(a.x()) - d.x();
  const long double ady = static_cast<long double>(a.y()) - d.y();
  const long double bdx = static_cast<long double>(b.x()) - d.x();
  const long double bdy = static_cast<long double>(b.y()) - d.y();
  const long double cdx = static_cast<long double>(c.x()) - d.x();
  const long double cdy = static_cast<long double>(c.y()) - d.y();
  return (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) +
         (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy) +
         (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
}

struct WorkTriangle {
  int a, b, c;
  Point center;
  double radius2;
  bool alive;
};

WorkTriangle make_work_triangle(const std::vector<Point>& pts, int a, int b, int c) {
  const Point& pa = pts[a];
  const Point bp = pts[b] - pa;
  const Point cp = pts[c] - pa;
  const double d = 2.0 * cross(bp, cp);
  Point center = pa;
  double r2 = std::numeric_limits<double>::infinity();
  if (d != 0.0) {
    const double b2 = bp.squaredNorm();
    const double c2 = cp.squaredNorm();
    const Point rel((cp.y() * b2 - bp.y() * c2) / d, (bp.x() * c2 - cp.x() * b2) / d);
    center = pa + rel;
    r2 = rel.squaredNorm();
  }
  return {a, b, c, center, r2, true};
}

} // namespace

std::vector<Triangle> delaunay(std::span<const Point> points) {
  const int n = static_cast<int>(points.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    const Point& a = points[i];
    const Point& b = points[j];
    if (a.x() != b.x()) return a.x() < b.x();
    if (a.y() != b.y()) return a.y() < b.y();
    return i < j;
  });
  order.erase(std::unique(order.begin(), order.end(),
                          [&](int i, int j) { return points[i] == points[j]; }),
              order.end());
  if (order.size() < 3) return {};

  const Box box = bounding_box(points);
  const Point origin = 0.5 * (box.min + box.max);

  // The enclosing triangle has its vertices n, n+1, n+2 at infinity along
  // counterclockwise directions; circumcircles through them degenerate to
  // half-planes, so no finite enclosing triangle can clip the hull.
  std::array<Point, 3> dir;
  for (int k = 0; k < 3; ++k) {
    const double t = 1.2345678 + k * 2.0 * std::numbers::pi / 3.0;
    dir[k] = Point(std::cos(t), std::sin(t));
  }
  const auto ghost = [&](int v) { return v >= n; };
  const std::vector<Point> pts(points.begin(), points.end());

  const auto in_circle = [&](const WorkTriangle& t, const Point& p) {
    std::array<int, 3> v{t.a, t.b, t.c};
    const int ghosts = ghost(v[0]) + ghost(v[1]) + ghost(v[2]);
    if (ghosts == 0) {
      const double d2 = (p - t.center).squaredNorm();
      if (d2 > t.radius2 * (1.0 + 1e-9)) return false;
      if (d2 < t.radius2 * (1.0 - 1e-9)) return true;
      return incircle(pts[t.a], pts[t.b], pts[t.c], p) > 0.0L;
    }
    if (ghosts == 3) return true;
    // Rotate so the finite vertices come first.
    while (ghost(v[0]) || (ghosts == 1 && ghost(v[1]))) std::rotate(v.begin(), v.begin() + 1, v.end());
    const Point& a = pts[v[0]];
    if (ghosts == 1) {
      const Point& b = pts[v[1]];
      const Point e = b - a;
      double side = cross(e, dir[v[2] - n]);
      if (side == 0.0) side = cross(e, origin - a);
      const double sp = cross(e, p - a);
      if (sp != 0.0) return (sp > 0.0) == (side > 0.0);
      return (p - a).dot(p - b) < 0.0;
    }
    // Two vertices at infinity: the circle tends to the half-plane through a
    // facing the center of the circle through 0, d1, d2.
    const Point& d1 = dir[v[1] - n];
    const Point& d2 = dir[v[2] - n];
    const double den = 2.0 * cross(d1, d2);
    const Point u((d2.y() * d1.squaredNorm() - d1.y() * d2.squaredNorm()) / den,
                  (d1.x() * d2.squaredNorm() - d2.x() * d1.squaredNorm()) / den);
    return (p - a).dot(u) > 0.0;
  };
  const auto make = [&](int a, int b, int c) {
    if (a >= n || b >= n || c >= n) return WorkTriangle{a, b, c, Point::Zero(), 0.0, true};
    return make_work_triangle(pts, a, b, c);
  };

  std::vector<WorkTriangle> tris;
  tris.push_back(make(n, n + 1, n + 2));

  std::vector<std::pair<int, int>> edges;
  for (const int idx : order) {
    const Point& p = pts[idx];
    edges.clear();
    for (auto& t : tris) {
      if (!t.alive || !in_circle(t, p)) continue;
      t.alive = false;
      edges.emplace_back(t.a, t.b);
      edges.emplace_back(t.b, t.c);
      edges.emplace_back(t.c, t.a);
    }
    // Cavity boundary: directed edges whose reverse is not also in the cavity.
    std::map<std::pair<int, int>, int> directed;
    for (const auto& e : edges) ++directed[e];
    for (const auto& e : edges) {
      if (directed.count({e.second, e.first})) continue;
      tris.push_back(make(e.first, e.second, idx));
    }
    if (tris.size() > 64 && tris.size() > 4 * order.size()) {
      std::erase_if(tris, [](const WorkTriangle& t) { return !t.alive; });
    }
  }

  std::vector<Triangle> out;
  for (const auto& t : tris) {
    if (!t.alive || t.a >= n || t.b >= n || t.c >= n) continue;
    out.push_back(Triangle{{t.a, t.b, t.c}});
  }
  return out;
}

std::vector<Triangle> alpha_complex(std::span<const Point> points, double alpha) {
  auto tris = delaunay(points);
  if (alpha <= 0.0) return tris;
  const double radius = 1.0 / alpha;
  std::erase_if(tris, [&](const Triangle& t) {
    return circumradius(points[t.v[0]], points[t.v[1]], points[t.v[2]]) > radius;
  });
  return tris;
}

namespace {

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Outer boundary ring of a set of triangles, or empty when the set is not a
// single edge-connected piece with an unpinched boundary.
std::vector<Point> outer_boundary(std::span<const Point> pts, std::span<const Triangle> tris) {
  std::map<std::pair<int, int>, std::vector<int>> by_edge;
  for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int u = tris[t].v[k];
      const int v = tris[t].v[(k + 1) % 3];
      by_edge[{std::min(u, v), std::max(u, v)}].push_back(t);
    }
  }
  DisjointSet components(tris.size());
  for (const auto& [edge, owners] : by_edge)
    for (std::size_t i = 1; i < owners.size(); ++i) components.unite(owners[0], owners[i]);
  for (std::size_t t = 1; t < tris.size(); ++t)
    if (components.find(static_cast<int>(t)) != components.find(0)) return {};

  std::unordered_map<int, int> next;
  for (const auto& tri : tris) {
    for (int k = 0; k < 3; ++k) {
      const int u = tri.v[k];
      const int v = tri.v[(k + 1) % 3];
      if (by_edge[{std::min(u, v), std::max(u, v)}].size() != 1) continue;
      if (!next.emplace(u, v).second) return {}; // pinched vertex
    }
  }

  std::vector<Point> best;
  double best_area = 0.0;
  std::unordered_map<int, bool> visited;
  std::vector<int> starts;
  for (const auto& [u, v] : next) starts.push_back(u);
  std::sort(starts.begin(), starts.end());
  for (const int start : starts) {
    if (visited[start]) continue;
    std::vector<Point> loop;
    int cur = start;
    do {
      if (visited[cur]) return {};
      visited[cur] = true;
      loop.push_back(pts[cur]);
      const auto it = next.find(cur);
      if (it == next.end()) return {};
      cur = it->second;
    } while (cur != start);
    const double a = std::abs(signed_area(loop));
    if (a > best_area) {
      best_area = a;
      best = std::move(loop);
    }
  }
  return best;
}

} // namespace

Polygon alpha_shape(std::span<const Point> points, double alpha) {
  if (points.size() < 3) throw std::invalid_argument("degenerate point set");
  // Snap to a 1/16 px lattice so the in-circle predicates see exactly
  // representable coordinates.
  std::vector<Point> snapped;
  snapped.reserve(points.size());
  for (const auto& p : points) snapped.emplace_back(std::round(p.x() * 16.0) / 16.0, std::round(p.y() * 16.0) / 16.0);

  Polygon hull = convex_hull(snapped);
  if (hull.ring.size() < 3) throw std::invalid_argument("degenerate point set");

  const auto all = delaunay(snapped);
  double covered = 0.0;
  for (const auto& t : all) covered += std::abs(signed_area(std::array{snapped[t.v[0]], snapped[t.v[1]], snapped[t.v[2]]}));
  const double hull_area = area(hull);
  if (std::abs(covered - hull_area) > 1e-6 * hull_area) return hull; // triangulation failed

  std::vector<Triangle> kept = all;
  if (alpha > 0.0) {
    const double radius = 1.0 / alpha;
    std::erase_if(kept, [&](const Triangle& t) {
      return circumradius(snapped[t.v[0]], snapped[t.v[1]], snapped[t.v[2]]) > radius;
    });
  }
  if (kept.empty()) return hull;
  auto ring = outer_boundary(snapped, kept);
  if (ring.size() < 3) return hull;
  return Polygon{std::move(ring)};
}

int normalize_turns(int turns) { return ((turns % 4) + 4) % 4; }

ImageSize rotated_size(ImageSize size, int turns) {
  return normalize_turns(turns) % 2 == 0 ? size : ImageSize{size.width, size.height};
}

Point rotate90(const Point& p, ImageSize size, int turns) {
  const double h1 = size.height - 1.0;
  const double w1 = size.width - 1.0;
  switch (normalize_turns(turns)) {
  case 1: return {p.y(), w1 - p.x()};
  case 2: return {w1 - p.x(), h1 - p.y()};
  case 3: return {h1 - p.y(), p.x()};
  default: return p;
  }
}

Point rotate_direction(const Point& d, int turns) {
  switch (normalize_turns(turns)) {
  case 1: return {d.y(), -d.x()};
  case 2: return {-d.x(), -d.y()};
  case 3: return {-d.y(), d.x()};
  default: return d;
  }
}

Polyline rotate90(const Polyline& line, ImageSize size, int turns) {
  Polyline out;
  out.points.reserve(line.points.size());
  for (const auto& p : line.points) out.points.push_back(rotate90(p, size, turns));
  return out;
}

Polygon rotate90(const Polygon& polygon, ImageSize size, int turns) {
  Polygon out;
  out.ring.reserve(polygon.ring.size());
  for (const auto& p : polygon.ring) out.ring.push_back(rotate90(p, size, turns));
  return out;
}

} // namespace pagelayout
