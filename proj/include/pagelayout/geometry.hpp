#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pagelayout/errors.hpp"

namespace pagelayout {

// Image-plane coordinates in pixels. Origin is the top-left pixel center,
// x grows to the right and y grows downward.
using Point = Eigen::Vector2d;

struct ImageSize {
  int height = 0;
  int width = 0;

  bool operator==(const ImageSize&) const = default;
};

struct Polyline {
  std::vector<Point> points;

  double length() const;
};

// Implicitly closed ring.
struct Polygon {
  std::vector<Point> ring;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Box {
  Point min{0.0, 0.0};
  Point max{0.0, 0.0};

  bool intersects(const Box& other) const {
    return min.x() <= other.max.x() && other.min.x() <= max.x() &&
           min.y() <= other.max.y() && other.min.y() <= max.y();
  }
};

// Indices into a point array, counterclockwise in the mathematical sense
// (positive signed area).
struct Triangle {
  std::array<int, 3> v{};
};

inline double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

Box bounding_box(std::span<const Point> points);
Interval x_extent(std::span<const Point> points);

double signed_area(std::span<const Point> ring);
double area(const Polygon& polygon);

/// Even-odd point-in-polygon test; points on the boundary may land on
/// either side.
bool contains(std::span<const Point> ring, const Point& p);

double distance_to_segment(const Point& p, const Point& a, const Point& b);
double distance_to_polyline(const Point& p, std::span<const Point> points);
double distance_to_ring(const Point& p, std::span<const Point> ring);

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d);
bool is_simple(std::span<const Point> ring);

double polyline_length(std::span<const Point> points);
Point point_at_arc_length(std::span<const Point> points, double s);
Point polyline_midpoint(std::span<const Point> points);

// Points at arc-length steps 0, step, 2*step, ... plus the final vertex.
std::vector<Point> sample_polyline(std::span<const Point> points, double step);

// Inserts vertices so that no edge of the closed ring is longer than
// max_spacing.
std::vector<Point> densify_ring(std::span<const Point> ring, double max_spacing);

// Length of the intersection of two closed intervals; touching intervals
// do not overlap.
double horizontal_overlap(Interval a, Interval b);

/// Clips `subject` against a convex counterclockwise `clip` polygon.
std::vector<Point> clip_convex(std::span<const Point> subject, std::span<const Point> clip);

/// Area of the intersection of two simple polygons.
///
/// Each polygon is decomposed into signed fan triangles; the intersection
/// area is the signed sum of pairwise convex triangle intersections.
double intersection_area(const Polygon& a, const Polygon& b);

/// Intersection over union by area. Degenerate polygons give 0 and a
/// diagnostic.
double polygon_iou(const Polygon& a, const Polygon& b, Diagnostics* diag = nullptr);

/// Convex hull (monotone chain), counterclockwise, collinear points removed.
Polygon convex_hull(std::span<const Point> points);

/// Delaunay triangulation (Bowyer-Watson). Triangles index into `points`.
/// Exact duplicate points are triangulated once.
std::vector<Triangle> delaunay(std::span<const Point> points);

double circumradius(const Point& a, const Point& b, const Point& c);

/// Delaunay triangles whose circumradius is at most 1/alpha. alpha <= 0 keeps
/// every triangle.
std::vector<Triangle> alpha_complex(std::span<const Point> points, double alpha);

/// Outer boundary of the alpha complex of the input snapped to a 1/16 px
/// lattice. Falls back to the convex hull when
/// the complex is empty, not edge-connected, or its boundary is pinched.
/// Throws std::invalid_argument("degenerate point set") on fewer than three
/// points or collinear input.
Polygon alpha_shape(std::span<const Point> points, double alpha);

// Quarter-turn rotations. `turns` counts 90 degree counterclockwise image
// rotations (as displayed); a pixel (x, y) of an H x W image lands on
// (y, W - 1 - x) of the W x H result for turns = 1.
ImageSize rotated_size(ImageSize size, int turns);
Point rotate90(const Point& p, ImageSize size, int turns);
// Direction vectors rotate without translation: (dx, dy) -> (dy, -dx).
Point rotate_direction(const Point& d, int turns);
int normalize_turns(int turns);

Polyline rotate90(const Polyline& line, ImageSize size, int turns);
Polygon rotate90(const Polygon& polygon, ImageSize size, int turns);

} // namespace pagelayout
