#pragma once

#include "fveasm/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace fveasm {

/// Structured triangulation of the unit square: n x n cells, each cut by the
/// diagonal running from its lower-left to its upper-right corner.
///
/// Vertices are numbered row-major, (i, j) -> j * (n + 1) + i. Free
/// (non-boundary) vertices get contiguous DOF indices in the same order.
struct TriangleMesh {
  static constexpr const char* diagonal = "lower-left to upper-right";

  int n = 0;
  double h = 0.0;
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<bool> boundary;
  std::vector<int> free_index;  // -1 on the boundary
  int free_count = 0;

  int vertex_at(int i, int j) const { return j * (n + 1) + i; }
  double area(int triangle) const;
  Point centroid(int triangle) const;
  /// Constant gradients of the three P1 shape functions on a triangle.
  std::array<Point, 3> gradients(int triangle) const;
};

TriangleMesh build_structured_mesh(int n);

/// One midpoint-to-centroid piece of the boundary of a Donald control volume,
/// restricted to a single triangle.
struct DualSegment {
  int triangle = 0;
  int owner_local = 0;  // 0..2, position of the owner within the triangle
  int owner_vertex = 0;
  Point begin;  // edge midpoint
  Point end;    // centroid
  Point midpoint;
  Point normal;  // outward from the owner's region, |normal| = segment length
};

/// Six segments per triangle, two per owning vertex, in triangle order.
std::vector<DualSegment> dual_segments(const TriangleMesh& mesh);

/// Donald control-volume areas, one per vertex (|tau| / 3 per incident triangle).
std::vector<double> control_volume_areas(const TriangleMesh& mesh);

std::string mesh_summary(const TriangleMesh& mesh);

}  // namespace fveasm
