#include "fveasm/mesh.hpp"

#include <sstream>
#include <stdexcept>

namespace fveasm {

double TriangleMesh::area(int triangle) const {
  const auto& t = triangles[triangle];
  const Point a = vertices[t[0]];
  return 0.5 * cross(vertices[t[1]] - a, vertices[t[2]] - a);
}

Point TriangleMesh::centroid(int triangle) const {
  const auto& t = triangles[triangle];
  return (1.0 / 3.0) * (vertices[t[0]] + vertices[t[1]] + vertices[t[2]]);
}

std::array<Point, 3> TriangleMesh::gradients(int triangle) const {
  const auto& t = triangles[triangle];
  const double twice_area = 2.0 * area(triangle);
  std::array<Point, 3> grads;
  for (int k = 0; k < 3; ++k) {
    // grad phi_k is the inward normal of the opposite edge over twice the area
    const Point p = vertices[t[(k + 1) % 3]];
    const Point q = vertices[t[(k + 2) % 3]];
    grads[k] = {(p.y - q.y) / twice_area, (q.x - p.x) / twice_area};
  }
  return grads;
}

TriangleMesh build_structured_mesh(int n) {
  if (n < 2) {
    throw std::invalid_argument("build_structured_mesh: n must be >= 2, got " +
                                std::to_string(n));
  }
  TriangleMesh mesh;
  mesh.n = n;
  mesh.h = 1.0 / n;

  const int side = n + 1;
  mesh.vertices.reserve(side * side);
  mesh.boundary.reserve(side * side);
  mesh.free_index.reserve(side * side);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
      const bool on_boundary = i == 0 || j == 0 || i == n || j == n;
      mesh.boundary.push_back(on_boundary);
      mesh.free_index.push_back(on_boundary ? -1 : mesh.free_count++);
    }
  }

  mesh.triangles.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = mesh.vertex_at(i, j);
      const int v10 = mesh.vertex_at(i + 1, j);
      const int v11 = mesh.vertex_at(i + 1, j + 1);
      const int v01 = mesh.vertex_at(i, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
  return mesh;
}

std::vector<DualSegment> dual_segments(const TriangleMesh& mesh) {
  std::vector<DualSegment> segments;
  segments.reserve(6 * mesh.triangles.size());
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[t];
    const Point c = mesh.centroid(t);
    for (int j = 0; j < 3; ++j) {
      const Point xj = mesh.vertices[tri[j]];
      for (int step = 1; step <= 2; ++step) {
        const Point xk = mesh.vertices[tri[(j + step) % 3]];
        DualSegment s;
        s.triangle = t;
        s.owner_local = j;
        s.owner_vertex = tri[j];
        s.begin = 0.5 * (xj + xk);
        s.end = c;
        s.midpoint = 0.5 * (s.begin + s.end);
        const Point d = s.end - s.begin;
        s.normal = {d.y, -d.x};
        // the segment lies on the median through the third vertex, which
        // separates x_j from x_k; outward means towards x_k
        if (dot(s.normal, xk - xj) < 0.0) s.normal = -1.0 * s.normal;
        segments.push_back(s);
      }
    }
  }
  return segments;
}

std::vector<double> control_volume_areas(const TriangleMesh& mesh) {
  std::vector<double> areas(mesh.vertices.size(), 0.0);
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const double third = mesh.area(t) / 3.0;
    for (int v : mesh.triangles[t]) areas[v] += third;
  }
  return areas;
}

std::string mesh_summary(const TriangleMesh& mesh) {
  std::ostringstream out;
  out << "n = " << mesh.n << "\n"
      << "h = " << mesh.h << "\n"
      << "vertices = " << mesh.vertices.size() << "\n"
      << "triangles = " << mesh.triangles.size() << "\n"
      << "free_dofs = " << mesh.free_count << "\n"
      << "diagonal = " << TriangleMesh::diagonal << "\n";
  return out.str();
}

}  // namespace fveasm
