#include "fveasm/decomposition.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

using namespace fveasm;

namespace {

Vector random_vector(Index n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = dist(gen);
  return v;
}

Vector scatter_closure(const Partition& p, int k, const Vector& closure, Index size) {
  Vector u = Vector::Zero(size);
  const auto dofs = closure_dofs(p, k);
  for (std::size_t q = 0; q < dofs.size(); ++q) u(dofs[q]) = closure(static_cast<Index>(q));
  return u;
}

}  // namespace

TEST_CASE("partition counts") {
  const auto mesh = build_structured_mesh(16);
  const auto p = build_partition(mesh, 4);
  CHECK(p.N == 4);
  CHECK(p.H_over_h == 4);
  CHECK(p.subdomains.size() == 16);
  CHECK(p.edges.size() == 24);
  CHECK(p.crosspoints.size() == 9);
  for (const auto& sd : p.subdomains) {
    CHECK(sd.interior.size() == 9);
    CHECK(sd.triangles.size() == 32);
  }
  for (const auto& e : p.edges) CHECK(e.dofs.size() == 3);
}

TEST_CASE("misaligned or degenerate partitions are rejected") {
  const auto mesh = build_structured_mesh(12);
  CHECK_THROWS_AS(build_partition(mesh, 5), std::invalid_argument);
  CHECK_THROWS_AS(build_partition(mesh, 12), std::invalid_argument);
  CHECK_NOTHROW(build_partition(mesh, 6));
}

TEST_CASE("DOF classes partition the free DOFs") {
  const auto mesh = build_structured_mesh(16);
  const auto p = build_partition(mesh, 4);
  std::vector<int> hits(mesh.free_count, 0);
  for (int k = 0; k < 16; ++k)
    for (int d : p.subdomains[k].interior) {
      ++hits[d];
      CHECK(p.dof_class[d].kind == DofKind::interior);
      CHECK(p.dof_class[d].owner == k);
    }
  for (int e = 0; e < static_cast<int>(p.edges.size()); ++e)
    for (int d : p.edges[e].dofs) {
      ++hits[d];
      CHECK(p.dof_class[d].kind == DofKind::edge);
      CHECK(p.dof_class[d].owner == e);
    }
  for (int c = 0; c < static_cast<int>(p.crosspoints.size()); ++c) {
    ++hits[p.crosspoints[c]];
    CHECK(p.dof_class[p.crosspoints[c]].kind == DofKind::crosspoint);
    CHECK(p.crosspoint_of_vertex(p.crosspoint_vertex[c]) == c);
  }
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK(p.crosspoint_of_vertex(mesh.vertex_at(1, 1)) == -1);
}

TEST_CASE("every triangle lies in exactly one subdomain") {
  const auto mesh = build_structured_mesh(16);
  const auto p = build_partition(mesh, 8);
  std::vector<int> owner(mesh.triangles.size(), -1);
  for (int k = 0; k < static_cast<int>(p.subdomains.size()); ++k) {
    const double x0 = p.subdomains[k].ix / 8.0;
    const double y0 = p.subdomains[k].iy / 8.0;
    for (int t : p.subdomains[k].triangles) {
      CHECK(owner[t] == -1);
      owner[t] = k;
      for (int v : mesh.triangles[t]) {
        CHECK(mesh.vertices[v].x >= x0 - 1e-14);
        CHECK(mesh.vertices[v].x <= x0 + 0.125 + 1e-14);
        CHECK(mesh.vertices[v].y >= y0 - 1e-14);
        CHECK(mesh.vertices[v].y <= y0 + 0.125 + 1e-14);
      }
    }
  }
  CHECK(std::count(owner.begin(), owner.end(), -1) == 0);
}

TEST_CASE("edges run between neighbouring subdomains") {
  const auto mesh = build_structured_mesh(8);
  const auto p = build_partition(mesh, 2);
  for (const auto& e : p.edges) {
    const auto& a = p.subdomains[e.first];
    const auto& b = p.subdomains[e.second];
    CHECK(e.first < e.second);
    CHECK(std::abs(a.ix - b.ix) + std::abs(a.iy - b.iy) == 1);
    // ordered from one corner to the other
    const Point start = mesh.vertices[e.corner_begin];
    double last = -1.0;
    for (int d : e.dofs) {
      const auto it = std::find(mesh.free_index.begin(), mesh.free_index.end(), d);
      const Point q = mesh.vertices[static_cast<std::size_t>(it - mesh.free_index.begin())];
      const double dist = std::hypot(q.x - start.x, q.y - start.y);
      CHECK(dist > last);
      last = dist;
    }
  }
}

TEST_CASE("harmonic extension has zero interior residual and minimal energy") {
  const auto mesh = build_structured_mesh(16);
  const auto fem = assemble_fem(mesh, checkerboard_field(10, 1e3, 4));
  const auto p = build_partition(mesh, 4);
  const HarmonicExtender ext(p, fem);
  for (int k : {0, 5, 15}) {
    const auto& sd = p.subdomains[k];
    const Vector boundary = random_vector(static_cast<Index>(sd.interface.size()), 3 + k);
    const Vector closure = harmonic_extend(ext, k, boundary);
    CHECK((closure.tail(boundary.size()) - boundary).norm() == 0.0);
    const Vector u = scatter_closure(p, k, closure, mesh.free_count);
    const Vector au = fem.matrix * u;
    for (int d : sd.interior) CHECK(std::abs(au(d)) < 1e-10 * au.cwiseAbs().maxCoeff());

    const double energy = u.dot(au);
    for (unsigned trial = 0; trial < 5; ++trial) {
      Vector w = u;
      const Vector bump = random_vector(static_cast<Index>(sd.interior.size()), 100 + trial);
      for (std::size_t q = 0; q < sd.interior.size(); ++q) w(sd.interior[q]) += 0.1 * bump(static_cast<Index>(q));
      CHECK(w.dot(fem.matrix * w) > energy);
    }
  }
}

TEST_CASE("local stiffness matches the closure block for one subdomain") {
  const auto mesh = build_structured_mesh(8);
  const auto coeff = smooth_field(10);
  const auto fem = assemble_fem(mesh, coeff);
  const auto p = build_partition(mesh, 2);
  const auto dofs = closure_dofs(p, 0);
  const DenseMatrix local(subdomain_stiffness(mesh, coeff, p, 0));
  const DenseMatrix global(fem.matrix);
  const auto n_interior = static_cast<Index>(p.subdomains[0].interior.size());
  // interior rows see only this subdomain's triangles
  for (Index i = 0; i < n_interior; ++i)
    for (std::size_t j = 0; j < dofs.size(); ++j)
      CHECK(local(i, static_cast<Index>(j)) == doctest::Approx(global(dofs[i], dofs[j])));
}

TEST_CASE("coarse basis: nodal at crosspoints, linear on edges") {
  const auto mesh = build_structured_mesh(16);
  const auto fem = assemble_fem(mesh, smooth_field(1));
  const auto p = build_partition(mesh, 4);
  const HarmonicExtender ext(p, fem);
  const DenseMatrix phi(coarse_basis(ext));
  REQUIRE(phi.cols() == static_cast<Index>(p.crosspoints.size()));
  for (std::size_t c = 0; c < p.crosspoints.size(); ++c)
    for (std::size_t d = 0; d < p.crosspoints.size(); ++d)
      CHECK(phi(p.crosspoints[d], static_cast<Index>(c)) == (c == d ? 1.0 : 0.0));

  // partition of unity on the interface away from the boundary: edge values of
  // all coarse functions add up to the linear interpolant of 1 between crosspoints
  for (const auto& e : p.edges) {
    const bool begins_at_crosspoint = p.crosspoint_of_vertex(e.corner_begin) >= 0;
    const bool ends_at_crosspoint = p.crosspoint_of_vertex(e.corner_end) >= 0;
    const auto m = static_cast<double>(e.dofs.size() + 1);
    for (std::size_t q = 0; q < e.dofs.size(); ++q) {
      const double t = (q + 1) / m;
      const double expected = (begins_at_crosspoint ? 1.0 - t : 0.0) + (ends_at_crosspoint ? t : 0.0);
      CHECK(phi.row(e.dofs[q]).sum() == doctest::Approx(expected));
    }
  }
}

TEST_CASE("edge basis: unit on its edge, zero on the rest of the interface") {
  const auto mesh = build_structured_mesh(16);
  const auto fem = assemble_fem(mesh, smooth_field(10));
  const auto p = build_partition(mesh, 4);
  const HarmonicExtender ext(p, fem);
  const int e = 7;
  const DenseMatrix phi(edge_basis(ext, e));
  REQUIRE(phi.cols() == static_cast<Index>(p.edges[e].dofs.size()));
  for (int d = 0; d < mesh.free_count; ++d) {
    if (p.dof_class[d].kind == DofKind::interior) continue;
    for (Index j = 0; j < phi.cols(); ++j) {
      const double expected = d == p.edges[e].dofs[static_cast<std::size_t>(j)] ? 1.0 : 0.0;
      CHECK(phi(d, j) == expected);
    }
  }
  // support is inside the two neighbours
  for (int d = 0; d < mesh.free_count; ++d) {
    if (p.dof_class[d].kind != DofKind::interior) continue;
    const int owner = p.dof_class[d].owner;
    if (owner != p.edges[e].first && owner != p.edges[e].second) CHECK(phi.row(d).norm() == 0.0);
  }
}
