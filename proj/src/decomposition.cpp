#include "fveasm/decomposition.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace fveasm {

int Partition::crosspoint_of_vertex(int vertex) const {
  // row-major construction keeps the vertex list sorted
  const auto it = std::lower_bound(crosspoint_vertex.begin(), crosspoint_vertex.end(), vertex);
  if (it == crosspoint_vertex.end() || *it != vertex) return -1;
  return static_cast<int>(it - crosspoint_vertex.begin());
}

Partition build_partition(const TriangleMesh& mesh, int N) {
  const int n = mesh.n;
  if (N < 1 || n % N != 0) {
    throw std::invalid_argument("build_partition: mesh with n = " + std::to_string(n) +
                                " is not aligned with " + std::to_string(N) + " subdomains per side");
  }
  const int m = n / N;
  if (m < 2) {
    throw std::invalid_argument("build_partition: H/h = " + std::to_string(m) +
                                " leaves subdomain edges without interior DOFs");
  }

  Partition p;
  p.N = N;
  p.H_over_h = m;
  p.subdomains.resize(static_cast<std::size_t>(N * N));
  for (int iy = 0; iy < N; ++iy)
    for (int ix = 0; ix < N; ++ix) {
      p.subdomains[iy * N + ix].ix = ix;
      p.subdomains[iy * N + ix].iy = iy;
    }

  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const Point c = mesh.centroid(t);
    const int ix = std::min(static_cast<int>(c.x * N), N - 1);
    const int iy = std::min(static_cast<int>(c.y * N), N - 1);
    p.subdomains[iy * N + ix].triangles.push_back(t);
  }

  // edges: vertical ones separate (ix-1, iy) | (ix, iy), horizontal ones (ix, iy-1) / (ix, iy)
  std::map<std::pair<int, int>, InterfaceEdge> edges;
  for (int iy = 0; iy < N; ++iy) {
    for (int ix = 0; ix < N; ++ix) {
      const int k = iy * N + ix;
      if (ix + 1 < N) {
        InterfaceEdge e{k, k + 1, mesh.vertex_at((ix + 1) * m, iy * m),
                        mesh.vertex_at((ix + 1) * m, (iy + 1) * m), {}};
        for (int j = iy * m + 1; j < (iy + 1) * m; ++j)
          e.dofs.push_back(mesh.free_index[mesh.vertex_at((ix + 1) * m, j)]);
        edges[{e.first, e.second}] = std::move(e);
      }
      if (iy + 1 < N) {
        InterfaceEdge e{k, k + N, mesh.vertex_at(ix * m, (iy + 1) * m),
                        mesh.vertex_at((ix + 1) * m, (iy + 1) * m), {}};
        for (int i = ix * m + 1; i < (ix + 1) * m; ++i)
          e.dofs.push_back(mesh.free_index[mesh.vertex_at(i, (iy + 1) * m)]);
        edges[{e.first, e.second}] = std::move(e);
      }
    }
  }
  for (auto& [key, e] : edges) p.edges.push_back(std::move(e));

  p.dof_class.resize(static_cast<std::size_t>(mesh.free_count));
  for (int e = 0; e < static_cast<int>(p.edges.size()); ++e)
    for (int d : p.edges[e].dofs) p.dof_class[d] = {DofKind::edge, e};

  for (int iy = 1; iy < N; ++iy)
    for (int ix = 1; ix < N; ++ix) {
      const int v = mesh.vertex_at(ix * m, iy * m);
      p.dof_class[mesh.free_index[v]] = {DofKind::crosspoint, static_cast<int>(p.crosspoints.size())};
      p.crosspoints.push_back(mesh.free_index[v]);
      p.crosspoint_vertex.push_back(v);
    }

  for (int j = 1; j < n; ++j) {
    for (int i = 1; i < n; ++i) {
      const int d = mesh.free_index[mesh.vertex_at(i, j)];
      const bool on_x = i % m == 0;
      const bool on_y = j % m == 0;
      if (!on_x && !on_y) {
        const int k = (j / m) * N + i / m;
        p.dof_class[d] = {DofKind::interior, k};
        p.subdomains[k].interior.push_back(d);
      }
    }
  }

  // interface of each subdomain: free vertices on its boundary, by DOF index
  for (auto& s : p.subdomains) {
    const int i0 = s.ix * m;
    const int j0 = s.iy * m;
    for (int j = j0; j <= j0 + m; ++j) {
      for (int i = i0; i <= i0 + m; ++i) {
        const bool on_boundary = i == i0 || i == i0 + m || j == j0 || j == j0 + m;
        const int d = mesh.free_index[mesh.vertex_at(i, j)];
        if (on_boundary && d >= 0) s.interface.push_back(d);
      }
    }
  }
  return p;
}

struct HarmonicExtender::Local {
  SparseMatrix coupling;  // interior x interface block
  Eigen::SimplicialLLT<SparseMatrix> factor;
};

HarmonicExtender::HarmonicExtender(const Partition& partition, const SparseOperator& fem)
    : partition_(&partition) {
  const SparseMatrix& a = fem.matrix;
  std::vector<int> local(static_cast<std::size_t>(a.rows()), -1);
  for (int k = 0; k < static_cast<int>(partition.subdomains.size()); ++k) {
    const auto& s = partition.subdomains[k];
    const auto n_int = static_cast<Index>(s.interior.size());
    for (std::size_t r = 0; r < s.interior.size(); ++r) local[s.interior[r]] = static_cast<int>(r);
    for (std::size_t r = 0; r < s.interface.size(); ++r)
      local[s.interface[r]] = static_cast<int>(n_int + static_cast<Index>(r));

    std::vector<Triplet> ii;
    std::vector<Triplet> ig;
    for (int col : s.interior) {
      // symmetric matrix: column `col` lists the rows coupled to it
      for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
        const int r = local[it.row()];
        if (r < 0) continue;
        if (r < n_int) {
          ii.emplace_back(r, local[col], it.value());
        } else {
          ig.emplace_back(local[col], r - n_int, it.value());
        }
      }
    }
    auto loc = std::make_unique<Local>();
    SparseMatrix block(n_int, n_int);
    block.setFromTriplets(ii.begin(), ii.end());
    loc->coupling.resize(n_int, static_cast<Index>(s.interface.size()));
    loc->coupling.setFromTriplets(ig.begin(), ig.end());
    loc->factor.compute(block);
    if (loc->factor.info() != Eigen::Success) {
      throw std::runtime_error("HarmonicExtender: interior block of subdomain " + std::to_string(k) +
                               " is not positive definite");
    }
    locals_.push_back(std::move(loc));

    for (int d : s.interior) local[d] = -1;
    for (int d : s.interface) local[d] = -1;
  }
}

HarmonicExtender::~HarmonicExtender() = default;
HarmonicExtender::HarmonicExtender(HarmonicExtender&&) noexcept = default;
HarmonicExtender& HarmonicExtender::operator=(HarmonicExtender&&) noexcept = default;

DenseMatrix HarmonicExtender::extend_interior(int k, const DenseMatrix& interface_values) const {
  const Local& loc = *locals_.at(static_cast<std::size_t>(k));
  if (interface_values.rows() != loc.coupling.cols()) {
    throw std::invalid_argument("extend_interior: wrong number of interface values");
  }
  const DenseMatrix rhs = -(loc.coupling * interface_values);
  return loc.factor.solve(rhs);
}

Vector harmonic_extend(const HarmonicExtender& extender, int k, const Vector& boundary_values) {
  const auto& s = extender.partition().subdomains.at(static_cast<std::size_t>(k));
  Vector out(static_cast<Index>(s.interior.size() + s.interface.size()));
  out.head(static_cast<Index>(s.interior.size())) = extender.extend_interior(k, boundary_values);
  out.tail(static_cast<Index>(s.interface.size())) = boundary_values;
  return out;
}

namespace {

Index position_in(const std::vector<int>& sorted, int dof) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), dof);
  if (it == sorted.end() || *it != dof) throw std::logic_error("interface DOF lookup failed");
  return static_cast<Index>(it - sorted.begin());
}

Index free_dimension(const Partition& p) { return static_cast<Index>(p.dof_class.size()); }

}  // namespace

SparseMatrix coarse_basis(const HarmonicExtender& extender) {
  const Partition& p = extender.partition();
  const auto cols = static_cast<Index>(p.crosspoints.size());
  const double m = p.H_over_h;
  std::vector<Triplet> triplets;

  // interface part: the crosspoint itself and the linear ramps on its edges
  std::vector<std::vector<std::pair<int, double>>> ramps(p.crosspoints.size());
  for (int c = 0; c < cols; ++c) ramps[c].push_back({p.crosspoints[c], 1.0});
  for (const auto& e : p.edges) {
    const int cb = p.crosspoint_of_vertex(e.corner_begin);
    const int ce = p.crosspoint_of_vertex(e.corner_end);
    for (std::size_t q = 0; q < e.dofs.size(); ++q) {
      const double t = static_cast<double>(q + 1) / m;
      if (cb >= 0) ramps[cb].push_back({e.dofs[q], 1.0 - t});
      if (ce >= 0) ramps[ce].push_back({e.dofs[q], t});
    }
  }
  for (int c = 0; c < cols; ++c)
    for (auto [dof, value] : ramps[c]) triplets.emplace_back(dof, c, value);

  // interior part, subdomain by subdomain for all crosspoints at its corners
  const int N = p.N;
  for (int k = 0; k < static_cast<int>(p.subdomains.size()); ++k) {
    const auto& s = p.subdomains[k];
    std::vector<int> corners;
    for (int dy = 0; dy <= 1; ++dy)
      for (int dx = 0; dx <= 1; ++dx) {
        const int cx = s.ix + dx;
        const int cy = s.iy + dy;
        if (cx >= 1 && cx <= N - 1 && cy >= 1 && cy <= N - 1) corners.push_back((cy - 1) * (N - 1) + cx - 1);
      }
    if (corners.empty() || s.interior.empty()) continue;
    DenseMatrix g = DenseMatrix::Zero(static_cast<Index>(s.interface.size()),
                                      static_cast<Index>(corners.size()));
    for (std::size_t q = 0; q < corners.size(); ++q)
      for (auto [dof, value] : ramps[corners[q]]) {
        const auto it = std::lower_bound(s.interface.begin(), s.interface.end(), dof);
        if (it != s.interface.end() && *it == dof) g(it - s.interface.begin(), static_cast<Index>(q)) = value;
      }
    const DenseMatrix x = extender.extend_interior(k, g);
    for (std::size_t q = 0; q < corners.size(); ++q)
      for (Index r = 0; r < x.rows(); ++r)
        triplets.emplace_back(s.interior[r], corners[q], x(r, static_cast<Index>(q)));
  }

  SparseMatrix basis(free_dimension(p), cols);
  basis.setFromTriplets(triplets.begin(), triplets.end());
  return basis;
}

SparseMatrix edge_basis(const HarmonicExtender& extender, int e) {
  const Partition& p = extender.partition();
  const auto& edge = p.edges.at(static_cast<std::size_t>(e));
  const auto cols = static_cast<Index>(edge.dofs.size());
  std::vector<Triplet> triplets;
  for (Index q = 0; q < cols; ++q) triplets.emplace_back(edge.dofs[q], q, 1.0);
  for (int k : {edge.first, edge.second}) {
    const auto& s = p.subdomains[k];
    DenseMatrix g = DenseMatrix::Zero(static_cast<Index>(s.interface.size()), cols);
    for (Index q = 0; q < cols; ++q) g(position_in(s.interface, edge.dofs[q]), q) = 1.0;
    const DenseMatrix x = extender.extend_interior(k, g);
    for (Index q = 0; q < cols; ++q)
      for (Index r = 0; r < x.rows(); ++r) triplets.emplace_back(s.interior[r], q, x(r, q));
  }
  SparseMatrix basis(free_dimension(p), cols);
  basis.setFromTriplets(triplets.begin(), triplets.end());
  return basis;
}

std::vector<int> closure_dofs(const Partition& partition, int k) {
  const auto& s = partition.subdomains.at(static_cast<std::size_t>(k));
  std::vector<int> dofs = s.interior;
  dofs.insert(dofs.end(), s.interface.begin(), s.interface.end());
  return dofs;
}

SparseMatrix subdomain_stiffness(const TriangleMesh& mesh, const CoefficientField& coeff,
                                 const Partition& partition, int k) {
  const SparseMatrix full = assemble_fem_full(mesh, coeff, partition.subdomains.at(k).triangles);
  const auto dofs = closure_dofs(partition, k);
  std::vector<int> local(static_cast<std::size_t>(mesh.free_count), -1);
  for (std::size_t r = 0; r < dofs.size(); ++r) local[dofs[r]] = static_cast<int>(r);

  std::vector<Triplet> triplets;
  for (Index col = 0; col < full.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(full, col); it; ++it) {
      const int fr = mesh.free_index[it.row()];
      const int fc = mesh.free_index[it.col()];
      if (fr < 0 || fc < 0 || local[fr] < 0 || local[fc] < 0) continue;
      triplets.emplace_back(local[fr], local[fc], it.value());
    }
  }
  const auto size = static_cast<Index>(dofs.size());
  SparseMatrix a(size, size);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

}  // namespace fveasm
