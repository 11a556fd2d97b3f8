#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "dpg/geometry.hpp"

namespace dpg {

enum class EdgeLabel : int8_t { inflow = 0, outflow = 1, characteristic = 2 };

/// |b.n| <= tol * |b| counts as characteristic.
inline constexpr double kCharacteristicTol = 1e-10;

struct MeshTriangle {
  std::array<int, 3> v;  // CCW; the refinement edge is (v[1], v[2])
  int parent = -1;       // immediate parent triangle id, -1 for a root
  int level = 0;         // refinement generation
};

struct MeshEdge {
  int a = -1, b = -1;                 // canonical orientation: a < b
  std::array<int, 2> tri = {-1, -1};  // adjacent triangles; tri[1] == -1 on the boundary
  bool boundary() const { return tri[1] < 0; }
};

/// Conforming counterclockwise triangulation with derived edge adjacency.
class TriMesh {
 public:
  std::vector<Point2> vertices;
  std::vector<MeshTriangle> triangles;

  /// Rebuilds the edge table and validates conformity and orientation.
  void finalize();

  const std::vector<MeshEdge>& edges() const { return edges_; }
  int edge_index(int va, int vb) const;  // -1 if absent
  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }

  Tri tri_geometry(int t) const {
    const auto& tv = triangles[static_cast<size_t>(t)].v;
    return Tri(vertices[static_cast<size_t>(tv[0])], vertices[static_cast<size_t>(tv[1])],
               vertices[static_cast<size_t>(tv[2])]);
  }
  double total_area() const;
  double max_diameter() const;

  /// Boundary tags keyed by edge id (only meaningful for boundary edges);
  /// empty until assigned. Persisted by the mesh exporter.
  std::vector<EdgeLabel> boundary_tags;

 private:
  std::vector<MeshEdge> edges_;
  std::unordered_map<uint64_t, int> edge_lookup_;
};

/// Parent/child bookkeeping between a macro mesh and its subgrid.
struct RefinementMap {
  std::vector<int> child_of;                // subgrid triangle -> macro triangle
  std::vector<std::vector<int>> children_of;  // inverse
};

/// Per-(triangle, local edge) classification against a per-element constant
/// field; local edge e of triangle t connects v[e] and v[(e+1)%3].
struct EdgeClass {
  std::vector<std::array<EdgeLabel, 3>> label;
  std::vector<std::array<double, 3>> flux;  // b_K . n (unit outward normal)

  EdgeLabel side_label(int t, int e) const { return label[static_cast<size_t>(t)][static_cast<size_t>(e)]; }
};

/// Uniform triangulation of the unit square into 2n^2 isosceles right
/// triangles with legs 1/n and hypotenuses parallel to (1,1).
TriMesh build_structured_mesh(int n);

/// `levels` recursive red refinements; children are similar to their parents.
std::pair<TriMesh, RefinementMap> red_refine(const TriMesh& mesh, int levels);

/// Newest-vertex bisection of the marked triangles with conformity closure.
TriMesh bisect_refine(const TriMesh& mesh, const std::set<int>& marked);

/// Classifies every element edge by the sign of bbar_K . n.
EdgeClass classify_edges(const TriMesh& mesh, const std::vector<Point2>& bbar);

/// Copies per-element labels of boundary edges into mesh.boundary_tags.
void tag_boundary(TriMesh& mesh, const EdgeClass& cls);

/// Skeleton edge ids: all interior edges plus non-characteristic boundary
/// edges, in canonical (a < b) orientation.
std::vector<int> skeleton(const TriMesh& mesh, const EdgeClass& cls);

/// An edge carries trace degrees of freedom iff it is non-characteristic and
/// not an inflow boundary edge. Characteristic edges would contribute
/// identically vanishing jump terms, i.e. zero matrix columns.
bool edge_has_trace(const TriMesh& mesh, const EdgeClass& cls, int edge);

/// Non-characteristic edges (where the jump pairing and load integrals live).
bool edge_noncharacteristic(const TriMesh& mesh, const EdgeClass& cls, int edge);

/// max over K of diam(K) / sup{diam(B): ball B in K}.
double shape_regularity(const TriMesh& mesh);

/// Plain-text mesh I/O (vertex table, triangle table, boundary tags).
void export_mesh(const TriMesh& mesh, const std::string& path);
TriMesh import_mesh(const std::string& path);

}  // namespace dpg
