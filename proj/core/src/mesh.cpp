#include "dpg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dpg {

namespace {

inline uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) | static_cast<uint32_t>(b);
}

}  // namespace

void TriMesh::finalize() {
  edges_.clear();
  edge_lookup_.clear();
  for (int t = 0; t < n_triangles(); ++t) {
    const auto& tv = triangles[static_cast<size_t>(t)].v;
    if (tri_geometry(t).signed_area() <= 0)
      throw std::runtime_error("TriMesh: triangle " + std::to_string(t) + " not counterclockwise");
    for (int e = 0; e < 3; ++e) {
      int a = tv[static_cast<size_t>(e)], b = tv[static_cast<size_t>((e + 1) % 3)];
      const uint64_t key = edge_key(a, b);
      auto it = edge_lookup_.find(key);
      if (it == edge_lookup_.end()) {
        MeshEdge me;
        me.a = std::min(a, b);
        me.b = std::max(a, b);
        me.tri[0] = t;
        edge_lookup_.emplace(key, static_cast<int>(edges_.size()));
        edges_.push_back(me);
      } else {
        MeshEdge& me = edges_[static_cast<size_t>(it->second)];
        if (me.tri[1] >= 0)
          throw std::runtime_error("TriMesh: edge shared by more than two triangles");
        me.tri[1] = t;
      }
    }
  }
  if (!boundary_tags.empty() && boundary_tags.size() != edges_.size()) boundary_tags.clear();
}

int TriMesh::edge_index(int va, int vb) const {
  auto it = edge_lookup_.find(edge_key(va, vb));
  return it == edge_lookup_.end() ? -1 : it->second;
}

double TriMesh::total_area() const {
  double a = 0;
  for (int t = 0; t < n_triangles(); ++t) a += tri_geometry(t).area();
  return a;
}

double TriMesh::max_diameter() const {
  double d = 0;
  for (int t = 0; t < n_triangles(); ++t) d = std::max(d, tri_geometry(t).diameter());
  return d;
}

TriMesh build_structured_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_structured_mesh: n >= 1 required");
  TriMesh mesh;
  const double h = 1.0 / n;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) mesh.vertices.push_back({i * h, j * h});
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      // Hypotenuse from (i,j) to (i+1,j+1); peak vertex first.
      mesh.triangles.push_back({{vid(i + 1, j), vid(i + 1, j + 1), vid(i, j)}, -1, 0});
      mesh.triangles.push_back({{vid(i, j + 1), vid(i, j), vid(i + 1, j + 1)}, -1, 0});
    }
  mesh.finalize();
  return mesh;
}

std::pair<TriMesh, RefinementMap> red_refine(const TriMesh& mesh, int levels) {
  if (levels < 0) throw std::invalid_argument("red_refine: levels >= 0 required");
  TriMesh cur = mesh;
  RefinementMap map;
  map.child_of.resize(static_cast<size_t>(mesh.n_triangles()));
  for (int t = 0; t < mesh.n_triangles(); ++t) map.child_of[static_cast<size_t>(t)] = t;

  for (int lev = 0; lev < levels; ++lev) {
    TriMesh next;
    next.vertices = cur.vertices;
    std::vector<int> edge_mid(static_cast<size_t>(cur.n_edges()));
    for (int e = 0; e < cur.n_edges(); ++e) {
      const MeshEdge& me = cur.edges()[static_cast<size_t>(e)];
      edge_mid[static_cast<size_t>(e)] = static_cast<int>(next.vertices.size());
      next.vertices.push_back(midpoint(cur.vertices[static_cast<size_t>(me.a)],
                                       cur.vertices[static_cast<size_t>(me.b)]));
    }
    std::vector<int> child_of;
    for (int t = 0; t < cur.n_triangles(); ++t) {
      const auto& tv = cur.triangles[static_cast<size_t>(t)].v;
      const int lvl = cur.triangles[static_cast<size_t>(t)].level + 1;
      const int a = tv[0], b = tv[1], c = tv[2];
      const int mab = edge_mid[static_cast<size_t>(cur.edge_index(a, b))];
      const int mbc = edge_mid[static_cast<size_t>(cur.edge_index(b, c))];
      const int mca = edge_mid[static_cast<size_t>(cur.edge_index(c, a))];
      // All four children keep the longest-edge-last convention because they
      // are similar to the parent.
      next.triangles.push_back({{a, mab, mca}, t, lvl});
      next.triangles.push_back({{mab, b, mbc}, t, lvl});
      next.triangles.push_back({{mca, mbc, c}, t, lvl});
      next.triangles.push_back({{mbc, mca, mab}, t, lvl});
      for (int k = 0; k < 4; ++k) child_of.push_back(map.child_of[static_cast<size_t>(t)]);
    }
    next.finalize();
    cur = std::move(next);
    map.child_of = std::move(child_of);
  }
  map.children_of.assign(static_cast<size_t>(mesh.n_triangles()), {});
  for (size_t t = 0; t < map.child_of.size(); ++t)
    map.children_of[static_cast<size_t>(map.child_of[t])].push_back(static_cast<int>(t));
  return {std::move(cur), std::move(map)};
}

TriMesh bisect_refine(const TriMesh& mesh, const std::set<int>& marked) {
  for (int t : marked)
    if (t < 0 || t >= mesh.n_triangles())
      throw std::invalid_argument("bisect_refine: marked id out of range");
  if (marked.empty()) return mesh;

  // Completion: an edge set E closed under "any marked edge forces the
  // refinement edge", so every bisection is matched from both sides.
  std::vector<char> in_E(static_cast<size_t>(mesh.n_edges()), 0);
  auto ref_edge = [&](int t) {
    const auto& tv = mesh.triangles[static_cast<size_t>(t)].v;
    return mesh.edge_index(tv[1], tv[2]);
  };
  for (int t : marked) in_E[static_cast<size_t>(ref_edge(t))] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
      const auto& tv = mesh.triangles[static_cast<size_t>(t)].v;
      bool touched = false;
      for (int e = 0; e < 3; ++e)
        touched |= in_E[static_cast<size_t>(mesh.edge_index(
                       tv[static_cast<size_t>(e)], tv[static_cast<size_t>((e + 1) % 3)]))] != 0;
      const int re = ref_edge(t);
      if (touched && !in_E[static_cast<size_t>(re)]) {
        in_E[static_cast<size_t>(re)] = 1;
        changed = true;
      }
    }
  }

  TriMesh out;
  out.vertices = mesh.vertices;
  std::vector<int> edge_mid(static_cast<size_t>(mesh.n_edges()), -1);
  for (int e = 0; e < mesh.n_edges(); ++e)
    if (in_E[static_cast<size_t>(e)]) {
      const MeshEdge& me = mesh.edges()[static_cast<size_t>(e)];
      edge_mid[static_cast<size_t>(e)] = static_cast<int>(out.vertices.size());
      out.vertices.push_back(midpoint(mesh.vertices[static_cast<size_t>(me.a)],
                                      mesh.vertices[static_cast<size_t>(me.b)]));
    }

  // Children of (p,a,b) with refinement edge (a,b) and midpoint m:
  // (m,p,a) and (m,b,p); their refinement edges are the remaining original
  // edges, so at most two bisection rounds per input triangle.
  auto emit = [&](auto&& self, const MeshTriangle& t) -> void {
    const int mid_edge = mesh.edge_index(t.v[1], t.v[2]);
    const int m = mid_edge >= 0 ? edge_mid[static_cast<size_t>(mid_edge)] : -1;
    if (m < 0) {
      out.triangles.push_back(t);
      return;
    }
    self(self, MeshTriangle{{m, t.v[0], t.v[1]}, t.parent, t.level + 1});
    self(self, MeshTriangle{{m, t.v[2], t.v[0]}, t.parent, t.level + 1});
  };
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    MeshTriangle mt = mesh.triangles[static_cast<size_t>(t)];
    const int re = ref_edge(t);
    if (in_E[static_cast<size_t>(re)]) {
      mt.parent = t;
      emit(emit, mt);
    } else {
      out.triangles.push_back(mt);
    }
  }
  out.finalize();
  return out;
}

EdgeClass classify_edges(const TriMesh& mesh, const std::vector<Point2>& bbar) {
  if (static_cast<int>(bbar.size()) != mesh.n_triangles())
    throw std::invalid_argument("classify_edges: one velocity per triangle required");
  EdgeClass cls;
  cls.label.resize(static_cast<size_t>(mesh.n_triangles()));
  cls.flux.resize(static_cast<size_t>(mesh.n_triangles()));
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Point2 b = bbar[static_cast<size_t>(t)];
    const double bn = norm(b);
    if (!(bn > 0)) throw std::runtime_error("classify_edges: degenerate field on element " +
                                            std::to_string(t));
    const Tri g = mesh.tri_geometry(t);
    for (int e = 0; e < 3; ++e) {
      const Point2 n = outward_normal(g[e], g[(e + 1) % 3]);
      const double f = dot(b, n);
      cls.flux[static_cast<size_t>(t)][static_cast<size_t>(e)] = f;
      EdgeLabel l = EdgeLabel::characteristic;
      if (f < -kCharacteristicTol * bn) l = EdgeLabel::inflow;
      else if (f > kCharacteristicTol * bn) l = EdgeLabel::outflow;
      cls.label[static_cast<size_t>(t)][static_cast<size_t>(e)] = l;
    }
  }
  return cls;
}

namespace {

// Local edge slot of global edge `edge` within triangle t.
int local_edge_of(const TriMesh& mesh, int t, int edge) {
  const auto& tv = mesh.triangles[static_cast<size_t>(t)].v;
  const MeshEdge& me = mesh.edges()[static_cast<size_t>(edge)];
  for (int e = 0; e < 3; ++e) {
    const int a = tv[static_cast<size_t>(e)], b = tv[static_cast<size_t>((e + 1) % 3)];
    if ((a == me.a && b == me.b) || (a == me.b && b == me.a)) return e;
  }
  throw std::logic_error("local_edge_of: edge not on triangle");
}

}  // namespace

void tag_boundary(TriMesh& mesh, const EdgeClass& cls) {
  mesh.boundary_tags.assign(static_cast<size_t>(mesh.n_edges()), EdgeLabel::characteristic);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const MeshEdge& me = mesh.edges()[static_cast<size_t>(e)];
    if (!me.boundary()) continue;
    mesh.boundary_tags[static_cast<size_t>(e)] =
        cls.side_label(me.tri[0], local_edge_of(mesh, me.tri[0], e));
  }
}

bool edge_noncharacteristic(const TriMesh& mesh, const EdgeClass& cls, int edge) {
  const MeshEdge& me = mesh.edges()[static_cast<size_t>(edge)];
  bool nonchar = cls.side_label(me.tri[0], local_edge_of(mesh, me.tri[0], edge)) !=
                 EdgeLabel::characteristic;
  if (me.tri[1] >= 0)
    nonchar |= cls.side_label(me.tri[1], local_edge_of(mesh, me.tri[1], edge)) !=
               EdgeLabel::characteristic;
  return nonchar;
}

bool edge_has_trace(const TriMesh& mesh, const EdgeClass& cls, int edge) {
  const MeshEdge& me = mesh.edges()[static_cast<size_t>(edge)];
  if (!edge_noncharacteristic(mesh, cls, edge)) return false;
  if (me.boundary() &&
      cls.side_label(me.tri[0], local_edge_of(mesh, me.tri[0], edge)) == EdgeLabel::inflow)
    return false;
  return true;
}

std::vector<int> skeleton(const TriMesh& mesh, const EdgeClass& cls) {
  std::vector<int> out;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const MeshEdge& me = mesh.edges()[static_cast<size_t>(e)];
    if (!me.boundary() || edge_noncharacteristic(mesh, cls, e)) out.push_back(e);
  }
  return out;
}

double shape_regularity(const TriMesh& mesh) {
  double rho = 0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Tri g = mesh.tri_geometry(t);
    const double r = g.inradius();
    if (!(r > 0)) throw std::runtime_error("shape_regularity: degenerate triangle " +
                                           std::to_string(t));
    rho = std::max(rho, g.diameter() / (2 * r));
  }
  return rho;
}

void export_mesh(const TriMesh& mesh, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("export_mesh: cannot open " + path);
  os.precision(17);
  os << "dpgmesh 1\n";
  os << "vertices " << mesh.n_vertices() << "\n";
  for (const Point2& p : mesh.vertices) os << p.x << " " << p.y << "\n";
  os << "triangles " << mesh.n_triangles() << "\n";
  for (const MeshTriangle& t : mesh.triangles) os << t.v[0] << " " << t.v[1] << " " << t.v[2] << "\n";
  int nb = 0;
  for (int e = 0; e < mesh.n_edges(); ++e)
    if (mesh.edges()[static_cast<size_t>(e)].boundary()) ++nb;
  os << "boundary " << nb << "\n";
  static const char* names[] = {"inflow", "outflow", "characteristic"};
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const MeshEdge& me = mesh.edges()[static_cast<size_t>(e)];
    if (!me.boundary()) continue;
    const char* tag = mesh.boundary_tags.empty()
                          ? "none"
                          : names[static_cast<int>(mesh.boundary_tags[static_cast<size_t>(e)])];
    os << me.a << " " << me.b << " " << tag << "\n";
  }
  if (!os) throw std::runtime_error("export_mesh: write failed for " + path);
}

TriMesh import_mesh(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("import_mesh: cannot open " + path);
  std::string word;
  int version = 0;
  is >> word >> version;
  if (word != "dpgmesh" || version != 1)
    throw std::runtime_error("import_mesh: unrecognized format in " + path);
  TriMesh mesh;
  int n = 0;
  is >> word >> n;
  if (word != "vertices") throw std::runtime_error("import_mesh: expected vertex table");
  mesh.vertices.resize(static_cast<size_t>(n));
  for (Point2& p : mesh.vertices) is >> p.x >> p.y;
  is >> word >> n;
  if (word != "triangles") throw std::runtime_error("import_mesh: expected triangle table");
  mesh.triangles.resize(static_cast<size_t>(n));
  for (MeshTriangle& t : mesh.triangles) is >> t.v[0] >> t.v[1] >> t.v[2];
  mesh.finalize();
  is >> word >> n;
  if (word == "boundary") {
    bool any_tag = false;
    std::vector<EdgeLabel> tags(static_cast<size_t>(mesh.n_edges()), EdgeLabel::characteristic);
    for (int k = 0; k < n; ++k) {
      int a, b;
      std::string tag;
      is >> a >> b >> tag;
      const int e = mesh.edge_index(a, b);
      if (e < 0) throw std::runtime_error("import_mesh: boundary record on unknown edge");
      if (tag == "inflow") {
        tags[static_cast<size_t>(e)] = EdgeLabel::inflow;
        any_tag = true;
      } else if (tag == "outflow") {
        tags[static_cast<size_t>(e)] = EdgeLabel::outflow;
        any_tag = true;
      } else if (tag == "characteristic") {
        tags[static_cast<size_t>(e)] = EdgeLabel::characteristic;
        any_tag = true;
      }
    }
    if (any_tag) mesh.boundary_tags = std::move(tags);
  }
  if (!is && !is.eof()) throw std::runtime_error("import_mesh: parse failure in " + path);
  return mesh;
}

}  // namespace dpg
