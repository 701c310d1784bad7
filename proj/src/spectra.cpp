#include "fusion/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fusion/errors.hpp"

namespace fusion {

IntMatrix module_matrix(const BasedModuleTable& m, const Label& alpha) { return m.matrix(alpha); }

FusionGraph fusion_graph(const BasedModuleTable& m, const Label& alpha, const std::optional<ModuleDimensionVector>& dims) {
  FusionGraph g;
  g.vertices = m.basis();
  g.adjacency = m.matrix(alpha);
  if (dims)
    for (const auto& b : g.vertices) g.dims.push_back(dims->at(b));
  return g;
}

FusionGraph fusion_graph(const TruncatedModule& t, const Label& generator) {
  FusionGraph g;
  g.vertices = t.vertices;
  g.adjacency = t.matrix(generator);
  g.dims = t.dims;
  g.boundary = t.boundary;
  return g;
}

FusionGraph symmetrize(const FusionGraph& g, Symmetrization rule) {
  FusionGraph out = g;
  out.orientation = Orientation::symmetrized;
  const auto& a = g.adjacency;
  switch (rule) {
    case Symmetrization::assume_symmetric:
      if (!a.is_symmetric()) throw std::invalid_argument("graph is not symmetric");
      break;
    case Symmetrization::sum:
      out.adjacency = a + a.transpose();
      break;
    case Symmetrization::underlying:
      for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.adjacency(i, j) = (a(i, j) != 0 || a(j, i) != 0) ? 1 : 0;
      break;
  }
  return out;
}

bool matrix_homomorphism_check(const BasedModuleTable& m, const Label& alpha, const Label& beta) {
  const auto& ring = m.ring_table();
  const std::size_t n = m.size();
  IntMatrix expanded(n, n);
  for (const auto& [g, v] : ring.product(ring.index(alpha), ring.index(beta))) expanded = expanded + v * m.matrix(g);
  if (!(expanded == m.matrix(beta) * m.matrix(alpha))) return false;
  return m.matrix(ring.dual(alpha)) == m.matrix(alpha).transpose() &&
         m.matrix(ring.dual(beta)) == m.matrix(beta).transpose();
}

SchurReport schur_norm_check(const BasedModuleTable& m, const ModuleDimensionVector& dims,
                             const DimensionFunction& ring_dims, const Label& alpha, double tol) {
  SchurReport rep;
  const auto& mat = m.matrix(alpha);
  rep.d_alpha = ring_dims.at(alpha);
  std::vector<double> d;
  for (const auto& b : m.basis()) d.push_back(dims.at(b));
  const auto md = mat.apply(d);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double want = rep.d_alpha * d[i];
    rep.max_relative_error = std::max(rep.max_relative_error, std::abs(md[i] - want) / std::max(1.0, std::abs(want)));
  }
  rep.eigen_ok = rep.max_relative_error <= tol;
  rep.spectral_radius = spectral_radius(mat);
  rep.norm_ok = rep.spectral_radius <= rep.d_alpha + tol;
  return rep;
}

// --- Dynkin recognition ----------------------------------------------------

namespace {

constexpr double kPi = std::numbers::pi;

double two_cos(double x) { return 2.0 * std::cos(x); }

DynkinVerdict make(DynkinClass c, std::size_t n, std::string name, double norm) {
  DynkinVerdict v;
  v.cls = c;
  v.n = n;
  v.name = std::move(name);
  v.norm = norm;
  return v;
}

bool connected(const IntMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 0) return false;
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack = {0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (std::size_t w = 0; w < n; ++w)
      if (w != v && a(v, w) != 0 && !seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

// Lengths of the arms hanging off a vertex in a tree with max degree <= 2
// elsewhere, sorted ascending.
std::vector<std::size_t> arm_lengths(const IntMatrix& a, std::size_t center) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> arms;
  for (std::size_t start = 0; start < n; ++start) {
    if (start == center || a(center, start) == 0) continue;
    std::size_t prev = center, cur = start, len = 1;
    for (;;) {
      std::size_t next = n;
      for (std::size_t w = 0; w < n; ++w)
        if (w != cur && w != prev && a(cur, w) != 0) next = w;
      if (next == n) break;
      prev = cur;
      cur = next;
      ++len;
    }
    arms.push_back(len);
  }
  std::sort(arms.begin(), arms.end());
  return arms;
}

std::optional<DynkinVerdict> match_simple_tree(const IntMatrix& a, const std::vector<std::size_t>& deg,
                                               const std::vector<bool>& boundary) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> branch;
  for (std::size_t i = 0; i < n; ++i) {
    if (deg[i] > 4) return std::nullopt;
    if (deg[i] >= 3) branch.push_back(i);
  }
  if (branch.empty()) {
    for (std::size_t i = 0; i < n && !boundary.empty(); ++i)
      if (boundary[i] && deg[i] <= 1)
        return make(DynkinClass::a_infinity_truncation, n, "A_inf truncation (" + std::to_string(n) + ")",
                    two_cos(kPi / static_cast<double>(n + 1)));
    return make(DynkinClass::A, n, "A" + std::to_string(n), two_cos(kPi / static_cast<double>(n + 1)));
  }
  if (branch.size() == 1 && deg[branch[0]] == 4) {
    if (n == 5) return make(DynkinClass::D_tilde, 4, "D4~", 2.0);
    return std::nullopt;
  }
  if (branch.size() == 1) {
    const auto arms = arm_lengths(a, branch[0]);
    const std::size_t p = arms[0], q = arms[1], r = arms[2];
    if (p == 1 && q == 1) return make(DynkinClass::D, n, "D" + std::to_string(n), two_cos(kPi / static_cast<double>(2 * n - 2)));
    if (p == 1 && q == 2 && r == 2) return make(DynkinClass::E6, 6, "E6", two_cos(kPi / 12));
    if (p == 1 && q == 2 && r == 3) return make(DynkinClass::E7, 7, "E7", two_cos(kPi / 18));
    if (p == 1 && q == 2 && r == 4) return make(DynkinClass::E8, 8, "E8", two_cos(kPi / 30));
    if (p == 2 && q == 2 && r == 2) return make(DynkinClass::E6_tilde, 6, "E6~", 2.0);
    if (p == 1 && q == 3 && r == 3) return make(DynkinClass::E7_tilde, 7, "E7~", 2.0);
    if (p == 1 && q == 2 && r == 5) return make(DynkinClass::E8_tilde, 8, "E8~", 2.0);
    return std::nullopt;
  }
  if (branch.size() == 2 && deg[branch[0]] == 3 && deg[branch[1]] == 3) {
    for (auto b : branch) {
      std::size_t leaves = 0;
      for (std::size_t w = 0; w < n; ++w)
        if (w != b && a(b, w) != 0 && deg[w] == 1) ++leaves;
      if (leaves != 2) return std::nullopt;
    }
    return make(DynkinClass::D_tilde, n - 1, "D" + std::to_string(n - 1) + "~", 2.0);
  }
  return std::nullopt;
}

std::size_t distance(const IntMatrix& a, std::size_t from, std::size_t to) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> dist(n, n);
  std::vector<std::size_t> queue = {from};
  dist[from] = 0;
  for (std::size_t k = 0; k < queue.size(); ++k)
    for (std::size_t w = 0; w < n; ++w)
      if (w != queue[k] && a(queue[k], w) != 0 && dist[w] == n) {
        dist[w] = dist[queue[k]] + 1;
        queue.push_back(w);
      }
  return dist[to];
}

// Trees carrying loops: the tadpole (loop at one end of a path), the path
// with loops at both ends, the path with a loop at one end and a fork of two
// leaves at the other, and the three-vertex path looped in the middle.
std::optional<DynkinVerdict> match_looped_tree(const IntMatrix& a, const std::vector<std::size_t>& deg) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> looped;
  for (std::size_t i = 0; i < n; ++i) {
    if (a(i, i) > 1) return std::nullopt;
    if (a(i, i) == 1) looped.push_back(i);
  }
  // Loop in the middle of a three-vertex path.
  if (n == 3 && looped.size() == 1 && deg[looped[0]] == 2)
    return make(DynkinClass::loop_norm2, n, "looped center L3c", 2.0);
  for (auto v : looped)
    if (deg[v] > 1) return std::nullopt;
  std::size_t branch = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (deg[i] > 3) return std::nullopt;
    if (deg[i] == 3) {
      if (branch != n) return std::nullopt;
      branch = i;
    }
  }
  if (looped.size() == 1 && branch == n)
    return make(DynkinClass::tadpole, n, "tadpole T" + std::to_string(n),
                two_cos(kPi / static_cast<double>(2 * n + 1)));
  if (looped.size() == 2 && branch == n)
    return make(DynkinClass::loop_norm2, n, "looped path L" + std::to_string(n), 2.0);
  if (looped.size() == 1 && branch != n) {
    const auto arms = arm_lengths(a, branch);
    if (arms[0] == 1 && arms[1] == 1 && distance(a, branch, looped[0]) == arms[2])
      return make(DynkinClass::loop_norm2, n, "looped fork LD" + std::to_string(n), 2.0);
  }
  return std::nullopt;
}

std::optional<DynkinVerdict> match(const IntMatrix& a, const std::vector<bool>& boundary) {
  const std::size_t n = a.rows();
  if (n == 1) {
    switch (a(0, 0)) {
      case 0: return make(DynkinClass::A, 1, "A1", 0.0);
      case 1: return make(DynkinClass::tadpole, 1, "tadpole T1", 1.0);
      case 2: return make(DynkinClass::loop_norm2, 1, "double loop", 2.0);
      default: return std::nullopt;
    }
  }
  std::vector<std::size_t> deg(n, 0);
  std::size_t edges = 0, loops = 0;
  bool multi = false;
  for (std::size_t i = 0; i < n; ++i) {
    loops += static_cast<std::size_t>(a(i, i));
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      deg[i] += static_cast<std::size_t>(a(i, j));
      if (a(i, j) > 1) multi = true;
      if (j > i) edges += static_cast<std::size_t>(a(i, j));
    }
  }
  if (multi) {
    if (n == 2 && loops == 0 && a(0, 1) == 2) return make(DynkinClass::A_tilde, 1, "A1~", 2.0);
    return std::nullopt;
  }
  if (loops > 0) {
    if (edges != n - 1) return std::nullopt;
    return match_looped_tree(a, deg);
  }
  if (edges == n) {
    if (std::all_of(deg.begin(), deg.end(), [](auto d) { return d == 2; }))
      return make(DynkinClass::A_tilde, n - 1, "A" + std::to_string(n - 1) + "~", 2.0);
    return std::nullopt;
  }
  if (edges == n - 1) return match_simple_tree(a, deg, boundary);
  return std::nullopt;
}

}  // namespace

bool DynkinVerdict::norm_below_2() const {
  switch (cls) {
    case DynkinClass::A:
    case DynkinClass::D:
    case DynkinClass::E6:
    case DynkinClass::E7:
    case DynkinClass::E8:
    case DynkinClass::tadpole:
    case DynkinClass::a_infinity_truncation:
      return true;
    case DynkinClass::other_subcritical:
      return norm < 2.0;
    default:
      return false;
  }
}

bool DynkinVerdict::norm_equal_2() const {
  switch (cls) {
    case DynkinClass::A_tilde:
    case DynkinClass::D_tilde:
    case DynkinClass::E6_tilde:
    case DynkinClass::E7_tilde:
    case DynkinClass::E8_tilde:
    case DynkinClass::loop_norm2:
      return true;
    default:
      return false;
  }
}

std::string DynkinVerdict::describe() const {
  std::ostringstream os;
  os.precision(10);
  os << name << ", norm ";
  if (norm_equal_2()) os << "= 2";
  else if (norm_below_2()) os << "< 2 (" << norm << ")";
  else os << "> 2 (" << norm << ")";
  return os.str();
}

DynkinVerdict dynkin_classify(const FusionGraph& g) {
  const auto& a = g.adjacency;
  if (!a.is_symmetric()) throw std::invalid_argument("dynkin_classify needs a symmetric graph");
  if (!connected(a)) throw DisconnectedGraph("graph is not connected");
  if (auto v = match(a, g.boundary)) return *v;

  // Not on the list: certify numerically with the Perron vector.
  const auto perron = perron_symmetric(a, 1e-13, 1000000);
  DynkinVerdict v;
  v.n = a.rows();
  v.norm = perron.value;
  v.certificate = perron.vector;
  const auto mv = a.apply(v.certificate);
  bool exceeds = false;
  for (std::size_t i = 0; i < mv.size(); ++i) exceeds = exceeds || mv[i] > 2.0 * v.certificate[i] + 1e-9;
  if (exceeds) {
    v.cls = DynkinClass::exceeds_2;
    v.name = "norm > 2";
  } else {
    v.cls = DynkinClass::other_subcritical;
    v.name = "other subcritical";
  }
  return v;
}

AInfinityResult a_infinity_check(const FusionGraph& g) {
  AInfinityResult res;
  const auto& a = g.adjacency;
  const std::size_t n = a.rows();
  auto on_boundary = [&](std::size_t i) { return !g.boundary.empty() && g.boundary[i]; };
  auto fail = [&](std::string why) {
    res.passed = false;
    res.reason = std::move(why);
    return res;
  };
  std::vector<std::size_t> deg(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a(i, i) != 0) return fail("loop at " + g.vertices[i].id());
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (a(i, j) != a(j, i)) return fail("graph is not symmetric");
      if (a(i, j) > 1) return fail("multiple edge " + g.vertices[i].id() + "-" + g.vertices[j].id());
      deg[i] += static_cast<std::size_t>(a(i, j));
    }
    if (deg[i] > 2) return fail("degree " + std::to_string(deg[i]) + " at " + g.vertices[i].id());
  }
  std::vector<bool> seen(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++res.components;
    std::vector<std::size_t> comp, stack = {s};
    seen[s] = true;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (std::size_t w = 0; w < n; ++w)
        if (a(v, w) != 0 && !seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
    std::size_t edge_ends = 0, origins = 0;
    for (auto v : comp) {
      edge_ends += deg[v];
      if (deg[v] < 2 && !on_boundary(v)) ++origins;
    }
    if (edge_ends / 2 + 1 != comp.size()) return fail("cycle through " + g.vertices[s].id());
    if (origins > 1) return fail("finite path component at " + g.vertices[s].id());
  }
  res.passed = true;
  return res;
}

std::string export_dot(const FusionGraph& g) {
  const bool directed = g.orientation == Orientation::directed;
  std::ostringstream os;
  os << (directed ? "digraph G {\n" : "graph G {\n");
  const std::size_t n = g.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    os << "  n" << i << " [label=\"" << g.vertices[i].id();
    if (!g.dims.empty()) {
      std::ostringstream d;
      d.precision(10);
      d << g.dims[i];
      os << "\\nd=" << d.str();
    }
    os << "\"];\n";
  }
  const char* arrow = directed ? " -> " : " -- ";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = directed ? 0 : i; j < n; ++j)
      for (std::int64_t k = 0; k < g.adjacency(i, j); ++k) os << "  n" << i << arrow << "n" << j << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace fusion
