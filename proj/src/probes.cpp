#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "fusion/errors.hpp"
#include "fusion/torsion.hpp"

namespace fusion {

std::string ProbeReport::to_string() const {
  std::ostringstream os;
  os << (passed ? "pass" : "fail");
  for (const auto& v : violations) os << "\n  violation: " << v;
  for (const auto& n : notes) os << "\n  note: " << n;
  return os.str();
}

// --- A(1) ------------------------------------------------------------------

std::vector<std::int64_t> chebyshev_coeffs(std::size_t n) {
  const auto ring = a1();
  const RingElement one("1");
  std::vector<RingElement> powers{RingElement("0")};
  for (std::size_t k = 1; k <= n; ++k) powers.push_back(fuse(*ring, powers.back(), one));

  // 1^k = k + lower labels, so peel off the top label repeatedly.
  std::vector<std::int64_t> p(n + 1, 0);
  RingElement rest(Label(std::to_string(n)));
  for (std::size_t k = n + 1; k-- > 0;) {
    const Coeff c = rest.coefficient(Label(std::to_string(k)));
    p[k] = to_int64(c);
    rest.add(powers[k], -c);
  }
  if (!rest.is_zero()) throw std::logic_error("chebyshev expansion did not terminate");

  RingElement check;
  for (std::size_t k = 0; k <= n; ++k) check.add(powers[k], p[k]);
  if (!(check == RingElement(Label(std::to_string(n))))) throw std::logic_error("chebyshev re-expansion failed");
  return p;
}

// --- A(2) ------------------------------------------------------------------

UnfoldedModule a2_unfold(const TruncatedModule& t) {
  const IntMatrix& plus = t.matrix("p+");
  const IntMatrix& minus = t.matrix("p-");
  const std::size_t n = t.vertices.size();
  UnfoldedModule u;
  auto& m = u.module;
  m.generators = {"1"};
  for (std::size_t b = 0; b < n; ++b) {
    for (const char* sign : {"-", "+"}) {
      m.vertices.push_back(t.vertices[b].id() + "|" + sign);
      m.levels.push_back(t.levels.empty() ? 0 : t.levels[b]);
      m.boundary.push_back(t.boundary.empty() ? false : bool(t.boundary[b]));
      if (!t.dims.empty()) m.dims.push_back(t.dims[b]);
    }
  }
  // b- sits at 2b, b+ at 2b+1.
  IntMatrix adj(2 * n, 2 * n);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t c = 0; c < n; ++c) {
      adj(2 * b + 1, 2 * c) += plus(b, c);
      adj(2 * b, 2 * c + 1) += minus(b, c);
    }
  m.matrices = {adj};
  const auto g = fusion_graph(m, "1");
  u.graph = symmetrize(g, adj.is_symmetric() ? Symmetrization::assume_symmetric : Symmetrization::sum);
  return u;
}

UnfoldedModule a2_unfold(const LazyModule& m, std::size_t depth) {
  return a2_unfold(truncate(m, {"p+", "p-"}, depth));
}

namespace {

std::string vertex_name(const TruncatedModule& t, std::size_t i) { return t.vertices[i].id(); }

}  // namespace

ProbeReport a2_structure_check(const TruncatedModule& t) {
  ProbeReport rep;
  const IntMatrix& P = t.matrix("p+");
  const std::size_t n = t.vertices.size();
  if (n == 0) {
    rep.notes.push_back("empty truncation");
    return rep;
  }
  auto interior = [&](std::size_t i) { return t.boundary.empty() || !t.boundary[i]; };

  std::vector<std::int64_t> in(n, 0), out(n, 0);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t c = 0; c < n; ++c) {
      out[b] += P(b, c);
      in[c] += P(b, c);
    }

  bool loops = false, multi = false;
  for (std::size_t b = 0; b < n; ++b) {
    if (P(b, b) != 0) {
      loops = true;
      rep.violate("loop at " + vertex_name(t, b));
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (P(b, c) > 1) {
        multi = true;
        rep.violate("multiple edge " + vertex_name(t, b) + " -> " + vertex_name(t, c));
      }
      if (b < c && P(b, c) > 0 && P(c, b) > 0) {
        multi = true;
        rep.violate("opposite edges between " + vertex_name(t, b) + " and " + vertex_name(t, c));
      }
    }
  }
  if (!loops) rep.notes.push_back("loop-free");
  if (!multi) rep.notes.push_back("multi-edge-free");

  for (std::size_t b = 0; b < n; ++b) {
    if (in[b] > 2 || out[b] > 2)
      rep.violate("degree at " + vertex_name(t, b) + ": in " + std::to_string(in[b]) + ", out " +
                  std::to_string(out[b]));
    if (interior(b) && in[b] == 2 && out[b] == 2)
      rep.violate("forbidden configuration (two in, two out) at " + vertex_name(t, b));
  }

  // Underlying graph Lambda.
  std::vector<std::vector<std::pair<std::size_t, bool>>> nbr(n);  // (vertex, edge leaves this one)
  std::size_t edges = 0;
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t c = 0; c < n; ++c) {
      if (b == c || (P(b, c) == 0 && P(c, b) == 0)) continue;
      if (b < c) ++edges;
      nbr[b].push_back({c, P(b, c) > 0});
    }

  // Root: a vertex of minimal dimension (first such in vertex order).
  std::vector<double> dims = t.dims;
  if (dims.empty()) {
    rep.violate("no dimension data");
    return rep;
  }
  std::size_t root = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (dims[i] < dims[root] - 1e-9) root = i;
  rep.notes.push_back("root " + vertex_name(t, root));

  std::vector<std::size_t> parent(n, n), order{root};
  std::vector<bool> seen(n, false);
  seen[root] = true;
  for (std::size_t q = 0; q < order.size(); ++q)
    for (auto [c, fwd] : nbr[order[q]])
      if (!seen[c]) {
        seen[c] = true;
        parent[c] = order[q];
        order.push_back(c);
      }
  const bool connected = order.size() == n;
  const bool tree = connected && edges + 1 == n;
  if (!connected) rep.violate("underlying graph is disconnected");
  if (connected && !tree) rep.violate("underlying graph has a cycle (" + std::to_string(edges) + " edges, " +
                                      std::to_string(n) + " vertices)");
  if (tree) rep.notes.push_back("tree");

  if (n > 1 && interior(root)) {
    if (in[root] != 1 || out[root] != 1) {
      rep.violate("root shape: in " + std::to_string(in[root]) + ", out " + std::to_string(out[root]));
    } else {
      for (auto [c, fwd] : nbr[root])
        if (std::abs(dims[c] - 2 * dims[root]) > 1e-9 * std::max(1.0, dims[c]))
          rep.violate("root neighbour " + vertex_name(t, c) + " does not have twice the root dimension");
      rep.notes.push_back("b <- b0 -> c at the root");
    }
  }

  bool increasing = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (parent[i] == n) continue;
    if (!(dims[i] > dims[parent[i]] + 1e-9)) {
      increasing = false;
      rep.violate("dimension does not increase from " + vertex_name(t, parent[i]) + " to " + vertex_name(t, i));
    }
  }
  if (increasing && connected) rep.notes.push_back("dimensions strictly increase along root paths");

  // Gamma_F(pi+): away from the root every vertex has exactly one child along
  // an outgoing edge and one along an incoming edge.
  bool binary = tree;
  if (tree) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!interior(b)) continue;
      int out_children = 0, in_children = 0;
      for (auto [c, fwd] : nbr[b]) {
        if (parent[c] != b) continue;
        (fwd ? out_children : in_children)++;
      }
      if (out_children != 1 || in_children != 1) {
        binary = false;
        rep.violate("branching at " + vertex_name(t, b) + ": " + std::to_string(out_children) + " out, " +
                    std::to_string(in_children) + " in");
      }
    }
  }
  if (binary) rep.notes.push_back("binary branching as in the standard module");
  return rep;
}

ProbeReport a2_structure_check(const LazyModule& m, std::size_t depth) {
  return a2_structure_check(truncate(m, {"p+", "p-"}, depth));
}

// --- free products ---------------------------------------------------------

namespace {

std::string letter_suffix(std::size_t factor_index) { return "@" + std::to_string(factor_index + 1); }

// Label of a factor basis element as a letter of the free product.
Label letter(const BasedRingTable& f, std::size_t factor_index, const Label& a) {
  if (a == f.unit()) return "e";
  return a.id() + letter_suffix(factor_index);
}

bool ends_with_factor(const Label& w, std::size_t factor_index) {
  if (w.id() == "e") return false;
  const auto& id = w.id();
  const auto dot = id.rfind('.');
  const std::string last = dot == std::string::npos ? id : id.substr(dot + 1);
  const auto suf = letter_suffix(factor_index);
  return last.size() > suf.size() && last.compare(last.size() - suf.size(), suf.size(), suf) == 0;
}

Label strip_factor(const Label& w, std::size_t factor_index) {
  if (!ends_with_factor(w, factor_index)) return w;
  const auto dot = w.id().rfind('.');
  return dot == std::string::npos ? Label("e") : Label(w.id().substr(0, dot));
}

}  // namespace

LazyModulePtr free_product_factor_quotient(const RingPtr& ring, const TablePtr& factor, std::size_t factor_index) {
  const auto dims = frobenius_perron_dims(*factor);
  for (const auto& [l, x] : dims.values())
    if (std::abs(x - 1.0) > 1e-9) throw NotAGroup("factor " + factor->name() + " is not a group ring");
  LazyModuleSpec s;
  s.name = ring->name() + "/" + factor->name();
  s.ring = ring;
  s.origin = "e";
  s.contains = [ring, factor_index](const Label& l) {
    return ring->contains(l) && !ends_with_factor(l, factor_index);
  };
  s.act = [ring, factor_index](const Label& a, const Label& b) {
    ModuleElement out;
    for (const auto& [w, c] : ring->multiply(a, b).terms()) out.add(strip_factor(w, factor_index), c);
    return out;
  };
  s.level = [ring](const Label& l) { return ring->level(l); };
  s.enumerate_level = [ring, factor_index](std::size_t n) {
    std::vector<Label> out;
    for (auto& l : ring->enumerate_level(n))
      if (!ends_with_factor(l, factor_index)) out.push_back(l);
    return out;
  };
  s.dimension = [ring](const Label& l) { return ring->known_dimension(l); };
  return std::make_shared<const LazyModule>(std::move(s));
}

namespace {

constexpr std::size_t kClosureLimit = 256;

// B_s^b: the closure of b under the letters of factor s, as a finite module
// over that factor. Empty if the closure exceeds the limit.
std::optional<BasedModuleTable> factor_submodule(const LazyModule& m, const TablePtr& f, std::size_t s,
                                                 const Label& b) {
  std::vector<Label> verts{b};
  std::map<Label, std::size_t> pos{{b, 0}};
  for (std::size_t q = 0; q < verts.size(); ++q) {
    for (const auto& a : f->basis()) {
      for (const auto& [c, k] : m.act(letter(*f, s, a), verts[q]).terms()) {
        if (pos.count(c)) continue;
        if (verts.size() >= kClosureLimit) return std::nullopt;
        pos.emplace(c, verts.size());
        verts.push_back(c);
      }
    }
  }
  std::vector<IntMatrix> mats;
  for (const auto& a : f->basis()) {
    IntMatrix mat(verts.size(), verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (const auto& [c, k] : m.act(letter(*f, s, a), verts[i]).terms()) mat(i, pos.at(c)) = to_int64(k);
    mats.push_back(std::move(mat));
  }
  return BasedModuleTable(f, verts, std::move(mats), "B");
}

// Vertex c of a factor submodule with gamma * c irreducible for every gamma.
std::optional<Label> unit_position(const BasedModuleTable& sub, const Label& prefer) {
  auto ok = [&](std::size_t c) {
    for (std::size_t a = 0; a < sub.ring_table().size(); ++a) {
      std::int64_t total = 0;
      for (std::size_t x = 0; x < sub.size(); ++x) total += sub.N(a, c, x);
      if (total != 1) return false;
    }
    return true;
  };
  if (ok(sub.index(prefer))) return prefer;
  for (std::size_t c = 0; c < sub.size(); ++c)
    if (ok(c)) return sub.label(c);
  return std::nullopt;
}

}  // namespace

FreeProductProbe free_product_module_probe(const std::vector<TablePtr>& factors, const LazyModule& m,
                                           std::size_t depth) {
  FreeProductProbe out;
  auto& rep = out.report;
  if (depth == 0) {
    rep.notes.push_back("depth 0: nothing to check");
    out.e = m.spec().origin;
    return out;
  }
  const auto& ring = m.ring();
  const auto verts = m.labels_up_to(depth);

  // Every per-factor submodule must be the standard module of that factor.
  std::map<std::pair<Label, std::size_t>, BasedModuleTable> subs;
  for (const auto& b : verts) {
    for (std::size_t s = 0; s < factors.size(); ++s) {
      auto sub = factor_submodule(m, factors[s], s, b);
      if (!sub) {
        rep.violate("factor " + std::to_string(s + 1) + ": submodule at " + b.id() + " exceeds " +
                    std::to_string(kClosureLimit) + " vertices");
        if (!out.obstruction_factor) out.obstruction_factor = s + 1;
        continue;
      }
      if (!isomorphic(*sub, *standard_module(factors[s]))) {
        rep.violate("factor " + std::to_string(s + 1) + ": submodule at " + b.id() + " (size " +
                    std::to_string(sub->size()) + ") is not the standard module of " + factors[s]->name());
        if (!out.obstruction_factor) out.obstruction_factor = s + 1;
        continue;
      }
      subs.emplace(std::make_pair(b, s), std::move(*sub));
    }
  }
  if (!rep.passed) return out;

  // Descent: move to the unit position of a factor submodule until b sits at
  // the unit position for every factor. Dimensions drop each step.
  Label b = m.spec().origin;
  for (std::size_t step = 0; step < 64; ++step) {
    bool moved = false;
    for (std::size_t s = 0; s < factors.size() && !moved; ++s) {
      auto it = subs.find({b, s});
      std::optional<BasedModuleTable> local;
      if (it == subs.end()) local = factor_submodule(m, factors[s], s, b);
      const BasedModuleTable& sub = it != subs.end() ? it->second : *local;
      const auto c = unit_position(sub, b);
      if (!c) {
        rep.violate("factor " + std::to_string(s + 1) + ": no unit position in the submodule at " + b.id());
        out.obstruction_factor = s + 1;
        return out;
      }
      if (*c != b) {
        rep.notes.push_back("descent " + b.id() + " -> " + c->id());
        b = *c;
        moved = true;
      }
    }
    if (!moved) break;
  }
  out.e = b;

  // alpha -> alpha * e is injective into J and intertwines the letters.
  std::map<Label, Label> image;
  std::set<Label> used;
  const auto words = ring.labels_up_to(depth);
  for (const auto& a : words) {
    const auto x = m.act(a, b);
    if (!x.is_basis_element()) {
      rep.violate(a.id() + " * e is not a basis element");
      return out;
    }
    const Label y = x.terms().begin()->first;
    if (!used.insert(y).second) {
      rep.violate(a.id() + " * e coincides with another word");
      return out;
    }
    image.emplace(a, y);
  }
  std::size_t checked = 0;
  for (const auto& a : words) {
    if (ring.level(a) >= depth) continue;
    for (std::size_t s = 0; s < factors.size(); ++s)
      for (const auto& g : factors[s]->basis()) {
        const Label l = letter(*factors[s], s, g);
        ModuleElement expect;
        for (const auto& [w, k] : ring.multiply(l, a).terms()) {
          auto it = image.find(w);
          if (it == image.end()) {
            expect = ModuleElement();
            break;
          }
          expect.add(it->second, k);
        }
        if (expect.is_zero()) continue;
        ++checked;
        if (!(m.act(l, image.at(a)) == expect))
          rep.violate("action of " + l.id() + " on " + a.id() + " * e does not match the ring product");
      }
  }
  if (rep.passed)
    rep.notes.push_back("identification alpha -> alpha * e with e = " + b.id() + " on " +
                        std::to_string(words.size()) + " words, " + std::to_string(checked) + " products");
  return out;
}

// --- tensor products -------------------------------------------------------

namespace {

bool preserves_structure(const BasedRingTable& a, const BasedRingTable& b, const std::map<Label, Label>& f) {
  for (const auto& x : a.basis())
    for (const auto& y : a.basis()) {
      const auto prod = a.multiply(x, y).map_labels([&](const Label& l) { return f.at(l); });
      if (!(prod == b.multiply(f.at(x), f.at(y)))) return false;
    }
  return true;
}

}  // namespace

TensorProbe tensor_obstruction_probe(const TablePtr& r1, const TablePtr& r2, const ModuleSearchConfig& config) {
  TensorProbe out;
  auto& rep = out.report;
  const auto t = tensor_product(*r1, *r2);
  out.verdict = is_torsion_free(t, config);
  rep.notes.push_back("tensor product: " + to_string(out.verdict.status));
  if (out.verdict.status != TorsionStatus::not_torsion_free) return out;

  const Label u1 = r1->unit(), u2 = r2->unit();
  for (const auto& w : out.verdict.witnesses) {
    auto act1 = [&](const Label& a, const Label& x) { return w->act(pair_label(a, u2), x); };
    auto act2 = [&](const Label& a, const Label& x) { return w->act(pair_label(u1, a), x); };

    // e: every factor element maps it to a single vertex, injectively per factor.
    std::optional<Label> e;
    for (const auto& x : w->basis()) {
      bool ok = true;
      for (int side = 0; side < 2 && ok; ++side) {
        const auto& r = side == 0 ? *r1 : *r2;
        std::set<Label> seen;
        for (const auto& a : r.basis()) {
          const auto y = side == 0 ? act1(a, x) : act2(a, x);
          ok = ok && y.is_basis_element() && seen.insert(y.terms().begin()->first).second;
        }
      }
      if (ok) {
        e = x;
        break;
      }
    }
    if (!e) {
      rep.violate("witness " + w->name() + ": no vertex e with irreducible, distinct factor images");
      continue;
    }

    // <e,e> contains alpha1 (x) dual(alpha2) with not both units.
    const auto ee = inner(*w, *e, *e);
    std::optional<std::pair<Label, Label>> pick;
    for (const auto& a1 : r1->basis()) {
      for (const auto& a2 : r2->basis()) {
        if (a1 == u1 && a2 == u2) continue;
        if (ee.coefficient(pair_label(a1, r2->dual(a2))) != 0) {
          pick = {a1, a2};
          break;
        }
      }
      if (pick) break;
    }
    if (!pick) {
      rep.violate("witness " + w->name() + ": <e,e> is the unit");
      continue;
    }
    const auto [a1, a2] = *pick;
    if (!(act1(a1, *e) == act2(a2, *e))) {
      rep.violate("witness " + w->name() + ": alpha1 * e != alpha2 * e");
      continue;
    }
    const auto s1 = subring_generated(*r1, a1), s2 = subring_generated(*r2, a2);
    out.subring1 = s1.labels;
    out.subring2 = s2.labels;
    if (!s1.complete || !s2.complete) {
      rep.violate("generated subrings are not finite");
      continue;
    }
    if (s1.labels.size() < 2 || s2.labels.size() < 2) {
      rep.violate("generated subrings are trivial");
      continue;
    }
    // beta1 <-> beta2 with beta1 * e = beta2 * e; then beta1 -> dual(beta2) is a ring map.
    std::map<Label, Label> match;
    for (const auto& b1 : s1.labels) {
      const auto x = act1(b1, *e);
      for (const auto& b2 : s2.labels)
        if (act2(b2, *e) == x) match.emplace(b1, r2->dual(b2));
    }
    if (match.size() != s1.labels.size() || s1.labels.size() != s2.labels.size()) {
      rep.violate("no bijection between the generated subrings through e");
      continue;
    }
    const auto t1 = restrict_to_subring(*r1, s1.labels);
    const auto t2 = restrict_to_subring(*r2, s2.labels);
    out.subrings_isomorphic = preserves_structure(*t1, *t2, match);
    if (!out.subrings_isomorphic) {
      rep.violate("matched subrings are not isomorphic");
      continue;
    }
    rep.notes.push_back("witness " + w->name() + ": e = " + e->id() + ", alpha1 = " + a1.id() +
                        ", alpha2 = " + a2.id() + ", subrings of size " + std::to_string(s1.labels.size()));
  }
  return out;
}

}  // namespace fusion
