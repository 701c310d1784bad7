#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "fusion/errors.hpp"
#include "fusion/modules.hpp"

namespace fusion {

std::vector<Label> LazyModule::labels_up_to(std::size_t depth) const {
  if (spec_.finite_basis) return *spec_.finite_basis;
  std::vector<Label> out;
  for (std::size_t k = 0; k <= depth; ++k) {
    auto level = spec_.enumerate_level(k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

LazyModulePtr standard_lazy_module(const RingPtr& ring) {
  LazyModuleSpec s;
  s.name = "standard(" + ring->name() + ")";
  s.ring = ring;
  s.origin = ring->unit();
  s.contains = [ring](const Label& l) { return ring->contains(l); };
  s.act = [ring](const Label& a, const Label& b) { return ring->multiply(a, b); };
  s.level = [ring](const Label& l) { return ring->level(l); };
  s.enumerate_level = [ring](std::size_t n) { return ring->enumerate_level(n); };
  s.dimension = [ring](const Label& l) { return ring->known_dimension(l); };
  s.support_bound = [ring](const Label& b, const Label& c) -> std::optional<std::size_t> {
    return ring->level(b) + ring->level(c);
  };
  return std::make_shared<const LazyModule>(std::move(s));
}

std::string to_string(Tri t) {
  switch (t) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    case Tri::undecided: return "undecided";
  }
  return "undecided";
}

namespace {

Coeff multiplicity(const LazyModule& m, const Label& alpha, const Label& b, const Label& c) {
  return m.act(alpha, b).coefficient(c);
}

}  // namespace

CofinitenessResult is_cofinite(const LazyModule& m, std::size_t depth) {
  const auto& spec = m.spec();
  const auto& ring = m.ring();
  CofinitenessResult res;
  if (ring.is_finite()) {
    res.verdict = Tri::yes;
    res.reason = "finite ring";
    return res;
  }
  if (spec.finite_basis) {
    // Every alpha acts nontrivially on the origin, so infinitely many alpha
    // hit one of finitely many targets.
    res.verdict = Tri::no;
    res.reason = "finite module over an infinite ring";
    return res;
  }

  const Label& o = spec.origin;
  std::optional<std::size_t> bound;
  if (spec.support_bound) bound = spec.support_bound(o, o);
  std::optional<double> budget;
  if (spec.dimension) budget = spec.dimension(o);

  double spent = 0.0;
  bool dims_known = budget.has_value();
  std::size_t highest = 0;
  bool found_any = false;
  for (std::size_t k = 0; k <= depth; ++k) {
    for (const auto& alpha : ring.enumerate_level(k)) {
      const Coeff v = multiplicity(m, alpha, o, o);
      if (v == 0) continue;
      found_any = true;
      highest = k;
      if (bound && k > *bound) {
        res.verdict = Tri::undecided;
        res.reason = "support bound violated by " + alpha.id();
        return res;
      }
      if (dims_known) {
        const auto d = ring.known_dimension(ring.dual(alpha));
        if (d) spent += static_cast<double>(v) * *d;
        else dims_known = false;
      }
    }
    if (bound && k >= *bound) {
      res.verdict = Tri::yes;
      res.reason = "support of <" + o.id() + "," + o.id() + "> lies in levels <= " + std::to_string(*bound);
      return res;
    }
    if (dims_known && spent >= *budget - 1e-9) {
      res.verdict = Tri::yes;
      res.reason = "dimension budget exhausted at level " + std::to_string(k);
      return res;
    }
  }
  res.verdict = Tri::undecided;
  res.reason = found_any ? "terms found up to level " + std::to_string(highest) + ", no certificate by depth " +
                               std::to_string(depth)
                         : "no certificate by depth " + std::to_string(depth);
  return res;
}

RingElement inner(const LazyModule& m, const Label& b, const Label& c) {
  const auto& spec = m.spec();
  std::optional<std::size_t> bound;
  if (spec.support_bound) bound = spec.support_bound(b, c);
  if (!bound && !m.ring().is_finite())
    throw InfiniteInnerProduct("no support bound for <" + b.id() + "," + c.id() + ">");
  const auto& ring = m.ring();
  const std::size_t top = bound ? *bound : 1;
  RingElement out;
  for (std::size_t k = 0; k <= top; ++k)
    for (const auto& alpha : ring.enumerate_level(k))
      if (auto v = multiplicity(m, alpha, b, c); v != 0) out.add(ring.dual(alpha), v);
  return out;
}

std::size_t TruncatedModule::index(const Label& l) const {
  auto it = std::find(vertices.begin(), vertices.end(), l);
  if (it == vertices.end()) throw LabelNotInRing(l.id());
  return static_cast<std::size_t>(it - vertices.begin());
}

const IntMatrix& TruncatedModule::matrix(const Label& g) const {
  auto it = std::find(generators.begin(), generators.end(), g);
  if (it == generators.end()) throw LabelNotInRing(g.id());
  return matrices[static_cast<std::size_t>(it - generators.begin())];
}

TruncatedModule truncate(const LazyModule& m, const std::vector<Label>& generators, std::size_t depth) {
  const auto& spec = m.spec();
  TruncatedModule t;
  t.generators = generators;
  if (spec.finite_basis) {
    t.vertices = *spec.finite_basis;
    for (const auto& v : t.vertices) t.levels.push_back(spec.level ? spec.level(v) : 0);
  } else {
    for (std::size_t k = 0; k <= depth; ++k)
      for (const auto& l : spec.enumerate_level(k)) {
        t.vertices.push_back(l);
        t.levels.push_back(k);
      }
  }
  std::map<Label, std::size_t> pos;
  for (std::size_t i = 0; i < t.vertices.size(); ++i) pos[t.vertices[i]] = i;
  const std::size_t n = t.vertices.size();
  t.boundary.assign(n, false);
  for (const auto& g : generators) {
    m.ring().require(g);
    IntMatrix mat(n, n);
    for (std::size_t b = 0; b < n; ++b)
      for (const auto& [c, v] : m.act(g, t.vertices[b]).terms()) {
        auto it = pos.find(c);
        if (it == pos.end()) t.boundary[b] = true;
        else mat(b, it->second) = to_int64(v);
      }
    t.matrices.push_back(std::move(mat));
  }
  if (spec.dimension) {
    for (const auto& v : t.vertices) {
      auto d = spec.dimension(v);
      if (!d) {
        t.dims.clear();
        break;
      }
      t.dims.push_back(*d);
    }
  }
  return t;
}

}  // namespace fusion
