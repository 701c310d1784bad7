#include "fusion/modules.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "fusion/errors.hpp"

namespace fusion {

BasedModuleTable::BasedModuleTable(ModuleData data) : name_(std::move(data.name)), ring_(std::move(data.ring)) {
  if (!ring_) throw StructuralError("module without a ring");
  basis_ = std::move(data.basis);
  build_index();
  const std::size_t n = basis_.size();
  matrices_.assign(ring_->size(), IntMatrix(n, n));
  std::vector<char> seen(ring_->size() * n, 0);
  for (const auto& [key, value] : data.action) {
    if (!ring_->contains(key.first)) throw StructuralError("action references unknown ring label " + key.first.id());
    const std::size_t a = ring_->index(key.first);
    auto it = index_.find(key.second);
    if (it == index_.end()) throw StructuralError("action references unknown module label " + key.second.id());
    const std::size_t b = it->second;
    seen[a * n + b] = 1;
    for (const auto& [c, coeff] : value.terms()) {
      auto jt = index_.find(c);
      if (jt == index_.end()) throw StructuralError("action references unknown module label " + c.id());
      if (coeff < 0) throw StructuralError("negative multiplicity in " + key.first.id() + "*" + key.second.id());
      try {
        matrices_[a](b, jt->second) = to_int64(coeff);
      } catch (const FusionError&) {
        throw StructuralError("multiplicity too large");
      }
    }
  }
  for (std::size_t a = 0; a < ring_->size(); ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (!seen[a * n + b])
        throw StructuralError("missing action entry " + ring_->label(a).id() + "*" + basis_[b].id());
}

BasedModuleTable::BasedModuleTable(TablePtr ring, std::vector<Label> basis, std::vector<IntMatrix> matrices,
                                   std::string name)
    : name_(std::move(name)), ring_(std::move(ring)) {
  if (!ring_) throw StructuralError("module without a ring");
  const std::size_t n = basis.size();
  if (matrices.size() != ring_->size()) throw StructuralError("expected one matrix per ring basis element");
  for (const auto& m : matrices)
    if (m.rows() != n || m.cols() != n) throw StructuralError("action matrix has the wrong shape");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return basis[x] < basis[y]; });
  for (auto i : order) basis_.push_back(basis[i]);
  build_index();
  for (const auto& m : matrices) {
    if (!m.is_nonnegative()) throw StructuralError("negative multiplicity");
    IntMatrix p(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) p(r, c) = m(order[r], order[c]);
    matrices_.push_back(std::move(p));
  }
}

void BasedModuleTable::build_index() {
  std::sort(basis_.begin(), basis_.end());
  if (basis_.empty()) throw StructuralError("empty module basis");
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (!index_.emplace(basis_[i], i).second) throw StructuralError("duplicate module label " + basis_[i].id());
}

std::size_t BasedModuleTable::index(const Label& l) const {
  auto it = index_.find(l);
  if (it == index_.end()) throw LabelNotInRing(l.id());
  return it->second;
}

ModuleElement BasedModuleTable::act(const Label& alpha, const Label& b) const {
  const auto& m = matrix(alpha);
  const std::size_t bi = index(b);
  ModuleElement out;
  for (std::size_t c = 0; c < size(); ++c)
    if (m(bi, c) != 0) out.add(basis_[c], m(bi, c));
  return out;
}

ModuleData BasedModuleTable::to_data() const {
  ModuleData d;
  d.name = name_;
  d.ring = ring_;
  d.basis = basis_;
  for (std::size_t a = 0; a < ring_->size(); ++a)
    for (std::size_t b = 0; b < size(); ++b) d.action[{ring_->label(a), basis_[b]}] = act(ring_->label(a), basis_[b]);
  return d;
}

ModuleElement act(const BasedModuleTable& m, const RingElement& x, const ModuleElement& b) {
  ModuleElement out;
  for (const auto& [alpha, u] : x.terms()) {
    m.ring_table().require(alpha);
    for (const auto& [l, v] : b.terms()) out.add(m.act(alpha, l), u * v);
  }
  return out;
}

RingElement inner(const BasedModuleTable& m, const Label& b, const Label& c) {
  const auto& ring = m.ring_table();
  const std::size_t bi = m.index(b), ci = m.index(c);
  RingElement out;
  for (std::size_t a = 0; a < ring.size(); ++a)
    if (auto v = m.N(a, bi, ci); v != 0) out.add(ring.label(ring.dual_index(a)), v);
  return out;
}

// --- verification ----------------------------------------------------------

namespace {

void fail(AxiomCheck& check, std::string witness) {
  if (check.passed) {
    check.passed = false;
    check.witness = std::move(witness);
  }
}

std::string triple(const Label& a, const Label& b, const Label& c) {
  return "(" + a.id() + "," + b.id() + "," + c.id() + ")";
}

}  // namespace

VerificationReport verify_module(const BasedModuleTable& m) {
  VerificationReport rep;
  const auto& ring = m.ring_table();
  const std::size_t n = m.size(), r = ring.size();
  const auto& I = ring.basis();
  const auto& J = m.basis();

  AxiomCheck cofinite{"cofiniteness", 1, is_cofinite(m), {}};
  AxiomCheck rows{"row_finiteness", 2, true, {}};  // dense finite table

  AxiomCheck unit{"unit_law", 3, true, {}};
  const auto& one = m.matrix(ring.unit_index());
  for (std::size_t b = 0; b < n && unit.passed; ++b)
    for (std::size_t c = 0; c < n && unit.passed; ++c)
      if (one(b, c) != (b == c ? 1 : 0)) fail(unit, "(" + J[b].id() + "," + J[c].id() + ")");

  AxiomCheck recip{"frobenius_reciprocity", 4, true, {}};
  for (std::size_t a = 0; a < r && recip.passed; ++a)
    for (std::size_t b = 0; b < n && recip.passed; ++b)
      for (std::size_t c = 0; c < n && recip.passed; ++c)
        if (m.N(a, b, c) != m.N(ring.dual_index(a), c, b)) fail(recip, triple(I[a], J[b], J[c]));

  // sum_e N_{bc}^e N_{ae}^d = sum_g N_{ab}^g N_{gc}^d, i.e. M(b)M(a) = sum_g N_{ab}^g M(g)
  AxiomCheck assoc{"associativity", 5, true, {}};
  for (std::size_t a = 0; a < r && assoc.passed; ++a)
    for (std::size_t b = 0; b < r && assoc.passed; ++b) {
      IntMatrix lhs = m.matrix(b) * m.matrix(a);
      IntMatrix rhs(n, n);
      for (const auto& [g, v] : ring.product(a, b)) rhs = rhs + v * m.matrix(g);
      if (lhs == rhs) continue;
      for (std::size_t c = 0; c < n && assoc.passed; ++c)
        for (std::size_t d = 0; d < n && assoc.passed; ++d)
          if (lhs(c, d) != rhs(c, d)) fail(assoc, "(" + I[a].id() + "," + I[b].id() + "," + J[c].id() + "," + J[d].id() + ")");
    }

  AxiomCheck nonzero{"nonvanishing_action", 0, true, {}};
  for (std::size_t a = 0; a < r && nonzero.passed; ++a)
    for (std::size_t b = 0; b < n && nonzero.passed; ++b) {
      bool any = false;
      for (std::size_t c = 0; c < n && !any; ++c) any = m.N(a, b, c) != 0;
      if (!any) fail(nonzero, "(" + I[a].id() + "," + J[b].id() + ")");
    }

  rep.checks = {cofinite, rows, unit, recip, assoc, nonzero};
  return rep;
}

std::vector<std::vector<Label>> connected_components(const BasedModuleTable& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& mat : m.matrices())
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (mat(b, c) != 0) parent[find(b)] = find(c);
  std::map<std::size_t, std::vector<Label>> groups;
  for (std::size_t b = 0; b < n; ++b) groups[find(b)].push_back(m.label(b));
  std::vector<std::vector<Label>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
  return out;
}

bool is_connected(const BasedModuleTable& m) { return connected_components(m).size() == 1; }

bool is_cofinite(const BasedModuleTable&) { return true; }

double ModuleDimensionVector::at(const Label& b) const {
  auto it = values.find(b);
  if (it == values.end()) throw LabelNotInRing(b.id());
  return it->second;
}

ModuleDimensionVector dim_vector(const BasedModuleTable& m, const DimensionFunction& dims, const Label& anchor,
                                 double tol) {
  ModuleDimensionVector out;
  out.anchor = anchor;
  m.index(anchor);
  for (const auto& b : m.basis()) {
    const double d = dims.of(inner(m, b, anchor));
    if (!(d > 0)) throw IncompatibleDims("d(" + b.id() + ") is not positive; module not connected?");
    out.values[b] = d;
  }
  const auto& ring = m.ring_table();
  for (std::size_t a = 0; a < ring.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b) {
      double lhs = 0;
      for (std::size_t c = 0; c < m.size(); ++c) lhs += static_cast<double>(m.N(a, b, c)) * out.values[m.label(c)];
      const double rhs = dims.at(ring.label(a)) * out.values[m.label(b)];
      if (std::abs(lhs - rhs) > tol * std::max(1.0, std::abs(rhs)))
        throw IncompatibleDims("d(" + ring.label(a).id() + "*" + m.label(b).id() + ") != d(" + ring.label(a).id() +
                               ")d(" + m.label(b).id() + ")");
    }
  return out;
}

// --- constructions ---------------------------------------------------------

ModulePtr standard_module(const TablePtr& ring) {
  std::vector<IntMatrix> mats;
  for (std::size_t a = 0; a < ring->size(); ++a) mats.push_back(ring->left_matrix(a));
  return std::make_shared<const BasedModuleTable>(ring, ring->basis(), std::move(mats), "standard(" + ring->name() + ")");
}

ModulePtr quotient_module(const TablePtr& ring, const std::vector<Label>& subgroup) {
  const auto dims = frobenius_perron_dims(*ring);
  const auto units = group_of_units(*ring, dims);
  const std::set<Label> unit_set(units.begin(), units.end());
  std::set<Label> h(subgroup.begin(), subgroup.end());
  if (!h.count(ring->unit())) throw NotAGroup("subgroup does not contain the unit");
  for (const auto& g : h) {
    if (!unit_set.count(g)) throw NotAGroup(g.id() + " is not invertible");
    if (!h.count(ring->dual(g))) throw NotAGroup("subgroup not closed under inverses at " + g.id());
    for (const auto& k : h) {
      const auto p = ring->multiply(g, k);
      if (!h.count(p.terms().begin()->first)) throw NotAGroup("subgroup not closed under products");
    }
  }

  // Orbit of b under right multiplication, labelled by its least member.
  const std::size_t n = ring->size();
  std::vector<Label> rep(n);
  std::vector<Label> reps;
  for (std::size_t b = 0; b < n; ++b) {
    Label least = ring->label(b);
    for (const auto& g : h) least = std::min(least, ring->multiply(ring->label(b), g).terms().begin()->first);
    rep[b] = least;
    if (least == ring->label(b)) reps.push_back(least);
  }
  std::map<Label, std::size_t> pos;
  for (std::size_t i = 0; i < reps.size(); ++i) pos[reps[i]] = i;
  std::vector<IntMatrix> mats;
  for (std::size_t a = 0; a < n; ++a) {
    IntMatrix mat(reps.size(), reps.size());
    for (std::size_t i = 0; i < reps.size(); ++i)
      for (const auto& [c, v] : ring->product(a, ring->index(reps[i]))) mat(i, pos[rep[c]]) += v;
    mats.push_back(std::move(mat));
  }
  return std::make_shared<const BasedModuleTable>(ring, reps, std::move(mats), "quotient(" + ring->name() + ")");
}

ModulePtr induced_module(const TablePtr& ring, const DivisibilityResult& witness, const BasedModuleTable& sub_module) {
  if (!witness.divisible) throw InvalidWitness("subring is not divisible: " + witness.reason);
  const auto& sub = sub_module.ring_table();
  {
    std::vector<Label> a = sub.basis(), b = witness.subring;
    std::sort(b.begin(), b.end());
    if (a != b) throw InvalidWitness("module is over a different subring");
  }
  // gamma -> (component, beta) with gamma = anchor * beta
  std::map<Label, std::pair<std::size_t, Label>> split;
  for (std::size_t k = 0; k < witness.components.size(); ++k) {
    const auto& comp = witness.components[k];
    for (const auto& [gamma, beta] : comp.to_subring) {
      if (!ring->contains(gamma) || !sub.contains(beta)) throw InvalidWitness("witness references unknown labels");
      if (!split.emplace(gamma, std::make_pair(k, beta)).second) throw InvalidWitness("components overlap at " + gamma.id());
    }
  }
  if (split.size() != ring->size()) throw InvalidWitness("components do not cover the ring");

  const std::size_t nj = sub_module.size();
  std::vector<Label> basis;
  for (const auto& comp : witness.components)
    for (const auto& b : sub_module.basis()) basis.push_back(pair_label(comp.anchor, b));
  const std::size_t n = basis.size();
  std::vector<IntMatrix> mats;
  for (std::size_t a = 0; a < ring->size(); ++a) {
    IntMatrix mat(n, n);
    for (std::size_t k = 0; k < witness.components.size(); ++k) {
      const auto anchor = ring->index(witness.components[k].anchor);
      for (const auto& [g, v] : ring->product(a, anchor)) {
        const auto& [k2, beta] = split.at(ring->label(g));
        const auto& mb = sub_module.matrix(beta);
        for (std::size_t b = 0; b < nj; ++b)
          for (std::size_t d = 0; d < nj; ++d)
            if (mb(b, d) != 0) mat(k * nj + b, k2 * nj + d) += v * mb(b, d);
      }
    }
    mats.push_back(std::move(mat));
  }
  return std::make_shared<const BasedModuleTable>(ring, std::move(basis), std::move(mats), "induced(" + ring->name() + ")");
}

ModulePtr twisted_tensor_module(const TablePtr& r) {
  const auto rr = tensor_product(*r, *r);
  const std::size_t n = r->size();
  std::vector<IntMatrix> mats(rr->size(), IntMatrix(n, n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      auto& mat = mats[rr->index(pair_label(r->label(a), r->label(b)))];
      const std::size_t bbar = r->dual_index(b);
      for (std::size_t g = 0; g < n; ++g)
        for (const auto& [x, u] : r->product(a, g))
          for (const auto& [y, v] : r->product(x, bbar)) mat(g, y) += u * v;
    }
  return std::make_shared<const BasedModuleTable>(rr, r->basis(), std::move(mats), "twisted(" + r->name() + ")");
}

ModulePtr singleton_module(const TablePtr& ring, const DimensionFunction& dims) {
  std::vector<IntMatrix> mats;
  for (const auto& a : ring->basis()) {
    const double d = dims.at(a);
    const double rounded = std::round(d);
    if (std::abs(d - rounded) > 1e-9) throw NonIntegerDims("d(" + a.id() + ") is not an integer");
    IntMatrix m(1, 1);
    m(0, 0) = static_cast<std::int64_t>(rounded);
    mats.push_back(std::move(m));
  }
  return std::make_shared<const BasedModuleTable>(ring, std::vector<Label>{"b0"}, std::move(mats),
                                                  "singleton(" + ring->name() + ")");
}

ModulePtr direct_sum(const BasedModuleTable& a, const BasedModuleTable& b) {
  if (a.ring() != b.ring()) throw StructuralError("direct sum of modules over different rings");
  std::vector<Label> basis;
  for (const auto& l : a.basis()) basis.push_back("1." + l.id());
  for (const auto& l : b.basis()) basis.push_back("2." + l.id());
  const std::size_t n = a.size(), m = b.size();
  std::vector<IntMatrix> mats;
  for (std::size_t g = 0; g < a.ring()->size(); ++g) {
    IntMatrix mat(n + m, n + m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) mat(i, j) = a.N(g, i, j);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) mat(n + i, n + j) = b.N(g, i, j);
    mats.push_back(std::move(mat));
  }
  return std::make_shared<const BasedModuleTable>(a.ring(), std::move(basis), std::move(mats),
                                                  a.name() + "+" + b.name());
}

ModulePtr relabel(const BasedModuleTable& m, const std::map<Label, Label>& rename) {
  std::vector<Label> basis;
  for (const auto& l : m.basis()) {
    auto it = rename.find(l);
    if (it == rename.end()) throw StructuralError("relabelling misses " + l.id());
    basis.push_back(it->second);
  }
  return std::make_shared<const BasedModuleTable>(m.ring(), std::move(basis), m.matrices(), m.name());
}

}  // namespace fusion
