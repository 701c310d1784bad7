#include "fusion/ring.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fusion/errors.hpp"

namespace fusion {

// --- BasedRing -------------------------------------------------------------

std::vector<Label> BasedRing::labels_up_to(std::size_t depth) const {
  std::vector<Label> out;
  for (std::size_t n = 0; n <= depth; ++n) {
    auto level_labels = enumerate_level(n);
    if (is_finite() && level_labels.empty() && n > 0) break;
    out.insert(out.end(), level_labels.begin(), level_labels.end());
  }
  return out;
}

void BasedRing::require(const Label& l) const {
  if (!contains(l)) throw LabelNotInRing(l.id());
}

// --- BasedRingTable --------------------------------------------------------

BasedRingTable::BasedRingTable(RingData data) : name_(std::move(data.name)) {
  basis_ = std::move(data.basis);
  std::sort(basis_.begin(), basis_.end());
  if (basis_.empty()) throw StructuralError("empty basis");
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (!index_.emplace(basis_[i], i).second)
      throw StructuralError("duplicate basis label " + basis_[i].id());
  }
  auto lookup = [&](const Label& l, const char* what) {
    auto it = index_.find(l);
    if (it == index_.end()) throw StructuralError(std::string(what) + " references unknown label " + l.id());
    return it->second;
  };
  unit_ = lookup(data.unit, "unit");

  const std::size_t n = basis_.size();
  dual_.assign(n, n);
  for (const auto& [from, to] : data.dual) dual_[lookup(from, "involution")] = lookup(to, "involution");
  for (std::size_t i = 0; i < n; ++i) {
    if (dual_[i] == n) throw StructuralError("involution undefined on " + basis_[i].id());
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dual_[dual_[i]] != i) throw StructuralError("involution is not an involutive bijection at " + basis_[i].id());
  }
  if (dual_[unit_] != unit_) throw StructuralError("involution does not fix the unit");

  n_.assign(n * n * n, 0);
  sparse_.assign(n * n, {});
  std::vector<char> seen(n * n, 0);
  for (const auto& [key, value] : data.products) {
    const std::size_t a = lookup(key.first, "product");
    const std::size_t b = lookup(key.second, "product");
    seen[a * n + b] = 1;
    for (const auto& [c, coeff] : value.terms()) {
      const std::size_t ci = lookup(c, "product");
      if (coeff < 0) throw StructuralError("negative structure constant in " + key.first.id() + "*" + key.second.id());
      std::int64_t v = 0;
      try {
        v = to_int64(coeff);
      } catch (const FusionError&) {
        throw StructuralError("structure constant too large");
      }
      n_[(a * n + b) * n + ci] = v;
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!seen[a * n + b])
        throw StructuralError("missing product entry " + basis_[a].id() + "*" + basis_[b].id());
      for (std::size_t c = 0; c < n; ++c)
        if (auto v = N(a, b, c); v != 0) sparse_[a * n + b].emplace_back(c, v);
    }
}

std::size_t BasedRingTable::index(const Label& l) const {
  auto it = index_.find(l);
  if (it == index_.end()) throw LabelNotInRing(l.id());
  return it->second;
}

RingElement BasedRingTable::multiply(const Label& a, const Label& b) const {
  RingElement out;
  for (const auto& [c, v] : product(index(a), index(b))) out.add(basis_[c], v);
  return out;
}

std::vector<Label> BasedRingTable::enumerate_level(std::size_t n) const {
  if (n == 0) return {unit()};
  if (n > 1) return {};
  std::vector<Label> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (i != unit_) out.push_back(basis_[i]);
  return out;
}

IntMatrix BasedRingTable::left_matrix(std::size_t a) const {
  IntMatrix m(size(), size());
  for (std::size_t b = 0; b < size(); ++b)
    for (const auto& [c, v] : product(a, b)) m(b, c) = v;
  return m;
}

RingData BasedRingTable::to_data() const {
  RingData d;
  d.name = name_;
  d.basis = basis_;
  d.unit = unit();
  for (std::size_t i = 0; i < size(); ++i) d.dual[basis_[i]] = basis_[dual_[i]];
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = 0; b < size(); ++b) d.products[{basis_[a], basis_[b]}] = multiply(basis_[a], basis_[b]);
  return d;
}

// --- LazyBasedRing ---------------------------------------------------------

Label LazyBasedRing::dual(const Label& l) const {
  require(l);
  return spec_.dual(l);
}

RingElement LazyBasedRing::multiply(const Label& a, const Label& b) const {
  require(a);
  require(b);
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find({a, b}); it != cache_.end()) return it->second;
  }
  RingElement value = spec_.multiply(a, b);
  std::lock_guard lock(cache_mutex_);
  cache_.emplace(std::make_pair(a, b), value);
  return value;
}

std::size_t LazyBasedRing::level(const Label& l) const {
  require(l);
  return spec_.level(l);
}

std::optional<double> LazyBasedRing::known_dimension(const Label& l) const {
  if (!spec_.dimension) return std::nullopt;
  require(l);
  return spec_.dimension(l);
}

// --- element algebra -------------------------------------------------------

namespace {

void require_all(const BasedRing& ring, const RingElement& x) {
  for (const auto& [l, c] : x.terms()) ring.require(l);
}

}  // namespace

RingElement fuse(const BasedRing& ring, const RingElement& x, const RingElement& y) {
  require_all(ring, x);
  require_all(ring, y);
  RingElement out;
  for (const auto& [a, ca] : x.terms())
    for (const auto& [b, cb] : y.terms()) out.add(ring.multiply(a, b), ca * cb);
  return out;
}

Coeff tau(const BasedRing& ring, const RingElement& x) {
  require_all(ring, x);
  return x.coefficient(ring.unit());
}

RingElement dual(const BasedRing& ring, const RingElement& x) {
  require_all(ring, x);
  return x.map_labels([&](const Label& l) { return ring.dual(l); });
}

Coeff structure_constant(const BasedRing& ring, const RingElement& y, const RingElement& z,
                         const RingElement& x) {
  return tau(ring, fuse(ring, fuse(ring, y, z), dual(ring, x)));
}

// --- verification ----------------------------------------------------------

namespace {

std::string triple(const Label& a, const Label& b, const Label& c) {
  return "(" + a.id() + "," + b.id() + "," + c.id() + ")";
}

void fail(AxiomCheck& check, std::string witness) {
  if (check.passed) {
    check.passed = false;
    check.witness = std::move(witness);
  }
}

}  // namespace

VerificationReport verify_based_ring(const BasedRingTable& ring) {
  VerificationReport rep;
  const std::size_t n = ring.size();
  const auto& L = ring.basis();
  auto bar = [&](std::size_t i) { return ring.dual_index(i); };
  const std::size_t one = ring.unit_index();

  AxiomCheck sym{"duality_symmetry", 1, true, {}};
  for (std::size_t a = 0; a < n && sym.passed; ++a)
    for (std::size_t b = 0; b < n && sym.passed; ++b)
      for (std::size_t c = 0; c < n && sym.passed; ++c) {
        const auto v = ring.N(b, c, a);
        if (v != ring.N(c, bar(a), bar(b)) || v != ring.N(bar(a), b, bar(c)) ||
            v != ring.N(bar(c), bar(b), bar(a)))
          fail(sym, "N_{" + L[b].id() + "," + L[c].id() + "}^" + L[a].id());
      }

  AxiomCheck unit{"unit_law", 2, true, {}};
  for (std::size_t a = 0; a < n && unit.passed; ++a)
    for (std::size_t b = 0; b < n && unit.passed; ++b) {
      const std::int64_t want = a == b ? 1 : 0;
      if (ring.N(one, b, a) != want || ring.N(b, one, a) != want)
        fail(unit, "N_{1," + L[b].id() + "}^" + L[a].id());
    }

  // Finite tables have finite support by construction.
  AxiomCheck finite{"finite_support", 3, true, {}};

  AxiomCheck assoc{"associativity", 4, true, {}};
  std::vector<std::int64_t> lhs(n), rhs(n);
  for (std::size_t a = 0; a < n && assoc.passed; ++a)
    for (std::size_t b = 0; b < n && assoc.passed; ++b)
      for (std::size_t c = 0; c < n && assoc.passed; ++c) {
        std::fill(lhs.begin(), lhs.end(), 0);
        std::fill(rhs.begin(), rhs.end(), 0);
        for (const auto& [e, v] : ring.product(a, b))
          for (const auto& [d, w] : ring.product(e, c)) lhs[d] += v * w;
        for (const auto& [e, v] : ring.product(b, c))
          for (const auto& [d, w] : ring.product(a, e)) rhs[d] += v * w;
        if (lhs != rhs) fail(assoc, triple(L[a], L[b], L[c]));
      }

  AxiomCheck anti{"anti_multiplicativity", 0, true, {}};
  for (std::size_t a = 0; a < n && anti.passed; ++a)
    for (std::size_t b = 0; b < n && anti.passed; ++b)
      for (std::size_t c = 0; c < n && anti.passed; ++c)
        if (ring.N(a, b, c) != ring.N(bar(b), bar(a), bar(c))) fail(anti, triple(L[a], L[b], L[c]));

  AxiomCheck pairing{"tau_pairing", 0, true, {}};
  for (std::size_t a = 0; a < n && pairing.passed; ++a)
    for (std::size_t b = 0; b < n && pairing.passed; ++b)
      if (ring.N(bar(a), b, one) != (a == b ? 1 : 0)) fail(pairing, "(" + L[a].id() + "," + L[b].id() + ")");

  rep.checks = {sym, unit, finite, assoc, anti, pairing};
  return rep;
}

VerificationReport verify_lazy_ring(const BasedRing& ring, std::size_t depth) {
  VerificationReport rep;
  const auto L = ring.labels_up_to(depth);
  const std::set<Label> in_range(L.begin(), L.end());

  // Structural: involution is an involutive bijection fixing the unit.
  try {
    if (ring.dual(ring.unit()) != ring.unit()) throw StructuralError("involution does not fix the unit");
    for (const auto& a : L) {
      const Label d = ring.dual(a);
      if (!ring.contains(d) || ring.dual(d) != a)
        throw StructuralError("involution is not involutive at " + a.id());
    }
  } catch (const FusionError& e) {
    rep.structural_ok = false;
    rep.structural_error = e.what();
    return rep;
  }

  auto N = [&](const Label& b, const Label& c, const Label& a) {
    return ring.multiply(b, c).coefficient(a);
  };

  AxiomCheck sym{"duality_symmetry", 1, true, {}};
  for (const auto& a : L) {
    if (!sym.passed) break;
    const Label abar = ring.dual(a);
    for (const auto& b : L) {
      if (!sym.passed) break;
      const Label bbar = ring.dual(b);
      for (const auto& c : L) {
        const Label cbar = ring.dual(c);
        const Coeff v = N(b, c, a);
        if (v != N(c, abar, bbar) || v != N(abar, b, cbar) || v != N(cbar, bbar, abar)) {
          fail(sym, "N_{" + b.id() + "," + c.id() + "}^" + a.id());
          break;
        }
      }
    }
  }

  AxiomCheck unit{"unit_law", 2, true, {}};
  for (const auto& b : L) {
    if (ring.multiply(ring.unit(), b) != RingElement(b) || ring.multiply(b, ring.unit()) != RingElement(b)) {
      fail(unit, b.id());
      break;
    }
  }

  AxiomCheck finite{"finite_support", 3, true, {}};
  for (const auto& a : L) {
    if (!finite.passed) break;
    for (const auto& b : L) {
      const auto p = ring.multiply(a, b);
      bool ok = p.is_nonnegative();
      for (const auto& [c, v] : p.terms()) ok = ok && ring.contains(c);
      if (!ok) {
        fail(finite, "(" + a.id() + "," + b.id() + ")");
        break;
      }
    }
  }

  AxiomCheck assoc{"associativity", 4, true, {}};
  for (const auto& a : L) {
    if (!assoc.passed) break;
    for (const auto& b : L) {
      if (!assoc.passed) break;
      const RingElement ab = ring.multiply(a, b);
      for (const auto& c : L) {
        const RingElement left = fuse(ring, ab, RingElement(c));
        const RingElement right = fuse(ring, RingElement(a), ring.multiply(b, c));
        if (left != right) {
          fail(assoc, triple(a, b, c));
          break;
        }
      }
    }
  }

  AxiomCheck anti{"anti_multiplicativity", 0, true, {}};
  for (const auto& a : L) {
    if (!anti.passed) break;
    for (const auto& b : L) {
      if (dual(ring, ring.multiply(a, b)) != ring.multiply(ring.dual(b), ring.dual(a))) {
        fail(anti, "(" + a.id() + "," + b.id() + ")");
        break;
      }
    }
  }

  AxiomCheck pairing{"tau_pairing", 0, true, {}};
  for (const auto& a : L) {
    if (!pairing.passed) break;
    for (const auto& b : L) {
      if (tau(ring, ring.multiply(ring.dual(a), b)) != (a == b ? 1 : 0)) {
        fail(pairing, "(" + a.id() + "," + b.id() + ")");
        break;
      }
    }
  }

  rep.checks = {sym, unit, finite, assoc, anti, pairing};
  return rep;
}

// --- dimensions ------------------------------------------------------------

std::string to_string(Exactness e) {
  switch (e) {
    case Exactness::integer: return "integer";
    case Exactness::quadratic: return "quadratic";
    case Exactness::numeric: return "numeric";
  }
  return "numeric";
}

double DimensionFunction::at(const Label& l) const {
  auto it = values_.find(l);
  if (it == values_.end()) throw LabelNotInRing(l.id());
  return it->second;
}

double DimensionFunction::of(const RingElement& x) const {
  double s = 0.0;
  for (const auto& [l, c] : x.terms()) s += static_cast<double>(c) * at(l);
  return s;
}

double DimensionFunction::total() const {
  double s = 0.0;
  for (const auto& [l, v] : values_) s += v;
  return s;
}

double DimensionFunction::max() const {
  double m = 0.0;
  for (const auto& [l, v] : values_) m = std::max(m, v);
  return m;
}

Exactness classify_exactness(const std::vector<double>& values, double tol) {
  bool all_integer = true;
  bool all_quadratic = true;
  for (double v : values) {
    if (std::abs(v - std::round(v)) <= tol) continue;
    all_integer = false;
    bool found = false;
    for (int a = -64; a <= 64 && !found; ++a) {
      const double b = v * v - a * v;
      found = std::abs(b - std::round(b)) <= 1e-7;
    }
    all_quadratic = all_quadratic && found;
  }
  if (all_integer) return Exactness::integer;
  return all_quadratic ? Exactness::quadratic : Exactness::numeric;
}

DimensionFunction frobenius_perron_dims(const BasedRingTable& ring, const Tolerance& tol) {
  const std::size_t n = ring.size();
  // The regular representation: sum of all left multiplication matrices is
  // entrywise positive for a based ring, and its Perron vector is (d(b))_b.
  IntMatrix total(n, n);
  for (std::size_t a = 0; a < n; ++a) total = total + ring.left_matrix(a);
  const auto perron = perron_general(total, tol.rayleigh, tol.max_iterations);
  if (!perron.converged) throw NoDimensionFunction("power iteration did not converge");
  const double base = perron.vector[ring.unit_index()];
  if (!(base > 0)) throw NoDimensionFunction("Perron vector vanishes at the unit");

  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = perron.vector[i] / base;

  for (std::size_t a = 0; a < n; ++a) {
    if (d[a] < 1.0 - tol.dim)
      throw NoDimensionFunction("d(" + ring.label(a).id() + ") < 1");
    if (std::abs(d[a] - d[ring.dual_index(a)]) > tol.dim * std::max(1.0, d[a]))
      throw NoDimensionFunction("d not invariant under involution at " + ring.label(a).id());
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      double s = 0.0;
      for (const auto& [c, v] : ring.product(a, b)) s += static_cast<double>(v) * d[c];
      if (std::abs(s - d[a] * d[b]) > tol.multiplicativity * d[a] * d[b])
        throw NoDimensionFunction("d not multiplicative on (" + ring.label(a).id() + "," +
                                  ring.label(b).id() + ")");
    }

  std::map<Label, double> values;
  for (std::size_t i = 0; i < n; ++i) values[ring.label(i)] = d[i];
  return DimensionFunction(std::move(values), classify_exactness(d, tol.dim));
}

DimensionFunction lazy_dims(const BasedRing& ring, std::size_t depth) {
  std::map<Label, double> values;
  std::vector<double> raw;
  for (const auto& l : ring.labels_up_to(depth)) {
    auto d = ring.known_dimension(l);
    if (!d) throw NoDimensionFunction("no closed-form dimension for " + l.id());
    values[l] = *d;
    raw.push_back(*d);
  }
  return DimensionFunction(std::move(values), classify_exactness(raw));
}

std::vector<Label> group_of_units(const BasedRingTable& ring, const DimensionFunction& dims,
                                  const Tolerance& tol) {
  std::vector<Label> units;
  for (const auto& l : ring.basis())
    if (std::abs(dims.at(l) - 1.0) <= tol.dim) units.push_back(l);
  const std::set<Label> in(units.begin(), units.end());
  for (const auto& g : units) {
    if (!in.count(ring.dual(g))) throw InconsistentUnits("dual of " + g.id() + " has dimension != 1");
    for (const auto& h : units) {
      const auto p = ring.multiply(g, h);
      if (!p.is_basis_element() || !in.count(p.terms().begin()->first))
        throw InconsistentUnits("units not closed under product at (" + g.id() + "," + h.id() + ")");
    }
  }
  return units;
}

}  // namespace fusion
