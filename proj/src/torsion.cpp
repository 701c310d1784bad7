#include "fusion/torsion.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <set>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fusion/errors.hpp"

namespace fusion {

std::size_t default_thread_count() {
  if (const char* env = std::getenv("FUSION_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::string to_string(TorsionStatus s) {
  switch (s) {
    case TorsionStatus::torsion_free_certified:
      return "torsion_free_certified";
    case TorsionStatus::not_torsion_free:
      return "not_torsion_free";
    case TorsionStatus::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::size_t certification_bound(const BasedRingTable& ring) {
  const auto dims = frobenius_perron_dims(ring);
  return static_cast<std::size_t>(std::floor(dims.total() + 1e-9));
}

// ---------------------------------------------------------------------------
// canonical form

namespace {

Label vertex_label(std::size_t i) { return "b" + std::to_string(i); }

// Perron vector of sum_alpha M(alpha) on each connected component, scaled to
// minimum 1 within the component. Only used to choose start vertices, so any
// isomorphism-invariant positive weighting would do.
std::vector<double> component_weights(const std::vector<IntMatrix>& mats, std::size_t n) {
  IntMatrix sum(n, n);
  for (const auto& m : mats) sum = sum + m;
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = ncomp;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (std::size_t w = 0; w < n; ++w) {
        if ((sum(u, w) > 0 || sum(w, u) > 0) && comp[w] < 0) {
          comp[w] = ncomp;
          stack.push_back(w);
        }
      }
    }
    ++ncomp;
  }
  std::vector<double> out(n, 1.0);
  for (int c = 0; c < ncomp; ++c) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (comp[i] == c) idx.push_back(i);
    IntMatrix sub(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) sub(i, j) = sum(idx[i], idx[j]);
    auto pr = perron_general(sub, 1e-15, 20000);
    const double mn = *std::min_element(pr.vector.begin(), pr.vector.end());
    for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = mn > 0 ? pr.vector[i] / mn : 1.0;
  }
  return out;
}

struct Canonicalizer {
  const std::vector<IntMatrix>& mats;
  std::size_t n;
  std::vector<double> weight;
  std::vector<std::int64_t> best;
  std::vector<std::size_t> best_order;

  bool min_weight(std::size_t v, const std::vector<bool>& seen) const {
    double mn = INFINITY;
    for (std::size_t i = 0; i < n; ++i)
      if (!seen[i]) mn = std::min(mn, weight[i]);
    return weight[v] <= mn * (1 + 1e-6);
  }

  void finish(const std::vector<std::size_t>& order) {
    std::vector<std::int64_t> enc;
    enc.reserve(1 + mats.size() * n * n);
    enc.push_back(static_cast<std::int64_t>(n));
    for (const auto& m : mats)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) enc.push_back(m(order[i], order[j]));
    if (best.empty() || enc < best) {
      best = std::move(enc);
      best_order = order;
    }
  }

  // Breadth-first discovery: scanning vertex order[q], generator a, the next
  // discovered vertex is an unseen neighbour of maximal multiplicity; ties branch.
  void extend(std::vector<std::size_t>& order, std::vector<bool>& seen, std::size_t q, std::size_t a) {
    if (order.size() == n) {
      finish(order);
      return;
    }
    while (q < order.size()) {
      const std::size_t u = order[q];
      for (; a < mats.size(); ++a) {
        std::int64_t top = 0;
        for (std::size_t c = 0; c < n; ++c)
          if (!seen[c]) top = std::max(top, mats[a](u, c));
        if (top == 0) continue;
        for (std::size_t c = 0; c < n; ++c) {
          if (seen[c] || mats[a](u, c) != top) continue;
          order.push_back(c);
          seen[c] = true;
          extend(order, seen, q, a);
          seen[c] = false;
          order.pop_back();
        }
        return;
      }
      ++q;
      a = 0;
    }
    // Component exhausted: restart from an unseen vertex of minimal weight.
    for (std::size_t c = 0; c < n; ++c) {
      if (seen[c] || !min_weight(c, seen)) continue;
      order.push_back(c);
      seen[c] = true;
      extend(order, seen, q, 0);
      seen[c] = false;
      order.pop_back();
    }
  }

  void run() {
    std::vector<std::size_t> order;
    std::vector<bool> seen(n, false);
    extend(order, seen, 0, 0);
  }
};

Canonicalizer canonicalize(const std::vector<IntMatrix>& mats, std::size_t n,
                           std::vector<double> weight = {}) {
  Canonicalizer c{mats, n, weight.empty() ? component_weights(mats, n) : std::move(weight), {}, {}};
  c.run();
  return c;
}

ModulePtr build_canonical(const TablePtr& ring, const std::vector<IntMatrix>& mats,
                          const std::vector<std::size_t>& order, const std::string& name) {
  const std::size_t n = order.size();
  std::vector<Label> basis;
  for (std::size_t i = 0; i < n; ++i) basis.push_back(vertex_label(i));
  std::vector<IntMatrix> out;
  for (const auto& m : mats) {
    IntMatrix p(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) p(i, j) = m(order[i], order[j]);
    out.push_back(std::move(p));
  }
  return std::make_shared<BasedModuleTable>(ring, std::move(basis), std::move(out), name);
}

}  // namespace

std::vector<std::int64_t> canonical_encoding(const BasedModuleTable& m) {
  return canonicalize(m.matrices(), m.size()).best;
}

ModulePtr canonical_form(const BasedModuleTable& m) {
  auto c = canonicalize(m.matrices(), m.size());
  return build_canonical(m.ring(), m.matrices(), c.best_order, m.name());
}

bool isomorphic(const BasedModuleTable& a, const BasedModuleTable& b) {
  if (a.size() != b.size() || a.ring_table().basis() != b.ring_table().basis()) return false;
  return canonical_encoding(a) == canonical_encoding(b);
}

// ---------------------------------------------------------------------------
// enumeration

namespace {

// M(beta) M(alpha) = sum_g N_{alpha beta}^g M(g)
struct Relation {
  std::size_t alpha, beta;
  std::vector<std::pair<std::size_t, std::int64_t>> rhs;
};

// M(h) = (M(beta) M(alpha) - sum_{g != h} N M(g)) / coef
struct Definition {
  std::size_t h, alpha, beta;
  std::int64_t coef;
  std::vector<std::pair<std::size_t, std::int64_t>> others;
};

struct Plan {
  TablePtr ring;
  std::size_t K = 0, C = 0, unit = 0;
  std::vector<double> d;
  double dmax = 1;
  std::vector<std::size_t> search;  // closed under duals
  std::vector<std::size_t> position;  // index in search, or npos
  std::vector<Definition> defs;
  std::vector<Relation> relations;
  std::vector<std::int64_t> entry_cap, row_cap;
  std::vector<bool> permutation;  // d == 1: rows have a single 1
};

constexpr std::size_t npos = static_cast<std::size_t>(-1);

std::set<std::size_t> closure(const BasedRingTable& r, const std::set<std::size_t>& gens) {
  std::set<std::size_t> t{r.unit_index()};
  t.insert(gens.begin(), gens.end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::size_t> cur(t.begin(), t.end());
    for (auto a : cur)
      for (auto s : gens)
        for (auto [c, k] : r.product(a, s))
          if (t.insert(c).second) grew = true;
  }
  return t;
}

// Greedy definitions from products of known matrices; returns what stays unknown.
std::set<std::size_t> derive(const BasedRingTable& r, const std::vector<std::size_t>& search,
                             std::vector<Definition>& defs) {
  defs.clear();
  std::set<std::size_t> known(search.begin(), search.end());
  known.insert(r.unit_index());
  bool progress = true;
  while (progress) {
    progress = false;
    std::vector<std::size_t> cur(known.begin(), known.end());
    for (auto a : cur) {
      for (auto b : cur) {
        std::vector<std::size_t> unknown;
        for (auto [g, k] : r.product(a, b))
          if (!known.count(g)) unknown.push_back(g);
        if (unknown.size() != 1) continue;
        Definition def{unknown[0], a, b, 0, {}};
        for (auto [g, k] : r.product(a, b)) {
          if (g == def.h)
            def.coef = k;
          else
            def.others.emplace_back(g, k);
        }
        defs.push_back(def);
        known.insert(def.h);
        progress = true;
      }
    }
  }
  std::set<std::size_t> rest;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (!known.count(i)) rest.insert(i);
  return rest;
}

Plan make_plan(const TablePtr& ring, const ModuleSearchConfig& cfg, std::size_t max_size) {
  const auto& r = *ring;
  Plan p;
  p.ring = ring;
  p.K = r.size();
  p.C = max_size;
  p.unit = r.unit_index();
  const auto dims = frobenius_perron_dims(r);
  for (std::size_t i = 0; i < p.K; ++i) p.d.push_back(dims.at(r.label(i)));
  p.dmax = *std::max_element(p.d.begin(), p.d.end());

  std::set<std::size_t> gens;
  auto add = [&](std::size_t g) {
    if (g == p.unit) return;
    gens.insert(g);
    gens.insert(r.dual_index(g));
  };
  if (!cfg.generators.empty()) {
    for (const auto& l : cfg.generators) add(r.index(l));
  } else {
    // Greedy: the candidate whose closure grows most; ties to small dimension, then order.
    while (closure(r, gens).size() < p.K) {
      std::size_t best = npos, best_size = 0;
      for (std::size_t i = 0; i < p.K; ++i) {
        if (i == p.unit || gens.count(i)) continue;
        auto trial = gens;
        trial.insert(i);
        trial.insert(r.dual_index(i));
        const auto sz = closure(r, trial).size();
        if (best == npos || sz > best_size || (sz == best_size && p.d[i] < p.d[best] - 1e-9)) {
          best = i;
          best_size = sz;
        }
      }
      add(best);
    }
  }
  while (true) {
    p.search.assign(gens.begin(), gens.end());
    auto rest = derive(r, p.search, p.defs);
    if (rest.empty()) break;
    add(*rest.begin());
  }
  p.position.assign(p.K, npos);
  for (std::size_t i = 0; i < p.search.size(); ++i) p.position[p.search[i]] = i;

  for (std::size_t a = 0; a < p.K; ++a) {
    if (a == p.unit) continue;
    for (std::size_t b = 0; b < p.K; ++b) {
      if (b == p.unit) continue;
      p.relations.push_back({a, b, r.product(a, b)});
    }
  }
  for (std::size_t g = 0; g < p.K; ++g) {
    if (cfg.entry_bound_mode == EntryBound::explicit_cap) {
      p.entry_cap.push_back(cfg.explicit_cap);
      p.row_cap.push_back(cfg.explicit_cap * static_cast<std::int64_t>(p.C));
      p.permutation.push_back(false);
    } else {
      const auto cap = static_cast<std::int64_t>(std::floor(p.d[g] * p.dmax + 1e-9));
      p.entry_cap.push_back(cap);
      p.row_cap.push_back(cap);
      p.permutation.push_back(std::abs(p.d[g] - 1.0) < 1e-9);
    }
  }
  return p;
}

struct State {
  std::size_t n = 1;   // vertices created
  std::size_t v = 0;   // vertex whose rows are being chosen
  std::size_t gi = 0;  // position in the search set
  std::vector<std::int64_t> val;
  std::vector<std::uint8_t> known;
  std::vector<std::uint8_t> checked;  // per relation entry, verified complete
};

class Search {
 public:
  Search(const Plan& p, double budget) : P(p) {
    if (budget > 0)
      deadline_ = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(budget));
  }

  State initial() const {
    State s;
    const auto C = P.C;
    s.val.assign(P.K * C * C, 0);
    s.known.assign(P.K * C * C, 0);
    s.checked.assign(P.relations.size() * C * C, 0);
    for (std::size_t u = 0; u < C; ++u)
      for (std::size_t w = 0; w < C; ++w) {
        s.val[at(P.unit, u, w)] = u == w ? 1 : 0;
        s.known[at(P.unit, u, w)] = 1;
      }
    if (P.search.empty()) s.v = 1;  // only the unit acts: one vertex, nothing to choose
    return s;
  }

  // Children of a state, in deterministic order.
  std::vector<State> children(const State& s) {
    std::vector<State> out;
    expand(s, [&](State&& c) { out.push_back(std::move(c)); });
    return out;
  }

  // Depth-first exploration; leaves are recorded in `found`.
  void run(const State& s, std::map<std::vector<std::int64_t>, ModulePtr>& found) {
    if (expired()) return;
    if (s.v == s.n) {
      leaf(s, found);
      return;
    }
    expand(s, [&](State&& c) { run(c, found); });
  }

  bool expired() {
    if (stop_.load(std::memory_order_relaxed)) return true;
    if (deadline_ && (tick_.fetch_add(1, std::memory_order_relaxed) & 255) == 0 && std::chrono::steady_clock::now() > *deadline_) stop_ = true;
    return stop_.load(std::memory_order_relaxed);
  }
  bool stopped() const { return stop_.load(); }
  std::size_t nodes() const { return nodes_.load(); }

 private:
  std::size_t at(std::size_t a, std::size_t u, std::size_t w) const { return (a * P.C + u) * P.C + w; }

  template <class F>
  void expand(const State& s, F&& emit) {
    const std::size_t g = P.search[s.gi];
    const std::size_t p = P.ring->dual_index(g);
    const std::size_t v = s.v;
    std::vector<std::int64_t> row(P.C, 0);
    std::int64_t fixed_sum = 0;
    for (std::size_t w = 0; w < v; ++w) {
      row[w] = s.val[at(p, w, v)];
      fixed_sum += row[w];
    }
    std::vector<std::size_t> free_cols;
    if (p != g && P.position[p] < s.gi) {
      row[v] = s.val[at(p, v, v)];
      fixed_sum += row[v];
    } else {
      free_cols.push_back(v);
    }
    for (std::size_t w = v + 1; w < s.n; ++w) free_cols.push_back(w);

    const std::int64_t cap = P.entry_cap[g];
    const std::int64_t rmax = P.permutation[g] ? 1 : P.row_cap[g];
    const std::int64_t rmin = 1;
    if (fixed_sum > rmax) return;
    for (std::size_t w = 0; w < v; ++w)
      if (row[w] > cap) return;
    if (free_cols.empty() || free_cols.front() != v)
      if (row[v] > cap) return;

    auto commit = [&](std::size_t n_new) {
      if (expired()) return;
      State c = s;
      c.n = s.n + n_new;
      for (std::size_t w = 0; w < P.C; ++w) {
        c.val[at(g, v, w)] = row[w];
        c.known[at(g, v, w)] = 1;
        c.val[at(p, w, v)] = row[w];
        c.known[at(p, w, v)] = 1;
      }
      if (++c.gi == P.search.size()) {
        c.gi = 0;
        ++c.v;
      }
      nodes_.fetch_add(1, std::memory_order_relaxed);
      if (propagate(c)) emit(std::move(c));
    };

    // New vertices take nonincreasing multiplicities: they are interchangeable
    // at the moment of discovery.
    std::function<void(std::size_t, std::int64_t, std::int64_t)> fresh = [&](std::size_t k, std::int64_t sum,
                                                                            std::int64_t prev) {
      if (stop_.load(std::memory_order_relaxed)) return;
      if (sum >= rmin) commit(k);
      if (s.n + k >= P.C) return;
      for (std::int64_t m = std::min({prev, cap, rmax - sum}); m >= 1; --m) {
        row[s.n + k] = m;
        fresh(k + 1, sum + m, m);
        row[s.n + k] = 0;
      }
    };
    std::function<void(std::size_t, std::int64_t)> assign = [&](std::size_t i, std::int64_t sum) {
      if (i == free_cols.size()) {
        fresh(0, sum, cap);
        return;
      }
      const auto w = free_cols[i];
      for (std::int64_t m = 0; m <= std::min(cap, rmax - sum); ++m) {
        if (stop_.load(std::memory_order_relaxed)) break;
        row[w] = m;
        assign(i + 1, sum + m);
      }
      row[w] = 0;
    };
    assign(0, fixed_sum);
  }

  // M(a) has the positive eigenvector D at d(a), so rho(M(a)) = d(a). Known
  // entries only grow, and for x >= 0 with Ax >= lambda x we have rho(A) >=
  // lambda (Collatz-Wielandt), which gives a safe lower bound to prune on.
  bool spectrally_feasible(const State& s) const {
    const std::size_t n = s.n, C = P.C;
    std::vector<double> x(n), y(n);
    for (std::size_t a = 0; a < P.K; ++a) {
      if (a == P.unit || P.permutation[a]) continue;
      std::fill(x.begin(), x.end(), 1.0);
      for (int it = 0; it < 40; ++it) {
        double top = 0;
        for (std::size_t u = 0; u < n; ++u) {
          double acc = x[u];  // shifted by the identity against periodicity
          for (std::size_t w = 0; w < n; ++w) {
            const auto i = (a * C + u) * C + w;
            if (s.known[i]) acc += double(s.val[i]) * x[w];
          }
          y[u] = acc;
          top = std::max(top, acc);
        }
        for (std::size_t u = 0; u < n; ++u) x[u] = y[u] / top;
      }
      double lambda = INFINITY;
      for (std::size_t u = 0; u < n; ++u) {
        if (x[u] <= 1e-12) continue;
        double acc = 0;
        for (std::size_t w = 0; w < n; ++w) {
          const auto i = (a * C + u) * C + w;
          if (s.known[i]) acc += double(s.val[i]) * x[w];
        }
        lambda = std::min(lambda, acc / x[u]);
      }
      if (lambda > P.d[a] * (1 + 1e-9) + 1e-9) return false;
    }
    return true;
  }

  // Fills derivable entries and checks every relation entry on known data.
  bool propagate(State& s) const {
    const std::size_t C = P.C;
    auto product_entry = [&](std::size_t a, std::size_t b, std::size_t u, std::size_t w, std::int64_t& sum) {
      // (M(b) M(a))_{u,w}; returns completeness, accumulates the known part.
      bool complete = true;
      sum = 0;
      for (std::size_t e = 0; e < C; ++e) {
        const auto ib = at(b, u, e);
        if (!s.known[ib]) {
          complete = false;
          continue;
        }
        const auto x = s.val[ib];
        if (x == 0) continue;
        const auto ia = at(a, e, w);
        if (!s.known[ia]) {
          complete = false;
          continue;
        }
        sum += x * s.val[ia];
      }
      return complete;
    };
    // Known entries never change, so entries in columns (or rows) of vertices
    // not yet created are usable too.
    for (const auto& def : P.defs) {
      for (std::size_t u = 0; u < C; ++u) {
        for (std::size_t w = 0; w < C; ++w) {
          const auto ih = at(def.h, u, w);
          if (s.known[ih]) continue;
          std::int64_t lhs;
          if (!product_entry(def.alpha, def.beta, u, w, lhs)) continue;
          bool ok = true;
          for (auto [g, k] : def.others) {
            const auto ig = at(g, u, w);
            if (!s.known[ig]) {
              ok = false;
              break;
            }
            lhs -= k * s.val[ig];
          }
          if (!ok) continue;
          if (lhs < 0 || lhs % def.coef != 0) return false;
          const auto x = lhs / def.coef;
          if (x > P.entry_cap[def.h]) return false;
          s.val[ih] = x;
          s.known[ih] = 1;
          // Reciprocity for derived matrices.
          const auto id = at(P.ring->dual_index(def.h), w, u);
          if (s.known[id] && s.val[id] != x) return false;
        }
      }
    }
    for (std::size_t r = 0; r < P.relations.size(); ++r) {
      const auto& rel = P.relations[r];
      for (std::size_t u = 0; u < C; ++u) {
        for (std::size_t w = 0; w < C; ++w) {
          const auto ic = (r * C + u) * C + w;
          if (s.checked[ic]) continue;
          std::int64_t lhs;
          const bool lhs_complete = product_entry(rel.alpha, rel.beta, u, w, lhs);
          std::int64_t rhs = 0;
          bool rhs_complete = true;
          for (auto [g, k] : rel.rhs) {
            const auto ig = at(g, u, w);
            if (!s.known[ig]) {
              rhs_complete = false;
              continue;
            }
            rhs += k * s.val[ig];
          }
          if (rhs_complete && lhs > rhs) return false;
          if (lhs_complete && rhs > lhs) return false;
          if (lhs_complete && rhs_complete) {
            if (lhs != rhs) return false;
            s.checked[ic] = 1;
          }
        }
      }
    }
    return spectrally_feasible(s);
  }

  void leaf(const State& s, std::map<std::vector<std::int64_t>, ModulePtr>& found) const {
    const std::size_t n = s.n;
    std::vector<IntMatrix> mats(P.K, IntMatrix(n, n));
    for (std::size_t a = 0; a < P.K; ++a)
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t w = 0; w < n; ++w) {
          if (!s.known[at(a, u, w)]) return;  // cannot happen once all rows are set
          mats[a](u, w) = s.val[at(a, u, w)];
        }
    for (std::size_t a = 0; a < P.K; ++a)
      if (!(mats[P.ring->dual_index(a)] == mats[a].transpose())) return;
    for (std::size_t a = 0; a < P.K; ++a)
      for (std::size_t u = 0; u < n; ++u) {
        bool any = false;
        for (std::size_t w = 0; w < n && !any; ++w) any = mats[a](u, w) != 0;
        if (!any) return;
      }

    // Joint positive eigenvector: the Perron vector of sum_a M(a) must satisfy
    // M(a) D = d(a) D for every a.
    IntMatrix sum(n, n);
    for (const auto& m : mats) sum = sum + m;
    const auto pr = perron_general(sum, 1e-15, 20000);
    const auto& D = pr.vector;
    double dnorm = 0;
    for (double x : D) {
      if (!(x > 0)) return;
      dnorm = std::max(dnorm, x);
    }
    for (std::size_t a = 0; a < P.K; ++a) {
      const auto md = mats[a].apply(D);
      for (std::size_t u = 0; u < n; ++u)
        if (std::abs(md[u] - P.d[a] * D[u]) > 1e-6 * dnorm * std::max(1.0, P.d[a])) return;
    }
    // Anchor at a vertex of minimal dimension.
    const double dmin = *std::min_element(D.begin(), D.end());
    if (D[0] > dmin * (1 + 1e-6)) return;

    std::vector<double> weight(D);
    for (auto& x : weight) x /= dmin;
    auto c = canonicalize(mats, n, weight);
    if (found.count(c.best)) return;
    auto name = P.ring->name() + "-module-" + std::to_string(n);
    found.emplace(c.best, build_canonical(P.ring, mats, c.best_order, name));
  }

  const Plan& P;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::atomic<bool> stop_{false};
  std::atomic<std::size_t> nodes_{0};
  std::atomic<std::size_t> tick_{0};
};

}  // namespace

EnumerationResult enumerate_modules(const TablePtr& ring, const ModuleSearchConfig& config) {
  EnumerationResult res;
  res.certification_bound = certification_bound(*ring);
  const std::size_t max_size = config.max_basis_size ? config.max_basis_size : res.certification_bound;
  if (max_size == 0) throw std::invalid_argument("max_basis_size must be positive");
  res.max_basis_size = max_size;
  const Plan plan = make_plan(ring, config, max_size);
  for (auto g : plan.search) res.search_set.push_back(ring->label(g));

  std::map<std::vector<std::int64_t>, ModulePtr> found;
  Search search(plan, config.time_budget_seconds);
  const State root = search.initial();
  if (plan.search.empty()) {
    search.run(root, found);
  } else {
    // Fan out over the choices for the first row.
    const auto tasks = search.children(root);
    const std::size_t workers =
        std::max<std::size_t>(1, std::min(config.threads ? config.threads : default_thread_count(), tasks.size()));
    std::vector<std::map<std::vector<std::int64_t>, ModulePtr>> partial(tasks.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) search.run(tasks[i], partial[i]);
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    for (auto& part : partial) found.merge(part);
  }
  res.complete = !search.stopped();
  res.nodes = search.nodes();
  for (auto& [enc, m] : found) res.modules.push_back(m);
  // Sort by (size, encoding); the encoding starts with the size.
  return res;
}

TorsionVerdict is_torsion_free(const TablePtr& ring, const ModuleSearchConfig& config) {
  TorsionVerdict v;
  const auto res = enumerate_modules(ring, config);
  const auto standard = canonical_encoding(*standard_module(ring));
  for (const auto& m : res.modules)
    if (canonical_encoding(*m) != standard) v.witnesses.push_back(m);
  v.classes = res.modules.size();
  v.certified_bound = res.complete ? res.max_basis_size : 0;
  if (!v.witnesses.empty())
    v.status = TorsionStatus::not_torsion_free;
  else if (res.complete && res.max_basis_size >= res.certification_bound)
    v.status = TorsionStatus::torsion_free_certified;
  else
    v.status = TorsionStatus::inconclusive;
  return v;
}

std::optional<ModulePtr> integer_dim_shortcut(const TablePtr& ring) {
  if (ring->size() <= 1) return std::nullopt;
  const auto dims = frobenius_perron_dims(*ring);
  for (const auto& [l, x] : dims.values())
    if (std::abs(x - std::round(x)) > 1e-9) return std::nullopt;
  return singleton_module(ring, dims);
}

}  // namespace fusion
