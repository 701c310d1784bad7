#include "fusion/constructors.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <sstream>

#include "fusion/errors.hpp"

namespace fusion {

// --- groups ----------------------------------------------------------------

GroupTable cyclic_group(std::size_t n) {
  if (n == 0) throw NotAGroup("cyclic group of order 0");
  GroupTable g;
  g.name = "Z/" + std::to_string(n);
  for (std::size_t i = 0; i < n; ++i) g.elements.emplace_back(std::to_string(i));
  g.mult.assign(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g.mult[i][j] = (i + j) % n;
  return g;
}

GroupTable direct_product(const GroupTable& g, const GroupTable& h) {
  GroupTable out;
  out.name = g.name + "x" + h.name;
  const std::size_t m = h.elements.size();
  for (const auto& a : g.elements)
    for (const auto& b : h.elements) out.elements.push_back(pair_label(a, b));
  const std::size_t n = out.elements.size();
  out.mult.assign(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out.mult[i][j] = g.mult[i / m][j / m] * m + h.mult[i % m][j % m];
  return out;
}

GroupTable symmetric_group(std::size_t n) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));

  GroupTable g;
  g.name = "S" + std::to_string(n);
  for (const auto& q : perms) {
    std::string id;
    for (int v : q) id += std::to_string(v);
    g.elements.emplace_back(id);
  }
  g.mult.assign(perms.size(), std::vector<std::size_t>(perms.size()));
  for (std::size_t i = 0; i < perms.size(); ++i)
    for (std::size_t j = 0; j < perms.size(); ++j) {
      std::vector<int> comp(n);  // (s t)(k) = s(t(k))
      for (std::size_t k = 0; k < n; ++k) comp[k] = perms[i][perms[j][k] - 1];
      g.mult[i][j] = static_cast<std::size_t>(std::find(perms.begin(), perms.end(), comp) - perms.begin());
    }
  return g;
}

GroupTable dihedral_group(std::size_t n) {
  // r^a s^b, indexed a + n*b
  GroupTable g;
  g.name = "D" + std::to_string(n);
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t a = 0; a < n; ++a) g.elements.emplace_back((b ? "s" : "r") + std::to_string(a));
  const std::size_t size = 2 * n;
  g.mult.assign(size, std::vector<std::size_t>(size));
  for (std::size_t x = 0; x < size; ++x)
    for (std::size_t y = 0; y < size; ++y) {
      const std::size_t a = x % n, b = x / n, c = y % n, d = y / n;
      const std::size_t rot = b ? (a + n - c) % n : (a + c) % n;
      g.mult[x][y] = rot + n * ((b + d) % 2);
    }
  return g;
}

GroupTable quaternion_group() {
  // Unit u in {1,i,j,k} with sign; index = u + 4 * (sign negative).
  static const int unit_mult[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int sign_mult[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  static const char* names[4] = {"1", "i", "j", "k"};
  GroupTable g;
  g.name = "Q8";
  for (int s = 0; s < 2; ++s)
    for (int u = 0; u < 4; ++u) g.elements.emplace_back(std::string(s ? "-" : "") + names[u]);
  g.mult.assign(8, std::vector<std::size_t>(8));
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      const int u = x % 4, v = y % 4;
      int sign = sign_mult[u][v] * (x / 4 ? -1 : 1) * (y / 4 ? -1 : 1);
      g.mult[x][y] = static_cast<std::size_t>(unit_mult[u][v] + (sign < 0 ? 4 : 0));
    }
  return g;
}

TablePtr group_ring(const GroupTable& group) {
  const std::size_t n = group.elements.size();
  if (n == 0 || group.mult.size() != n) throw NotAGroup("table is not square");
  for (const auto& row : group.mult) {
    if (row.size() != n) throw NotAGroup("table is not square");
    for (auto v : row)
      if (v >= n) throw NotAGroup("table entry out of range");
  }
  std::size_t e = n;
  for (std::size_t i = 0; i < n && e == n; ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) ok = group.mult[i][j] == j && group.mult[j][i] == j;
    if (ok) e = i;
  }
  if (e == n) throw NotAGroup("no identity element");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (group.mult[group.mult[a][b]][c] != group.mult[a][group.mult[b][c]])
          throw NotAGroup("multiplication is not associative");

  RingData data;
  data.name = group.name.empty() ? "group" : group.name;
  data.basis = group.elements;
  data.unit = group.elements[e];
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t inv = n;
    for (std::size_t b = 0; b < n; ++b)
      if (group.mult[a][b] == e && group.mult[b][a] == e) inv = b;
    if (inv == n) throw NotAGroup("element without inverse: " + group.elements[a].id());
    data.dual[group.elements[a]] = group.elements[inv];
    for (std::size_t b = 0; b < n; ++b)
      data.products[{group.elements[a], group.elements[b]}] = RingElement(group.elements[group.mult[a][b]]);
  }
  return std::make_shared<const BasedRingTable>(std::move(data));
}

// --- small finite rings ----------------------------------------------------

TablePtr fibonacci() {
  RingData d;
  d.name = "fibonacci";
  d.basis = {"1", "phi"};
  d.unit = "1";
  d.dual = {{"1", "1"}, {"phi", "phi"}};
  d.products[{"1", "1"}] = RingElement("1");
  d.products[{"1", "phi"}] = RingElement("phi");
  d.products[{"phi", "1"}] = RingElement("phi");
  d.products[{"phi", "phi"}] = RingElement("1") + RingElement("phi");
  return std::make_shared<const BasedRingTable>(std::move(d));
}

TablePtr trivial_ring() { return group_ring(cyclic_group(1)); }

TablePtr su2_level(int level) {
  if (level < 1) throw FusionError("su2 level must be positive");
  RingData d;
  d.name = "su2_level_" + std::to_string(level);
  d.unit = "0";
  for (int k = 0; k <= level; ++k) {
    d.basis.emplace_back(std::to_string(k));
    d.dual[std::to_string(k)] = std::to_string(k);
  }
  for (int k = 0; k <= level; ++k)
    for (int m = 0; m <= level; ++m) {
      RingElement p;
      const int top = std::min(k + m, 2 * level - k - m);
      for (int j = std::abs(k - m); j <= top; j += 2) p.add(std::to_string(j), 1);
      d.products[{std::to_string(k), std::to_string(m)}] = p;
    }
  return std::make_shared<const BasedRingTable>(std::move(d));
}

// --- A(1) ------------------------------------------------------------------

namespace {

std::optional<std::uint64_t> parse_natural(const std::string& s) {
  if (s.empty() || s.size() > 18) return std::nullopt;
  if (s.size() > 1 && s[0] == '0') return std::nullopt;
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

}  // namespace

std::shared_ptr<const LazyBasedRing> a1() {
  LazyRingSpec s;
  s.name = "a1";
  s.unit = "0";
  s.contains = [](const Label& l) { return parse_natural(l.id()).has_value(); };
  s.dual = [](const Label& l) { return l; };
  s.multiply = [](const Label& a, const Label& b) {
    const auto n = *parse_natural(a.id());
    const auto m = *parse_natural(b.id());
    RingElement out;
    for (auto k = n > m ? n - m : m - n; k <= n + m; k += 2) out.add(std::to_string(k), 1);
    return out;
  };
  s.level = [](const Label& l) { return static_cast<std::size_t>(*parse_natural(l.id())); };
  s.enumerate_level = [](std::size_t n) { return std::vector<Label>{std::to_string(n)}; };
  s.dimension = [](const Label& l) { return static_cast<double>(*parse_natural(l.id()) + 1); };
  return std::make_shared<const LazyBasedRing>(std::move(s));
}

// --- A(2) ------------------------------------------------------------------

std::string a2_word(const Label& l) {
  const auto& id = l.id();
  if (id == "e") return {};
  if (id.size() % 2 != 0) throw LabelNotInRing(id);
  std::string w;
  for (std::size_t i = 0; i < id.size(); i += 2) {
    if (id[i] != 'p' || (id[i + 1] != '+' && id[i + 1] != '-')) throw LabelNotInRing(id);
    w.push_back(id[i + 1]);
  }
  return w;
}

Label a2_label(const std::string& word) {
  if (word.empty()) return "e";
  std::string id;
  for (char c : word) {
    id.push_back('p');
    id.push_back(c);
  }
  return id;
}

namespace {

char flip(char c) { return c == '+' ? '-' : '+'; }

std::string a2_dual_word(const std::string& w) {
  std::string out(w.rbegin(), w.rend());
  for (char& c : out) c = flip(c);
  return out;
}

// w * z = sum over u with w = x u and z = dual(u) y of x y.
RingElement a2_multiply(const std::string& w, const std::string& z) {
  RingElement out;
  for (std::size_t k = 0; k <= std::min(w.size(), z.size()); ++k) {
    const std::string u = w.substr(w.size() - k);
    if (z.compare(0, k, a2_dual_word(u)) != 0) continue;
    out.add(a2_label(w.substr(0, w.size() - k) + z.substr(k)), 1);
  }
  return out;
}

double a2_dimension(const std::string& w) {
  // d(p_m w') = 2 d(w') - [w' starts with the opposite letter] d(tail of w')
  std::vector<double> d(w.size() + 1, 1.0);  // d[i] = dim of suffix starting at i
  for (std::size_t i = w.size(); i-- > 0;) {
    double v = 2.0 * d[i + 1];
    if (i + 1 < w.size() && w[i + 1] == flip(w[i])) v -= d[i + 2];
    d[i] = v;
  }
  return d[0];
}

}  // namespace

std::shared_ptr<const LazyBasedRing> a2() {
  LazyRingSpec s;
  s.name = "a2";
  s.unit = "e";
  s.contains = [](const Label& l) {
    try {
      a2_word(l);
      return true;
    } catch (const LabelNotInRing&) {
      return false;
    }
  };
  s.dual = [](const Label& l) { return a2_label(a2_dual_word(a2_word(l))); };
  s.multiply = [](const Label& a, const Label& b) { return a2_multiply(a2_word(a), a2_word(b)); };
  s.level = [](const Label& l) { return a2_word(l).size(); };
  s.enumerate_level = [](std::size_t n) {
    std::vector<Label> out;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      std::string w(n, '+');
      for (std::size_t i = 0; i < n; ++i)
        if (bits >> (n - 1 - i) & 1) w[i] = '-';
      out.push_back(a2_label(w));
    }
    return out;
  };
  s.dimension = [](const Label& l) { return a2_dimension(a2_word(l)); };
  return std::make_shared<const LazyBasedRing>(std::move(s));
}

// --- tensor product --------------------------------------------------------

Label pair_label(const Label& left, const Label& right) { return left.id() + ":" + right.id(); }

TablePtr tensor_product(const BasedRingTable& left, const BasedRingTable& right) {
  RingData d;
  d.name = "tensor(" + left.name() + "," + right.name() + ")";
  d.unit = pair_label(left.unit(), right.unit());
  for (const auto& a : left.basis())
    for (const auto& b : right.basis()) {
      if (!d.dual.emplace(pair_label(a, b), pair_label(left.dual(a), right.dual(b))).second)
        throw StructuralError("ambiguous pair label " + pair_label(a, b).id());
      d.basis.push_back(pair_label(a, b));
    }
  for (const auto& a1l : left.basis())
    for (const auto& b1 : right.basis())
      for (const auto& a2l : left.basis())
        for (const auto& b2 : right.basis()) {
          RingElement p;
          const auto x = left.multiply(a1l, a2l);
          const auto y = right.multiply(b1, b2);
          for (const auto& [c, u] : x.terms())
            for (const auto& [e, v] : y.terms()) p.add(pair_label(c, e), u * v);
          d.products[{pair_label(a1l, b1), pair_label(a2l, b2)}] = p;
        }
  return std::make_shared<const BasedRingTable>(std::move(d));
}

// --- free product ----------------------------------------------------------

namespace {

struct Letter {
  std::size_t factor;  // 0-based
  Label label;
  friend bool operator==(const Letter&, const Letter&) = default;
};
using Word = std::vector<Letter>;

class FreeProductWords {
 public:
  explicit FreeProductWords(std::vector<RingPtr> factors) : factors_(std::move(factors)) {
    for (const auto& f : factors_) {
      std::optional<DimensionFunction> dims;
      if (auto table = std::dynamic_pointer_cast<const BasedRingTable>(f)) {
        try {
          dims = frobenius_perron_dims(*table);
        } catch (const NoDimensionFunction&) {
        }
      }
      table_dims_.push_back(std::move(dims));
    }
  }

  std::optional<Word> parse(const Label& l) const {
    Word w;
    if (l.id() == "e") return w;
    std::size_t start = 0;
    const std::string& id = l.id();
    while (start <= id.size()) {
      std::size_t end = id.find('.', start);
      if (end == std::string::npos) end = id.size();
      const std::string letter = id.substr(start, end - start);
      const auto at = letter.rfind('@');
      if (at == std::string::npos || at == 0) return std::nullopt;
      std::size_t factor = 0;
      try {
        std::size_t used = 0;
        factor = std::stoul(letter.substr(at + 1), &used);
        if (used != letter.size() - at - 1) return std::nullopt;
      } catch (...) {
        return std::nullopt;
      }
      if (factor < 1 || factor > factors_.size()) return std::nullopt;
      Letter x{factor - 1, Label(letter.substr(0, at))};
      const auto& ring = *factors_[x.factor];
      if (!ring.contains(x.label) || x.label == ring.unit()) return std::nullopt;
      if (!w.empty() && w.back().factor == x.factor) return std::nullopt;
      w.push_back(std::move(x));
      start = end + 1;
      if (end == id.size()) break;
    }
    return w;
  }

  Label render(const Word& w) const {
    if (w.empty()) return "e";
    std::string id;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) id += '.';
      id += w[i].label.id() + "@" + std::to_string(w[i].factor + 1);
    }
    return id;
  }

  Word word(const Label& l) const {
    auto w = parse(l);
    if (!w) throw LabelNotInRing(l.id());
    return *w;
  }

  // Recursive product of alternating words; terminates since the total
  // number of letters strictly decreases in the recursive call.
  void multiply(const Word& w, const Word& z, const Coeff& scale, RingElement& out) const {
    if (w.empty() || z.empty()) {
      Word cat = w;
      cat.insert(cat.end(), z.begin(), z.end());
      out.add(render(cat), scale);
      return;
    }
    const Letter& a = w.back();
    const Letter& b = z.front();
    if (a.factor != b.factor) {
      Word cat = w;
      cat.insert(cat.end(), z.begin(), z.end());
      out.add(render(cat), scale);
      return;
    }
    const auto& ring = *factors_[a.factor];
    const Word head(w.begin(), w.end() - 1);
    const Word tail(z.begin() + 1, z.end());
    for (const auto& [g, n] : ring.multiply(a.label, b.label).terms()) {
      if (g == ring.unit()) {
        multiply(head, tail, scale * n, out);
      } else {
        Word cat = head;
        cat.push_back(Letter{a.factor, g});
        cat.insert(cat.end(), tail.begin(), tail.end());
        out.add(render(cat), scale * n);
      }
    }
  }

  std::size_t level(const Word& w) const {
    std::size_t s = 0;
    for (const auto& x : w) s += factors_[x.factor]->level(x.label);
    return s;
  }

  void enumerate(std::size_t remaining, std::size_t last_factor, Word& prefix, std::vector<Label>& out) const {
    if (remaining == 0) {
      out.push_back(render(prefix));
      return;
    }
    for (std::size_t f = 0; f < factors_.size(); ++f) {
      if (f == last_factor) continue;
      for (std::size_t k = 1; k <= remaining; ++k) {
        for (const auto& l : factors_[f]->enumerate_level(k)) {
          if (l == factors_[f]->unit()) continue;
          prefix.push_back(Letter{f, l});
          enumerate(remaining - k, f, prefix, out);
          prefix.pop_back();
        }
      }
    }
  }

  std::optional<double> dimension(const Word& w) const {
    double d = 1.0;
    for (const auto& x : w) {
      std::optional<double> v;
      if (table_dims_[x.factor]) v = table_dims_[x.factor]->at(x.label);
      else v = factors_[x.factor]->known_dimension(x.label);
      if (!v) return std::nullopt;
      d *= *v;
    }
    return d;
  }

  const RingPtr& factor(std::size_t i) const { return factors_[i]; }
  std::size_t count() const { return factors_.size(); }

 private:
  std::vector<RingPtr> factors_;
  std::vector<std::optional<DimensionFunction>> table_dims_;
};

}  // namespace

std::shared_ptr<const LazyBasedRing> free_product(std::vector<RingPtr> factors) {
  if (factors.empty()) throw FusionError("free product needs at least one factor");
  auto words = std::make_shared<const FreeProductWords>(std::move(factors));
  LazyRingSpec s;
  s.name = "free(";
  for (std::size_t i = 0; i < words->count(); ++i) s.name += (i ? "," : "") + words->factor(i)->name();
  s.name += ")";
  s.unit = "e";
  s.contains = [words](const Label& l) { return words->parse(l).has_value(); };
  s.dual = [words](const Label& l) {
    Word w = words->word(l);
    std::reverse(w.begin(), w.end());
    for (auto& x : w) x.label = words->factor(x.factor)->dual(x.label);
    return words->render(w);
  };
  s.multiply = [words](const Label& a, const Label& b) {
    RingElement out;
    words->multiply(words->word(a), words->word(b), 1, out);
    return out;
  };
  s.level = [words](const Label& l) { return words->level(words->word(l)); };
  s.enumerate_level = [words](std::size_t n) {
    std::vector<Label> out;
    Word prefix;
    words->enumerate(n, words->count(), prefix, out);
    return out;
  };
  s.dimension = [words](const Label& l) { return words->dimension(words->word(l)); };
  return std::make_shared<const LazyBasedRing>(std::move(s));
}

// --- subrings --------------------------------------------------------------

GeneratedSubring subring_generated(const BasedRing& ring, const Label& generator, std::size_t depth) {
  ring.require(generator);
  const std::vector<Label> gens = {generator, ring.dual(generator)};
  std::set<Label> found = {ring.unit(), generator, ring.dual(generator)};
  std::vector<Label> frontier(found.begin(), found.end());
  GeneratedSubring out;
  for (std::size_t it = 0; it < depth && !frontier.empty(); ++it) {
    std::vector<Label> next;
    for (const auto& f : frontier)
      for (const auto& g : gens)
        for (const auto& [c, v] : ring.multiply(g, f).terms())
          if (found.insert(c).second) next.push_back(c);
    frontier = std::move(next);
  }
  out.complete = frontier.empty();
  out.labels.assign(found.begin(), found.end());
  return out;
}

TablePtr restrict_to_subring(const BasedRingTable& ring, const std::vector<Label>& subset) {
  std::set<Label> in;
  for (const auto& l : subset) {
    if (!ring.contains(l)) throw InvalidSubring("label not in ring: " + l.id());
    in.insert(l);
  }
  if (!in.count(ring.unit())) throw InvalidSubring("subset does not contain the unit");
  RingData d;
  d.name = ring.name() + "|sub";
  d.unit = ring.unit();
  d.basis.assign(in.begin(), in.end());
  for (const auto& a : in) {
    const Label abar = ring.dual(a);
    if (!in.count(abar)) throw InvalidSubring("subset not closed under the involution at " + a.id());
    d.dual[a] = abar;
    for (const auto& b : in) {
      auto p = ring.multiply(a, b);
      for (const auto& [c, v] : p.terms())
        if (!in.count(c))
          throw InvalidSubring("product " + a.id() + "*" + b.id() + " leaves the subset at " + c.id());
      d.products[{a, b}] = std::move(p);
    }
  }
  return std::make_shared<const BasedRingTable>(std::move(d));
}

DivisibilityResult is_divisible(const BasedRingTable& ring, const std::vector<Label>& subring) {
  const auto sub = restrict_to_subring(ring, subring);
  DivisibilityResult res;
  res.subring = sub->basis();

  // Connected components of the right action of the subring on the basis.
  const std::size_t n = ring.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t g = 0; g < n; ++g)
    for (const auto& b : sub->basis())
      for (const auto& [c, v] : ring.product(g, ring.index(b))) parent[find(c)] = find(g);

  std::map<std::size_t, std::vector<Label>> comps;
  for (std::size_t g = 0; g < n; ++g) comps[find(g)].push_back(ring.label(g));
  std::vector<std::vector<Label>> ordered;
  for (auto& [root, members] : comps) ordered.push_back(std::move(members));
  std::sort(ordered.begin(), ordered.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });

  res.divisible = true;
  for (const auto& members : ordered) {
    DivisibilityComponent comp;
    comp.members = members;
    if (members.size() != sub->size()) {
      res.divisible = false;
      if (res.reason.empty())
        res.reason = "component {" + members.front().id() + ",...} has size " + std::to_string(members.size()) +
                     " != " + std::to_string(sub->size());
      res.components.push_back(std::move(comp));
      continue;
    }
    const std::set<Label> member_set(members.begin(), members.end());
    bool found = false;
    for (const auto& anchor : members) {
      std::map<Label, Label> image;  // b -> anchor * b
      std::map<Label, Label> back;
      bool ok = true;
      for (const auto& b : sub->basis()) {
        const auto p = ring.multiply(anchor, b);
        if (!p.is_basis_element()) {
          ok = false;
          break;
        }
        const Label& c = p.terms().begin()->first;
        if (!member_set.count(c) || !back.emplace(c, b).second) {
          ok = false;
          break;
        }
        image[b] = c;
      }
      // Intertwining: (anchor*b)*b' = sum_e N_{bb'}^e anchor*e
      for (const auto& b : sub->basis()) {
        if (!ok) break;
        for (const auto& b2 : sub->basis()) {
          const auto lhs = ring.multiply(image[b], b2);
          const auto rhs = sub->multiply(b, b2).map_labels([&](const Label& e) { return image[e]; });
          if (lhs != rhs) {
            ok = false;
            break;
          }
        }
      }
      if (ok) {
        comp.anchor = anchor;
        comp.to_subring = std::move(back);
        found = true;
        break;
      }
    }
    if (!found) {
      res.divisible = false;
      if (res.reason.empty()) res.reason = "no anchor for component {" + members.front().id() + ",...}";
    }
    res.components.push_back(std::move(comp));
  }
  return res;
}

}  // namespace fusion
