#include "doctest.h"
#include "fusion/constructors.hpp"
#include "fusion/errors.hpp"
#include "fusion/modules.hpp"

using namespace fusion;

namespace {

ModuleElement el(std::initializer_list<std::pair<const char*, int>> terms) {
  ModuleElement x;
  for (const auto& [l, c] : terms) x.add(Label(l), c);
  return x;
}

// Compatibility <alpha b, c> = alpha <b, c>, checked on every triple.
bool inner_compatible(const BasedModuleTable& m) {
  const auto& r = m.ring_table();
  for (const auto& a : r.basis())
    for (const auto& b : m.basis())
      for (const auto& c : m.basis()) {
        RingElement lhs;
        for (const auto& [x, v] : m.act(a, b).terms()) lhs.add(inner(m, x, c), v);
        if (lhs != fuse(r, RingElement(a), inner(m, b, c))) return false;
      }
  return true;
}

// Lazy module: odd labels of A(1) over the subring of even labels.
LazyModulePtr odd_over_even() {
  auto base = a1();
  LazyRingSpec rs = base->spec();
  rs.name = "a1_even";
  rs.contains = [base](const Label& l) { return base->contains(l) && std::stoul(l.id()) % 2 == 0; };
  rs.level = [](const Label& l) { return static_cast<std::size_t>(std::stoul(l.id()) / 2); };
  rs.enumerate_level = [](std::size_t n) { return std::vector<Label>{std::to_string(2 * n)}; };
  auto even = std::make_shared<const LazyBasedRing>(rs);
  LazyModuleSpec s;
  s.name = "odd";
  s.ring = even;
  s.origin = "1";
  s.contains = [base](const Label& l) { return base->contains(l) && std::stoul(l.id()) % 2 == 1; };
  s.act = [base](const Label& a, const Label& b) { return base->multiply(a, b); };
  s.level = [](const Label& l) { return static_cast<std::size_t>(std::stoul(l.id()) / 2); };
  s.enumerate_level = [](std::size_t n) { return std::vector<Label>{std::to_string(2 * n + 1)}; };
  s.dimension = [](const Label& l) -> std::optional<double> { return (std::stod(l.id()) + 1) / 2; };
  return std::make_shared<const LazyModule>(std::move(s));
}

}  // namespace

TEST_CASE("act") {
  auto fib = fibonacci();
  auto std_fib = standard_module(fib);
  for (const auto& b : std_fib->basis()) CHECK(std_fib->act("1", b) == ModuleElement(b));
  CHECK(std_fib->act("phi", "phi") == el({{"1", 1}, {"phi", 1}}));
  auto q = quotient_module(group_ring(cyclic_group(4)), {"0", "2"});
  CHECK(q->basis() == std::vector<Label>{"0", "1"});
  CHECK(q->act("1", "0") == el({{"1", 1}}));
  CHECK(act(*q, RingElement("1") + RingElement("2"), el({{"0", 2}})) == el({{"0", 2}, {"1", 2}}));
  CHECK_THROWS_AS(std_fib->act("phi", "x"), LabelNotInRing);
}

TEST_CASE("inner products") {
  auto fib = fibonacci();
  auto m = standard_module(fib);
  for (const auto& a : m->basis())
    for (const auto& b : m->basis()) {
      CHECK(inner(*m, a, b) == fib->multiply(a, fib->dual(b)));
      CHECK(inner(*m, a, b) == dual(*fib, inner(*m, b, a)));
      CHECK(tau(*fib, inner(*m, a, b)) == (a == b ? 1 : 0));
    }
  auto z2 = group_ring(cyclic_group(2));
  auto s = singleton_module(z2, frobenius_perron_dims(*z2));
  CHECK(inner(*s, "b0", "b0") == RingElement("0") + RingElement("1"));
}

TEST_CASE("verify_module on constructions") {
  auto fib = fibonacci();
  CHECK(verify_module(*standard_module(fib)).passed());
  CHECK(verify_module(*standard_module(su2_level(4))).passed());
  CHECK(verify_module(*standard_module(group_ring(symmetric_group(3)))).passed());
  auto tw = twisted_tensor_module(fib);
  CHECK(verify_module(*tw).passed());
  CHECK(is_connected(*tw));
  CHECK(inner_compatible(*tw));
  auto z4 = group_ring(cyclic_group(4));
  auto q = quotient_module(z4, {"0", "2"});
  CHECK(verify_module(*q).passed());
  CHECK(inner_compatible(*q));
  auto s3 = group_ring(symmetric_group(3));
  CHECK(verify_module(*quotient_module(s3, {"123", "213"})).passed());
}

TEST_CASE("verify_module reports reciprocity failures with a witness") {
  auto z4 = group_ring(cyclic_group(4));
  auto mats = standard_module(z4)->matrices();
  // Planted: 1 * 0 = 1 + 2 breaks N_{1,0}^2 = N_{3,2}^0.
  mats[z4->index("1")](0, 2) = 1;
  BasedModuleTable bad(z4, z4->basis(), mats);
  auto rep = verify_module(bad);
  CHECK_FALSE(rep.check_passed("frobenius_reciprocity"));
  CHECK(rep.find("frobenius_reciprocity")->condition == 4);
  CHECK(rep.find("frobenius_reciprocity")->witness == "(1,0,2)");
}

TEST_CASE("module structure errors") {
  ModuleData d;
  d.ring = fibonacci();
  d.basis = {"x"};
  d.action[{Label("1"), Label("x")}] = el({{"x", 1}});
  CHECK_THROWS_AS(BasedModuleTable{d}, StructuralError);
  d.action[{Label("phi"), Label("x")}] = el({{"y", 1}});
  CHECK_THROWS_AS(BasedModuleTable{d}, StructuralError);
}

TEST_CASE("connectedness") {
  auto fib = fibonacci();
  auto m = standard_module(fib);
  CHECK(is_connected(*m));
  auto two = direct_sum(*m, *m);
  CHECK(connected_components(*two).size() == 2);
  CHECK(verify_module(*two).passed());
  CHECK(is_connected(*quotient_module(group_ring(cyclic_group(4)), {"0", "2"})));
}

TEST_CASE("dimension vectors") {
  auto fib = fibonacci();
  auto fd = frobenius_perron_dims(*fib);
  auto d = dim_vector(*standard_module(fib), fd, "1");
  CHECK(d.at("phi") == doctest::Approx(fd.at("phi")));
  auto z4 = group_ring(cyclic_group(4));
  auto zd = frobenius_perron_dims(*z4);
  auto q = dim_vector(*quotient_module(z4, {"0", "2"}), zd, "0");
  CHECK(q.at("0") == doctest::Approx(2.0));
  CHECK(q.at("1") == doctest::Approx(2.0));
  auto z2 = group_ring(cyclic_group(2));
  CHECK(dim_vector(*singleton_module(z2, frobenius_perron_dims(*z2)), frobenius_perron_dims(*z2), "b0").at("b0") ==
        doctest::Approx(2.0));
  // A non-multiplicative candidate is rejected.
  auto mats = standard_module(z4)->matrices();
  for (auto& m : mats) m = 2 * m;
  mats[z4->unit_index()] = IntMatrix::identity(4);
  BasedModuleTable wrong(z4, z4->basis(), mats);
  CHECK_THROWS_AS(dim_vector(wrong, zd, "0"), IncompatibleDims);
}

TEST_CASE("quotient modules") {
  auto z2 = group_ring(cyclic_group(2));
  auto q = quotient_module(z2, {"0", "1"});
  CHECK(q->size() == 1);
  CHECK(q->act("1", "0") == el({{"0", 1}}));
  auto s3 = su2_level(3);
  auto qs = quotient_module(s3, {"0", "3"});
  CHECK(qs->basis() == std::vector<Label>{"0", "1"});
  CHECK(verify_module(*qs).passed());
  CHECK_THROWS_AS(quotient_module(s3, {"0", "1"}), NotAGroup);
}

TEST_CASE("induced modules") {
  auto z4 = group_ring(cyclic_group(4));
  auto w = is_divisible(*z4, {"0", "2"});
  auto sub = restrict_to_subring(*z4, {"0", "2"});
  auto point = singleton_module(sub, frobenius_perron_dims(*sub));
  auto ind = induced_module(z4, w, *point);
  CHECK(verify_module(*ind).passed());
  auto q = quotient_module(z4, {"0", "2"});
  CHECK(ind->size() == 2);
  // Relabel anchors to coset representatives and compare tables.
  auto renamed = relabel(*ind, {{pair_label("0", "b0"), "0"}, {pair_label("1", "b0"), "1"}});
  CHECK(renamed->matrices() == q->matrices());

  auto ind_std = induced_module(z4, w, *standard_module(sub));
  CHECK(ind_std->size() == 4);
  CHECK(verify_module(*ind_std).passed());

  auto fib = fibonacci();
  auto wt = is_divisible(*fib, {"1"});
  auto triv = restrict_to_subring(*fib, {"1"});
  auto ind_t = induced_module(fib, wt, *standard_module(triv));
  CHECK(ind_t->size() == 2);
  CHECK(verify_module(*ind_t).passed());

  DivisibilityResult not_div = is_divisible(*su2_level(2), {"0", "2"});
  auto s2sub = restrict_to_subring(*su2_level(2), {"0", "2"});
  CHECK_THROWS_AS(induced_module(su2_level(2), not_div, *standard_module(s2sub)), InvalidWitness);
}

TEST_CASE("twisted tensor module") {
  auto fib = fibonacci();
  auto tw = twisted_tensor_module(fib);
  CHECK(tw->act("phi:1", "phi") == el({{"1", 1}, {"phi", 1}}));
  CHECK(tw->size() == 2);
  CHECK(tw->ring()->size() == 4);
  auto z2 = group_ring(cyclic_group(2));
  CHECK(twisted_tensor_module(z2)->act("1:1", "0") == el({{"0", 1}}));
}

TEST_CASE("singleton modules") {
  auto z4 = group_ring(cyclic_group(4));
  auto s = singleton_module(z4, frobenius_perron_dims(*z4));
  for (const auto& g : z4->basis()) CHECK(s->act(g, "b0") == el({{"b0", 1}}));
  CHECK(verify_module(*s).passed());
  auto fib = fibonacci();
  CHECK_THROWS_AS(singleton_module(fib, frobenius_perron_dims(*fib)), NonIntegerDims);
}

TEST_CASE("cofiniteness") {
  CHECK(is_cofinite(*standard_module(fibonacci())));
  auto std_a1 = standard_lazy_module(a1());
  auto r = is_cofinite(*std_a1);
  CHECK(r.verdict == Tri::yes);
  CHECK(inner(*std_a1, "0", "0") == RingElement("0"));
  CHECK(inner(*std_a1, "2", "1") == RingElement("1") + RingElement("3"));
  CHECK(is_cofinite(*odd_over_even()).verdict == Tri::yes);
  CHECK(is_cofinite(*standard_lazy_module(a2())).verdict == Tri::yes);

  LazyModuleSpec s;
  s.name = "finite";
  s.ring = a1();
  s.origin = "b0";
  s.finite_basis = std::vector<Label>{"b0"};
  s.act = [](const Label&, const Label&) { return ModuleElement("b0"); };
  LazyModule point(s);
  CHECK(is_cofinite(point).verdict == Tri::no);
  CHECK_THROWS_AS(inner(point, "b0", "b0"), InfiniteInnerProduct);

  auto noisy = odd_over_even()->spec();
  noisy.dimension = nullptr;
  CHECK(is_cofinite(LazyModule(noisy), 8).verdict == Tri::undecided);
}

TEST_CASE("truncation") {
  auto t = truncate(*standard_lazy_module(a1()), {"1"}, 10);
  CHECK(t.vertices.size() == 11);
  CHECK(t.boundary[10]);
  CHECK_FALSE(t.boundary[9]);
  CHECK(t.matrix("1")(3, 4) == 1);
  CHECK(t.dims[3] == 4.0);
}
