#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fusion/io.hpp"
#include "fusion/torsion.hpp"

using namespace fusion;
using io::InputError;
using io::Json;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kBuiltins = {
    "builtin:fibonacci", "builtin:trivial",      "builtin:cyclic?n=1", "builtin:cyclic?n=4",
    "builtin:cyclic?n=6", "builtin:klein",       "builtin:s3",         "builtin:dihedral?n=4",
    "builtin:quaternion", "builtin:su2?level=1", "builtin:su2?level=3", "builtin:su2?level=4",
    "builtin:a1",         "builtin:a2",          "builtin:symmetric?n=4"};

bool canonical_text(const std::string& s) {
  if (s.empty() || s.back() != '\n' || s.find('\r') != std::string::npos) return false;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && (line.back() == ' ' || line.back() == '\t')) return false;
  return true;
}

// Independent check of a table against another: same basis order and constants.
void require_same_table(const BasedRingTable& a, const BasedRingTable& b) {
  REQUIRE(a.basis() == b.basis());
  CHECK(a.unit() == b.unit());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.dual_index(i) == b.dual_index(i));
    for (std::size_t j = 0; j < a.size(); ++j)
      for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.N(i, j, k) == b.N(i, j, k));
  }
}

fs::path scratch_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("fusion-io-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

Json fib_doc() { return io::builtin_ring("builtin:fibonacci").document; }

}  // namespace

TEST_CASE("ring documents round-trip byte for byte") {
  for (const auto& uri : kBuiltins) {
    CAPTURE(uri);
    auto r = io::builtin_ring(uri);
    std::string text = io::emit(r.document);
    CHECK(canonical_text(text));
    Json back = io::parse(text);
    CHECK(back == r.document);
    CHECK(io::emit(back) == text);
    auto again = io::ring_from_json(back);
    CHECK(io::emit(again.document) == text);
    if (r.table) {
      REQUIRE(again.table);
      require_same_table(*r.table, *again.table);
    }
  }
}

TEST_CASE("canonical emission layout") {
  Json doc = {{"z", 1}, {"a", Json::array({"x", 2})}, {"m", Json::object()}, {"n", Json::array()}};
  CHECK(io::emit(doc) == "{\n  \"a\": [\"x\", 2],\n  \"m\": {},\n  \"n\": [],\n  \"z\": 1\n}\n");
  Json nested = {{"k", Json::array({Json::array({1, 2}), Json::array({3})})}};
  CHECK(io::emit(nested) == "{\n  \"k\": [\n    [1, 2],\n    [3]\n  ]\n}\n");
  CHECK(io::emit(Json("\xcf\x86")) == "\"\xcf\x86\"\n");
}

TEST_CASE("table documents carry sparse products and integer dims") {
  Json doc = fib_doc();
  CHECK(doc["format"] == "fusionring/1");
  CHECK(doc["unit"] == "1");
  CHECK(doc["products"].size() == 5);
  CHECK(doc["products"][4] == Json::array({"phi", "phi", "phi", 1}));
  CHECK(doc["basis"][0]["dim"] == 1);
  CHECK(!doc["basis"][1].contains("dim"));
  auto z4 = io::builtin_ring("builtin:cyclic?n=4").document;
  for (const auto& e : z4["basis"]) CHECK(e["dim"] == 1);
}

TEST_CASE("module documents round-trip") {
  auto ring = io::builtin_ring("builtin:dihedral?n=4");
  auto res = enumerate_modules(ring.table);
  REQUIRE(res.modules.size() == 8);
  for (const auto& m : res.modules) {
    Json doc = io::module_to_json(*m, ring.document);
    std::string text = io::emit(doc);
    CHECK(canonical_text(text));
    auto back = io::module_from_json(io::parse(text));
    CHECK(back.module->basis() == m->basis());
    CHECK(back.module->matrices() == m->matrices());
    CHECK(io::emit(back.document) == text);
  }
}

TEST_CASE("relative ring references resolve against the module file") {
  fs::path dir = scratch_dir("rel");
  fs::create_directories(dir / "mods");
  auto ring = io::builtin_ring("builtin:cyclic?n=2");
  io::write_atomic(dir / "z2.ring", io::emit(ring.document));
  auto m = standard_module(ring.table);
  Json doc = io::module_to_json(*m, "../z2.ring");
  io::write_atomic(dir / "mods" / "std.module", io::emit(doc));
  auto loaded = io::load_module((dir / "mods" / "std.module").string());
  CHECK(loaded.module->matrices() == m->matrices());
  CHECK(io::document_kind((dir / "mods" / "std.module").string()) == "module");
  CHECK(io::document_kind((dir / "z2.ring").string()) == "ring");
  Json builtin_ref = io::module_to_json(*m, "builtin:cyclic?n=2");
  CHECK(io::module_from_json(builtin_ref).module->matrices() == m->matrices());
  fs::remove_all(dir);
}

TEST_CASE("lazy documents") {
  auto fp = io::ring_from_json(io::lazy_ring_json(
      "free_product", "", {{"factors", Json::array({"builtin:fibonacci", fib_doc()})}}));
  CHECK(!fp.table);
  CHECK(!fp.ring->is_finite());
  auto direct = free_product({fibonacci(), fibonacci()});
  for (const auto& x : direct->labels_up_to(2))
    for (const auto& y : direct->labels_up_to(2)) CHECK(fp.ring->multiply(x, y) == direct->multiply(x, y));
  std::string text = io::emit(fp.document);
  CHECK(io::emit(io::ring_from_json(io::parse(text)).document) == text);

  auto su2 = io::ring_from_json(io::lazy_ring_json("su2_level", "", {{"level", 3}}));
  REQUIRE(su2.table);
  require_same_table(*su2.table, *su2_level(3));
  CHECK_THROWS_AS(io::ring_from_json(io::lazy_ring_json("a7", "")), InputError);
  CHECK_THROWS_AS(io::ring_from_json(io::lazy_ring_json("free_product", "", {{"factors", Json::array({fib_doc()})}})),
                  InputError);
}

TEST_CASE("malformed documents are input errors") {
  CHECK_THROWS_AS(io::parse("{\"format\": "), InputError);
  try {
    io::parse("{\n  \"a\": [1,\n");
    FAIL("expected a parse error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  auto mutate = [](auto f) {
    Json d = fib_doc();
    f(d);
    return d;
  };
  CHECK_THROWS_AS(io::ring_from_json(mutate([](Json& d) { d["format"] = "fusionring/2"; })), InputError);
  CHECK_THROWS_AS(io::ring_from_json(mutate([](Json& d) { d.erase("unit"); })), InputError);
  CHECK_THROWS_AS(io::ring_from_json(mutate([](Json& d) { d["products"][0][3] = 0; })), InputError);
  CHECK_THROWS_AS(io::ring_from_json(mutate([](Json& d) { d["products"][0][3] = "1"; })), InputError);
  CHECK_THROWS_AS(io::ring_from_json(mutate([](Json& d) { d["products"].erase(1); })), InputError);
  CHECK_THROWS_AS(io::ring_from_json(mutate([](Json& d) { d["products"].push_back(d["products"][0]); })),
                  InputError);
  CHECK_THROWS_AS(io::ring_from_json(mutate([](Json& d) { d["basis"][1]["id"] = "1"; })), InputError);
  CHECK_THROWS_AS(io::ring_from_json(mutate([](Json& d) { d["products"][0][2] = "psi"; })), InputError);
  CHECK_THROWS_AS(io::ring_from_json(mutate([](Json& d) { d["basis"][0]["dim"] = 0; })), InputError);

  Json m = io::module_to_json(*standard_module(fibonacci()), fib_doc());
  Json bad = m;
  bad["action"].erase(0);
  CHECK_THROWS_AS(io::module_from_json(bad), InputError);
  bad = m;
  bad["ring"] = "builtin:a1";
  CHECK_THROWS_AS(io::module_from_json(bad), InputError);
  bad = m;
  bad["format"] = "fusionring/1";
  CHECK_THROWS_AS(io::module_from_json(bad), InputError);
  CHECK_THROWS_AS(io::load_ring("/nonexistent/ring.json"), InputError);
}

TEST_CASE("builtin URIs") {
  CHECK(io::builtin_ring("builtin:su2?level=2").table->size() == 3);
  CHECK(io::builtin_ring("builtin:cyclic?n=5").table->size() == 5);
  CHECK(io::builtin_ring("builtin:klein").table->size() == 4);
  CHECK(io::builtin_ring("builtin:quaternion").table->size() == 8);
  CHECK(io::builtin_ring("builtin:fib").table->size() == 2);
  CHECK(io::builtin_ring("builtin:a2").ring->name() == a2()->name());
  CHECK_THROWS_AS(io::builtin_ring("builtin:su2"), InputError);
  CHECK_THROWS_AS(io::builtin_ring("builtin:su2?level=x"), InputError);
  CHECK_THROWS_AS(io::builtin_ring("builtin:su2?level=0"), InputError);
  CHECK_THROWS_AS(io::builtin_ring("builtin:cyclic?n"), InputError);
  CHECK_THROWS_AS(io::builtin_ring("builtin:monster"), InputError);
  CHECK(io::is_builtin("builtin:a1"));
  CHECK(!io::is_builtin("a1.ring"));
}

TEST_CASE("expressions") {
  auto a2r = a2();
  auto one = [](const char* id, long long c = 1) { return RingElement(Label(id), Coeff(c)); };
  CHECK(io::parse_expression(*a2r, "p+p-") == one("p+p-"));
  CHECK(io::parse_expression(*a2r, "p+ + p-") == one("p+") + one("p-"));
  CHECK(io::parse_expression(*a2r, "2*p+") == one("p+", 2));
  CHECK(io::parse_expression(*a2r, " 3 * p- + e ") == one("p-", 3) + one("e"));
  CHECK(io::parse_expression(*a2r, "unit") == one("e"));
  auto fib = fibonacci();
  CHECK(io::parse_expression(*fib, "e") == one("1"));
  CHECK(io::parse_expression(*fib, "1+phi") == one("1") + one("phi"));
  CHECK(io::parse_expression(*fib, "-1*phi + 2*1") == one("1", 2) + one("phi", -1));
  CHECK(io::parse_expression(*fib, "phi + phi").coefficient("phi") == 2);
  CHECK_THROWS_AS(io::parse_expression(*fib, "psi"), InputError);
  CHECK_THROWS_AS(io::parse_expression(*fib, "phi + "), InputError);
  CHECK_THROWS_AS(io::parse_expression(*fib, ""), InputError);
  CHECK_THROWS_AS(io::parse_expression(*fib, "x*phi"), InputError);
  CHECK(fuse(*a1(), io::parse_expression(*a1(), "1"), io::parse_expression(*a1(), "2")).to_string() == "1*1 + 1*3");
}

TEST_CASE("atomic writes replace the target and leave no temporaries") {
  fs::path dir = scratch_dir("atomic");
  fs::path p = dir / "out.json";
  io::write_atomic(p, "first\n");
  io::write_atomic(p, "second\n");
  std::ifstream in(p);
  std::string s((std::istreambuf_iterator<char>(in)), {});
  CHECK(s == "second\n");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  CHECK_THROWS_AS(io::write_atomic(dir / "missing" / "x.json", "x"), InputError);
  fs::remove_all(dir);
}
