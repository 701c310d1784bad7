// One PASS/FAIL line per acceptance criterion. Usage: acceptance <fusion-tool>

#include <sys/wait.h>
#include <unistd.h>

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fusion/constructors.hpp"
#include "fusion/io.hpp"
#include "fusion/modules.hpp"
#include "fusion/spectra.hpp"
#include "fusion/torsion.hpp"

using namespace fusion;
namespace fs = std::filesystem;

namespace {

std::string g_tool;
fs::path g_work;

// Collects failures of one criterion.
struct Outcome {
  std::vector<std::string> failures;
  std::string detail;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Run {
  int rc = -1;
  std::string out;
};

// Runs the fusion tool in dir with FUSION_THREADS set.
Run run_tool(const fs::path& dir, std::size_t threads, const std::string& args) {
  fs::create_directories(dir);
  std::string cmd = "cd '" + dir.string() + "' && FUSION_THREADS=" + std::to_string(threads) + " '" + g_tool +
                    "' " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

// Relative path -> contents for every regular file under dir.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return out;
}

// Subgroups up to conjugacy by brute force over all subsets.
std::size_t subgroup_classes(const GroupTable& g) {
  const std::size_t n = g.elements.size();
  std::size_t e = 0;
  while (g.mult[e][0] != 0) ++e;
  std::vector<std::size_t> inv(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (g.mult[a][b] == e) inv[a] = b;
  std::set<std::uint32_t> classes;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (!(mask >> e & 1)) continue;
    bool closed = true;
    for (std::size_t a = 0; a < n && closed; ++a)
      for (std::size_t b = 0; b < n && closed; ++b)
        if ((mask >> a & 1) && (mask >> b & 1) && !(mask >> g.mult[a][b] & 1)) closed = false;
    if (!closed) continue;
    std::uint32_t rep = mask;
    for (std::size_t x = 0; x < n; ++x) {
      std::uint32_t conj = 0;
      for (std::size_t a = 0; a < n; ++a)
        if (mask >> a & 1) conj |= 1u << g.mult[g.mult[x][a]][inv[x]];
      rep = std::min(rep, conj);
    }
    classes.insert(rep);
  }
  return classes.size();
}

Eigen::MatrixXd to_eigen(const IntMatrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = static_cast<double>(m(i, j));
  return e;
}

double eigen_radius(const IntMatrix& m) {
  if (m.rows() == 0) return 0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(m), false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Largest singular value: the quantity spectral_radius reports for non-symmetric input.
double eigen_operator_norm(const IntMatrix& m) {
  if (m.rows() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
  return svd.singularValues()(0);
}

bool fib_matrix(const IntMatrix& m) {
  return m == IntMatrix::from_rows({{0, 1}, {1, 1}}) || m == IntMatrix::from_rows({{1, 1}, {1, 0}});
}

struct GroupCase {
  std::string uri;
  GroupTable group;
  std::size_t expected;
};

std::vector<GroupCase> group_cases() {
  return {{"builtin:cyclic?n=2", cyclic_group(2), 2},
          {"builtin:cyclic?n=3", cyclic_group(3), 2},
          {"builtin:cyclic?n=4", cyclic_group(4), 3},
          {"builtin:klein", direct_product(cyclic_group(2), cyclic_group(2)), 5},
          {"builtin:s3", symmetric_group(3), 4}};
}

// --- criteria -------------------------------------------------------------------

Outcome fibonacci_torsion_free() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  Run r = run_tool(g_work / "c1", 0, "torsion builtin:fibonacci --out witnesses");
  o.expect(r.rc == 0, "fusion torsion exit code " + std::to_string(r.rc));
  o.expect(r.out.rfind("torsion_free_certified\nclasses=1 ", 0) == 0, "fusion torsion output: " + r.out);
  Run e = run_tool(g_work / "c1", 0, "enumerate builtin:fibonacci --out classes");
  o.expect(e.rc == 0 && e.out.find("classes=1 ") != std::string::npos, "fusion enumerate output: " + e.out);
  auto files = snapshot(g_work / "c1" / "classes");
  o.expect(files.size() == 1, "expected one class file");
  for (const auto& [name, text] : files) {
    auto m = io::module_from_json(io::parse(text));
    o.expect(fib_matrix(m.module->matrix("phi")), "phi-matrix of " + name + " is " + m.module->matrix("phi").to_string());
  }
  auto v = is_torsion_free(fibonacci());
  auto res = enumerate_modules(fibonacci());
  o.expect(v.status == TorsionStatus::torsion_free_certified && res.complete && res.modules.size() == 1,
           "library verdict");
  if (res.modules.size() == 1) o.expect(fib_matrix(res.modules[0]->matrix("phi")), "library phi-matrix");
  double dt = seconds_since(t0);
  o.expect(dt < 10, "runtime " + std::to_string(dt) + " s");
  o.detail = "classes=" + std::to_string(res.modules.size()) + " time=" + std::to_string(dt).substr(0, 5) + "s";
  return o;
}

Outcome group_ring_oracle() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  std::ostringstream counts;
  for (const auto& c : group_cases()) {
    std::size_t oracle = subgroup_classes(c.group);
    o.expect(oracle == c.expected, c.uri + ": oracle gives " + std::to_string(oracle));
    auto ring = group_ring(c.group);
    auto res = enumerate_modules(ring);
    o.expect(res.complete && res.modules.size() == oracle,
             c.uri + ": " + std::to_string(res.modules.size()) + " classes, oracle " + std::to_string(oracle));
    auto v = is_torsion_free(ring);
    o.expect(v.status == TorsionStatus::not_torsion_free, c.uri + ": verdict " + to_string(v.status));
    Run r = run_tool(g_work / "c2", 0, "torsion '" + c.uri + "' --out w");
    o.expect(r.rc == 1 && r.out.rfind("not_torsion_free\n", 0) == 0, c.uri + ": fusion torsion " + r.out);
    counts << res.modules.size() << ' ';
  }
  double dt = seconds_since(t0);
  o.expect(dt < 60, "runtime " + std::to_string(dt) + " s");
  o.detail = "classes " + counts.str() + "time=" + std::to_string(dt).substr(0, 5) + "s";
  return o;
}

Outcome axiom_suites() {
  Outcome o;
  std::vector<TablePtr> rings = {fibonacci()};
  for (const auto& c : group_cases()) rings.push_back(group_ring(c.group));
  for (int k = 1; k <= 6; ++k) rings.push_back(su2_level(k));
  std::size_t verified = 0;
  for (const auto& r : rings) {
    o.expect(verify_based_ring(*r).passed(), "verify_based_ring " + r->name());
    ++verified;
  }
  for (std::size_t i = 0; i < rings.size(); ++i)
    for (std::size_t j = i; j < rings.size(); ++j) {
      auto t = tensor_product(*rings[i], *rings[j]);
      o.expect(verify_based_ring(*t).passed(), "verify_based_ring " + t->name());
      ++verified;
    }
  o.expect(verify_lazy_ring(*a1(), 20).passed(), "verify_lazy_ring a1 depth 20");
  o.expect(verify_lazy_ring(*a2(), 4).passed(), "verify_lazy_ring a2 length 4");
  o.expect(verify_lazy_ring(*free_product({fibonacci(), fibonacci()}), 4).passed(), "verify_lazy_ring fib*fib depth 4");

  auto ring = a2();
  auto words = ring->labels_up_to(4);
  std::size_t triples = 0;
  for (const auto& x : words)
    for (const auto& y : words) {
      RingElement xy = ring->multiply(x, y);
      for (const auto& z : words) {
        RingElement left = fuse(*ring, xy, RingElement(z));
        RingElement right = fuse(*ring, RingElement(x), ring->multiply(y, z));
        if (left != right) o.expect(false, "A(2) associativity at " + x.id() + "," + y.id() + "," + z.id());
        ++triples;
      }
    }
  o.expect(words.size() == 31, "A(2) words of length <= 4: " + std::to_string(words.size()));
  o.detail = std::to_string(verified) + " tables, " + std::to_string(triples) + " A(2) triples";
  return o;
}

Outcome tensor_obstruction() {
  Outcome o;
  auto fib = fibonacci();
  auto probe = tensor_obstruction_probe(fib, fib);
  o.expect(probe.verdict.status == TorsionStatus::not_torsion_free, "verdict " + to_string(probe.verdict.status));
  o.expect(probe.report.passed, "probe report: " + probe.report.to_string());
  o.expect(probe.subrings_isomorphic, "subrings not isomorphic");
  for (const auto* sub : {&probe.subring1, &probe.subring2}) {
    o.expect(sub->size() == 2, "subring size " + std::to_string(sub->size()));
    if (sub->size() != 2) continue;
    auto s = restrict_to_subring(*fib, *sub);
    // Fibonacci rule: x*x = 1 + x for the non-unit x.
    std::size_t x = s->unit_index() == 0 ? 1 : 0;
    o.expect(s->N(x, x, s->unit_index()) == 1 && s->N(x, x, x) == 1, "subring is not Fibonacci");
  }
  auto tw = twisted_tensor_module(fib);
  o.expect(verify_module(*tw).passed(), "twisted module fails verify_module");
  o.expect(is_connected(*tw), "twisted module not connected");
  o.expect(is_cofinite(*tw), "twisted module not cofinite");
  auto std_ff = standard_module(tw->ring());
  o.expect(!isomorphic(*tw, *std_ff), "twisted module is standard");
  auto join = [](const std::vector<Label>& ls) {
    std::string out;
    for (const auto& l : ls) out += (out.empty() ? "" : ", ") + l.id();
    return "{" + out + "}";
  };
  o.detail = "subrings " + join(probe.subring1) + " ~ " + join(probe.subring2) + ", twisted |J|=" + std::to_string(tw->size());
  return o;
}

Outcome a2_replay() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  auto m = standard_lazy_module(a2());
  auto rep = a2_structure_check(*m, 5);
  o.expect(rep.passed, "structure check: " + rep.to_string());
  for (const char* phrase : {"loop-free", "multi-edge-free", "tree", "dimensions strictly increase along root paths",
                             "binary branching"}) {
    bool found = false;
    for (const auto& n : rep.notes) found = found || n.find(phrase) != std::string::npos;
    o.expect(found, std::string("missing note: ") + phrase);
  }
  auto unfolded = a2_unfold(*m, 5);
  auto ainf = a_infinity_check(unfolded.graph);
  o.expect(ainf.passed, "a_infinity_check: " + ainf.reason);
  double dt = seconds_since(t0);
  o.expect(dt < 30, "runtime " + std::to_string(dt) + " s");
  o.detail = std::to_string(ainf.components) + " A_inf components, time=" + std::to_string(dt).substr(0, 5) + "s";
  return o;
}

Outcome chebyshev() {
  Outcome o;
  auto ring = a1();
  std::vector<RingElement> powers = {RingElement(ring->unit())};
  for (std::size_t k = 1; k <= 16; ++k) powers.push_back(fuse(*ring, powers.back(), RingElement(Label("1"))));
  for (std::size_t n = 0; n <= 16; ++n) {
    auto p = chebyshev_coeffs(n);
    RingElement sum;
    for (std::size_t k = 0; k < p.size(); ++k) sum.add(powers[k], Coeff(p[k]));
    o.expect(sum == RingElement(Label(std::to_string(n))), "n=" + std::to_string(n) + ": " + sum.to_string());
  }
  o.detail = "n=0..16";
  return o;
}

Outcome schur_bound() {
  Outcome o;
  struct Case {
    RingPtr ring;
    std::vector<Label> gens;
    std::size_t depth;
  };
  std::vector<Case> cases = {{a1(), {"1"}, 12}, {a2(), {"p+", "p-"}, 4}};
  double worst = 0;
  for (const auto& c : cases) {
    auto t = truncate(*standard_lazy_module(c.ring), c.gens, c.depth);
    o.expect(t.dims.size() == t.vertices.size(), c.ring->name() + ": dimensions unavailable");
    if (t.dims.size() != t.vertices.size()) continue;
    for (const auto& g : c.gens) {
      auto d = c.ring->known_dimension(g);
      o.expect(d.has_value(), "no dimension for " + g.id());
      if (!d) continue;
      const IntMatrix& m = t.matrix(g);
      double rho = spectral_radius(m);
      o.expect(rho <= *d + 1e-6, c.ring->name() + " " + g.id() + ": radius " + std::to_string(rho));
      double oracle = m.is_symmetric() ? eigen_radius(m) : eigen_operator_norm(m);
      o.expect(std::abs(rho - oracle) < 1e-6, c.ring->name() + " " + g.id() + ": radius disagrees with Eigen");
      o.expect(eigen_radius(m) <= rho + 1e-6, c.ring->name() + " " + g.id() + ": eigenvalue above the bound");
      auto md = m.apply(t.dims);
      for (std::size_t b = 0; b < t.vertices.size(); ++b) {
        if (t.boundary[b]) continue;
        double want = *d * t.dims[b];
        double err = std::abs(md[b] - want) / want;
        worst = std::max(worst, err);
        o.expect(err <= 1e-6, c.ring->name() + " " + g.id() + " at " + t.vertices[b].id());
      }
    }
  }
  std::ostringstream os;
  os << "max relative error " << worst;
  o.detail = os.str();
  return o;
}

IntMatrix adjacency(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                    const std::vector<std::size_t>& loops = {}) {
  IntMatrix m(n, n);
  for (auto [a, b] : edges) {
    m(a, b) += 1;
    m(b, a) += 1;
  }
  for (auto v : loops) m(v, v) += 1;
  return m;
}

std::vector<std::pair<std::size_t, std::size_t>> path_edges(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return e;
}

// Star with arms of the given lengths around vertex 0.
IntMatrix star(const std::vector<std::size_t>& arms) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  std::size_t next = 1;
  for (auto len : arms)
    for (std::size_t i = 0; i < len; ++i, ++next) e.push_back({i == 0 ? 0 : next - 1, next});
  return adjacency(next, e);
}

Outcome dynkin() {
  Outcome o;
  std::size_t graphs = 0;
  auto check = [&](const IntMatrix& m, DynkinClass cls, std::size_t n, const std::string& what) {
    FusionGraph g;
    for (std::size_t i = 0; i < m.rows(); ++i) g.vertices.push_back(Label("v" + std::to_string(i)));
    g.adjacency = m;
    g.orientation = Orientation::symmetrized;
    auto v = dynkin_classify(g);
    ++graphs;
    o.expect(v.cls == cls && v.n == n, what + ": got " + v.name);
    double rho = eigen_radius(m);
    bool extended = cls == DynkinClass::A_tilde || cls == DynkinClass::D_tilde || cls == DynkinClass::E6_tilde ||
                    cls == DynkinClass::E7_tilde || cls == DynkinClass::E8_tilde;
    if (extended) {
      o.expect(v.norm_equal_2(), what + ": norm not classified as 2");
      o.expect(std::abs(rho - 2.0) < 1e-8, what + ": Eigen radius " + std::to_string(rho));
    } else {
      o.expect(v.norm_below_2(), what + ": norm not below 2");
      o.expect(std::abs(rho - v.norm) < 1e-8, what + ": Eigen radius " + std::to_string(rho));
    }
  };
  for (std::size_t n = 1; n <= 12; ++n) {
    check(adjacency(n, path_edges(n)), DynkinClass::A, n, "A" + std::to_string(n));
    check(adjacency(n, path_edges(n), {n - 1}), DynkinClass::tadpole, n, "T" + std::to_string(n));
    auto cyc = path_edges(n + 1);
    cyc.push_back({n, 0});
    check(adjacency(n + 1, cyc), DynkinClass::A_tilde, n, "A" + std::to_string(n) + "~");
  }
  for (std::size_t n = 4; n <= 12; ++n) {
    // Path v0..v(n-2) with extra leaves on v1 and v(n-3).
    auto e = path_edges(n - 1);
    e.push_back({1, n - 1});
    e.push_back({n - 3, n});
    check(adjacency(n + 1, e), DynkinClass::D_tilde, n, "D" + std::to_string(n) + "~");
  }
  check(star({2, 2, 2}), DynkinClass::E6_tilde, 6, "E6~");
  check(star({1, 3, 3}), DynkinClass::E7_tilde, 7, "E7~");
  check(star({1, 2, 5}), DynkinClass::E8_tilde, 8, "E8~");
  o.detail = std::to_string(graphs) + " graphs";
  return o;
}

Outcome verlinde_witnesses() {
  Outcome o;
  auto s3 = su2_level(3);
  auto v = is_torsion_free(s3);
  o.expect(v.status == TorsionStatus::not_torsion_free, "su2_level(3) verdict " + to_string(v.status));
  auto q = quotient_module(s3, {"0", "3"});
  o.expect(q->size() == 2, "quotient size " + std::to_string(q->size()));
  bool found = false;
  for (const auto& w : v.witnesses) found = found || (w->size() == 2 && isomorphic(*w, *q));
  o.expect(found, "no witness isomorphic to the {0,3}-quotient");
  auto s1 = su2_level(1);
  o.expect(integer_dim_shortcut(s1).has_value(), "integer_dim_shortcut did not fire on su2_level(1)");
  auto z2 = group_ring(cyclic_group(2));
  bool same = s1->size() == 2 && z2->size() == 2;
  for (std::size_t a = 0; same && a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t c = 0; c < 2; ++c) same = same && s1->N(a, b, c) == z2->N(a, b, c);
  o.expect(same, "su2_level(1) differs from Z/2");
  o.detail = std::to_string(v.witnesses.size()) + " witnesses for su2_level(3)";
  return o;
}

Outcome divisibility() {
  Outcome o;
  auto z4 = group_ring(cyclic_group(4));
  auto w = is_divisible(*z4, {"0", "2"});
  o.expect(w.divisible, "Z/4 over {0,2}: " + w.reason);
  if (w.divisible) {
    auto sub = restrict_to_subring(*z4, {"0", "2"});
    auto point = singleton_module(sub, frobenius_perron_dims(*sub));
    auto ind = induced_module(z4, w, *point);
    auto q = quotient_module(z4, {"0", "2"});
    std::map<Label, Label> rename;
    for (const auto& c : w.components) rename[pair_label(c.anchor, point->label(0))] = c.anchor;
    o.expect(rename.size() == ind->size(), "anchors do not cover the induced module");
    if (rename.size() == ind->size()) {
      auto renamed = relabel(*ind, rename);
      o.expect(renamed->basis() == q->basis() && renamed->matrices() == q->matrices(),
               "induced singleton differs from the quotient table");
    }
  }
  auto s2 = is_divisible(*su2_level(2), {"0", "2"});
  o.expect(!s2.divisible, "su2_level(2) over {0,2} reported divisible");
  o.detail = "components=" + std::to_string(w.components.size());
  return o;
}

Outcome determinism() {
  Outcome o;
  std::vector<std::string> commands = {"torsion builtin:fibonacci --out w", "enumerate builtin:fibonacci --out e"};
  for (const auto& c : group_cases()) {
    commands.push_back("torsion '" + c.uri + "' --out w");
    commands.push_back("enumerate '" + c.uri + "' --out e");
  }
  std::size_t compared = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::optional<std::pair<Run, std::map<std::string, std::string>>> ref;
    for (std::size_t threads : {1, 2, 8}) {
      fs::path dir = g_work / "c11" / std::to_string(threads) / std::to_string(i);
      fs::remove_all(dir);
      Run r = run_tool(dir, threads, commands[i]);
      auto files = snapshot(dir);
      if (!ref) {
        ref.emplace(r, files);
        if (commands[i].rfind("enumerate", 0) == 0) o.expect(!files.empty(), commands[i] + ": no files written");
        continue;
      }
      o.expect(r.rc == ref->first.rc && r.out == ref->first.out,
               commands[i] + ": output differs at " + std::to_string(threads) + " threads");
      o.expect(files == ref->second, commands[i] + ": files differ at " + std::to_string(threads) + " threads");
      compared += files.size() + 1;
    }
  }
  for (const auto& c : group_cases()) {
    auto ring = group_ring(c.group);
    std::vector<std::vector<std::int64_t>> ref;
    for (std::size_t threads : {1, 2, 8}) {
      ModuleSearchConfig cfg;
      cfg.threads = threads;
      std::vector<std::vector<std::int64_t>> enc;
      for (const auto& m : enumerate_modules(ring, cfg).modules) enc.push_back(canonical_encoding(*m));
      if (threads == 1) ref = enc;
      o.expect(enc == ref, c.uri + ": library result depends on threads");
    }
  }
  o.detail = std::to_string(commands.size()) + " commands, " + std::to_string(compared) + " outputs compared";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path to fusion tool>\n";
    return 2;
  }
  g_tool = fs::absolute(argv[1]).string();
  g_work = fs::temp_directory_path() / ("fusion-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Z[phi] torsion-free with one tadpole class", fibonacci_torsion_free},
      {"group ring classes match the subgroup oracle", group_ring_oracle},
      {"axiom suites", axiom_suites},
      {"tensor obstruction", tensor_obstruction},
      {"A(2) proof replay", a2_replay},
      {"Chebyshev identity", chebyshev},
      {"Schur bound", schur_bound},
      {"Dynkin classifier", dynkin},
      {"Verlinde witnesses", verlinde_witnesses},
      {"divisibility", divisibility},
      {"determinism across 1, 2, 8 threads", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    bool pass = o.failures.empty();
    failed += pass ? 0 : 1;
    std::cout << "criterion " << i + 1 << ": " << (pass ? "PASS" : "FAIL") << "  " << criteria[i].first;
    if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
    std::cout << '\n';
    for (std::size_t k = 0; k < o.failures.size() && k < 5; ++k) std::cout << "    " << o.failures[k] << '\n';
  }
  fs::remove_all(g_work);
  return failed == 0 ? 0 : 1;
}
