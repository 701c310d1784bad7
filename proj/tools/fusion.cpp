#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fusion/constructors.hpp"
#include "fusion/errors.hpp"
#include "fusion/io.hpp"
#include "fusion/modules.hpp"
#include "fusion/spectra.hpp"
#include "fusion/torsion.hpp"

namespace fs = std::filesystem;
using namespace fusion;
using io::InputError;
using io::Json;

namespace {

enum Exit { kPass = 0, kNegative = 1, kInput = 2, kInconclusive = 3 };

// Values from --config, overridden by command-line flags.
struct Settings {
  std::optional<std::size_t> depth, max_size, threads;
  std::optional<double> budget;
  Tolerance tol;
};

std::size_t config_count(const Json& doc, const char* key) {
  const Json& v = doc.at(key);
  if (!v.is_number_unsigned()) throw InputError(std::string("config: ") + key + " must be a nonnegative integer");
  return v.get<std::size_t>();
}

double config_real(const Json& doc, const char* key) {
  const Json& v = doc.at(key);
  if (!v.is_number() || v.get<double>() < 0) throw InputError(std::string("config: ") + key + " must be a nonnegative number");
  return v.get<double>();
}

Settings load_settings(const std::string& path) {
  Settings s;
  if (path.empty()) return s;
  Json doc = io::read_json_file(path);
  if (!doc.is_object()) throw InputError("config: expected an object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "format") {
      if (value != "fusionconfig/1") throw InputError("config: format must be \"fusionconfig/1\"");
    } else if (key == "depth") {
      s.depth = config_count(doc, "depth");
    } else if (key == "max_size") {
      s.max_size = config_count(doc, "max_size");
    } else if (key == "threads") {
      s.threads = config_count(doc, "threads");
    } else if (key == "budget_seconds") {
      s.budget = config_real(doc, "budget_seconds");
    } else if (key == "tolerance") {
      for (const auto& [tk, tv] : value.items()) {
        if (tk == "dim") s.tol.dim = config_real(value, "dim");
        else if (tk == "multiplicativity") s.tol.multiplicativity = config_real(value, "multiplicativity");
        else if (tk == "rayleigh") s.tol.rayleigh = config_real(value, "rayleigh");
        else if (tk == "max_iterations") s.tol.max_iterations = static_cast<int>(config_count(value, "max_iterations"));
        else throw InputError("config: unknown tolerance \"" + tk + "\"");
      }
    } else {
      throw InputError("config: unknown key \"" + key + "\"");
    }
  }
  return s;
}

TablePtr require_table(const io::LoadedRing& r, const std::string& source) {
  if (!r.table) throw InputError(source + ": this command needs a finite table ring");
  return r.table;
}

ModuleSearchConfig search_config(const Settings& s) {
  ModuleSearchConfig c;
  if (s.max_size) c.max_basis_size = *s.max_size;
  if (s.budget) c.time_budget_seconds = *s.budget;
  if (s.threads) c.threads = *s.threads;
  return c;
}

std::string numbered(const char* stem, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s-%03zu.module.json", stem, i);
  return buf;
}

// Removes files from an earlier run so the directory lists exactly this run.
void prepare_dir(const fs::path& dir, const std::string& stem) {
  fs::create_directories(dir);
  for (const auto& e : fs::directory_iterator(dir)) {
    std::string name = e.path().filename().string();
    if (name.rfind(stem + "-", 0) == 0 && name.size() > 12 && name.ends_with(".module.json")) fs::remove(e.path());
  }
}

std::vector<std::string> write_modules(const std::vector<ModulePtr>& mods, const Json& ring_doc, const fs::path& dir,
                                       const char* stem) {
  prepare_dir(dir, stem);
  std::vector<std::string> paths;
  for (std::size_t i = 0; i < mods.size(); ++i) {
    fs::path p = dir / numbered(stem, i);
    io::write_atomic(p, io::emit(io::module_to_json(*mods[i], ring_doc)));
    paths.push_back(p.string());
  }
  return paths;
}

std::string format_dim(double d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", d);
  return buf;
}

// --- commands -------------------------------------------------------------------

int cmd_verify(const std::string& path, const Settings& s) {
  VerificationReport report;
  if (io::document_kind(path) == "module") {
    auto m = io::load_module(path);
    report = verify_module(*m.module);
  } else {
    auto r = io::load_ring(path);
    if (r.table) {
      report = verify_based_ring(*r.table);
      if (!r.declared_dims.empty() && report.passed()) {
        AxiomCheck c{"declared dimensions", 0, true, {}};
        try {
          auto dims = frobenius_perron_dims(*r.table, s.tol);
          for (const auto& [l, d] : r.declared_dims)
            if (std::abs(dims.at(l) - static_cast<double>(d)) > 1e-6 * static_cast<double>(d)) {
              c.passed = false;
              c.witness = l.id() + " declared " + std::to_string(d) + ", computed " + format_dim(dims.at(l));
              break;
            }
        } catch (const NoDimensionFunction& e) {
          c.passed = false;
          c.witness = e.what();
        }
        report.checks.push_back(c);
      }
    } else {
      report = verify_lazy_ring(*r.ring, s.depth.value_or(4));
    }
  }
  std::cout << report.to_string() << "result: " << (report.passed() ? "pass" : "FAIL") << '\n';
  if (!report.structural_ok) return kInput;
  return report.passed() ? kPass : kNegative;
}

int cmd_fuse(const std::string& path, const std::string& x, const std::string& y) {
  auto r = io::load_ring(path);
  auto a = io::parse_expression(*r.ring, x);
  auto b = io::parse_expression(*r.ring, y);
  std::cout << fuse(*r.ring, a, b).to_string() << '\n';
  return kPass;
}

int cmd_dims(const std::string& path, const Settings& s) {
  auto r = io::load_ring(path);
  auto t = require_table(r, path);
  DimensionFunction dims;
  try {
    dims = frobenius_perron_dims(*t, s.tol);
  } catch (const NoDimensionFunction& e) {
    std::cout << "no dimension function: " << e.what() << '\n';
    return kNegative;
  }
  for (const auto& l : t->basis()) std::cout << l.id() << ": " << format_dim(dims.at(l)) << '\n';
  std::cout << "exactness: " << to_string(dims.exactness()) << '\n';
  return kPass;
}

int cmd_enumerate(const std::string& path, const std::string& out, const Settings& s) {
  auto r = io::load_ring(path);
  auto t = require_table(r, path);
  auto res = enumerate_modules(t, search_config(s));
  auto paths = write_modules(res.modules, r.document, out, "class");
  for (std::size_t i = 0; i < paths.size(); ++i)
    std::cout << paths[i] << " size=" << res.modules[i]->size() << '\n';
  std::cout << "classes=" << res.modules.size() << " certified_bound=" << (res.complete ? res.max_basis_size : 0)
            << " status=" << (res.complete ? "complete" : "inconclusive") << '\n';
  return res.complete ? kPass : kInconclusive;
}

int cmd_torsion(const std::string& path, const std::string& out, const Settings& s) {
  auto r = io::load_ring(path);
  auto t = require_table(r, path);
  auto v = is_torsion_free(t, search_config(s));
  std::cout << to_string(v.status) << '\n';
  std::cout << "classes=" << v.classes << " certified_bound=" << v.certified_bound << '\n';
  if (!v.witnesses.empty())
    for (const auto& p : write_modules(v.witnesses, r.document, out, "witness")) std::cout << "witness: " << p << '\n';
  switch (v.status) {
    case TorsionStatus::torsion_free_certified:
      return kPass;
    case TorsionStatus::not_torsion_free:
      return kNegative;
    default:
      return kInconclusive;
  }
}

int cmd_product(bool free, bool tensor, const std::vector<std::string>& paths, const std::string& out) {
  if (free == tensor) throw InputError("product: give exactly one of --free and --tensor");
  if (paths.size() < 2) throw InputError("product: need at least two rings");
  std::vector<io::LoadedRing> rings;
  for (const auto& p : paths) rings.push_back(io::load_ring(p));
  Json doc;
  if (tensor) {
    TablePtr acc = require_table(rings[0], paths[0]);
    for (std::size_t i = 1; i < rings.size(); ++i)
      acc = tensor_product(*acc, *require_table(rings[i], paths[i]));
    doc = io::ring_to_json(*acc);
  } else {
    Json factors = Json::array();
    for (const auto& r : rings) factors.push_back(r.document);
    doc = io::ring_from_json(io::lazy_ring_json("free_product", "", {{"factors", factors}})).document;
  }
  std::string text = io::emit(doc);
  if (out.empty()) std::cout << text;
  else io::write_atomic(out, text);
  return kPass;
}

std::vector<std::vector<std::size_t>> components(const IntMatrix& adj) {
  std::size_t n = adj.rows();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    out.emplace_back();
    std::vector<std::size_t> stack{s};
    comp[s] = static_cast<int>(out.size() - 1);
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      out.back().push_back(u);
      for (std::size_t w = 0; w < n; ++w)
        if ((adj(u, w) != 0 || adj(w, u) != 0) && comp[w] < 0) {
          comp[w] = comp[s];
          stack.push_back(w);
        }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

FusionGraph subgraph(const FusionGraph& g, const std::vector<std::size_t>& keep) {
  FusionGraph h;
  h.orientation = g.orientation;
  h.adjacency = IntMatrix(keep.size(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    h.vertices.push_back(g.vertices[keep[i]]);
    if (!g.dims.empty()) h.dims.push_back(g.dims[keep[i]]);
    if (!g.boundary.empty()) h.boundary.push_back(g.boundary[keep[i]]);
    for (std::size_t j = 0; j < keep.size(); ++j) h.adjacency(i, j) = g.adjacency(keep[i], keep[j]);
  }
  return h;
}

int cmd_graph(const std::string& path, const std::string& alpha, const std::string& dot, bool standard,
              const Settings& s) {
  FusionGraph g;
  bool self_dual = true;
  if (io::document_kind(path) == "module") {
    if (standard) throw InputError("--standard applies to ring documents");
    auto m = io::load_module(path);
    m.ring.ring->require(alpha);
    self_dual = m.ring.ring->dual(alpha) == Label(alpha);
    g = fusion_graph(*m.module, alpha);
  } else {
    if (!standard) throw InputError(path + " is a ring document; pass --standard for its standard module");
    auto r = io::load_ring(path);
    r.ring->require(alpha);
    self_dual = r.ring->dual(alpha) == Label(alpha);
    if (r.table) {
      g = fusion_graph(*standard_module(r.table), alpha);
    } else {
      auto t = truncate(*standard_lazy_module(r.ring), {Label(alpha)}, s.depth.value_or(10));
      g = fusion_graph(t, alpha);
    }
  }
  // A self-dual alpha gives an undirected graph; otherwise alpha + dual(alpha).
  bool symmetric = self_dual && g.adjacency.is_symmetric();
  FusionGraph sym = symmetrize(g, symmetric ? Symmetrization::assume_symmetric : Symmetrization::sum);
  std::string text = export_dot(symmetric ? sym : g);
  if (dot.empty()) std::cout << text;
  else io::write_atomic(dot, text);

  auto comps = components(sym.adjacency);
  if (comps.size() == 1) {
    std::cout << "verdict: " << dynkin_classify(sym).describe() << '\n';
  } else {
    for (std::size_t i = 0; i < comps.size(); ++i) {
      std::cout << "component " << i << " {";
      for (std::size_t k = 0; k < comps[i].size(); ++k) std::cout << (k ? " " : "") << sym.vertices[comps[i][k]].id();
      std::cout << "} verdict: " << dynkin_classify(subgraph(sym, comps[i])).describe() << '\n';
    }
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Based rings, based modules and torsion-freeness"};
  app.require_subcommand(1);
  std::string config;
  app.add_option("--config", config, "JSON config with tolerances, depths and budgets")->check(CLI::ExistingFile);

  Settings cli;
  auto depth_opt = [&](CLI::App* c) { c->add_option("--depth", cli.depth, "Truncation depth for lazy rings"); };
  auto search_opts = [&](CLI::App* c) {
    c->add_option("--max-size", cli.max_size, "Largest module basis searched (default: certification bound)");
    c->add_option("--budget", cli.budget, "Time budget in seconds (default: unlimited)");
    c->add_option("--threads", cli.threads, "Worker threads (default: FUSION_THREADS or hardware)");
  };

  std::string path, x, y, enum_out, torsion_out, product_out, alpha, dot;
  std::vector<std::string> paths;
  bool free = false, tensor = false, standard = false;

  auto* verify = app.add_subcommand("verify", "Check the based ring or based module axioms");
  verify->add_option("path", path, "Document path or builtin: URI")->required();
  depth_opt(verify);

  auto* fuse_cmd = app.add_subcommand("fuse", "Multiply two ring elements");
  fuse_cmd->add_option("path", path)->required();
  fuse_cmd->add_option("x", x)->required();
  fuse_cmd->add_option("y", y)->required();

  auto* dims = app.add_subcommand("dims", "Frobenius-Perron dimensions of a finite ring");
  dims->add_option("path", path)->required();

  auto* enumerate = app.add_subcommand("enumerate", "Enumerate connected based modules up to isomorphism");
  enumerate->add_option("path", path)->required();
  enumerate->add_option("--out", enum_out, "Output directory")->default_val("modules");
  search_opts(enumerate);

  auto* torsion = app.add_subcommand("torsion", "Decide torsion-freeness of a finite ring");
  torsion->add_option("path", path)->required();
  torsion->add_option("--out", torsion_out, "Directory for witness modules")->default_val("witnesses");
  search_opts(torsion);

  auto* product = app.add_subcommand("product", "Free or tensor product of rings");
  product->add_flag("--free", free, "Free product (lazy document)");
  product->add_flag("--tensor", tensor, "Tensor product (explicit table)");
  product->add_option("paths", paths)->required()->expected(2, -1);
  product->add_option("-o,--out", product_out, "Output file (default: stdout)");

  auto* graph = app.add_subcommand("graph", "Fusion graph of a module");
  graph->add_option("path", path)->required();
  graph->add_option("--alpha", alpha, "Ring basis id")->required();
  graph->add_option("--dot", dot, "DOT output file (default: stdout)");
  graph->add_flag("--standard", standard, "Use the standard module of a ring document");
  depth_opt(graph);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kInput;
  }

  try {
    Settings s = load_settings(config);
    if (cli.depth) s.depth = cli.depth;
    if (cli.max_size) s.max_size = cli.max_size;
    if (cli.budget) s.budget = cli.budget;
    if (cli.threads) s.threads = cli.threads;

    if (*verify) return cmd_verify(path, s);
    if (*fuse_cmd) return cmd_fuse(path, x, y);
    if (*dims) return cmd_dims(path, s);
    if (*enumerate) return cmd_enumerate(path, enum_out, s);
    if (*torsion) return cmd_torsion(path, torsion_out, s);
    if (*product) return cmd_product(free, tensor, paths, product_out);
    if (*graph) return cmd_graph(path, alpha, dot, standard, s);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
  return kInput;
}
