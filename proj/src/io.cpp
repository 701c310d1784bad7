#include "fusion/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "fusion/errors.hpp"

namespace fusion::io {

namespace fs = std::filesystem;

// --- canonical text ---------------------------------------------------------

namespace {

bool is_scalar(const Json& v) { return !v.is_object() && !v.is_array(); }

std::string scalar_text(const Json& v) { return v.dump(-1, ' ', false, Json::error_handler_t::strict); }

void emit_value(const Json& v, std::size_t indent, std::string& out) {
  const std::string pad(indent + 2, ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    std::size_t i = 0;
    for (const auto& [key, value] : v.items()) {
      out += pad + scalar_text(Json(key)) + ": ";
      emit_value(value, indent + 2, out);
      out += ++i < v.size() ? ",\n" : "\n";
    }
    out += std::string(indent, ' ') + "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
      return;
    }
    bool flat = true;
    for (const auto& e : v) flat = flat && is_scalar(e);
    if (flat) {
      out += "[";
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + scalar_text(v[i]);
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      out += pad;
      emit_value(v[i], indent + 2, out);
      out += i + 1 < v.size() ? ",\n" : "\n";
    }
    out += std::string(indent, ' ') + "]";
  } else {
    out += scalar_text(v);
  }
}

}  // namespace

std::string emit(const Json& doc) {
  std::string out;
  emit_value(doc, 0, out);
  out += '\n';
  return out;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw InputError("cannot write " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw InputError("cannot move " + tmp.string() + " to " + path.string());
  }
}

// --- field access -------------------------------------------------------------

namespace {

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(where + ": missing field \"" + key + "\"");
  return *it;
}

std::string string_field(const Json& obj, const char* key, const std::string& where) {
  const Json& v = field(obj, key, where);
  if (!v.is_string()) throw InputError(where + ": field \"" + key + "\" must be a string");
  return v.get<std::string>();
}

std::string optional_name(const Json& obj, const std::string& fallback) {
  auto it = obj.find("name");
  if (it == obj.end()) return fallback;
  if (!it->is_string()) throw InputError("field \"name\" must be a string");
  return it->get<std::string>();
}

std::int64_t positive_integer(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) throw InputError(where + ": expected an integer");
  auto x = v.get<std::int64_t>();
  if (x < 1) throw InputError(where + ": multiplicities and dimensions must be at least 1");
  return x;
}

void require_format(const Json& doc, const char* expected) {
  std::string f = string_field(doc, "format", "document");
  if (f != expected)
    throw InputError("unsupported format \"" + f + "\", expected \"" + expected + "\"");
}

// [x, y, z, multiplicity] with three string ids.
struct Quad {
  std::string a, b, c;
  std::int64_t m;
};

Quad quad(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 4 || !v[0].is_string() || !v[1].is_string() || !v[2].is_string())
    throw InputError(where + ": entries must be [id, id, id, multiplicity]");
  return {v[0].get<std::string>(), v[1].get<std::string>(), v[2].get<std::string>(),
          positive_integer(v[3], where)};
}

fs::path resolve(const std::string& source, const fs::path& base_dir) {
  fs::path p(source);
  if (p.is_relative() && !base_dir.empty()) return base_dir / p;
  return p;
}

std::size_t parse_count(const std::string& uri, const std::map<std::string, std::string>& params,
                        const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) throw InputError(uri + ": missing parameter " + key);
  const std::string& s = it->second;
  if (s.empty() || s.size() > 6 || !std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch); }))
    throw InputError(uri + ": parameter " + key + " must be a small nonnegative integer");
  return std::stoul(s);
}

LoadedRing from_table(TablePtr table) {
  LoadedRing out;
  out.table = table;
  out.ring = table;
  out.document = ring_to_json(*table);
  return out;
}

}  // namespace

// --- documents ----------------------------------------------------------------

Json ring_to_json(const BasedRingTable& r) {
  std::optional<DimensionFunction> dims;
  try {
    dims = frobenius_perron_dims(r);
  } catch (const FusionError&) {
  }
  Json basis = Json::array();
  for (std::size_t i = 0; i < r.size(); ++i) {
    Json e = {{"id", r.label(i).id()}, {"dual", r.label(r.dual_index(i)).id()}};
    if (dims) {
      double d = dims->at(r.label(i));
      double rd = std::round(d);
      if (std::abs(d - rd) < 1e-9) e["dim"] = static_cast<std::int64_t>(rd);
    }
    basis.push_back(std::move(e));
  }
  Json products = Json::array();
  for (std::size_t a = 0; a < r.size(); ++a)
    for (std::size_t b = 0; b < r.size(); ++b) {
      auto terms = r.product(a, b);
      std::sort(terms.begin(), terms.end());
      for (const auto& [c, m] : terms)
        products.push_back(Json::array({r.label(a).id(), r.label(b).id(), r.label(c).id(), m}));
    }
  return {{"format", kRingFormat},
          {"name", r.name()},
          {"unit", r.unit().id()},
          {"basis", std::move(basis)},
          {"products", std::move(products)}};
}

Json lazy_ring_json(const std::string& kind, const std::string& name, const Json& extra) {
  Json tag = extra.is_object() ? extra : Json::object();
  tag["kind"] = kind;
  return {{"format", kRingFormat}, {"name", name}, {"lazy", std::move(tag)}};
}

Json module_to_json(const BasedModuleTable& m, const Json& ring_document) {
  const auto& r = m.ring_table();
  Json basis = Json::array();
  for (const auto& b : m.basis()) basis.push_back(b.id());
  Json action = Json::array();
  for (std::size_t a = 0; a < r.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b)
      for (std::size_t c = 0; c < m.size(); ++c)
        if (std::int64_t n = m.N(a, b, c); n != 0)
          action.push_back(Json::array({r.label(a).id(), m.label(b).id(), m.label(c).id(), n}));
  return {{"format", kModuleFormat},
          {"name", m.name()},
          {"ring", ring_document},
          {"basis", std::move(basis)},
          {"action", std::move(action)}};
}

LoadedRing ring_from_json(const Json& doc, const fs::path& base_dir) {
  require_format(doc, kRingFormat);
  if (auto lz = doc.find("lazy"); lz != doc.end()) {
    std::string kind = string_field(*lz, "kind", "lazy tag");
    LoadedRing out;
    if (kind == "a1" || kind == "a2") {
      out.ring = kind == "a1" ? RingPtr(a1()) : RingPtr(a2());
      out.document = lazy_ring_json(kind, out.ring->name());
      return out;
    }
    if (kind == "su2_level") {
      const Json& lv = field(*lz, "level", "lazy tag");
      if (!lv.is_number_integer() || lv.get<std::int64_t>() < 1 || lv.get<std::int64_t>() > 200)
        throw InputError("su2_level: level must be an integer in 1..200");
      return from_table(su2_level(static_cast<int>(lv.get<std::int64_t>())));
    }
    if (kind == "free_product") {
      const Json& fs_ = field(*lz, "factors", "lazy tag");
      if (!fs_.is_array() || fs_.size() < 2) throw InputError("free_product: need at least two factors");
      std::vector<RingPtr> factors;
      Json docs = Json::array();
      for (const auto& f : fs_) {
        LoadedRing lr;
        if (f.is_string()) {
          std::string s = f.get<std::string>();
          lr = load_ring(is_builtin(s) ? s : resolve(s, base_dir).string());
        } else {
          lr = ring_from_json(f, base_dir);
        }
        factors.push_back(lr.ring);
        docs.push_back(lr.document);
      }
      out.ring = free_product(std::move(factors));
      out.document = lazy_ring_json(kind, out.ring->name(), {{"factors", std::move(docs)}});
      return out;
    }
    throw InputError("unknown lazy ring kind \"" + kind + "\"");
  }

  RingData data;
  data.name = optional_name(doc, "ring");
  data.unit = string_field(doc, "unit", "ring document");
  const Json& basis = field(doc, "basis", "ring document");
  if (!basis.is_array() || basis.empty()) throw InputError("ring document: basis must be a non-empty array");
  std::map<Label, std::int64_t> declared;
  for (const auto& e : basis) {
    Label id = string_field(e, "id", "basis entry");
    for (const auto& l : data.basis)
      if (l == id) throw InputError("basis entry: duplicate id " + id.id());
    data.basis.push_back(id);
    data.dual[id] = string_field(e, "dual", "basis entry " + id.id());
    if (auto d = e.find("dim"); d != e.end()) declared[id] = positive_integer(*d, "basis entry " + id.id());
  }
  const Json& products = field(doc, "products", "ring document");
  if (!products.is_array()) throw InputError("ring document: products must be an array");
  for (const auto& p : products) {
    Quad q = quad(p, "products");
    RingElement& slot = data.products[{q.a, q.b}];
    if (slot.coefficient(q.c) != 0)
      throw InputError("products: duplicate entry " + q.a + " " + q.b + " " + q.c);
    slot.add(Label(q.c), q.m);
  }
  TablePtr table;
  try {
    table = std::make_shared<const BasedRingTable>(std::move(data));
  } catch (const FusionError& e) {
    throw InputError(std::string("ring document: ") + e.what());
  }
  LoadedRing out = from_table(table);
  out.declared_dims = std::move(declared);
  return out;
}

LoadedModule module_from_json(const Json& doc, const fs::path& base_dir) {
  require_format(doc, kModuleFormat);
  const Json& ref = field(doc, "ring", "module document");
  LoadedRing ring;
  if (ref.is_string()) {
    std::string s = ref.get<std::string>();
    ring = load_ring(is_builtin(s) ? s : resolve(s, base_dir).string());
  } else {
    ring = ring_from_json(ref, base_dir);
  }
  if (!ring.table) throw InputError("module document: the ring must be a finite table");

  ModuleData data;
  data.name = optional_name(doc, "module");
  data.ring = ring.table;
  const Json& basis = field(doc, "basis", "module document");
  if (!basis.is_array() || basis.empty()) throw InputError("module document: basis must be a non-empty array");
  for (const auto& b : basis) {
    if (!b.is_string()) throw InputError("module document: basis ids must be strings");
    Label id = b.get<std::string>();
    for (const auto& l : data.basis)
      if (l == id) throw InputError("module document: duplicate basis id " + id.id());
    data.basis.push_back(id);
  }
  const Json& action = field(doc, "action", "module document");
  if (!action.is_array()) throw InputError("module document: action must be an array");
  for (const auto& p : action) {
    Quad q = quad(p, "action");
    ModuleElement& slot = data.action[{q.a, q.b}];
    if (slot.coefficient(q.c) != 0) throw InputError("action: duplicate entry " + q.a + " " + q.b + " " + q.c);
    slot.add(Label(q.c), q.m);
  }
  LoadedModule out;
  try {
    out.module = std::make_shared<const BasedModuleTable>(std::move(data));
  } catch (const FusionError& e) {
    throw InputError(std::string("module document: ") + e.what());
  }
  out.ring = std::move(ring);
  out.document = module_to_json(*out.module, out.ring.document);
  return out;
}

bool is_builtin(const std::string& source) { return source.rfind("builtin:", 0) == 0; }

std::vector<std::string> builtin_names() {
  return {"a1",        "a2",       "cyclic?n=N", "dihedral?n=N", "fibonacci", "klein",
          "quaternion", "s3",      "su2?level=N", "symmetric?n=N", "trivial"};
}

LoadedRing builtin_ring(const std::string& uri) {
  if (!is_builtin(uri)) throw InputError(uri + ": not a builtin URI");
  std::string rest = uri.substr(8);
  std::string name = rest.substr(0, rest.find('?'));
  std::map<std::string, std::string> params;
  if (auto q = rest.find('?'); q != std::string::npos) {
    std::stringstream ss(rest.substr(q + 1));
    std::string kv;
    while (std::getline(ss, kv, '&')) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw InputError(uri + ": malformed parameter " + kv);
      params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
  }
  auto count = [&](const std::string& key, std::size_t lo, std::size_t hi) {
    std::size_t v = parse_count(uri, params, key);
    if (v < lo || v > hi)
      throw InputError(uri + ": " + key + " must lie in " + std::to_string(lo) + ".." + std::to_string(hi));
    return v;
  };
  try {
    if (name == "fibonacci" || name == "fib") return from_table(fibonacci());
    if (name == "trivial") return from_table(trivial_ring());
    if (name == "su2") return from_table(su2_level(static_cast<int>(count("level", 1, 200))));
    if (name == "cyclic" || name == "z") return from_table(group_ring(cyclic_group(count("n", 1, 512))));
    if (name == "klein") return from_table(group_ring(direct_product(cyclic_group(2), cyclic_group(2))));
    if (name == "s3") return from_table(group_ring(symmetric_group(3)));
    if (name == "symmetric") return from_table(group_ring(symmetric_group(count("n", 1, 5))));
    if (name == "dihedral") return from_table(group_ring(dihedral_group(count("n", 1, 256))));
    if (name == "quaternion") return from_table(group_ring(quaternion_group()));
    if (name == "a1" || name == "a2") {
      LoadedRing out;
      out.ring = name == "a1" ? RingPtr(a1()) : RingPtr(a2());
      out.document = lazy_ring_json(name, out.ring->name());
      return out;
    }
  } catch (const FusionError& e) {
    throw InputError(uri + ": " + e.what());
  }
  throw InputError("unknown builtin ring \"" + name + "\"");
}

LoadedRing load_ring(const std::string& source) {
  if (is_builtin(source)) return builtin_ring(source);
  fs::path p(source);
  Json doc = read_json_file(p);
  try {
    return ring_from_json(doc, p.parent_path());
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

LoadedModule load_module(const std::string& path) {
  fs::path p(path);
  Json doc = read_json_file(p);
  try {
    return module_from_json(doc, p.parent_path());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string document_kind(const std::string& source) {
  if (is_builtin(source)) return "ring";
  Json doc = read_json_file(source);
  std::string f = string_field(doc, "format", source);
  if (f == kRingFormat) return "ring";
  if (f == kModuleFormat) return "module";
  throw InputError(source + ": unsupported format \"" + f + "\"");
}

// --- expressions --------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<Label> resolve_id(const BasedRing& ring, const std::string& id) {
  if (id.empty()) return std::nullopt;
  if (ring.contains(id)) return Label(id);
  if (id == "e" || id == "unit") return ring.unit();
  return std::nullopt;
}

bool is_integer(const std::string& s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size() || s.size() - i > 18) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

std::optional<RingElement> parse_term(const BasedRing& ring, const std::string& raw) {
  std::string t = trim(raw);
  if (auto l = resolve_id(ring, t)) return RingElement(*l);
  auto star = t.find('*');
  if (star == std::string::npos) return std::nullopt;
  std::string coeff = trim(t.substr(0, star));
  if (!is_integer(coeff)) return std::nullopt;
  auto l = resolve_id(ring, trim(t.substr(star + 1)));
  if (!l) return std::nullopt;
  return RingElement(*l, Coeff(std::stoll(coeff)));
}

std::optional<RingElement> parse_pieces(const BasedRing& ring, const std::vector<std::string>& pieces) {
  RingElement sum;
  for (const auto& p : pieces) {
    auto t = parse_term(ring, p);
    if (!t) return std::nullopt;
    sum.add(*t);
  }
  return sum;
}

}  // namespace

RingElement parse_expression(const BasedRing& ring, const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw InputError("empty expression");
  if (auto t = parse_term(ring, s)) return *t;

  std::vector<std::string> spaced;
  std::size_t start = 0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i)
    if (s[i] == '+' && std::isspace(static_cast<unsigned char>(s[i - 1])) &&
        std::isspace(static_cast<unsigned char>(s[i + 1]))) {
      spaced.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  spaced.push_back(s.substr(start));
  if (spaced.size() > 1)
    if (auto r = parse_pieces(ring, spaced)) return *r;

  std::vector<std::string> bare;
  std::stringstream ss(s);
  std::string piece;
  while (std::getline(ss, piece, '+')) bare.push_back(piece);
  if (bare.size() > 1)
    if (auto r = parse_pieces(ring, bare)) return *r;

  for (const auto& p : spaced.size() > 1 ? spaced : std::vector<std::string>{s})
    if (!parse_term(ring, p)) throw InputError("unknown id or malformed term \"" + trim(p) + "\" in " + ring.name());
  throw InputError("malformed expression \"" + s + "\"");
}

}  // namespace fusion::io
