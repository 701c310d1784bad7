#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fusion/constructors.hpp"
#include "fusion/modules.hpp"
#include "fusion/ring.hpp"

namespace fusion::io {

using Json = nlohmann::json;

inline constexpr const char* kRingFormat = "fusionring/1";
inline constexpr const char* kModuleFormat = "fusionmodule/1";

// Malformed, unreadable or inconsistent input documents.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical text: sorted keys, two-space indent, scalar-only arrays on one
// line, UTF-8, LF line endings, trailing newline.
std::string emit(const Json& doc);
// Throws InputError with line and column on malformed JSON.
Json parse(const std::string& text);
Json read_json_file(const std::filesystem::path& path);

// Writes to a temporary sibling and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& text);

struct LoadedRing {
  RingPtr ring;
  TablePtr table;  // null for lazy rings
  Json document;   // canonical document of the ring
  std::map<Label, std::int64_t> declared_dims;
};

struct LoadedModule {
  ModulePtr module;
  LoadedRing ring;
  Json document;
};

bool is_builtin(const std::string& source);
// builtin:NAME or builtin:NAME?key=value&key=value
LoadedRing builtin_ring(const std::string& uri);
std::vector<std::string> builtin_names();

// A path or builtin URI naming a ring document.
LoadedRing load_ring(const std::string& source);
// Relative ring references resolve against base_dir.
LoadedRing ring_from_json(const Json& doc, const std::filesystem::path& base_dir = {});
LoadedModule load_module(const std::string& path);
LoadedModule module_from_json(const Json& doc, const std::filesystem::path& base_dir = {});

// "ring" or "module" from the format field; builtin URIs are rings.
std::string document_kind(const std::string& source);

Json ring_to_json(const BasedRingTable& ring);
Json lazy_ring_json(const std::string& kind, const std::string& name, const Json& extra = Json::object());
Json module_to_json(const BasedModuleTable& m, const Json& ring_document);

// term ("+" term)*, term = [int "*"] id. Terms are separated by a '+' with
// whitespace on both sides, or by a bare '+' when every piece is a term.
// "e" and "unit" name the unit unless the ring has labels of that name.
RingElement parse_expression(const BasedRing& ring, const std::string& text);

}  // namespace fusion::io
