#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fusion/modules.hpp"
#include "fusion/spectra.hpp"

namespace fusion {

enum class EntryBound { dimension_derived, explicit_cap };

struct ModuleSearchConfig {
  std::size_t max_basis_size = 0;  // 0: use the certification bound
  EntryBound entry_bound_mode = EntryBound::dimension_derived;
  std::int64_t explicit_cap = 0;
  std::vector<Label> generators;     // optional override of the search set
  double time_budget_seconds = 0.0;  // 0: unlimited
  std::size_t threads = 0;           // 0: FUSION_THREADS, else hardware concurrency
};

// Worker count from FUSION_THREADS (when set and positive), else hardware.
std::size_t default_thread_count();

// Relabels J as b0, b1, ... minimizing the encoding of the stacked action
// matrices (ring basis order) over all breadth-first labelings started at a
// vertex of minimal dimension.
ModulePtr canonical_form(const BasedModuleTable& m);
std::vector<std::int64_t> canonical_encoding(const BasedModuleTable& m);
bool isomorphic(const BasedModuleTable& a, const BasedModuleTable& b);

struct EnumerationResult {
  std::vector<ModulePtr> modules;  // canonical forms, sorted by (size, encoding)
  bool complete = true;            // false if the time budget ran out
  std::size_t max_basis_size = 0;
  std::size_t certification_bound = 0;  // floor(sum of dims)
  std::vector<Label> search_set;
  std::size_t nodes = 0;
};

// Largest |J| of a connected cofinite module: floor(sum_alpha d(alpha)).
std::size_t certification_bound(const BasedRingTable& ring);

EnumerationResult enumerate_modules(const TablePtr& ring, const ModuleSearchConfig& config = {});

enum class TorsionStatus { torsion_free_certified, not_torsion_free, inconclusive };
std::string to_string(TorsionStatus s);

struct TorsionVerdict {
  TorsionStatus status = TorsionStatus::inconclusive;
  std::vector<ModulePtr> witnesses;  // non-standard classes, canonical
  std::size_t certified_bound = 0;   // |J| bound searched exhaustively (0 if cut short)
  std::size_t classes = 0;
};

TorsionVerdict is_torsion_free(const TablePtr& ring, const ModuleSearchConfig& config = {});

// For rings with all dims integral and more than one basis element, the
// one-point module is a witness.
std::optional<ModulePtr> integer_dim_shortcut(const TablePtr& ring);

// --- proof replays over infinite rings ------------------------------------

// Integers P_0..P_n with n = sum_k P_k 1^k in A(1).
std::vector<std::int64_t> chebyshev_coeffs(std::size_t n);

// J x {-,+} with the A(1) generator acting by M~[b+][c-] = M(p+)_{b,c} and
// M~[b-][c+] = M(p-)_{b,c}. Vertex ids are "<b>|+" and "<b>|-".
struct UnfoldedModule {
  TruncatedModule module;  // single generator "1"
  FusionGraph graph;       // symmetrized (underlying) graph of that generator
};
UnfoldedModule a2_unfold(const TruncatedModule& t);
UnfoldedModule a2_unfold(const LazyModule& m, std::size_t depth);

struct ProbeReport {
  bool passed = true;
  std::vector<std::string> violations;
  std::vector<std::string> notes;
  void violate(std::string v) {
    passed = false;
    violations.push_back(std::move(v));
  }
  std::string to_string() const;
};

ProbeReport a2_structure_check(const LazyModule& m, std::size_t depth);
ProbeReport a2_structure_check(const TruncatedModule& t);

// Quotient of a free product module by a group-ring factor acting on the
// right: words lose a trailing letter from that factor.
LazyModulePtr free_product_factor_quotient(const RingPtr& free_product_ring, const TablePtr& factor,
                                           std::size_t factor_index);

struct FreeProductProbe {
  ProbeReport report;
  std::optional<Label> e;                 // vertex with alpha -> alpha * e an isomorphism
  std::optional<std::size_t> obstruction_factor;  // 1-based
};

FreeProductProbe free_product_module_probe(const std::vector<TablePtr>& factors, const LazyModule& m,
                                           std::size_t depth);

struct TensorProbe {
  TorsionVerdict verdict;  // of the tensor product
  ProbeReport report;
  std::vector<Label> subring1, subring2;  // generated subrings matched by the witness
  bool subrings_isomorphic = false;
};

TensorProbe tensor_obstruction_probe(const TablePtr& r1, const TablePtr& r2, const ModuleSearchConfig& config = {});

}  // namespace fusion
