#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fusion/constructors.hpp"
#include "fusion/ring.hpp"

namespace fusion {

// Raw description of a finite module, as read from a document.
struct ModuleData {
  std::string name;
  TablePtr ring;
  std::vector<Label> basis;
  std::map<std::pair<Label, Label>, ModuleElement> action;  // (alpha, b) -> alpha*b
};

// Finite based module over a finite based ring, stored densely as the
// matrices M(alpha)_{b,c} = N_{alpha b}^c.
class BasedModuleTable {
 public:
  // Throws StructuralError on unknown labels, missing or negative entries.
  explicit BasedModuleTable(ModuleData data);
  BasedModuleTable(TablePtr ring, std::vector<Label> basis, std::vector<IntMatrix> matrices,
                   std::string name = "module");

  const std::string& name() const noexcept { return name_; }
  const TablePtr& ring() const noexcept { return ring_; }
  const BasedRingTable& ring_table() const noexcept { return *ring_; }
  std::size_t size() const noexcept { return basis_.size(); }
  const std::vector<Label>& basis() const noexcept { return basis_; }
  const Label& label(std::size_t i) const { return basis_.at(i); }
  bool contains(const Label& l) const { return index_.count(l) != 0; }
  std::size_t index(const Label& l) const;

  std::int64_t N(std::size_t alpha, std::size_t b, std::size_t c) const { return matrices_[alpha](b, c); }
  const IntMatrix& matrix(std::size_t alpha) const { return matrices_.at(alpha); }
  const IntMatrix& matrix(const Label& alpha) const { return matrices_.at(ring_->index(alpha)); }
  const std::vector<IntMatrix>& matrices() const noexcept { return matrices_; }

  ModuleElement act(const Label& alpha, const Label& b) const;
  ModuleData to_data() const;

 private:
  void build_index();

  std::string name_;
  TablePtr ring_;
  std::vector<Label> basis_;
  std::map<Label, std::size_t> index_;
  std::vector<IntMatrix> matrices_;
};

using ModulePtr = std::shared_ptr<const BasedModuleTable>;

// Bilinear extension of the action.
ModuleElement act(const BasedModuleTable& m, const RingElement& x, const ModuleElement& b);
// <b,c> = sum_alpha N_{alpha b}^c dual(alpha)
RingElement inner(const BasedModuleTable& m, const Label& b, const Label& c);

VerificationReport verify_module(const BasedModuleTable& m);

std::vector<std::vector<Label>> connected_components(const BasedModuleTable& m);
bool is_connected(const BasedModuleTable& m);

struct ModuleDimensionVector {
  std::map<Label, double> values;
  Label anchor;
  double at(const Label& b) const;
};

// d(b) = d(<b, anchor>), validated against d(alpha*b) = d(alpha) d(b).
// Throws IncompatibleDims when validation fails.
ModuleDimensionVector dim_vector(const BasedModuleTable& m, const DimensionFunction& dims,
                                 const Label& anchor, double tol = 1e-6);

ModulePtr standard_module(const TablePtr& ring);
// Orbits of the right multiplication by a finite subgroup of units, each
// labelled by its least element.
ModulePtr quotient_module(const TablePtr& ring, const std::vector<Label>& subgroup);
// Module labels are pair_label(anchor, b).
ModulePtr induced_module(const TablePtr& ring, const DivisibilityResult& witness,
                         const BasedModuleTable& sub_module);
// Over tensor_product(R, R): (a:b) * g = a g dual(b).
ModulePtr twisted_tensor_module(const TablePtr& r);
// alpha * b0 = d(alpha) b0; throws NonIntegerDims unless all dims are integers.
ModulePtr singleton_module(const TablePtr& ring, const DimensionFunction& dims);
ModulePtr direct_sum(const BasedModuleTable& a, const BasedModuleTable& b);

// Same module with its basis relabelled (and reordered) by a bijection.
ModulePtr relabel(const BasedModuleTable& m, const std::map<Label, Label>& rename);

// --- modules over countably based rings ----------------------------------

struct LazyModuleSpec {
  std::string name;
  RingPtr ring;
  Label origin;
  std::function<bool(const Label&)> contains;
  std::function<ModuleElement(const Label&, const Label&)> act;  // basis alpha, basis b
  std::function<std::size_t(const Label&)> level;
  std::function<std::vector<Label>(std::size_t)> enumerate_level;
  std::function<std::optional<double>(const Label&)> dimension;
  // Certified bound: N_{alpha b}^c != 0 implies level(alpha) <= bound(b, c).
  std::function<std::optional<std::size_t>(const Label&, const Label&)> support_bound;
  // Present when J is finite.
  std::optional<std::vector<Label>> finite_basis;
};

class LazyModule {
 public:
  explicit LazyModule(LazyModuleSpec spec) : spec_(std::move(spec)) {}
  const LazyModuleSpec& spec() const noexcept { return spec_; }
  const BasedRing& ring() const { return *spec_.ring; }
  ModuleElement act(const Label& alpha, const Label& b) const { return spec_.act(alpha, b); }
  std::vector<Label> labels_up_to(std::size_t depth) const;

 private:
  LazyModuleSpec spec_;
};

using LazyModulePtr = std::shared_ptr<const LazyModule>;

// Left multiplication on a lazy ring whose level is subadditive and dual
// invariant, which gives the support bound level(b) + level(c).
LazyModulePtr standard_lazy_module(const RingPtr& ring);

enum class Tri { yes, no, undecided };
std::string to_string(Tri t);

struct CofinitenessResult {
  Tri verdict = Tri::undecided;
  std::string reason;
};

// Finite modules over finite rings are cofinite.
bool is_cofinite(const BasedModuleTable& m);
CofinitenessResult is_cofinite(const LazyModule& m, std::size_t depth = 32);

// Inner product over a lazy module; throws InfiniteInnerProduct unless the
// module certifies a support bound for (b, c).
RingElement inner(const LazyModule& m, const Label& b, const Label& c);

// Labels of level <= depth with the matrices of a few generators restricted
// to them. A vertex is on the boundary if some generator maps it outside.
struct TruncatedModule {
  std::vector<Label> vertices;
  std::vector<std::size_t> levels;
  std::vector<Label> generators;
  std::vector<IntMatrix> matrices;  // one per generator
  std::vector<bool> boundary;
  std::vector<double> dims;  // empty if unknown

  std::size_t index(const Label& l) const;
  const IntMatrix& matrix(const Label& g) const;
};

TruncatedModule truncate(const LazyModule& m, const std::vector<Label>& generators, std::size_t depth);

}  // namespace fusion
