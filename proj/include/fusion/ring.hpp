#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fusion/element.hpp"
#include "fusion/matrix.hpp"
#include "fusion/report.hpp"

namespace fusion {

struct Tolerance {
  double dim = 1e-9;              // equality of dimension values
  double multiplicativity = 1e-6;  // relative error of d(a)d(b) vs d(a*b)
  double rayleigh = 1e-12;        // power-iteration stopping rule
  int max_iterations = 100000;
};

// Common interface for finite tables and countably based (lazy) rings.
// Implementations are immutable after construction and safe for concurrent
// reads.
class BasedRing {
 public:
  virtual ~BasedRing() = default;

  virtual std::string name() const = 0;
  virtual const Label& unit() const = 0;
  virtual bool contains(const Label& l) const = 0;
  virtual Label dual(const Label& l) const = 0;
  // Product of two basis labels.
  virtual RingElement multiply(const Label& a, const Label& b) const = 0;
  virtual bool is_finite() const = 0;
  virtual std::size_t level(const Label& l) const = 0;
  virtual std::vector<Label> enumerate_level(std::size_t n) const = 0;
  // Exact (closed form) dimension, when the ring knows one.
  virtual std::optional<double> known_dimension(const Label&) const { return std::nullopt; }

  std::vector<Label> labels_up_to(std::size_t depth) const;
  void require(const Label& l) const;
};

// Raw description of a finite based ring, as read from a document.
struct RingData {
  std::string name;
  std::vector<Label> basis;
  Label unit;
  std::map<Label, Label> dual;
  std::map<std::pair<Label, Label>, RingElement> products;
};

class BasedRingTable final : public BasedRing {
 public:
  // Throws StructuralError on missing products, unknown ids, a non-bijective
  // involution, or an involution not fixing the unit. Axioms are not checked
  // here; see verify_based_ring.
  explicit BasedRingTable(RingData data);

  std::string name() const override { return name_; }
  const Label& unit() const override { return basis_[unit_]; }
  bool contains(const Label& l) const override { return index_.count(l) != 0; }
  Label dual(const Label& l) const override { return basis_[dual_[index(l)]]; }
  RingElement multiply(const Label& a, const Label& b) const override;
  bool is_finite() const override { return true; }
  std::size_t level(const Label& l) const override { return index(l) == unit_ ? 0 : 1; }
  std::vector<Label> enumerate_level(std::size_t n) const override;

  std::size_t size() const noexcept { return basis_.size(); }
  const std::vector<Label>& basis() const noexcept { return basis_; }
  const Label& label(std::size_t i) const { return basis_.at(i); }
  std::size_t index(const Label& l) const;
  std::size_t unit_index() const noexcept { return unit_; }
  std::size_t dual_index(std::size_t i) const { return dual_.at(i); }

  // N_{ab}^c by index.
  std::int64_t N(std::size_t a, std::size_t b, std::size_t c) const {
    return n_[(a * size() + b) * size() + c];
  }
  // Sparse support of a*b as (c, N_{ab}^c).
  const std::vector<std::pair<std::size_t, std::int64_t>>& product(std::size_t a,
                                                                   std::size_t b) const {
    return sparse_[a * size() + b];
  }
  // L(a)_{b,c} = N_{ab}^c
  IntMatrix left_matrix(std::size_t a) const;

  RingData to_data() const;

 private:
  std::string name_;
  std::vector<Label> basis_;
  std::unordered_map<Label, std::size_t> index_;
  std::size_t unit_ = 0;
  std::vector<std::size_t> dual_;
  std::vector<std::int64_t> n_;
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> sparse_;
};

// Callbacks defining a countably based ring. Every single product must be
// finitely supported; enumerate_level must be exhaustive and disjoint.
struct LazyRingSpec {
  std::string name;
  Label unit;
  std::function<bool(const Label&)> contains;
  std::function<Label(const Label&)> dual;
  std::function<RingElement(const Label&, const Label&)> multiply;
  std::function<std::size_t(const Label&)> level;
  std::function<std::vector<Label>(std::size_t)> enumerate_level;
  std::function<std::optional<double>(const Label&)> dimension;
};

class LazyBasedRing final : public BasedRing {
 public:
  explicit LazyBasedRing(LazyRingSpec spec) : spec_(std::move(spec)) {}

  std::string name() const override { return spec_.name; }
  const Label& unit() const override { return spec_.unit; }
  bool contains(const Label& l) const override { return spec_.contains(l); }
  Label dual(const Label& l) const override;
  RingElement multiply(const Label& a, const Label& b) const override;
  bool is_finite() const override { return false; }
  std::size_t level(const Label& l) const override;
  std::vector<Label> enumerate_level(std::size_t n) const override {
    return spec_.enumerate_level(n);
  }
  std::optional<double> known_dimension(const Label& l) const override;

  const LazyRingSpec& spec() const noexcept { return spec_; }

 private:
  LazyRingSpec spec_;
  // Memoized basis products; observably identical to recomputation.
  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<Label, Label>, RingElement> cache_;
};

using RingPtr = std::shared_ptr<const BasedRing>;
using TablePtr = std::shared_ptr<const BasedRingTable>;

// --- element algebra -------------------------------------------------------

RingElement fuse(const BasedRing& ring, const RingElement& x, const RingElement& y);
Coeff tau(const BasedRing& ring, const RingElement& x);
RingElement dual(const BasedRing& ring, const RingElement& x);
// N_{yz}^x = tau(y * z * dual(x))
Coeff structure_constant(const BasedRing& ring, const RingElement& y, const RingElement& z,
                         const RingElement& x);

// --- axioms ----------------------------------------------------------------

VerificationReport verify_based_ring(const BasedRingTable& ring);
// Same axioms, quantified over labels of level <= depth.
VerificationReport verify_lazy_ring(const BasedRing& ring, std::size_t depth);

// --- dimensions ------------------------------------------------------------

enum class Exactness { integer, quadratic, numeric };

std::string to_string(Exactness e);

class DimensionFunction {
 public:
  DimensionFunction() = default;
  DimensionFunction(std::map<Label, double> values, Exactness exactness)
      : values_(std::move(values)), exactness_(exactness) {}

  double at(const Label& l) const;
  double of(const RingElement& x) const;
  const std::map<Label, double>& values() const noexcept { return values_; }
  Exactness exactness() const noexcept { return exactness_; }
  double total() const;
  double max() const;

 private:
  std::map<Label, double> values_;
  Exactness exactness_ = Exactness::numeric;
};

// Perron data of the left regular representation. Throws NoDimensionFunction
// if the candidate is not a dimension function.
DimensionFunction frobenius_perron_dims(const BasedRingTable& ring, const Tolerance& tol = {});

// Dimensions of a lazy ring on labels of level <= depth (closed forms only).
DimensionFunction lazy_dims(const BasedRing& ring, std::size_t depth);

// Labels with d = 1; throws InconsistentUnits if they do not form a group.
std::vector<Label> group_of_units(const BasedRingTable& ring, const DimensionFunction& dims,
                                  const Tolerance& tol = {});

// Classify a set of positive reals as all-integer, all quadratic irrational
// with small integer coefficients, or neither.
Exactness classify_exactness(const std::vector<double>& values, double tol = 1e-9);

}  // namespace fusion
