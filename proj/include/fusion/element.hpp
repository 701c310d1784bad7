#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace fusion {

using Coeff = boost::multiprecision::cpp_int;

// Opaque basis identifier. Ordered shortlex: shorter ids first, then bytewise,
// so "2" < "10" and "e" < "p+" < "p+p-".
class Label {
 public:
  Label() = default;
  Label(std::string id) : id_(std::move(id)) {}  // NOLINT(implicit)
  Label(const char* id) : id_(id) {}             // NOLINT(implicit)

  const std::string& id() const noexcept { return id_; }

  friend bool operator==(const Label&, const Label&) = default;
  friend std::strong_ordering operator<=>(const Label& a, const Label& b) {
    if (a.id_.size() != b.id_.size()) return a.id_.size() <=> b.id_.size();
    return a.id_.compare(b.id_) <=> 0;
  }

  friend std::ostream& operator<<(std::ostream& os, const Label& l) {
    return os << l.id_;
  }

 private:
  std::string id_;
};

// A finitely supported integer combination of labels. Used both for ring
// elements (over a ring basis) and module elements (over a module basis).
// Zero coefficients are never stored.
class Combination {
 public:
  using Terms = std::map<Label, Coeff>;

  Combination() = default;
  Combination(const Label& l, Coeff c = 1) { add(l, std::move(c)); }
  static Combination from_terms(const std::vector<std::pair<Label, long long>>& terms) {
    Combination out;
    for (const auto& [l, c] : terms) out.add(l, c);
    return out;
  }

  void add(const Label& l, const Coeff& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(l, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  void add(const Combination& other, const Coeff& scale = 1) {
    if (scale == 0) return;
    for (const auto& [l, c] : other.terms_) add(l, c * scale);
  }

  Coeff coefficient(const Label& l) const {
    auto it = terms_.find(l);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  const Terms& terms() const& noexcept { return terms_; }
  Terms terms() && noexcept { return std::move(terms_); }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  // Exactly one basis label with coefficient one.
  bool is_basis_element() const {
    return terms_.size() == 1 && terms_.begin()->second == 1;
  }

  bool is_nonnegative() const {
    for (const auto& [l, c] : terms_)
      if (c < 0) return false;
    return true;
  }

  Combination map_labels(const std::function<Label(const Label&)>& f) const {
    Combination out;
    for (const auto& [l, c] : terms_) out.add(f(l), c);
    return out;
  }

  friend Combination operator+(Combination a, const Combination& b) {
    a.add(b);
    return a;
  }
  friend Combination operator-(Combination a, const Combination& b) {
    a.add(b, -1);
    return a;
  }
  friend Combination operator*(const Coeff& s, const Combination& a) {
    Combination out;
    out.add(a, s);
    return out;
  }
  friend bool operator==(const Combination&, const Combination&) = default;

  // x <= y iff y - x has nonnegative coefficients.
  friend bool leq(const Combination& x, const Combination& y) {
    return (y - x).is_nonnegative();
  }

  // "c1*id1 + c2*id2"; "0" for the zero element.
  std::string to_string() const;

 private:
  Terms terms_;
};

using RingElement = Combination;
using ModuleElement = Combination;

std::ostream& operator<<(std::ostream& os, const Combination& x);

// Narrow a coefficient to int64, throwing on overflow.
std::int64_t to_int64(const Coeff& c);

}  // namespace fusion

template <>
struct std::hash<fusion::Label> {
  std::size_t operator()(const fusion::Label& l) const noexcept {
    return std::hash<std::string>{}(l.id());
  }
};
