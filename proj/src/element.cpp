#include <sstream>

#include "fusion/element.hpp"
#include "fusion/errors.hpp"
#include "fusion/report.hpp"

namespace fusion {

std::string Combination::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [l, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c << '*' << l.id();
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Combination& x) { return os << x.to_string(); }

std::int64_t to_int64(const Coeff& c) {
  if (c > Coeff(INT64_MAX) || c < Coeff(INT64_MIN))
    throw FusionError("coefficient does not fit in 64 bits");
  return static_cast<std::int64_t>(c);
}

std::string VerificationReport::to_string() const {
  std::ostringstream os;
  if (!structural_ok) {
    os << "structure: FAIL " << structural_error << '\n';
    return os.str();
  }
  for (const auto& c : checks) {
    os << c.name;
    if (c.condition > 0) os << " (condition " << c.condition << ')';
    os << ": " << (c.passed ? "pass" : "FAIL");
    if (!c.passed && !c.witness.empty()) os << " witness " << c.witness;
    os << '\n';
  }
  return os.str();
}

}  // namespace fusion
