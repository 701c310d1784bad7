#pragma once

#include <string>
#include <vector>

namespace fusion {

struct AxiomCheck {
  std::string name;
  int condition = 0;  // numbered condition of the axiom list, 0 if derived
  bool passed = true;
  std::string witness;  // first violation, empty on pass
};

struct VerificationReport {
  bool structural_ok = true;
  std::string structural_error;
  std::vector<AxiomCheck> checks;

  bool passed() const {
    if (!structural_ok) return false;
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  const AxiomCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  bool check_passed(const std::string& name) const {
    const auto* c = find(name);
    return c != nullptr && c->passed;
  }

  std::string to_string() const;
};

}  // namespace fusion
