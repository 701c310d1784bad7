#pragma once

#include <stdexcept>
#include <string>

namespace fusion {

class FusionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LabelNotInRing : public FusionError {
 public:
  explicit LabelNotInRing(const std::string& id)
      : FusionError("label not in ring: " + id), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

// Malformed input data: missing table entries, broken involution, bad ids.
class StructuralError : public FusionError {
 public:
  using FusionError::FusionError;
};

class NoDimensionFunction : public FusionError {
 public:
  using FusionError::FusionError;
};

class InconsistentUnits : public FusionError {
 public:
  using FusionError::FusionError;
};

class NotAGroup : public FusionError {
 public:
  using FusionError::FusionError;
};

class InvalidSubring : public FusionError {
 public:
  using FusionError::FusionError;
};

class NonIntegerDims : public FusionError {
 public:
  using FusionError::FusionError;
};

class IncompatibleDims : public FusionError {
 public:
  using FusionError::FusionError;
};

class InfiniteInnerProduct : public FusionError {
 public:
  using FusionError::FusionError;
};

class InvalidWitness : public FusionError {
 public:
  using FusionError::FusionError;
};

class DisconnectedGraph : public FusionError {
 public:
  using FusionError::FusionError;
};

}  // namespace fusion
