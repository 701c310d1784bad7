#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fusion {

// Dense row-major matrix of 64-bit integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const std::int64_t> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  const std::vector<std::int64_t>& data() const noexcept { return data_; }

  IntMatrix transpose() const;
  bool is_symmetric() const;
  bool is_nonnegative() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator*(std::int64_t s, const IntMatrix& a);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  std::vector<double> apply(std::span<const double> v) const;
  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

struct PerronResult {
  double value = 0.0;
  std::vector<double> vector;  // normalized to max entry 1
  int iterations = 0;
  bool converged = false;
};

// Power iteration on a nonnegative symmetric matrix, shifted by the identity
// so that bipartite spectra do not oscillate. Seeded with the all-ones vector.
PerronResult perron_symmetric(const IntMatrix& m, double tol = 1e-12, int max_iter = 100000);

// Same for an arbitrary nonnegative matrix with a positive Perron vector
// (e.g. an irreducible one).
PerronResult perron_general(const IntMatrix& m, double tol = 1e-12, int max_iter = 100000);

// Perron radius of a symmetric nonnegative matrix; for a non-symmetric one,
// sqrt of the Perron radius of M * M^T (the operator 2-norm).
double spectral_radius(const IntMatrix& m, double tol = 1e-10);

}  // namespace fusion
