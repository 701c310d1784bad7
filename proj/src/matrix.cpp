#include "fusion/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fusion {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  IntMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool IntMatrix::is_symmetric() const {
  if (!is_square()) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r + 1; c < cols_; ++c)
      if ((*this)(r, c) != (*this)(c, r)) return false;
  return true;
}

bool IntMatrix::is_nonnegative() const {
  return std::all_of(data_.begin(), data_.end(), [](std::int64_t v) { return v >= 0; });
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const auto aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix shape mismatch");
  IntMatrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
  return out;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix shape mismatch");
  IntMatrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
  return out;
}

IntMatrix operator*(std::int64_t s, const IntMatrix& a) {
  IntMatrix out = a;
  for (auto& v : out.data_) v *= s;
  return out;
}

std::vector<double> IntMatrix::apply(std::span<const double> v) const {
  std::vector<double> out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) s += static_cast<double>((*this)(r, c)) * v[c];
    out[r] = s;
  }
  return out;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < rows_; ++r) {
    if (r) os << ',';
    os << '[';
    for (std::size_t c = 0; c < cols_; ++c) {
      if (c) os << ',';
      os << (*this)(r, c);
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void normalize_max(std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m > 0)
    for (double& x : v) x /= m;
}

}  // namespace

PerronResult perron_symmetric(const IntMatrix& m, double tol, int max_iter) {
  PerronResult res;
  const std::size_t n = m.rows();
  if (n == 0) {
    res.converged = true;
    return res;
  }
  std::vector<double> x(n, 1.0);
  double prev = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    auto mx = m.apply(x);
    const double rq = dot(x, mx) / dot(x, x);
    for (std::size_t i = 0; i < n; ++i) x[i] += mx[i];  // (M + I) x
    normalize_max(x);
    res.iterations = it;
    if (it > 1 && std::abs(rq - prev) < tol) {
      res.value = rq;
      res.converged = true;
      break;
    }
    prev = rq;
    res.value = rq;
  }
  auto mx = m.apply(x);
  res.value = dot(x, mx) / dot(x, x);
  res.vector = std::move(x);
  return res;
}

PerronResult perron_general(const IntMatrix& m, double tol, int max_iter) {
  PerronResult res;
  const std::size_t n = m.rows();
  if (n == 0) {
    res.converged = true;
    return res;
  }
  std::vector<double> x(n, 1.0);
  double prev = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    auto mx = m.apply(x);
    const double sx = std::accumulate(x.begin(), x.end(), 0.0);
    const double smx = std::accumulate(mx.begin(), mx.end(), 0.0);
    const double est = smx / sx;
    for (std::size_t i = 0; i < n; ++i) x[i] += mx[i];
    normalize_max(x);
    res.iterations = it;
    res.value = est;
    if (it > 1 && std::abs(est - prev) < tol) {
      res.converged = true;
      break;
    }
    prev = est;
  }
  auto mx = m.apply(x);
  res.value = std::accumulate(mx.begin(), mx.end(), 0.0) / std::accumulate(x.begin(), x.end(), 0.0);
  res.vector = std::move(x);
  return res;
}

double spectral_radius(const IntMatrix& m, double tol) {
  if (!m.is_square()) throw std::invalid_argument("spectral_radius needs a square matrix");
  const double inner_tol = std::min(tol * 1e-3, 1e-12);
  if (m.is_symmetric()) return perron_symmetric(m, inner_tol).value;
  return std::sqrt(perron_symmetric(m * m.transpose(), inner_tol).value);
}

}  // namespace fusion
