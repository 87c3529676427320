#pragma once

// Small dense complex linear algebra for density matrices (d <= 8).
// Qubits get closed-form spectral routines; larger dimensions fall back to
// cyclic complex Jacobi rotations.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nmcoh/error.hpp"

namespace nmcoh {

using cplx = std::complex<double>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

  ComplexMatrix(std::size_t dim, std::vector<cplx> entries) : dim_(dim), data_(std::move(entries)) {
    require(data_.size() == dim_ * dim_, ErrorCode::DimensionMismatch,
            "matrix of dim " + std::to_string(dim_) + " needs " + std::to_string(dim_ * dim_) +
                " entries, got " + std::to_string(data_.size()));
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) : dim_(rows.size()) {
    data_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
      require(row.size() == dim_, ErrorCode::DimensionMismatch, "ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }
  std::span<const cplx> entries() const noexcept { return data_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) out(i, j) = std::conj((*this)(j, i));
    return out;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.check_same(b);
    const std::size_t n = a.dim_;
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  /// Largest entrywise modulus of (a - b).
  friend double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.check_same(b);
    double m = 0.0;
    for (std::size_t k = 0; k < a.data_.size(); ++k) m = std::max(m, std::abs(a.data_[k] - b.data_[k]));
    return m;
  }

  double hermiticity_defect() const {
    double m = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i; j < dim_; ++j)
        m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
  }

 private:
  void check_same(const ComplexMatrix& o) const {
    require(dim_ == o.dim_, ErrorCode::DimensionMismatch,
            "dimensions " + std::to_string(dim_) + " and " + std::to_string(o.dim_));
  }

  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

namespace pauli {
inline ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix y() { return {{0.0, cplx(0, -1)}, {cplx(0, 1), 0.0}}; }
inline ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
// |0> is the ground state: sigma_minus = |0><1|.
inline ComplexMatrix minus() { return {{0.0, 1.0}, {0.0, 0.0}}; }
inline ComplexMatrix plus() { return {{0.0, 0.0}, {1.0, 0.0}}; }
}  // namespace pauli

struct EigenSystem {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // column k belongs to values[k]

  std::vector<cplx> vector(std::size_t k) const {
    std::vector<cplx> v(vectors.dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = vectors(i, k);
    return v;
  }

  ComplexMatrix reconstruct() const {
    const std::size_t n = vectors.dim();
    ComplexMatrix out(n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) += values[k] * vectors(i, k) * std::conj(vectors(j, k));
    return out;
  }
};

namespace detail {

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kStateTol = 1e-12;

// Rotate column k so its first non-negligible component is real and positive.
inline void fix_phase(ComplexMatrix& vecs, std::size_t k) {
  for (std::size_t i = 0; i < vecs.dim(); ++i) {
    const double mag = std::abs(vecs(i, k));
    if (mag > 1e-15) {
      const cplx rot = std::conj(vecs(i, k)) / mag;
      for (std::size_t r = 0; r < vecs.dim(); ++r) vecs(r, k) *= rot;
      vecs(i, k) = mag;
      return;
    }
  }
}

inline EigenSystem eig_qubit(const ComplexMatrix& m) {
  const double p = m(0, 0).real();
  const double q = m(1, 1).real();
  const cplx c = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
  const double mean = 0.5 * (p + q);
  const double delta = 0.5 * (p - q);
  const double radius = std::hypot(delta, std::abs(c));

  EigenSystem es{{mean + radius, mean - radius}, ComplexMatrix(2)};
  if (std::abs(c) == 0.0) {
    const std::size_t top = p >= q ? 0 : 1;
    es.vectors(top, 0) = 1.0;
    es.vectors(1 - top, 1) = 1.0;
    return es;
  }
  // Both (c, R - delta) and (R + delta, conj c) span the top eigenspace; pick
  // the one without cancellation.
  cplx v0, v1;
  if (delta >= 0.0) {
    v0 = radius + delta;
    v1 = std::conj(c);
  } else {
    v0 = c;
    v1 = radius - delta;
  }
  const double norm = std::sqrt(std::norm(v0) + std::norm(v1));
  v0 /= norm;
  v1 /= norm;
  es.vectors(0, 0) = v0;
  es.vectors(1, 0) = v1;
  es.vectors(0, 1) = -std::conj(v1);
  es.vectors(1, 1) = std::conj(v0);
  fix_phase(es.vectors, 0);
  fix_phase(es.vectors, 1);
  return es;
}

inline EigenSystem eig_jacobi(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  ComplexMatrix a = m;
  ComplexMatrix v = ComplexMatrix::identity(n);
  double scale = 0.0;
  for (auto x : m.entries()) scale = std::max(scale, std::abs(x));

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (off <= 1e-32 * scale * scale || off == 0.0) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx x = a(p, q);
        const double ax = std::abs(x);
        if (ax <= 1e-300) continue;
        const cplx phase_conj = std::conj(x) / ax;  // e^{-i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * ax);
        const double t = theta == 0.0 ? 1.0
                                       : std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const cplx jpp = c, jpq = s, jqp = -s * phase_conj, jqq = c * phase_conj;

        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
  EigenSystem es{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    es.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) es.vectors(i, k) = v(i, order[k]);
    fix_phase(es.vectors, k);
  }
  return es;
}

// x^p - y^p for x = y + gap, 0 <= y, 0 <= gap, without cancellation.
inline double pow_gap(double y, double gap, double p) {
  if (gap <= 0.0) return 0.0;
  if (y <= 0.0) return std::pow(gap, p);
  return std::pow(y, p) * std::expm1(p * std::log1p(gap / y));
}

}  // namespace detail

/// Spectral decomposition of a Hermitian matrix. Eigenvalues come back in
/// descending order and each eigenvector has its first non-negligible
/// component real and positive.
inline EigenSystem eig_hermitian(const ComplexMatrix& m) {
  require(m.dim() > 0, ErrorCode::DimensionMismatch, "empty matrix");
  const double defect = m.hermiticity_defect();
  require(defect <= detail::kHermitianTol, ErrorCode::NonHermitian,
          "hermiticity defect " + std::to_string(defect));
  if (m.dim() == 1) return {{m(0, 0).real()}, ComplexMatrix::identity(1)};
  if (m.dim() == 2) return detail::eig_qubit(m);
  return detail::eig_jacobi(m);
}

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  /// Validates the state invariants (tolerance 1e-12) and throws
  /// StateInvariantViolated otherwise.
  static DensityMatrix from(ComplexMatrix m) {
    const double herm = m.hermiticity_defect();
    require(herm <= detail::kStateTol, ErrorCode::StateInvariantViolated,
            "not Hermitian (defect " + std::to_string(herm) + ")");
    const cplx tr = m.trace();
    require(std::abs(tr - 1.0) <= detail::kStateTol, ErrorCode::StateInvariantViolated,
            "trace " + std::to_string(tr.real()) + " != 1");
    const auto es = eig_hermitian(m);
    require(es.values.back() >= -detail::kStateTol, ErrorCode::StateInvariantViolated,
            "negative eigenvalue " + std::to_string(es.values.back()));
    return DensityMatrix(std::move(m));
  }

  /// For producers that guarantee the invariants analytically (channel maps
  /// with checked parameters). No validation is performed.
  static DensityMatrix trusted(ComplexMatrix m) { return DensityMatrix(std::move(m)); }

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.dim(); }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// Sum_k lambda_k^exponent |v_k><v_k|, with eigenvalues below zero clamped to
/// zero first. exponent must lie in (0, 2].
inline ComplexMatrix mat_func(const DensityMatrix& rho, double exponent) {
  require(exponent > 0.0 && exponent <= 2.0, ErrorCode::InvalidExponent,
          "exponent " + std::to_string(exponent) + " outside (0, 2]");
  const auto es = eig_hermitian(rho.matrix());
  const std::size_t n = rho.dim();
  if (n == 2) {
    // rho^p = l2^p I + (l1^p - l2^p) |v1><v1|, which keeps the off-diagonal
    // relative-accurate for nearly incoherent states.
    const double l1 = std::max(es.values[0], 0.0);
    const double l2 = std::max(es.values[1], 0.0);
    const double low = std::pow(l2, exponent);
    const double gap = detail::pow_gap(l2, l1 - l2, exponent);
    const cplx v0 = es.vectors(0, 0), v1 = es.vectors(1, 0);
    ComplexMatrix out(2);
    out(0, 0) = low + gap * std::norm(v0);
    out(1, 1) = low + gap * std::norm(v1);
    out(0, 1) = gap * v0 * std::conj(v1);
    out(1, 0) = std::conj(out(0, 1));
    return out;
  }
  ComplexMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = std::max(es.values[k], 0.0);
    if (lam == 0.0) continue;
    const double w = std::pow(lam, exponent);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += w * es.vectors(i, k) * std::conj(es.vectors(j, k));
  }
  return out;
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
inline double trace_norm(const ComplexMatrix& m) {
  const auto es = eig_hermitian(m);
  double s = 0.0;
  for (double v : es.values) s += std::abs(v);
  return s;
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  require(a.dim() == b.dim(), ErrorCode::DimensionMismatch,
          "trace distance between dim " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  return 0.5 * trace_norm(a.matrix() - b.matrix());
}

}  // namespace nmcoh
