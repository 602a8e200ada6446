#pragma once

// Dense complex linear algebra for the small operators used throughout the
// library: states, POVM elements and the Helstrom operator. Dimensions are
// tiny (2 and 4 in the polarization setting), so everything is stored as a
// flat row-major std::vector and algorithms favour clarity over blocking.

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

#include "qi/error.hpp"

namespace qi {

using Complex = std::complex<double>;

/// Largest dimension accepted by any constructor or composition.
inline constexpr std::size_t kMaxDim = 64;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

class ComplexMatrix {
 public:
  ComplexMatrix() : ComplexMatrix(1) {}

  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    detail::require(dim >= 1, "matrix dimension must be at least 1");
    detail::require(dim <= kMaxDim, "matrix dimension " + std::to_string(dim) + " exceeds maximum " +
                                        std::to_string(kMaxDim));
  }

  ComplexMatrix(std::size_t dim, std::vector<Complex> entries) : dim_(dim), data_(std::move(entries)) {
    detail::require(dim >= 1 && dim <= kMaxDim, "matrix dimension out of range: " + std::to_string(dim));
    detail::require(data_.size() == dim * dim, "entry count does not match dim*dim");
  }

  /// Row-major nested initializer, e.g. {{1, 0}, {0, 1}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) : ComplexMatrix(rows.size()) {
    std::size_t i = 0;
    for (const auto& row : rows) {
      detail::require(row.size() == dim_, "ragged matrix initializer");
      std::size_t j = 0;
      for (const auto& v : row) (*this)(i, j++) = v;
      ++i;
    }
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix zero(std::size_t dim) { return ComplexMatrix(dim); }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  /// |v><v| for a (not necessarily normalised) column vector.
  static ComplexMatrix outer(std::span<const Complex> v) {
    ComplexMatrix m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
    return m;
  }

  /// |i><i| in dimension dim.
  static ComplexMatrix basisProjector(std::size_t dim, std::size_t i) {
    detail::require(i < dim, "basis index out of range");
    ComplexMatrix m(dim);
    m(i, i) = 1.0;
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }

  Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * dim_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * dim_ + j]; }

  std::span<const Complex> entries() const noexcept { return data_; }

  Complex trace() const noexcept {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) m(i, j) = std::conj((*this)(j, i));
    return m;
  }

  double maxAbs() const noexcept {
    double best = 0.0;
    for (const auto& v : data_) best = std::max(best, std::abs(v));
    return best;
  }

  double frobeniusNorm() const noexcept {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    checkSameDim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    checkSameDim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) noexcept {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.checkSameDim(b);
    const std::size_t d = a.dim_;
    ComplexMatrix c(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < d; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void checkSameDim(const ComplexMatrix& o) const {
    detail::require(dim_ == o.dim_, "dimension mismatch: " + std::to_string(dim_) + " vs " + std::to_string(o.dim_));
  }

  std::size_t dim_;
  std::vector<Complex> data_;
};

/// Largest |a(i,j) - conj(a(j,i))|.
inline double hermiticityDefect(const ComplexMatrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i; j < a.dim(); ++j) worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
  return worst;
}

/// A complex matrix that is Hermitian to within kHermitianTol. The stored
/// entries are symmetrised so the contract holds exactly afterwards.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  explicit HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {
    const double defect = hermiticityDefect(m_);
    detail::require(defect <= kHermitianTol, "matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    for (std::size_t i = 0; i < m_.dim(); ++i) {
      m_(i, i) = m_(i, i).real();
      for (std::size_t j = i + 1; j < m_.dim(); ++j) {
        const Complex avg = 0.5 * (m_(i, j) + std::conj(m_(j, i)));
        m_(i, j) = avg;
        m_(j, i) = std::conj(avg);
      }
    }
  }

  static HermitianMatrix identity(std::size_t dim) { return HermitianMatrix(ComplexMatrix::identity(dim)); }

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.dim(); }
  double trace() const noexcept { return m_.trace().real(); }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix(a.m_ + b.m_);
  }
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix(a.m_ - b.m_);
  }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a) { return HermitianMatrix(s * a.m_); }

 private:
  ComplexMatrix m_;
};

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
  int sweeps = 0;

  std::vector<Complex> vector(std::size_t k) const {
    std::vector<Complex> v(eigenvectors.dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = eigenvectors(i, k);
    return v;
  }

  /// V diag(f(lambda)) V^dagger.
  template <typename F>
  ComplexMatrix reconstruct(F&& f) const {
    const std::size_t d = eigenvectors.dim();
    ComplexMatrix out(d);
    for (std::size_t k = 0; k < d; ++k) {
      const double w = f(eigenvalues[k]);
      if (w == 0.0) continue;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out(i, j) += w * eigenvectors(i, k) * std::conj(eigenvectors(j, k));
    }
    return out;
  }

  ComplexMatrix reconstruct() const {
    return reconstruct([](double x) { return x; });
  }
};

namespace detail {

inline double offDiagonalNorm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

inline constexpr double kJacobiTol = 1e-14;
inline constexpr int kJacobiMaxSweeps = 100;

/// Cyclic Jacobi eigensolver. Each rotation first removes the phase of the
/// pivot a(p,q) with diag(1, e^{-i phi}) and then applies the real symmetric
/// Jacobi rotation; the product is unitary and annihilates a(p,q).
inline EigenDecomposition eigenHermitian(const HermitianMatrix& h) {
  const std::size_t d = h.dim();
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::identity(d);
  const double scale = std::max(1.0, a.frobeniusNorm());

  int sweep = 0;
  double off = detail::offDiagonalNorm(a);
  while (off >= kJacobiTol * scale) {
    if (sweep == kJacobiMaxSweeps) {
      throw NumericFailure("Jacobi eigensolver did not converge after " + std::to_string(kJacobiMaxSweeps) +
                           " sweeps (off-diagonal residual " + std::to_string(off) + ")");
    }
    ++sweep;
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double r = std::abs(a(p, q));
        if (r == 0.0) continue;
        const Complex phase = a(p, q) / r;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex mphase = std::conj(phase);  // e^{-i phi}

        // A <- A W with W_pp = c, W_pq = s, W_qp = -s e^{-i phi}, W_qq = c e^{-i phi}
        for (std::size_t k = 0; k < d; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - s * mphase * akq;
          a(k, q) = s * akp + c * mphase * akq;
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - s * mphase * vkq;
          v(k, q) = s * vkp + c * mphase * vkq;
        }
        // A <- W^dagger A
        for (std::size_t k = 0; k < d; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
    off = detail::offDiagonalNorm(a);
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  EigenDecomposition out{std::vector<double>(d), ComplexMatrix(d), sweep};
  for (std::size_t k = 0; k < d; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < d; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

/// Positive semidefinite Hermitian matrix of unit trace.
class DensityMatrix {
 public:
  DensityMatrix() : DensityMatrix(ComplexMatrix{{1.0}}) {}

  explicit DensityMatrix(HermitianMatrix h) : h_(std::move(h)) {
    const double tr = h_.trace();
    detail::require(std::abs(tr - 1.0) <= kTraceTol, "density matrix trace must be 1, got " + std::to_string(tr));
    const double lowest = eigenHermitian(h_).eigenvalues.front();
    detail::require(lowest >= -kPsdTol,
                    "density matrix must be positive semidefinite, lowest eigenvalue " + std::to_string(lowest));
  }

  explicit DensityMatrix(ComplexMatrix m) : DensityMatrix(HermitianMatrix(std::move(m))) {}

  static DensityMatrix maximallyMixed(std::size_t dim) {
    return DensityMatrix(ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)));
  }

  /// |psi><psi| for a normalised ket.
  static DensityMatrix pure(std::span<const Complex> ket) { return DensityMatrix(ComplexMatrix::outer(ket)); }

  const HermitianMatrix& hermitian() const noexcept { return h_; }
  const ComplexMatrix& matrix() const noexcept { return h_.matrix(); }
  std::size_t dim() const noexcept { return h_.dim(); }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept { return h_(i, j); }

  operator const HermitianMatrix&() const noexcept { return h_; }  // NOLINT(google-explicit-constructor)

 private:
  HermitianMatrix h_;
};

/// Kronecker product with row-major composite index i*db + k for |i>|k>.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t da = a.dim();
  const std::size_t db = b.dim();
  detail::require(da * db <= kMaxDim, "tensor product dimension " + std::to_string(da * db) +
                                          " exceeds maximum " + std::to_string(kMaxDim));
  ComplexMatrix out(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) out(i * db + k, j * db + l) = aij * b(k, l);
    }
  return out;
}

inline HermitianMatrix tensor(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(tensor(a.matrix(), b.matrix()));
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(tensor(a.matrix(), b.matrix()));
}

/// Traces out the first tensor factor: (Tr_A m)(k,l) = sum_i m(i*dB + k, i*dB + l).
inline ComplexMatrix partialTraceFirst(const ComplexMatrix& m, std::size_t dimFirst, std::size_t dimSecond) {
  detail::require(dimFirst >= 1 && dimSecond >= 1 && m.dim() == dimFirst * dimSecond,
                  "partial trace: matrix dimension " + std::to_string(m.dim()) + " != " + std::to_string(dimFirst) +
                      "*" + std::to_string(dimSecond));
  ComplexMatrix out(dimSecond);
  for (std::size_t i = 0; i < dimFirst; ++i)
    for (std::size_t k = 0; k < dimSecond; ++k)
      for (std::size_t l = 0; l < dimSecond; ++l) out(k, l) += m(i * dimSecond + k, i * dimSecond + l);
  return out;
}

inline DensityMatrix partialTraceFirst(const DensityMatrix& rho, std::size_t dimFirst, std::size_t dimSecond) {
  return DensityMatrix(partialTraceFirst(rho.matrix(), dimFirst, dimSecond));
}

/// Sum of |eigenvalues|.
inline double traceNorm(const HermitianMatrix& h) {
  const auto eig = eigenHermitian(h);
  double s = 0.0;
  for (double x : eig.eigenvalues) s += std::abs(x);
  return s;
}

/// Re tr(a b).
inline double traceInner(const HermitianMatrix& a, const HermitianMatrix& b) {
  detail::require(a.dim() == b.dim(), "traceInner: dimension mismatch");
  // tr(ab) = sum_ij a(i,j) b(j,i)
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) s += (a(i, j) * b(j, i)).real();
  return s;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

}  // namespace qi
