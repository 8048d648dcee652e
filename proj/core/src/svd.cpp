#include "eigenfeat/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eigenfeat/error.hpp"

namespace eigenfeat {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Plane rotation applied to columns p, q: (p, q) <- (c p - s q, s p + c q).
void rotate_columns(Matrix& m, std::size_t p, std::size_t q, double c, double s) {
  auto cp = m.column(p);
  auto cq = m.column(q);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double a = cp[i];
    const double b = cq[i];
    cp[i] = c * a - s * b;
    cq[i] = s * a + c * b;
  }
}

std::vector<std::size_t> descending_order(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

/// One-sided Jacobi on the columns of w, accumulating the same rotations in v.
void hestenes(Matrix& w, Matrix& v, double floor_norm2) {
  const std::size_t m = w.cols();
  for (std::size_t sweep = 0; sweep < 30; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < m; ++p)
      for (std::size_t q = p + 1; q < m; ++q) {
        const double alpha = dot(w.column(p), w.column(p));
        const double beta = dot(w.column(q), w.column(q));
        if (alpha <= floor_norm2 || beta <= floor_norm2) continue;
        const double gamma = dot(w.column(p), w.column(q));
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate_columns(w, p, q, c, s);
        rotate_columns(v, p, q, c, s);
        rotated = true;
      }
    if (!rotated) return;
  }
}

/// Appends standard basis vectors, orthogonalized against the first `filled`
/// columns, until u is full.
void complete_basis(Matrix& u, std::size_t filled) {
  const std::size_t n = u.rows();
  std::vector<double> cand(n);
  for (std::size_t e = 0; e < n && filled < u.cols(); ++e) {
    std::fill(cand.begin(), cand.end(), 0.0);
    cand[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t j = 0; j < filled; ++j) {
        const double d = dot(u.column(j), cand);
        auto col = u.column(j);
        for (std::size_t i = 0; i < n; ++i) cand[i] -= d * col[i];
      }
    const double norm = std::sqrt(dot(cand, cand));
    if (norm < 1e-6) continue;
    auto col = u.column(filled);
    for (std::size_t i = 0; i < n; ++i) col[i] = cand[i] / norm;
    ++filled;
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols), data_(std::move(column_major)) {
  require(data_.size() == rows * cols, ErrorCode::shape_mismatch,
          "matrix data length " + std::to_string(data_.size()) + " does not match " + std::to_string(rows) + "x" +
              std::to_string(cols));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::frobenius_norm() const { return std::sqrt(dot(data_, data_)); }

Matrix multiply(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), ErrorCode::shape_mismatch, "matrix product dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj == 0.0) continue;
      auto ak = a.column(k);
      auto cj = c.column(j);
      for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
    }
  return c;
}

Matrix gram(const Matrix& x) {
  const std::size_t m = x.cols();
  Matrix g(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      const double d = dot(x.column(i), x.column(j));
      g(i, j) = d;
      g(j, i) = d;
    }
  return g;
}

EigenDecomposition jacobi_eigh(const Matrix& s, double tol, std::size_t max_sweeps) {
  require(s.rows() == s.cols(), ErrorCode::shape_mismatch, "jacobi_eigh needs a square matrix");
  const std::size_t n = s.rows();
  const double norm = s.frobenius_norm();
  require(std::isfinite(norm), ErrorCode::degenerate_input, "jacobi_eigh input is not finite");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      require(std::abs(s(i, j) - s(j, i)) <= 1e-12 * std::max(norm, 1.0), ErrorCode::invalid_argument,
              "jacobi_eigh input is not symmetric");

  Matrix a = s;
  Matrix q = Matrix::identity(n);
  auto off_norm = [&] {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) sum += a(i, j) * a(i, j);
    return std::sqrt(sum);
  };

  EigenDecomposition out;
  const double threshold = tol * norm;
  while (off_norm() >= threshold && threshold > 0.0) {
    if (out.sweeps == max_sweeps)
      fail(ErrorCode::non_convergence, "jacobi_eigh did not converge in " + std::to_string(max_sweeps) + " sweeps");
    ++out.sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t r = p + 1; r < n; ++r) {
        const double apr = a(p, r);
        if (apr == 0.0) continue;
        const double tau = (a(r, r) - a(p, p)) / (2.0 * apr);
        const double t = std::copysign(1.0, tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        // A <- J^T A J with J the rotation in the (p, r) plane
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akr = a(k, r);
          a(k, p) = c * akp - sn * akr;
          a(k, r) = sn * akp + c * akr;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double ark = a(r, k);
          a(p, k) = c * apk - sn * ark;
          a(r, k) = sn * apk + c * ark;
        }
        rotate_columns(q, p, r, c, sn);
      }
  }

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
  const auto order = descending_order(diag);
  out.vectors = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values.push_back(diag[order[i]]);
    std::copy_n(q.column(order[i]).begin(), n, out.vectors.column(i).begin());
  }
  return out;
}

SvdResult svd_via_gram(const Matrix& x) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  require(n >= 1 && m >= 1, ErrorCode::invalid_argument, "svd_via_gram needs a non-empty matrix");
  require(std::isfinite(x.frobenius_norm()), ErrorCode::degenerate_input, "svd_via_gram input is not finite");
  const std::size_t r = std::min(n, m);

  const EigenDecomposition eig = jacobi_eigh(gram(x));
  Matrix v = eig.vectors;
  Matrix w = multiply(x, v);
  const double sigma1_estimate = std::sqrt(std::max(eig.values.front(), 0.0));
  const double floor_sigma = 1e-10 * sigma1_estimate;
  hestenes(w, v, floor_sigma * floor_sigma);

  std::vector<double> norms(m);
  for (std::size_t j = 0; j < m; ++j) norms[j] = std::sqrt(dot(w.column(j), w.column(j)));
  const auto order = descending_order(norms);

  SvdResult out;
  out.u = Matrix(n, r);
  out.v = Matrix(m, r);
  const double sigma1 = norms[order.front()];
  for (std::size_t i = 0; i < r; ++i) {
    const std::size_t j = order[i];
    out.sigma.push_back(norms[j]);
    std::copy_n(v.column(j).begin(), m, out.v.column(i).begin());
    if (sigma1 > 0.0 && norms[j] > 1e-10 * sigma1) {
      auto u = out.u.column(i);
      auto wj = w.column(j);
      for (std::size_t k = 0; k < n; ++k) u[k] = wj[k] / norms[j];
      ++out.rank;
    }
  }
  complete_basis(out.u, out.rank);
  return out;
}

Matrix truncate(const SvdResult& svd, std::size_t r) {
  require(r >= 1 && r <= svd.rank, ErrorCode::invalid_argument,
          "truncation rank " + std::to_string(r) + " outside [1, " + std::to_string(svd.rank) + "]");
  Matrix out(svd.u.rows(), svd.v.rows());
  for (std::size_t i = 0; i < r; ++i) {
    auto u = svd.u.column(i);
    for (std::size_t k = 0; k < svd.v.rows(); ++k) {
      const double coef = svd.sigma[i] * svd.v(k, i);
      auto col = out.column(k);
      for (std::size_t j = 0; j < u.size(); ++j) col[j] += coef * u[j];
    }
  }
  return out;
}

std::vector<double> rank1_column(const SvdResult& svd, std::size_t k) {
  require(!svd.sigma.empty() && k < svd.v.rows(), ErrorCode::invalid_argument,
          "column index " + std::to_string(k) + " out of range");
  std::vector<double> out(svd.u.rows());
  const double coef = svd.sigma[0] * svd.v(k, 0);
  auto u = svd.u.column(0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = coef * u[i];
  return out;
}

std::vector<double> canonical_sign(std::span<const double> u) {
  double sum = 0.0, abs_sum = 0.0;
  for (const double x : u) {
    sum += x;
    abs_sum += std::abs(x);
  }
  require(abs_sum > 0.0, ErrorCode::degenerate_input, "canonical_sign of a zero vector");
  bool flip;
  if (std::abs(sum) > 1e-12 * abs_sum) {
    flip = sum < 0.0;
  } else {
    const auto first = std::find_if(u.begin(), u.end(), [](double x) { return x != 0.0; });
    flip = *first < 0.0;
  }
  std::vector<double> out(u.begin(), u.end());
  if (flip)
    for (auto& x : out) x = -x;
  return out;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size() && a.size() >= 2, ErrorCode::invalid_argument,
          "pearson needs two vectors of equal length >= 2");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  require(va > 0.0 && vb > 0.0, ErrorCode::degenerate_input, "pearson of a constant vector");
  return std::clamp(cov / std::sqrt(va * vb), -1.0, 1.0);
}

}  // namespace eigenfeat
