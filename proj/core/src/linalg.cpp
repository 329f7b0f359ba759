#include "sparsalloc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sparsalloc/errors.hpp"

namespace sparsalloc {

namespace {

std::string shape_str(const DenseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (!std::isfinite(fill)) throw DomainError("DenseMatrix: non-finite fill value");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw ShapeError("DenseMatrix: " + std::to_string(data_.size()) + " entries for " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw DomainError("DenseMatrix: non-finite entry");
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("DenseMatrix::from_rows: ragged rows");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return DenseMatrix(r, c, std::move(entries));
}

bool DenseMatrix::all_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: " + shape_str(a) + " times " + shape_str(b));
  }
  DenseMatrix out(a.rows(), b.cols());
  const std::size_t n = b.cols();
  auto o = out.values();
  auto bv = b.values();
  // i-k-j order keeps the inner loop contiguous in both b and out.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* orow = o.data() + i * n;
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* brow = bv.data() + k * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

DenseMatrix transpose(const DenseMatrix& m) {
  DenseMatrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) throw ShapeError("subtract: " + shape_str(a) + " vs " + shape_str(b));
  DenseMatrix out = a;
  auto o = out.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bv[i];
  return out;
}

DenseMatrix scaled(const DenseMatrix& m, double alpha) {
  DenseMatrix out = m;
  for (double& v : out.values()) v *= alpha;
  return out;
}

DenseMatrix column_block(const DenseMatrix& m, std::size_t first, std::size_t count) {
  if (first + count > m.cols()) throw ShapeError("column_block: range exceeds " + shape_str(m));
  DenseMatrix out(m.rows(), count);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < count; ++j) out(i, j) = m(i, first + j);
  return out;
}

double frob_norm_sq(const DenseMatrix& m) {
  double s = 0.0;
  for (double v : m.values()) s += v * v;
  return s;
}

double frob_dist_sq(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) throw ShapeError("frob_dist_sq: " + shape_str(a) + " vs " + shape_str(b));
  auto av = a.values();
  auto bv = b.values();
  double s = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    const double d = av[i] - bv[i];
    s += d * d;
  }
  return s;
}

std::vector<double> singular_values(const DenseMatrix& m) {
  if (m.empty()) return {};
  // Work on the orientation with fewer columns; the columns are stored
  // contiguously so rotations touch unit-stride memory.
  const bool use_transpose = m.cols() > m.rows();
  const DenseMatrix& src = m;
  const std::size_t ncols = use_transpose ? m.rows() : m.cols();
  const std::size_t len = use_transpose ? m.cols() : m.rows();

  std::vector<std::vector<double>> col(ncols, std::vector<double>(len));
  for (std::size_t c = 0; c < ncols; ++c)
    for (std::size_t k = 0; k < len; ++k) col[c][k] = use_transpose ? src(c, k) : src(k, c);

  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int kMaxSweeps = 80;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < ncols; ++p) {
      for (std::size_t q = p + 1; q < ncols; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        const double* cp = col[p].data();
        const double* cq = col[q].data();
        for (std::size_t k = 0; k < len; ++k) {
          alpha += cp[k] * cp[k];
          beta += cq[k] * cq[k];
          gamma += cp[k] * cq[k];
        }
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        double* wp = col[p].data();
        double* wq = col[q].data();
        for (std::size_t k = 0; k < len; ++k) {
          const double xp = wp[k];
          const double xq = wq[k];
          wp[k] = c * xp - s * xq;
          wq[k] = s * xp + c * xq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(ncols);
  for (std::size_t c = 0; c < ncols; ++c) {
    double s = 0.0;
    for (double v : col[c]) s += v * v;
    sv[c] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

double sigma_min(const DenseMatrix& m) {
  if (m.empty() || m.all_zero()) throw DomainError("sigma_min: matrix has no non-zero entry");
  const auto sv = singular_values(m);
  const double tol = kRankTolerance * sv.front();
  double smallest = sv.front();
  for (double s : sv) {
    if (s > tol) smallest = s;
  }
  return smallest;
}

std::size_t numerical_rank(const DenseMatrix& m) {
  if (m.empty() || m.all_zero()) return 0;
  const auto sv = singular_values(m);
  const double tol = kRankTolerance * sv.front();
  return static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [&](double s) { return s > tol; }));
}

Lemma1Gap lemma1_gap(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("lemma1_gap: " + shape_str(a) + " times " + shape_str(b));
  const double smin = sigma_min(a);
  return {frob_norm_sq(matmul(a, b)), smin * smin * frob_norm_sq(b)};
}

}  // namespace sparsalloc
