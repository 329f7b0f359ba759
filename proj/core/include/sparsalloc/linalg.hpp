#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace sparsalloc {

// Row-major dense matrix of finite doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  // Throws ShapeError if entries.size() != rows*cols and DomainError on a
  // non-finite entry.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }

  bool all_zero() const;
  bool same_shape(const DenseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& m);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scaled(const DenseMatrix& m, double alpha);
// Keeps columns [first, first + count).
DenseMatrix column_block(const DenseMatrix& m, std::size_t first, std::size_t count);

double frob_norm_sq(const DenseMatrix& m);
// ||a - b||_F^2 without materialising the difference.
double frob_dist_sq(const DenseMatrix& a, const DenseMatrix& b);

// Singular values in descending order, computed by one-sided cyclic Jacobi
// rotations over the columns of the narrower orientation of m, i.e. an
// implicit Jacobi diagonalisation of the smaller Gram matrix.
std::vector<double> singular_values(const DenseMatrix& m);

// Relative rank tolerance: singular values at or below
// kRankTolerance * sigma_max count as zero.
inline constexpr double kRankTolerance = 1e-10;

// Smallest singular value above the rank tolerance. DomainError on an
// all-zero (or empty) matrix.
double sigma_min(const DenseMatrix& m);

std::size_t numerical_rank(const DenseMatrix& m);

struct Lemma1Gap {
  double lhs = 0.0;  // ||AB||_F^2
  double rhs = 0.0;  // sigma_min(A)^2 ||B||_F^2
};

// Both sides of the product lower bound ||AB||^2 >= sigma_min(A)^2 ||B||^2.
// The inequality is guaranteed when A has full column rank.
Lemma1Gap lemma1_gap(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace sparsalloc
