#pragma once

#include <vector>

#include "stbiot/common.hpp"

namespace stbiot {

class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual int size() const = 0;
  virtual void apply(const Vector& x, Vector& y) const = 0;
  // Dense principal submatrix A[idx, idx]; idx sorted ascending.
  virtual DenseMatrix submatrix(const std::vector<int>& idx) const = 0;

  Vector operator*(const Vector& x) const {
    Vector y;
    apply(x, y);
    return y;
  }
};

class SparseOperator : public LinearOperator {
 public:
  explicit SparseOperator(SparseMatrix A) : A_(std::move(A)) {}
  int size() const override { return static_cast<int>(A_.rows()); }
  void apply(const Vector& x, Vector& y) const override { y = A_ * x; }
  DenseMatrix submatrix(const std::vector<int>& idx) const override;
  const SparseMatrix& matrix() const { return A_; }

 private:
  SparseMatrix A_;
};

class DenseOperator : public LinearOperator {
 public:
  explicit DenseOperator(DenseMatrix A) : A_(std::move(A)) {}
  int size() const override { return static_cast<int>(A_.rows()); }
  void apply(const Vector& x, Vector& y) const override { y = A_ * x; }
  DenseMatrix submatrix(const std::vector<int>& idx) const override {
    DenseMatrix S(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) S(i, j) = A_(idx[i], idx[j]);
    return S;
  }
  const DenseMatrix& matrix() const { return A_; }

 private:
  DenseMatrix A_;
};

// Rows idx of a row-major sparse matrix restricted to columns idx.
DenseMatrix extract_submatrix(const SparseMatrix& A, const std::vector<int>& idx);

}  // namespace stbiot
