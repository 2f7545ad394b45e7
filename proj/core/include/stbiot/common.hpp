#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace stbiot {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

// Points are always stored with three components; unused trailing ones are 0.
using Point = std::array<double, 3>;
using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent user input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Mesh construction failures (non-conforming cells, overlaps).
class MeshError : public Error {
 public:
  using Error::Error;
};

// Iterative solver did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int slab, int iterations, double residual)
      : Error(what), slab_(slab), iterations_(iterations), residual_(residual) {}
  int slab() const { return slab_; }
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int slab_;
  int iterations_;
  double residual_;
};

}  // namespace stbiot
