#pragma once

#include "stbiot/basis.hpp"
#include "stbiot/forms.hpp"
#include "stbiot/linear_operator.hpp"

namespace stbiot {

enum class Formulation { dsa, ds };

const char* to_string(Formulation f);

// w0_ab = (tau/2) w_a delta_ab, w1_ab = w_a chi_b'(t_a) + chi_b(t+) chi_a(t+), reference time derivative.
struct TemporalWeights {
  DenseMatrix w0;
  DenseMatrix w1;
  Vector left;  // chi_a(t_{n-1}^+)
  double tau = 0.0;
};

TemporalWeights temporal_weights(const TimeBasis& tb);

// End-of-slab (or initial) values.
struct TraceState {
  double t = 0.0;
  Vector u, v, p;
};

// A_n = w0 (x) X + w1 (x) Y with spatial 3x3 field blocks X, Y.
class SlabOperator : public LinearOperator {
 public:
  SlabOperator() = default;
  SlabOperator(const FormMatrices& forms, const TemporalWeights& tw, Formulation formulation);

  int size() const override { return n_radau_ * block_; }
  int block_size() const { return block_; }
  int n_radau() const { return n_radau_; }
  void apply(const Vector& x, Vector& y) const override;
  // b - A x accumulated in long double, rounded once.
  Vector residual_extended(const Vector& x, const Vector& b) const;
  DenseMatrix submatrix(const std::vector<int>& idx) const override;

  // Dense spatial submatrices X[s, s], Y[s, s] for sorted spatial indices s.
  void spatial_submatrices(const std::vector<int>& s, DenseMatrix& Xs, DenseMatrix& Ys) const;

  SparseMatrix assemble() const;
  const SparseMatrix& X() const { return X_; }
  const SparseMatrix& Y() const { return Y_; }
  const TemporalWeights& weights() const { return tw_; }
  Formulation formulation() const { return formulation_; }

 private:
  SparseMatrix X_, Y_;
  TemporalWeights tw_;
  Formulation formulation_ = Formulation::dsa;
  int R_ = 0, S_ = 0, block_ = 0, n_radau_ = 0;
};

SlabOperator assemble_slab_matrix(const FormMatrices& forms, const TimeBasis& tb, Formulation formulation);

Vector assemble_slab_rhs(const ProblemData& data, const TraceState& prev, const Discretization& disc,
                         const FormMatrices& forms, const TimeBasis& tb, Formulation formulation);

TraceState project_initial_data(const ProblemData& data, const Discretization& disc, double t0);

// Spatial blocks of Radau point m in a slab vector.
struct SlabBlocks {
  Vector v, u, p;
};
SlabBlocks extract_blocks(const DofMap& dofs, const Vector& X, int m);

}  // namespace stbiot
