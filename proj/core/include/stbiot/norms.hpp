#pragma once

#include <optional>
#include <vector>

#include "stbiot/forms.hpp"
#include "stbiot/manufactured.hpp"
#include "stbiot/slab.hpp"

namespace stbiot {

struct FieldErrors {
  double grad_u = 0.0;
  double v = 0.0;
  double p = 0.0;
};

struct ErrorReport {
  FieldErrors l2l2;   // L2(I; L2)
  FieldErrors linf;   // L_inf(I; L2), sampled
  FieldErrors lnode;  // l_inf(L2) at the slab end points
};

// Accumulates the three norm families slab by slab.
class ErrorAccumulator {
 public:
  // linf_samples = 0 disables the sampled L_inf norm.
  ErrorAccumulator(const Discretization& disc, const ManufacturedSolution& exact, int linf_samples = 100,
                   int time_points = -1);

  void add_slab(const TimeBasis& tb, const Vector& X);
  ErrorReport result() const;

  // Squared spatial L2 errors at time t for given spatial coefficient vectors.
  FieldErrors squared_errors(const Vector& u, const Vector& v, const Vector& p, double t) const;

 private:
  const Discretization* disc_;
  const ManufacturedSolution* exact_;
  int linf_samples_;
  int time_points_;
  FieldErrors l2sq_, linf_, lnode_;
  std::vector<Point> qp_;
  std::vector<double> qw_;
  ElementTable tv_, tq_;
};

ErrorReport error_norms(const Discretization& disc, const ManufacturedSolution& exact,
                        const std::vector<std::pair<TimeBasis, Vector>>& trajectory, int linf_samples = 100);

// EOC_i = log2(e_{i-1}/e_i); nullopt where undefined.
std::vector<std::optional<double>> compute_eoc(const std::vector<double>& errors);

}  // namespace stbiot
