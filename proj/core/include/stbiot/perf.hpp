#pragma once

#include <optional>
#include <vector>

namespace stbiot {

struct PerfRow {
  int n = 0;
  double t_wall = 0.0;
  std::optional<double> energy;
  double S = 1.0;
  std::optional<double> R;
  std::optional<double> P;
};

struct PerfReport {
  std::vector<PerfRow> rows;
  // Row index with the largest productivity, or -1 without energies.
  int peak() const;
};

// S = t(n_min)/t(n), R = E(n)/E(n_min), P = S/R. Rows are sorted by n; the first is n_min.
// Energies are all present or all absent.
PerfReport perf_model(std::vector<int> n, const std::vector<double>& t_wall,
                      const std::vector<std::optional<double>>& energy);

}  // namespace stbiot
