#include "stbiot/perf.hpp"

#include <algorithm>
#include <numeric>

#include "stbiot/common.hpp"

namespace stbiot {

int PerfReport::peak() const {
  int best = -1;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].P && (best < 0 || *rows[i].P > *rows[best].P)) best = static_cast<int>(i);
  return best;
}

PerfReport perf_model(std::vector<int> n, const std::vector<double>& t_wall,
                      const std::vector<std::optional<double>>& energy) {
  if (n.empty()) throw ConfigError("perf_model: no measurements");
  if (t_wall.size() != n.size() || (!energy.empty() && energy.size() != n.size()))
    throw ConfigError("perf_model: column lengths differ");
  std::vector<std::size_t> order(n.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return n[a] < n[b]; });

  const bool has_e = !energy.empty() && energy[order[0]].has_value();
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(t_wall[i] > 0.0)) throw ConfigError("perf_model: wall time must be positive");
    if (!energy.empty() && energy[i].has_value() != has_e)
      throw ConfigError("perf_model: energy column must be complete or absent");
    if (has_e && !(*energy[i] > 0.0)) throw ConfigError("perf_model: energy must be positive");
  }
  PerfReport rep;
  const double t0 = t_wall[order[0]];
  const double e0 = has_e ? *energy[order[0]] : 0.0;
  for (auto i : order) {
    PerfRow row;
    row.n = n[i];
    row.t_wall = t_wall[i];
    row.S = t0 / t_wall[i];
    if (has_e) {
      row.energy = energy[i];
      row.R = *energy[i] / e0;
      row.P = row.S / *row.R;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace stbiot
