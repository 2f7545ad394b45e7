#pragma once

#include <optional>
#include <string>
#include <vector>

namespace stbiot {

// Best-effort reader of the Linux powercap (RAPL) package counters.
class EnergyMeter {
 public:
  explicit EnergyMeter(std::string root = "/sys/class/powercap");

  bool available() const { return !zones_.empty(); }
  void start();
  // Joules since start(), or nullopt when no counter is readable.
  std::optional<double> stop() const;

 private:
  struct Zone {
    std::string energy_path;
    double max_uj = 0.0;
    double start_uj = 0.0;
  };
  std::vector<Zone> zones_;
};

}  // namespace stbiot
