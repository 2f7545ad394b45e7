#include "stbiot/energy_meter.hpp"

#include <filesystem>
#include <fstream>

namespace stbiot {

namespace {

std::optional<double> read_number(const std::string& path) {
  std::ifstream f(path);
  double v = 0.0;
  if (!(f >> v)) return std::nullopt;
  return v;
}

}  // namespace

EnergyMeter::EnergyMeter(std::string root) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) return;
  for (const auto& e : fs::directory_iterator(root, ec)) {
    const std::string name = e.path().filename().string();
    // Top-level package zones only ("intel-rapl:0"), subzones are contained in them.
    if (name.rfind("intel-rapl:", 0) != 0 || name.find(':', 11) != std::string::npos) continue;
    const std::string energy = (e.path() / "energy_uj").string();
    const auto now = read_number(energy);
    if (!now) continue;
    const auto max = read_number((e.path() / "max_energy_range_uj").string());
    zones_.push_back({energy, max.value_or(0.0), *now});
  }
}

void EnergyMeter::start() {
  for (auto& z : zones_) z.start_uj = read_number(z.energy_path).value_or(z.start_uj);
}

std::optional<double> EnergyMeter::stop() const {
  if (zones_.empty()) return std::nullopt;
  double total = 0.0;
  for (const auto& z : zones_) {
    const auto now = read_number(z.energy_path);
    if (!now) return std::nullopt;
    double d = *now - z.start_uj;
    if (d < 0.0 && z.max_uj > 0.0) d += z.max_uj;  // counter wrapped
    total += d;
  }
  return total * 1e-6;
}

}  // namespace stbiot
