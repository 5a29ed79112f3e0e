#include "aerobat/sim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace aerobat::sim {

std::string Metrics::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  put("settling_time_s", settling_time);
  put("rms_position_error_m", rms_position_error);
  put("rms_attitude_error_deg", rms_attitude_error_deg);
  put("wingtip_deviation", wingtip_deviation);
  put("energy_drift", energy_drift);
  put("max_relative_error", max_relative_error);
  return j.dump(2);
}

double rms_after(std::span<const double> time, std::span<const Eigen::Vector3d> error, double t_start) {
  if (time.size() != error.size()) throw std::invalid_argument("rms_after: length mismatch");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < time.size(); ++i)
    if (time[i] >= t_start) {
      sum += error[i].squaredNorm();
      ++n;
    }
  if (n == 0) throw std::invalid_argument("rms_after: no samples after the transient window");
  return std::sqrt(sum / static_cast<double>(n));
}

double settling_time(std::span<const double> time, std::span<const double> signal, double band) {
  if (time.size() != signal.size() || time.empty())
    throw std::invalid_argument("settling_time: bad series");
  const double final = signal.back();
  const double tol = band * std::abs(final - signal.front());
  for (std::size_t i = signal.size(); i-- > 0;)
    if (std::abs(signal[i] - final) > tol) return i + 1 < time.size() ? time[i + 1] : time.back();
  return time.front();
}

double cycle_deviation(const std::vector<std::vector<Eigen::Vector2d>>& cycles, double span) {
  double worst = 0.0;
  for (std::size_t k = 1; k < cycles.size(); ++k) {
    if (cycles[k].size() != cycles[k - 1].size())
      throw std::invalid_argument("cycle_deviation: cycles differ in length");
    for (std::size_t i = 0; i < cycles[k].size(); ++i)
      worst = std::max(worst, (cycles[k][i] - cycles[k - 1][i]).norm());
  }
  return worst / span;
}

}  // namespace aerobat::sim
