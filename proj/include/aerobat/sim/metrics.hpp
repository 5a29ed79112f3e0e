#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace aerobat::sim {

struct Metrics {
  std::optional<double> settling_time;          // s, 2% band
  std::optional<double> rms_position_error;     // m
  std::optional<double> rms_attitude_error_deg;
  std::optional<double> wingtip_deviation;      // fraction of wingspan
  std::optional<double> energy_drift;           // fraction
  std::optional<double> max_relative_error;     // oracle comparisons

  // Only the populated fields are emitted.
  std::string to_json() const;
};

// RMS of per-sample vector norms over samples with time >= t_start.
double rms_after(std::span<const double> time, std::span<const Eigen::Vector3d> error, double t_start);

// Time after which |signal - final| stays within band * |step| for good,
// where step = final - signal[0]. Returns the first timestamp if it never leaves.
double settling_time(std::span<const double> time, std::span<const double> signal,
                     double band = 0.02);

// Largest distance between corresponding samples of any cycle and the cycle
// before it, divided by the span. Cycles must have equal sample counts.
double cycle_deviation(const std::vector<std::vector<Eigen::Vector2d>>& cycles, double span);

}  // namespace aerobat::sim
