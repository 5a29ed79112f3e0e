#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace aerobat::sim {

inline constexpr const char* kVersion = "0.1.0";

// Fixed-schema table of samples; the first column is time and must increase
// strictly. Written as CSV with a leading comment line carrying metadata.
class TrajectoryLog {
public:
  TrajectoryLog() = default;
  explicit TrajectoryLog(std::vector<std::string> columns, std::string config_hash = {});

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  const std::string& config_hash() const { return config_hash_; }
  const std::string& version() const { return version_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  // Throws std::invalid_argument on a width mismatch or non-increasing time.
  void append(std::vector<double> row);
  // Index of a column; throws std::out_of_range if absent.
  std::size_t column(const std::string& name) const;
  std::vector<double> series(const std::string& name) const;

  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;
  static TrajectoryLog from_csv(const std::string& text);
  static TrajectoryLog read_csv(const std::filesystem::path& path);

private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
  std::string config_hash_;
  std::string version_ = kVersion;
};

// Quotes a CSV field when it contains a comma, quote or line break.
std::string csv_field(const std::string& s);

// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace aerobat::sim
