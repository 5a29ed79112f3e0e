#include "aerobat/sim/trajectory_log.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aerobat::sim {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

TrajectoryLog::TrajectoryLog(std::vector<std::string> columns, std::string config_hash)
    : columns_(std::move(columns)), config_hash_(std::move(config_hash)) {
  if (columns_.empty() || columns_.front() != "time")
    throw std::invalid_argument("trajectory log must start with a time column");
}

void TrajectoryLog::append(std::vector<double> row) {
  if (row.size() != columns_.size())
    throw std::invalid_argument("row width does not match the log schema");
  if (!rows_.empty() && !(row.front() > rows_.back().front()))
    throw std::invalid_argument("log timestamps must increase strictly");
  rows_.push_back(std::move(row));
}

std::size_t TrajectoryLog::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i] == name) return i;
  throw std::out_of_range("no log column named '" + name + "'");
}

std::vector<double> TrajectoryLog::series(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[c]);
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string TrajectoryLog::to_csv() const {
  std::ostringstream os;
  os << "# version=" << version_ << " config_hash=" << config_hash_ << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << csv_field(columns_[i]);
  os << "\n";
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
    os << "\n";
  }
  return os.str();
}

void TrajectoryLog::write_csv(const std::filesystem::path& path) const {
  write_file_atomic(path, to_csv());
}

TrajectoryLog TrajectoryLog::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string version = kVersion, hash;
  while (std::getline(in, line) && !line.empty() && line[0] == '#') {
    std::istringstream meta(line.substr(1));
    std::string token;
    while (meta >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = token.substr(0, eq), value = token.substr(eq + 1);
      if (key == "version") version = value;
      if (key == "config_hash") hash = value;
    }
  }
  TrajectoryLog log(split_csv_line(line), hash);
  log.version_ = version;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& f : split_csv_line(line)) {
      double v = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc()) throw std::invalid_argument("bad number '" + f + "' in CSV");
      row.push_back(v);
    }
    log.append(std::move(row));
  }
  return log;
}

TrajectoryLog TrajectoryLog::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_csv(ss.str());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace aerobat::sim
