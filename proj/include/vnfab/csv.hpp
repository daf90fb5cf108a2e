#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "vnfab/config.hpp"

// CSV emission with a reproducibility manifest. The manifest rides in '#'
// comment lines above the header row so CSV bodies stay byte-comparable
// across runs.

namespace vnfab {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct RunManifest {
  std::string subcommand;
  std::string config_path; // "(defaults)" when none
  std::string scenario;    // rendered argument summary
  std::uint64_t config_hash = 0;

  static RunManifest make(const std::string& subcommand, const std::string& config_path,
                          const Config& cfg, const std::string& scenario) {
    RunManifest m;
    m.subcommand = subcommand;
    m.config_path = config_path.empty() ? "(defaults)" : config_path;
    m.scenario = scenario;
    m.config_hash = fnv1a(config_to_json(cfg).dump());
    return m;
  }

  std::string header() const {
    std::ostringstream os;
    os << "# tool: vnfab " << kToolVersion << "\n";
    os << "# subcommand: " << subcommand << "\n";
    os << "# config: " << config_path << " (hash " << std::hex << config_hash << std::dec << ")\n";
    if (!scenario.empty()) os << "# scenario: " << scenario << "\n";
    return os.str();
  }
};

class CsvWriter {
public:
  CsvWriter(std::ostream& out, const RunManifest& manifest) : out_(out) {
    out_ << manifest.header();
  }

  void header(const std::vector<std::string>& columns) { row_of(columns); }

  template <typename... Ts>
  void row(const Ts&... vals) {
    bool first = true;
    ((out_ << (first ? "" : ","), first = false, put(vals)), ...);
    out_ << "\n";
  }

  void comment(const std::string& text) { out_ << "# " << text << "\n"; }

private:
  void row_of(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }
  void put(const std::string& s) { out_ << s; }
  void put(const char* s) { out_ << s; }
  void put(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    out_ << os.str();
  }
  template <typename T>
  void put(const T& v) { out_ << v; }

  std::ostream& out_;
};

} // namespace vnfab
