#pragma once

#include "ternalg/io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace ternalg::cli {

using json = nlohmann::json;

struct Verdict {
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;

  static Verdict check(double residual, double tolerance) { return {residual <= tolerance, residual, tolerance}; }
};

inline json to_json(const Verdict& v) {
  return json{{"status", v.pass ? "pass" : "fail"}, {"residual", v.residual}, {"tolerance", v.tolerance}};
}

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

/// Machine-readable outcome of one CLI command. Keys serialize sorted; the
/// "timing" member is the only non-deterministic part.
struct RunReport {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, sha256
  std::map<std::string, Verdict> verdicts;
  json properties = json::object();
  json outputs = json::object();
  std::vector<std::string> notes;
  double seconds = 0.0;

  void add_input(const std::string& path) { inputs.emplace_back(path, sha256_hex(io::read_text(path))); }

  bool all_pass() const {
    for (const auto& [name, v] : verdicts)
      if (!v.pass) return false;
    return true;
  }

  int exit_code() const { return all_pass() ? 0 : 1; }

  json to_json() const {
    json in = json::array();
    for (const auto& [path, digest] : inputs) in.push_back({{"path", path}, {"sha256", digest}});
    json v = json::object();
    for (const auto& [name, verdict] : verdicts) v[name] = cli::to_json(verdict);
    return json{{"command", command},       {"inputs", in},   {"verdicts", v},
                {"properties", properties}, {"outputs", outputs}, {"notes", notes},
                {"timing", {{"seconds", seconds}}}};
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "command: " << command << "\n";
    for (const auto& [path, digest] : inputs) os << "input:   " << path << " (sha256 " << digest.substr(0, 12) << ")\n";
    for (const auto& [name, v] : verdicts)
      os << (v.pass ? "PASS " : "FAIL ") << name << "  residual=" << v.residual << "  tolerance=" << v.tolerance << "\n";
    for (const auto& [key, value] : properties.items()) os << "  " << key << ": " << value.dump() << "\n";
    for (const auto& [key, value] : outputs.items()) {
      const std::string s = value.dump();
      os << "  -> " << key << ": " << (s.size() > 200 ? s.substr(0, 200) + "..." : s) << "\n";
    }
    for (const auto& n : notes) os << "note: " << n << "\n";
    os << "time: " << seconds << " s\n";
    return os.str();
  }
};

/// Report document with the timing member removed.
inline json without_timing(json report) {
  if (report.is_object()) report.erase("timing");
  return report;
}

}  // namespace ternalg::cli
