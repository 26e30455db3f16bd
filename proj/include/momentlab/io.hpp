#pragma once

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "momentlab/ff_core.hpp"

namespace momentlab {

/// 17 significant digits: round-trips every double.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::int64_t> parse_int_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    out.push_back(std::stoll(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad integer '" + item + "' in list");
  }
  return out;
}

/// Fixed column order; each row is pushed field by field.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out), width_(header.size()) {
    write(header);
  }

  void row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) throw std::logic_error("CsvWriter: row width mismatch");
    write(fields);
  }

 private:
  void write(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i];
    out_ << '\n';
  }

  std::ostream& out_;
  std::size_t width_;
};

/// A parsed invocation: global options, subcommand path, then the options
/// given to the innermost subcommands. Serializes back to an equivalent argv.
struct RunConfig {
  using Options = std::vector<std::pair<std::string, std::string>>;  // long name without dashes; "" for flags

  Options global;
  std::vector<std::string> command;
  Options options;

  [[nodiscard]] std::vector<std::string> to_argv() const {
    std::vector<std::string> argv;
    auto push = [&argv](const Options& opts) {
      for (const auto& [k, v] : opts) {
        argv.push_back("--" + k);
        if (!v.empty()) argv.push_back(v);
      }
    };
    push(global);
    argv.insert(argv.end(), command.begin(), command.end());
    push(options);
    return argv;
  }

  [[nodiscard]] std::string to_command_line(const std::string& program = "momentlab") const {
    std::string s = program;
    for (const auto& a : to_argv()) s += " " + a;
    return s;
  }

  [[nodiscard]] const std::string* find(const std::string& key) const {
    for (const auto* opts : {&global, &options}) {
      for (const auto& [k, v] : *opts) {
        if (k == key) return &v;
      }
    }
    return nullptr;
  }

  bool operator==(const RunConfig&) const = default;
};

}  // namespace momentlab
