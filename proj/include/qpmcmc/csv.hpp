#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qpmcmc/version.hpp"

namespace qpmcmc {

inline std::string format_csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace detail {
inline void append_field(std::string& line, double v) { line += format_csv_double(v); }
inline void append_field(std::string& line, float v) { line += format_csv_double(v); }
inline void append_field(std::string& line, bool v) { line += v ? '1' : '0'; }
inline void append_field(std::string& line, const std::string& v) { line += v; }
inline void append_field(std::string& line, std::string_view v) { line += v; }
inline void append_field(std::string& line, const char* v) { line += v; }
template <class T>
  requires std::is_integral_v<T>
void append_field(std::string& line, T v) {
  line += std::to_string(v);
}
}  // namespace detail

// CSV emitter with the versioned schema comment on the first line:
//   # qpmcmc-sim v<version> <subcommand>
// Writing "-" sends rows to stdout.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::string_view subcommand) {
    if (path == "-") {
      out_ = &std::cout;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot open output file: " + path);
      out_ = file_.get();
    }
    *out_ << "# qpmcmc-sim v" << QPMCMC_SIM_VERSION << ' ' << subcommand << '\n';
  }

  void header(std::initializer_list<std::string_view> columns) {
    std::string line;
    bool first = true;
    for (auto c : columns) {
      if (!first) line += ',';
      line += c;
      first = false;
    }
    line += '\n';
    *out_ << line;
  }

  template <class... Fields>
  void row(const Fields&... fields) {
    std::string line;
    bool first = true;
    auto add = [&](const auto& f) {
      if (!first) line += ',';
      detail::append_field(line, f);
      first = false;
    };
    (add(fields), ...);
    line += '\n';
    *out_ << line;
  }

  // Preassembled line, for rows whose column count is only known at runtime.
  void raw_line(const std::string& line) { *out_ << line << '\n'; }

  void flush() { out_->flush(); }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_ = nullptr;
};

}  // namespace qpmcmc
