#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace spiralbound::csv {

/// 17 significant digits, locale-independent; round-trips any double.
inline std::string format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format(std::uint64_t v) { return std::to_string(v); }
inline std::string format(int v) { return std::to_string(v); }
inline std::string format(const std::string& v) { return v; }
inline std::string format(const char* v) { return v; }

/// Comma-separated table with a provenance comment and a header row.
class Writer {
 public:
  Writer(const std::string& path, const std::vector<std::string>& header,
         std::uint64_t config_hash)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("csv: cannot open " + path);
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx", (unsigned long long)config_hash);
    out_ << "# config_hash=" << hash << "\n";
    write_row_(header);
  }

  template <class... Ts>
  void row(const Ts&... vals) {
    std::vector<std::string> cells{format(vals)...};
    write_row_(cells);
  }

  void row_cells(const std::vector<std::string>& cells) { write_row_(cells); }

 private:
  void write_row_(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }
  std::ofstream out_;
};

}  // namespace spiralbound::csv
