#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "seqboed/version.hpp"

namespace seqboed {

using CsvValue = std::variant<long long, double, std::string>;

/// CSV emitter. UTF-8, '.' decimal point, doubles printed with %.17g so that
/// reruns from the same seed reproduce files byte for byte.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& experiment_kind,
            const std::vector<std::string>& columns)
      : out_(path, std::ios::binary), n_cols_(columns.size()) {
    if (!out_) throw std::runtime_error("cannot open CSV for writing: " + path);
    out_ << "# " << kCsvSchema << " " << experiment_kind << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out_ << ",";
      out_ << columns[i];
    }
    out_ << "\n";
  }

  void row(const std::vector<CsvValue>& values) {
    if (values.size() != n_cols_)
      throw std::runtime_error("CSV row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ",";
      if (std::holds_alternative<long long>(values[i])) {
        out_ << std::get<long long>(values[i]);
      } else if (std::holds_alternative<double>(values[i])) {
        out_ << format_double(std::get<double>(values[i]));
      } else {
        out_ << std::get<std::string>(values[i]);
      }
    }
    out_ << "\n";
  }

  static std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }

 private:
  std::ofstream out_;
  std::size_t n_cols_;
};

}  // namespace seqboed
