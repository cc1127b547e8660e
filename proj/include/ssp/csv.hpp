//
// Copyright 2026 The ssp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
#pragma once

#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ssp/error.hpp"
#include "ssp/model.hpp"

namespace ssp {

struct CsvOptions {
  char delimiter = ',';
  bool has_header = true;
};

namespace detail {

inline std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == delim) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

inline double parse_real(std::string_view s, std::size_t line_no) {
  const char* b = s.data();
  const char* e = b + s.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  while (e > b && (*(e - 1) == ' ' || *(e - 1) == '\t')) --e;
  double v = 0.0;
  const auto res = std::from_chars(b, e, v);
  require(res.ec == std::errc() && res.ptr == e,
          "csv: cannot parse '" + std::string(s) + "' as a real on line " +
              std::to_string(line_no));
  return v;
}

}  // namespace detail

inline Dataset read_csv(std::istream& in, const CsvOptions& opt = {}) {
  std::vector<std::string> labels;
  std::vector<double> values;
  std::size_t cols = 0, rows = 0, line_no = 0;
  std::string line;
  bool header_pending = opt.has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = detail::split_line(line, opt.delimiter);
    if (header_pending) {
      header_pending = false;
      labels.assign(fields.begin(), fields.end());
      cols = fields.size();
      continue;
    }
    if (cols == 0) cols = fields.size();
    require(fields.size() == cols, "csv: ragged row on line " + std::to_string(line_no));
    for (const auto& f : fields) values.push_back(detail::parse_real(f, line_no));
    ++rows;
  }
  require(rows >= 1 && cols >= 1, "csv: no data rows found");
  Dataset d;
  d.rows = rows;
  d.cols = cols;
  d.values = std::move(values);
  if (labels.empty()) {
    labels.resize(cols);
    for (std::size_t j = 0; j < cols; ++j) labels[j] = "c" + std::to_string(j);
  }
  d.labels = std::move(labels);
  return d;
}

inline Dataset read_csv_file(const std::string& path, const CsvOptions& opt = {}) {
  std::ifstream in(path);
  require(in.good(), "csv: cannot open '" + path + "'");
  return read_csv(in, opt);
}

inline void write_csv(std::ostream& out, const Dataset& d, const CsvOptions& opt = {}) {
  if (opt.has_header) {
    for (std::size_t j = 0; j < d.cols; ++j) {
      if (j) out << opt.delimiter;
      out << d.labels[j];
    }
    out << '\n';
  }
  out << std::setprecision(17);
  for (std::size_t r = 0; r < d.rows; ++r) {
    for (std::size_t c = 0; c < d.cols; ++c) {
      if (c) out << opt.delimiter;
      out << d.at(r, c);
    }
    out << '\n';
  }
}

inline void write_csv_file(const std::string& path, const Dataset& d,
                           const CsvOptions& opt = {}) {
  std::ofstream out(path);
  require(out.good(), "csv: cannot open '" + path + "' for writing");
  write_csv(out, d, opt);
}

}  // namespace ssp
