// Copyright 2026 The cqedswitch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "cqedswitch/bench.hpp"
#include "cqedswitch/config.hpp"

namespace cqedswitch {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string format_complex(cplx z) {
  return "(" + format_number(z.real()) + "," + format_number(z.imag()) + ")";
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const RunTable& table) {
  for (std::size_t c = 0; c < kCsvColumns.size(); ++c) {
    if (c) os << ',';
    os << kCsvColumns[c];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      if (table.present[c]) os << format_number(row[c]);
    }
    os << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const RunTable& table) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
  write_csv(os, table);
  if (!os) throw InvalidArgument("failed writing '" + path.string() + "'");
}

RunTable read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("line 1: missing CSV header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, ',');
  if (header.size() != kCsvColumns.size()) {
    throw InvalidArgument("line 1: expected " + std::to_string(kCsvColumns.size()) + " columns");
  }
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] != kCsvColumns[c]) {
      throw InvalidArgument("line 1: column " + std::to_string(c + 1) + " is '" + header[c] +
                            "', expected '" + std::string(kCsvColumns[c]) + "'");
    }
  }
  RunTable table;
  long lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    const auto where = "line " + std::to_string(lineno) + ": ";
    if (fields.size() != kCsvColumns.size()) {
      throw InvalidArgument(where + "expected " + std::to_string(kCsvColumns.size()) +
                            " fields, found " + std::to_string(fields.size()));
    }
    std::array<double, kCsvColumns.size()> row;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const bool has = !fields[c].empty();
      if (table.rows.empty()) {
        table.present[c] = has;
      } else if (table.present[c] != has) {
        throw InvalidArgument(where + "column '" + std::string(kCsvColumns[c]) +
                              "' is empty in some rows only");
      }
      if (!has) {
        row[c] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      const char* first = fields[c].data();
      const char* last = first + fields[c].size();
      const auto res = std::from_chars(first, last, row[c]);
      if (res.ec != std::errc() || res.ptr != last) {
        throw InvalidArgument(where + "cannot parse '" + fields[c] + "' in column '" +
                              std::string(kCsvColumns[c]) + "'");
      }
    }
    table.rows.push_back(row);
  }
  if (table.rows.empty()) throw InvalidArgument("CSV has no data rows");
  if (!table.present[0]) throw InvalidArgument("CSV has no time column values");
  return table;
}

RunTable read_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot open '" + path.string() + "'");
  return read_csv(is);
}

RunMeta meta_of(const Scenario& s) { return RunMeta{s.model, s.mode, s.drives}; }

std::filesystem::path meta_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p += ".meta";
  return p;
}

void write_meta(const std::filesystem::path& csv_path, const RunMeta& meta) {
  const auto path = meta_path(csv_path);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
  os << "model = " << to_string(meta.model) << '\n'
     << "scenario = " << to_string(meta.mode) << '\n'
     << "beta = " << format_complex(meta.drives.beta) << '\n'
     << "alpha_s = " << format_complex(meta.drives.alpha_s) << '\n'
     << "alpha_r = " << format_complex(meta.drives.alpha_r) << '\n';
}

RunMeta read_meta(const std::filesystem::path& csv_path) {
  const auto path = meta_path(csv_path);
  std::ifstream is(path);
  if (!is) {
    throw InvalidArgument("missing run description '" + path.string() +
                          "' (written by 'simulate' next to the CSV)");
  }
  const KeyValues kv = parse_key_values(is, path.string());
  RunMeta meta;
  bool seen_model = false, seen_mode = false;
  for (const auto& [key, entry] : kv) {
    const std::string& value = entry.value;
    if (key == "model") {
      meta.model = parse_model_kind(value);
      seen_model = true;
    } else if (key == "scenario") {
      meta.mode = parse_mode(value);
      seen_mode = true;
    } else if (key == "beta") {
      meta.drives.beta = parse_complex(value, entry.where);
    } else if (key == "alpha_s") {
      meta.drives.alpha_s = parse_complex(value, entry.where);
    } else if (key == "alpha_r") {
      meta.drives.alpha_r = parse_complex(value, entry.where);
    } else {
      throw InvalidArgument(entry.where + ": unknown key '" + key + "'");
    }
  }
  if (!seen_model || !seen_mode) throw InvalidArgument(path.string() + ": needs model and scenario");
  return meta;
}

}  // namespace cqedswitch
