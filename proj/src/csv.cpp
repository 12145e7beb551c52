// Copyright 2026 The esslab Authors
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

#include "esslab/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "esslab/errors.hpp"

namespace esslab::csv {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_real(std::string_view field, std::size_t line, std::string_view column) {
  field = trim(field);
  if (field.starts_with('+')) {
    field.remove_prefix(1);
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() || std::isnan(value)) {
    throw ParseError(line, "invalid number '" + std::string{field} + "' in column " + std::string{column});
  }
  return value;
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

void Writer::comment(std::string_view key, std::string_view value) {
  if (columns_ != 0) {
    throw std::logic_error("csv::Writer: comments must precede the header");
  }
  out_ << "# " << key << '=' << value << '\n';
}

void Writer::header(const std::vector<std::string>& columns) {
  columns_ = columns.size();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out_ << (i == 0 ? "" : ",") << columns[i];
  }
  out_ << '\n';
}

void Writer::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_) {
    throw std::logic_error("csv::Writer: row width does not match the header");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i != 0) {
      out_ << ',';
    }
    std::visit(Overloaded{
                   [](std::monostate) {},
                   [this](double v) { out_ << format_double(v); },
                   [this](std::size_t v) { out_ << v; },
                   [this](const std::string& v) { out_ << v; },
               },
               cells[i]);
  }
  out_ << '\n';
}

void write_weighted_samples(std::ostream& out, const WeightedSampleSet& ws) {
  Writer writer{out};
  writer.header({"x", "log_w"});
  for (std::size_t i = 0; i < ws.size(); ++i) {
    writer.row({ws.samples()[i], ws.log_weights()[i]});
  }
}

WeightedSampleSet read_weighted_samples(std::istream& in, std::string provenance) {
  std::vector<double> xs;
  std::vector<double> lws;
  std::string text;
  std::size_t line = 0;
  bool seen_header = false;
  while (std::getline(in, text)) {
    ++line;
    const std::string_view row = trim(text);
    if (row.empty() || row.starts_with('#')) {
      continue;
    }
    if (!seen_header) {
      if (row != "x,log_w") {
        throw ParseError(line, "expected header 'x,log_w'");
      }
      seen_header = true;
      continue;
    }
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError(line, "expected exactly two fields");
    }
    const double x = parse_real(row.substr(0, comma), line, "x");
    const double lw = parse_real(row.substr(comma + 1), line, "log_w");
    if (!std::isfinite(x)) {
      throw ParseError(line, "sample x must be finite");
    }
    if (lw == std::numeric_limits<double>::infinity()) {
      throw ParseError(line, "log_w of +inf is not a valid weight");
    }
    xs.push_back(x);
    lws.push_back(lw);
  }
  if (!seen_header) {
    throw ParseError(line, "missing header 'x,log_w'");
  }
  if (xs.empty()) {
    throw ParseError(line, "no samples");
  }
  bool any_finite = false;
  for (const double lw : lws) {
    any_finite = any_finite || std::isfinite(lw);
  }
  if (!any_finite) {
    throw ParseError(line, "no finite log-weight");
  }
  return WeightedSampleSet{std::move(xs), std::move(lws), std::move(provenance)};
}

std::vector<Cell> report_row(const EssReport& report) {
  return {
      report.n, report.ess_hat, report.cv, report.l2,
      report.ess_hat_h ? Cell{*report.ess_hat_h} : Cell{std::monostate{}},
  };
}

std::vector<Cell> ground_truth_row(const GroundTruth& gt) {
  return {gt.n,        gt.replicates, gt.var_raw,  gt.var_snis,          gt.mse_snis,
          gt.bias_snis, gt.ess,       gt.ess_star, gt.std_errors.ess};
}

}  // namespace esslab::csv
