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

#ifndef ESSLAB_CSV_HPP
#define ESSLAB_CSV_HPP

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "esslab/diagnostics.hpp"
#include "esslab/estimators.hpp"
#include "esslab/ground_truth.hpp"

/**
 * \file
 * \brief CSV files: comma separated, LF line endings, '#' comment lines before the header.
 *
 * Reals are written in the shortest form that parses back to the same double, with '.' as
 * decimal separator; infinities are written as `inf` / `-inf`.
 */

namespace esslab::csv {

/// Shortest round-trip text for `x`.
std::string format_double(double x);

/// A blank cell is std::monostate.
using Cell = std::variant<std::monostate, double, std::size_t, std::string>;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  /// `# key=value`; only valid before the header.
  void comment(std::string_view key, std::string_view value);

  void header(const std::vector<std::string>& columns);

  void row(const std::vector<Cell>& cells);

 private:
  std::ostream& out_;
  std::size_t columns_ = 0;
};

/// `x,log_w`, one row per sample.
void write_weighted_samples(std::ostream& out, const WeightedSampleSet& ws);

/// Parses the `x,log_w` format. Throws ParseError (with the 1-based line) on malformed input.
WeightedSampleSet read_weighted_samples(std::istream& in, std::string provenance = "csv");

inline const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> columns{"n", "ess_hat", "cv", "l2", "ess_hat_h"};
  return columns;
}

/// `n,ess_hat,cv,l2,ess_hat_h` values; ess_hat_h blank when absent.
std::vector<Cell> report_row(const EssReport& report);

inline const std::vector<std::string>& ground_truth_columns() {
  static const std::vector<std::string> columns{"n",         "replicates", "var_raw", "var_snis", "mse_snis",
                                                "bias_snis", "ess",        "ess_star", "se_ess"};
  return columns;
}

std::vector<Cell> ground_truth_row(const GroundTruth& gt);

}  // namespace esslab::csv

#endif
