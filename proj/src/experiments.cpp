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

#include "esslab/experiments.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "esslab/csv.hpp"
#include "esslab/random.hpp"

namespace esslab {
namespace {

constexpr std::array<MisKind, 3> kSchemes{MisKind::kN1, MisKind::kN3, MisKind::kR3};

double parse_number(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("invalid number '" + std::string{text} + "'");
  }
  return value;
}

std::uint64_t point_seed(const ExperimentConfig& cfg, std::size_t point) {
  return derive_seed(cfg.master_seed, {static_cast<std::uint64_t>(cfg.id), point});
}

std::string join(const std::vector<std::size_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += (i == 0 ? "" : ",") + std::to_string(values[i]);
  }
  return out;
}

void write_config(csv::Writer& writer, const ExperimentConfig& cfg) {
  writer.comment("experiment", to_string(cfg.id));
  writer.comment("n", join(cfg.n_values));
  if (cfg.id == ExperimentId::kMisScenario) {
    writer.comment("scenario", std::to_string(cfg.scenario));
  } else {
    writer.comment("grid", cfg.grid.to_string());
  }
  writer.comment("replicates", std::to_string(cfg.replicates));
  writer.comment("seed", std::to_string(cfg.master_seed));
}

csv::Cell optional_cell(const std::optional<double>& v) {
  return v ? csv::Cell{*v} : csv::Cell{std::monostate{}};
}

std::vector<MismatchRow> run_single_proposal(const ExperimentConfig& cfg, bool vary_mean) {
  cfg.validate();
  const Gaussian1D target{0.0, 1.0};
  const std::vector<double> grid = cfg.grid.values();
  std::vector<MismatchRow> rows;
  std::size_t point = 0;
  for (const std::size_t n : cfg.n_values) {
    for (const double p : grid) {
      const Gaussian1D proposal = vary_mean ? Gaussian1D{p, 1.0} : Gaussian1D{0.0, p * p};
      const ReplicationPlan plan{
          .target = target,
          .proposal = Density{proposal},
          .integrand = Integrand::identity(),
          .n_per_run = n,
          .replicates = cfg.replicates,
          .true_value = 0.0,
          .master_seed = point_seed(cfg, point++),
          .workers = cfg.workers,
      };
      const GroundTruth gt = run_replication(plan);
      const double nd = static_cast<double>(n);

      MismatchRow row{
          .n = n,
          .parameter = p,
          .truth = gt,
          .ess_over_n = gt.ess / nd,
          .ess_star_over_n = gt.ess_star / nd,
          .ess_hat_over_n = gt.ess_hat_mean / nd,
          .ess_hat_sd_over_n = gt.ess_hat_sd / nd,
          .ratio_hat_to_ess = gt.ess_hat_mean / gt.ess,
          .delta_chain_over_n = std::nullopt,
          .divergent = 2.0 * proposal.variance() <= target.variance(),
      };
      if (!row.divergent) {
        const double chi2 = chi2_gaussian(target, proposal);
        row.delta_chain_over_n = ess_delta_chain(n, chi2 - 1.0, 1.0).ess_kong / nd;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace

std::string_view to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::kMeanMismatch:
      return "mean-mismatch";
    case ExperimentId::kVarMismatch:
      return "var-mismatch";
    case ExperimentId::kRareEvent:
      return "rare-event";
    case ExperimentId::kMisScenario:
      return "mis-scenario";
  }
  return "?";
}

ExperimentId parse_experiment_id(std::string_view text) {
  for (const auto id : {ExperimentId::kMeanMismatch, ExperimentId::kVarMismatch, ExperimentId::kRareEvent,
                        ExperimentId::kMisScenario}) {
    if (text == to_string(id)) {
      return id;
    }
  }
  throw std::invalid_argument("unknown experiment '" + std::string{text} + "'");
}

Grid Grid::parse(std::string_view text) {
  const auto first = text.find(':');
  const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
  if (second == std::string_view::npos) {
    throw std::invalid_argument("grid must be lo:hi:step, got '" + std::string{text} + "'");
  }
  Grid g{parse_number(text.substr(0, first)), parse_number(text.substr(first + 1, second - first - 1)),
         parse_number(text.substr(second + 1))};
  static_cast<void>(g.values());
  return g;
}

std::vector<double> Grid::values() const {
  if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || !(lo <= hi)) {
    throw std::invalid_argument("grid needs step > 0 and lo <= hi");
  }
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step * (1.0 + 1e-9) + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(lo + static_cast<double>(i) * step);
  }
  return out;
}

std::string Grid::to_string() const {
  return csv::format_double(lo) + ":" + csv::format_double(hi) + ":" + csv::format_double(step);
}

ExperimentConfig ExperimentConfig::defaults(ExperimentId id) {
  ExperimentConfig cfg;
  cfg.id = id;
  switch (id) {
    case ExperimentId::kMeanMismatch:
      cfg.grid = {0.0, 3.0, 0.1};
      cfg.n_values = {4, 16, 256};
      break;
    case ExperimentId::kVarMismatch:
      cfg.grid = {0.6, 3.6, 0.1};
      cfg.n_values = {4, 16, 256};
      break;
    case ExperimentId::kRareEvent:
      cfg.grid = {0.5, 3.5, 0.25};
      cfg.n_values = {1000};
      break;
    case ExperimentId::kMisScenario:
      cfg.n_values.clear();
      for (std::size_t k = 0; k <= 9; ++k) {
        cfg.n_values.push_back(std::size_t{3} << k);
      }
      break;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  if (n_values.empty()) {
    throw std::invalid_argument("at least one N value is required");
  }
  for (const std::size_t n : n_values) {
    if (n == 0) {
      throw std::invalid_argument("N values must be >= 1");
    }
    if (id == ExperimentId::kMisScenario && n % 3 != 0) {
      throw std::invalid_argument("MIS N values must be multiples of 3 (one draw per proposal per sweep)");
    }
  }
  if (replicates < 2) {
    throw std::invalid_argument("replicates must be >= 2");
  }
  if (scenario < 1 || scenario > 3) {
    throw std::invalid_argument("scenario must be 1, 2 or 3");
  }
  if (id != ExperimentId::kMisScenario) {
    const auto values = grid.values();
    if (id == ExperimentId::kVarMismatch && values.front() <= 0.0) {
      throw std::invalid_argument("sigma_q grid must be positive");
    }
    if (id == ExperimentId::kRareEvent && values.front() < 0.0) {
      throw std::invalid_argument("alpha grid must be >= 0");
    }
  }
}

std::vector<MismatchRow> run_mean_mismatch(const ExperimentConfig& cfg) { return run_single_proposal(cfg, true); }

std::vector<MismatchRow> run_var_mismatch(const ExperimentConfig& cfg) { return run_single_proposal(cfg, false); }

std::vector<RareEventRow> run_rare_event(const ExperimentConfig& cfg) {
  cfg.validate();
  const Gaussian1D standard{0.0, 1.0};
  const std::vector<double> grid = cfg.grid.values();
  std::vector<RareEventRow> rows;
  std::size_t point = 0;
  for (const std::size_t n : cfg.n_values) {
    for (const double alpha : grid) {
      const double p = 2.0 * normal_cdf(-alpha);
      const ReplicationPlan plan{
          .target = standard,
          .proposal = Density{standard},
          .integrand = Integrand::abs_greater_than(alpha),
          .n_per_run = n,
          .replicates = cfg.replicates,
          .true_value = p,
          .master_seed = point_seed(cfg, point++),
          .workers = cfg.workers,
      };
      const GroundTruth gt = run_replication(plan);
      const double nd = static_cast<double>(n);
      rows.push_back(RareEventRow{
          .n = n,
          .alpha = alpha,
          .truth = gt,
          .true_value = p,
          .var_analytic = p * (1.0 - p) / nd,
          .rrmse = rrmse(gt, p),
          .rrmse_analytic = std::sqrt((1.0 - p) / (nd * p)),
          .variance_over_value = gt.var_snis / p,
          .ess_over_n = gt.ess / nd,
          .ess_hat_over_n = gt.ess_hat_mean / nd,
      });
    }
  }
  return rows;
}

GaussianMixture1D mis_target() {
  return GaussianMixture1D::uniform({Gaussian1D{-3.0, 1.0}, Gaussian1D{0.0, 1.0}, Gaussian1D{3.0, 1.0}});
}

MisScheme mis_scenario_scheme(int scenario, MisKind kind) {
  std::vector<double> means;
  double variance = 1.0;
  switch (scenario) {
    case 1:
      means = {-3.0, 0.0, 3.0};
      variance = 1.0;
      break;
    case 2:
      means = {-3.0, -1.0, 3.0};
      variance = 2.0;
      break;
    case 3:
      means = {-4.0, -1.0, 1.0};
      variance = 2.0;
      break;
    default:
      throw std::invalid_argument("scenario must be 1, 2 or 3");
  }
  std::vector<Density> proposals;
  for (const double m : means) {
    proposals.emplace_back(Gaussian1D{m, variance});
  }
  return MisScheme{kind, std::move(proposals)};
}

std::vector<MisRow> run_mis_scenario(const ExperimentConfig& cfg) {
  cfg.validate();
  const GaussianMixture1D target = mis_target();
  std::vector<MisRow> rows;
  std::size_t point = 0;
  for (const MisKind kind : kSchemes) {
    for (const std::size_t n : cfg.n_values) {
      const ReplicationPlan plan{
          .target = target,
          .proposal = mis_scenario_scheme(cfg.scenario, kind),
          .integrand = Integrand::identity(),
          .n_per_run = n,
          .replicates = cfg.replicates,
          .true_value = target.mean(),
          .master_seed = derive_seed(point_seed(cfg, point++), {static_cast<std::uint64_t>(cfg.scenario)}),
          .workers = cfg.workers,
      };
      const GroundTruth gt = run_replication(plan);
      const double nd = static_cast<double>(n);
      rows.push_back(MisRow{
          .scenario = cfg.scenario,
          .scheme = kind,
          .n = n,
          .truth = gt,
          .ess_over_n = gt.ess / nd,
          .ess_star_over_n = gt.ess_star / nd,
          .ess_hat_over_n = gt.ess_hat_mean / nd,
          .ess_hat_sd_over_n = gt.ess_hat_sd / nd,
          .ratio_hat_to_ess = gt.ess_hat_mean / gt.ess,
          .ess_mis_over_n = ess_mis(n, gt.var_zhat) / nd,
      });
    }
  }
  return rows;
}

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<MismatchRow>& rows) {
  csv::Writer writer{out};
  write_config(writer, cfg);
  const bool vary_mean = cfg.id == ExperimentId::kMeanMismatch;
  std::vector<std::string> columns{"n",
                                   vary_mean ? "mu_q" : "sigma_q",
                                   "replicates",
                                   "ess_over_n",
                                   "se_ess_over_n",
                                   "ess_star_over_n",
                                   "se_ess_star_over_n",
                                   "ess_hat_over_n",
                                   "ess_hat_sd_over_n",
                                   "ratio_hat_to_ess",
                                   "delta_chain_over_n"};
  if (!vary_mean) {
    columns.emplace_back("divergent");
  }
  writer.header(columns);
  for (const auto& r : rows) {
    const double nd = static_cast<double>(r.n);
    std::vector<csv::Cell> cells{r.n,
                                 r.parameter,
                                 r.truth.replicates,
                                 r.ess_over_n,
                                 r.truth.std_errors.ess / nd,
                                 r.ess_star_over_n,
                                 r.truth.std_errors.ess_star / nd,
                                 r.ess_hat_over_n,
                                 r.ess_hat_sd_over_n,
                                 r.ratio_hat_to_ess,
                                 optional_cell(r.delta_chain_over_n)};
    if (!vary_mean) {
      cells.emplace_back(std::size_t{r.divergent ? 1U : 0U});
    }
    writer.row(cells);
  }
}

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<RareEventRow>& rows) {
  csv::Writer writer{out};
  write_config(writer, cfg);
  writer.header({"n", "alpha", "replicates", "true_value", "var_analytic", "var_raw", "se_var_raw", "var_snis",
                 "se_var_snis", "mse_snis", "rrmse", "rrmse_analytic", "var_over_value", "ess_over_n",
                 "se_ess_over_n", "ess_hat_over_n"});
  for (const auto& r : rows) {
    const double nd = static_cast<double>(r.n);
    writer.row({r.n, r.alpha, r.truth.replicates, r.true_value, r.var_analytic, r.truth.var_raw,
                r.truth.std_errors.var_raw, r.truth.var_snis, r.truth.std_errors.var_snis, r.truth.mse_snis, r.rrmse,
                r.rrmse_analytic, r.variance_over_value, r.ess_over_n, r.truth.std_errors.ess / nd,
                r.ess_hat_over_n});
  }
}

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<MisRow>& rows) {
  csv::Writer writer{out};
  write_config(writer, cfg);
  writer.header({"scenario", "scheme", "n", "replicates", "ess_over_n", "se_ess_over_n", "ess_star_over_n",
                 "ess_hat_over_n", "ess_hat_sd_over_n", "ratio_hat_to_ess", "var_zhat", "ess_mis_over_n"});
  for (const auto& r : rows) {
    const double nd = static_cast<double>(r.n);
    writer.row({static_cast<std::size_t>(r.scenario), std::string{to_string(r.scheme)}, r.n, r.truth.replicates,
                r.ess_over_n, r.truth.std_errors.ess / nd, r.ess_star_over_n, r.ess_hat_over_n, r.ess_hat_sd_over_n,
                r.ratio_hat_to_ess, r.truth.var_zhat, r.ess_mis_over_n});
  }
}

void run_experiment(const ExperimentConfig& cfg, std::ostream& out) {
  switch (cfg.id) {
    case ExperimentId::kMeanMismatch:
      write_csv(out, cfg, run_mean_mismatch(cfg));
      break;
    case ExperimentId::kVarMismatch:
      write_csv(out, cfg, run_var_mismatch(cfg));
      break;
    case ExperimentId::kRareEvent:
      write_csv(out, cfg, run_rare_event(cfg));
      break;
    case ExperimentId::kMisScenario:
      write_csv(out, cfg, run_mis_scenario(cfg));
      break;
  }
}

EssReport diagnose(std::istream& in, const std::optional<Integrand>& h) {
  return make_report(csv::read_weighted_samples(in), h);
}

void write_report_csv(std::ostream& out, const EssReport& report, const std::optional<Integrand>& h) {
  csv::Writer writer{out};
  if (h) {
    writer.comment("h", h->describe());
  }
  writer.header(csv::report_columns());
  writer.row(csv::report_row(report));
}

}  // namespace esslab
