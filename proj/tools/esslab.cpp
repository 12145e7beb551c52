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

// esslab <experiment> [--n 4,16,256] [--grid lo:hi:step] [--replicates R] [--seed S]
//                     [--scenario 1|2|3] [--out path.csv]
// esslab diagnose --in samples.csv [--integrand identity|abs-gt:ALPHA] [--out report.csv]

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "esslab/errors.hpp"
#include "esslab/experiments.hpp"
#include "esslab/kernels.hpp"

namespace {

struct ExperimentOptions {
  std::vector<std::size_t> n_values;
  std::string grid;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  int scenario = 1;
  std::size_t threads = 0;
  std::string out;
};

// Writes to `path`, or stdout when empty. The file is opened in binary mode so line endings stay LF.
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream file{path, std::ios::binary};
  if (!file) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  fn(file);
}

void add_experiment(CLI::App& app, esslab::ExperimentId id, const std::string& help) {
  auto opts = std::make_shared<ExperimentOptions>();
  const auto defaults = esslab::ExperimentConfig::defaults(id);
  opts->replicates = defaults.replicates;
  opts->seed = defaults.master_seed;

  CLI::App* sub = app.add_subcommand(std::string{esslab::to_string(id)}, help);
  sub->add_option("--n", opts->n_values, "Sample sizes N (comma separated)")->delimiter(',');
  if (id != esslab::ExperimentId::kMisScenario) {
    sub->add_option("--grid", opts->grid, "Grid lo:hi:step (default " + defaults.grid.to_string() + ")");
  }
  sub->add_option("--replicates", opts->replicates, "Replicates R per grid point")->capture_default_str();
  sub->add_option("--seed", opts->seed, "Master seed")->capture_default_str();
  if (id == esslab::ExperimentId::kMisScenario) {
    sub->add_option("--scenario", opts->scenario, "Proposal scenario")->check(CLI::Range(1, 3))->capture_default_str();
  }
  sub->add_option("--threads", opts->threads, "Worker threads (0 = all cores)");
  sub->add_option("--out", opts->out, "Output CSV (default stdout)");

  sub->callback([id, opts]() {
    auto cfg = esslab::ExperimentConfig::defaults(id);
    if (!opts->n_values.empty()) {
      cfg.n_values = opts->n_values;
    }
    if (!opts->grid.empty()) {
      cfg.grid = esslab::Grid::parse(opts->grid);
    }
    cfg.replicates = opts->replicates;
    cfg.master_seed = opts->seed;
    cfg.scenario = opts->scenario;
    cfg.workers = opts->threads;
    cfg.validate();
    with_output(opts->out, [&](std::ostream& out) { esslab::run_experiment(cfg, out); });
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective sample size diagnostics for importance sampling"};
  app.require_subcommand(1);
  bool show_kernels = false;
  app.add_flag("--kernels", show_kernels, "Print the selected kernel variant to stderr");

  add_experiment(app, esslab::ExperimentId::kMeanMismatch, "True ESS vs ESS-hat, proposal N(mu_q,1)");
  add_experiment(app, esslab::ExperimentId::kVarMismatch, "True ESS vs ESS-hat, proposal N(0,sigma_q^2)");
  add_experiment(app, esslab::ExperimentId::kRareEvent, "Rare-event estimation with target = proposal");
  add_experiment(app, esslab::ExperimentId::kMisScenario, "MIS schemes N1/N3/R3 on the three-mode target");

  std::string input;
  std::string integrand;
  std::string report_out;
  CLI::App* diag = app.add_subcommand("diagnose", "ESS report for an x,log_w CSV");
  diag->add_option("--in", input, "Input CSV with header x,log_w")->required();
  diag->add_option("--integrand", integrand, "Integrand h: identity or abs-gt:ALPHA");
  diag->add_option("--out", report_out, "Output CSV (default stdout)");
  diag->callback([&]() {
    std::ifstream in{input};
    if (!in) {
      throw std::runtime_error("cannot open '" + input + "'");
    }
    std::optional<esslab::Integrand> h;
    if (!integrand.empty()) {
      h = esslab::Integrand::parse(integrand);
    }
    const esslab::EssReport report = esslab::diagnose(in, h);
    with_output(report_out, [&](std::ostream& out) { esslab::write_report_csv(out, report, h); });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const esslab::ParseError& e) {
    std::cerr << "esslab: " << input << ": " << e.what() << '\n';
    return 2;
  } catch (const esslab::NoMassUnderH& e) {
    std::cerr << "esslab: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "esslab: " << e.what() << '\n';
    return 1;
  }
  if (show_kernels) {
    std::cerr << "kernels: " << esslab::kernels::active_kernels().name << '\n';
  }
  return 0;
}
