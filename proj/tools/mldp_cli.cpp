//
// Copyright 2026 The MLDP Authors.
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

// Command-line front end:
//   mldp sensitivity <workload.csv>
//   mldp publish <histogram.csv> --config <cfg.json> --out <model.json>
//   mldp answer <model.json> <workload.csv> [--out <answers.csv>]
//   mldp bench <cfg.json> --out <report.csv|report.json>
//   mldp bounds --n --h --beta --m --s --eps

#include <charconv>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mldp/mldp.hpp"

namespace {

nlohmann::json ReadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mldp::IoError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw mldp::ParseError(path + ": " + e.what());
  }
}

std::string Num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private query answering through published regression models"};
  app.require_subcommand(1);

  std::string workload_path;
  auto* sens = app.add_subcommand("sensitivity", "Print the L1 sensitivity of a workload");
  sens->add_option("workload", workload_path, "workload CSV")->required();

  std::string hist_path, config_path, out_path;
  auto* publish = app.add_subcommand("publish", "Train and release a model from a histogram");
  publish->add_option("histogram", hist_path, "histogram CSV (label,count)")->required();
  publish->add_option("--config", config_path, "pipeline config JSON")->required();
  publish->add_option("--out", out_path, "model JSON to write")->required();

  std::string model_path, answer_out;
  auto* answer = app.add_subcommand("answer", "Answer a workload from a published model");
  answer->add_option("model", model_path, "model JSON")->required();
  answer->add_option("workload", workload_path, "workload CSV")->required();
  answer->add_option("--out", answer_out, "write answers CSV here instead of stdout");

  std::string bench_cfg, report_path;
  auto* bench = app.add_subcommand("bench", "Run an experiment sweep");
  bench->add_option("config", bench_cfg, "experiment config JSON")->required();
  bench->add_option("--out", report_path, "report path (.csv or .json)")->required();

  mldp::BoundParameters bp;
  auto* bounds = app.add_subcommand("bounds", "Evaluate the model and noise error bounds");
  // --h is the hypothesis count here, so help is long-form only.
  bounds->set_help_flag("--help", "Print this help message and exit");
  bounds->add_option("--n", bp.n_records, "record count (answers lie in [0,n])")->required();
  bounds->add_option("--h", bp.hypothesis_count, "hypothesis-set size |H|")->required();
  bounds->add_option("--beta", bp.beta, "failure probability per error source")->required();
  bounds->add_option("--m", bp.m, "training-set size")->required();
  bounds->add_option("--s", bp.sensitivity, "training-set sensitivity")->required();
  bounds->add_option("--eps", bp.epsilon, "privacy budget")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sens) {
      std::cout << Num(mldp::workload_sensitivity(mldp::read_workload_csv(workload_path))) << '\n';
    } else if (*publish) {
      const auto h = mldp::load_histogram_csv(hist_path);
      const auto cfg = mldp::mldp_config_from_json(ReadJson(config_path));
      mldp::PrivacyBudget budget(cfg.epsilon);
      const auto model = mldp::mldp_publish(h, cfg, budget);
      mldp::save_model(model, out_path);
      std::cerr << "published " << mldp::to_string(model.kind) << " model: d=" << model.d
                << " m=" << model.meta.training_m << " sensitivity=" << Num(model.meta.sensitivity)
                << " epsilon=" << Num(budget.consumed()) << '\n';
    } else if (*answer) {
      const auto model = mldp::load_model(model_path);
      const auto answers = mldp::mldp_answer(model, mldp::read_workload_csv(workload_path));
      std::ofstream file;
      if (!answer_out.empty()) {
        file.open(answer_out);
        if (!file) throw mldp::IoError("cannot write " + answer_out);
      }
      std::ostream& out = answer_out.empty() ? std::cout : file;
      out << "query_id,answer\n";
      for (std::size_t i = 0; i < answers.size(); ++i) out << i << ',' << Num(answers[i]) << '\n';
    } else if (*bench) {
      const auto cfg = mldp::experiment_config_from_json(ReadJson(bench_cfg));
      mldp::ReportFormat fmt;
      if (EndsWith(report_path, ".json")) {
        fmt = mldp::ReportFormat::kJson;
      } else if (EndsWith(report_path, ".csv")) {
        fmt = mldp::ReportFormat::kCsv;
      } else {
        throw std::invalid_argument("report path must end in .csv or .json");
      }
      mldp::emit_report(mldp::run_experiment(cfg), fmt, report_path);
    } else if (*bounds) {
      const auto b = mldp::total_error_bound(bp);
      std::cout << "alpha_model," << Num(b.alpha_model) << '\n'
                << "alpha_noise," << Num(b.alpha_noise) << '\n'
                << "beta_total," << Num(b.beta_total) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
