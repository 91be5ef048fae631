/*
 * Copyright 2026 The tscore Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "cli.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tscore/baseline_metrics.h"
#include "tscore/errors.h"
#include "tscore/report.h"
#include "tscore/synthetic_bench.h"
#include "tscore/tensor_io.h"

namespace tscore::cli {

namespace {

using nlohmann::json;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("TSCORE_SEED"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw IngestError(std::string("TSCORE_SEED is not an unsigned integer: ") + env);
    }
  }
  return 0;
}

struct HopkinsFlags {
  std::optional<std::size_t> m;
  std::size_t reps = 5;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--m", m, "Hopkins sample size (default clamp(ceil(N/10), 10, 500))");
    cmd->add_option("--reps", reps, "Hopkins repetitions")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Hopkins seed (default $TSCORE_SEED or 0)");
    cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores)");
  }

  report::ScoreOptions options() const {
    report::ScoreOptions out;
    out.hopkins_m = m;
    out.hopkins_repetitions = reps;
    out.seed = seed ? *seed : default_seed();
    out.jobs = jobs;
    return out;
  }
};

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text;
  if (!out) throw IngestError("cannot write " + path);
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw IngestError("cannot parse number '" + item + "' in " + text);
    }
  }
  return values;
}

std::string number_string(double v) { return report::format_number(v); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Label-free Transfer Score evaluation of domain adaptation checkpoints",
               "tscore"};
  app.require_subcommand(1);

  // score
  auto* score = app.add_subcommand("score", "Per-epoch U, H, M, T as JSON lines");
  std::string score_run;
  std::optional<std::int64_t> score_epoch;
  HopkinsFlags score_flags;
  score->add_option("run_dir", score_run, "Run directory or manifest")->required();
  score->add_option("--epoch", score_epoch, "Score only this epoch index");
  score_flags.attach(score);

  // rank
  auto* rank = app.add_subcommand("rank", "Rank runs by Transfer Score");
  std::vector<std::string> rank_runs;
  std::string rank_mode = "last";
  std::string rank_csv;
  std::size_t rank_tau = 3;
  double rank_zeta = 0.01;
  HopkinsFlags rank_flags;
  rank->add_option("run_dirs", rank_runs, "Run directories or manifests")->required();
  rank->add_option("--epoch", rank_mode, "Epoch to score per run")
      ->check(CLI::IsMember({"last", "selected"}));
  rank->add_option("--csv", rank_csv, "Also write the ranking as CSV");
  rank->add_option("--tau", rank_tau, "Window size for --epoch selected");
  rank->add_option("--zeta", rank_zeta, "Saturation threshold for --epoch selected");
  rank_flags.attach(rank);

  // select-epoch
  auto* select = app.add_subcommand("select-epoch", "Pick a checkpoint by saturation level");
  std::string select_run;
  std::size_t select_tau = 3;
  double select_zeta = 0.01;
  HopkinsFlags select_flags;
  select->add_option("run_dir", select_run, "Run directory or manifest")->required();
  select->add_option("--tau", select_tau, "Sliding window size");
  select->add_option("--zeta", select_zeta, "Saturation threshold");
  select_flags.attach(select);

  // baseline
  auto* baseline = app.add_subcommand("baseline", "MMD, PAD or C-entropy baseline");
  std::string base_source, base_target, base_probs, base_metric;
  std::string base_bandwidth = "median";
  std::string base_estimator = "biased";
  std::optional<std::uint64_t> base_seed;
  ProbeConfig probe;
  baseline->add_option("--metric", base_metric, "Baseline metric")
      ->required()
      ->check(CLI::IsMember({"mmd", "pad", "centropy"}));
  baseline->add_option("--source", base_source, "Source features (.tsr)");
  baseline->add_option("--target", base_target, "Target features (.tsr)");
  baseline->add_option("--probabilities", base_probs, "Target probabilities (.tsr)");
  baseline->add_option("--bandwidth", base_bandwidth, "MMD kernel width or 'median'");
  baseline->add_option("--estimator", base_estimator, "MMD estimator")
      ->check(CLI::IsMember({"biased", "unbiased"}));
  baseline->add_option("--seed", base_seed, "PAD seed (default $TSCORE_SEED or 0)");
  baseline->add_option("--train-fraction", probe.train_fraction, "PAD train split");
  baseline->add_option("--learning-rate", probe.learning_rate, "PAD probe step size");
  baseline->add_option("--iterations", probe.iterations, "PAD probe iterations");

  // correlate
  auto* corr = app.add_subcommand("correlate", "Pearson correlation of T and accuracy");
  std::string corr_run, corr_csv;
  HopkinsFlags corr_flags;
  corr->add_option("run_dir", corr_run, "Run directory or manifest")->required();
  corr->add_option("--csv", corr_csv, "Also write the pairs as CSV");
  corr_flags.attach(corr);

  // synth
  auto* synth = app.add_subcommand("synth", "Train the toy model and export a run");
  std::string synth_out, synth_shift, synth_run_id, synth_method = "toy-entropy-min";
  DomainSpec spec = default_domain_spec();
  ToyTrainConfig train;
  std::optional<std::uint64_t> synth_seed;
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--k", spec.k, "Classes");
  synth->add_option("--d-in", spec.d_in, "Input dimension");
  synth->add_option("--n", spec.n, "Samples per domain");
  synth->add_option("--spread", spec.cluster_spread, "Cluster standard deviation");
  synth->add_option("--center-scale", spec.center_scale, "Distance of class centers from the origin");
  synth->add_option("--shift", synth_shift, "Target translation, comma separated (length d-in)");
  synth->add_option("--rotation", spec.rotation_angle, "Target rotation in radians");
  synth->add_option("--d-feat", train.d_feat, "Feature dimension");
  synth->add_option("--epochs", train.epochs, "Epochs");
  synth->add_option("--steps-per-epoch", train.steps_per_epoch, "Gradient steps per epoch");
  synth->add_option("--lr", train.learning_rate, "Learning rate");
  synth->add_option("--lambda", train.adapt_weight, "Target entropy weight");
  synth->add_option("--warmup", train.warmup_epochs, "Source-only epochs before adaptation");
  synth->add_option("--seed", synth_seed, "Seed (default $TSCORE_SEED or 0)");
  synth->add_option("--run-id", synth_run_id, "Run id (default derived from lambda and seed)");
  synth->add_option("--method", synth_method, "Method name recorded in the manifest");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitIngest;
  }

  try {
    if (*score) {
      const Run run = Run::open(score_run);
      std::vector<MetricReport> reports;
      if (score_epoch) {
        const auto position = run.position_of_epoch(*score_epoch);
        if (!position) {
          throw IngestError("epoch " + std::to_string(*score_epoch) +
                            " not in run " + run.manifest().run_id);
        }
        reports = report::score_positions(run, {*position}, score_flags.options());
      } else {
        reports = report::score_all(run, score_flags.options());
      }
      for (const auto& r : reports) {
        if (r.simplex_bound_violated) {
          err << "warning: epoch " << r.epoch << ": K = " << r.num_classes
              << " exceeds d + 1; uniformity cannot reach zero\n";
        }
        out << report::to_json(r).dump() << '\n';
      }
    } else if (*rank) {
      std::vector<Run> runs;
      for (const auto& path : rank_runs) runs.push_back(Run::open(path));
      const auto mode = rank_mode == "last" ? report::RankEpoch::kLast
                                            : report::RankEpoch::kSelected;
      const auto entries = report::rank_runs(runs, mode, rank_flags.options(),
                                             SelectionConfig{rank_tau, rank_zeta});
      out << report::rank_to_json(entries, mode).dump(2) << '\n';
      if (!rank_csv.empty()) write_text_file(rank_csv, report::rank_to_csv(entries));
    } else if (*select) {
      const Run run = Run::open(select_run);
      const auto selection = report::select_epoch(
          run, SelectionConfig{select_tau, select_zeta}, select_flags.options());
      out << report::to_json(selection).dump(2) << '\n';
    } else if (*baseline) {
      json result;
      result["metric"] = base_metric;
      if (base_metric == "mmd" || base_metric == "pad") {
        if (base_source.empty() || base_target.empty()) {
          throw IngestError(base_metric + " requires --source and --target");
        }
        const DenseMatrix source = read_tensor(base_source);
        const DenseMatrix target = read_tensor(base_target);
        if (base_metric == "mmd") {
          MmdConfig config;
          config.estimator = base_estimator == "biased" ? MmdEstimator::kBiased
                                                        : MmdEstimator::kUnbiased;
          if (base_bandwidth != "median") {
            try {
              config.bandwidth = std::stod(base_bandwidth);
            } catch (const std::exception&) {
              throw IngestError("--bandwidth must be a number or 'median'");
            }
          }
          const double sigma = config.bandwidth
                                   ? *config.bandwidth
                                   : median_heuristic_bandwidth(source, target);
          result["value"] = mmd(source, target, MmdConfig{sigma, config.estimator});
          result["config"] = {{"kernel", "gaussian"},
                              {"bandwidth", sigma},
                              {"bandwidth_rule", config.bandwidth ? "explicit" : "median"},
                              {"estimator", base_estimator}};
        } else {
          probe.seed = base_seed ? *base_seed : default_seed();
          const PadResult pad = proxy_a_distance(source, target, probe);
          result["value"] = pad.distance;
          result["test_error"] = pad.test_error;
          result["config"] = {{"probe", "logistic"},
                              {"train_fraction", probe.train_fraction},
                              {"learning_rate", probe.learning_rate},
                              {"iterations", probe.iterations},
                              {"seed", probe.seed},
                              {"train_size", pad.train_size},
                              {"test_size", pad.test_size}};
        }
      } else {
        if (base_probs.empty()) throw IngestError("centropy requires --probabilities");
        DenseMatrix probs = read_tensor(base_probs);
        normalize_probability_rows(probs);
        result["value"] = c_entropy(probs);
        result["config"] = {{"interpretation", "mean target prediction entropy"},
                            {"unit", "nats"}};
      }
      out << result.dump(2) << '\n';
    } else if (*corr) {
      const Run run = Run::open(corr_run);
      const auto report = report::correlate(run, corr_flags.options());
      out << report::to_json(report).dump(2) << '\n';
      if (!corr_csv.empty()) write_text_file(corr_csv, report::correlation_to_csv(report));
    } else if (*synth) {
      const std::uint64_t seed = synth_seed ? *synth_seed : default_seed();
      spec.seed = seed;
      train.seed = seed;
      if (!synth_shift.empty()) {
        spec.shift = parse_vector(synth_shift);
      } else if (spec.d_in != 5 || spec.k != 3) {
        // The built-in shift is laid out for k = 3, d_in = 5.
        spec.shift.assign(spec.d_in, 0.0);
        spec.shift[0] = 1.5;
        if (spec.d_in > 1) spec.shift[1] = -1.0;
        if (spec.d_in > spec.k) spec.shift[spec.d_in - 1] = 7.0;
      }
      const DomainPair pair = generate_domain_pair(spec);
      const auto records = train_toy_model(pair.source, pair.target, train);
      const std::string run_id =
          synth_run_id.empty()
              ? "synth-lambda" + number_string(train.adapt_weight) + "-seed" + std::to_string(seed)
              : synth_run_id;
      std::string shift_text;
      for (double v : spec.shift) {
        if (!shift_text.empty()) shift_text += ',';
        shift_text += number_string(v);
      }
      const std::map<std::string, std::string> hyper = {
          {"lambda", number_string(train.adapt_weight)},
          {"lr", number_string(train.learning_rate)},
          {"epochs", std::to_string(train.epochs)},
          {"steps_per_epoch", std::to_string(train.steps_per_epoch)},
          {"warmup", std::to_string(train.warmup_epochs)},
          {"d_feat", std::to_string(train.d_feat)},
          {"k", std::to_string(spec.k)},
          {"d_in", std::to_string(spec.d_in)},
          {"n", std::to_string(spec.n)},
          {"spread", number_string(spec.cluster_spread)},
          {"center_scale", number_string(spec.center_scale)},
          {"shift", shift_text},
          {"rotation", number_string(spec.rotation_angle)},
          {"seed", std::to_string(seed)},
          {"features", "linear map output, unnormalized"},
      };
      const auto manifest = write_run(synth_out, run_id, synth_method, hyper, records);
      json result = {{"manifest", manifest.generic_string()},
                     {"run_id", run_id},
                     {"epochs", records.size()}};
      out << result.dump(2) << '\n';
    }
  } catch (const IngestError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIngest;
  } catch (const std::invalid_argument& e) {
    // Parameter values the library rejects, such as --m >= N.
    err << "error: " << e.what() << '\n';
    return kExitIngest;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCompute;
  }
  return kExitOk;
}

}  // namespace tscore::cli
