#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clbench/errors.hpp"
#include "clbench/harness.hpp"
#include "clbench/io.hpp"
#include "clbench/presets.hpp"

namespace {

using clbench::Library;
using clbench::LoopMode;
using clbench::RunConfig;
using clbench::SuiteSpec;
using json = nlohmann::json;

LoopMode parse_loop_mode(const std::string& s) {
  if (s == "open") return LoopMode::open;
  if (s == "closed") return LoopMode::closed;
  throw clbench::ConfigError("loop mode must be open or closed, got '" + s +
                             "'");
}

void apply_run_json(const json& j, RunConfig& cfg) {
  if (j.contains("scenario")) cfg.scenario = j.at("scenario");
  if (j.contains("v_des")) cfg.v_des = j.at("v_des");
  if (j.contains("estimator")) cfg.estimator = j.at("estimator");
  if (j.contains("imu")) cfg.imu = j.at("imu");
  if (j.contains("seed")) cfg.seed = j.at("seed");
  if (j.contains("warmup")) cfg.warmup = j.at("warmup");
  if (j.contains("tail")) cfg.tail = j.at("tail");
  if (j.contains("loop_mode"))
    cfg.loop_mode = parse_loop_mode(j.at("loop_mode"));
  if (j.contains("rates")) {
    const json& r = j.at("rates");
    if (r.contains("control")) cfg.rates.control = r.at("control");
    if (r.contains("imu")) cfg.rates.imu = r.at("imu");
    if (r.contains("camera")) cfg.rates.camera = r.at("camera");
  }
  if (j.contains("flat_gains")) {
    const json& g = j.at("flat_gains");
    if (g.contains("c_p")) cfg.flat_gains.c_p = g.at("c_p");
    if (g.contains("c_d")) cfg.flat_gains.c_d = g.at("c_d");
    if (g.contains("c_lambda")) cfg.flat_gains.c_lambda = g.at("c_lambda");
    if (g.contains("epsilon")) cfg.flat_gains.epsilon = g.at("epsilon");
    if (g.contains("lambda0")) cfg.flat_gains.lambda0 = g.at("lambda0");
  }
  if (j.contains("tracking_gains")) {
    const json& g = j.at("tracking_gains");
    if (g.contains("k_x")) cfg.tracking_gains.k_x = g.at("k_x");
    if (g.contains("k_y")) cfg.tracking_gains.k_y = g.at("k_y");
    if (g.contains("k_theta")) cfg.tracking_gains.k_theta = g.at("k_theta");
  }
}

// Suite config file: run-level defaults plus the run matrix, and an
// optional preset directory to merge into the library.
SuiteSpec load_suite_config(const std::string& path, Library& lib) {
  json j;
  try {
    j = json::parse(clbench::read_text(path));
  } catch (const json::exception& e) {
    throw clbench::ConfigError(path + ": " + e.what());
  }
  SuiteSpec spec;
  try {
    if (j.contains("config_dir")) lib.load_config_dir(j.at("config_dir"));
    if (j.contains("base")) apply_run_json(j.at("base"), spec.base);
    if (j.contains("scenarios"))
      spec.scenarios = j.at("scenarios").get<std::vector<std::string>>();
    if (j.contains("speeds"))
      spec.speeds = j.at("speeds").get<std::vector<double>>();
    if (j.contains("estimators"))
      spec.estimators = j.at("estimators").get<std::vector<std::string>>();
    if (j.contains("imus"))
      spec.imus = j.at("imus").get<std::vector<std::string>>();
    if (j.contains("repeats")) spec.repeats = j.at("repeats");
  } catch (const json::exception& e) {
    throw clbench::ConfigError(path + ": " + e.what());
  }
  return spec;
}

void write_run_artifacts(const clbench::RunResult& res,
                         const std::string& out) {
  std::filesystem::create_directories(out);
  clbench::write_text(out + "/run.json", clbench::run_summary_json(res));
  clbench::write_path(out + "/desired.txt", res.desired);
  clbench::write_path(out + "/actual.txt", res.actual);
  clbench::write_path(out + "/estimated.txt", res.estimated);
  clbench::write_text(
      out + "/plot.svg",
      clbench::render_svg(res.desired,
                          {{res.estimator.name, res.actual},
                           {res.estimator.name + " (est)", res.estimated}}));
}

void print_progress(std::size_t done, std::size_t total) {
  if (done % 25 == 0 || done == total) {
    std::fprintf(stderr, "\r[%zu/%zu]", done, total);
    if (done == total) std::fputc('\n', stderr);
    std::fflush(stderr);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop VI-SLAM benchmarking simulator"};
  app.require_subcommand(1);

  std::string config_file;
  std::string presets_dir;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string loop_mode_s;
  app.add_option("--config", config_file, "suite/run config file (JSON)");
  app.add_option("--presets", presets_dir, "directory of preset JSON files");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "base seed")->each([&](const std::string&) {
    seed_set = true;
  });
  app.add_option("--loop-mode", loop_mode_s, "open|closed");

  auto* cmd_run = app.add_subcommand("run", "run a single case");
  std::string scenario = "s1", estimator = "gf-like", imu = "adis16448";
  double speed = 1.0;
  cmd_run->add_option("--scenario", scenario, "scenario name");
  cmd_run->add_option("--speed", speed, "desired speed, m/s");
  cmd_run->add_option("--estimator", estimator, "estimator preset");
  cmd_run->add_option("--imu", imu, "imu preset");

  auto* cmd_suite = app.add_subcommand("suite", "run the benchmark matrix");
  int repeats = -1;
  cmd_suite->add_option("--repeats", repeats, "repeats per cell");

  auto* cmd_sweep = app.add_subcommand("sweep", "sweep one estimator axis");
  std::string axis_s = "latency";
  std::vector<double> values;
  int n_seeds = 20;
  cmd_sweep->add_option("--axis", axis_s, "latency|drift");
  cmd_sweep->add_option("--values", values, "axis values, ascending")
      ->required()
      ->delimiter(',');
  cmd_sweep->add_option("--seeds", n_seeds, "seeds per value");
  cmd_sweep->add_option("--scenario", scenario, "scenario name");
  cmd_sweep->add_option("--speed", speed, "desired speed, m/s");
  cmd_sweep->add_option("--estimator", estimator, "base estimator preset");
  cmd_sweep->add_option("--imu", imu, "imu preset");

  auto* cmd_eval = app.add_subcommand("eval", "metrics on trajectory files");
  std::string ref_file, query_file;
  bool use_ate = false, align = false;
  cmd_eval->add_option("reference", ref_file, "reference path file")
      ->required();
  cmd_eval->add_option("query", query_file, "query path file")->required();
  cmd_eval->add_flag("--ate", use_ate, "absolute trajectory error");
  cmd_eval->add_flag("--align", align, "rigid alignment before ATE");

  auto* cmd_plot = app.add_subcommand("plot", "SVG from trajectory files");
  std::string desired_file;
  std::vector<std::string> run_files;
  cmd_plot->add_option("--desired", desired_file, "desired path file")
      ->required();
  cmd_plot->add_option("runs", run_files, "run path files")->required();

  auto* cmd_list = app.add_subcommand("list", "list scenarios and presets");

  // Let the global flags (--out, --seed, ...) appear after the
  // subcommand name too.
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    Library lib = Library::builtin();
    if (!presets_dir.empty()) lib.load_config_dir(presets_dir);

    RunConfig base;
    SuiteSpec spec;
    bool have_suite_cfg = false;
    if (!config_file.empty()) {
      spec = load_suite_config(config_file, lib);
      base = spec.base;
      have_suite_cfg = true;
    }
    if (seed_set) base.seed = seed;
    if (!loop_mode_s.empty()) base.loop_mode = parse_loop_mode(loop_mode_s);

    if (*cmd_run) {
      RunConfig cfg = base;
      if (cmd_run->count("--scenario") || !have_suite_cfg)
        cfg.scenario = scenario;
      if (cmd_run->count("--speed") || !have_suite_cfg) cfg.v_des = speed;
      if (cmd_run->count("--estimator") || !have_suite_cfg)
        cfg.estimator = estimator;
      if (cmd_run->count("--imu") || !have_suite_cfg) cfg.imu = imu;
      const clbench::RunResult res = clbench::run_case(cfg, lib);
      write_run_artifacts(res, out_dir);
      std::printf("rmse %.4f m  yaw %.4f rad  max %.4f m  latency %.1f ms%s\n",
                  res.metrics.rmse_trans, res.metrics.rmse_yaw,
                  res.metrics.max_err, 1000.0 * res.latency_mean,
                  res.metrics.failed ? "  FAILED" : "");
    } else if (*cmd_suite) {
      spec.base = base;
      if (repeats > 0) spec.repeats = repeats;
      const clbench::SuiteResult res =
          clbench::run_suite(spec, lib, print_progress);
      std::filesystem::create_directories(out_dir);
      clbench::write_text(out_dir + "/suite.json",
                          clbench::suite_summary_json(res));
      for (const std::string& f : clbench::write_tables(res, out_dir))
        std::printf("wrote %s\n", f.c_str());
      std::printf("wrote %s/suite.json (%zu runs)\n", out_dir.c_str(),
                  res.runs.size());
    } else if (*cmd_sweep) {
      clbench::SweepAxis axis;
      if (axis_s == "latency") {
        axis = clbench::SweepAxis::latency;
      } else if (axis_s == "drift") {
        axis = clbench::SweepAxis::drift_rate_trans;
      } else {
        throw clbench::ConfigError("axis must be latency or drift");
      }
      RunConfig cfg = base;
      if (cmd_sweep->count("--scenario") || !have_suite_cfg)
        cfg.scenario = scenario;
      if (cmd_sweep->count("--speed") || !have_suite_cfg) cfg.v_des = speed;
      if (cmd_sweep->count("--estimator") || !have_suite_cfg)
        cfg.estimator = estimator;
      if (cmd_sweep->count("--imu") || !have_suite_cfg) cfg.imu = imu;
      const std::vector<clbench::SweepPoint> pts =
          clbench::sweep(cfg, axis, values, n_seeds, lib);
      std::filesystem::create_directories(out_dir);
      clbench::write_text(out_dir + "/sweep.json",
                          clbench::sweep_summary_json(axis, pts));
      for (const clbench::SweepPoint& p : pts)
        std::printf("%-10g rmse %.4f +- %.4f m\n", p.value, p.mean_rmse,
                    p.stderr_rmse);
    } else if (*cmd_eval) {
      const clbench::TimedPath ref = clbench::read_path(ref_file);
      const clbench::TimedPath query = clbench::read_path(query_file);
      const clbench::MetricReport m =
          use_ate ? clbench::ate(query, ref, align)
                  : clbench::tracking_rmse(ref, query);
      nlohmann::ordered_json j{{"metric", use_ate ? "ate" : "tracking_rmse"},
                               {"aligned", use_ate && align},
                               {"rmse_trans", m.rmse_trans},
                               {"rmse_yaw", m.rmse_yaw},
                               {"max_err", m.max_err},
                               {"n_samples", m.n_samples},
                               {"failed", m.failed}};
      std::filesystem::create_directories(out_dir);
      clbench::write_text(out_dir + "/eval.json", j.dump(2) + "\n");
      std::printf("rmse %.6f m  yaw %.6f rad  max %.6f m  n %zu%s\n",
                  m.rmse_trans, m.rmse_yaw, m.max_err, m.n_samples,
                  m.failed ? "  FAILED" : "");
    } else if (*cmd_plot) {
      const clbench::TimedPath desired = clbench::read_path(desired_file);
      std::vector<clbench::PlotSeries> series;
      for (const std::string& f : run_files)
        series.push_back({std::filesystem::path(f).stem().string(),
                          clbench::read_path(f)});
      std::filesystem::create_directories(out_dir);
      clbench::write_text(out_dir + "/plot.svg",
                          clbench::render_svg(desired, series));
      nlohmann::ordered_json j{{"desired", desired_file},
                               {"runs", run_files},
                               {"svg", out_dir + "/plot.svg"}};
      clbench::write_text(out_dir + "/plot.json", j.dump(2) + "\n");
      std::printf("wrote %s/plot.svg\n", out_dir.c_str());
    } else if (*cmd_list) {
      nlohmann::ordered_json j{{"scenarios", lib.scenario_names()},
                               {"imus", lib.imu_names()},
                               {"estimators", lib.estimator_names()}};
      std::filesystem::create_directories(out_dir);
      clbench::write_text(out_dir + "/list.json", j.dump(2) + "\n");
      std::printf("scenarios:");
      for (const auto& s : lib.scenario_names()) std::printf(" %s", s.c_str());
      std::printf("\nimus:");
      for (const auto& s : lib.imu_names()) std::printf(" %s", s.c_str());
      std::printf("\nestimators:");
      for (const auto& s : lib.estimator_names())
        std::printf(" %s", s.c_str());
      std::printf("\n");
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
