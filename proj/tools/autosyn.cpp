// Command-line front end: run one scenario, sweep a parameter, replay the
// walkthrough scenarios, or evaluate the failure-probability formulas.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "autosyn/bounds.hpp"
#include "autosyn/scenario.hpp"
#include "autosyn/sim.hpp"
#include "autosyn/trace.hpp"

namespace fs = std::filesystem;
using autosyn::json;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

int run_one(autosyn::Scenario sc, uint64_t seed, const fs::path& out_dir, bool with_trace) {
  fs::create_directories(out_dir);
  autosyn::TraceWriter tw;
  if (with_trace) tw = autosyn::TraceWriter((out_dir / "trace.jsonl").string());
  autosyn::Simulation sim(sc, seed, &tw);
  int code = sim.run();
  write_file(out_dir / "report.json", sim.report().dump(2) + "\n");
  write_file(out_dir / "metrics.csv", sim.metrics_csv());
  std::cout << sc.name << ": exit " << code << ", slots "
            << sim.report()["run"]["slots_completed"].get<int64_t>() << ", ref height "
            << sim.report()["reference"]["height"].get<int64_t>() << ", violations "
            << sim.report()["checks"]["violations"].get<int64_t>() << "\n";
  return code;
}

void apply_axis(autosyn::Scenario& sc, const std::string& axis, double v) {
  if (axis == "eta")
    sc.eta_net = v;
  else if (axis == "f")
    sc.params.f = v;
  else if (axis == "R")
    sc.params.R = static_cast<int64_t>(v);
  else if (axis == "t_round1")
    sc.t_round1 = static_cast<int64_t>(v);
  else if (axis == "t_run")
    sc.t_run = static_cast<int64_t>(v);
  else if (axis == "slots")
    sc.slots = static_cast<int64_t>(v);
  else if (axis == "seed")
    sc.seed = static_cast<uint64_t>(v);
  else if (axis == "k_sel")
    sc.params.k_sel = static_cast<int64_t>(v);
  else
    throw std::runtime_error("unknown sweep axis: " + axis);
}

json bounds_table(const json& in) {
  autosyn::BoundParams p;
  p.L = in.value("L", 1.0e4);
  p.R = in.value("R", 1.0e3);
  p.Q = in.value("Q", 1.0e5);
  p.f = in.value("f", 0.05);
  p.beta = in.value("beta", 0.9);
  p.eta = in.value("eta", 2.0 / 3.0);
  p.eps = in.value("eps", 0.5);

  json out;
  out["params"] = {{"L", p.L},     {"R", p.R},     {"Q", p.Q},  {"f", p.f},
                   {"beta", p.beta}, {"eta", p.eta}, {"eps", p.eps}};
  out["lift"] = autosyn::eps_lift(p);
  if (in.contains("k_cp")) out["cp"] = autosyn::bound_cp(p, in["k_cp"].get<double>());
  if (in.contains("s_cg")) out["cg"] = autosyn::bound_cg(p, in["s_cg"].get<double>());
  if (in.contains("s_ecq")) out["ecq"] = autosyn::bound_ecq(p, in["s_ecq"].get<double>());
  if (in.contains("k_cq")) out["cq"] = autosyn::bound_cq(p, in["k_cq"].get<double>());
  if (in.contains("k_t4")) out["theorem4"] = autosyn::theorem4(p, in["k_t4"].get<double>());
  if (in.contains("k_c2") && in.contains("r"))
    out["corollary2"] = autosyn::corollary2(p, in["k_c2"].get<double>(), in["r"].get<double>());
  if (in.contains("k_t2")) {
    auto c = autosyn::theorem2(p, in["k_t2"].get<double>());
    json t2;
    t2["total"] = c.total;
    t2["term_growth"] = c.term_growth;
    t2["term_cg"] = c.term_cg;
    t2["term_ecq"] = c.term_ecq;
    t2["term_cp"] = c.term_cp;
    t2["constraints_ok"] = c.constraints_ok;
    t2["note"] = c.note;
    out["theorem2"] = t2;
  }
  out["floors"] = {{"s_cg", autosyn::floor_s_cg(p)},
                   {"s_ecq", autosyn::floor_s_ecq(p)},
                   {"k_cq", autosyn::pinned_k_cq(p)},
                   {"tau_cg", autosyn::tau_cg(p)},
                   {"mu_cq", autosyn::mu_cq(p)},
                   {"r_gate_main", autosyn::r_gate_main(p)},
                   {"r_gate_single_window", autosyn::r_gate_single_window(p)}};
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"autosyn: deterministic simulator for time-based proof of stake"};
  app.require_subcommand(1);

  std::string config, out_dir = "out", axis, figure_id, params_file;
  uint64_t seed = 0;
  bool seed_set = false;
  std::vector<double> values;
  bool no_trace = false;

  auto* run_cmd = app.add_subcommand("run", "run one scenario");
  run_cmd->add_option("--config", config, "scenario file (json)")->required();
  run_cmd->add_option("--seed", seed, "override the scenario seed")->each([&](const std::string&) {
    seed_set = true;
  });
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_flag("--no-trace", no_trace, "skip trace.jsonl");

  auto* sweep_cmd = app.add_subcommand("sweep", "run a scenario across parameter values");
  sweep_cmd->add_option("--config", config, "scenario file (json)")->required();
  sweep_cmd->add_option("--axis", axis, "parameter to vary")->required();
  sweep_cmd->add_option("--values", values, "values for the axis")->delimiter(',');
  sweep_cmd->add_option("--out", out_dir, "output directory");
  sweep_cmd->add_option("--seed", seed, "override the scenario seed")
      ->each([&](const std::string&) { seed_set = true; });

  auto* fig_cmd = app.add_subcommand("figures", "replay a walkthrough scenario");
  fig_cmd->add_option("--id", figure_id, "fig1..fig5")->required();
  fig_cmd->add_option("--out", out_dir, "output directory");
  fig_cmd->add_option("--seed", seed, "override the built-in seed")->each([&](const std::string&) {
    seed_set = true;
  });

  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate the error-probability formulas");
  bounds_cmd->add_option("--params", params_file, "parameter file (json)")->required();
  bounds_cmd->add_option("--out", out_dir, "also write bounds.json here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return autosyn::kExitWrapper;
  }

  try {
    if (run_cmd->parsed()) {
      autosyn::Scenario sc = autosyn::scenario_from_json(load_json(config));
      return run_one(sc, seed_set ? seed : sc.seed, out_dir, !no_trace);
    }
    if (sweep_cmd->parsed()) {
      autosyn::Scenario base = autosyn::scenario_from_json(load_json(config));
      fs::create_directories(out_dir);
      json table = json::array();
      int worst = autosyn::kExitClean;
      for (size_t i = 0; i < values.size(); ++i) {
        autosyn::Scenario sc = base;
        apply_axis(sc, axis, values[i]);
        sc.name = base.name + "-" + axis + "-" + std::to_string(values[i]);
        fs::path sub = fs::path(out_dir) / (axis + "-" + std::to_string(i));
        int code = run_one(sc, seed_set ? seed : sc.seed, sub, false);
        worst = std::max(worst, code);
        json row;
        row["axis"] = axis;
        row["value"] = values[i];
        row["dir"] = sub.string();
        row["exit_code"] = code;
        table.push_back(row);
      }
      write_file(fs::path(out_dir) / "sweep.json", table.dump(2) + "\n");
      return worst;
    }
    if (fig_cmd->parsed()) {
      autosyn::Scenario sc = autosyn::make_figure_scenario(figure_id);
      return run_one(sc, seed_set ? seed : sc.seed, out_dir, true);
    }
    if (bounds_cmd->parsed()) {
      json out = bounds_table(load_json(params_file));
      std::cout << out.dump(2) << "\n";
      if (bounds_cmd->count("--out")) {
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / "bounds.json", out.dump(2) + "\n");
      }
      return autosyn::kExitClean;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return autosyn::kExitWrapper;
  }
  return autosyn::kExitWrapper;
}
