#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "autows/dma_sim.hpp"
#include "autows/dse.hpp"
#include "autows/network_io.hpp"
#include "autows/report.hpp"

namespace fs = std::filesystem;
using namespace autows;

namespace {

constexpr const char* kVersion = "autows 1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInfeasible = 2;

/// Refuses to clobber existing outputs unless --force; creates the
/// directory on demand and writes everything or nothing.
int write_outputs(const std::string& dir, bool force,
                  const std::vector<std::pair<std::string, std::string>>& files) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory " << dir << ": "
              << ec.message() << "\n";
    return kExitInputError;
  }
  for (const auto& [name, _] : files) {
    fs::path p = fs::path(dir) / name;
    if (fs::exists(p) && !force) {
      std::cerr << "error: " << p.string()
                << " exists; pass --force to overwrite\n";
      return kExitInputError;
    }
  }
  for (const auto& [name, text] : files)
    write_text_file((fs::path(dir) / name).string(), text);
  return kExitOk;
}

CalibrationTable load_calibration(const std::string& path) {
  if (path.empty()) return CalibrationTable{};
  return parse_calibration_json(read_text_file(path));
}

int cmd_dse(const std::string& net_path, const std::string& dev_arg,
            const std::string& calib_path, const DseHyperParams& hp,
            const std::string& out_dir, bool force) {
  NetworkGraph net = parse_network_json(read_text_file(net_path));
  DeviceSpec dev = load_device(dev_arg);
  CalibrationTable calib = load_calibration(calib_path);
  DesignContext ctx = DesignContext::make(std::move(net), std::move(dev),
                                          std::move(calib));
  DseResult res = run_dse(ctx, hp);

  int rc = write_outputs(
      out_dir, force,
      {{"design.json",
        serialize_design_json(ctx, res.design, hp, res.memory_ok)},
       {"breakdown.csv", render_breakdown_csv(ctx, res.design)},
       {"trace.jsonl", render_trace_jsonl(res.trace)}});
  if (rc != kExitOk) return rc;
  if (!res.design.totals.feasible) {
    std::cerr << "note: result is infeasible (area_ok="
              << res.design.totals.area_ok
              << " mem_ok=" << res.design.totals.mem_ok
              << " bw_ok=" << res.design.totals.bw_ok << ")\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

int cmd_simulate(const std::string& design_path, const std::string& dev_arg,
                 std::int64_t horizon, bool emit_events,
                 const std::string& out_dir, bool force) {
  DesignBundle bundle = parse_design_json(read_text_file(design_path));
  DeviceSpec dev = load_device(dev_arg);
  DesignContext ctx =
      DesignContext::make(bundle.net, std::move(dev), bundle.calib);
  DesignPoint d = evaluate(ctx, bundle.configs);
  SimReport rep = simulate_dma(ctx, d, horizon, emit_events);

  std::vector<std::pair<std::string, std::string>> files{
      {"sim_report.json", serialize_sim_report_json(ctx, d, rep)}};
  if (emit_events) files.emplace_back("events.jsonl", render_events_jsonl(rep));
  int rc = write_outputs(out_dir, force, files);
  if (rc != kExitOk) return rc;
  return d.totals.feasible ? kExitOk : kExitInfeasible;
}

int cmd_sweep(const std::string& net_path, const std::string& dev_arg,
              const std::string& calib_path, const std::string& param_name,
              const std::vector<double>& values, const DseHyperParams& hp,
              const std::string& out_dir, bool force) {
  NetworkGraph net = parse_network_json(read_text_file(net_path));
  DeviceSpec dev = load_device(dev_arg);
  CalibrationTable calib = load_calibration(calib_path);
  SweepParam param =
      param_name == "bw" ? SweepParam::Bandwidth : SweepParam::MemBudget;
  std::vector<SweepPoint> rows =
      run_sweep(net, dev, calib, param, values, hp);

  int rc = write_outputs(out_dir, force,
                         {{"sweep.csv", render_sweep_csv(param, rows)}});
  if (rc != kExitOk) return rc;
  for (const SweepPoint& p : rows)
    if (p.ws_feasible) return kExitOk;
  return kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weight-streaming design exploration for layer-pipelined "
               "FPGA inference accelerators"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string net_path, dev_arg, calib_path, design_path;
  std::string out_dir = ".";
  std::string sweep_param = "mem";
  std::vector<double> sweep_values;
  std::int64_t phi = 1, mu = 64, horizon = 0;
  bool vanilla = false, force = false, emit_events = false;

  CLI::App* dse = app.add_subcommand("dse", "Search a design for a network");
  dse->add_option("network", net_path, "network JSON file")->required();
  dse->add_option("device", dev_arg, "device preset name or JSON file")
      ->required();
  dse->add_option("--calib", calib_path, "calibration JSON file");
  dse->add_option("--phi", phi, "unroll increment step")
      ->check(CLI::PositiveNumber);
  dse->add_option("--mu", mu, "eviction step in words")
      ->check(CLI::PositiveNumber);
  dse->add_flag("--vanilla", vanilla, "disable weight streaming");
  dse->add_option("-o,--out", out_dir, "output directory");
  dse->add_flag("--force", force, "overwrite existing outputs");

  CLI::App* sim = app.add_subcommand("simulate", "Replay a design's weight "
                                                 "traffic");
  sim->add_option("design", design_path, "design.json file")->required();
  sim->add_option("device", dev_arg, "device preset name or JSON file")
      ->required();
  sim->add_option("--horizon", horizon, "inference count")
      ->required()
      ->check(CLI::PositiveNumber);
  sim->add_flag("--emit-events", emit_events, "write the event timeline");
  sim->add_option("-o,--out", out_dir, "output directory");
  sim->add_flag("--force", force, "overwrite existing outputs");

  CLI::App* sweep = app.add_subcommand("sweep", "Sweep a device capacity");
  sweep->add_option("network", net_path, "network JSON file")->required();
  sweep->add_option("device", dev_arg, "device preset name or JSON file")
      ->required();
  sweep->add_option("--calib", calib_path, "calibration JSON file");
  sweep->add_option("--param", sweep_param, "swept capacity")
      ->check(CLI::IsMember({"mem", "bw"}));
  sweep->add_option("--values", sweep_values,
                    "fractions of the device capacity, strictly increasing")
      ->required()
      ->delimiter(',');
  sweep->add_option("--phi", phi, "unroll increment step")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--mu", mu, "eviction step in words")
      ->check(CLI::PositiveNumber);
  sweep->add_option("-o,--out", out_dir, "output directory");
  sweep->add_flag("--force", force, "overwrite existing outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Fold CLI11's many parse/validation codes into the documented contract:
    // help and version stay success, every malformed invocation is an input
    // error.
    return app.exit(e) == 0 ? kExitOk : kExitInputError;
  }

  DseHyperParams hp;
  hp.unroll_step = phi;
  hp.evict_step = mu;
  hp.evict_enabled = !vanilla;

  try {
    if (dse->parsed())
      return cmd_dse(net_path, dev_arg, calib_path, hp, out_dir, force);
    if (sim->parsed())
      return cmd_simulate(design_path, dev_arg, horizon, emit_events, out_dir,
                          force);
    return cmd_sweep(net_path, dev_arg, calib_path, sweep_param, sweep_values,
                     hp, out_dir, force);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
