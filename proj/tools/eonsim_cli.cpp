// Command-line front end: runs load sweeps of the restoration simulator
// with paired FDSP/FDFS replications and writes per-policy blocking CSVs,
// or summarizes a finished pair of result files.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eonsim/config.hpp"
#include "eonsim/errors.hpp"
#include "eonsim/experiment.hpp"
#include "eonsim/topology.hpp"

namespace {

std::vector<double> parse_load_list(const std::string& arg) {
  std::vector<double> loads;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      loads.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw eonsim::ValidationError("--loads: bad value '" + item + "'");
    }
  }
  if (loads.empty()) throw eonsim::ValidationError("--loads: empty list");
  return loads;
}

int run_main(const std::string& config_path, const std::string& loads_arg,
             std::optional<int> failures, std::optional<int> reps,
             std::optional<std::uint64_t> seed, const std::string& policy_arg,
             const std::string& out_dir, std::optional<int> threads,
             bool validate_only) {
  eonsim::RunConfig config;
  if (!config_path.empty()) config = eonsim::load_run_config(config_path);

  if (!loads_arg.empty()) config.loads = parse_load_list(loads_arg);
  if (failures) config.failure_count = *failures;
  if (reps) config.replications = *reps;
  if (seed) config.seed = *seed;
  if (!policy_arg.empty()) {
    if (policy_arg == "both") {
      config.policies = {eonsim::Policy::Fdsp, eonsim::Policy::Fdfs};
    } else if (const auto p = eonsim::parse_policy(policy_arg)) {
      config.policies = {*p};
    } else {
      throw eonsim::ValidationError("--policy must be fdsp, fdfs or both");
    }
  }
  if (!out_dir.empty()) config.output_dir = out_dir;
  if (threads) config.threads = *threads;
  config.validate();

  if (validate_only) {
    std::cout << config.normalized_json();
    return 0;
  }

  const eonsim::Topology topo =
      eonsim::load_topology_file(config.topology_path);
  std::cerr << "topology: " << config.topology_path << " ("
            << topo.node_count() << " nodes, " << topo.link_count()
            << " links)\n";
  std::cerr << "sweep: " << config.loads.size() << " loads x "
            << config.replications << " replications x "
            << config.policies.size() << " policies, "
            << config.failure_count << " failures per run\n";

  const auto rows = eonsim::run_sweep(config, topo, &std::cerr);
  const auto files = eonsim::write_result_csvs(config, rows, &std::cerr);
  for (const std::string& f : files) std::cout << f << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Survivable elastic optical network simulator: dynamic "
               "traffic, link failures, FDSP/FDFS restoration"};
  app.name("eonsim");

  std::string config_path;
  std::string loads_arg;
  std::optional<int> failures;
  std::optional<int> reps;
  std::optional<std::uint64_t> seed;
  std::string policy_arg;
  std::string out_dir;
  std::optional<int> threads;
  bool validate_only = false;

  app.add_option("--config", config_path, "Run configuration JSON file");
  app.add_option("--loads", loads_arg, "Comma-separated Erlang loads");
  app.add_option("--failures", failures, "Number of links failed per run");
  app.add_option("--reps", reps, "Replications per load");
  app.add_option("--seed", seed, "Base random seed");
  app.add_option("--policy", policy_arg, "fdsp, fdfs or both");
  app.add_option("--out", out_dir, "Output directory for result CSVs");
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");
  app.add_flag("--validate-only", validate_only,
               "Print the normalized config and exit");

  auto* summarize = app.add_subcommand(
      "summarize", "Emit FDSP-vs-FDFS percentage deltas from two result CSVs");
  std::string fdsp_path, fdfs_path, summary_out;
  summarize->add_option("--fdsp", fdsp_path, "FDSP result CSV")->required();
  summarize->add_option("--fdfs", fdfs_path, "FDFS result CSV")->required();
  summarize->add_option("--out", summary_out,
                        "Write the comparison here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (summarize->parsed()) {
      const std::string csv = eonsim::summarize_csvs(fdsp_path, fdfs_path);
      if (summary_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(summary_out, std::ios::binary | std::ios::trunc);
        if (!out) {
          throw eonsim::ValidationError("cannot write " + summary_out);
        }
        out << csv;
      }
      return 0;
    }
    return run_main(config_path, loads_arg, failures, reps, seed, policy_arg,
                    out_dir, threads, validate_only);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
