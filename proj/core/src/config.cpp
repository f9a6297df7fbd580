#include "eonsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "eonsim/errors.hpp"

namespace eonsim {

using nlohmann::json;

void RunConfig::validate() const {
  if (slot_count <= 0) throw ValidationError("config: slot_count must be positive");
  if (slot_width_ghz <= 0) {
    throw ValidationError("config: slot_width_ghz must be positive");
  }
  if (guard_slots < 0) throw ValidationError("config: guard_slots must be >= 0");
  if (k <= 0) throw ValidationError("config: k must be positive");
  if (loads.empty()) throw ValidationError("config: load list is empty");
  for (double l : loads) {
    if (l <= 0) throw ValidationError("config: loads must be positive");
  }
  if (mean_holding_s <= 0) {
    throw ValidationError("config: mean_holding_s must be positive");
  }
  if (priority_weights.size() != kPriorityClasses) {
    throw ValidationError("config: expected 3 priority weights");
  }
  for (double w : priority_weights) {
    if (w <= 0) throw ValidationError("config: priority weights must be positive");
  }
  if (bit_rates_gbps.empty()) {
    throw ValidationError("config: bit rate list is empty");
  }
  for (int r : bit_rates_gbps) {
    if (!reach_km.contains(r)) {
      throw ValidationError("config: bit rate " + std::to_string(r) +
                            " has no reach table row");
    }
  }
  if (requests_per_run <= 0) {
    throw ValidationError("config: requests_per_run must be positive");
  }
  if (failure_count < 0 || failure_count > 4) {
    throw ValidationError("config: failure_count must be in 0..4");
  }
  if (failure_count > 0 &&
      (failure_at < 1 || failure_at >= requests_per_run)) {
    throw ValidationError("config: failure_at must lie inside the run");
  }
  if (replications < 1) {
    throw ValidationError("config: replications must be >= 1");
  }
  if (policies.empty()) throw ValidationError("config: policy list is empty");
  if (threads < 0) throw ValidationError("config: threads must be >= 0");
  if (norm_bitrate_divisor <= 0 || norm_priority_divisor <= 0) {
    throw ValidationError("config: normalization divisors must be positive");
  }
  reach_table();  // checks format ordering and reach monotonicity
}

ReachTable RunConfig::reach_table() const {
  return ReachTable(modulations, reach_km);
}

SimParams RunConfig::sim_params() const {
  SimParams p;
  p.slot_count = slot_count;
  p.rsa.k = k;
  p.rsa.slot_width_ghz = slot_width_ghz;
  p.rsa.guard_slots = guard_slots;
  p.rsa.reach = reach_table();
  p.norm.bitrate_divisor = norm_bitrate_divisor;
  p.norm.priority_divisor = norm_priority_divisor;
  return p;
}

TrafficConfig RunConfig::traffic_config() const {
  TrafficConfig t;
  t.mean_holding_s = mean_holding_s;
  t.priority_weights = priority_weights;
  t.bit_rates_gbps = bit_rates_gbps;
  t.request_count = requests_per_run;
  return t;
}

FailureSpec RunConfig::failure_spec() const {
  FailureSpec f;
  f.after_request = failure_at;
  f.count = failure_count;
  return f;
}

namespace {

json to_json(const RunConfig& c) {
  json j;
  j["topology"] = c.topology_path;
  j["slot_count"] = c.slot_count;
  j["slot_width_ghz"] = c.slot_width_ghz;
  j["guard_slots"] = c.guard_slots;
  j["k"] = c.k;
  json mods = json::array();
  for (const ModulationFormat& m : c.modulations) {
    mods.push_back({{"name", m.name}, {"se_per_pol", m.se_per_pol}});
  }
  j["modulations"] = mods;
  json reach = json::object();
  for (const auto& [rate, row] : c.reach_km) {
    reach[std::to_string(rate)] = row;
  }
  j["reach_km"] = reach;
  j["loads"] = c.loads;
  j["mean_holding_s"] = c.mean_holding_s;
  j["priority_weights"] = c.priority_weights;
  j["bit_rates_gbps"] = c.bit_rates_gbps;
  j["requests_per_run"] = c.requests_per_run;
  j["failure_at"] = c.failure_at;
  j["failure_count"] = c.failure_count;
  j["replications"] = c.replications;
  j["seed"] = c.seed;
  json pols = json::array();
  for (Policy p : c.policies) pols.push_back(policy_name(p));
  j["policies"] = pols;
  j["output_dir"] = c.output_dir;
  j["threads"] = c.threads;
  j["norm_bitrate_divisor"] = c.norm_bitrate_divisor;
  j["norm_priority_divisor"] = c.norm_priority_divisor;
  return j;
}

}  // namespace

std::string RunConfig::normalized_json() const {
  return to_json(*this).dump(2) + "\n";
}

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config: top level must be an object");

  static const std::set<std::string> known = {
      "topology",       "slot_count",      "slot_width_ghz",
      "guard_slots",    "k",               "modulations",
      "reach_km",       "loads",           "mean_holding_s",
      "priority_weights", "bit_rates_gbps", "requests_per_run",
      "failure_at",     "failure_count",   "replications",
      "seed",           "policies",        "output_dir",
      "threads",        "norm_bitrate_divisor", "norm_priority_divisor"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw ValidationError("config: unknown key '" + key + "'");
    }
  }

  RunConfig c;
  try {
    if (j.contains("topology")) c.topology_path = j["topology"].get<std::string>();
    if (j.contains("slot_count")) c.slot_count = j["slot_count"].get<int>();
    if (j.contains("slot_width_ghz")) {
      c.slot_width_ghz = j["slot_width_ghz"].get<double>();
    }
    if (j.contains("guard_slots")) c.guard_slots = j["guard_slots"].get<int>();
    if (j.contains("k")) c.k = j["k"].get<int>();
    if (j.contains("modulations")) {
      c.modulations.clear();
      for (const auto& m : j["modulations"]) {
        c.modulations.push_back(
            {m.at("name").get<std::string>(), m.at("se_per_pol").get<int>()});
      }
    }
    if (j.contains("reach_km")) {
      c.reach_km.clear();
      for (const auto& [rate, row] : j["reach_km"].items()) {
        c.reach_km[std::stoi(rate)] = row.get<std::vector<double>>();
      }
    }
    if (j.contains("loads")) c.loads = j["loads"].get<std::vector<double>>();
    if (j.contains("mean_holding_s")) {
      c.mean_holding_s = j["mean_holding_s"].get<double>();
    }
    if (j.contains("priority_weights")) {
      c.priority_weights = j["priority_weights"].get<std::vector<double>>();
    }
    if (j.contains("bit_rates_gbps")) {
      c.bit_rates_gbps = j["bit_rates_gbps"].get<std::vector<int>>();
    }
    if (j.contains("requests_per_run")) {
      c.requests_per_run = j["requests_per_run"].get<std::int64_t>();
    }
    if (j.contains("failure_at")) c.failure_at = j["failure_at"].get<std::int64_t>();
    if (j.contains("failure_count")) {
      c.failure_count = j["failure_count"].get<int>();
    }
    if (j.contains("replications")) c.replications = j["replications"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("policies")) {
      c.policies.clear();
      for (const auto& p : j["policies"]) {
        const auto parsed = parse_policy(p.get<std::string>());
        if (!parsed) {
          throw ValidationError("config: unknown policy '" +
                                p.get<std::string>() + "'");
        }
        c.policies.push_back(*parsed);
      }
    }
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    if (j.contains("norm_bitrate_divisor")) {
      c.norm_bitrate_divisor = j["norm_bitrate_divisor"].get<double>();
    }
    if (j.contains("norm_priority_divisor")) {
      c.norm_priority_divisor = j["norm_priority_divisor"].get<double>();
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

}  // namespace eonsim
