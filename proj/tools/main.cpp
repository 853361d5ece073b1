/* Copyright 2026-present the p4nfv authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "p4nfv/orchestrator.hpp"
#include "p4nfv/repo.hpp"
#include "p4nfv/scenario.hpp"
#include "p4nfv/state_store.hpp"
#include "p4nfv/switch_sim.hpp"
#include "p4nfv/util.hpp"

namespace fs = std::filesystem;
using namespace p4nfv;

namespace {

// Document/parse problems map to the usage exit code; semantic refusals are
// event errors.
int exit_code_for(Errc code) {
  switch (code) {
    case Errc::MALFORMED_DOCUMENT:
    case Errc::MISSING_FIELD:
    case Errc::BAD_TYPE:
    case Errc::UNKNOWN_FIELD:
    case Errc::SCENARIO_PARSE:
      return 2;
    default:
      return 3;
  }
}

// Every one-shot command rebuilds the full stack from the on-disk repo and
// state, so invocations compose across processes.
struct Stack {
  FunctionRepo repo;
  StateStore store;
  SwitchSim sw;
  Orchestrator orch;

  explicit Stack(const RunConfig &cfg)
      : repo(cfg.repo_dir),
        store(cfg.state_dir),
        sw(SwitchConfig{cfg.base_compile_us, cfg.per_table_us}),
        orch(repo, store, sw,
             OrchestratorConfig{cfg.mode,
                                (fs::path(cfg.output_dir) / "build").string()}) {
  }
};

// One past the newest virtual time recorded in the store, so one-shot
// commands land strictly after everything already done.
uint64_t next_time(const StateStore &store) {
  uint64_t last = 0;
  for (const auto &record : store.active_ns())
    last = std::max(last, record.instantiated_at);
  for (const auto &rule : store.all_rules())
    last = std::max(last, rule.inserted_at);
  return last + 1;
}

std::vector<KeyValue> parse_keys_arg(const std::string &arg) {
  std::vector<KeyValue> out;
  if (arg == "-") return out;
  std::string part;
  std::istringstream in(arg);
  while (std::getline(in, part, ',')) out.push_back(parse_key_value(part));
  return out;
}

std::vector<uint64_t> parse_params_arg(const std::string &arg) {
  std::vector<uint64_t> out;
  if (arg == "-" || arg.empty()) return out;
  std::string part;
  std::istringstream in(arg);
  while (std::getline(in, part, ',')) out.push_back(parse_value_token(part));
  return out;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"P4 data-plane composition testbed for NFV services"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("-c,--config", config_path,
                 "JSON run config (mode, timings, directories)");

  std::string file_arg, principal_arg = "admin", ns_arg, function_arg,
              table_arg, keys_arg, action_arg, params_arg = "-", mac_arg;
  int port_arg = 0;
  std::optional<uint64_t> at_arg;

  auto *repo_cmd = app.add_subcommand("repo", "P4 function repository");
  auto *repo_upload = repo_cmd->add_subcommand("upload", "validate and store a function");
  repo_upload->add_option("file", file_arg, "function JSON")->required();
  auto *repo_list = repo_cmd->add_subcommand("list", "list stored functions");

  auto *ns_cmd = app.add_subcommand("ns", "NS lifecycle");
  auto *ns_inst = ns_cmd->add_subcommand("instantiate", "run the instantiation workflow");
  ns_inst->add_option("file", file_arg, "NS descriptor JSON")->required();
  ns_inst->add_option("--as", principal_arg, "admin or tenant:<id>");
  ns_inst->add_option("--at", at_arg, "virtual time in us");
  auto *ns_term = ns_cmd->add_subcommand("terminate", "run the termination workflow");
  ns_term->add_option("ns_id", ns_arg, "NS to terminate")->required();
  ns_term->add_option("--as", principal_arg, "admin or tenant:<id>");
  ns_term->add_option("--at", at_arg, "virtual time in us");

  auto *day2_cmd = app.add_subcommand("day2", "control-plane rule changes");
  auto *day2_insert = day2_cmd->add_subcommand("insert", "insert or replace a rule");
  day2_insert->add_option("ns_id", ns_arg)->required();
  day2_insert->add_option("function", function_arg, "function name, or - for forward_l2")->required();
  day2_insert->add_option("table", table_arg)->required();
  day2_insert->add_option("keys", keys_arg, "comma-separated key values")->required();
  day2_insert->add_option("action", action_arg)->required();
  day2_insert->add_option("params", params_arg, "comma-separated action params");
  day2_insert->add_option("--as", principal_arg, "admin or tenant:<id>");
  day2_insert->add_option("--at", at_arg, "virtual time in us");
  auto *day2_delete = day2_cmd->add_subcommand("delete", "delete a rule");
  day2_delete->add_option("ns_id", ns_arg)->required();
  day2_delete->add_option("function", function_arg, "function name, or - for forward_l2")->required();
  day2_delete->add_option("table", table_arg)->required();
  day2_delete->add_option("keys", keys_arg, "comma-separated key values")->required();
  day2_delete->add_option("--as", principal_arg, "admin or tenant:<id>");
  day2_delete->add_option("--at", at_arg, "virtual time in us");

  auto *admin_cmd = app.add_subcommand("admin", "administrator operations");
  auto *admin_l2 = admin_cmd->add_subcommand("l2", "map a MAC to a switch port in forward_l2");
  admin_l2->add_option("mac", mac_arg, "aa:bb:cc:dd:ee:ff")->required();
  admin_l2->add_option("port", port_arg)->required();
  admin_l2->add_option("--at", at_arg, "virtual time in us");

  auto *run_cmd = app.add_subcommand("run", "execute a scenario script");
  run_cmd->add_option("scenario", file_arg, "scenario file")->required();

  auto *render_cmd = app.add_subcommand("render", "print the composed program as pseudo-P4");
  auto *stats_cmd = app.add_subcommand("stats", "print the last run's stats");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_run_config(config_path);

    if (repo_upload->parsed()) {
      FunctionRepo repo(cfg.repo_dir);
      P4FunctionDef def = parse_function_def(read_file(file_arg));
      repo.upload(def);
      for (const auto &entry : repo.list())
        if (entry.name == def.name && entry.version == def.version)
          std::cout << entry.name << " " << entry.version << " " << entry.hash
                    << "\n";
      return 0;
    }
    if (repo_list->parsed()) {
      FunctionRepo repo(cfg.repo_dir);
      for (const auto &entry : repo.list())
        std::cout << entry.name << " " << entry.version << " " << entry.hash
                  << "\n";
      return 0;
    }
    if (ns_inst->parsed() || ns_term->parsed()) {
      Stack stack(cfg);
      uint64_t at = at_arg.value_or(next_time(stack.store));
      LifecycleReport report =
          ns_inst->parsed()
              ? stack.orch.instantiate_ns(parse_descriptor(read_file(file_arg)),
                                          parse_principal(principal_arg), at)
              : stack.orch.terminate_ns(ns_arg, parse_principal(principal_arg),
                                        at);
      std::cout << report.to_json().dump(2) << "\n";
      return report.success() ? 0 : 3;
    }
    if (day2_insert->parsed()) {
      Stack stack(cfg);
      uint64_t at = at_arg.value_or(next_time(stack.store));
      uint64_t id = stack.orch.day2_insert_rule(
          parse_principal(principal_arg), ns_arg,
          function_arg == "-" ? "" : function_arg, table_arg,
          parse_keys_arg(keys_arg), action_arg, parse_params_arg(params_arg),
          at);
      std::cout << "rule_id " << id << "\n";
      return 0;
    }
    if (day2_delete->parsed()) {
      Stack stack(cfg);
      uint64_t at = at_arg.value_or(next_time(stack.store));
      stack.orch.day2_delete_rule(parse_principal(principal_arg), ns_arg,
                                  function_arg == "-" ? "" : function_arg,
                                  table_arg, parse_keys_arg(keys_arg), at);
      std::cout << "deleted\n";
      return 0;
    }
    if (admin_l2->parsed()) {
      Stack stack(cfg);
      uint64_t at = at_arg.value_or(next_time(stack.store));
      uint64_t id = stack.orch.admin_set_l2(Principal::make_admin(),
                                            parse_mac(mac_arg), port_arg, at);
      std::cout << "rule_id " << id << "\n";
      return 0;
    }
    if (run_cmd->parsed()) {
      RunResult result = run_scenario(file_arg, cfg, std::cout);
      if (!result.message.empty()) std::cerr << result.message << "\n";
      return result.exit_code;
    }
    if (render_cmd->parsed()) {
      Stack stack(cfg);
      std::cout << render_pseudo_p4(stack.sw.active_program());
      return 0;
    }
    if (stats_cmd->parsed()) {
      fs::path saved = fs::path(cfg.output_dir) / "stats.json";
      if (fs::exists(saved)) {
        std::cout << read_file(saved.string());
      } else {
        Stack stack(cfg);
        std::cout << stack.sw.stats().dump(2) << "\n";
      }
      return 0;
    }
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
