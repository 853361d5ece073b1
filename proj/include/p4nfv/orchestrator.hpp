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

#ifndef P4NFV_ORCHESTRATOR_HPP_
#define P4NFV_ORCHESTRATOR_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "p4nfv/repo.hpp"
#include "p4nfv/state_store.hpp"
#include "p4nfv/switch_sim.hpp"

namespace p4nfv {

struct Principal {
  bool admin = false;
  std::string tenant_id;  // empty for the admin

  static Principal make_admin() { return {true, ""}; }
  static Principal tenant(const std::string &id) { return {false, id}; }
  std::string str() const { return admin ? "admin" : "tenant:" + tenant_id; }
};

// Parses "admin" or "tenant:<id>".
Principal parse_principal(const std::string &text);

struct StepRecord {
  std::string name;
  uint64_t started = 0;
  uint64_t finished = 0;
  std::string outcome;  // "ok" or "failed(<ERROR>)"
};

struct LifecycleReport {
  std::string ns_id;
  std::string operation;  // "instantiate" or "terminate"
  std::string status = "SUCCESS";  // or "ABORTED"
  std::vector<StepRecord> steps;
  uint64_t compile_start = 0;
  uint64_t compile_duration = 0;
  std::string compile_mode;
  std::string program_hash;  // program live after the swap (success only)
  std::string abort_step;    // step name, or "precheck"
  std::string abort_error;   // error code name
  std::string abort_detail;

  bool success() const { return status == "SUCCESS"; }
  nlohmann::json to_json() const;
};

struct OrchestratorConfig {
  CompileMode mode = CompileMode::kHardSwap;
  // When set, every composed program is written here as
  // program-<hash>.json and program-<hash>.p4.txt.
  std::string artifact_dir;
};

// Single-switch NS lifecycle driver. Owns the instantiation and termination
// workflows, tenant/admin authorization for day-2 changes, and the replay of
// cp_rules into every freshly compiled program.
class Orchestrator {
 public:
  // Brings the switch in line with the store: composes over the recorded
  // active NSs (the floor program when none), activates it without a compile
  // window, raises the active members' ports, and replays cp_rules. Skipped
  // when the switch already runs a program.
  Orchestrator(FunctionRepo &repo, StateStore &store, SwitchSim &sw,
               OrchestratorConfig config = {});

  // Workflow failures come back as ABORTED reports with the failing step
  // named; the store and switch are left as before the call.
  LifecycleReport instantiate_ns(const NsDescriptor &desc,
                                 const Principal &principal, uint64_t time);
  LifecycleReport terminate_ns(const std::string &ns_id,
                               const Principal &principal, uint64_t time);

  // Day-2 surface; throws Error on refusal. An empty function_name targets
  // the global forward_l2, which only the admin may touch.
  uint64_t day2_insert_rule(const Principal &principal,
                            const std::string &ns_id,
                            const std::string &function_name,
                            const std::string &table_name,
                            const std::vector<KeyValue> &key_values,
                            const std::string &action,
                            const std::vector<uint64_t> &params,
                            uint64_t time);
  void day2_delete_rule(const Principal &principal, const std::string &ns_id,
                        const std::string &function_name,
                        const std::string &table_name,
                        const std::vector<KeyValue> &key_values,
                        uint64_t time);
  uint64_t admin_set_l2(const Principal &principal, uint64_t mac, int port,
                        uint64_t time);

  const OrchestratorConfig &config() const { return config_; }

 private:
  std::vector<NsDescriptor> active_descriptors() const;
  std::set<int> active_member_ports() const;
  void replay_rules();
  void write_artifacts(const ComposedProgram &program) const;
  TableRef resolve_day2_target(const Principal &principal,
                               const std::string &ns_id,
                               const std::string &function_name,
                               const std::string &table_name) const;

  FunctionRepo &repo_;
  StateStore &store_;
  SwitchSim &switch_;
  OrchestratorConfig config_;
};

}  // namespace p4nfv

#endif  // P4NFV_ORCHESTRATOR_HPP_
