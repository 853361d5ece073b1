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

#ifndef P4NFV_SCENARIO_HPP_
#define P4NFV_SCENARIO_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "p4nfv/orchestrator.hpp"
#include "p4nfv/switch_sim.hpp"

namespace p4nfv {

struct RunConfig {
  CompileMode mode = CompileMode::kHardSwap;
  uint64_t base_compile_us = 500000;
  uint64_t per_table_us = 10000;
  std::string state_dir = "state";
  std::string repo_dir = "repo";
  std::string output_dir = "out";
};

// Strict JSON config: unknown keys are rejected, everything is optional.
RunConfig load_run_config(const std::string &path);

// One line of a scenario script. The uniform shape is
//   <time_us> <KIND> <args...>
// with `#` comments and blank lines ignored; a packet line may also use the
// trace spelling `PKT <time_us> <port> <hex>`.
struct ScenarioEvent {
  enum class Kind {
    kUpload,      // UPLOAD <function.json>
    kInstantiate, // INSTANTIATE <descriptor.json> <principal>
    kTerminate,   // TERMINATE <ns_id> <principal>
    kDay2Insert,  // DAY2_INSERT <principal> <ns> <function|-> <table> <keys> <action> [params]
    kDay2Delete,  // DAY2_DELETE <principal> <ns> <function|-> <table> <keys>
    kAdminL2,     // ADMIN_L2 <mac> <port>
    kPkt,         // PKT <port> <hex-bytes>
    kExpect,      // EXPECT verdict|stats|active|error ...
  };
  enum class Expect { kVerdict, kStats, kActive, kError };

  int line = 0;
  uint64_t time = 0;
  Kind kind = Kind::kPkt;

  std::string path;
  std::string principal;
  std::string ns_id;
  std::string function;
  std::string table;
  std::string action;
  std::vector<KeyValue> key_values;
  std::vector<uint64_t> params;
  uint64_t mac = 0;
  int port = 0;
  std::vector<uint8_t> bytes;

  Expect expect = Expect::kVerdict;
  std::string expect_a;  // FORWARD|DROP / stats path / csv of ns ids / code
  std::string expect_b;  // port or reason / expected value
};

// Throws Error(SCENARIO_PARSE) with the offending line number.
std::vector<ScenarioEvent> parse_scenario(const std::string &path);

struct RunResult {
  // 0 success, 1 assertion failure, 2 scenario/config parse error,
  // 3 unclaimed event error.
  int exit_code = 0;
  std::string message;
  int events_executed = 0;
  int assertions_passed = 0;
};

// Executes the script on one repo/store/switch/orchestrator stack and writes
// report-NNNN.json per lifecycle operation, stats.json, and the composed
// program artifacts under <output_dir>/build. Output bytes depend only on
// the scenario and config contents.
RunResult run_scenario(const std::string &scenario_path,
                       const RunConfig &config, std::ostream &log);

}  // namespace p4nfv

#endif  // P4NFV_SCENARIO_HPP_
