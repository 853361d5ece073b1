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

#ifndef P4NFV_SWITCH_SIM_HPP_
#define P4NFV_SWITCH_SIM_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "p4nfv/composer.hpp"

namespace p4nfv {

struct Frame {
  uint64_t timestamp_us = 0;
  int ingress_port = 0;
  std::vector<uint8_t> bytes;
};

enum class DropReason {
  NO_VLAN_TAG,
  UNKNOWN_VLAN,
  TABLE_DROP,
  L2_MISS,
  RECOMPILING,
  TTL_EXPIRED,
  PARSE_ERROR,
  PORT_DOWN,
};

const char *drop_reason_name(DropReason r);
const std::vector<DropReason> &all_drop_reasons();

struct TraceEntry {
  std::string stage;
  std::string table;  // "-" for non-table stages
  std::string match;  // "hit" / "miss" / "-"
  std::string action;

  // "<stage>:<table>:<hit|miss>:<action>"
  std::string line() const {
    return stage + ":" + table + ":" + match + ":" + action;
  }
};

struct Verdict {
  bool forwarded = false;
  int egress_port = -1;
  DropReason reason = DropReason::PARSE_ERROR;
  std::vector<TraceEntry> trace;
  // Frame bytes as they would leave the switch (MACs/TTL/checksum may have
  // been rewritten). Only meaningful on FORWARD.
  std::vector<uint8_t> egress_bytes;

  std::string outcome_str() const;
};

struct ParsedHeader {
  bool present = false;
  bool valid = false;
  size_t byte_offset = 0;
};

struct ParsedHeaders {
  std::map<std::string, ParsedHeader> headers;
  bool parse_error = false;

  const ParsedHeader *find(const std::string &name) const {
    auto it = headers.find(name);
    return it == headers.end() ? nullptr : &it->second;
  }
};

// Executes a parse plan against raw bytes. Stops at the first inapplicable
// transition; flags parse_error if the frame ends mid-header on the path.
ParsedHeaders parse_with_plan(const ParsePlan &plan,
                              const std::vector<uint8_t> &bytes);

// Reads the bit field at header_offset+layout from the frame (big endian).
uint64_t extract_bits(const std::vector<uint8_t> &bytes, size_t byte_base,
                      int bit_offset, int bit_width);
void deposit_bits(std::vector<uint8_t> &bytes, size_t byte_base,
                  int bit_offset, int bit_width, uint64_t value);

struct KeyValue {
  uint64_t value = 0;
  std::optional<uint8_t> prefix_len;  // lpm keys only

  std::string str() const;
  bool operator==(const KeyValue &) const = default;
};

std::string key_values_str(const std::vector<KeyValue> &kvs);

// Accepts "<value>[/<prefix>]" where value may be decimal, 0x hex, a
// colon-separated MAC, or a dotted IPv4 address.
KeyValue parse_key_value(const std::string &token);

enum class CompileMode { kHardSwap, kSlowMode };

const char *compile_mode_name(CompileMode m);
CompileMode compile_mode_from_name(const std::string &name);

struct CompileJob {
  std::string program_hash;
  uint64_t start = 0;
  uint64_t duration = 0;
  CompileMode mode = CompileMode::kHardSwap;

  uint64_t swap_time() const { return start + duration; }
};

struct SwitchConfig {
  uint64_t base_compile_us = 500000;
  uint64_t per_table_us = 10000;
};

struct ScopeStats {
  uint64_t offered = 0;
  uint64_t delivered = 0;
  std::map<std::string, uint64_t> dropped;  // reason name -> count
};

struct EntryView {
  std::string key;  // canonical "v1,v2/p" form
  std::string action;
  std::vector<uint64_t> params;
  int priority = 0;

  bool operator==(const EntryView &) const = default;
};

// A single-switch P4 pipeline running in virtual time. Lifecycle commands and
// frames must be fed in non-decreasing timestamp order; behavior equals the
// serial order of submission.
class SwitchSim {
 public:
  explicit SwitchSim(SwitchConfig config = {});

  // Models "load, compile, and run": the new program serves frames from
  // start+duration on, with every table empty and every port down. Before
  // that, hard_swap drops everything as RECOMPILING while slow_mode keeps
  // serving with the current program. Throws Error(COMPILE_IN_PROGRESS) on
  // overlap.
  CompileJob load_program(const ComposedProgram &program, uint64_t at,
                          CompileMode mode);

  // Bootstrap/recovery path: activates immediately with no compile window.
  void activate_program(const ComposedProgram &program);

  // Commits a pending swap whose time has come and advances the clock.
  void advance_to(uint64_t t);

  // Abandons a staged compile, including its reserved downtime window. The
  // serving program is untouched. No-op without a pending job.
  void cancel_pending();

  uint64_t now() const { return now_; }
  bool compile_pending() const { return pending_.has_value(); }
  const CompileJob *pending_job() const;
  bool has_program() const { return active_.has_value(); }
  const ComposedProgram &active_program() const;

  // Exactly the given ports are up afterwards. Targets the staged program
  // while a compile is pending.
  void configure_ports(const std::set<int> &ports);

  // Parses with the serving program's plan.
  ParsedHeaders parse_frame(const std::vector<uint8_t> &bytes) const;

  Verdict process_packet(const Frame &frame);

  // CP entry manipulation; duplicate keys upsert. Targets the staged program
  // while a compile is pending. Throws UNKNOWN_TABLE / BAD_KEY /
  // ACTION_NOT_PERMITTED / TABLE_FULL, and NOT_FOUND on deleting an absent
  // key.
  void insert_entry(const std::string &qualified_table,
                    const std::vector<KeyValue> &key_values,
                    const std::string &action,
                    const std::vector<uint64_t> &params, int priority = 0);
  void delete_entry(const std::string &qualified_table,
                    const std::vector<KeyValue> &key_values);

  // Live entries of the serving program, per table, sorted by key.
  std::map<std::string, std::vector<EntryView>> dump_entries() const;

  nlohmann::json stats() const;
  const ScopeStats &global_stats() const { return global_; }
  const std::map<std::string, ScopeStats> &per_ns_stats() const {
    return per_ns_;
  }
  const std::vector<std::pair<uint64_t, uint64_t>> &downtime_windows() const {
    return downtime_windows_;
  }

  const SwitchConfig &config() const { return config_; }

 private:
  struct RuntimeEntry {
    std::vector<KeyValue> key;
    std::string action;
    std::vector<uint64_t> params;
    int priority = 0;
    uint64_t counter = 0;  // incremented by the count action
  };

  struct RuntimeTable {
    TableDef def;
    std::vector<RuntimeEntry> entries;
    uint64_t default_counter = 0;

    const RuntimeEntry *lookup(const std::vector<std::optional<uint64_t>>
                                   &field_values) const;
    RuntimeEntry *find_exact(const std::vector<KeyValue> &key_values);
  };

  struct ProgramState {
    ComposedProgram program;
    std::map<std::string, RuntimeTable> tables;
    std::set<int> ports_up;
  };

  ProgramState make_state(const ComposedProgram &program) const;
  ProgramState &target_state();
  const ProgramState &serving_state() const;
  Verdict run_pipeline(const ProgramState &state, const Frame &frame,
                       ProgramState &mutable_state);
  void account(const Verdict &verdict, const std::string &ns_id);

  SwitchConfig config_;
  uint64_t now_ = 0;
  std::optional<ProgramState> active_;
  struct Pending {
    ProgramState state;
    CompileJob job;
  };
  std::optional<Pending> pending_;

  ScopeStats global_;
  std::map<std::string, ScopeStats> per_ns_;
  std::vector<std::pair<uint64_t, uint64_t>> downtime_windows_;
};

// Trace-file line format: `PKT <time_us> <ingress_port> <hex-bytes>`.
Frame parse_trace_line(const std::string &line);
std::string format_trace_line(const Frame &frame);

}  // namespace p4nfv

#endif  // P4NFV_SWITCH_SIM_HPP_
