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

#ifndef P4NFV_STATE_STORE_HPP_
#define P4NFV_STATE_STORE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "p4nfv/descriptor.hpp"
#include "p4nfv/switch_sim.hpp"

namespace p4nfv {

// The reserved owner for forward_l2 entries; admin rules outlive any NS.
inline const std::string kAdminOwner = "admin";

struct NsRecord {
  NsDescriptor desc;
  uint64_t instantiated_at = 0;
};

// Target of a control-plane rule. An empty function name designates the
// global forward_l2 table; anything else is a table of one of the owner's
// functions and qualifies to ns__<ns>__<function>__<table>.
struct TableRef {
  std::string function;
  std::string table;

  bool is_forward_l2() const { return function.empty(); }
  std::string qualified(const std::string &ns_id) const;
  bool operator==(const TableRef &) const = default;
};

struct CpRule {
  uint64_t rule_id = 0;  // assigned by the store, ascending
  std::string ns_id;     // owning NS, or kAdminOwner
  TableRef table;
  std::vector<KeyValue> key_values;
  std::string action;
  std::vector<uint64_t> params;
  int priority = 0;
  uint64_t inserted_at = 0;
  // Admin rules created on behalf of an NS (its members' forward_l2 entries)
  // carry that ns_id here so termination can retire them.
  std::string tag;
};

nlohmann::json cp_rule_to_json(const CpRule &rule);
CpRule cp_rule_from_json(const nlohmann::json &j);

// File-backed image of ns_functions and cp_rules. Every mutation is durable
// before it returns: the affected file is rewritten to a temp file, fsynced,
// and renamed into place.
class StateStore {
 public:
  // Loads state/ns_functions.json and state/cp_rules.json under dir,
  // creating an empty store when absent. Throws Error(STORE_CORRUPT) when a
  // file exists but does not parse back into valid records.
  explicit StateStore(const std::string &dir);

  void record_ns(const NsDescriptor &desc, uint64_t time);
  NsRecord remove_ns(const std::string &ns_id);
  std::vector<NsRecord> active_ns() const;  // sorted by ns_id
  bool has_ns(const std::string &ns_id) const;
  const NsRecord *find_ns(const std::string &ns_id) const;

  // Upserts on (ns_id, table, key_values): a live duplicate is retired and
  // the new rule gets a fresh rule_id. Returns the assigned rule_id.
  uint64_t append_rule(CpRule rule);
  void remove_rule(const std::string &ns_id, const TableRef &table,
                   const std::vector<KeyValue> &key_values);
  std::vector<CpRule> rules_for(const std::string &ns_id) const;
  std::vector<CpRule> all_rules() const;  // ascending rule_id
  size_t purge_ns_rules(const std::string &ns_id);
  size_t purge_tagged_admin_rules(const std::string &tag);

  struct Snapshot {
    std::vector<NsRecord> ns;
    std::vector<CpRule> rules;
    uint64_t next_rule_id = 1;
  };
  Snapshot snapshot() const;
  // Restores and persists a snapshot; used to unwind aborted operations.
  void restore(const Snapshot &snap);

  const std::string &dir() const { return dir_; }

 private:
  void load();
  void persist_ns() const;
  void persist_rules() const;

  std::string dir_;
  std::vector<NsRecord> ns_;      // kept sorted by ns_id
  std::vector<CpRule> rules_;     // ascending rule_id
  uint64_t next_rule_id_ = 1;
};

}  // namespace p4nfv

#endif  // P4NFV_STATE_STORE_HPP_
