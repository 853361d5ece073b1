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

#include "p4nfv/state_store.hpp"

#include <algorithm>
#include <filesystem>

#include "p4nfv/composer.hpp"
#include "p4nfv/util.hpp"

namespace p4nfv {

namespace fs = std::filesystem;

std::string TableRef::qualified(const std::string &ns_id) const {
  if (is_forward_l2()) return table;
  return qualify_table_name(ns_id, function, table);
}

nlohmann::json cp_rule_to_json(const CpRule &rule) {
  nlohmann::json keys = nlohmann::json::array();
  for (const auto &kv : rule.key_values) keys.push_back(kv.str());
  nlohmann::json params = nlohmann::json::array();
  for (uint64_t p : rule.params) params.push_back(p);
  return {{"rule_id", rule.rule_id},
          {"ns_id", rule.ns_id},
          {"function", rule.table.function},
          {"table", rule.table.table},
          {"key_values", keys},
          {"action", rule.action},
          {"params", params},
          {"priority", rule.priority},
          {"inserted_at", rule.inserted_at},
          {"tag", rule.tag}};
}

CpRule cp_rule_from_json(const nlohmann::json &j) {
  if (!j.is_object()) throw Error(Errc::BAD_TYPE, "rule must be an object");
  CpRule rule;
  rule.rule_id = j.at("rule_id").get<uint64_t>();
  rule.ns_id = j.at("ns_id").get<std::string>();
  rule.table.function = j.at("function").get<std::string>();
  rule.table.table = j.at("table").get<std::string>();
  for (const auto &k : j.at("key_values"))
    rule.key_values.push_back(parse_key_value(k.get<std::string>()));
  rule.action = j.at("action").get<std::string>();
  for (const auto &p : j.at("params")) rule.params.push_back(p.get<uint64_t>());
  rule.priority = j.at("priority").get<int>();
  rule.inserted_at = j.at("inserted_at").get<uint64_t>();
  rule.tag = j.value("tag", std::string());
  return rule;
}

StateStore::StateStore(const std::string &dir) : dir_(dir) {
  fs::create_directories(dir_);
  load();
}

void StateStore::load() {
  fs::path ns_path = fs::path(dir_) / "ns_functions.json";
  fs::path rules_path = fs::path(dir_) / "cp_rules.json";
  try {
    if (fs::exists(ns_path)) {
      nlohmann::json doc = nlohmann::json::parse(read_file(ns_path.string()));
      if (!doc.is_array())
        throw Error(Errc::BAD_TYPE, "ns_functions.json must be an array");
      for (const auto &item : doc) {
        NsRecord record;
        record.desc = descriptor_from_json(item.at("descriptor"));
        record.instantiated_at = item.at("instantiated_at").get<uint64_t>();
        ns_.push_back(std::move(record));
      }
    }
    if (fs::exists(rules_path)) {
      nlohmann::json doc =
          nlohmann::json::parse(read_file(rules_path.string()));
      if (!doc.is_array())
        throw Error(Errc::BAD_TYPE, "cp_rules.json must be an array");
      for (const auto &item : doc) rules_.push_back(cp_rule_from_json(item));
    }
  } catch (const std::exception &e) {
    throw Error(Errc::STORE_CORRUPT,
                "cannot load state under '" + dir_ + "': " + e.what());
  }
  std::sort(ns_.begin(), ns_.end(), [](const NsRecord &a, const NsRecord &b) {
    return a.desc.ns_id < b.desc.ns_id;
  });
  std::sort(rules_.begin(), rules_.end(),
            [](const CpRule &a, const CpRule &b) {
              return a.rule_id < b.rule_id;
            });
  for (const auto &rule : rules_)
    next_rule_id_ = std::max(next_rule_id_, rule.rule_id + 1);
}

void StateStore::persist_ns() const {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto &record : ns_)
    doc.push_back({{"descriptor", descriptor_to_json(record.desc)},
                   {"instantiated_at", record.instantiated_at}});
  atomic_write_file((fs::path(dir_) / "ns_functions.json").string(),
                    doc.dump(2) + "\n");
}

void StateStore::persist_rules() const {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto &rule : rules_) doc.push_back(cp_rule_to_json(rule));
  atomic_write_file((fs::path(dir_) / "cp_rules.json").string(),
                    doc.dump(2) + "\n");
}

void StateStore::record_ns(const NsDescriptor &desc, uint64_t time) {
  for (const auto &record : ns_) {
    if (record.desc.ns_id == desc.ns_id)
      throw Error(Errc::DUPLICATE_NS, "'" + desc.ns_id + "' already active");
    if (record.desc.vlan_id == desc.vlan_id)
      throw Error(Errc::VLAN_IN_USE,
                  "vlan " + std::to_string(desc.vlan_id) + " already used by '" +
                      record.desc.ns_id + "'");
  }
  NsRecord record{desc, time};
  ns_.insert(std::upper_bound(ns_.begin(), ns_.end(), record,
                              [](const NsRecord &a, const NsRecord &b) {
                                return a.desc.ns_id < b.desc.ns_id;
                              }),
             std::move(record));
  persist_ns();
}

NsRecord StateStore::remove_ns(const std::string &ns_id) {
  auto it = std::find_if(ns_.begin(), ns_.end(), [&ns_id](const NsRecord &r) {
    return r.desc.ns_id == ns_id;
  });
  if (it == ns_.end())
    throw Error(Errc::NOT_FOUND, "no active NS '" + ns_id + "'");
  NsRecord removed = std::move(*it);
  ns_.erase(it);
  persist_ns();
  return removed;
}

std::vector<NsRecord> StateStore::active_ns() const { return ns_; }

bool StateStore::has_ns(const std::string &ns_id) const {
  return find_ns(ns_id) != nullptr;
}

const NsRecord *StateStore::find_ns(const std::string &ns_id) const {
  for (const auto &record : ns_)
    if (record.desc.ns_id == ns_id) return &record;
  return nullptr;
}

uint64_t StateStore::append_rule(CpRule rule) {
  auto dup = std::find_if(rules_.begin(), rules_.end(),
                          [&rule](const CpRule &r) {
                            return r.ns_id == rule.ns_id &&
                                   r.table == rule.table &&
                                   r.key_values == rule.key_values;
                          });
  if (dup != rules_.end()) rules_.erase(dup);
  rule.rule_id = next_rule_id_++;
  uint64_t id = rule.rule_id;
  rules_.push_back(std::move(rule));
  persist_rules();
  return id;
}

void StateStore::remove_rule(const std::string &ns_id, const TableRef &table,
                             const std::vector<KeyValue> &key_values) {
  auto it = std::find_if(rules_.begin(), rules_.end(),
                         [&](const CpRule &r) {
                           return r.ns_id == ns_id && r.table == table &&
                                  r.key_values == key_values;
                         });
  if (it == rules_.end())
    throw Error(Errc::NOT_FOUND,
                "no rule for " + table.qualified(ns_id) + " key " +
                    key_values_str(key_values));
  rules_.erase(it);
  persist_rules();
}

std::vector<CpRule> StateStore::rules_for(const std::string &ns_id) const {
  std::vector<CpRule> out;
  for (const auto &rule : rules_)
    if (rule.ns_id == ns_id) out.push_back(rule);
  return out;
}

std::vector<CpRule> StateStore::all_rules() const { return rules_; }

size_t StateStore::purge_ns_rules(const std::string &ns_id) {
  if (ns_id == kAdminOwner)
    throw Error(Errc::INVALID, "admin rules cannot be purged wholesale");
  size_t before = rules_.size();
  rules_.erase(std::remove_if(rules_.begin(), rules_.end(),
                              [&ns_id](const CpRule &r) {
                                return r.ns_id == ns_id;
                              }),
               rules_.end());
  size_t removed = before - rules_.size();
  if (removed > 0) persist_rules();
  return removed;
}

size_t StateStore::purge_tagged_admin_rules(const std::string &tag) {
  size_t before = rules_.size();
  rules_.erase(std::remove_if(rules_.begin(), rules_.end(),
                              [&tag](const CpRule &r) {
                                return r.ns_id == kAdminOwner && r.tag == tag;
                              }),
               rules_.end());
  size_t removed = before - rules_.size();
  if (removed > 0) persist_rules();
  return removed;
}

StateStore::Snapshot StateStore::snapshot() const {
  return Snapshot{ns_, rules_, next_rule_id_};
}

void StateStore::restore(const Snapshot &snap) {
  ns_ = snap.ns;
  rules_ = snap.rules;
  next_rule_id_ = snap.next_rule_id;
  persist_ns();
  persist_rules();
}

}  // namespace p4nfv
