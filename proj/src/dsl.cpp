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

#include "p4nfv/dsl.hpp"

#include <algorithm>
#include <unordered_set>

namespace p4nfv {

namespace {

using nlohmann::json;

const std::vector<HeaderDef> kCatalog = {
    {"ethernet", {{"dst_addr", 48}, {"src_addr", 48}, {"ethertype", 16}}},
    {"vlan", {{"pcp", 3}, {"dei", 1}, {"vid", 12}, {"ethertype", 16}}},
    {"ipv4",
     {{"version", 4},
      {"ihl", 4},
      {"dscp_ecn", 8},
      {"total_len", 16},
      {"identification", 16},
      {"flags_frag", 16},
      {"ttl", 8},
      {"protocol", 8},
      {"checksum", 16},
      {"src_addr", 32},
      {"dst_addr", 32}}},
    {"tcp", {{"src_port", 16}, {"dst_port", 16}}},
    {"udp", {{"src_port", 16}, {"dst_port", 16}, {"length", 16}, {"checksum", 16}}},
};

struct ActionSig {
  const char *name;
  int arity;
};

const ActionSig kActions[] = {
    {"pass", 0}, {"drop", 0}, {"forward", 1}, {"l3_route", 3}, {"count", 0}};

}  // namespace

int HeaderDef::total_bits() const {
  int bits = 0;
  for (const auto &[_, w] : fields) bits += w;
  return bits;
}

const std::vector<HeaderDef> &header_catalog() { return kCatalog; }

const HeaderDef *find_header(const std::string &name) {
  for (const auto &h : kCatalog)
    if (h.name == name) return &h;
  return nullptr;
}

FieldLayout resolve_field(const FieldRef &ref) {
  const HeaderDef *hdr = find_header(ref.header);
  if (hdr == nullptr)
    throw Error(Errc::UNKNOWN_FIELD, "no header '" + ref.header + "'");
  int offset = 0;
  for (const auto &[name, width] : hdr->fields) {
    if (name == ref.field) return {offset, width};
    offset += width;
  }
  throw Error(Errc::UNKNOWN_FIELD, "no field '" + ref.dotted() + "'");
}

const char *match_kind_name(MatchKind k) {
  return k == MatchKind::kExact ? "exact" : "lpm";
}

bool is_catalog_action(const std::string &name) {
  return action_arity(name) >= 0;
}

int action_arity(const std::string &name) {
  for (const auto &a : kActions)
    if (name == a.name) return a.arity;
  return -1;
}

const TableDef *P4FunctionDef::find_table(const std::string &table_name) const {
  for (const auto &t : tables)
    if (t.name == table_name) return &t;
  return nullptr;
}

const char *violation_code_name(ViolationCode c) {
  switch (c) {
    case ViolationCode::UNKNOWN_HEADER: return "UNKNOWN_HEADER";
    case ViolationCode::MISSING_MANDATORY_HEADERS:
      return "MISSING_MANDATORY_HEADERS";
    case ViolationCode::UNKNOWN_ACTION: return "UNKNOWN_ACTION";
    case ViolationCode::DUP_TABLE_NAME: return "DUP_TABLE_NAME";
    case ViolationCode::UNDECLARED_HEADER_IN_KEY:
      return "UNDECLARED_HEADER_IN_KEY";
    case ViolationCode::BAD_LPM_POSITION: return "BAD_LPM_POSITION";
    case ViolationCode::CONTROL_REFERENCES_UNKNOWN_TABLE:
      return "CONTROL_REFERENCES_UNKNOWN_TABLE";
    case ViolationCode::BAD_DEFAULT_ACTION: return "BAD_DEFAULT_ACTION";
    case ViolationCode::BAD_IDENTIFIER: return "BAD_IDENTIFIER";
    case ViolationCode::UNKNOWN_FIELD: return "UNKNOWN_FIELD";
    case ViolationCode::DUP_CONTROL_ENTRY: return "DUP_CONTROL_ENTRY";
  }
  return "UNKNOWN";
}

std::string ValidationError::summarize(const std::vector<Violation> &vs) {
  std::string s;
  for (size_t i = 0; i < vs.size(); ++i) {
    if (i > 0) s += "; ";
    s += vs[i].str();
  }
  return s;
}

bool is_identifier(const std::string &s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-'))
      return false;
  return true;
}

std::vector<Violation> validate_function(const P4FunctionDef &def) {
  std::vector<Violation> out;
  auto add = [&out](ViolationCode code, std::string detail) {
    out.push_back({code, std::move(detail)});
  };

  if (!is_identifier(def.name))
    add(ViolationCode::BAD_IDENTIFIER, "function name '" + def.name + "'");

  for (const auto &h : def.headers)
    if (find_header(h) == nullptr)
      add(ViolationCode::UNKNOWN_HEADER, "header '" + h + "'");

  if (!def.headers.count("ethernet") || !def.headers.count("vlan"))
    add(ViolationCode::MISSING_MANDATORY_HEADERS,
        "every function must declare ethernet and vlan");

  std::unordered_set<std::string> table_names;
  for (const auto &table : def.tables) {
    if (!is_identifier(table.name))
      add(ViolationCode::BAD_IDENTIFIER, "table name '" + table.name + "'");
    if (!table_names.insert(table.name).second)
      add(ViolationCode::DUP_TABLE_NAME, "table '" + table.name + "'");

    int lpm_count = 0;
    for (size_t i = 0; i < table.keys.size(); ++i) {
      const TableKey &key = table.keys[i];
      if (find_header(key.field.header) == nullptr) {
        add(ViolationCode::UNKNOWN_HEADER,
            "table '" + table.name + "' key '" + key.field.dotted() + "'");
      } else {
        bool resolves = true;
        try {
          resolve_field(key.field);
        } catch (const Error &) {
          resolves = false;
          add(ViolationCode::UNKNOWN_FIELD,
              "table '" + table.name + "' key '" + key.field.dotted() + "'");
        }
        if (resolves && !def.headers.count(key.field.header))
          add(ViolationCode::UNDECLARED_HEADER_IN_KEY,
              "table '" + table.name + "' key '" + key.field.dotted() +
                  "' uses undeclared header");
      }
      if (key.match == MatchKind::kLpm) {
        ++lpm_count;
        if (i + 1 != table.keys.size() || lpm_count > 1)
          add(ViolationCode::BAD_LPM_POSITION,
              "table '" + table.name + "': lpm key must be single and last");
      }
    }

    for (const auto &a : table.actions)
      if (!is_catalog_action(a))
        add(ViolationCode::UNKNOWN_ACTION,
            "table '" + table.name + "' action '" + a + "'");

    const std::string &da = table.default_action.action;
    bool in_actions = std::find(table.actions.begin(), table.actions.end(),
                                da) != table.actions.end();
    if (!in_actions && da != "pass" && da != "drop") {
      add(ViolationCode::BAD_DEFAULT_ACTION,
          "table '" + table.name + "' default '" + da + "'");
    } else if (is_catalog_action(da) &&
               static_cast<int>(table.default_action.params.size()) !=
                   action_arity(da)) {
      add(ViolationCode::BAD_DEFAULT_ACTION,
          "table '" + table.name + "' default '" + da + "' wants " +
              std::to_string(action_arity(da)) + " params");
    }
  }

  std::unordered_set<std::string> applied;
  for (const auto &name : def.control) {
    if (!table_names.count(name))
      add(ViolationCode::CONTROL_REFERENCES_UNKNOWN_TABLE,
          "control applies unknown table '" + name + "'");
    else if (!applied.insert(name).second)
      add(ViolationCode::DUP_CONTROL_ENTRY,
          "control applies table '" + name + "' twice");
  }

  return out;
}

namespace {

const json &require_key(const json &obj, const std::string &key,
                        const std::string &where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw Error(Errc::MISSING_FIELD, where + " is missing '" + key + "'");
  return *it;
}

void reject_unknown_keys(const json &obj,
                         const std::vector<std::string> &known,
                         const std::string &where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw Error(Errc::MALFORMED_DOCUMENT,
                  where + " has unknown key '" + it.key() + "'");
}

std::string get_string(const json &v, const std::string &where) {
  if (!v.is_string())
    throw Error(Errc::BAD_TYPE, where + " must be a string");
  return v.get<std::string>();
}

uint64_t get_uint(const json &v, const std::string &where) {
  if (!v.is_number_integer() || (v.is_number_integer() && v.get<int64_t>() < 0))
    throw Error(Errc::BAD_TYPE, where + " must be a non-negative integer");
  return v.get<uint64_t>();
}

uint32_t get_positive(const json &v, const std::string &where) {
  uint64_t n = get_uint(v, where);
  if (n == 0 || n > 0xffffffffULL)
    throw Error(Errc::BAD_TYPE, where + " must be a positive integer");
  return static_cast<uint32_t>(n);
}

FieldRef parse_field_ref(const std::string &dotted, const std::string &where) {
  auto pos = dotted.find('.');
  if (pos == std::string::npos || pos == 0 || pos + 1 == dotted.size())
    throw Error(Errc::BAD_TYPE,
                where + " must use the dotted form 'header.field'");
  return {dotted.substr(0, pos), dotted.substr(pos + 1)};
}

ActionCall parse_action_call(const json &j, const std::string &where) {
  if (!j.is_object()) throw Error(Errc::BAD_TYPE, where + " must be an object");
  reject_unknown_keys(j, {"action", "params"}, where);
  ActionCall call;
  call.action = get_string(require_key(j, "action", where), where + ".action");
  if (j.contains("params")) {
    if (!j["params"].is_array())
      throw Error(Errc::BAD_TYPE, where + ".params must be an array");
    for (const auto &p : j["params"])
      call.params.push_back(get_uint(p, where + ".params[]"));
  }
  return call;
}

}  // namespace

TableDef table_from_json(const json &j, const std::string &where) {
  if (!j.is_object()) throw Error(Errc::BAD_TYPE, where + " must be an object");
  reject_unknown_keys(
      j, {"name", "keys", "actions", "default_action", "max_entries"}, where);
  TableDef t;
  t.name = get_string(require_key(j, "name", where), where + ".name");
  const json &keys = require_key(j, "keys", where);
  if (!keys.is_array())
    throw Error(Errc::BAD_TYPE, where + ".keys must be an array");
  for (size_t i = 0; i < keys.size(); ++i) {
    std::string kwhere = where + ".keys[" + std::to_string(i) + "]";
    const json &k = keys[i];
    if (!k.is_object()) throw Error(Errc::BAD_TYPE, kwhere + " must be an object");
    reject_unknown_keys(k, {"field", "match"}, kwhere);
    TableKey key;
    key.field = parse_field_ref(
        get_string(require_key(k, "field", kwhere), kwhere + ".field"),
        kwhere + ".field");
    std::string match =
        get_string(require_key(k, "match", kwhere), kwhere + ".match");
    if (match == "exact")
      key.match = MatchKind::kExact;
    else if (match == "lpm")
      key.match = MatchKind::kLpm;
    else
      throw Error(Errc::BAD_TYPE, kwhere + ".match must be 'exact' or 'lpm'");
    t.keys.push_back(std::move(key));
  }
  const json &actions = require_key(j, "actions", where);
  if (!actions.is_array())
    throw Error(Errc::BAD_TYPE, where + ".actions must be an array");
  for (const auto &a : actions)
    t.actions.push_back(get_string(a, where + ".actions[]"));
  t.default_action = parse_action_call(require_key(j, "default_action", where),
                                       where + ".default_action");
  t.max_entries = get_positive(require_key(j, "max_entries", where),
                               where + ".max_entries");
  return t;
}

P4FunctionDef parse_function_def(const std::string &document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error &e) {
    throw Error(Errc::MALFORMED_DOCUMENT, e.what());
  }
  if (!j.is_object())
    throw Error(Errc::MALFORMED_DOCUMENT, "document must be a JSON object");
  reject_unknown_keys(j, {"name", "version", "headers", "tables", "control"},
                      "document");

  P4FunctionDef def;
  def.name = get_string(require_key(j, "name", "document"), "name");
  def.version = get_positive(require_key(j, "version", "document"), "version");

  const json &headers = require_key(j, "headers", "document");
  if (!headers.is_array())
    throw Error(Errc::BAD_TYPE, "headers must be an array");
  for (const auto &h : headers) def.headers.insert(get_string(h, "headers[]"));

  const json &tables = require_key(j, "tables", "document");
  if (!tables.is_array())
    throw Error(Errc::BAD_TYPE, "tables must be an array");
  for (size_t i = 0; i < tables.size(); ++i)
    def.tables.push_back(
        table_from_json(tables[i], "tables[" + std::to_string(i) + "]"));

  const json &control = require_key(j, "control", "document");
  if (!control.is_array())
    throw Error(Errc::BAD_TYPE, "control must be an array");
  for (size_t i = 0; i < control.size(); ++i) {
    std::string cwhere = "control[" + std::to_string(i) + "]";
    const json &c = control[i];
    if (!c.is_object()) throw Error(Errc::BAD_TYPE, cwhere + " must be an object");
    reject_unknown_keys(c, {"apply"}, cwhere);
    def.control.push_back(
        get_string(require_key(c, "apply", cwhere), cwhere + ".apply"));
  }
  return def;
}

json table_to_json(const TableDef &table) {
  json keys = json::array();
  for (const auto &k : table.keys)
    keys.push_back(
        {{"field", k.field.dotted()}, {"match", match_kind_name(k.match)}});
  return {{"name", table.name},
          {"keys", keys},
          {"actions", table.actions},
          {"default_action",
           {{"action", table.default_action.action},
            {"params", table.default_action.params}}},
          {"max_entries", table.max_entries}};
}

json function_to_json(const P4FunctionDef &def) {
  json tables = json::array();
  for (const auto &t : def.tables) tables.push_back(table_to_json(t));
  json control = json::array();
  for (const auto &c : def.control) control.push_back({{"apply", c}});
  return {{"name", def.name},
          {"version", def.version},
          {"headers", std::vector<std::string>(def.headers.begin(),
                                               def.headers.end())},
          {"tables", tables},
          {"control", control}};
}

std::string canonical_serialize(const P4FunctionDef &def) {
  return function_to_json(def).dump();
}

}  // namespace p4nfv
