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

#ifndef P4NFV_DSL_HPP_
#define P4NFV_DSL_HPP_

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "p4nfv/errors.hpp"

namespace p4nfv {

// The header catalog is closed: every data-plane function is expressed over
// these five headers. Layouts are fixed-offset; ipv4 is only considered valid
// when ihl == 5 so every field sits at a constant offset.
struct HeaderDef {
  std::string name;
  std::vector<std::pair<std::string, int>> fields;  // (field name, bit width)
  int total_bits() const;
  int total_bytes() const { return total_bits() / 8; }
};

const std::vector<HeaderDef> &header_catalog();
const HeaderDef *find_header(const std::string &name);

struct FieldRef {
  std::string header;
  std::string field;

  std::string dotted() const { return header + "." + field; }
  bool operator==(const FieldRef &) const = default;
};

struct FieldLayout {
  int bit_offset;  // within the header
  int bit_width;
};

// Throws Error(UNKNOWN_FIELD) when the reference does not resolve.
FieldLayout resolve_field(const FieldRef &ref);

enum class MatchKind { kExact, kLpm };

const char *match_kind_name(MatchKind k);

// Closed five-action catalog: pass() / drop() / count() / forward(port) /
// l3_route(port, src_mac, dst_mac).
bool is_catalog_action(const std::string &name);
int action_arity(const std::string &name);  // -1 for unknown actions

struct ActionCall {
  std::string action;
  std::vector<uint64_t> params;

  bool operator==(const ActionCall &) const = default;
};

struct TableKey {
  FieldRef field;
  MatchKind match = MatchKind::kExact;

  bool operator==(const TableKey &) const = default;
};

struct TableDef {
  std::string name;
  std::vector<TableKey> keys;
  std::vector<std::string> actions;
  ActionCall default_action;
  uint32_t max_entries = 0;

  bool operator==(const TableDef &) const = default;
};

struct P4FunctionDef {
  std::string name;
  uint32_t version = 0;
  std::set<std::string> headers;
  std::vector<TableDef> tables;
  std::vector<std::string> control;  // table application order

  const TableDef *find_table(const std::string &table_name) const;
  bool operator==(const P4FunctionDef &) const = default;
};

enum class ViolationCode {
  UNKNOWN_HEADER,
  MISSING_MANDATORY_HEADERS,
  UNKNOWN_ACTION,
  DUP_TABLE_NAME,
  UNDECLARED_HEADER_IN_KEY,
  BAD_LPM_POSITION,
  CONTROL_REFERENCES_UNKNOWN_TABLE,
  BAD_DEFAULT_ACTION,
  BAD_IDENTIFIER,
  UNKNOWN_FIELD,
  DUP_CONTROL_ENTRY,
};

const char *violation_code_name(ViolationCode c);

struct Violation {
  ViolationCode code;
  std::string detail;

  std::string str() const {
    return std::string(violation_code_name(code)) + ": " + detail;
  }
  bool operator==(const Violation &) const = default;
};

// Pure, order-stable composability check. An empty result means the function
// may be stored and composed.
std::vector<Violation> validate_function(const P4FunctionDef &def);

// Thrown by the repository when an upload fails validation.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : Error(Errc::VALIDATION_FAILED, summarize(violations)),
        violations_(std::move(violations)) {}

  const std::vector<Violation> &violations() const { return violations_; }

 private:
  static std::string summarize(const std::vector<Violation> &vs);
  std::vector<Violation> violations_;
};

// ns_id / tenant_id / function and table names use [a-z0-9-] so that the
// "__" separator in qualified table names can never be forged.
bool is_identifier(const std::string &s);

// Structural parse of the external function-definition JSON. No semantic
// validation; see validate_function for that.
P4FunctionDef parse_function_def(const std::string &document);

nlohmann::json function_to_json(const P4FunctionDef &def);
nlohmann::json table_to_json(const TableDef &table);
TableDef table_from_json(const nlohmann::json &j, const std::string &where);

// Sorted-key, whitespace-free JSON. parse_function_def of this text yields
// the same value back.
std::string canonical_serialize(const P4FunctionDef &def);

}  // namespace p4nfv

#endif  // P4NFV_DSL_HPP_
