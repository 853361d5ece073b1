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

#ifndef P4NFV_COMPOSER_HPP_
#define P4NFV_COMPOSER_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "p4nfv/descriptor.hpp"
#include "p4nfv/dsl.hpp"
#include "p4nfv/repo.hpp"

namespace p4nfv {

// One parser covering the union of every active NS's header needs. The
// transition map is fully determined by the header set:
//   ethernet --0x8100--> vlan --0x0800--> ipv4 --proto 6/17--> tcp/udp
struct ParsePlan {
  std::set<std::string> headers;

  struct Transition {
    std::string from;
    std::string select_field;  // field of `from` driving the transition
    uint64_t value;
    std::string to;
  };
  std::vector<Transition> transitions() const;

  bool operator==(const ParsePlan &) const = default;
};

// `ns__<ns_id>__<function>__<table>`. Injective because identifiers cannot
// contain underscores (see is_identifier).
std::string qualify_table_name(const std::string &ns_id,
                               const std::string &function_name,
                               const std::string &table_name);

struct QualifiedTable {
  std::string qualified_name;
  std::string function;  // owning function name
  TableDef def;

  bool operator==(const QualifiedTable &) const = default;
};

// The isolated pipeline portion of one NS: its own private copies of every
// table of every function it references.
struct NsSlice {
  std::string ns_id;
  std::string tenant_id;
  uint16_t vlan_id = 0;
  std::vector<QualifiedTable> tables;
  std::vector<std::string> control_order;  // qualified names, application order

  bool operator==(const NsSlice &) const = default;
};

struct ComposedProgram {
  ParsePlan parse_plan;
  std::map<uint16_t, std::string> dispatch;  // vlan id -> ns id
  std::vector<NsSlice> slices;               // ordered by ns_id
  TableDef forward_l2;
  std::string program_hash;

  size_t qualified_table_count() const;
  const NsSlice *find_slice(const std::string &ns_id) const;
  // Resolves qualified slice tables and "forward_l2"; nullptr when absent.
  const TableDef *find_table(const std::string &qualified_name) const;
};

// The administrator-owned static L2 MAT present in every program.
TableDef make_forward_l2_def();

// Mandatory floor + union of declared headers, closed under parse-path
// prerequisites (tcp/udp pull in ipv4).
ParsePlan build_super_parser(const std::vector<const P4FunctionDef *> &functions);

// Pure and deterministic: equal (active set, repo) values give byte-identical
// serializations regardless of input order. Throws Error(VLAN_COLLISION) or
// Error(FUNCTION_NOT_FOUND).
ComposedProgram compose(const std::vector<NsDescriptor> &active,
                        const FunctionRepo &repo);

// Sorted-key compact JSON of everything but the hash; program_hash is the
// sha256 of exactly this text.
std::string canonical_serialize(const ComposedProgram &program);

// Human-inspectable P4_16-flavored rendering of what would be loaded.
std::string render_pseudo_p4(const ComposedProgram &program);

}  // namespace p4nfv

#endif  // P4NFV_COMPOSER_HPP_
