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

#ifndef P4NFV_TESTS_HELPERS_FIXTURES_HPP_
#define P4NFV_TESTS_HELPERS_FIXTURES_HPP_

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "p4nfv/descriptor.hpp"
#include "p4nfv/dsl.hpp"

namespace testfix {

struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string &tag) {
    std::string tmpl = (std::filesystem::temp_directory_path() /
                        ("p4nfv-" + tag + "-XXXXXX"))
                           .string();
    path = ::mkdtemp(tmpl.data());
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string str() const { return path.string(); }
  std::string sub(const std::string &name) const {
    return (path / name).string();
  }
};

// Counts frames per source MAC; the smallest useful function.
inline p4nfv::P4FunctionDef counter_fn() {
  p4nfv::P4FunctionDef def;
  def.name = "l2-count";
  def.version = 1;
  def.headers = {"ethernet", "vlan"};
  p4nfv::TableDef t;
  t.name = "seen";
  t.keys = {{{"ethernet", "src_addr"}, p4nfv::MatchKind::kExact}};
  t.actions = {"count"};
  t.default_action = {"count", {}};
  t.max_entries = 128;
  def.tables = {t};
  def.control = {"seen"};
  return def;
}

// Destination-prefix firewall, default pass.
inline p4nfv::P4FunctionDef firewall_fn() {
  p4nfv::P4FunctionDef def;
  def.name = "fw";
  def.version = 1;
  def.headers = {"ethernet", "vlan", "ipv4"};
  p4nfv::TableDef t;
  t.name = "acl";
  t.keys = {{{"ipv4", "dst_addr"}, p4nfv::MatchKind::kLpm}};
  t.actions = {"drop", "pass"};
  t.default_action = {"pass", {}};
  t.max_entries = 64;
  def.tables = {t};
  def.control = {"acl"};
  return def;
}

// Longest-prefix router with MAC rewrite.
inline p4nfv::P4FunctionDef router_fn() {
  p4nfv::P4FunctionDef def;
  def.name = "rtr";
  def.version = 1;
  def.headers = {"ethernet", "vlan", "ipv4"};
  p4nfv::TableDef t;
  t.name = "routes";
  t.keys = {{{"ipv4", "dst_addr"}, p4nfv::MatchKind::kLpm}};
  t.actions = {"l3_route", "drop"};
  t.default_action = {"drop", {}};
  t.max_entries = 32;
  def.tables = {t};
  def.control = {"routes"};
  return def;
}

// Per-TCP-destination-port counter.
inline p4nfv::P4FunctionDef flow_count_fn() {
  p4nfv::P4FunctionDef def;
  def.name = "flow-count";
  def.version = 1;
  def.headers = {"ethernet", "vlan", "ipv4", "tcp"};
  p4nfv::TableDef t;
  t.name = "flows";
  t.keys = {{{"tcp", "dst_port"}, p4nfv::MatchKind::kExact}};
  t.actions = {"count", "pass"};
  t.default_action = {"pass", {}};
  t.max_entries = 256;
  def.tables = {t};
  def.control = {"flows"};
  return def;
}

// Two tables to exercise application order and short-circuiting.
inline p4nfv::P4FunctionDef chain_fn() {
  p4nfv::P4FunctionDef def;
  def.name = "chain";
  def.version = 1;
  def.headers = {"ethernet", "vlan"};
  p4nfv::TableDef first;
  first.name = "steer";
  first.keys = {{{"ethernet", "dst_addr"}, p4nfv::MatchKind::kExact}};
  first.actions = {"forward", "pass", "drop"};
  first.default_action = {"pass", {}};
  first.max_entries = 16;
  p4nfv::TableDef second;
  second.name = "guard";
  second.keys = {{{"ethernet", "src_addr"}, p4nfv::MatchKind::kExact}};
  second.actions = {"drop", "pass"};
  second.default_action = {"pass", {}};
  second.max_entries = 16;
  def.tables = {first, second};
  def.control = {"steer", "guard"};
  return def;
}

inline p4nfv::NsDescriptor make_ns(
    const std::string &ns_id, const std::string &tenant, uint16_t vlan,
    std::vector<p4nfv::FunctionRef> functions,
    std::vector<p4nfv::NsMember> members) {
  p4nfv::NsDescriptor d;
  d.ns_id = ns_id;
  d.tenant_id = tenant;
  d.vlan_id = vlan;
  d.functions = std::move(functions);
  d.members = std::move(members);
  return d;
}

constexpr uint64_t kMacA1 = 0x020000000101;  // blue1 vnf-a, port 1
constexpr uint64_t kMacA2 = 0x020000000102;  // blue1 vnf-b, port 2
constexpr uint64_t kMacB1 = 0x020000000201;  // red1 vnf-a, port 3
constexpr uint64_t kMacB2 = 0x020000000202;  // red1 vnf-b, port 4

inline p4nfv::NsDescriptor blue1() {
  return make_ns("blue1", "blue", 100, {{"l2-count", 1}},
                 {{"vnf-a", kMacA1, 1}, {"vnf-b", kMacA2, 2}});
}

inline p4nfv::NsDescriptor red1() {
  return make_ns("red1", "red", 200, {{"l2-count", 1}},
                 {{"vnf-a", kMacB1, 3}, {"vnf-b", kMacB2, 4}});
}

}  // namespace testfix

#endif  // P4NFV_TESTS_HELPERS_FIXTURES_HPP_
