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

#include "p4nfv/descriptor.hpp"

#include <set>

#include "p4nfv/dsl.hpp"
#include "p4nfv/errors.hpp"
#include "p4nfv/util.hpp"

namespace p4nfv {

namespace {

using nlohmann::json;

void fail(const std::string &why) { throw Error(Errc::BAD_DESCRIPTOR, why); }

}  // namespace

void check_descriptor(const NsDescriptor &desc) {
  if (!is_identifier(desc.ns_id)) fail("ns_id '" + desc.ns_id + "'");
  if (!is_identifier(desc.tenant_id)) fail("tenant_id '" + desc.tenant_id + "'");
  if (desc.vlan_id < 1 || desc.vlan_id > 4094)
    fail("vlan_id " + std::to_string(desc.vlan_id) + " out of range 1..4094");
  if (desc.functions.empty()) fail("functions must be non-empty");
  std::set<std::string> fnames;
  for (const auto &f : desc.functions) {
    if (!is_identifier(f.name)) fail("function name '" + f.name + "'");
    if (f.version == 0) fail("function '" + f.name + "' version must be >= 1");
    if (!fnames.insert(f.name).second)
      fail("function '" + f.name + "' referenced twice");
  }
  std::set<uint64_t> macs;
  for (const auto &m : desc.members) {
    if (m.name.empty()) fail("member with empty name");
    if (m.port < 0) fail("member '" + m.name + "' port must be >= 0");
    if (!macs.insert(m.mac).second)
      fail("member MAC " + format_mac(m.mac) + " bound twice");
  }
}

NsDescriptor descriptor_from_json(const json &j) {
  if (!j.is_object()) fail("descriptor must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string &k = it.key();
    if (k != "ns_id" && k != "tenant_id" && k != "vlan_id" &&
        k != "functions" && k != "members")
      fail("unknown key '" + k + "'");
  }
  auto need = [&j](const char *key) -> const json & {
    auto it = j.find(key);
    if (it == j.end()) fail(std::string("missing key '") + key + "'");
    return *it;
  };

  NsDescriptor desc;
  const json &ns_id = need("ns_id");
  if (!ns_id.is_string()) fail("ns_id must be a string");
  desc.ns_id = ns_id.get<std::string>();
  const json &tenant = need("tenant_id");
  if (!tenant.is_string()) fail("tenant_id must be a string");
  desc.tenant_id = tenant.get<std::string>();
  const json &vlan = need("vlan_id");
  if (!vlan.is_number_integer() || vlan.get<int64_t>() < 0 ||
      vlan.get<int64_t>() > 0xffff)
    fail("vlan_id must be an integer");
  desc.vlan_id = static_cast<uint16_t>(vlan.get<int64_t>());

  const json &functions = need("functions");
  if (!functions.is_array()) fail("functions must be an array");
  for (const auto &f : functions) {
    if (!f.is_object() || !f.contains("name") || !f.contains("version") ||
        !f["name"].is_string() || !f["version"].is_number_integer() ||
        f["version"].get<int64_t>() < 0)
      fail("functions[] must be {name, version}");
    desc.functions.push_back({f["name"].get<std::string>(),
                              static_cast<uint32_t>(f["version"].get<int64_t>())});
  }

  const json &members = need("members");
  if (!members.is_array()) fail("members must be an array");
  for (const auto &m : members) {
    if (!m.is_object() || !m.contains("name") || !m.contains("mac") ||
        !m.contains("port") || !m["name"].is_string() ||
        !m["mac"].is_string() || !m["port"].is_number_integer())
      fail("members[] must be {name, mac, port}");
    NsMember member;
    member.name = m["name"].get<std::string>();
    try {
      member.mac = parse_mac(m["mac"].get<std::string>());
    } catch (const Error &e) {
      fail("member '" + member.name + "': " + e.detail());
    }
    member.port = static_cast<int>(m["port"].get<int64_t>());
    desc.members.push_back(std::move(member));
  }

  check_descriptor(desc);
  return desc;
}

NsDescriptor parse_descriptor(const std::string &document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error &e) {
    throw Error(Errc::BAD_DESCRIPTOR, e.what());
  }
  return descriptor_from_json(j);
}

json descriptor_to_json(const NsDescriptor &desc) {
  json functions = json::array();
  for (const auto &f : desc.functions)
    functions.push_back({{"name", f.name}, {"version", f.version}});
  json members = json::array();
  for (const auto &m : desc.members)
    members.push_back(
        {{"name", m.name}, {"mac", format_mac(m.mac)}, {"port", m.port}});
  return {{"ns_id", desc.ns_id},
          {"tenant_id", desc.tenant_id},
          {"vlan_id", desc.vlan_id},
          {"functions", functions},
          {"members", members}};
}

}  // namespace p4nfv
