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

#ifndef P4NFV_DESCRIPTOR_HPP_
#define P4NFV_DESCRIPTOR_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace p4nfv {

struct FunctionRef {
  std::string name;
  uint32_t version = 0;

  bool operator==(const FunctionRef &) const = default;
};

struct NsMember {
  std::string name;
  uint64_t mac = 0;  // 48-bit
  int port = 0;

  bool operator==(const NsMember &) const = default;
};

// The P4NF metadata file: which functions an NS needs, which VLAN carries its
// traffic, and the MAC/port bindings of its member NFs.
struct NsDescriptor {
  std::string ns_id;
  std::string tenant_id;
  uint16_t vlan_id = 0;  // 1..4094
  std::vector<FunctionRef> functions;
  std::vector<NsMember> members;

  bool operator==(const NsDescriptor &) const = default;
};

// Throws Error(BAD_DESCRIPTOR) listing the first problem found.
void check_descriptor(const NsDescriptor &desc);

NsDescriptor parse_descriptor(const std::string &document);
NsDescriptor descriptor_from_json(const nlohmann::json &j);
nlohmann::json descriptor_to_json(const NsDescriptor &desc);

}  // namespace p4nfv

#endif  // P4NFV_DESCRIPTOR_HPP_
