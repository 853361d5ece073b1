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

#ifndef P4NFV_TESTS_HELPERS_REFERENCE_SWITCH_HPP_
#define P4NFV_TESTS_HELPERS_REFERENCE_SWITCH_HPP_

// A from-scratch pipeline oracle. It shares no parsing, extraction, or
// lookup code with the production switch: headers live at hardcoded byte
// positions, fields are read by dedicated accessors, and table matches are
// found by scanning every entry and keeping the most specific full match.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "p4nfv/composer.hpp"
#include "p4nfv/switch_sim.hpp"

namespace testoracle {

struct RefEntry {
  std::vector<p4nfv::KeyValue> key;
  std::string action;
  std::vector<uint64_t> params;
};

using RefTables = std::map<std::string, std::vector<RefEntry>>;

struct RefVerdict {
  std::string outcome;                // FORWARD(p) or DROP(REASON)
  std::vector<uint8_t> egress_bytes;  // rewritten frame, forwards only
};

namespace refdetail {

struct Parsed {
  bool error = false;
  bool vlan = false;
  bool ipv4 = false;
  bool ipv4_valid = false;
  bool tcp = false;
  bool udp = false;
};

inline uint64_t be(const std::vector<uint8_t> &b, size_t at, int n) {
  uint64_t v = 0;
  for (int i = 0; i < n; ++i) v = (v << 8) | b[at + i];
  return v;
}

inline Parsed parse(const std::set<std::string> &plan,
                    const std::vector<uint8_t> &b) {
  Parsed p;
  if (b.size() < 14) {
    p.error = true;
    return p;
  }
  if (be(b, 12, 2) != 0x8100) return p;
  if (b.size() < 18) {
    p.error = true;
    return p;
  }
  p.vlan = true;
  if (be(b, 16, 2) != 0x0800 || plan.count("ipv4") == 0) return p;
  if (b.size() < 38) {
    p.error = true;
    return p;
  }
  p.ipv4 = true;
  p.ipv4_valid = (b[18] >> 4) == 4 && (b[18] & 0x0f) == 5;
  if (!p.ipv4_valid) return p;
  uint8_t proto = b[27];
  if (proto == 6 && plan.count("tcp")) {
    if (b.size() < 42) {
      p.error = true;
      return p;
    }
    p.tcp = true;
  } else if (proto == 17 && plan.count("udp")) {
    if (b.size() < 46) {
      p.error = true;
      return p;
    }
    p.udp = true;
  }
  return p;
}

inline std::optional<uint64_t> field(const Parsed &p,
                                     const std::vector<uint8_t> &b,
                                     const std::string &header,
                                     const std::string &name) {
  if (header == "ethernet") {
    if (name == "dst_addr") return be(b, 0, 6);
    if (name == "src_addr") return be(b, 6, 6);
    if (name == "ethertype") return be(b, 12, 2);
  } else if (header == "vlan") {
    if (!p.vlan) return std::nullopt;
    if (name == "pcp") return uint64_t{static_cast<uint64_t>(b[14] >> 5)};
    if (name == "dei") return uint64_t{static_cast<uint64_t>((b[14] >> 4) & 1)};
    if (name == "vid") return ((uint64_t{b[14]} & 0x0f) << 8) | b[15];
    if (name == "ethertype") return be(b, 16, 2);
  } else if (header == "ipv4") {
    if (!p.ipv4 || !p.ipv4_valid) return std::nullopt;
    if (name == "version") return uint64_t{static_cast<uint64_t>(b[18] >> 4)};
    if (name == "ihl") return uint64_t{static_cast<uint64_t>(b[18] & 0x0f)};
    if (name == "dscp_ecn") return uint64_t{b[19]};
    if (name == "total_len") return be(b, 20, 2);
    if (name == "identification") return be(b, 22, 2);
    if (name == "flags_frag") return be(b, 24, 2);
    if (name == "ttl") return uint64_t{b[26]};
    if (name == "protocol") return uint64_t{b[27]};
    if (name == "checksum") return be(b, 28, 2);
    if (name == "src_addr") return be(b, 30, 4);
    if (name == "dst_addr") return be(b, 34, 4);
  } else if (header == "tcp") {
    if (!p.tcp) return std::nullopt;
    if (name == "src_port") return be(b, 38, 2);
    if (name == "dst_port") return be(b, 40, 2);
  } else if (header == "udp") {
    if (!p.udp) return std::nullopt;
    if (name == "src_port") return be(b, 38, 2);
    if (name == "dst_port") return be(b, 40, 2);
    if (name == "length") return be(b, 42, 2);
    if (name == "checksum") return be(b, 44, 2);
  }
  return std::nullopt;
}

inline int field_width(const std::string &header, const std::string &name) {
  if (header == "ethernet")
    return name == "ethertype" ? 16 : 48;
  if (header == "vlan") {
    if (name == "pcp") return 3;
    if (name == "dei") return 1;
    if (name == "vid") return 12;
    return 16;
  }
  if (header == "ipv4") {
    if (name == "version" || name == "ihl") return 4;
    if (name == "dscp_ecn" || name == "ttl" || name == "protocol") return 8;
    if (name == "src_addr" || name == "dst_addr") return 32;
    return 16;
  }
  return 16;  // every tcp/udp field
}

// Scan all entries; a full match with the longest last-key prefix wins.
// Tables without an lpm key can match at most one entry.
inline const RefEntry *scan(const p4nfv::TableDef &def,
                            const std::vector<RefEntry> &entries,
                            const std::vector<std::optional<uint64_t>> &probe) {
  for (const auto &value : probe)
    if (!value.has_value()) return nullptr;
  bool lpm_last =
      !def.keys.empty() && def.keys.back().match == p4nfv::MatchKind::kLpm;
  int last_width = def.keys.empty()
                       ? 0
                       : field_width(def.keys.back().field.header,
                                     def.keys.back().field.field);
  const RefEntry *best = nullptr;
  int best_prefix = -1;
  for (const auto &entry : entries) {
    bool match = true;
    int prefix = last_width + 1;  // non-lpm sentinel beats any real prefix
    for (size_t i = 0; i < def.keys.size() && match; ++i) {
      uint64_t have = *probe[i];
      if (lpm_last && i + 1 == def.keys.size()) {
        prefix = entry.key[i].prefix_len.value_or(last_width);
        if (prefix == 0)
          match = true;
        else
          match = (have >> (last_width - prefix)) ==
                  (entry.key[i].value >> (last_width - prefix));
      } else {
        match = have == entry.key[i].value;
      }
    }
    if (match && prefix > best_prefix) {
      best = &entry;
      best_prefix = prefix;
    }
  }
  return best;
}

inline void write_ipv4_checksum(std::vector<uint8_t> &b) {
  b[28] = 0;
  b[29] = 0;
  uint32_t sum = 0;
  for (size_t at = 18; at < 38; at += 2)
    sum += static_cast<uint32_t>(be(b, at, 2));
  while (sum > 0xffff) sum = (sum & 0xffff) + (sum >> 16);
  uint16_t checksum = static_cast<uint16_t>(~sum & 0xffff);
  b[28] = static_cast<uint8_t>(checksum >> 8);
  b[29] = static_cast<uint8_t>(checksum & 0xff);
}

inline void write_mac(std::vector<uint8_t> &b, size_t at, uint64_t mac) {
  for (int i = 0; i < 6; ++i)
    b[at + i] = static_cast<uint8_t>((mac >> (8 * (5 - i))) & 0xff);
}

}  // namespace refdetail

inline RefVerdict reference_verdict(const p4nfv::ComposedProgram &program,
                                    const std::set<int> &ports_up,
                                    const RefTables &tables, int ingress_port,
                                    const std::vector<uint8_t> &frame) {
  using namespace refdetail;
  RefVerdict out;
  auto drop = [&out](const std::string &reason) {
    out.outcome = "DROP(" + reason + ")";
    return out;
  };

  if (ports_up.count(ingress_port) == 0) return drop("PORT_DOWN");

  Parsed parsed = parse(program.parse_plan.headers, frame);
  if (parsed.error) return drop("PARSE_ERROR");
  if (!parsed.vlan) return drop("NO_VLAN_TAG");

  uint16_t vid =
      static_cast<uint16_t>(((uint64_t{frame[14]} & 0x0f) << 8) | frame[15]);
  auto dispatched = program.dispatch.find(vid);
  if (dispatched == program.dispatch.end()) return drop("UNKNOWN_VLAN");
  const p4nfv::NsSlice *slice = program.find_slice(dispatched->second);

  std::vector<uint8_t> work = frame;
  std::optional<int> egress;

  for (const std::string &qualified : slice->control_order) {
    const p4nfv::TableDef *def = program.find_table(qualified);
    std::vector<std::optional<uint64_t>> probe;
    for (const auto &key : def->keys)
      probe.push_back(field(parsed, work, key.field.header, key.field.field));
    auto entries = tables.find(qualified);
    const RefEntry *entry =
        entries == tables.end()
            ? nullptr
            : scan(*def, entries->second, probe);
    const std::string &action = entry ? entry->action : def->default_action.action;
    const std::vector<uint64_t> &params =
        entry ? entry->params : def->default_action.params;

    if (action == "pass" || action == "count") continue;
    if (action == "drop") return drop("TABLE_DROP");
    if (action == "forward") {
      egress = static_cast<int>(params.at(0));
      break;
    }
    if (action == "l3_route") {
      if (!parsed.ipv4 || !parsed.ipv4_valid) return drop("PARSE_ERROR");
      if (work[26] <= 1) return drop("TTL_EXPIRED");
      work[26] = static_cast<uint8_t>(work[26] - 1);
      write_mac(work, 6, params.at(1));
      write_mac(work, 0, params.at(2));
      write_ipv4_checksum(work);
      egress = static_cast<int>(params.at(0));
      break;
    }
  }

  if (!egress) {
    std::vector<std::optional<uint64_t>> probe = {
        field(parsed, work, "ethernet", "dst_addr")};
    auto entries = tables.find(program.forward_l2.name);
    const RefEntry *entry =
        entries == tables.end()
            ? nullptr
            : scan(program.forward_l2, entries->second, probe);
    if (entry == nullptr) return drop("L2_MISS");
    egress = static_cast<int>(entry->params.at(0));
  }

  if (ports_up.count(*egress) == 0) return drop("PORT_DOWN");
  out.outcome = "FORWARD(" + std::to_string(*egress) + ")";
  out.egress_bytes = std::move(work);
  return out;
}

}  // namespace testoracle

#endif  // P4NFV_TESTS_HELPERS_REFERENCE_SWITCH_HPP_
