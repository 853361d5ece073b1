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

#include "p4nfv/switch_sim.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "p4nfv/util.hpp"

namespace p4nfv {

namespace {

constexpr uint64_t kEthertypeVlan = 0x8100;
constexpr uint64_t kEthertypeIpv4 = 0x0800;

std::string action_str(const std::string &action,
                       const std::vector<uint64_t> &params) {
  std::string s = action + "(";
  for (size_t i = 0; i < params.size(); ++i) {
    if (i > 0) s += ",";
    s += std::to_string(params[i]);
  }
  return s + ")";
}

}  // namespace

const char *drop_reason_name(DropReason r) {
  switch (r) {
    case DropReason::NO_VLAN_TAG: return "NO_VLAN_TAG";
    case DropReason::UNKNOWN_VLAN: return "UNKNOWN_VLAN";
    case DropReason::TABLE_DROP: return "TABLE_DROP";
    case DropReason::L2_MISS: return "L2_MISS";
    case DropReason::RECOMPILING: return "RECOMPILING";
    case DropReason::TTL_EXPIRED: return "TTL_EXPIRED";
    case DropReason::PARSE_ERROR: return "PARSE_ERROR";
    case DropReason::PORT_DOWN: return "PORT_DOWN";
  }
  return "UNKNOWN";
}

const std::vector<DropReason> &all_drop_reasons() {
  static const std::vector<DropReason> reasons = {
      DropReason::NO_VLAN_TAG,  DropReason::UNKNOWN_VLAN,
      DropReason::TABLE_DROP,   DropReason::L2_MISS,
      DropReason::RECOMPILING,  DropReason::TTL_EXPIRED,
      DropReason::PARSE_ERROR,  DropReason::PORT_DOWN};
  return reasons;
}

std::string Verdict::outcome_str() const {
  if (forwarded) return "FORWARD(" + std::to_string(egress_port) + ")";
  return std::string("DROP(") + drop_reason_name(reason) + ")";
}

const char *compile_mode_name(CompileMode m) {
  return m == CompileMode::kHardSwap ? "hard_swap" : "slow_mode";
}

CompileMode compile_mode_from_name(const std::string &name) {
  if (name == "hard_swap") return CompileMode::kHardSwap;
  if (name == "slow_mode") return CompileMode::kSlowMode;
  throw Error(Errc::BAD_TYPE, "unknown compile mode '" + name + "'");
}

uint64_t extract_bits(const std::vector<uint8_t> &bytes, size_t byte_base,
                      int bit_offset, int bit_width) {
  uint64_t value = 0;
  for (int i = 0; i < bit_width; ++i) {
    int bit = bit_offset + i;
    size_t byte = byte_base + static_cast<size_t>(bit / 8);
    int shift = 7 - (bit % 8);
    value = (value << 1) | ((bytes.at(byte) >> shift) & 1);
  }
  return value;
}

void deposit_bits(std::vector<uint8_t> &bytes, size_t byte_base,
                  int bit_offset, int bit_width, uint64_t value) {
  for (int i = 0; i < bit_width; ++i) {
    int bit = bit_offset + i;
    size_t byte = byte_base + static_cast<size_t>(bit / 8);
    int shift = 7 - (bit % 8);
    uint8_t mask = static_cast<uint8_t>(1u << shift);
    bool set = (value >> (bit_width - 1 - i)) & 1;
    if (set)
      bytes.at(byte) |= mask;
    else
      bytes.at(byte) &= static_cast<uint8_t>(~mask);
  }
}

std::string KeyValue::str() const {
  std::string s = std::to_string(value);
  if (prefix_len) s += "/" + std::to_string(*prefix_len);
  return s;
}

std::string key_values_str(const std::vector<KeyValue> &kvs) {
  std::string s;
  for (size_t i = 0; i < kvs.size(); ++i) {
    if (i > 0) s += ",";
    s += kvs[i].str();
  }
  return s;
}

KeyValue parse_key_value(const std::string &token) {
  KeyValue kv;
  std::string value_part = token;
  size_t slash = token.find('/');
  if (slash != std::string::npos) {
    value_part = token.substr(0, slash);
    std::string prefix_part = token.substr(slash + 1);
    try {
      size_t used = 0;
      int prefix = std::stoi(prefix_part, &used);
      if (used != prefix_part.size() || prefix < 0 || prefix > 64)
        throw std::invalid_argument(prefix_part);
      kv.prefix_len = static_cast<uint8_t>(prefix);
    } catch (const std::exception &) {
      throw Error(Errc::BAD_KEY, "bad prefix length in '" + token + "'");
    }
  }
  try {
    kv.value = parse_value_token(value_part);
  } catch (const Error &) {
    throw Error(Errc::BAD_KEY, "bad key value '" + token + "'");
  }
  return kv;
}

ParsedHeaders parse_with_plan(const ParsePlan &plan,
                              const std::vector<uint8_t> &bytes) {
  ParsedHeaders out;
  auto fits = [&bytes](size_t offset, const char *header) {
    return offset + static_cast<size_t>(find_header(header)->total_bytes()) <=
           bytes.size();
  };

  if (!fits(0, "ethernet")) {
    out.parse_error = true;
    return out;
  }
  out.headers["ethernet"] = {true, true, 0};
  uint64_t ethertype = extract_bits(bytes, 0, 96, 16);
  if (ethertype != kEthertypeVlan) return out;

  if (!fits(14, "vlan")) {
    out.parse_error = true;
    return out;
  }
  out.headers["vlan"] = {true, true, 14};
  uint64_t inner = extract_bits(bytes, 14, 16, 16);
  if (inner != kEthertypeIpv4 || !plan.headers.count("ipv4")) return out;

  if (!fits(18, "ipv4")) {
    out.parse_error = true;
    return out;
  }
  uint64_t version = extract_bits(bytes, 18, 0, 4);
  uint64_t ihl = extract_bits(bytes, 18, 4, 4);
  bool ipv4_valid = (version == 4 && ihl == 5);
  out.headers["ipv4"] = {true, ipv4_valid, 18};
  if (!ipv4_valid) return out;

  uint64_t protocol = extract_bits(bytes, 18, 72, 8);
  if (protocol == 6 && plan.headers.count("tcp")) {
    if (!fits(38, "tcp")) {
      out.parse_error = true;
      return out;
    }
    out.headers["tcp"] = {true, true, 38};
  } else if (protocol == 17 && plan.headers.count("udp")) {
    if (!fits(38, "udp")) {
      out.parse_error = true;
      return out;
    }
    out.headers["udp"] = {true, true, 38};
  }
  return out;
}

namespace {

void recompute_ipv4_checksum(std::vector<uint8_t> &bytes, size_t base) {
  bytes[base + 10] = 0;
  bytes[base + 11] = 0;
  uint32_t sum = 0;
  for (int i = 0; i < 20; i += 2)
    sum += (static_cast<uint32_t>(bytes[base + i]) << 8) | bytes[base + i + 1];
  while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
  uint16_t checksum = static_cast<uint16_t>(~sum);
  bytes[base + 10] = static_cast<uint8_t>(checksum >> 8);
  bytes[base + 11] = static_cast<uint8_t>(checksum & 0xff);
}

bool lpm_matches(uint64_t packet_value, const KeyValue &entry, int width) {
  int prefix = entry.prefix_len.value_or(width);
  if (prefix == 0) return true;
  int shift = width - prefix;
  return (packet_value >> shift) == (entry.value >> shift);
}

}  // namespace

const SwitchSim::RuntimeEntry *SwitchSim::RuntimeTable::lookup(
    const std::vector<std::optional<uint64_t>> &field_values) const {
  for (const auto &v : field_values)
    if (!v.has_value()) return nullptr;  // key over absent/invalid header

  bool has_lpm =
      !def.keys.empty() && def.keys.back().match == MatchKind::kLpm;
  // Entries are kept sorted with longer prefixes first, so the first full
  // match already is the longest-prefix winner.
  for (const auto &entry : entries) {
    bool match = true;
    for (size_t i = 0; i < def.keys.size() && match; ++i) {
      if (has_lpm && i + 1 == def.keys.size()) {
        int width = resolve_field(def.keys[i].field).bit_width;
        match = lpm_matches(*field_values[i], entry.key[i], width);
      } else {
        match = (*field_values[i] == entry.key[i].value);
      }
    }
    if (match) return &entry;
  }
  return nullptr;
}

SwitchSim::RuntimeEntry *SwitchSim::RuntimeTable::find_exact(
    const std::vector<KeyValue> &key_values) {
  for (auto &entry : entries)
    if (entry.key == key_values) return &entry;
  return nullptr;
}

SwitchSim::SwitchSim(SwitchConfig config) : config_(config) {
  for (DropReason r : all_drop_reasons()) global_.dropped[drop_reason_name(r)] = 0;
}

SwitchSim::ProgramState SwitchSim::make_state(
    const ComposedProgram &program) const {
  ProgramState state;
  state.program = program;
  for (const auto &slice : program.slices)
    for (const auto &qt : slice.tables)
      state.tables.emplace(qt.qualified_name, RuntimeTable{qt.def, {}, 0});
  state.tables.emplace(program.forward_l2.name,
                       RuntimeTable{program.forward_l2, {}, 0});
  return state;
}

CompileJob SwitchSim::load_program(const ComposedProgram &program, uint64_t at,
                                   CompileMode mode) {
  advance_to(at);
  if (pending_)
    throw Error(Errc::COMPILE_IN_PROGRESS,
                "compile started at " + std::to_string(pending_->job.start) +
                    " finishes at " +
                    std::to_string(pending_->job.swap_time()));
  CompileJob job;
  job.program_hash = program.program_hash;
  job.start = at;
  job.duration = config_.base_compile_us +
                 config_.per_table_us * (program.qualified_table_count() + 1);
  job.mode = mode;
  pending_ = Pending{make_state(program), job};
  if (mode == CompileMode::kHardSwap)
    downtime_windows_.emplace_back(job.start, job.swap_time());
  return job;
}

void SwitchSim::activate_program(const ComposedProgram &program) {
  if (pending_)
    throw Error(Errc::COMPILE_IN_PROGRESS, "cannot activate during a compile");
  active_ = make_state(program);
}

void SwitchSim::advance_to(uint64_t t) {
  if (pending_ && t >= pending_->job.swap_time()) {
    active_ = std::move(pending_->state);
    pending_.reset();
  }
  now_ = std::max(now_, t);
}

void SwitchSim::cancel_pending() {
  if (!pending_) return;
  if (pending_->job.mode == CompileMode::kHardSwap) {
    std::pair<uint64_t, uint64_t> window{pending_->job.start,
                                         pending_->job.swap_time()};
    auto it = std::find(downtime_windows_.rbegin(), downtime_windows_.rend(),
                        window);
    if (it != downtime_windows_.rend())
      downtime_windows_.erase(std::next(it).base());
  }
  pending_.reset();
}

const CompileJob *SwitchSim::pending_job() const {
  return pending_ ? &pending_->job : nullptr;
}

const ComposedProgram &SwitchSim::active_program() const {
  if (!active_) throw std::logic_error("no active program");
  return active_->program;
}

SwitchSim::ProgramState &SwitchSim::target_state() {
  if (pending_) return pending_->state;
  if (active_) return *active_;
  throw Error(Errc::UNKNOWN_TABLE, "no program loaded");
}

const SwitchSim::ProgramState &SwitchSim::serving_state() const {
  if (!active_) throw std::logic_error("no active program");
  return *active_;
}

void SwitchSim::configure_ports(const std::set<int> &ports) {
  target_state().ports_up = ports;
}

ParsedHeaders SwitchSim::parse_frame(const std::vector<uint8_t> &bytes) const {
  return parse_with_plan(serving_state().program.parse_plan, bytes);
}

Verdict SwitchSim::run_pipeline(const ProgramState &, const Frame &frame,
                                ProgramState &state) {
  Verdict v;
  std::vector<uint8_t> work = frame.bytes;
  std::string dispatched_ns;

  auto drop = [&](DropReason reason) {
    v.forwarded = false;
    v.reason = reason;
    account(v, dispatched_ns);
    return v;
  };

  // (1) ingress port
  if (!state.ports_up.count(frame.ingress_port)) {
    v.trace.push_back({"port", "-", "-", "drop(PORT_DOWN)"});
    return drop(DropReason::PORT_DOWN);
  }
  v.trace.push_back({"port", "-", "-", "up"});

  // (2) parse
  ParsedHeaders parsed = parse_with_plan(state.program.parse_plan, work);
  if (parsed.parse_error) {
    v.trace.push_back({"parse", "-", "-", "drop(PARSE_ERROR)"});
    return drop(DropReason::PARSE_ERROR);
  }
  v.trace.push_back({"parse", "-", "-", "ok"});

  // (3) tenancy key
  const ParsedHeader *vlan = parsed.find("vlan");
  if (vlan == nullptr || !vlan->present) {
    v.trace.push_back({"vlan", "-", "-", "drop(NO_VLAN_TAG)"});
    return drop(DropReason::NO_VLAN_TAG);
  }

  // (4) dispatch on vid
  FieldLayout vid_layout = resolve_field({"vlan", "vid"});
  uint64_t vid = extract_bits(work, vlan->byte_offset, vid_layout.bit_offset,
                              vid_layout.bit_width);
  auto dispatch_it = state.program.dispatch.find(static_cast<uint16_t>(vid));
  if (dispatch_it == state.program.dispatch.end()) {
    v.trace.push_back({"dispatch", "dispatch", "miss", "drop(UNKNOWN_VLAN)"});
    return drop(DropReason::UNKNOWN_VLAN);
  }
  dispatched_ns = dispatch_it->second;
  v.trace.push_back(
      {"dispatch", "dispatch", "hit", "goto(" + dispatched_ns + ")"});
  const NsSlice *slice = state.program.find_slice(dispatched_ns);

  auto field_value = [&](const FieldRef &ref) -> std::optional<uint64_t> {
    const ParsedHeader *h = parsed.find(ref.header);
    if (h == nullptr || !h->present || !h->valid) return std::nullopt;
    FieldLayout layout = resolve_field(ref);
    return extract_bits(work, h->byte_offset, layout.bit_offset,
                        layout.bit_width);
  };

  std::optional<int> egress;

  // (5) slice control
  for (const auto &qualified : slice->control_order) {
    RuntimeTable &table = state.tables.at(qualified);
    std::vector<std::optional<uint64_t>> probe;
    probe.reserve(table.def.keys.size());
    for (const auto &key : table.def.keys) probe.push_back(field_value(key.field));
    RuntimeEntry *entry =
        const_cast<RuntimeEntry *>(table.lookup(probe));
    std::string matched = entry ? "hit" : "miss";
    const std::string &action =
        entry ? entry->action : table.def.default_action.action;
    const std::vector<uint64_t> &params =
        entry ? entry->params : table.def.default_action.params;

    if (action == "pass") {
      v.trace.push_back({"slice", qualified, matched, "pass"});
    } else if (action == "drop") {
      v.trace.push_back({"slice", qualified, matched, "drop"});
      return drop(DropReason::TABLE_DROP);
    } else if (action == "count") {
      if (entry)
        ++entry->counter;
      else
        ++table.default_counter;
      v.trace.push_back({"slice", qualified, matched, "count"});
    } else if (action == "forward") {
      egress = static_cast<int>(params.at(0));
      v.trace.push_back({"slice", qualified, matched, action_str(action, params)});
      break;
    } else if (action == "l3_route") {
      const ParsedHeader *ip = parsed.find("ipv4");
      if (ip == nullptr || !ip->present || !ip->valid) {
        v.trace.push_back({"slice", qualified, matched, "drop(PARSE_ERROR)"});
        return drop(DropReason::PARSE_ERROR);
      }
      FieldLayout ttl_layout = resolve_field({"ipv4", "ttl"});
      uint64_t ttl = extract_bits(work, ip->byte_offset, ttl_layout.bit_offset,
                                  ttl_layout.bit_width);
      if (ttl <= 1) {
        v.trace.push_back({"slice", qualified, matched, "drop(TTL_EXPIRED)"});
        return drop(DropReason::TTL_EXPIRED);
      }
      deposit_bits(work, ip->byte_offset, ttl_layout.bit_offset,
                   ttl_layout.bit_width, ttl - 1);
      FieldLayout dst = resolve_field({"ethernet", "dst_addr"});
      FieldLayout src = resolve_field({"ethernet", "src_addr"});
      deposit_bits(work, 0, src.bit_offset, src.bit_width, params.at(1));
      deposit_bits(work, 0, dst.bit_offset, dst.bit_width, params.at(2));
      recompute_ipv4_checksum(work, ip->byte_offset);
      egress = static_cast<int>(params.at(0));
      v.trace.push_back({"slice", qualified, matched, action_str(action, params)});
      break;
    }
  }

  // (6) static L2 forwarding, unless the slice already routed
  if (!egress) {
    RuntimeTable &l2 = state.tables.at(state.program.forward_l2.name);
    std::vector<std::optional<uint64_t>> probe = {
        field_value({"ethernet", "dst_addr"})};
    const RuntimeEntry *entry = l2.lookup(probe);
    if (entry == nullptr) {
      v.trace.push_back(
          {"l2", state.program.forward_l2.name, "miss", "drop(L2_MISS)"});
      return drop(DropReason::L2_MISS);
    }
    egress = static_cast<int>(entry->params.at(0));
    v.trace.push_back({"l2", state.program.forward_l2.name, "hit",
                       action_str(entry->action, entry->params)});
  }

  // (7) egress port
  if (!state.ports_up.count(*egress)) {
    v.trace.push_back({"egress", "-", "-", "drop(PORT_DOWN)"});
    return drop(DropReason::PORT_DOWN);
  }
  v.trace.push_back(
      {"egress", "-", "-", "forward(" + std::to_string(*egress) + ")"});
  v.forwarded = true;
  v.egress_port = *egress;
  v.egress_bytes = std::move(work);
  account(v, dispatched_ns);
  return v;
}

void SwitchSim::account(const Verdict &verdict, const std::string &ns_id) {
  auto bump = [&verdict](ScopeStats &scope) {
    if (verdict.forwarded)
      ++scope.delivered;
    else
      ++scope.dropped[drop_reason_name(verdict.reason)];
  };
  bump(global_);
  if (!ns_id.empty()) {
    auto it = per_ns_.find(ns_id);
    if (it == per_ns_.end()) {
      ScopeStats fresh;
      for (DropReason r : all_drop_reasons())
        fresh.dropped[drop_reason_name(r)] = 0;
      it = per_ns_.emplace(ns_id, std::move(fresh)).first;
    }
    ++it->second.offered;
    bump(it->second);
  }
}

Verdict SwitchSim::process_packet(const Frame &frame) {
  advance_to(frame.timestamp_us);
  ++global_.offered;
  if (pending_ && frame.timestamp_us >= pending_->job.start) {
    if (pending_->job.mode == CompileMode::kHardSwap || !active_) {
      Verdict v;
      v.trace.push_back({"compile", "-", "-", "drop(RECOMPILING)"});
      v.forwarded = false;
      v.reason = DropReason::RECOMPILING;
      account(v, "");
      return v;
    }
    // slow_mode: keep serving with the current program
  }
  if (!active_) throw std::logic_error("no active program");
  return run_pipeline(*active_, frame, *active_);
}

namespace {

void check_key_shape(const TableDef &def, const std::vector<KeyValue> &kvs) {
  if (kvs.size() != def.keys.size())
    throw Error(Errc::BAD_KEY,
                "table '" + def.name + "' wants " +
                    std::to_string(def.keys.size()) + " key values, got " +
                    std::to_string(kvs.size()));
  for (size_t i = 0; i < kvs.size(); ++i) {
    const TableKey &key = def.keys[i];
    int width = resolve_field(key.field).bit_width;
    uint64_t max_value =
        width >= 64 ? ~0ULL : ((1ULL << width) - 1);
    if (kvs[i].value > max_value)
      throw Error(Errc::BAD_KEY, "value " + std::to_string(kvs[i].value) +
                                     " exceeds " + std::to_string(width) +
                                     "-bit field " + key.field.dotted());
    if (key.match == MatchKind::kExact) {
      if (kvs[i].prefix_len)
        throw Error(Errc::BAD_KEY,
                    "prefix length on exact key " + key.field.dotted());
    } else {
      if (!kvs[i].prefix_len)
        throw Error(Errc::BAD_KEY,
                    "lpm key " + key.field.dotted() + " needs a prefix length");
      int prefix = *kvs[i].prefix_len;
      if (prefix < 0 || prefix > width)
        throw Error(Errc::BAD_KEY, "prefix /" + std::to_string(prefix) +
                                       " out of range for " +
                                       key.field.dotted());
      if (prefix < width &&
          (kvs[i].value & ((1ULL << (width - prefix)) - 1)) != 0)
        throw Error(Errc::BAD_KEY,
                    "bits below /" + std::to_string(prefix) + " must be zero");
    }
  }
}

}  // namespace

void SwitchSim::insert_entry(const std::string &qualified_table,
                             const std::vector<KeyValue> &key_values,
                             const std::string &action,
                             const std::vector<uint64_t> &params,
                             int priority) {
  ProgramState &state = target_state();
  auto it = state.tables.find(qualified_table);
  if (it == state.tables.end())
    throw Error(Errc::UNKNOWN_TABLE, "no table '" + qualified_table + "'");
  RuntimeTable &table = it->second;
  check_key_shape(table.def, key_values);
  if (std::find(table.def.actions.begin(), table.def.actions.end(), action) ==
      table.def.actions.end())
    throw Error(Errc::ACTION_NOT_PERMITTED,
                "table '" + qualified_table + "' does not permit '" + action +
                    "'");
  if (static_cast<int>(params.size()) != action_arity(action))
    throw Error(Errc::ACTION_NOT_PERMITTED,
                "'" + action + "' wants " +
                    std::to_string(action_arity(action)) + " params, got " +
                    std::to_string(params.size()));

  if (RuntimeEntry *existing = table.find_exact(key_values)) {
    existing->action = action;
    existing->params = params;
    existing->priority = priority;
    existing->counter = 0;
    return;
  }
  if (table.entries.size() >= table.def.max_entries)
    throw Error(Errc::TABLE_FULL, "table '" + qualified_table + "' holds " +
                                      std::to_string(table.def.max_entries) +
                                      " entries");
  RuntimeEntry entry{key_values, action, params, priority, 0};
  // Longest prefixes first so lookup can take the first full match; ties and
  // exact tables order by the canonical key string.
  auto order = [&table](const RuntimeEntry &a, const RuntimeEntry &b) {
    bool has_lpm =
        !table.def.keys.empty() && table.def.keys.back().match == MatchKind::kLpm;
    if (has_lpm) {
      int pa = a.key.back().prefix_len.value_or(0);
      int pb = b.key.back().prefix_len.value_or(0);
      if (pa != pb) return pa > pb;
    }
    return key_values_str(a.key) < key_values_str(b.key);
  };
  table.entries.insert(
      std::upper_bound(table.entries.begin(), table.entries.end(), entry, order),
      std::move(entry));
}

void SwitchSim::delete_entry(const std::string &qualified_table,
                             const std::vector<KeyValue> &key_values) {
  ProgramState &state = target_state();
  auto it = state.tables.find(qualified_table);
  if (it == state.tables.end())
    throw Error(Errc::UNKNOWN_TABLE, "no table '" + qualified_table + "'");
  RuntimeTable &table = it->second;
  check_key_shape(table.def, key_values);
  auto pos = std::find_if(table.entries.begin(), table.entries.end(),
                          [&key_values](const RuntimeEntry &e) {
                            return e.key == key_values;
                          });
  if (pos == table.entries.end())
    throw Error(Errc::NOT_FOUND, "no entry " + key_values_str(key_values) +
                                     " in '" + qualified_table + "'");
  table.entries.erase(pos);
}

std::map<std::string, std::vector<EntryView>> SwitchSim::dump_entries() const {
  std::map<std::string, std::vector<EntryView>> out;
  if (!active_) return out;
  for (const auto &[name, table] : active_->tables) {
    std::vector<EntryView> views;
    for (const auto &entry : table.entries)
      views.push_back({key_values_str(entry.key), entry.action, entry.params,
                       entry.priority});
    std::sort(views.begin(), views.end(),
              [](const EntryView &a, const EntryView &b) { return a.key < b.key; });
    out.emplace(name, std::move(views));
  }
  return out;
}

nlohmann::json SwitchSim::stats() const {
  using nlohmann::json;
  auto scope_json = [](const ScopeStats &scope) {
    json dropped = json::object();
    for (const auto &[reason, count] : scope.dropped) dropped[reason] = count;
    return json{{"offered", scope.offered},
                {"delivered", scope.delivered},
                {"dropped", dropped}};
  };
  json per_ns = json::object();
  for (const auto &[ns, scope] : per_ns_) per_ns[ns] = scope_json(scope);
  json windows = json::array();
  for (const auto &[start, end] : downtime_windows_)
    windows.push_back({start, end});
  json counters = json::object();
  if (active_) {
    for (const auto &[name, table] : active_->tables) {
      json table_counters = json::object();
      for (const auto &entry : table.entries)
        if (entry.action == "count")
          table_counters[key_values_str(entry.key)] = entry.counter;
      if (table.def.default_action.action == "count")
        table_counters["default"] = table.default_counter;
      if (!table_counters.empty()) counters[name] = table_counters;
    }
  }
  return {{"global", scope_json(global_)},
          {"per_ns", per_ns},
          {"downtime_windows", windows},
          {"counters", counters}};
}

Frame parse_trace_line(const std::string &line) {
  std::istringstream in(line);
  std::string tag, hex;
  Frame frame;
  if (!(in >> tag >> frame.timestamp_us >> frame.ingress_port >> hex) ||
      tag != "PKT")
    throw Error(Errc::SCENARIO_PARSE, "bad trace line '" + line + "'");
  if (hex.size() % 2 != 0)
    throw Error(Errc::SCENARIO_PARSE, "odd hex length in '" + line + "'");
  frame.bytes.reserve(hex.size() / 2);
  for (size_t i = 0; i < hex.size(); i += 2) {
    auto nibble = [&line](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      throw Error(Errc::SCENARIO_PARSE, "bad hex in '" + line + "'");
    };
    frame.bytes.push_back(
        static_cast<uint8_t>((nibble(hex[i]) << 4) | nibble(hex[i + 1])));
  }
  return frame;
}

std::string format_trace_line(const Frame &frame) {
  static const char hex[] = "0123456789abcdef";
  std::string bytes;
  bytes.reserve(frame.bytes.size() * 2);
  for (uint8_t b : frame.bytes) {
    bytes.push_back(hex[b >> 4]);
    bytes.push_back(hex[b & 0x0f]);
  }
  return "PKT " + std::to_string(frame.timestamp_us) + " " +
         std::to_string(frame.ingress_port) + " " + bytes;
}

}  // namespace p4nfv
