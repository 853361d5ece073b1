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

#include "p4nfv/composer.hpp"

#include <algorithm>
#include <sstream>

#include "p4nfv/util.hpp"

namespace p4nfv {

namespace {

using nlohmann::json;

constexpr uint64_t kEthertypeVlan = 0x8100;
constexpr uint64_t kEthertypeIpv4 = 0x0800;
constexpr uint64_t kProtoTcp = 6;
constexpr uint64_t kProtoUdp = 17;

}  // namespace

std::vector<ParsePlan::Transition> ParsePlan::transitions() const {
  std::vector<Transition> out;
  out.push_back({"ethernet", "ethertype", kEthertypeVlan, "vlan"});
  if (headers.count("ipv4")) {
    out.push_back({"vlan", "ethertype", kEthertypeIpv4, "ipv4"});
    if (headers.count("tcp"))
      out.push_back({"ipv4", "protocol", kProtoTcp, "tcp"});
    if (headers.count("udp"))
      out.push_back({"ipv4", "protocol", kProtoUdp, "udp"});
  }
  return out;
}

std::string qualify_table_name(const std::string &ns_id,
                               const std::string &function_name,
                               const std::string &table_name) {
  return "ns__" + ns_id + "__" + function_name + "__" + table_name;
}

size_t ComposedProgram::qualified_table_count() const {
  size_t n = 0;
  for (const auto &slice : slices) n += slice.tables.size();
  return n;
}

const NsSlice *ComposedProgram::find_slice(const std::string &ns_id) const {
  for (const auto &slice : slices)
    if (slice.ns_id == ns_id) return &slice;
  return nullptr;
}

const TableDef *ComposedProgram::find_table(
    const std::string &qualified_name) const {
  if (qualified_name == forward_l2.name) return &forward_l2;
  for (const auto &slice : slices)
    for (const auto &qt : slice.tables)
      if (qt.qualified_name == qualified_name) return &qt.def;
  return nullptr;
}

TableDef make_forward_l2_def() {
  TableDef t;
  t.name = "forward_l2";
  t.keys = {{{"ethernet", "dst_addr"}, MatchKind::kExact}};
  t.actions = {"forward"};
  t.default_action = {"drop", {}};
  t.max_entries = 4096;
  return t;
}

ParsePlan build_super_parser(
    const std::vector<const P4FunctionDef *> &functions) {
  ParsePlan plan;
  plan.headers = {"ethernet", "vlan"};
  for (const P4FunctionDef *def : functions)
    for (const auto &h : def->headers)
      if (find_header(h) != nullptr) plan.headers.insert(h);
  // Prerequisite closure: a transport header is unreachable without ipv4.
  if (plan.headers.count("tcp") || plan.headers.count("udp"))
    plan.headers.insert("ipv4");
  return plan;
}

ComposedProgram compose(const std::vector<NsDescriptor> &active,
                        const FunctionRepo &repo) {
  std::vector<NsDescriptor> ordered = active;
  std::sort(ordered.begin(), ordered.end(),
            [](const NsDescriptor &a, const NsDescriptor &b) {
              return a.ns_id < b.ns_id;
            });

  std::map<uint16_t, std::string> dispatch;
  for (const auto &ns : ordered) {
    auto [it, inserted] = dispatch.emplace(ns.vlan_id, ns.ns_id);
    if (!inserted)
      throw Error(Errc::VLAN_COLLISION,
                  "vlan " + std::to_string(ns.vlan_id) + " used by both '" +
                      it->second + "' and '" + ns.ns_id + "'");
  }

  ComposedProgram program;
  program.dispatch = std::move(dispatch);
  program.forward_l2 = make_forward_l2_def();

  std::vector<const P4FunctionDef *> all_functions;
  for (const auto &ns : ordered) {
    NsSlice slice;
    slice.ns_id = ns.ns_id;
    slice.tenant_id = ns.tenant_id;
    slice.vlan_id = ns.vlan_id;
    for (const auto &ref : ns.functions) {
      if (!repo.contains(ref.name, ref.version))
        throw Error(Errc::FUNCTION_NOT_FOUND,
                    "ns '" + ns.ns_id + "' requires " + ref.name + " v" +
                        std::to_string(ref.version));
      const P4FunctionDef &def = repo.get(ref.name, ref.version);
      all_functions.push_back(&def);
      for (const auto &table : def.tables)
        slice.tables.push_back(
            {qualify_table_name(ns.ns_id, def.name, table.name), def.name,
             table});
      for (const auto &table_name : def.control)
        slice.control_order.push_back(
            qualify_table_name(ns.ns_id, def.name, table_name));
    }
    program.slices.push_back(std::move(slice));
  }

  program.parse_plan = build_super_parser(all_functions);
  program.program_hash = sha256_hex(canonical_serialize(program));
  return program;
}

std::string canonical_serialize(const ComposedProgram &program) {
  json transitions = json::array();
  for (const auto &t : program.parse_plan.transitions())
    transitions.push_back({{"from", t.from},
                           {"select", t.select_field},
                           {"value", t.value},
                           {"to", t.to}});
  json dispatch = json::object();
  for (const auto &[vid, ns] : program.dispatch)
    dispatch[std::to_string(vid)] = ns;
  json slices = json::array();
  for (const auto &slice : program.slices) {
    json tables = json::array();
    for (const auto &qt : slice.tables)
      tables.push_back({{"qualified_name", qt.qualified_name},
                        {"function", qt.function},
                        {"table", table_to_json(qt.def)}});
    slices.push_back({{"ns_id", slice.ns_id},
                      {"tenant_id", slice.tenant_id},
                      {"vlan_id", slice.vlan_id},
                      {"qualified_tables", tables},
                      {"control_order", slice.control_order}});
  }
  json j = {{"parse_plan",
             {{"headers", std::vector<std::string>(
                              program.parse_plan.headers.begin(),
                              program.parse_plan.headers.end())},
              {"transitions", transitions}}},
            {"dispatch", dispatch},
            {"slices", slices},
            {"forward_l2", table_to_json(program.forward_l2)}};
  return j.dump();
}

namespace {

// Emits the fixed parse-path order so renders are stable.
const char *kParseOrder[] = {"ethernet", "vlan", "ipv4", "tcp", "udp"};

void render_table(std::ostringstream &out, const std::string &name,
                  const TableDef &def) {
  out << "table " << name << " {\n";
  out << "  key = {";
  for (const auto &k : def.keys)
    out << " " << k.field.dotted() << ": " << match_kind_name(k.match) << ";";
  out << " }\n";
  out << "  actions = {";
  for (const auto &a : def.actions) out << " " << a << ";";
  out << " }\n";
  out << "  default_action = " << def.default_action.action << "(";
  for (size_t i = 0; i < def.default_action.params.size(); ++i) {
    if (i > 0) out << ", ";
    out << def.default_action.params[i];
  }
  out << ");\n";
  out << "  size = " << def.max_entries << ";\n";
  out << "}\n";
}

}  // namespace

std::string render_pseudo_p4(const ComposedProgram &program) {
  std::ostringstream out;
  out << "// composed data plane " << program.program_hash << "\n\n";

  for (const char *name : kParseOrder) {
    if (!program.parse_plan.headers.count(name)) continue;
    const HeaderDef *hdr = find_header(name);
    out << "header " << hdr->name << "_t {";
    for (const auto &[field, width] : hdr->fields)
      out << " bit<" << width << "> " << field << ";";
    out << " }\n";
  }

  out << "\nparser superparser {\n";
  auto transitions = program.parse_plan.transitions();
  for (const char *name : kParseOrder) {
    if (!program.parse_plan.headers.count(name)) continue;
    out << "  state parse_" << name << " { extract(" << name << ");";
    bool any = false;
    for (const auto &t : transitions) {
      if (t.from != name) continue;
      if (!any) {
        out << " select(" << t.from << "." << t.select_field << ") {";
        any = true;
      }
      out << " 0x" << std::hex << t.value << std::dec << ": parse_" << t.to
          << ";";
    }
    if (any) out << " default: accept; }";
    out << " }\n";
  }
  out << "}\n\n";

  for (const auto &slice : program.slices)
    for (const auto &qt : slice.tables)
      render_table(out, qt.qualified_name, qt.def);
  render_table(out, program.forward_l2.name, program.forward_l2);

  out << "\ncontrol ingress {\n";
  out << "  apply {\n";
  out << "    switch (vlan.vid) {\n";
  for (const auto &[vid, ns_id] : program.dispatch) {
    const NsSlice *slice = program.find_slice(ns_id);
    out << "      " << vid << ": { // ns " << ns_id << "\n";
    for (const auto &name : slice->control_order)
      out << "        " << name << ".apply();\n";
    out << "      }\n";
  }
  out << "      default: { drop(); }\n";
  out << "    }\n";
  out << "    if (!egress_set) { " << program.forward_l2.name
      << ".apply(); }\n";
  out << "  }\n";
  out << "}\n";
  return out.str();
}

}  // namespace p4nfv
