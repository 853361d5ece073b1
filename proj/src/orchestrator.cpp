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

#include "p4nfv/orchestrator.hpp"

#include <filesystem>

#include "p4nfv/composer.hpp"
#include "p4nfv/util.hpp"

namespace p4nfv {

namespace fs = std::filesystem;

Principal parse_principal(const std::string &text) {
  if (text == "admin") return Principal::make_admin();
  if (text.rfind("tenant:", 0) == 0 && text.size() > 7)
    return Principal::tenant(text.substr(7));
  throw Error(Errc::BAD_TYPE,
              "principal must be 'admin' or 'tenant:<id>', got '" + text + "'");
}

nlohmann::json LifecycleReport::to_json() const {
  nlohmann::json step_list = nlohmann::json::array();
  for (const auto &step : steps)
    step_list.push_back({{"name", step.name},
                         {"started", step.started},
                         {"finished", step.finished},
                         {"outcome", step.outcome}});
  nlohmann::json j{{"ns_id", ns_id},
                   {"operation", operation},
                   {"status", status},
                   {"steps", step_list},
                   {"compile",
                    {{"start", compile_start},
                     {"duration", compile_duration},
                     {"mode", compile_mode}}},
                   {"program_hash", program_hash}};
  if (status != "SUCCESS")
    j["abort"] = {{"step", abort_step},
                  {"error", abort_error},
                  {"detail", abort_detail}};
  return j;
}

Orchestrator::Orchestrator(FunctionRepo &repo, StateStore &store,
                           SwitchSim &sw, OrchestratorConfig config)
    : repo_(repo), store_(store), switch_(sw), config_(std::move(config)) {
  if (!switch_.has_program()) {
    ComposedProgram program = compose(active_descriptors(), repo_);
    switch_.activate_program(program);
    switch_.configure_ports(active_member_ports());
    replay_rules();
  }
}

std::vector<NsDescriptor> Orchestrator::active_descriptors() const {
  std::vector<NsDescriptor> out;
  for (const auto &record : store_.active_ns()) out.push_back(record.desc);
  return out;
}

std::set<int> Orchestrator::active_member_ports() const {
  std::set<int> ports;
  for (const auto &record : store_.active_ns())
    for (const auto &member : record.desc.members) ports.insert(member.port);
  return ports;
}

void Orchestrator::replay_rules() {
  for (const auto &rule : store_.all_rules())
    switch_.insert_entry(rule.table.qualified(rule.ns_id), rule.key_values,
                         rule.action, rule.params, rule.priority);
}

void Orchestrator::write_artifacts(const ComposedProgram &program) const {
  if (config_.artifact_dir.empty()) return;
  fs::create_directories(config_.artifact_dir);
  fs::path base =
      fs::path(config_.artifact_dir) / ("program-" + program.program_hash);
  nlohmann::json doc = nlohmann::json::parse(canonical_serialize(program));
  atomic_write_file(base.string() + ".json", doc.dump(2) + "\n");
  atomic_write_file(base.string() + ".p4.txt", render_pseudo_p4(program));
}

namespace {

// Runs one workflow step; on Error the report is marked ABORTED and the
// caller's rollback is invoked.
template <typename Fn, typename Rollback>
bool run_step(LifecycleReport &report, const std::string &name,
              uint64_t started, uint64_t finished, Fn &&fn,
              Rollback &&rollback) {
  StepRecord step{name, started, finished, "ok"};
  try {
    fn();
  } catch (const Error &e) {
    step.outcome = std::string("failed(") + e.code_name() + ")";
    report.steps.push_back(std::move(step));
    report.status = "ABORTED";
    report.abort_step = name;
    report.abort_error = e.code_name();
    report.abort_detail = e.detail();
    rollback();
    return false;
  }
  report.steps.push_back(std::move(step));
  return true;
}

}  // namespace

LifecycleReport Orchestrator::instantiate_ns(const NsDescriptor &desc,
                                             const Principal &principal,
                                             uint64_t time) {
  switch_.advance_to(time);
  LifecycleReport report;
  report.ns_id = desc.ns_id;
  report.operation = "instantiate";
  report.compile_mode = compile_mode_name(config_.mode);

  auto precheck_abort = [&report](Errc code, const std::string &detail) {
    report.status = "ABORTED";
    report.abort_step = "precheck";
    report.abort_error = errc_name(code);
    report.abort_detail = detail;
    return report;
  };
  if (!principal.admin && principal.tenant_id != desc.tenant_id)
    return precheck_abort(Errc::OWNERSHIP, principal.str() +
                                               " cannot instantiate for '" +
                                               desc.tenant_id + "'");
  try {
    check_descriptor(desc);
  } catch (const Error &e) {
    return precheck_abort(e.code(), e.detail());
  }

  StateStore::Snapshot snap = store_.snapshot();
  bool compiled = false;
  auto rollback = [this, &snap, &compiled] {
    store_.restore(snap);
    if (compiled) switch_.cancel_pending();
  };

  ComposedProgram program;
  uint64_t swap = time;

  if (!run_step(report, "Check required P4 functions", time, time,
                [&] {
                  for (const auto &ref : desc.functions)
                    if (!repo_.contains(ref.name, ref.version))
                      throw Error(Errc::FUNCTION_NOT_FOUND,
                                  "'" + ref.name + "' v" +
                                      std::to_string(ref.version) +
                                      " is not in the repository");
                },
                rollback))
    return report;
  if (!run_step(report, "Update ns_functions table", time, time,
                [&] { store_.record_ns(desc, time); }, rollback))
    return report;
  if (!run_step(report, "Compose P4 program", time, time,
                [&] { program = compose(active_descriptors(), repo_); },
                rollback))
    return report;
  if (!run_step(report, "Compile P4 program", time, time,
                [&] {
                  CompileJob job =
                      switch_.load_program(program, time, config_.mode);
                  compiled = true;
                  report.compile_start = job.start;
                  report.compile_duration = job.duration;
                  swap = job.swap_time();
                },
                rollback))
    return report;
  report.steps.back().finished = swap;
  if (!run_step(report, "Configure switch ports", swap, swap,
                [&] { switch_.configure_ports(active_member_ports()); },
                rollback))
    return report;
  if (!run_step(report, "Update CP", swap, swap,
                [&] {
                  for (const auto &member : desc.members) {
                    CpRule rule;
                    rule.ns_id = kAdminOwner;
                    rule.table = {"", "forward_l2"};
                    rule.key_values = {KeyValue{member.mac, std::nullopt}};
                    rule.action = "forward";
                    rule.params = {static_cast<uint64_t>(member.port)};
                    rule.inserted_at = time;
                    rule.tag = desc.ns_id;
                    store_.append_rule(rule);
                  }
                  replay_rules();
                },
                rollback))
    return report;

  report.program_hash = program.program_hash;
  write_artifacts(program);
  return report;
}

LifecycleReport Orchestrator::terminate_ns(const std::string &ns_id,
                                           const Principal &principal,
                                           uint64_t time) {
  switch_.advance_to(time);
  LifecycleReport report;
  report.ns_id = ns_id;
  report.operation = "terminate";
  report.compile_mode = compile_mode_name(config_.mode);

  auto precheck_abort = [&report](Errc code, const std::string &detail) {
    report.status = "ABORTED";
    report.abort_step = "precheck";
    report.abort_error = errc_name(code);
    report.abort_detail = detail;
    return report;
  };
  const NsRecord *record = store_.find_ns(ns_id);
  if (record == nullptr)
    return precheck_abort(Errc::NOT_FOUND, "no active NS '" + ns_id + "'");
  if (!principal.admin && principal.tenant_id != record->desc.tenant_id)
    return precheck_abort(Errc::OWNERSHIP,
                          principal.str() + " does not own '" + ns_id + "'");

  StateStore::Snapshot snap = store_.snapshot();
  bool compiled = false;
  auto rollback = [this, &snap, &compiled] {
    store_.restore(snap);
    if (compiled) switch_.cancel_pending();
  };

  ComposedProgram program;
  uint64_t swap = time;

  if (!run_step(report, "Update ns_functions table", time, time,
                [&] { store_.remove_ns(ns_id); }, rollback))
    return report;
  if (!run_step(report, "Compose P4 program", time, time,
                [&] { program = compose(active_descriptors(), repo_); },
                rollback))
    return report;
  if (!run_step(report, "Compile P4 program", time, time,
                [&] {
                  CompileJob job =
                      switch_.load_program(program, time, config_.mode);
                  compiled = true;
                  report.compile_start = job.start;
                  report.compile_duration = job.duration;
                  swap = job.swap_time();
                },
                rollback))
    return report;
  report.steps.back().finished = swap;
  if (!run_step(report, "Configure switch ports", swap, swap,
                [&] { switch_.configure_ports(active_member_ports()); },
                rollback))
    return report;
  if (!run_step(report, "Update CP", swap, swap,
                [&] {
                  store_.purge_ns_rules(ns_id);
                  store_.purge_tagged_admin_rules(ns_id);
                  replay_rules();
                },
                rollback))
    return report;

  report.program_hash = program.program_hash;
  write_artifacts(program);
  return report;
}

TableRef Orchestrator::resolve_day2_target(
    const Principal &principal, const std::string &ns_id,
    const std::string &function_name, const std::string &table_name) const {
  const NsRecord *record = store_.find_ns(ns_id);
  if (record == nullptr)
    throw Error(Errc::NOT_FOUND, "no active NS '" + ns_id + "'");
  if (!principal.admin && principal.tenant_id != record->desc.tenant_id)
    throw Error(Errc::OWNERSHIP,
                principal.str() + " does not own '" + ns_id + "'");
  if (function_name.empty()) {
    if (table_name != "forward_l2")
      throw Error(Errc::UNKNOWN_TABLE,
                  "the only global table is forward_l2, got '" + table_name +
                      "'");
    if (!principal.admin)
      throw Error(Errc::OWNERSHIP, "forward_l2 is managed by the admin only");
    return {"", "forward_l2"};
  }
  const FunctionRef *ref = nullptr;
  for (const auto &candidate : record->desc.functions)
    if (candidate.name == function_name) ref = &candidate;
  if (ref == nullptr)
    throw Error(Errc::UNKNOWN_TABLE, "'" + function_name +
                                         "' is not a function of '" + ns_id +
                                         "'");
  const P4FunctionDef &def = repo_.get(ref->name, ref->version);
  if (def.find_table(table_name) == nullptr)
    throw Error(Errc::UNKNOWN_TABLE, "'" + function_name + "' has no table '" +
                                         table_name + "'");
  return {function_name, table_name};
}

uint64_t Orchestrator::day2_insert_rule(
    const Principal &principal, const std::string &ns_id,
    const std::string &function_name, const std::string &table_name,
    const std::vector<KeyValue> &key_values, const std::string &action,
    const std::vector<uint64_t> &params, uint64_t time) {
  switch_.advance_to(time);
  TableRef target =
      resolve_day2_target(principal, ns_id, function_name, table_name);
  CpRule rule;
  rule.ns_id = target.is_forward_l2() ? kAdminOwner : ns_id;
  rule.table = target;
  rule.key_values = key_values;
  rule.action = action;
  rule.params = params;
  rule.inserted_at = time;
  StateStore::Snapshot snap = store_.snapshot();
  uint64_t id = store_.append_rule(std::move(rule));
  try {
    switch_.insert_entry(target.qualified(ns_id), key_values, action, params);
  } catch (...) {
    store_.restore(snap);
    throw;
  }
  return id;
}

void Orchestrator::day2_delete_rule(const Principal &principal,
                                    const std::string &ns_id,
                                    const std::string &function_name,
                                    const std::string &table_name,
                                    const std::vector<KeyValue> &key_values,
                                    uint64_t time) {
  switch_.advance_to(time);
  TableRef target =
      resolve_day2_target(principal, ns_id, function_name, table_name);
  std::string owner = target.is_forward_l2() ? kAdminOwner : ns_id;
  StateStore::Snapshot snap = store_.snapshot();
  store_.remove_rule(owner, target, key_values);
  try {
    switch_.delete_entry(target.qualified(ns_id), key_values);
  } catch (...) {
    store_.restore(snap);
    throw;
  }
}

uint64_t Orchestrator::admin_set_l2(const Principal &principal, uint64_t mac,
                                    int port, uint64_t time) {
  if (!principal.admin)
    throw Error(Errc::OWNERSHIP, "forward_l2 is managed by the admin only");
  switch_.advance_to(time);
  std::vector<KeyValue> key = {KeyValue{mac, std::nullopt}};
  std::vector<uint64_t> params = {static_cast<uint64_t>(port)};
  CpRule rule;
  rule.ns_id = kAdminOwner;
  rule.table = {"", "forward_l2"};
  rule.key_values = key;
  rule.action = "forward";
  rule.params = params;
  rule.inserted_at = time;
  StateStore::Snapshot snap = store_.snapshot();
  uint64_t id = store_.append_rule(std::move(rule));
  try {
    switch_.insert_entry("forward_l2", key, "forward", params);
  } catch (...) {
    store_.restore(snap);
    throw;
  }
  return id;
}

}  // namespace p4nfv
