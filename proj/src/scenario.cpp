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

#include "p4nfv/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "p4nfv/repo.hpp"
#include "p4nfv/util.hpp"

namespace p4nfv {

namespace fs = std::filesystem;

RunConfig load_run_config(const std::string &path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const std::exception &e) {
    throw Error(Errc::SCENARIO_PARSE,
                "config '" + path + "': " + e.what());
  }
  if (!doc.is_object())
    throw Error(Errc::SCENARIO_PARSE, "config must be a JSON object");
  RunConfig config;
  for (const auto &[key, value] : doc.items()) {
    try {
      if (key == "mode")
        config.mode = compile_mode_from_name(value.get<std::string>());
      else if (key == "base_compile_us")
        config.base_compile_us = value.get<uint64_t>();
      else if (key == "per_table_us")
        config.per_table_us = value.get<uint64_t>();
      else if (key == "state_dir")
        config.state_dir = value.get<std::string>();
      else if (key == "repo_dir")
        config.repo_dir = value.get<std::string>();
      else if (key == "output_dir")
        config.output_dir = value.get<std::string>();
      else
        throw Error(Errc::SCENARIO_PARSE, "unknown config key '" + key + "'");
    } catch (const Error &) {
      throw;
    } catch (const std::exception &e) {
      throw Error(Errc::SCENARIO_PARSE,
                  "config key '" + key + "': " + e.what());
    }
  }
  return config;
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string &what) {
  throw Error(Errc::SCENARIO_PARSE,
              "line " + std::to_string(line) + ": " + what);
}

uint64_t parse_time(int line, const std::string &token) {
  try {
    size_t used = 0;
    uint64_t t = std::stoull(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return t;
  } catch (const std::exception &) {
    parse_fail(line, "bad timestamp '" + token + "'");
  }
}

std::vector<KeyValue> parse_key_list(int line, const std::string &token) {
  std::vector<KeyValue> out;
  if (token == "-") return out;
  std::istringstream in(token);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      out.push_back(parse_key_value(part));
    } catch (const Error &e) {
      parse_fail(line, e.detail());
    }
  }
  return out;
}

std::vector<uint64_t> parse_param_list(int line, const std::string &token) {
  std::vector<uint64_t> out;
  if (token == "-") return out;
  std::istringstream in(token);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      out.push_back(parse_value_token(part));
    } catch (const Error &e) {
      parse_fail(line, e.detail());
    }
  }
  return out;
}

std::vector<uint8_t> parse_hex_bytes(int line, const std::string &hex) {
  if (hex.size() % 2 != 0) parse_fail(line, "odd hex digit count");
  std::vector<uint8_t> bytes;
  bytes.reserve(hex.size() / 2);
  auto nibble = [line](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    parse_fail(line, std::string("bad hex digit '") + c + "'");
  };
  for (size_t i = 0; i < hex.size(); i += 2)
    bytes.push_back(
        static_cast<uint8_t>((nibble(hex[i]) << 4) | nibble(hex[i + 1])));
  return bytes;
}

bool is_drop_reason(const std::string &name) {
  for (DropReason r : all_drop_reasons())
    if (name == drop_reason_name(r)) return true;
  return false;
}

}  // namespace

std::vector<ScenarioEvent> parse_scenario(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::SCENARIO_PARSE, "cannot open '" + path + "'");
  fs::path base = fs::path(path).parent_path();
  auto resolve = [&base](const std::string &ref) {
    fs::path p(ref);
    return p.is_absolute() ? p.string() : (base / p).string();
  };

  std::vector<ScenarioEvent> events;
  std::string raw;
  int line_no = 0;
  uint64_t last_time = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string text = raw.substr(0, raw.find('#'));
    std::istringstream tokens(text);
    std::vector<std::string> tok;
    std::string t;
    while (tokens >> t) tok.push_back(t);
    if (tok.empty()) continue;

    ScenarioEvent ev;
    ev.line = line_no;
    size_t i = 0;
    std::string kind;
    if (tok[0] == "PKT") {
      // trace spelling: PKT <time> <port> <hex>
      kind = tok[0];
      i = 1;
      if (tok.size() < 2) parse_fail(line_no, "PKT needs a timestamp");
      ev.time = parse_time(line_no, tok[i++]);
    } else {
      if (tok.size() < 2) parse_fail(line_no, "want <time> <KIND> ...");
      ev.time = parse_time(line_no, tok[0]);
      kind = tok[1];
      i = 2;
    }
    size_t left = tok.size() - i;

    if (kind == "UPLOAD") {
      if (left != 1) parse_fail(line_no, "UPLOAD <function.json>");
      ev.kind = ScenarioEvent::Kind::kUpload;
      ev.path = resolve(tok[i]);
      if (!fs::exists(ev.path))
        parse_fail(line_no, "no such file '" + tok[i] + "'");
    } else if (kind == "INSTANTIATE") {
      if (left != 2)
        parse_fail(line_no, "INSTANTIATE <descriptor.json> <principal>");
      ev.kind = ScenarioEvent::Kind::kInstantiate;
      ev.path = resolve(tok[i]);
      if (!fs::exists(ev.path))
        parse_fail(line_no, "no such file '" + tok[i] + "'");
      ev.principal = tok[i + 1];
    } else if (kind == "TERMINATE") {
      if (left != 2) parse_fail(line_no, "TERMINATE <ns_id> <principal>");
      ev.kind = ScenarioEvent::Kind::kTerminate;
      ev.ns_id = tok[i];
      ev.principal = tok[i + 1];
    } else if (kind == "DAY2_INSERT") {
      if (left != 6 && left != 7)
        parse_fail(line_no,
                   "DAY2_INSERT <principal> <ns> <function|-> <table> "
                   "<keys> <action> [params]");
      ev.kind = ScenarioEvent::Kind::kDay2Insert;
      ev.principal = tok[i];
      ev.ns_id = tok[i + 1];
      ev.function = tok[i + 2] == "-" ? "" : tok[i + 2];
      ev.table = tok[i + 3];
      ev.key_values = parse_key_list(line_no, tok[i + 4]);
      ev.action = tok[i + 5];
      if (left == 7) ev.params = parse_param_list(line_no, tok[i + 6]);
    } else if (kind == "DAY2_DELETE") {
      if (left != 5)
        parse_fail(line_no,
                   "DAY2_DELETE <principal> <ns> <function|-> <table> <keys>");
      ev.kind = ScenarioEvent::Kind::kDay2Delete;
      ev.principal = tok[i];
      ev.ns_id = tok[i + 1];
      ev.function = tok[i + 2] == "-" ? "" : tok[i + 2];
      ev.table = tok[i + 3];
      ev.key_values = parse_key_list(line_no, tok[i + 4]);
    } else if (kind == "ADMIN_L2") {
      if (left != 2) parse_fail(line_no, "ADMIN_L2 <mac> <port>");
      ev.kind = ScenarioEvent::Kind::kAdminL2;
      try {
        ev.mac = parse_value_token(tok[i]);
        ev.port = static_cast<int>(parse_value_token(tok[i + 1]));
      } catch (const Error &e) {
        parse_fail(line_no, e.detail());
      }
    } else if (kind == "PKT") {
      if (left != 2) parse_fail(line_no, "PKT <port> <hex-bytes>");
      ev.kind = ScenarioEvent::Kind::kPkt;
      try {
        ev.port = static_cast<int>(parse_value_token(tok[i]));
      } catch (const Error &e) {
        parse_fail(line_no, e.detail());
      }
      ev.bytes = parse_hex_bytes(line_no, tok[i + 1]);
    } else if (kind == "EXPECT") {
      ev.kind = ScenarioEvent::Kind::kExpect;
      if (left < 1) parse_fail(line_no, "EXPECT <what> ...");
      std::string what = tok[i];
      if (what == "verdict") {
        if (left != 3)
          parse_fail(line_no, "EXPECT verdict FORWARD <port> | DROP <reason>");
        ev.expect = ScenarioEvent::Expect::kVerdict;
        ev.expect_a = tok[i + 1];
        ev.expect_b = tok[i + 2];
        if (ev.expect_a == "DROP") {
          if (!is_drop_reason(ev.expect_b))
            parse_fail(line_no, "unknown drop reason '" + ev.expect_b + "'");
        } else if (ev.expect_a != "FORWARD") {
          parse_fail(line_no, "verdict must be FORWARD or DROP");
        }
      } else if (what == "stats") {
        if (left != 3) parse_fail(line_no, "EXPECT stats <dotted.path> <value>");
        ev.expect = ScenarioEvent::Expect::kStats;
        ev.expect_a = tok[i + 1];
        ev.expect_b = tok[i + 2];
      } else if (what == "active") {
        if (left != 2) parse_fail(line_no, "EXPECT active <ns1,ns2|->");
        ev.expect = ScenarioEvent::Expect::kActive;
        ev.expect_a = tok[i + 1];
      } else if (what == "error") {
        if (left != 2) parse_fail(line_no, "EXPECT error <CODE>");
        ev.expect = ScenarioEvent::Expect::kError;
        ev.expect_a = tok[i + 1];
      } else {
        parse_fail(line_no, "unknown assertion '" + what + "'");
      }
    } else {
      parse_fail(line_no, "unknown event '" + kind + "'");
    }

    if (!events.empty() && ev.time < last_time)
      parse_fail(line_no, "events must be in non-decreasing time order");
    last_time = ev.time;
    events.push_back(std::move(ev));
  }
  return events;
}

namespace {

struct PendingError {
  int line = 0;
  std::string code;
  std::string detail;
};

const nlohmann::json *walk_stats(const nlohmann::json &stats,
                                 const std::string &dotted) {
  const nlohmann::json *node = &stats;
  std::istringstream in(dotted);
  std::string part;
  while (std::getline(in, part, '.')) {
    if (!node->is_object() || !node->contains(part)) return nullptr;
    node = &(*node)[part];
  }
  return node;
}

std::string stats_value_str(const nlohmann::json &node) {
  return node.is_string() ? node.get<std::string>() : node.dump();
}

}  // namespace

RunResult run_scenario(const std::string &scenario_path,
                       const RunConfig &config, std::ostream &log) {
  RunResult result;
  std::vector<ScenarioEvent> events;
  try {
    events = parse_scenario(scenario_path);
  } catch (const Error &e) {
    result.exit_code = 2;
    result.message = e.detail();
    return result;
  }

  FunctionRepo repo(config.repo_dir);
  StateStore store(config.state_dir);
  SwitchSim sw(SwitchConfig{config.base_compile_us, config.per_table_us});
  OrchestratorConfig orch_config{
      config.mode, (fs::path(config.output_dir) / "build").string()};
  Orchestrator orch(repo, store, sw, orch_config);
  fs::create_directories(config.output_dir);

  std::optional<Verdict> last_verdict;
  std::optional<PendingError> pending;
  int report_seq = 0;

  auto write_report = [&](const LifecycleReport &report) {
    ++report_seq;
    char name[32];
    std::snprintf(name, sizeof(name), "report-%04d.json", report_seq);
    atomic_write_file((fs::path(config.output_dir) / name).string(),
                      report.to_json().dump(2) + "\n");
  };
  auto finish_stats = [&] {
    atomic_write_file((fs::path(config.output_dir) / "stats.json").string(),
                      sw.stats().dump(2) + "\n");
  };
  auto assert_fail = [&](int line, const std::string &what) {
    result.exit_code = 1;
    result.message = "line " + std::to_string(line) + ": " + what;
    log << "fail " << result.message << "\n";
    finish_stats();
    return result;
  };
  auto event_error = [&](const PendingError &err) {
    result.exit_code = 3;
    result.message = "line " + std::to_string(err.line) + ": " + err.code +
                     ": " + err.detail;
    log << "error " << result.message << "\n";
    finish_stats();
    return result;
  };

  for (const ScenarioEvent &ev : events) {
    if (pending && !(ev.kind == ScenarioEvent::Kind::kExpect &&
                     ev.expect == ScenarioEvent::Expect::kError))
      return event_error(*pending);

    ++result.events_executed;
    try {
      switch (ev.kind) {
        case ScenarioEvent::Kind::kUpload: {
          P4FunctionDef def = parse_function_def(read_file(ev.path));
          repo.upload(def);
          log << "uploaded " << def.name << " v" << def.version << "\n";
          break;
        }
        case ScenarioEvent::Kind::kInstantiate: {
          NsDescriptor desc = parse_descriptor(read_file(ev.path));
          LifecycleReport report = orch.instantiate_ns(
              desc, parse_principal(ev.principal), ev.time);
          write_report(report);
          log << report.operation << " " << report.ns_id << " "
              << report.status << "\n";
          if (!report.success())
            pending = PendingError{ev.line, report.abort_error,
                                   report.abort_detail};
          break;
        }
        case ScenarioEvent::Kind::kTerminate: {
          LifecycleReport report = orch.terminate_ns(
              ev.ns_id, parse_principal(ev.principal), ev.time);
          write_report(report);
          log << report.operation << " " << report.ns_id << " "
              << report.status << "\n";
          if (!report.success())
            pending = PendingError{ev.line, report.abort_error,
                                   report.abort_detail};
          break;
        }
        case ScenarioEvent::Kind::kDay2Insert:
          orch.day2_insert_rule(parse_principal(ev.principal), ev.ns_id,
                                ev.function, ev.table, ev.key_values,
                                ev.action, ev.params, ev.time);
          log << "day2 insert " << ev.table << " ok\n";
          break;
        case ScenarioEvent::Kind::kDay2Delete:
          orch.day2_delete_rule(parse_principal(ev.principal), ev.ns_id,
                                ev.function, ev.table, ev.key_values, ev.time);
          log << "day2 delete " << ev.table << " ok\n";
          break;
        case ScenarioEvent::Kind::kAdminL2:
          orch.admin_set_l2(Principal::make_admin(), ev.mac, ev.port, ev.time);
          log << "admin l2 " << format_mac(ev.mac) << " -> " << ev.port
              << "\n";
          break;
        case ScenarioEvent::Kind::kPkt: {
          Frame frame{ev.time, ev.port, ev.bytes};
          last_verdict = sw.process_packet(frame);
          log << "pkt @" << ev.time << " " << last_verdict->outcome_str()
              << "\n";
          break;
        }
        case ScenarioEvent::Kind::kExpect: {
          switch (ev.expect) {
            case ScenarioEvent::Expect::kVerdict: {
              if (!last_verdict)
                return assert_fail(ev.line, "no packet before verdict check");
              std::string want =
                  ev.expect_a + "(" + ev.expect_b + ")";
              std::string got = last_verdict->outcome_str();
              if (got != want)
                return assert_fail(ev.line,
                                   "verdict " + got + ", want " + want);
              ++result.assertions_passed;
              log << "ok verdict " << want << "\n";
              break;
            }
            case ScenarioEvent::Expect::kStats: {
              sw.advance_to(ev.time);
              nlohmann::json stats = sw.stats();
              const nlohmann::json *node = walk_stats(stats, ev.expect_a);
              if (node == nullptr)
                return assert_fail(ev.line,
                                   "no stats field '" + ev.expect_a + "'");
              std::string got = stats_value_str(*node);
              if (got != ev.expect_b)
                return assert_fail(ev.line, ev.expect_a + " = " + got +
                                                ", want " + ev.expect_b);
              ++result.assertions_passed;
              log << "ok stats " << ev.expect_a << " " << got << "\n";
              break;
            }
            case ScenarioEvent::Expect::kActive: {
              sw.advance_to(ev.time);
              std::string got;
              for (const auto &record : store.active_ns()) {
                if (!got.empty()) got += ",";
                got += record.desc.ns_id;
              }
              if (got.empty()) got = "-";
              if (got != ev.expect_a)
                return assert_fail(ev.line,
                                   "active = " + got + ", want " + ev.expect_a);
              ++result.assertions_passed;
              log << "ok active " << got << "\n";
              break;
            }
            case ScenarioEvent::Expect::kError: {
              if (!pending)
                return assert_fail(ev.line, "expected error " + ev.expect_a +
                                                " but nothing failed");
              if (pending->code != ev.expect_a)
                return assert_fail(ev.line, "error " + pending->code +
                                                ", want " + ev.expect_a);
              ++result.assertions_passed;
              log << "ok error " << pending->code << "\n";
              pending.reset();
              break;
            }
          }
          break;
        }
      }
    } catch (const Error &e) {
      pending = PendingError{ev.line, e.code_name(), e.detail()};
      log << "event failed " << e.code_name() << "\n";
    } catch (const std::exception &e) {
      pending = PendingError{ev.line, "INVALID", e.what()};
      log << "event failed " << e.what() << "\n";
    }
  }
  if (pending) return event_error(*pending);

  finish_stats();
  log << "done: " << result.events_executed << " events, "
      << result.assertions_passed << " assertions\n";
  return result;
}

}  // namespace p4nfv
