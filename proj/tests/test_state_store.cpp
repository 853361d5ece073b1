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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "helpers/fixtures.hpp"
#include "p4nfv/state_store.hpp"
#include "p4nfv/util.hpp"

using namespace p4nfv;
namespace fs = std::filesystem;

namespace {

CpRule blue_rule() {
  CpRule rule;
  rule.ns_id = "blue1";
  rule.table = {"l2-count", "seen"};
  rule.key_values = {{testfix::kMacA1, std::nullopt}};
  rule.action = "count";
  rule.inserted_at = 50;
  return rule;
}

CpRule admin_l2_rule(uint64_t mac, uint64_t port, const std::string &tag) {
  CpRule rule;
  rule.ns_id = kAdminOwner;
  rule.table = {"", "forward_l2"};
  rule.key_values = {{mac, std::nullopt}};
  rule.action = "forward";
  rule.params = {port};
  rule.inserted_at = 10;
  rule.tag = tag;
  return rule;
}

}  // namespace

TEST_CASE("table refs qualify against their owner") {
  TableRef slice{"l2-count", "seen"};
  CHECK_FALSE(slice.is_forward_l2());
  CHECK(slice.qualified("blue1") == "ns__blue1__l2-count__seen");

  TableRef l2{"", "forward_l2"};
  CHECK(l2.is_forward_l2());
  CHECK(l2.qualified(kAdminOwner) == "forward_l2");
  CHECK(l2.qualified("anything") == "forward_l2");
}

TEST_CASE("cp rules round-trip through JSON") {
  CpRule rule;
  rule.rule_id = 17;
  rule.ns_id = "blue1";
  rule.table = {"fw", "acl"};
  rule.key_values = {{0x0a000001, std::nullopt}, {0xc0a80000, uint8_t{16}}};
  rule.action = "drop";
  rule.params = {};
  rule.priority = 3;
  rule.inserted_at = 12345;
  rule.tag = "";

  CpRule back = cp_rule_from_json(cp_rule_to_json(rule));
  CHECK(back.rule_id == rule.rule_id);
  CHECK(back.ns_id == rule.ns_id);
  CHECK(back.table == rule.table);
  CHECK(back.key_values == rule.key_values);
  CHECK(back.action == rule.action);
  CHECK(back.params == rule.params);
  CHECK(back.priority == rule.priority);
  CHECK(back.inserted_at == rule.inserted_at);
  CHECK(back.tag == rule.tag);

  // MAC-sized values and admin tags survive as well.
  CpRule admin = admin_l2_rule(testfix::kMacA1, 1, "blue1");
  admin.rule_id = 2;
  CpRule admin_back = cp_rule_from_json(cp_rule_to_json(admin));
  CHECK(admin_back.key_values == admin.key_values);
  CHECK(admin_back.tag == "blue1");
  CHECK(admin_back.params == std::vector<uint64_t>{1});
}

TEST_CASE("ns records: insert, query, remove") {
  testfix::TempDir dir("store");
  StateStore store(dir.str());
  CHECK(store.active_ns().empty());
  CHECK_FALSE(store.has_ns("blue1"));
  CHECK(store.find_ns("blue1") == nullptr);

  store.record_ns(testfix::red1(), 100);
  store.record_ns(testfix::blue1(), 200);

  auto active = store.active_ns();
  REQUIRE(active.size() == 2);
  CHECK(active[0].desc.ns_id == "blue1");  // sorted despite insert order
  CHECK(active[0].instantiated_at == 200);
  CHECK(active[1].desc.ns_id == "red1");
  REQUIRE(store.find_ns("red1") != nullptr);
  CHECK(store.find_ns("red1")->desc == testfix::red1());

  auto removed = store.remove_ns("red1");
  CHECK(removed.desc.ns_id == "red1");
  CHECK(removed.instantiated_at == 100);
  CHECK_FALSE(store.has_ns("red1"));
  CHECK(store.active_ns().size() == 1);

  try {
    store.remove_ns("red1");
    FAIL("expected throw");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::NOT_FOUND);
  }
}

TEST_CASE("duplicate ns ids and vlans are refused") {
  testfix::TempDir dir("store");
  StateStore store(dir.str());
  store.record_ns(testfix::blue1(), 100);

  try {
    store.record_ns(testfix::blue1(), 200);
    FAIL("expected throw");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::DUPLICATE_NS);
  }

  auto vlan_clash = testfix::red1();
  vlan_clash.vlan_id = 100;
  try {
    store.record_ns(vlan_clash, 200);
    FAIL("expected throw");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::VLAN_IN_USE);
  }

  // The failed inserts left nothing behind.
  CHECK(store.active_ns().size() == 1);
}

TEST_CASE("rule ids ascend and upserts retire the live duplicate") {
  testfix::TempDir dir("store");
  StateStore store(dir.str());

  uint64_t a = store.append_rule(blue_rule());
  uint64_t b = store.append_rule(admin_l2_rule(testfix::kMacA1, 1, "blue1"));
  CHECK(a == 1);
  CHECK(b == 2);

  // Same (ns, table, keys): the old rule disappears, the new id is higher.
  auto update = blue_rule();
  update.action = "count";
  update.inserted_at = 99;
  uint64_t c = store.append_rule(update);
  CHECK(c == 3);

  auto all = store.all_rules();
  REQUIRE(all.size() == 2);
  CHECK(all[0].rule_id == 2);
  CHECK(all[1].rule_id == 3);
  CHECK(all[1].inserted_at == 99);

  // Different key values are a separate rule, not an upsert.
  auto other = blue_rule();
  other.key_values = {{testfix::kMacA2, std::nullopt}};
  CHECK(store.append_rule(other) == 4);
  CHECK(store.all_rules().size() == 3);

  // Same keys under a different NS do not collide either.
  auto red = blue_rule();
  red.ns_id = "red1";
  CHECK(store.append_rule(red) == 5);
  CHECK(store.all_rules().size() == 4);
}

TEST_CASE("rules_for filters by owner") {
  testfix::TempDir dir("store");
  StateStore store(dir.str());
  store.append_rule(blue_rule());
  store.append_rule(admin_l2_rule(testfix::kMacA1, 1, "blue1"));
  store.append_rule(admin_l2_rule(testfix::kMacB1, 3, "red1"));

  CHECK(store.rules_for("blue1").size() == 1);
  CHECK(store.rules_for(kAdminOwner).size() == 2);
  CHECK(store.rules_for("red1").empty());
}

TEST_CASE("remove_rule deletes exactly the addressed rule") {
  testfix::TempDir dir("store");
  StateStore store(dir.str());
  store.append_rule(blue_rule());
  store.append_rule(admin_l2_rule(testfix::kMacA1, 1, "blue1"));

  store.remove_rule("blue1", {"l2-count", "seen"},
                    {{testfix::kMacA1, std::nullopt}});
  CHECK(store.all_rules().size() == 1);
  CHECK(store.all_rules()[0].ns_id == kAdminOwner);

  try {
    store.remove_rule("blue1", {"l2-count", "seen"},
                      {{testfix::kMacA1, std::nullopt}});
    FAIL("expected throw");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::NOT_FOUND);
  }
}

TEST_CASE("purging is per NS; admin rules go only by tag") {
  testfix::TempDir dir("store");
  StateStore store(dir.str());
  store.append_rule(blue_rule());
  auto second = blue_rule();
  second.key_values = {{testfix::kMacA2, std::nullopt}};
  store.append_rule(second);
  store.append_rule(admin_l2_rule(testfix::kMacA1, 1, "blue1"));
  store.append_rule(admin_l2_rule(testfix::kMacA2, 2, "blue1"));
  store.append_rule(admin_l2_rule(testfix::kMacB1, 3, "red1"));
  store.append_rule(admin_l2_rule(0x02dd00000001, 7, ""));  // hand-set by admin

  CHECK(store.purge_ns_rules("blue1") == 2);
  CHECK(store.purge_ns_rules("blue1") == 0);
  CHECK(store.all_rules().size() == 4);

  // Admin-owned rules cannot be purged wholesale.
  try {
    store.purge_ns_rules(kAdminOwner);
    FAIL("expected throw");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::INVALID);
  }

  CHECK(store.purge_tagged_admin_rules("blue1") == 2);
  CHECK(store.purge_tagged_admin_rules("blue1") == 0);
  auto rest = store.all_rules();
  REQUIRE(rest.size() == 2);
  CHECK(rest[0].tag == "red1");
  CHECK(rest[1].tag == "");
}

TEST_CASE("every mutation is durable across reload") {
  testfix::TempDir dir("store");
  {
    StateStore store(dir.str());
    store.record_ns(testfix::blue1(), 100);
    store.append_rule(blue_rule());
    store.append_rule(admin_l2_rule(testfix::kMacA1, 1, "blue1"));
  }
  {
    StateStore store(dir.str());
    REQUIRE(store.active_ns().size() == 1);
    CHECK(store.active_ns()[0].desc == testfix::blue1());
    REQUIRE(store.all_rules().size() == 2);
    CHECK(store.all_rules()[0].rule_id == 1);

    // next_rule_id continues past what was stored.
    auto extra = blue_rule();
    extra.key_values = {{5, std::nullopt}};
    CHECK(store.append_rule(extra) == 3);
    store.remove_ns("blue1");
  }
  {
    StateStore store(dir.str());
    CHECK(store.active_ns().empty());
    CHECK(store.all_rules().size() == 3);
  }
  // An upsert before reload still advances the id sequence afterwards.
  {
    StateStore store(dir.str());
    store.append_rule(blue_rule());  // id 4, retiring the stored id 1
  }
  {
    StateStore store(dir.str());
    auto extra = blue_rule();
    extra.key_values = {{6, std::nullopt}};
    CHECK(store.append_rule(extra) == 5);
  }
}

TEST_CASE("the state files live under state/ and are valid JSON") {
  testfix::TempDir dir("store");
  StateStore store(dir.str());
  store.record_ns(testfix::blue1(), 100);
  store.append_rule(blue_rule());

  auto ns_file = fs::path(dir.str()) / "ns_functions.json";
  auto rules_file = fs::path(dir.str()) / "cp_rules.json";
  REQUIRE(fs::exists(ns_file));
  REQUIRE(fs::exists(rules_file));

  auto ns_doc = nlohmann::json::parse(read_file(ns_file));
  REQUIRE(ns_doc.is_array());
  CHECK(ns_doc[0]["descriptor"]["ns_id"] == "blue1");
  CHECK(ns_doc[0]["instantiated_at"] == 100);

  auto rules_doc = nlohmann::json::parse(read_file(rules_file));
  REQUIRE(rules_doc.is_array());
  CHECK(rules_doc[0]["rule_id"] == 1);
  CHECK(rules_doc[0]["function"] == "l2-count");
  CHECK(rules_doc[0]["table"] == "seen");
}

TEST_CASE("corrupt state files are refused at load") {
  testfix::TempDir dir("store");
  {
    StateStore store(dir.str());
    store.record_ns(testfix::blue1(), 100);
  }
  SUBCASE("unparseable ns file") {
    std::ofstream(fs::path(dir.str()) / "ns_functions.json") << "{oops";
    try {
      StateStore store(dir.str());
      FAIL("expected throw");
    } catch (const Error &e) {
      CHECK(e.code() == Errc::STORE_CORRUPT);
    }
  }
  SUBCASE("wrong shape in rules file") {
    std::ofstream(fs::path(dir.str()) / "cp_rules.json")
        << R"([{"rule_id": "not a number"}])";
    try {
      StateStore store(dir.str());
      FAIL("expected throw");
    } catch (const Error &e) {
      CHECK(e.code() == Errc::STORE_CORRUPT);
    }
  }
}

TEST_CASE("snapshot and restore rewind both memory and disk") {
  testfix::TempDir dir("store");
  StateStore store(dir.str());
  store.record_ns(testfix::blue1(), 100);
  store.append_rule(blue_rule());

  auto snap = store.snapshot();

  store.record_ns(testfix::red1(), 200);
  store.append_rule(admin_l2_rule(testfix::kMacB1, 3, "red1"));
  store.remove_rule("blue1", {"l2-count", "seen"},
                    {{testfix::kMacA1, std::nullopt}});
  REQUIRE(store.active_ns().size() == 2);

  store.restore(snap);
  CHECK(store.active_ns().size() == 1);
  CHECK(store.active_ns()[0].desc.ns_id == "blue1");
  REQUIRE(store.all_rules().size() == 1);
  CHECK(store.all_rules()[0].rule_id == 1);

  // Id assignment resumes from the snapshot point.
  CHECK(store.append_rule(admin_l2_rule(testfix::kMacA2, 2, "blue1")) == 2);

  // The restore also rewrote the files: a fresh process sees the snapshot.
  StateStore reloaded(dir.str());
  CHECK(reloaded.active_ns().size() == 1);
  CHECK(reloaded.all_rules().size() == 2);
}

TEST_CASE("ns records are untouched by rule traffic") {
  testfix::TempDir dir("store");
  StateStore store(dir.str());
  store.record_ns(testfix::blue1(), 100);
  auto before = store.active_ns();

  store.append_rule(blue_rule());
  store.append_rule(admin_l2_rule(testfix::kMacA1, 1, "blue1"));
  store.purge_ns_rules("blue1");
  store.purge_tagged_admin_rules("blue1");

  auto after = store.active_ns();
  REQUIRE(after.size() == before.size());
  CHECK(after[0].desc == before[0].desc);
  CHECK(after[0].instantiated_at == before[0].instantiated_at);
}
