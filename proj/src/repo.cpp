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

#include "p4nfv/repo.hpp"

#include "p4nfv/util.hpp"

namespace p4nfv {

namespace {

using nlohmann::json;

std::string function_file_name(const std::string &name, uint32_t version) {
  return name + "__" + std::to_string(version) + ".json";
}

}  // namespace

FunctionRepo::FunctionRepo(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::path index_path = dir_ / "index.json";
  if (!std::filesystem::exists(index_path)) return;

  json index;
  try {
    index = json::parse(read_file(index_path));
  } catch (const json::parse_error &e) {
    throw Error(Errc::STORE_CORRUPT, "index.json: " + std::string(e.what()));
  }
  if (!index.is_array())
    throw Error(Errc::STORE_CORRUPT, "index.json must be an array");
  for (const auto &entry : index) {
    std::string name = entry.at("name").get<std::string>();
    uint32_t version = entry.at("version").get<uint32_t>();
    std::string hash = entry.at("hash").get<std::string>();
    std::string content;
    try {
      content = read_file(dir_ / function_file_name(name, version));
    } catch (const Error &) {
      throw Error(Errc::STORE_CORRUPT,
                  "missing stored function " + name + " v" +
                      std::to_string(version));
    }
    if (sha256_hex(content) != hash)
      throw Error(Errc::STORE_CORRUPT,
                  "content hash mismatch for " + name + " v" +
                      std::to_string(version));
    P4FunctionDef def = parse_function_def(content);
    if (def.name != name || def.version != version)
      throw Error(Errc::STORE_CORRUPT,
                  "identity mismatch for " + name + " v" +
                      std::to_string(version));
    if (!validate_function(def).empty())
      throw Error(Errc::STORE_CORRUPT,
                  "stored function " + name + " fails validation");
    defs_.emplace(std::make_pair(name, version), std::move(def));
    hashes_.emplace(std::make_pair(name, version), std::move(hash));
  }
}

void FunctionRepo::upload(const P4FunctionDef &def) {
  auto violations = validate_function(def);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  auto key = std::make_pair(def.name, def.version);
  if (defs_.count(key))
    throw Error(Errc::DUPLICATE_VERSION,
                def.name + " v" + std::to_string(def.version) +
                    " already stored");

  std::string content = canonical_serialize(def);
  std::filesystem::create_directories(dir_);
  // Function file first, index last: the index commit makes the upload
  // visible; an orphan function file is ignored on reload.
  atomic_write_file(dir_ / function_file_name(def.name, def.version), content);
  defs_.emplace(key, def);
  hashes_.emplace(key, sha256_hex(content));
  persist_index();
}

const P4FunctionDef &FunctionRepo::get(const std::string &name,
                                       uint32_t version) const {
  auto it = defs_.find(std::make_pair(name, version));
  if (it == defs_.end())
    throw Error(Errc::NOT_FOUND,
                name + " v" + std::to_string(version) + " not in repository");
  return it->second;
}

bool FunctionRepo::contains(const std::string &name, uint32_t version) const {
  return defs_.count(std::make_pair(name, version)) > 0;
}

std::vector<FunctionRepo::IndexEntry> FunctionRepo::list() const {
  std::vector<IndexEntry> out;
  out.reserve(defs_.size());
  for (const auto &[key, _] : defs_)
    out.push_back({key.first, key.second, hashes_.at(key)});
  return out;
}

void FunctionRepo::persist_index() const {
  json index = json::array();
  for (const auto &entry : list())
    index.push_back({{"name", entry.name},
                     {"version", entry.version},
                     {"hash", entry.hash}});
  atomic_write_file(dir_ / "index.json", index.dump() + "\n");
}

}  // namespace p4nfv
