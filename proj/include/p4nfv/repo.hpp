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

#ifndef P4NFV_REPO_HPP_
#define P4NFV_REPO_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "p4nfv/dsl.hpp"

namespace p4nfv {

// Versioned storage of validated, composable functions. Layout on disk:
// <dir>/<name>__<version>.json plus <dir>/index.json with content hashes.
// Uploads are write-once; there is no delete.
class FunctionRepo {
 public:
  struct IndexEntry {
    std::string name;
    uint32_t version;
    std::string hash;  // sha256 of the canonical serialization
  };

  // Loads an existing repository; a missing directory starts empty.
  explicit FunctionRepo(std::filesystem::path dir);

  // Throws ValidationError or Error(DUPLICATE_VERSION). On return the
  // function is durably stored and retrievable.
  void upload(const P4FunctionDef &def);

  // Throws Error(NOT_FOUND) for unknown (name, version).
  const P4FunctionDef &get(const std::string &name, uint32_t version) const;
  bool contains(const std::string &name, uint32_t version) const;

  // Sorted by (name, version).
  std::vector<IndexEntry> list() const;
  size_t size() const { return defs_.size(); }

  const std::filesystem::path &dir() const { return dir_; }

 private:
  void persist_index() const;

  std::filesystem::path dir_;
  std::map<std::pair<std::string, uint32_t>, P4FunctionDef> defs_;
  std::map<std::pair<std::string, uint32_t>, std::string> hashes_;
};

}  // namespace p4nfv

#endif  // P4NFV_REPO_HPP_
