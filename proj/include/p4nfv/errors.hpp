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

#ifndef P4NFV_ERRORS_HPP_
#define P4NFV_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace p4nfv {

// Stable error codes. These strings appear verbatim in CLI output and in
// scenario EXPECT assertions, so renaming one is a breaking change.
enum class Errc {
  MALFORMED_DOCUMENT,
  MISSING_FIELD,
  BAD_TYPE,
  UNKNOWN_FIELD,
  DUPLICATE_VERSION,
  VALIDATION_FAILED,
  NOT_FOUND,
  FUNCTION_NOT_FOUND,
  VLAN_COLLISION,
  COMPILE_IN_PROGRESS,
  UNKNOWN_TABLE,
  BAD_KEY,
  ACTION_NOT_PERMITTED,
  TABLE_FULL,
  DUPLICATE_NS,
  VLAN_IN_USE,
  INVALID,
  OWNERSHIP,
  BAD_DESCRIPTOR,
  STORE_CORRUPT,
  SCENARIO_PARSE,
};

const char *errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string &detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  Errc code() const { return code_; }
  const std::string &detail() const { return detail_; }
  std::string code_name() const { return errc_name(code_); }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace p4nfv

#endif  // P4NFV_ERRORS_HPP_
