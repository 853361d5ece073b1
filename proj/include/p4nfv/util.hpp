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

#ifndef P4NFV_UTIL_HPP_
#define P4NFV_UTIL_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace p4nfv {

// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view data);

// Write-to-temp-then-rename with an fsync before the rename. The file is
// either fully replaced or untouched.
void atomic_write_file(const std::filesystem::path &path,
                       std::string_view content);

std::string read_file(const std::filesystem::path &path);

// "aa:bb:cc:dd:ee:ff" -> 48-bit value. Throws Error(BAD_TYPE).
uint64_t parse_mac(const std::string &text);
std::string format_mac(uint64_t mac);

// Accepts decimal, 0x-hex, dotted IPv4 and colon-separated MAC tokens.
uint64_t parse_value_token(const std::string &token);

}  // namespace p4nfv

#endif  // P4NFV_UTIL_HPP_
