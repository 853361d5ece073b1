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

#include "p4nfv/util.hpp"

#include <fcntl.h>
#include <openssl/evp.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "p4nfv/errors.hpp"

namespace p4nfv {

const char *errc_name(Errc c) {
  switch (c) {
    case Errc::MALFORMED_DOCUMENT: return "MALFORMED_DOCUMENT";
    case Errc::MISSING_FIELD: return "MISSING_FIELD";
    case Errc::BAD_TYPE: return "BAD_TYPE";
    case Errc::UNKNOWN_FIELD: return "UNKNOWN_FIELD";
    case Errc::DUPLICATE_VERSION: return "DUPLICATE_VERSION";
    case Errc::VALIDATION_FAILED: return "VALIDATION_FAILED";
    case Errc::NOT_FOUND: return "NOT_FOUND";
    case Errc::FUNCTION_NOT_FOUND: return "FUNCTION_NOT_FOUND";
    case Errc::VLAN_COLLISION: return "VLAN_COLLISION";
    case Errc::COMPILE_IN_PROGRESS: return "COMPILE_IN_PROGRESS";
    case Errc::UNKNOWN_TABLE: return "UNKNOWN_TABLE";
    case Errc::BAD_KEY: return "BAD_KEY";
    case Errc::ACTION_NOT_PERMITTED: return "ACTION_NOT_PERMITTED";
    case Errc::TABLE_FULL: return "TABLE_FULL";
    case Errc::DUPLICATE_NS: return "DUPLICATE_NS";
    case Errc::VLAN_IN_USE: return "VLAN_IN_USE";
    case Errc::INVALID: return "INVALID";
    case Errc::OWNERSHIP: return "OWNERSHIP";
    case Errc::BAD_DESCRIPTOR: return "BAD_DESCRIPTOR";
    case Errc::STORE_CORRUPT: return "STORE_CORRUPT";
    case Errc::SCENARIO_PARSE: return "SCENARIO_PARSE";
  }
  return "UNKNOWN";
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0x0f]);
  }
  return out;
}

void atomic_write_file(const std::filesystem::path &path,
                       std::string_view content) {
  std::filesystem::create_directories(path.parent_path().empty()
                                          ? "."
                                          : path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0)
    throw std::system_error(errno, std::generic_category(), tmp.string());
  size_t off = 0;
  while (off < content.size()) {
    ssize_t n = ::write(fd, content.data() + off, content.size() - off);
    if (n < 0) {
      int e = errno;
      ::close(fd);
      ::unlink(tmp.c_str());
      throw std::system_error(e, std::generic_category(), tmp.string());
    }
    off += static_cast<size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
  if (::rename(tmp.c_str(), path.c_str()) != 0) {
    int e = errno;
    ::unlink(tmp.c_str());
    throw std::system_error(e, std::generic_category(), path.string());
  }
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::NOT_FOUND, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

uint64_t parse_mac(const std::string &text) {
  unsigned int b[6];
  char extra;
  if (std::sscanf(text.c_str(), "%x:%x:%x:%x:%x:%x%c", &b[0], &b[1], &b[2],
                  &b[3], &b[4], &b[5], &extra) != 6)
    throw Error(Errc::BAD_TYPE, "bad mac '" + text + "'");
  uint64_t mac = 0;
  for (int i = 0; i < 6; ++i) {
    if (b[i] > 0xff) throw Error(Errc::BAD_TYPE, "bad mac '" + text + "'");
    mac = (mac << 8) | b[i];
  }
  return mac;
}

std::string format_mac(uint64_t mac) {
  char buf[18];
  std::snprintf(buf, sizeof(buf), "%02x:%02x:%02x:%02x:%02x:%02x",
                static_cast<unsigned>((mac >> 40) & 0xff),
                static_cast<unsigned>((mac >> 32) & 0xff),
                static_cast<unsigned>((mac >> 24) & 0xff),
                static_cast<unsigned>((mac >> 16) & 0xff),
                static_cast<unsigned>((mac >> 8) & 0xff),
                static_cast<unsigned>(mac & 0xff));
  return buf;
}

uint64_t parse_value_token(const std::string &token) {
  if (token.find(':') != std::string::npos) return parse_mac(token);
  if (token.find('.') != std::string::npos) {
    unsigned int b[4];
    char extra;
    if (std::sscanf(token.c_str(), "%u.%u.%u.%u%c", &b[0], &b[1], &b[2], &b[3],
                    &extra) != 4 ||
        b[0] > 255 || b[1] > 255 || b[2] > 255 || b[3] > 255)
      throw Error(Errc::BAD_TYPE, "bad value '" + token + "'");
    return (static_cast<uint64_t>(b[0]) << 24) | (b[1] << 16) | (b[2] << 8) |
           b[3];
  }
  try {
    size_t pos = 0;
    uint64_t v = std::stoull(token, &pos, 0);
    if (pos != token.size())
      throw Error(Errc::BAD_TYPE, "bad value '" + token + "'");
    return v;
  } catch (const Error &) {
    throw;
  } catch (const std::exception &) {
    throw Error(Errc::BAD_TYPE, "bad value '" + token + "'");
  }
}

}  // namespace p4nfv
