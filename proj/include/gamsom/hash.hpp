// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAMSOM_HASH_HPP
#define GAMSOM_HASH_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace gamsom {

/// FNV-1a 64-bit over a byte string. Used for provenance chaining, not
/// for anything adversarial.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hash_hex(std::string_view bytes);

/// Hash of a file's raw bytes. Throws IoError if unreadable.
std::string hash_file(const std::filesystem::path& path);

}  // namespace gamsom

#endif  // GAMSOM_HASH_HPP
