/*
 * Copyright (c) 2026 The ltp Authors
 *
 * Licensed under the Apache License, Version 2.0;
 * You may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an 'AS IS' BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ltp/numerics/tensor.hpp"

namespace ltp::num {
inline namespace LTP_PRECISION_NS {

/// Named tensors plus named text blobs, stored as one file:
///
///   LTPARCHIVE 1
///   tensor <name> <dims joined by 'x'> <byte offset> <element count>
///   blob <name> <byte offset> <byte count>
///   end
///   <payload>
///
/// Offsets are relative to the first payload byte. Tensors are written as
/// little-endian IEEE-754 binary32 regardless of host order or Real, so a
/// float build round-trips bit-exactly.
struct Archive {
  std::vector<std::pair<std::string, Tensor>> tensors;
  std::map<std::string, std::string> blobs;

  const Tensor* tensor(const std::string& name) const;
  const std::string* blob(const std::string& name) const;
};

void write_archive(const std::filesystem::path& path, const Archive& archive);
Archive read_archive(const std::filesystem::path& path);

/// The manifest section only, as text (for inspection tools).
std::string read_manifest(const std::filesystem::path& path);

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::num
