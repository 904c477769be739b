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

#include "ltp/numerics/archive.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>

#include "ltp/error.hpp"

namespace ltp::num {
inline namespace LTP_PRECISION_NS {
namespace {

constexpr const char* kMagic = "LTPARCHIVE 1";

void check_name(const std::string& name) {
  if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos) {
    throw ValidationError("archive entry names must be non-empty without whitespace: '" +
                          name + "'");
  }
}

void put_f32(std::string& out, float f) {
  const auto u = std::bit_cast<std::uint32_t>(f);
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((u >> (8 * b)) & 0xffu));
}

float get_f32(const unsigned char* p) {
  std::uint32_t u = 0;
  for (int b = 0; b < 4; ++b) u |= static_cast<std::uint32_t>(p[b]) << (8 * b);
  return std::bit_cast<float>(u);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

Shape parse_dims(const std::string& s) {
  Shape shape;
  if (s == "scalar") return shape;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t next = s.find('x', pos);
    shape.push_back(std::stoi(s.substr(pos, next - pos)));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return shape;
}

std::string format_dims(const Shape& shape) {
  if (shape.empty()) return "scalar";
  std::string out;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out.push_back('x');
    out += std::to_string(shape[i]);
  }
  return out;
}

}  // namespace

const Tensor* Archive::tensor(const std::string& name) const {
  for (const auto& [n, t] : tensors)
    if (n == name) return &t;
  return nullptr;
}

const std::string* Archive::blob(const std::string& name) const {
  auto it = blobs.find(name);
  return it == blobs.end() ? nullptr : &it->second;
}

void write_archive(const std::filesystem::path& path, const Archive& archive) {
  std::ostringstream manifest;
  std::string payload;
  manifest << kMagic << '\n';
  for (const auto& [name, t] : archive.tensors) {
    check_name(name);
    manifest << "tensor " << name << ' ' << format_dims(t.shape()) << ' ' << payload.size()
             << ' ' << t.size() << '\n';
    for (Real v : t.data()) put_f32(payload, static_cast<float>(v));
  }
  for (const auto& [name, text] : archive.blobs) {
    check_name(name);
    manifest << "blob " << name << ' ' << payload.size() << ' ' << text.size() << '\n';
    payload += text;
  }
  manifest << "end\n";

  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    const std::string head = manifest.str();
    out.write(head.data(), static_cast<std::streamsize>(head.size()));
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_manifest(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const std::size_t end = bytes.find("\nend\n");
  if (bytes.rfind(kMagic, 0) != 0 || end == std::string::npos) {
    throw IoError(path.string() + " is not an ltp archive");
  }
  return bytes.substr(0, end + 5);
}

Archive read_archive(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const std::string manifest = read_manifest(path);
  const auto* payload = reinterpret_cast<const unsigned char*>(bytes.data()) + manifest.size();
  const std::size_t payload_size = bytes.size() - manifest.size();

  Archive archive;
  std::istringstream lines(manifest);
  std::string line;
  std::getline(lines, line);  // magic
  while (std::getline(lines, line) && line != "end") {
    std::istringstream row(line);
    std::string kind, name;
    row >> kind >> name;
    if (kind == "tensor") {
      std::string dims;
      std::size_t offset = 0, count = 0;
      row >> dims >> offset >> count;
      if (!row || offset + 4 * count > payload_size) {
        throw IoError("corrupt tensor entry '" + name + "' in " + path.string());
      }
      Shape shape = parse_dims(dims);
      std::vector<Real> data(count);
      for (std::size_t i = 0; i < count; ++i) data[i] = Real(get_f32(payload + offset + 4 * i));
      archive.tensors.emplace_back(name, Tensor(std::move(shape), std::move(data)));
    } else if (kind == "blob") {
      std::size_t offset = 0, count = 0;
      row >> offset >> count;
      if (!row || offset + count > payload_size) {
        throw IoError("corrupt blob entry '" + name + "' in " + path.string());
      }
      archive.blobs[name] =
          std::string(reinterpret_cast<const char*>(payload) + offset, count);
    } else {
      throw IoError("unknown manifest line '" + line + "' in " + path.string());
    }
  }
  return archive;
}

}  // namespace LTP_PRECISION_NS
}  // namespace ltp::num
