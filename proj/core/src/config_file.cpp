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

#include "config_file.hpp"

#include <fstream>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml++/toml.hpp>

#include "ltp/error.hpp"

namespace ltp::detail {

nlohmann::json load_config_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto ext = path.extension().string();
  try {
    if (ext == ".toml") {
      const toml::table tbl = toml::parse(text, path.string());
      std::ostringstream js;
      js << toml::json_formatter{tbl};
      return nlohmann::json::parse(js.str());
    }
    if (ext == ".json") return nlohmann::json::parse(text);
  } catch (const toml::parse_error& e) {
    throw ValidationError("config " + path.string() + ": " + std::string(e.description()));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }
  throw ValidationError("config " + path.string() + ": expected a .toml or .json file");
}

}  // namespace ltp::detail
