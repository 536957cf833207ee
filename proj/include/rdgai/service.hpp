// Copyright 2026 The Rdgai Authors
//
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

#ifndef RDGAI_SERVICE_HPP_
#define RDGAI_SERVICE_HPP_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "rdgai/apparatus.hpp"

namespace httplib {
class Server;
}

namespace rdgai::service {

struct ServiceOptions {
  std::filesystem::path document_path;
  std::string responsibility = "editor";
  // Directory holding the built UI; a placeholder page is served without it.
  std::optional<std::filesystem::path> static_dir;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// One document per process. Reads run concurrently; writes are serialized
// and acknowledged only after the file on disk has been replaced.
class AnnotationService {
 public:
  // Loads the document; throws on parse or validation failure.
  explicit AnnotationService(ServiceOptions options);

  ApiResponse summary() const;
  ApiResponse units() const;
  ApiResponse unit(const std::string& unit_id) const;
  ApiResponse post_classification(const std::string& request_body);
  ApiResponse delete_classification(const std::string& unit_id, const std::string& active,
                                    const std::string& passive);

  std::uint64_t revision() const;
  ApparatusDocument snapshot() const;

  // Registers the JSON routes and the static UI on `server`.
  void mount(httplib::Server& server);

  // Test hook replacing the on-disk writer.
  void set_persist_function(std::function<void(const ApparatusDocument&)> persist);

 private:
  ApiResponse error(int status, const std::string& message) const;

  ServiceOptions options_;
  mutable std::shared_mutex mutex_;
  ApparatusDocument doc_;
  std::atomic<std::uint64_t> revision_{0};
  std::function<void(const ApparatusDocument&)> persist_;
};

// Page served at "/" when no UI build is available.
std::string placeholder_page();

}  // namespace rdgai::service

#endif  // RDGAI_SERVICE_HPP_
