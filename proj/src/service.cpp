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

#include "rdgai/service.hpp"

#include <httplib.h>

#include "rdgai/errors.hpp"
#include "rdgai/transitions.hpp"

namespace rdgai::service {
namespace {

using nlohmann::json;

json category_json(const Category& c) {
  json j = {{"id", c.id}, {"name", c.name}, {"description", c.description}};
  j["inverse_id"] = c.inverse_id ? json(*c.inverse_id) : json(nullptr);
  return j;
}

json relation_json(const Classification& c) {
  json j = {{"active", c.active_id},
            {"passive", c.passive_id},
            {"categories", c.category_ids},
            {"responsibility", c.responsibility}};
  if (c.description) j["description"] = *c.description;
  return j;
}

std::size_t classified_count(const VariationUnit& unit) {
  std::size_t n = 0;
  for (const auto& pair : enumerate_pairs(unit)) {
    if (unit.find_relation(pair.active_id, pair.passive_id)) ++n;
  }
  return n;
}

std::size_t pair_count(const VariationUnit& unit) {
  std::size_t n = unit.readings.size();
  return n > 1 ? n * (n - 1) : 0;
}

void send(httplib::Response& res, const ApiResponse& api) {
  res.status = api.status;
  res.set_content(api.body.dump(-1, ' ', false, json::error_handler_t::replace), "application/json");
}

}  // namespace

AnnotationService::AnnotationService(ServiceOptions options)
    : options_(std::move(options)), doc_(load_document(options_.document_path)) {
  persist_ = [path = options_.document_path](const ApparatusDocument& doc) { save_document(doc, path); };
}

void AnnotationService::set_persist_function(std::function<void(const ApparatusDocument&)> persist) {
  std::unique_lock lock(mutex_);
  persist_ = std::move(persist);
}

std::uint64_t AnnotationService::revision() const {
  std::shared_lock lock(mutex_);
  return revision_;
}

ApparatusDocument AnnotationService::snapshot() const {
  std::shared_lock lock(mutex_);
  return doc_;
}

ApiResponse AnnotationService::error(int status, const std::string& message) const {
  return {status, json{{"error", message}, {"revision", revision_.load()}}};
}

ApiResponse AnnotationService::summary() const {
  std::shared_lock lock(mutex_);
  std::size_t classified = 0, total = 0;
  for (const auto& unit : doc_.units) {
    classified += classified_count(unit);
    total += pair_count(unit);
  }
  json categories = json::array();
  for (const auto& c : doc_.categories) categories.push_back(category_json(c));
  return {200, json{{"unit_count", doc_.units.size()},
                    {"classified_pair_count", classified},
                    {"total_pair_count", total},
                    {"categories", categories},
                    {"responsibility", options_.responsibility},
                    {"revision", revision_.load()}}};
}

ApiResponse AnnotationService::units() const {
  std::shared_lock lock(mutex_);
  json list = json::array();
  for (const auto& unit : doc_.units) {
    list.push_back({{"id", unit.id},
                    {"classified_pair_count", classified_count(unit)},
                    {"total_pair_count", pair_count(unit)}});
  }
  return {200, json{{"units", list}, {"revision", revision_.load()}}};
}

ApiResponse AnnotationService::unit(const std::string& unit_id) const {
  std::shared_lock lock(mutex_);
  std::size_t index = doc_.units.size();
  for (std::size_t i = 0; i < doc_.units.size(); ++i) {
    if (doc_.units[i].id == unit_id) index = i;
  }
  if (index == doc_.units.size()) return error(404, "unknown unit '" + unit_id + "'");
  const VariationUnit& u = doc_.units[index];
  json readings = json::array();
  for (const auto& r : u.readings) {
    readings.push_back({{"id", r.id}, {"text", r.text}, {"witnesses", r.witnesses}});
  }
  json pairs = json::array();
  for (const auto& p : enumerate_pairs(u)) {
    json j = {{"active", p.active_id}, {"passive", p.passive_id}};
    if (const Classification* c = u.find_relation(p.active_id, p.passive_id)) {
      j["classification"] = c->category_ids.front();
      j["categories"] = c->category_ids;
      j["responsibility"] = c->responsibility;
      if (c->description) j["description"] = *c->description;
    }
    pairs.push_back(std::move(j));
  }
  json body = {{"id", u.id}, {"context", u.context}, {"readings", readings}, {"pairs", pairs},
               {"revision", revision_.load()}};
  if (index > 0) body["prev_id"] = doc_.units[index - 1].id;
  if (index + 1 < doc_.units.size()) body["next_id"] = doc_.units[index + 1].id;
  return {200, body};
}

ApiResponse AnnotationService::post_classification(const std::string& request_body) {
  json request = json::parse(request_body, nullptr, false);
  if (request.is_discarded() || !request.is_object()) return error(400, "request body must be a JSON object");
  for (const char* field : {"unit_id", "active", "passive", "category_id"}) {
    if (!request.contains(field) || !request[field].is_string()) {
      std::shared_lock lock(mutex_);
      return error(400, std::string("missing string field '") + field + "'");
    }
  }
  std::optional<std::string> description;
  if (request.contains("description") && request["description"].is_string() &&
      !request["description"].get<std::string>().empty()) {
    description = request["description"].get<std::string>();
  }

  std::unique_lock lock(mutex_);
  ApparatusDocument next = doc_;
  ClassifyOutcome outcome;
  try {
    TransitionPair pair = make_pair(next, request["unit_id"].get<std::string>(),
                                    request["active"].get<std::string>(),
                                    request["passive"].get<std::string>());
    outcome = classify_pair_in_place(next, pair, {request["category_id"].get<std::string>()},
                                     description, options_.responsibility);
  } catch (const ValidationError& e) {
    return error(422, e.what());
  }
  try {
    persist_(next);
  } catch (const std::exception& e) {
    return error(409, std::string("could not save the document: ") + e.what());
  }
  doc_ = std::move(next);
  ++revision_;
  json written = json::array();
  for (const auto& c : outcome.written) written.push_back(relation_json(c));
  return {200, json{{"written", written},
                    {"reciprocal_written", outcome.reciprocal_written},
                    {"revision", revision_.load()}}};
}

ApiResponse AnnotationService::delete_classification(const std::string& unit_id,
                                                     const std::string& active,
                                                     const std::string& passive) {
  std::unique_lock lock(mutex_);
  ApparatusDocument next = doc_;
  std::size_t removed = remove_relation(next, unit_id, active, passive);
  if (removed > 0) {
    try {
      persist_(next);
    } catch (const std::exception& e) {
      return error(409, std::string("could not save the document: ") + e.what());
    }
    doc_ = std::move(next);
    ++revision_;
  }
  return {200, json{{"removed", removed}, {"revision", revision_.load()}}};
}

void AnnotationService::mount(httplib::Server& server) {
  server.Get("/api/summary", [this](const httplib::Request&, httplib::Response& res) {
    send(res, summary());
  });
  server.Get("/api/units", [this](const httplib::Request&, httplib::Response& res) {
    send(res, units());
  });
  server.Get(R"(/api/units/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, unit(req.matches[1]));
  });
  server.Post("/api/classifications", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, post_classification(req.body));
  });
  server.Delete("/api/classifications", [this](const httplib::Request& req, httplib::Response& res) {
    for (const char* p : {"unit_id", "active", "passive"}) {
      if (!req.has_param(p)) {
        send(res, {400, json{{"error", std::string("missing query parameter '") + p + "'"}}});
        return;
      }
    }
    send(res, delete_classification(req.get_param_value("unit_id"), req.get_param_value("active"),
                                    req.get_param_value("passive")));
  });
  bool mounted = options_.static_dir && server.set_mount_point("/", options_.static_dir->string());
  if (!mounted) {
    server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(placeholder_page(), "text/html; charset=utf-8");
    });
  }
}

std::string placeholder_page() {
  return "<!DOCTYPE html>\n<html lang=\"en\"><head><meta charset=\"utf-8\"><title>rdgai</title></head>\n"
         "<body><h1>rdgai</h1><p>The classification interface is not installed. Start the server "
         "with <code>--static DIR</code> pointing at the built UI, or use the JSON API under "
         "<code>/api/</code>.</p></body></html>\n";
}

}  // namespace rdgai::service
