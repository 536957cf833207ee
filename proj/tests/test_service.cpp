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

#include <doctest.h>

#include <httplib.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <thread>

#include "generators.hpp"
#include "schema_check.hpp"
#include "rdgai/apparatus.hpp"
#include "rdgai/service.hpp"
#include "rdgai/transitions.hpp"

using namespace rdgai;
using namespace rdgai::service;
using nlohmann::json;
using rdgai::testing::fixture_path;
using rdgai::testing::golden_path;
using rdgai::testing::TempDir;

namespace {

const rdgai::testing::SchemaChecker& schema() {
  static const rdgai::testing::SchemaChecker checker(
      json::parse(read_file(std::filesystem::path(RDGAI_FIXTURE_DIR) / "../../docs/api-schema.json")));
  return checker;
}

void check_schema(const ApiResponse& r, const std::string& def) {
  auto problems = schema().check(r.body, def);
  for (const auto& p : problems) FAIL_CHECK(def << ": " << p);
}

// Copies a fixture into a scratch directory so writes do not touch it.
std::filesystem::path scratch_copy(const TempDir& dir, const std::string& name) {
  auto target = dir / name;
  std::filesystem::copy_file(fixture_path(name), target);
  return target;
}

std::string post_body(const std::string& unit, const std::string& a, const std::string& p, const std::string& cat) {
  return json{{"unit_id", unit}, {"active", a}, {"passive", p}, {"category_id", cat}}.dump();
}

void check_golden(const json& actual, const std::string& name) {
  auto path = golden_path(name);
  if (std::getenv("RDGAI_UPDATE_GOLDEN")) write_file_atomic(path, actual.dump(2) + "\n");
  CHECK(json::parse(read_file(path)) == actual);
}

}  // namespace

TEST_CASE("summary") {
  TempDir dir;
  AnnotationService svc({scratch_copy(dir, "john8_excerpt.xml"), "editor", std::nullopt});
  ApiResponse r = svc.summary();
  CHECK(r.status == 200);
  CHECK(r.body["categories"].size() == 4);
  CHECK(r.body["unit_count"] == 44);
  CHECK(r.body["total_pair_count"] == 80 + 16);
  CHECK(r.body["classified_pair_count"] == 80);
  check_schema(r, "summary");
  check_schema(svc.units(), "units");
}

TEST_CASE("summary of a document without units") {
  TempDir dir;
  write_file_atomic(dir / "empty.xml",
                    "<TEI><teiHeader><interpGrp type=\"transcriptional\"><interp xml:id=\"A\">a</interp>"
                    "</interpGrp></teiHeader><text><body><p/></body></text></TEI>");
  AnnotationService svc({dir / "empty.xml", "editor", std::nullopt});
  ApiResponse r = svc.summary();
  CHECK(r.body["unit_count"] == 0);
  CHECK(r.body["total_pair_count"] == 0);
  CHECK(r.body["classified_pair_count"] == 0);
}

TEST_CASE("unit detail") {
  TempDir dir;
  AnnotationService svc({scratch_copy(dir, "reciprocal.xml"), "editor", std::nullopt});
  ApiResponse first = svc.unit("u1");
  CHECK(first.status == 200);
  CHECK(first.body["pairs"].size() == 6);
  CHECK_FALSE(first.body.contains("prev_id"));
  CHECK(first.body["next_id"] == "unit-2");
  check_schema(first, "unit");
  check_golden(first.body, "api_unit_u1.json");

  ApiResponse second = svc.unit("unit-2");
  CHECK(second.body["pairs"].size() == 2);
  CHECK(second.body["pairs"][0]["classification"] == "Omission");
  CHECK(second.body["pairs"][0]["responsibility"] == "editor");
  check_golden(second.body, "api_unit_unit-2.json");
  CHECK_FALSE(svc.unit("u3").body.contains("next_id"));

  ApiResponse missing = svc.unit("nope");
  CHECK(missing.status == 404);
  check_schema(missing, "error");
  check_golden(svc.summary().body, "api_summary.json");
}

TEST_CASE("posting classifications") {
  TempDir dir;
  auto path = scratch_copy(dir, "reciprocal.xml");
  AnnotationService svc({path, "reviewer", std::nullopt});

  ApiResponse r = svc.post_classification(post_body("u3", "1", "2", "Substitution"));
  CHECK(r.status == 200);
  CHECK(r.body["reciprocal_written"] == true);
  CHECK(r.body["revision"] == 1);
  check_schema(r, "classification_written");
  CHECK(svc.unit("u3").body["pairs"][1]["classification"] == "Substitution");

  r = svc.post_classification(post_body("u3", "1", "2", "Transposition"));
  CHECK(r.status == 200);
  CHECK(svc.snapshot().find_unit("u3")->relations.size() == 2);

  CHECK(svc.post_classification(post_body("u3", "1", "2", "Typo")).status == 422);
  CHECK(svc.post_classification(post_body("u3", "1", "9", "Substitution")).status == 422);
  CHECK(svc.post_classification("{").status == 400);
  CHECK(svc.post_classification(R"({"unit_id":"u3"})").status == 400);
  CHECK(svc.revision() == 2);

  // Durable: a fresh load sees the write, attributed to the configured user.
  ApparatusDocument reloaded = load_document(path);
  const Classification* rel = reloaded.find_unit("u3")->find_relation("1", "2");
  REQUIRE(rel != nullptr);
  CHECK(rel->category_ids == std::vector<std::string>{"Transposition"});
  CHECK(rel->responsibility == "reviewer");
}

TEST_CASE("machine classifications report their responsibility") {
  TempDir dir;
  auto path = dir / "doc.xml";
  ApparatusDocument doc = load_document(fixture_path("reciprocal.xml"));
  add_relation_in_place(doc, "u3", {"1", "2", {"Substitution"}, std::string("model"), "rdgai"});
  save_document(doc, path);
  AnnotationService svc({path, "editor", std::nullopt});
  CHECK(svc.unit("u3").body["pairs"][0]["responsibility"] == "rdgai");
}

TEST_CASE("deleting classifications") {
  TempDir dir;
  auto path = scratch_copy(dir, "reciprocal.xml");
  AnnotationService svc({path, "editor", std::nullopt});
  ApiResponse r = svc.delete_classification("unit-2", "u2-a", "u2-b");
  CHECK(r.body["removed"] == 1);
  check_schema(r, "classification_removed");
  CHECK(svc.delete_classification("unit-2", "u2-a", "u2-b").body["removed"] == 0);
  CHECK(svc.unit("unit-2").body["pairs"][1].contains("classification"));
  CHECK(load_document(path).find_unit("unit-2")->relations.size() == 1);
}

TEST_CASE("failed persistence is a conflict and changes nothing") {
  TempDir dir;
  AnnotationService svc({scratch_copy(dir, "reciprocal.xml"), "editor", std::nullopt});
  svc.set_persist_function([](const ApparatusDocument&) { throw std::runtime_error("disk full"); });
  ApiResponse r = svc.post_classification(post_body("u3", "1", "2", "Substitution"));
  CHECK(r.status == 409);
  CHECK(svc.revision() == 0);
  CHECK(svc.snapshot().find_unit("u3")->relations.empty());
  CHECK(svc.delete_classification("unit-2", "u2-a", "u2-b").status == 409);
}

TEST_CASE("http routes") {
  TempDir dir;
  auto path = scratch_copy(dir, "reciprocal.xml");
  AnnotationService svc({path, "editor", std::nullopt});
  httplib::Server server;
  svc.mount(server);
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto summary = client.Get("/api/summary");
  REQUIRE(summary);
  CHECK(summary->status == 200);
  CHECK(summary->get_header_value("Content-Type").find("application/json") != std::string::npos);
  CHECK(json::parse(summary->body)["categories"].size() == 4);

  auto unit = client.Get("/api/units/u1");
  REQUIRE(unit);
  CHECK(json::parse(unit->body)["id"] == "u1");
  CHECK(client.Get("/api/units/zzz")->status == 404);

  auto post = client.Post("/api/classifications", post_body("u1", "a", "b", "Addition"), "application/json");
  REQUIRE(post);
  CHECK(post->status == 200);
  CHECK(json::parse(post->body)["reciprocal_written"] == true);
  CHECK(client.Post("/api/classifications", post_body("u1", "a", "b", "Typo"), "application/json")->status == 422);

  auto del = client.Delete("/api/classifications?unit_id=u1&active=a&passive=b");
  REQUIRE(del);
  CHECK(json::parse(del->body)["removed"] == 1);
  CHECK(client.Delete("/api/classifications?unit_id=u1")->status == 400);

  auto root = client.Get("/");
  REQUIRE(root);
  CHECK(root->status == 200);
  CHECK(root->body.find("<html") != std::string::npos);

  server.stop();
  thread.join();
  ApparatusDocument reloaded = load_document(path);
  CHECK(reloaded.find_unit("u1")->find_relation("b", "a")->category_ids == std::vector<std::string>{"Omission"});
  CHECK(reloaded.find_unit("u1")->find_relation("a", "b") == nullptr);
}

TEST_CASE("static directory is served") {
  TempDir dir;
  auto path = scratch_copy(dir, "reciprocal.xml");
  std::filesystem::create_directories(dir / "ui");
  write_file_atomic(dir / "ui" / "index.html", "<html>ui</html>");
  AnnotationService svc({path, "editor", dir / "ui"});
  httplib::Server server;
  svc.mount(server);
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  auto root = client.Get("/");
  REQUIRE(root);
  CHECK(root->body == "<html>ui</html>");
  CHECK(client.Get("/api/summary")->status == 200);
  server.stop();
  thread.join();
}

TEST_CASE("concurrent writers serialize") {
  TempDir dir;
  auto path = scratch_copy(dir, "john8_excerpt.xml");
  AnnotationService svc({path, "editor", std::nullopt});
  std::vector<std::string> units;
  for (const auto& u : svc.snapshot().units) {
    if (u.relations.empty()) units.push_back(u.id);
  }
  REQUIRE(units.size() == 4);
  std::vector<std::thread> threads;
  for (const auto& id : units) {
    threads.emplace_back([&svc, id] {
      ApparatusDocument snap = svc.snapshot();
      const VariationUnit* u = snap.find_unit(id);
      std::string a = u->readings[0].id, b = u->readings[1].id;
      svc.post_classification(post_body(id, a, b, "Orthography"));
      svc.summary();
    });
  }
  for (auto& t : threads) t.join();
  CHECK(svc.revision() == 4);
  CHECK(unclassified_pairs(load_document(path)).size() == 16 - 8);
}
