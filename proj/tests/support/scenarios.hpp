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

#ifndef RDGAI_TESTS_SUPPORT_SCENARIOS_HPP_
#define RDGAI_TESTS_SUPPORT_SCENARIOS_HPP_

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "mock_llm.hpp"
#include "rdgai/apparatus.hpp"
#include "rdgai/evaluation.hpp"

namespace rdgai::testing {

// Mock that reproduces every manual classification except `errors` held-out
// pairs, spread evenly over the ground truth of the given split.
inline MockScript scripted_errors(const ApparatusDocument& doc, double proportion, std::uint64_t seed,
                                  std::size_t errors) {
  MockScript script;
  script.answers = answer_key(doc);
  eval::EvalSplit split = eval::split_annotations(doc, proportion, seed);
  std::size_t n = split.ground_truth.size();
  for (std::size_t e = 0; e < errors && e < n; ++e) {
    const auto& a = split.ground_truth[e * n / errors];
    std::size_t at = 0;
    while (doc.categories[at].id != a.category_id) ++at;
    script.answers[MockScript::key(a.pair.unit_id, a.pair.active_id, a.pair.passive_id)] =
        doc.categories[(at + 1) % doc.categories.size()].id;
  }
  return script;
}

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs `rdgai` with the given shell-quoted arguments; `env` is prepended.
inline CommandResult run_cli(const std::string& args, const std::filesystem::path& scratch,
                             const std::string& env = "") {
  auto out_path = scratch / "cli.stdout", err_path = scratch / "cli.stderr";
  std::string cmd = "env -u RDGAI_API_KEY -u RDGAI_MODEL -u RDGAI_API_BASE " + env + " '" +
                    std::string(RDGAI_CLI_PATH) + "' " + args + " >'" + out_path.string() + "' 2>'" +
                    err_path.string() + "'";
  int status = std::system(cmd.c_str());
  CommandResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out_path);
  r.err = read_file(err_path);
  std::filesystem::remove(out_path);
  std::filesystem::remove(err_path);
  return r;
}

inline std::string quote(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace rdgai::testing

#endif  // RDGAI_TESTS_SUPPORT_SCENARIOS_HPP_
