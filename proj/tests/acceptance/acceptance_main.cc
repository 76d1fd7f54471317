// Copyright 2026 The Getup Authors
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

// Acceptance suite: one PASS/FAIL line per criterion. The default tier runs
// the property and short-run criteria; --nightly adds the multi-hour learning
// runs (8 to 11).

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <set>

#include "CLI11.hpp"
#include "criteria.h"

int main(int argc, char** argv) {
  using getup::acceptance::Criterion;
  using getup::acceptance::Outcome;
  CLI::App app{"getup acceptance suite"};
  bool nightly = false, only_nightly = false;
  std::vector<int> only;
  std::filesystem::path out_dir = std::filesystem::temp_directory_path() / "getup_acceptance";
  getup::acceptance::NightlyOptions nightly_options;
  app.add_flag("--nightly", nightly, "also run the learning criteria 8 to 11");
  app.add_flag("--only-nightly", only_nightly, "run only the learning criteria");
  app.add_option("--only", only, "run only these criterion ids");
  app.add_option("--out", out_dir, "scratch and report directory");
  app.add_option("--nightly-weak-steps", nightly_options.weak_steps,
                 "weak-stage step budget per seed (harness smoke runs only)");
  app.add_option("--nightly-slow-steps", nightly_options.slow_steps,
                 "slow-stage step budget (harness smoke runs only)");
  app.add_option("--nightly-seeds", nightly_options.seeds, "seeds per arm (harness smoke runs only)");
  CLI11_PARSE(app, argc, argv);
  nightly = nightly || only_nightly;
  std::filesystem::create_directories(out_dir);
  nightly_options.out_dir = out_dir;

  std::vector<Criterion> criteria;
  if (!only_nightly) criteria = getup::acceptance::fast_criteria(out_dir);
  const std::vector<Criterion> learning = getup::acceptance::nightly_criteria(nightly_options);
  criteria.insert(criteria.end(), learning.begin(), learning.end());
  std::sort(criteria.begin(), criteria.end(),
            [](const Criterion& a, const Criterion& b) { return a.id < b.id; });
  const std::set<int> selected(only.begin(), only.end());

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    if (c.nightly && !nightly) {
      // Not attained in this tier; the line stays red but does not fail the run.
      std::printf("FAIL [%2d] %s: not run (nightly tier, pass --nightly)\n", c.id, c.name.c_str());
      std::fflush(stdout);
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s [%2d] %s (%.1fs): %s\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                seconds, outcome.detail.c_str());
    std::fflush(stdout);
    failures += !outcome.pass;
  }
  return failures == 0 ? 0 : 1;
}
