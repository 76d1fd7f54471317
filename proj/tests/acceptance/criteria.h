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

#ifndef GETUP_TESTS_ACCEPTANCE_CRITERIA_H_
#define GETUP_TESTS_ACCEPTANCE_CRITERIA_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace getup::acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct NightlyOptions {
  std::filesystem::path out_dir;
  // Overrides the 2e6 weak and 1e6 slow step budgets; only for smoke runs of
  // the harness itself.
  int64_t weak_steps = 2000000;
  int64_t slow_steps = 1000000;
  int seeds = 5;
};

struct Criterion {
  int id = 0;
  std::string name;
  bool nightly = false;
  std::function<Outcome()> run;
};

std::vector<Criterion> fast_criteria(const std::filesystem::path& out_dir);
std::vector<Criterion> nightly_criteria(const NightlyOptions& options);

// Collects the first failing check and a summary of measured values.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failure_.empty()) failure_ = what;
  }
  template <typename T>
  void note(const std::string& key, const T& value) {
    std::ostringstream s;
    s << key << "=" << value;
    notes_.push_back(s.str());
  }
  Outcome outcome() const {
    std::string detail;
    for (const std::string& n : notes_) detail += (detail.empty() ? "" : " ") + n;
    if (!failure_.empty()) detail = failure_ + (detail.empty() ? "" : " | " + detail);
    return {failure_.empty(), detail};
  }

 private:
  std::string failure_;
  std::vector<std::string> notes_;
};

}  // namespace getup::acceptance

#endif  // GETUP_TESTS_ACCEPTANCE_CRITERIA_H_
