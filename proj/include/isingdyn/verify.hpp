/*
 * Copyright (C) 2026 The isingdyn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ISINGDYN_VERIFY_HPP
#define ISINGDYN_VERIFY_HPP

#include <string>
#include <vector>

#include "isingdyn/graph.hpp"

namespace isingdyn {

struct CheckResult {
  std::string check;  // stationarity, reversibility, ...
  std::string kernel; // dynamics name, "" when not kernel specific
  std::vector<Vertex> a;
  std::string measure = "residual"; // what `value` holds: residual, margin, gap, steps
  double value = 0.0;
  double tol = 0.0;
  bool pass = true;
  bool skipped = false;
  std::string note;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_pass = true; // skipped checks do not count
};

struct VerifyOptions {
  double eps = 0.25;
  /// Glauber kernel loses half of one spin-flip move from all-plus.
  bool inject_fault = false;
};

/// Runs every exact check that fits the size limits on (g, beta); checks
/// that do not fit are reported as skipped.
VerifyReport run_verification(const Graph &g, double beta, const VerifyOptions &options = {});

/// `graph` labels every entry.
std::string to_json(const VerifyReport &report, const std::string &graph, double beta);

} // namespace isingdyn

#endif // ISINGDYN_VERIFY_HPP
