// Copyright 2026 The Rolecast Authors.
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

// Per-role distributions of a single feature with pairwise Welch t-tests.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rolecast/hybrid.hpp"

namespace rolecast {

enum class AnalysisFeature { FpTweet, Brightness };
std::string_view analysis_feature_name(AnalysisFeature f);
AnalysisFeature parse_analysis_feature(std::string_view s);

inline constexpr std::size_t kHistogramBins = 30;

// Linear interpolation between order statistics (the common "type 7" rule).
double quantile(std::vector<double> values, double q);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
};

// Needs at least two values per sample.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

struct RoleSummary {
  Role role = Role::Male;
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::vector<std::size_t> histogram;
};

struct PairwiseTest {
  Role a = Role::Male;
  Role b = Role::Female;
  WelchResult result;
};

struct DistributionReport {
  AnalysisFeature feature = AnalysisFeature::FpTweet;
  std::string window;
  // Users without a value (no usable image for brightness).
  std::size_t missing = 0;
  // Shared histogram range over all roles.
  double lo = 0.0;
  double hi = 1.0;
  std::vector<RoleSummary> roles;
  std::vector<PairwiseTest> tests;
};

// Roles with at least one labeled user are summarized; tests cover every
// pair of roles with at least two users each.
DistributionReport analyze_feature(std::span<const PreparedUser> users, const Resources& res,
                                   AnalysisFeature feature, TweetWindow window = {});

nlohmann::json distribution_to_json(const DistributionReport& report);
std::string render_distribution(const DistributionReport& report, std::string_view format);

}  // namespace rolecast
