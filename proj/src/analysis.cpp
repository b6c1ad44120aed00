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

#include "rolecast/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

namespace rolecast {

using nlohmann::json;

std::string_view analysis_feature_name(AnalysisFeature f) {
  return f == AnalysisFeature::FpTweet ? "fp_tweet" : "brightness";
}

AnalysisFeature parse_analysis_feature(std::string_view s) {
  if (s == "fp_tweet") return AnalysisFeature::FpTweet;
  if (s == "brightness") return AnalysisFeature::Brightness;
  throw ConfigError("unknown feature '" + std::string(s) + "' (expected fp_tweet|brightness)");
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of no values");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sample variance (n - 1 denominator).
double variance_of(std::span<const double> v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

std::string fmt(double v, int digits = 3) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string fmt_p(double p) {
  char buf[48];
  if (p != 0.0 && p < 1e-3)
    std::snprintf(buf, sizeof buf, "%.2e", p);
  else
    std::snprintf(buf, sizeof buf, "%.4f", p);
  return buf;
}

}  // namespace

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("t-test needs two values per sample");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  const double va = variance_of(a, ma) / na;
  const double vb = variance_of(b, mb) / nb;
  const double se2 = va + vb;
  WelchResult r;
  if (se2 == 0.0) {
    r.df = na + nb - 2.0;
    if (ma == mb) return r;
    r.t = ma > mb ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    r.p = 0.0;
    return r;
  }
  r.t = (ma - mb) / std::sqrt(se2);
  r.df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  const boost::math::students_t dist(r.df);
  r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
  r.p = std::min(r.p, 1.0);
  return r;
}

DistributionReport analyze_feature(std::span<const PreparedUser> users, const Resources& res,
                                   AnalysisFeature feature, TweetWindow window) {
  DistributionReport report;
  report.feature = feature;
  report.window = window.name();
  std::vector<std::vector<double>> values(3);
  for (const auto& u : users) {
    if (!u.label) throw DataError("user '" + u.user_id + "' has no label");
    std::optional<double> v;
    if (feature == AnalysisFeature::FpTweet)
      v = list_match_score(std::span<const TokenSet>(u.tweets), res.first_person, window);
    else
      v = u.brightness;
    if (!v) {
      ++report.missing;
      continue;
    }
    values[static_cast<std::size_t>(class_index(*u.label))].push_back(*v);
  }

  bool any = false;
  for (const auto& v : values) {
    for (double x : v) {
      if (!any) report.lo = report.hi = x;
      report.lo = std::min(report.lo, x);
      report.hi = std::max(report.hi, x);
      any = true;
    }
  }
  if (!any) throw DataError("no user has a value for " + std::string(analysis_feature_name(feature)));
  const double width = report.hi > report.lo ? report.hi - report.lo : 1.0;

  for (Role role : roles_of(ClassMode::Tri)) {
    const auto& v = values[static_cast<std::size_t>(class_index(role))];
    if (v.empty()) continue;
    RoleSummary s;
    s.role = role;
    s.n = v.size();
    s.mean = mean_of(v);
    s.sd = v.size() > 1 ? std::sqrt(variance_of(v, s.mean)) : 0.0;
    s.min = *std::min_element(v.begin(), v.end());
    s.max = *std::max_element(v.begin(), v.end());
    s.q1 = quantile(v, 0.25);
    s.median = quantile(v, 0.5);
    s.q3 = quantile(v, 0.75);
    s.histogram.assign(kHistogramBins, 0);
    for (double x : v) {
      auto bin = static_cast<std::size_t>((x - report.lo) / width * kHistogramBins);
      ++s.histogram[std::min(bin, kHistogramBins - 1)];
    }
    report.roles.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < report.roles.size(); ++i)
    for (std::size_t j = i + 1; j < report.roles.size(); ++j) {
      const Role a = report.roles[i].role;
      const Role b = report.roles[j].role;
      const auto& va = values[static_cast<std::size_t>(class_index(a))];
      const auto& vb = values[static_cast<std::size_t>(class_index(b))];
      if (va.size() < 2 || vb.size() < 2) continue;
      report.tests.push_back({a, b, welch_t_test(va, vb)});
    }
  return report;
}

json distribution_to_json(const DistributionReport& report) {
  json roles = json::array();
  for (const auto& s : report.roles)
    roles.push_back({{"role", role_name(s.role)},
                     {"n", s.n},
                     {"mean", s.mean},
                     {"sd", s.sd},
                     {"min", s.min},
                     {"q1", s.q1},
                     {"median", s.median},
                     {"q3", s.q3},
                     {"max", s.max},
                     {"histogram", s.histogram}});
  json tests = json::array();
  for (const auto& t : report.tests)
    tests.push_back({{"a", role_name(t.a)},
                     {"b", role_name(t.b)},
                     {"t", std::isfinite(t.result.t) ? json(t.result.t) : json(nullptr)},
                     {"df", t.result.df},
                     {"p", t.result.p},
                     {"significant", t.result.p < 0.05}});
  return {{"schema", "rolecast-distribution"},
          {"version", 1},
          {"feature", analysis_feature_name(report.feature)},
          {"window", report.window},
          {"missing", report.missing},
          {"histogram_range", {report.lo, report.hi}},
          {"bins", kHistogramBins},
          {"roles", std::move(roles)},
          {"tests", std::move(tests)}};
}

std::string render_distribution(const DistributionReport& report, std::string_view format) {
  if (format == "json") return distribution_to_json(report).dump(2) + "\n";
  if (format != "markdown")
    throw ConfigError("unknown report format '" + std::string(format) + "' (expected json|markdown)");
  std::ostringstream out;
  out << "## " << analysis_feature_name(report.feature) << " by role\n\n";
  out << "| Role | n | mean | sd | min | q1 | median | q3 | max |\n"
      << "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& s : report.roles)
    out << "| " << role_title(s.role) << " | " << s.n << " | " << fmt(s.mean) << " | " << fmt(s.sd)
        << " | " << fmt(s.min) << " | " << fmt(s.q1) << " | " << fmt(s.median) << " | "
        << fmt(s.q3) << " | " << fmt(s.max) << " |\n";
  out << "\nWelch t-tests (two-sided):\n\n| Pair | t | df | p | p < 0.05 |\n|---|---|---|---|---|\n";
  for (const auto& t : report.tests)
    out << "| " << role_title(t.a) << " vs " << role_title(t.b) << " | " << fmt(t.result.t)
        << " | " << fmt(t.result.df, 1) << " | " << fmt_p(t.result.p) << " | "
        << (t.result.p < 0.05 ? "yes" : "no") << " |\n";
  out << "\nHistogram, " << kHistogramBins << " bins over [" << fmt(report.lo) << ", "
      << fmt(report.hi) << "]:\n\n";
  for (const auto& s : report.roles) {
    out << "- " << role_title(s.role) << ":";
    for (auto c : s.histogram) out << " " << c;
    out << "\n";
  }
  if (report.missing) out << "\nUsers without a value: " << report.missing << "\n";
  return out.str();
}

}  // namespace rolecast
