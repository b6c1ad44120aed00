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
#include <cstdlib>

#include "doctest.h"
#include "rolecast/resources.hpp"
#include "rolecast/synthetic.hpp"
#include "rolecast/util.hpp"
#include "support.hpp"

using namespace rolecast;
using rolecast::testing::TempDir;

TEST_CASE("shipped resources load") {
  const auto res = load_resources(ROLECAST_RESOURCE_DIR);
  const NameFrequency* john = res.names.find("john");
  REQUIRE(john != nullptr);
  CHECK(john->female == 445);
  CHECK(john->male == 256166);
  CHECK(res.names.find("dallis")->female == 406);
  CHECK(res.names.find("fatima")->female == 1);
  CHECK(res.stoplist.size() >= 200);
  CHECK(res.first_person.contains("i"));
  CHECK(res.brand.contains("official"));
  CHECK(res.lexicon.rank("the") == 1);
  CHECK(dp_word_split("bigcitylove", res.lexicon) == std::vector<std::string>{"big", "city", "love"});
  const auto fps = res.fingerprints();
  CHECK(fps.count("names") == 1);
  CHECK(fps.at("words") == "lexicon");
}

TEST_CASE("resource round trip") {
  TempDir tmp;
  const auto res = synthetic_resources();
  save_resources(res, tmp.path());
  const auto back = load_resources(tmp.path());
  CHECK(back.fingerprints() == res.fingerprints());
  std::filesystem::remove(tmp / "stoplist.txt");
  CHECK_THROWS_AS(load_resources(tmp.path()), ConfigError);
  CHECK_THROWS_AS(load_resources(tmp / "absent"), ConfigError);
}

TEST_CASE("resource directory precedence") {
  ::unsetenv(kResourceEnvVar);
  CHECK(resolve_resource_dir(std::nullopt) == std::filesystem::path(ROLECAST_RESOURCE_DIR));
  ::setenv(kResourceEnvVar, "/from/env", 1);
  CHECK(resolve_resource_dir(std::nullopt) == std::filesystem::path("/from/env"));
  CHECK(resolve_resource_dir(std::string("/from/flag")) == std::filesystem::path("/from/flag"));
  ::unsetenv(kResourceEnvVar);
}
