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

#include "rolecast/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string_view>

#include "rolecast/util.hpp"

namespace rolecast {

namespace {

using Words = std::vector<std::string_view>;

const Words kMaleNames = {"james",   "john",    "robert", "michael", "william", "david",
                          "richard", "joseph",  "thomas", "charles", "daniel",  "matthew",
                          "anthony", "mark",    "steven", "paul",    "andrew",  "joshua",
                          "kevin",   "brian",   "george", "edward",  "ryan",    "jacob"};
const Words kFemaleNames = {"mary",   "patricia", "jennifer", "linda",    "elizabeth", "barbara",
                            "susan",  "jessica",  "sarah",    "karen",    "nancy",     "lisa",
                            "betty",  "margaret", "sandra",   "ashley",   "emily",     "donna",
                            "michelle", "carol",  "amanda",   "melissa",  "deborah",   "laura"};
const Words kSurnames = {"smith", "jones", "brown", "taylor", "wilson", "evans",
                         "walker", "wright", "hall", "green", "baker", "hill",
                         "clark", "lewis", "young", "king"};
const Words kBrandStems = {"acme", "zenith", "nova", "apex", "orbit", "summit", "vertex", "pioneer",
                           "horizon", "crest", "lumen", "quartz"};
const Words kBrandKinds = {"coffee", "labs", "studio", "foods", "media", "motors", "sports",
                           "tech", "outfitters", "bakery"};
const Words kNouns = {"music", "travel", "books", "art", "movies", "photography", "nature",
                      "science", "running", "gaming", "design", "history", "cooking", "dogs",
                      "cats", "gardening", "poetry", "chess", "hiking", "theatre"};

const Words kFirstPerson = {"i", "am", "my", "me", "mine", "i'm", "myself", "im"};
const Words kBrandWords = {"official", "we", "our", "us", "team", "company", "account"};
const Words kInterjections = {"wow", "omg", "lol", "yay", "oops", "ugh", "haha", "hooray",
                              "yikes", "whoa"};
const Words kEmotions = {"happy", "sad", "love", "angry", "excited", "upset", "proud",
                         "scared", "lonely", "thrilled"};
const Words kFillers = {"the", "a", "to", "and", "of", "in", "is", "it", "for", "on",
                        "with", "this", "that", "at", "be", "so", "just", "was", "all", "out",
                        "up", "get", "go", "now", "what", "about", "from", "by", "an", "or",
                        "but", "not", "are", "have", "has", "do", "can", "will", "there", "here"};
const Words kGeneric = {"weather", "monday", "weekend", "today", "tonight", "morning", "lunch",
                        "dinner", "traffic", "news", "city", "friends", "family", "holiday",
                        "summer", "winter", "rain", "sunshine", "park", "beach", "phone",
                        "internet", "video", "photo", "party", "week", "night", "home", "work",
                        "school"};
const std::array<Words, 3> kTopics = {
    Words{"football", "beer", "grill", "garage", "truck", "fishing", "poker", "barbecue", "golf",
          "hunting", "wrestling", "boxing", "engine", "mechanic", "whiskey", "camping", "hockey",
          "baseball", "drill", "lumber", "motorcycle", "workout", "steak", "racing", "tools",
          "carburetor", "quarterback", "touchdown", "brewery", "bourbon"},
    Words{"makeup", "nails", "yoga", "brunch", "skincare", "dress", "heels", "lipstick", "salon",
          "manicure", "handbag", "bridal", "pilates", "latte", "cupcakes", "mascara", "jewelry",
          "boutique", "perfume", "sundress", "eyeliner", "knitting", "blush", "scrapbook",
          "bouquet", "smoothie", "pedicure", "wedding", "tulips", "cardigan"},
    Words{"sale", "discount", "shipping", "order", "customers", "launch", "product", "offer",
          "promo", "deals", "checkout", "warranty", "catalog", "subscribe", "webinar", "coupon",
          "release", "service", "support", "announce", "partners", "available", "pricing",
          "store", "newsletter", "orders", "giveaway", "retail", "wholesale", "inventory"}};

// Per-tweet probability of using a first-person, interjection and emotion word.
constexpr std::array<std::array<double, 3>, 3> kTweetRates = {{
    {0.40, 0.20, 0.20},  // male
    {0.60, 0.35, 0.45},  // female
    {0.10, 0.05, 0.10},  // brand
}};
// Log-scale means of followers and friends.
constexpr std::array<std::array<double, 2>, 3> kCounts = {{{5.0, 5.5}, {5.8, 6.0}, {8.0, 4.5}}};
constexpr std::array<double, 3> kBrightness = {0.45, 0.60, 0.80};
constexpr std::array<std::array<double, 3>, 3> kTint = {{{0.55, 0.70, 1.0},
                                                         {1.0, 0.60, 0.75},
                                                         {1.0, 0.95, 0.90}}};

std::string_view pick(const Words& w, Rng& rng) { return w[rng.below(w.size())]; }

std::unordered_set<std::string> to_set(std::initializer_list<const Words*> lists) {
  std::unordered_set<std::string> out;
  for (const auto* l : lists)
    for (auto w : *l) out.emplace(w);
  return out;
}

std::string capitalize(std::string_view s) {
  std::string out(s);
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

std::uint8_t clamp_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

void SyntheticSpec::validate() const {
  if (!(separability >= 0.0 && separability <= 1.0))
    throw ConfigError("separability must lie in [0, 1]");
  if (min_tweets == 0 || min_tweets > max_tweets)
    throw ConfigError("tweet count range must satisfy 1 <= min <= max");
  if (image_size == 0) throw ConfigError("image size must be positive");
}

Resources synthetic_resources() {
  Resources res;
  // Fixed frequencies so the dictionary does not depend on any seed.
  for (std::size_t i = 0; i < kMaleNames.size(); ++i) {
    res.names.add(std::string(kMaleNames[i]), Role::Male, 2000 + 300 * i);
    res.names.add(std::string(kMaleNames[i]), Role::Female, 1 + i % 7);
  }
  for (std::size_t i = 0; i < kFemaleNames.size(); ++i) {
    res.names.add(std::string(kFemaleNames[i]), Role::Female, 2000 + 300 * i);
    res.names.add(std::string(kFemaleNames[i]), Role::Male, 1 + i % 5);
  }
  std::vector<std::string> ranked;
  for (const Words* l : {&kFillers, &kFirstPerson, &kBrandWords, &kGeneric, &kNouns, &kSurnames,
                         &kMaleNames, &kFemaleNames, &kBrandStems, &kBrandKinds, &kInterjections,
                         &kEmotions, &kTopics[0], &kTopics[1], &kTopics[2]})
    for (auto w : *l) ranked.emplace_back(w);
  res.lexicon = Lexicon(ranked);
  res.first_person = WordList(WordListKind::FirstPerson, to_set({&kFirstPerson}));
  res.brand = WordList(WordListKind::BrandWord, to_set({&kBrandWords}));
  res.interjections = WordList(WordListKind::Interjection, to_set({&kInterjections}));
  res.emotions = WordList(WordListKind::Emotion, to_set({&kEmotions}));
  // The list words are stopped so the word-list signal stays out of AF.
  res.stoplist = WordList(WordListKind::Stop, to_set({&kFillers, &kFirstPerson, &kBrandWords,
                                                      &kInterjections, &kEmotions}));
  return res;
}

SyntheticData generate_synthetic_corpus(const SyntheticSpec& spec, std::size_t n_users,
                                        std::uint64_t seed) {
  spec.validate();
  const std::vector<Role> roles = roles_of(spec.mode);
  if (n_users < roles.size()) throw ConfigError("need at least one user per role");
  Rng rng(seed);

  std::vector<Role> labels(n_users);
  for (std::size_t i = 0; i < n_users; ++i) labels[i] = roles[i % roles.size()];
  rng.shuffle(labels);

  auto planted = [&](FeatureGroup g) { return spec.planted.count(g) != 0; };
  const bool image_planted = planted(FeatureGroup::BF4) || planted(FeatureGroup::IMG);

  SyntheticData data;
  std::vector<UserRecord> users;
  users.reserve(n_users);
  char id_buf[32];
  for (std::size_t i = 0; i < n_users; ++i) {
    const Role truth = labels[i];
    auto source = [&](bool signal) -> std::size_t {
      const double u = rng.uniform();
      const std::size_t random_role = static_cast<std::size_t>(roles[rng.below(roles.size())]);
      return signal && u < spec.separability ? static_cast<std::size_t>(truth) : random_role;
    };
    const std::size_t r_name = source(planted(FeatureGroup::BF1));
    const std::size_t r_desc = source(planted(FeatureGroup::BF2));
    const std::size_t r_count = source(planted(FeatureGroup::BF3));
    const std::size_t r_image = source(image_planted);
    const std::size_t r_tweet = source(planted(FeatureGroup::BF5));
    const std::size_t r_topic = source(planted(FeatureGroup::AF1));

    UserRecord u;
    std::snprintf(id_buf, sizeof id_buf, "u%05zu", i + 1);
    u.user_id = id_buf;
    u.label = truth;

    // BF1
    if (r_name == 2) {
      const std::string stem(pick(kBrandStems, rng));
      const std::string kind(pick(kBrandKinds, rng));
      u.display_name = capitalize(stem) + " " + capitalize(kind);
      u.screen_name = rng.uniform() < 0.5 ? stem + kind : stem + "_official";
    } else {
      const std::string first(pick(r_name == 0 ? kMaleNames : kFemaleNames, rng));
      const std::string last(pick(kSurnames, rng));
      u.display_name = capitalize(first) + " " + capitalize(last);
      u.screen_name = rng.uniform() < 0.5 ? first + last : first + std::to_string(10 + rng.below(90));
    }

    // BF2
    {
      std::vector<std::string> d;
      if (r_desc == 2) {
        d = {"official", "account", "of", "the", std::string(pick(kBrandStems, rng)), "team"};
        const std::size_t extra = 4 + rng.below(5);
        for (std::size_t j = 0; j < extra; ++j) d.emplace_back(pick(kNouns, rng));
      } else {
        d = {"i", "am", "into"};
        const std::size_t extra = r_desc == 0 ? 2 + rng.below(4) : 7 + rng.below(5);
        for (std::size_t j = 0; j < extra; ++j) d.emplace_back(pick(kNouns, rng));
      }
      if (rng.uniform() < 0.3) d.push_back("#" + std::string(pick(kNouns, rng)));
      u.description = join(d);
    }

    // BF3
    u.followers = std::llround(std::exp(rng.normal(kCounts[r_count][0], 0.6)));
    u.friends = std::llround(std::exp(rng.normal(kCounts[r_count][1], 0.6)));

    // BF4 and the image channel
    {
      const double v = std::clamp(rng.normal(kBrightness[r_image], 0.04), 0.05, 1.0);
      Raster img;
      img.width = img.height = spec.image_size;
      img.rgb.resize(img.pixels() * 3);
      for (std::size_t p = 0; p < img.pixels(); ++p)
        for (std::size_t c = 0; c < 3; ++c)
          img.rgb[3 * p + c] = clamp_byte(255.0 * v * kTint[r_image][c] + rng.normal(0.0, 6.0));
      u.image_path = "images/" + u.user_id + ".png";
      data.images.emplace(*u.image_path, std::move(img));
    }

    // BF5 and AF1
    {
      const auto& rates = kTweetRates[r_tweet];
      // Skewed toward the head of the topic list, so a role's top words are
      // shared by most of its users.
      const Words& topics = kTopics[r_topic];
      std::vector<std::string_view> favorites;
      for (std::size_t j = 0; j < 8; ++j) {
        const double u = rng.uniform();
        favorites.push_back(topics[static_cast<std::size_t>(u * u * static_cast<double>(topics.size()))]);
      }
      const std::size_t n_tweets =
          spec.min_tweets + rng.below(spec.max_tweets - spec.min_tweets + 1);
      for (std::size_t t = 0; t < n_tweets; ++t) {
        std::vector<std::string> words;
        const std::size_t fill = 3 + rng.below(4);
        for (std::size_t j = 0; j < fill; ++j) words.emplace_back(pick(kFillers, rng));
        if (rng.uniform() < rates[0]) words.emplace_back(pick(kFirstPerson, rng));
        if (rng.uniform() < rates[1]) words.emplace_back(pick(kInterjections, rng));
        if (rng.uniform() < rates[2]) words.emplace_back(pick(kEmotions, rng));
        if (rng.uniform() < 0.8) {
          const std::string topic(favorites[rng.below(favorites.size())]);
          words.push_back(rng.uniform() < 0.2 ? "#" + topic : topic);
        }
        if (rng.uniform() < 0.3) words.emplace_back(pick(kGeneric, rng));
        rng.shuffle(words);
        if (rng.uniform() < 0.1) words.push_back("@" + std::string(pick(kSurnames, rng)));
        if (rng.uniform() < 0.1) words.push_back("https://t.co/x" + std::to_string(rng.below(1000)));
        u.tweets.push_back(join(words));
      }
    }
    users.push_back(std::move(u));
  }
  data.corpus = UserCorpus(std::move(users));
  data.resources = synthetic_resources();
  return data;
}

void write_synthetic(const SyntheticData& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "images");
  save_dataset(data.corpus, dir / "users.jsonl");
  for (const auto& [path, img] : data.images) write_png(dir / path, img);
  save_resources(data.resources, dir / "resources");
}

}  // namespace rolecast
