#pragma once

#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "morphmine/morphmine.hpp"

namespace fixtures {

using oracle_intervals_t = std::vector<std::pair<std::size_t, std::size_t>>;

using morphmine::text;

inline text u(const std::string& s) { return morphmine::from_utf8(s); }
inline std::string s8(const text& t) { return morphmine::to_utf8(t); }

inline morphmine::Vocabulary vocab_of(const std::vector<std::string>& words) {
  morphmine::Vocabulary v;
  for (const auto& w : words) v.add(u(w), 1);
  return v;
}

// Entropy profile along "spatiotemporal" peaks after "spa" and "spati"
// (forward) and before "al" and "temporal" (reversed).
inline const std::vector<std::string>& spatiotemporal_words() {
  static const std::vector<std::string> w = {
      "apple",    "banana",    "cherry",     "dog",    "spa",    "spam",   "spade",
      "span",     "spark",     "spatial",    "spatially", "spatium", "spatiotemporal", "temporal",
      "atemporal", "bitemporal", "mortal",   "portal", "total",  "journal", "rural",
      "plural"};
  return w;
}

// Hand-built morpheme vocabulary whose first-pass scores prefer
// bit + emporal (5*6 = 30 over 4*6 = 24). Usage recounts give bit 3,
// emporal 1, temporal 5 and bi 4 (used by six words once "bit" itself
// splits into bi + t, capped at its previous count), so the second pass
// prefers bi + temporal (20 over 3). "temporal" splits as tempor + al, so
// "emporal" is only used inside "bitemporal".
inline morphmine::MorphemeVocab bitemporal_morphemes() {
  using namespace morphmine;
  return MorphemeVocab({
      {u("bit"), kPrefix, 5},      {u("bi"), kPrefix, 4},      {u("emporal"), kRoot, 6},
      {u("temporal"), kRoot, 6},   {u("a"), kPrefix, 4},       {u("non"), kPrefix, 3},
      {u("inter"), kPrefix, 3},    {u("spatio"), kPrefix, 2},  {u("lateral"), kRoot, 2},
      {u("linear"), kRoot, 2},     {u("weekly"), kRoot, 2},    {u("ly"), kSuffix, 9},
      {u("s"), kSuffix, 30},       {u("wise"), kSuffix, 4},    {u("tempor"), kRoot, 6},
      {u("al"), kSuffix, 10},
  });
}

inline const std::vector<std::string>& bitemporal_words() {
  static const std::vector<std::string> w = {
      "bitemporal", "atemporal", "nontemporal", "spatiotemporal", "temporally", "intertemporal",
      "bits",       "bitwise",   "bilateral",   "bilinear",       "biweekly"};
  return w;
}

// Small English-like vocabulary with shared roots and affixes. Mining and
// segmenting it gives vandal + ism and troubleshoot + ing.
inline const std::vector<std::string>& family_words() {
  static const std::vector<std::string> w = {
      "vandal",       "vandals",        "vandalism",     "vandalize",       "vandalized", "racism",
      "racist",       "tourism",        "tourist",       "optimism",        "optimist",   "heroism",
      "trouble",      "troubles",       "troubled",      "troubling",       "troubleshoot",
      "troubleshooter", "troubleshoots", "troubleshooting", "shoot",        "shoots",     "shooting",
      "shooter",      "overshoot",      "offshoot",      "walking",         "talking",    "jumping",
      "reading",      "eating",         "painting",      "walk",            "talk",       "jump",
      "read",         "eat",            "paint"};
  return w;
}

// Morphology-like random vocabulary: optional prefix + root + up to two
// suffixes, with a share of unstructured noise words.
inline std::vector<text> synthetic_words(std::size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto rand_str = [&](std::size_t lo, std::size_t hi) {
    std::uniform_int_distribution<std::size_t> len(lo, hi);
    std::uniform_int_distribution<int> ch(0, 25);
    std::string s(len(rng), 'a');
    for (auto& c : s) c = static_cast<char>('a' + ch(rng));
    return s;
  };
  std::vector<std::string> prefixes, roots, suffixes;
  for (int i = 0; i < 40; ++i) prefixes.push_back(rand_str(2, 4));
  for (std::size_t i = 0; i < std::max<std::size_t>(n / 6, 50); ++i) roots.push_back(rand_str(4, 8));
  for (int i = 0; i < 40; ++i) suffixes.push_back(rand_str(1, 4));

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_p(0, prefixes.size() - 1), pick_r(0, roots.size() - 1),
      pick_s(0, suffixes.size() - 1);
  std::set<std::string> seen;
  std::vector<text> out;
  while (out.size() < n) {
    std::string w;
    if (coin(rng) < 0.1) {
      w = rand_str(3, 12);
    } else {
      if (coin(rng) < 0.4) w += prefixes[pick_p(rng)];
      w += roots[pick_r(rng)];
      if (coin(rng) < 0.7) w += suffixes[pick_s(rng)];
      if (coin(rng) < 0.2) w += suffixes[pick_s(rng)];
    }
    if (seen.insert(w).second) out.push_back(u(w));
  }
  return out;
}

inline morphmine::Vocabulary synthetic_vocab(std::size_t n, uint64_t seed) {
  morphmine::Vocabulary v;
  for (const auto& w : synthetic_words(n, seed)) v.add(w, 1);
  return v;
}

// Random covering instance: a word of length <= max_len and up to
// max_intervals proper intervals with class placement respected.
struct CoverInstance {
  text word;
  std::vector<morphmine::Interval> intervals;
};

inline CoverInstance random_cover_instance(std::mt19937_64& rng, std::size_t max_len = 12,
                                           std::size_t max_intervals = 12) {
  using morphmine::IntervalClass;
  CoverInstance inst;
  const std::size_t n = std::uniform_int_distribution<std::size_t>(2, max_len)(rng);
  std::uniform_int_distribution<int> ch(0, 3);
  for (std::size_t i = 0; i < n; ++i) inst.word.push_back(static_cast<char32_t>(U'a' + ch(rng)));
  const std::size_t a = std::uniform_int_distribution<std::size_t>(0, max_intervals)(rng);
  std::uniform_int_distribution<std::size_t> pos(0, n - 1);
  while (inst.intervals.size() < a) {
    const std::size_t b = pos(rng);
    const std::size_t e = b + 1 + std::uniform_int_distribution<std::size_t>(0, std::min<std::size_t>(n - b - 1, 5))(rng);
    if (b == 0 && e == n) continue;
    auto cls = IntervalClass::root;
    if (b == 0 && rng() % 2) cls = IntervalClass::prefix;
    else if (e == n && rng() % 2) cls = IntervalClass::suffix;
    inst.intervals.push_back({b, e, cls});
  }
  return inst;
}

inline oracle_intervals_t to_pairs(const std::vector<morphmine::Interval>& v) {
  oracle_intervals_t out;
  for (const auto& iv : v) out.emplace_back(iv.begin, iv.end);
  return out;
}

}  // namespace fixtures
