#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "morphmine/pipeline.hpp"
#include "support/fixtures.hpp"

using namespace morphmine;
using fixtures::u;
using fixtures::vocab_of;

namespace {

const MorphForest& forest_of(const PipelineResult& r, const Vocabulary& v, const std::string& word) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i].word == u(word)) return r.forests[i];
  throw std::runtime_error("word not in vocabulary: " + word);
}

std::vector<text> top_level(const MorphForest& f) {
  std::vector<text> out;
  for (const auto& c : f.root.children) out.push_back(c.str);
  return out;
}

void expect_valid_tree(const MorphNode& n) {
  if (n.leaf()) return;
  text spelled;
  for (const auto& c : n.children) {
    EXPECT_LT(c.str.size(), n.str.size());
    if (c.filler) {
      EXPECT_TRUE(c.leaf());
    }
    spelled += c.str;
    expect_valid_tree(c);
  }
  EXPECT_EQ(spelled, n.str);
}

std::vector<std::string> lines(const std::vector<MorphForest>& forests, bool hierarchical) {
  std::vector<std::string> out;
  for (const auto& f : forests) out.push_back(hierarchical ? format_hierarchical(f) : format_flat(f));
  return out;
}

}  // namespace

TEST(SegmentRecursive, SingleCharacterIsSingleton) {
  const auto f = segment_recursive(u("a"), fixtures::bitemporal_morphemes(), true);
  EXPECT_TRUE(f.root.leaf());
  EXPECT_EQ(f.flat_set(), std::vector<text>{u("a")});
  EXPECT_THROW(segment_recursive(text{}, fixtures::bitemporal_morphemes(), true), contract_error);
}

TEST(SegmentRecursive, NoIntervalsGivesSingleton) {
  const auto f = segment_recursive(u("zzzz"), fixtures::bitemporal_morphemes(), true);
  EXPECT_TRUE(f.root.leaf());
  EXPECT_EQ(f.leaves(), std::vector<text>{u("zzzz")});
}

TEST(SegmentRecursive, RecursesIntoMorphemes) {
  const MorphemeVocab mv({{u("spati"), kPrefix, 3}, {u("temporal"), kRoot | kSuffix, 6},
                          {u("tempor"), kRoot, 4}, {u("al"), kSuffix, 10}});
  const auto f = segment_recursive(u("spatiotemporal"), mv, true);
  EXPECT_EQ(format_hierarchical(f), "spatiotemporal\t((spati) o ((tempor) (al)))");
  EXPECT_EQ(f.leaves(), (std::vector<text>{u("spati"), u("o"), u("tempor"), u("al")}));
  EXPECT_EQ(f.flat_set(),
            (std::vector<text>{u("spatiotemporal"), u("spati"), u("temporal"), u("tempor"), u("al")}));
}

TEST(Pipeline, FamilyFixtureSegmentations) {
  const auto v = vocab_of(fixtures::family_words());
  const auto r = run_pipeline(v, PipelineConfig{});
  EXPECT_EQ(format_flat(forest_of(r, v, "vandalism")), "vandalism\tvandal ism");
  const auto set = forest_of(r, v, "troubleshooting").flat_set();
  for (const char* m : {"troubleshoot", "ing", "trouble", "shoot"})
    EXPECT_NE(std::find(set.begin(), set.end(), u(m)), set.end()) << m;
  EXPECT_EQ(top_level(forest_of(r, v, "troubleshooting")), (std::vector<text>{u("troubleshoot"), u("ing")}));
}

TEST(Pipeline, ForestInvariants) {
  const auto v = fixtures::synthetic_vocab(2000, 12);
  const auto r = run_pipeline(v, PipelineConfig{});
  ASSERT_EQ(r.forests.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& f = r.forests[i];
    EXPECT_EQ(f.word(), v[i].word);
    text joined;
    for (const auto& l : f.leaves()) joined += l;
    EXPECT_EQ(joined, v[i].word);
    expect_valid_tree(f.root);
  }
}

TEST(RefineCounts, BitemporalFlip) {
  const auto v = vocab_of(fixtures::bitemporal_words());
  const auto mv = fixtures::bitemporal_morphemes();
  const auto pass1 = segment_all(v, mv, {true, kDefaultMaxSegmentations});
  EXPECT_EQ(top_level(pass1[0]), (std::vector<text>{u("bit"), u("emporal")}));

  const auto refined = refine_counts(pass1, mv);
  EXPECT_EQ(refined.count(u("bit")), 3u);
  EXPECT_EQ(refined.count(u("emporal")), 1u);
  EXPECT_EQ(refined.count(u("bi")), 4u);
  EXPECT_EQ(refined.count(u("temporal")), 5u);

  const auto pass2 = segment_all(v, refined, {false, kDefaultMaxSegmentations});
  EXPECT_EQ(top_level(pass2[0]), (std::vector<text>{u("bi"), u("temporal")}));
}

TEST(RefineCounts, NeverIncreasesOrAdds) {
  const auto v = fixtures::synthetic_vocab(1500, 5);
  const auto mv = mine_morphemes(v);
  const auto forests = segment_all(v, mv, {true, kDefaultMaxSegmentations});
  for (uint64_t prune : {1u, 2u, 5u}) {
    const auto refined = refine_counts(forests, mv, prune);
    EXPECT_LE(refined.size(), mv.size());
    for (const auto& e : refined.entries()) {
      ASSERT_NE(mv.find(e.morpheme), nullptr);
      EXPECT_LE(e.count, mv.count(e.morpheme));
      EXPECT_GE(e.count, 1u);
      EXPECT_EQ(e.classes, mv.find(e.morpheme)->classes);
    }
  }
}

TEST(RefineCounts, PrunesUnusedMorphemes) {
  const MorphemeVocab mv({{u("walk"), kRoot, 4}, {u("ing"), kSuffix, 9}, {u("zzzz"), kRoot, 7}});
  const auto v = vocab_of({"walking", "walked"});
  const auto refined = refine_counts(segment_all(v, mv, {true, kDefaultMaxSegmentations}), mv);
  EXPECT_EQ(refined.find(u("zzzz")), nullptr);
  EXPECT_EQ(refined.count(u("walk")), 2u);
  EXPECT_EQ(refined.count(u("ing")), 1u);
}

TEST(RefineCounts, UsedEverywhereKeepsEntries) {
  const MorphemeVocab mv({{u("walk"), kRoot, 2}, {u("ing"), kSuffix, 2}});
  const auto v = vocab_of({"walking", "walkwalking"});
  const auto refined = refine_counts(segment_all(v, mv, {true, kDefaultMaxSegmentations}), mv);
  ASSERT_EQ(refined.size(), mv.size());
  for (const auto& e : mv.entries()) EXPECT_EQ(refined.count(e.morpheme), e.count);
}

TEST(Pipeline, RoundsZeroIsTheInitialPass) {
  const auto v = vocab_of(fixtures::bitemporal_words());
  const auto mv = fixtures::bitemporal_morphemes();
  PipelineConfig cfg;
  cfg.rounds = 0;
  const auto r = run_pipeline(v, mv, cfg);
  EXPECT_EQ(r.forests, segment_all(v, mv, {true, kDefaultMaxSegmentations}));
  EXPECT_EQ(top_level(r.forests[0]), (std::vector<text>{u("bit"), u("emporal")}));
  cfg.rounds = 1;
  EXPECT_EQ(top_level(run_pipeline(v, mv, cfg).forests[0]), (std::vector<text>{u("bi"), u("temporal")}));
}

TEST(Pipeline, ReachesFixedPoint) {
  auto words = fixtures::family_words();
  for (const char* w : {"bitemporal", "temporal", "temporally", "atemporal", "spatial", "spatially",
                        "realism", "realist", "readings", "painted", "painter", "jumped"})
    words.push_back(w);
  const auto v = vocab_of(words);
  ASSERT_GE(v.size(), 50u);
  const auto mv = mine_morphemes(v);
  PipelineConfig cfg;
  cfg.final_training_mode = true;
  std::vector<std::string> prev;
  bool converged = false;
  for (unsigned rounds = 1; rounds <= 20 && !converged; ++rounds) {
    cfg.rounds = rounds;
    auto cur = lines(run_pipeline(v, mv, cfg).forests, true);
    if (cur == prev) {
      cfg.rounds = rounds + 1;
      EXPECT_EQ(lines(run_pipeline(v, mv, cfg).forests, true), cur);
      converged = true;
    }
    prev = std::move(cur);
  }
  EXPECT_TRUE(converged);
}

TEST(Pipeline, Deterministic) {
  const auto v = fixtures::synthetic_vocab(3000, 77);
  PipelineConfig cfg;
  const auto a = run_pipeline(v, cfg);
  const auto b = run_pipeline(v, cfg);
  EXPECT_EQ(lines(a.forests, true), lines(b.forests, true));
  cfg.threads = 4;
  const auto c = run_pipeline(v, cfg);
  EXPECT_EQ(lines(a.forests, true), lines(c.forests, true));
}

TEST(HierarchicalFormat, ParseThenReprint) {
  const auto v = fixtures::synthetic_vocab(1000, 3);
  const auto r = run_pipeline(v, PipelineConfig{});
  for (const auto& f : r.forests) {
    const auto line = format_hierarchical(f);
    const auto back = parse_hierarchical(line);
    EXPECT_EQ(format_hierarchical(back), line);
    EXPECT_EQ(back.leaves(), f.leaves());
    EXPECT_EQ(back.flat_set(), f.flat_set());
  }
}

TEST(HierarchicalFormat, EscapesBrackets) {
  MorphForest f;
  f.root = {u("a(b)\\c"), false, {{u("a("), false, {}}, {u("b"), true, {}}, {u(")\\c"), false, {}}}};
  const auto line = format_hierarchical(f);
  EXPECT_EQ(line, "a(b)\\c\t((a\\() b (\\)\\\\c))");
  EXPECT_EQ(parse_hierarchical(line), f);
}

TEST(HierarchicalFormat, RejectsMalformed) {
  for (const char* bad : {"word", "ab\t(a", "ab\t(a b", "ab\t(ab) x", "ab\t(ac)", "ab\t()", "ab\t(a\\"})
    EXPECT_THROW(parse_hierarchical(bad), parse_error) << bad;
}
