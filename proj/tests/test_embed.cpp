#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "morphmine/embed.hpp"
#include "support/fixtures.hpp"
#include "support/gradcheck.hpp"
#include "support/shared_roots.hpp"

using namespace morphmine;
using fixtures::u;

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

std::vector<Sentence> tiny_corpus() {
  return {{u("the"), u("cat"), u("walked")}, {u("the"), u("dog"), u("walking")}, {u("a"), u("cat"), u("walks")}};
}

std::vector<text> no_bag(const text&) { return {}; }

}  // namespace

TEST(Score, ZeroVectors) {
  EmbeddingModel m(4);
  const auto w = m.add_word(u("walked"), 1, {u("walk"), u("ed")});
  EXPECT_EQ(m.score(w, w), 0.0);
}

TEST(Score, UnitVectors) {
  EmbeddingModel m(3);
  const auto w = m.add_word(u("x"), 1, {});
  m.morph_vector(*m.token_id(u("x")))[0] = 1.0;
  m.context_vector(w)[0] = 1.0;
  EXPECT_EQ(m.score(w, w), 1.0);
}

TEST(Score, SumOfDotProducts) {
  std::mt19937_64 rng(1);
  auto m = fixtures::random_model(rng, 16);
  const uint32_t w = *m.word_id(u("w0"));  // bag: w0, re, truncat, ing
  const uint32_t c = *m.word_id(u("w3"));
  double expected = 0.0;
  for (const char* t : {"w0", "re", "truncat", "ing"}) expected += dot(m.morph_vector(*m.token_id(u(t))), m.context_vector(c));
  EXPECT_NEAR(m.score(w, c), expected, 1e-12);
}

TEST(Score, LinearInEachMorpheme) {
  EmbeddingModel m(5);
  const auto both = m.add_word(u("ab"), 1, {u("a"), u("b")});
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (uint32_t t = 0; t < m.token_count(); ++t)
    for (double& x : m.morph_vector(t)) x = g(rng);
  for (double& x : m.context_vector(both)) x = g(rng);
  // The word token is part of the bag; remove its contribution by zeroing it.
  for (double& x : m.morph_vector(*m.token_id(u("ab")))) x = 0.0;
  const auto v = m.context_vector(both);
  const double sa = dot(m.morph_vector(*m.token_id(u("a"))), v);
  const double sb = dot(m.morph_vector(*m.token_id(u("b"))), v);
  EXPECT_EQ(m.score(both, both), (0.0 + sa) + sb);
}

TEST(Model, BagAlwaysHoldsWordToken) {
  EmbeddingModel m(2);
  const auto w = m.add_word(u("walked"), 3, {u("walk"), u("ed"), u("walk")});
  EXPECT_EQ(m.bag(w).size(), 3u);
  EXPECT_NE(std::find(m.bag(w).begin(), m.bag(w).end(), *m.token_id(u("walked"))), m.bag(w).end());
  EXPECT_THROW(EmbeddingModel(0), contract_error);
}

TEST(Loss, ZeroParametersGiveLogTwoPerTarget) {
  EmbeddingModel m(8);
  for (int i = 0; i < 8; ++i) m.add_word(u("w" + std::to_string(i)), 1, {});
  for (std::size_t k = 0; k <= 6; ++k) {
    std::vector<uint32_t> negs;
    for (std::size_t i = 0; i < k; ++i) negs.push_back(static_cast<uint32_t>(i + 1));
    EXPECT_EQ(loss_and_gradients(m, 0, 7, negs).loss, static_cast<double>(1 + k) * std::log(2.0));
  }
}

TEST(Loss, SoftplusAsymptotics) {
  EXPECT_LT(logistic_loss(30.0), 1e-12);
  EXPECT_GT(logistic_loss(30.0), 0.0);
  double prev = logistic_loss(0.0);
  for (double x = 1.0; x <= 40.0; x += 1.0) {
    EXPECT_LT(logistic_loss(x), prev);
    prev = logistic_loss(x);
  }
  EXPECT_NEAR(logistic_loss(-1000.0), 1000.0, 1e-9);
  EXPECT_TRUE(std::isfinite(logistic_loss(-1e300)));
  EXPECT_EQ(logistic_loss(0.0), std::log(2.0));
}

TEST(Loss, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<uint32_t> word(0, 5);
  for (int point = 0; point < 100; ++point) {
    auto m = fixtures::random_model(rng, 10);
    std::vector<uint32_t> negs(5);
    for (auto& n : negs) n = word(rng);
    EXPECT_LT(fixtures::gradient_check(m, word(rng), word(rng), negs), 1e-4);
  }
}

TEST(Loss, SgdStepMovesAgainstGradient) {
  std::mt19937_64 rng(5);
  auto m = fixtures::random_model(rng, 6);
  const std::vector<uint32_t> negs{2, 4, 4};
  const auto lg = loss_and_gradients(m, 0, 1, negs);
  auto stepped = m;
  std::vector<double> scratch;
  const double lr = 0.05;
  const double loss = sgd_step(stepped, 0, 1, negs, lr, scratch);
  EXPECT_NEAR(loss, lg.loss, 1e-12);
  for (const auto& [t, g] : lg.grad.morph)
    for (std::size_t k = 0; k < g.size(); ++k)
      EXPECT_NEAR(stepped.morph_vector(t)[k], m.morph_vector(t)[k] - lr * g[k], 1e-12);
  for (const auto& [w, g] : lg.grad.context)
    for (std::size_t k = 0; k < g.size(); ++k)
      EXPECT_NEAR(stepped.context_vector(w)[k], m.context_vector(w)[k] - lr * g[k], 1e-12);
}

TEST(Loss, FixedBatchDecreasesOverFirstSteps) {
  int passed = 0;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    const auto c = fixtures::shared_root_corpus(seed, 200);
    const auto forests = fixtures::forests_for(c);
    EmbeddingHyper hp;
    hp.dim = 20;
    hp.seed = seed;
    auto m = init_model(c.sentences, [&](const text& w) { return forests.at(w).flat_set(); }, hp);
    // Fixed mini-batch of (center, context, negatives) triples.
    std::mt19937_64 rng(seed);
    const NegativeSampler sampler(m);
    struct Triple {
      uint32_t center, context;
      std::vector<uint32_t> negs;
    };
    std::vector<Triple> batch;
    for (std::size_t i = 0; i < 32; ++i) {
      const auto& s = c.sentences[i];
      Triple t{*m.word_id(s[0]), *m.word_id(s[1]), {}};
      while (t.negs.size() < 5)
        if (const auto n = sampler(rng); n != t.context) t.negs.push_back(n);
      batch.push_back(std::move(t));
    }
    auto batch_loss = [&] {
      double l = 0.0;
      for (const auto& t : batch) l += loss_and_gradients(m, t.center, t.context, t.negs).loss;
      return l;
    };
    bool ok = true;
    double prev = batch_loss();
    std::vector<double> scratch;
    for (int step = 0; step < 10; ++step) {
      for (const auto& t : batch) sgd_step(m, t.center, t.context, t.negs, 0.01, scratch);
      const double cur = batch_loss();
      if (cur > prev) ok = false;
      prev = cur;
    }
    passed += ok;
  }
  EXPECT_GE(passed, 18);
}

TEST(Train, ZeroLearningRateKeepsInitialization) {
  const std::vector<Sentence> corpus{{u("a"), u("b"), u("c"), u("a")}};
  EmbeddingHyper hp;
  hp.dim = 8;
  hp.epochs = 1;
  hp.learning_rate = 0.0;
  const auto init = init_model(corpus, no_bag, hp);
  const auto trained = train(corpus, no_bag, hp);
  EXPECT_EQ(trained.morph_data(), init.morph_data());
  EXPECT_EQ(trained.context_data(), init.context_data());
}

TEST(Train, InitializationRanges) {
  EmbeddingHyper hp;
  hp.dim = 16;
  const auto m = init_model(tiny_corpus(), no_bag, hp);
  const double bound = 1.0 / 32.0;
  for (double x : m.morph_data()) {
    EXPECT_GE(x, -bound);
    EXPECT_LE(x, bound);
  }
  for (double x : m.context_data()) EXPECT_EQ(x, 0.0);
  EXPECT_EQ(m.word_count(), 7u);
  EXPECT_EQ(m.word_frequency(*m.word_id(u("the"))), 2u);
}

TEST(Train, EmptyCorpusRejected) {
  EXPECT_THROW(train(std::vector<Sentence>{}, no_bag, EmbeddingHyper{}), contract_error);
  EXPECT_THROW(train(std::vector<Sentence>{{}}, no_bag, EmbeddingHyper{}), contract_error);
}

TEST(Train, DeterministicSingleThreaded) {
  const auto c = fixtures::shared_root_corpus(4, 300);
  const auto forests = fixtures::forests_for(c);
  EmbeddingHyper hp;
  hp.dim = 16;
  const auto a = train(c.sentences, forests, &c.morphemes, hp);
  const auto b = train(c.sentences, forests, &c.morphemes, hp);
  std::ostringstream sa, sb;
  write_vectors(sa, word_vectors(a));
  write_vectors(sb, word_vectors(b));
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(a.morph_data(), b.morph_data());
  for (double x : a.morph_data()) EXPECT_TRUE(std::isfinite(x));
  for (double x : a.context_data()) EXPECT_TRUE(std::isfinite(x));
}

TEST(Train, MultiThreadedStaysFinite) {
  const auto c = fixtures::shared_root_corpus(4, 400);
  EmbeddingHyper hp;
  hp.dim = 16;
  hp.threads = 4;
  const auto m = train(c.sentences, fixtures::forests_for(c), &c.morphemes, hp);
  for (double x : m.morph_data()) EXPECT_TRUE(std::isfinite(x));
}

TEST(Train, SharedRootPullsHeldOutWordTowardItsFamily) {
  const auto m = fixtures::sharing_margin(42);
  EXPECT_FALSE(m.flagged);
  EXPECT_GT(m.margin(), 0.1);
}

TEST(InferOov, SumsKnownMorphemes) {
  const MorphemeVocab mv({{u("re"), kPrefix, 5}, {u("truncat"), kRoot, 3}, {u("ing"), kSuffix, 9}});
  std::mt19937_64 rng(8);
  auto m = fixtures::random_model(rng, 12);
  const auto r = infer_oov(m, u("retruncating"), mv);
  EXPECT_FALSE(r.flagged);
  for (std::size_t k = 0; k < 12; ++k) {
    const double expected = m.morph_vector(*m.token_id(u("re")))[k] + m.morph_vector(*m.token_id(u("truncat")))[k] +
                            m.morph_vector(*m.token_id(u("ing")))[k];
    EXPECT_NEAR(r.vector[k], expected, 1e-12);
  }
}

TEST(InferOov, SingleKnownMorpheme) {
  const MorphemeVocab mv({{u("walk"), kRoot, 5}});
  std::mt19937_64 rng(9);
  auto m = fixtures::random_model(rng, 7);
  const auto r = infer_oov(m, u("walkzz"), mv);
  const auto z = m.morph_vector(*m.token_id(u("walk")));
  EXPECT_EQ(r.vector, std::vector<double>(z.begin(), z.end()));
}

TEST(InferOov, NothingKnownIsFlaggedZero) {
  const MorphemeVocab mv({{u("walk"), kRoot, 5}});
  std::mt19937_64 rng(9);
  auto m = fixtures::random_model(rng, 7);
  const auto r = infer_oov(m, u("qqqq"), mv);
  EXPECT_TRUE(r.flagged);
  EXPECT_EQ(r.vector, std::vector<double>(7, 0.0));
}

TEST(VectorFile, FormatAndRoundTrip) {
  VectorTable t{2, {}, {}, {}};
  t.add(u("walk"), std::vector<double>{0.5, -1.25});
  t.add(u("ing"), std::vector<double>{1.0 / 3.0, 0.0});
  std::ostringstream out;
  write_vectors(out, t);
  EXPECT_EQ(out.str(), "2 2\nwalk 0.500000 -1.250000\ning 0.333333 0.000000\n");
  std::istringstream in(out.str());
  const auto back = read_vectors(in);
  EXPECT_EQ(back.dim, 2u);
  EXPECT_EQ(back.names, t.names);
  EXPECT_NEAR((*back.find(u("ing")))[0], 0.333333, 1e-12);
}

TEST(VectorFile, Errors) {
  std::istringstream short_row("1 3\nwalk 0.1 0.2\n");
  EXPECT_THROW(read_vectors(short_row), parse_error);
  std::istringstream truncated("2 1\nwalk 0.1\n");
  EXPECT_THROW(read_vectors(truncated), parse_error);
  std::istringstream header("walk 0.1\n");
  EXPECT_THROW(read_vectors(header), parse_error);
}
