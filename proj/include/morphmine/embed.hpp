#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "morphmine/candidates.hpp"
#include "morphmine/error.hpp"
#include "morphmine/parallel.hpp"
#include "morphmine/pipeline.hpp"
#include "morphmine/unicode.hpp"

namespace morphmine {

struct EmbeddingHyper {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  double learning_rate = 0.025;
  std::size_t epochs = 5;
  uint64_t seed = 42;
  unsigned threads = 1;
};

// log(1 + exp(-x)) without overflow.
inline double logistic_loss(double x) {
  return x >= 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Skip-gram model in which a word is a bag of morpheme tokens: the score
// of (word, context) is the sum over the bag of z_m . v_context. Morpheme
// vectors and context vectors live in separate tables; a token string
// names one morpheme vector whether it came from a whole word or a piece.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  explicit EmbeddingModel(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw contract_error("embedding dimension must be positive");
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t token_count() const noexcept { return tokens_.size(); }
  std::size_t word_count() const noexcept { return words_.size(); }

  uint32_t add_token(const text& t) {
    auto [it, inserted] = token_ids_.try_emplace(t, static_cast<uint32_t>(tokens_.size()));
    if (inserted) {
      tokens_.push_back(t);
      morph_.resize(morph_.size() + dim_, 0.0);
    }
    return it->second;
  }

  // Registers a word with its bag; the word's own token is always included.
  uint32_t add_word(const text& w, uint64_t count, const std::vector<text>& bag) {
    auto [it, inserted] = word_ids_.try_emplace(w, static_cast<uint32_t>(words_.size()));
    if (!inserted) {
      counts_[it->second] += count;
      return it->second;
    }
    words_.push_back(w);
    counts_.push_back(count);
    ctx_.resize(ctx_.size() + dim_, 0.0);
    std::vector<uint32_t> ids{add_token(w)};
    for (const auto& m : bag) ids.push_back(add_token(m));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    bags_.push_back(std::move(ids));
    return it->second;
  }

  std::optional<uint32_t> token_id(const text& t) const {
    auto it = token_ids_.find(t);
    if (it == token_ids_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<uint32_t> word_id(const text& w) const {
    auto it = word_ids_.find(w);
    if (it == word_ids_.end()) return std::nullopt;
    return it->second;
  }

  const text& token(uint32_t id) const { return tokens_[id]; }
  const text& word(uint32_t id) const { return words_[id]; }
  uint64_t word_frequency(uint32_t id) const { return counts_[id]; }
  const std::vector<uint32_t>& bag(uint32_t word) const { return bags_[word]; }

  std::span<double> morph_vector(uint32_t token) { return {morph_.data() + token * dim_, dim_}; }
  std::span<const double> morph_vector(uint32_t token) const { return {morph_.data() + token * dim_, dim_}; }
  std::span<double> context_vector(uint32_t word) { return {ctx_.data() + word * dim_, dim_}; }
  std::span<const double> context_vector(uint32_t word) const { return {ctx_.data() + word * dim_, dim_}; }

  // Sum of the word's morpheme vectors.
  std::vector<double> word_vector(uint32_t word) const {
    std::vector<double> h(dim_, 0.0);
    for (uint32_t m : bags_[word]) {
      auto z = morph_vector(m);
      for (std::size_t k = 0; k < dim_; ++k) h[k] += z[k];
    }
    return h;
  }

  double score(uint32_t word, uint32_t context) const {
    if (bags_[word].empty()) throw contract_error("cannot score a word with an empty morpheme bag");
    auto v = context_vector(context);
    double s = 0.0;
    for (uint32_t m : bags_[word]) {
      auto z = morph_vector(m);
      double d = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) d += z[k] * v[k];
      s += d;
    }
    return s;
  }

  const std::vector<double>& morph_data() const noexcept { return morph_; }
  const std::vector<double>& context_data() const noexcept { return ctx_; }

 private:
  std::size_t dim_ = 0;
  std::vector<text> tokens_;
  std::unordered_map<text, uint32_t> token_ids_;
  std::vector<double> morph_;
  std::vector<text> words_;
  std::unordered_map<text, uint32_t> word_ids_;
  std::vector<uint64_t> counts_;
  std::vector<std::vector<uint32_t>> bags_;
  std::vector<double> ctx_;
};

struct Gradients {
  std::map<uint32_t, std::vector<double>> morph;    // token id -> dLoss/dz
  std::map<uint32_t, std::vector<double>> context;  // word id -> dLoss/dv
};

struct LossAndGradients {
  double loss = 0.0;
  Gradients grad;
};

// Negative-sampling loss l(s(w,c)) + sum_t l(-s(w,t)) with l(x) =
// log(1 + exp(-x)), and its gradient with respect to every vector it
// touches.
inline LossAndGradients loss_and_gradients(const EmbeddingModel& model, uint32_t center, uint32_t context,
                                           std::span<const uint32_t> negatives) {
  const std::size_t d = model.dim();
  const auto h = model.word_vector(center);
  LossAndGradients out;
  std::vector<double> gh(d, 0.0);

  auto target = [&](uint32_t t, bool positive) {
    auto v = model.context_vector(t);
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += h[k] * v[k];
    out.loss += positive ? logistic_loss(s) : logistic_loss(-s);
    const double g = positive ? -sigmoid(-s) : sigmoid(s);  // dLoss/ds
    auto& gv = out.grad.context[t];
    gv.resize(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
      gh[k] += g * v[k];
      gv[k] += g * h[k];
    }
  };
  target(context, true);
  for (uint32_t t : negatives) target(t, false);
  for (uint32_t m : model.bag(center)) out.grad.morph[m] = gh;
  return out;
}

// One plain gradient step on the loss above. All gradients are taken at
// the current parameters before anything is written. Returns the loss.
inline double sgd_step(EmbeddingModel& model, uint32_t center, uint32_t context,
                       std::span<const uint32_t> negatives, double lr, std::vector<double>& scratch) {
  const std::size_t d = model.dim();
  scratch.assign(2 * d + negatives.size() + 1, 0.0);
  double* h = scratch.data();
  double* gh = h + d;
  double* g = gh + d;  // one slot per target
  for (uint32_t m : model.bag(center)) {
    auto z = model.morph_vector(m);
    for (std::size_t k = 0; k < d; ++k) h[k] += z[k];
  }
  double loss = 0.0;
  for (std::size_t i = 0; i <= negatives.size(); ++i) {
    const uint32_t t = i == 0 ? context : negatives[i - 1];
    auto v = model.context_vector(t);
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += h[k] * v[k];
    loss += i == 0 ? logistic_loss(s) : logistic_loss(-s);
    g[i] = i == 0 ? -sigmoid(-s) : sigmoid(s);
    for (std::size_t k = 0; k < d; ++k) gh[k] += g[i] * v[k];
  }
  for (std::size_t i = 0; i <= negatives.size(); ++i) {
    auto v = model.context_vector(i == 0 ? context : negatives[i - 1]);
    for (std::size_t k = 0; k < d; ++k) v[k] -= lr * g[i] * h[k];
  }
  for (uint32_t m : model.bag(center)) {
    auto z = model.morph_vector(m);
    for (std::size_t k = 0; k < d; ++k) z[k] -= lr * gh[k];
  }
  return loss;
}

// Draws word ids with probability proportional to count^(3/4).
class NegativeSampler {
 public:
  explicit NegativeSampler(const EmbeddingModel& model) {
    double acc = 0.0;
    cumulative_.reserve(model.word_count());
    for (uint32_t w = 0; w < model.word_count(); ++w) {
      acc += std::pow(static_cast<double>(model.word_frequency(w)), 0.75);
      cumulative_.push_back(acc);
    }
  }

  template <typename Rng>
  uint32_t operator()(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, cumulative_.back());
    const double x = u(rng);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
    if (it == cumulative_.end()) --it;
    return static_cast<uint32_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

using Sentence = std::vector<text>;
using BagFunction = std::function<std::vector<text>(const text&)>;

// Builds the model (words in first-appearance order, bags from `bag_of`)
// with morpheme vectors uniform in [-1/(2d), 1/(2d)] and zero context
// vectors.
inline EmbeddingModel init_model(std::span<const Sentence> corpus, const BagFunction& bag_of,
                                 const EmbeddingHyper& hp) {
  EmbeddingModel model(hp.dim);
  std::unordered_map<text, uint64_t> freq;
  std::vector<const text*> order;
  for (const auto& s : corpus)
    for (const auto& w : s)
      if (freq[w]++ == 0) order.push_back(&w);
  if (order.empty()) throw contract_error("cannot train on an empty corpus");
  for (const text* w : order) model.add_word(*w, freq[*w], bag_of(*w));

  std::mt19937_64 rng(hp.seed);
  const double bound = 1.0 / (2.0 * static_cast<double>(hp.dim));
  std::uniform_real_distribution<double> init(-bound, bound);
  for (uint32_t t = 0; t < model.token_count(); ++t)
    for (double& x : model.morph_vector(t)) x = init(rng);
  return model;
}

// Linearly decaying SGD over the corpus. With one thread the result is a
// pure function of the inputs and the seed; with more, workers update the
// shared tables without locks.
inline EmbeddingModel train(std::span<const Sentence> corpus, const BagFunction& bag_of, const EmbeddingHyper& hp,
                            double* final_mean_loss = nullptr) {
  if (hp.window == 0) throw contract_error("window must be positive");
  EmbeddingModel model = init_model(corpus, bag_of, hp);
  const NegativeSampler sampler(model);

  uint64_t tokens = 0;
  for (const auto& s : corpus) tokens += s.size();
  const double total = static_cast<double>(tokens * std::max<std::size_t>(hp.epochs, 1));
  std::atomic<uint64_t> processed{0};
  std::atomic<double> loss_sum{0.0};
  std::atomic<uint64_t> loss_n{0};

  parallel_for(corpus.size(), hp.threads, [&](std::size_t begin, std::size_t end, unsigned worker) {
    std::mt19937_64 rng(hp.seed + 0x9e3779b97f4a7c15ULL * (worker + 1));
    std::uniform_int_distribution<std::size_t> span_dist(1, hp.window);
    std::vector<uint32_t> ids, negs;
    std::vector<double> scratch;
    double local_loss = 0.0;
    uint64_t local_n = 0;
    for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
      for (std::size_t si = begin; si < end; ++si) {
        ids.clear();
        for (const auto& w : corpus[si]) ids.push_back(*model.word_id(w));
        for (std::size_t pos = 0; pos < ids.size(); ++pos) {
          const double progress = static_cast<double>(processed.fetch_add(1, std::memory_order_relaxed)) / total;
          const double lr = hp.learning_rate * std::max(1.0 - progress, 1e-4);
          const std::size_t b = span_dist(rng);
          const std::size_t lo = pos >= b ? pos - b : 0;
          const std::size_t hi = std::min(ids.size() - 1, pos + b);
          for (std::size_t c = lo; c <= hi; ++c) {
            if (c == pos) continue;
            negs.clear();
            if (model.word_count() > 1) {
              while (negs.size() < hp.negatives) {
                const uint32_t t = sampler(rng);
                if (t != ids[c]) negs.push_back(t);
              }
            }
            local_loss += sgd_step(model, ids[pos], ids[c], negs, lr, scratch);
            ++local_n;
          }
        }
      }
    }
    loss_sum.fetch_add(local_loss);
    loss_n.fetch_add(local_n);
  });
  if (final_mean_loss) *final_mean_loss = loss_n ? loss_sum / static_cast<double>(loss_n) : 0.0;
  return model;
}

inline EmbeddingModel train(std::span<const Sentence> corpus, const std::unordered_map<text, MorphForest>& forests,
                            const MorphemeVocab* fallback, const EmbeddingHyper& hp) {
  std::optional<Segmenter> seg;
  if (fallback) seg.emplace(*fallback, SegmentOptions{false, kDefaultMaxSegmentations});
  BagFunction bag_of = [&](const text& w) -> std::vector<text> {
    if (auto it = forests.find(w); it != forests.end()) return it->second.flat_set();
    if (seg) return seg->segment(w).flat_set();
    return {w};
  };
  return train(corpus, bag_of, hp);
}

struct InferredVector {
  std::vector<double> vector;
  bool flagged = false;  // no morpheme of the word was known
  std::vector<text> used;
};

// Vector for an unseen word: segment it with the frozen morpheme
// vocabulary and sum the vectors of the tokens the model knows.
inline InferredVector infer_oov(const EmbeddingModel& model, const text& word, const MorphemeVocab& mv) {
  InferredVector out;
  out.vector.assign(model.dim(), 0.0);
  for (const auto& m : segment_recursive(word, mv, false).flat_set()) {
    auto id = model.token_id(m);
    if (!id) continue;
    auto z = model.morph_vector(*id);
    for (std::size_t k = 0; k < model.dim(); ++k) out.vector[k] += z[k];
    out.used.push_back(m);
  }
  out.flagged = out.used.empty();
  return out;
}

// ---- vector files -----------------------------------------------------

// Named vectors of one dimension, as read from or written to text files.
struct VectorTable {
  std::size_t dim = 0;
  std::vector<text> names;
  std::vector<double> data;
  std::unordered_map<text, uint32_t> index;

  std::size_t size() const noexcept { return names.size(); }
  void add(const text& name, std::span<const double> v) {
    if (v.size() != dim) throw contract_error("vector dimension mismatch");
    index.emplace(name, static_cast<uint32_t>(names.size()));
    names.push_back(name);
    data.insert(data.end(), v.begin(), v.end());
  }
  std::span<const double> row(uint32_t i) const { return {data.data() + i * dim, dim}; }
  std::optional<std::span<const double>> find(const text& name) const {
    auto it = index.find(name);
    if (it == index.end()) return std::nullopt;
    return row(it->second);
  }
};

inline VectorTable word_vectors(const EmbeddingModel& model) {
  VectorTable t{model.dim(), {}, {}, {}};
  for (uint32_t w = 0; w < model.word_count(); ++w) t.add(model.word(w), model.word_vector(w));
  return t;
}

inline VectorTable morpheme_vectors(const EmbeddingModel& model) {
  VectorTable t{model.dim(), {}, {}, {}};
  for (uint32_t m = 0; m < model.token_count(); ++m) t.add(model.token(m), model.morph_vector(m));
  return t;
}

// `<count> <dim>` header, then `name v1 ... vd` with six decimals.
inline void write_vectors(std::ostream& out, const VectorTable& t) {
  out << t.size() << ' ' << t.dim << '\n';
  char buf[64];
  for (uint32_t i = 0; i < t.size(); ++i) {
    out << to_utf8(t.names[i]);
    for (double x : t.row(i)) {
      std::snprintf(buf, sizeof buf, " %.6f", x);
      out << buf;
    }
    out << '\n';
  }
}

inline VectorTable read_vectors(std::istream& in) {
  VectorTable t;
  std::size_t count = 0;
  std::string header;
  if (!std::getline(in, header)) throw parse_error("empty vector file");
  {
    std::istringstream hs(header);
    if (!(hs >> count >> t.dim) || t.dim == 0) throw parse_error("bad vector file header", 1);
  }
  std::string line;
  std::vector<double> v;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw parse_error("vector file truncated", i + 2);
    std::istringstream ls(line);
    std::string name;
    ls >> name;
    v.clear();
    double x;
    while (ls >> x) v.push_back(x);
    if (v.size() != t.dim)
      throw parse_error("expected " + std::to_string(t.dim) + " values, got " + std::to_string(v.size()), i + 2);
    t.add(from_utf8(name), v);
  }
  return t;
}

}  // namespace morphmine
