#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "morphmine/embed.hpp"
#include "morphmine/error.hpp"
#include "morphmine/unicode.hpp"

namespace morphmine {

// ---- segmentation P/R/F1 -------------------------------------------------

struct GoldSegmentation {
  text word;
  std::vector<std::vector<text>> alternatives;
};

// Gold file lines: `word<TAB>alt1, alt2, ...`, morphemes space-separated
// inside an alternative. With a tag delimiter, each morpheme is cut at its
// first occurrence (`abl:able_A` -> `abl`).
inline std::vector<GoldSegmentation> read_gold(std::istream& in, std::optional<char32_t> tag_delimiter = U':') {
  std::vector<GoldSegmentation> gold;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::strip_eol(raw);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw parse_error("expected word<TAB>segmentation", line_no);
    GoldSegmentation g;
    if (!decode_utf8(line.substr(0, tab), g.word) || g.word.empty()) throw parse_error("bad word", line_no);
    text body;
    if (!decode_utf8(line.substr(tab + 1), body)) throw parse_error("invalid UTF-8", line_no);

    std::size_t pos = 0;
    while (pos <= body.size()) {
      std::size_t comma = body.find(U',', pos);
      if (comma == text::npos) comma = body.size();
      std::vector<text> alt;
      std::size_t i = pos;
      while (i < comma) {
        while (i < comma && body[i] == U' ') ++i;
        std::size_t j = i;
        while (j < comma && body[j] != U' ') ++j;
        if (j > i) {
          text m = body.substr(i, j - i);
          if (tag_delimiter) m = m.substr(0, m.find(*tag_delimiter));
          if (!m.empty()) alt.push_back(std::move(m));
        }
        i = j;
      }
      if (alt.empty()) throw parse_error("empty gold alternative", line_no);
      g.alternatives.push_back(std::move(alt));
      pos = comma + 1;
    }
    gold.push_back(std::move(g));
  }
  if (gold.empty()) throw parse_error("empty gold file");
  return gold;
}

// Size of the multiset intersection.
inline std::size_t multiset_overlap(std::vector<text> a, std::vector<text> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

enum class Averaging { micro, macro };

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t words = 0;
  std::size_t true_positives = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
};

inline double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

// Each word is scored against the gold alternative giving it the best F1.
// Words without a prediction count as an empty prediction.
inline PrfScores seg_prf(const std::unordered_map<text, std::vector<text>>& pred,
                         const std::vector<GoldSegmentation>& gold, Averaging avg = Averaging::micro) {
  if (gold.empty()) throw contract_error("empty gold standard");
  PrfScores s;
  double p_sum = 0.0, r_sum = 0.0;
  static const std::vector<text> none;
  for (const auto& g : gold) {
    auto it = pred.find(g.word);
    const auto& p = it == pred.end() ? none : it->second;
    std::size_t best_tp = 0, best_gold = g.alternatives.front().size();
    double best_f = -1.0;
    for (const auto& alt : g.alternatives) {
      const std::size_t tp = multiset_overlap(p, alt);
      const double f = 2.0 * static_cast<double>(tp) / static_cast<double>(p.size() + alt.size());
      if (f > best_f) {
        best_f = f;
        best_tp = tp;
        best_gold = alt.size();
      }
    }
    s.true_positives += best_tp;
    s.predicted += p.size();
    s.gold += best_gold;
    p_sum += p.empty() ? 0.0 : static_cast<double>(best_tp) / static_cast<double>(p.size());
    r_sum += static_cast<double>(best_tp) / static_cast<double>(best_gold);
    ++s.words;
  }
  if (avg == Averaging::micro) {
    s.precision = s.predicted ? static_cast<double>(s.true_positives) / static_cast<double>(s.predicted) : 0.0;
    s.recall = static_cast<double>(s.true_positives) / static_cast<double>(s.gold);
  } else {
    s.precision = p_sum / static_cast<double>(s.words);
    s.recall = r_sum / static_cast<double>(s.words);
  }
  s.f1 = harmonic(s.precision, s.recall);
  return s;
}

// ---- embedding benchmarks ------------------------------------------------

// Looks up a vector for a word missing from the table; nullopt to skip.
using OovFunction = std::function<std::optional<std::vector<double>>(const text&)>;

inline double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Ranks 1..n with tied values sharing their average rank.
inline std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> rank(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  return rank;
}

// Spearman's rho as the Pearson correlation of average ranks.
inline double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw contract_error("spearman needs two equal series of length >= 2");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

struct SimilarityPair {
  text a;
  text b;
  double human = 0.0;
};

inline std::vector<SimilarityPair> read_similarity(std::istream& in) {
  std::vector<SimilarityPair> pairs;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::strip_eol(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) throw parse_error("expected word_a<TAB>word_b<TAB>score", line_no);
    SimilarityPair p;
    if (!decode_utf8(line.substr(0, t1), p.a) || !decode_utf8(line.substr(t1 + 1, t2 - t1 - 1), p.b))
      throw parse_error("invalid UTF-8", line_no);
    const std::string score(line.substr(t2 + 1));
    char* end = nullptr;
    p.human = std::strtod(score.c_str(), &end);
    if (end == score.c_str() || *end != '\0' || !std::isfinite(p.human))
      throw parse_error("bad similarity score '" + score + "'", line_no);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

enum class OovPolicy { infer, skip };

struct SimilarityResult {
  double rho = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;
};

inline SimilarityResult spearman_eval(const VectorTable& table, const std::vector<SimilarityPair>& pairs,
                                      OovPolicy policy, const OovFunction& oov = nullptr) {
  SimilarityResult r;
  std::vector<double> model, human;
  auto vec = [&](const text& w) -> std::optional<std::vector<double>> {
    if (auto v = table.find(w)) return std::vector<double>(v->begin(), v->end());
    if (policy == OovPolicy::infer && oov) return oov(w);
    return std::nullopt;
  };
  for (const auto& p : pairs) {
    auto va = vec(p.a);
    auto vb = vec(p.b);
    if (!va || !vb) {
      ++r.skipped;
      continue;
    }
    model.push_back(cosine(*va, *vb));
    human.push_back(p.human);
  }
  r.used = model.size();
  if (r.used < 2) throw contract_error("fewer than two scoreable similarity pairs");
  r.rho = spearman_rho(model, human);
  return r;
}

struct AnalogyQuestion {
  text a, b, c, d;
  std::size_t section = 0;
};

struct AnalogySet {
  std::vector<std::string> sections;  // section names; index 0 is the unnamed default
  std::vector<AnalogyQuestion> questions;
};

// `a b c d` per line; lines starting with `:` open a named section.
inline AnalogySet read_analogies(std::istream& in) {
  AnalogySet set;
  set.sections.push_back("");
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::strip_eol(raw);
    if (line.empty()) continue;
    if (line.front() == ':') {
      std::string name(line.substr(1));
      name.erase(0, name.find_first_not_of(' '));
      set.sections.push_back(name);
      continue;
    }
    std::istringstream ls{std::string(line)};
    std::string w[4], extra;
    if (!(ls >> w[0] >> w[1] >> w[2] >> w[3]) || (ls >> extra))
      throw parse_error("expected four words", line_no);
    text t[4];
    for (int i = 0; i < 4; ++i)
      if (!decode_utf8(w[i], t[i])) throw parse_error("invalid UTF-8", line_no);
    set.questions.push_back({t[0], t[1], t[2], t[3], set.sections.size() - 1});
  }
  return set;
}

struct AnalogyResult {
  struct Section {
    std::string name;
    std::size_t correct = 0;
    std::size_t total = 0;
  };
  double accuracy = 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::vector<Section> sections;  // only sections with questions
  std::vector<text> predictions;  // one per question, empty if unanswerable
};

// 3CosAdd: answer = argmax over the table of cos(v_b - v_a + v_c, x),
// excluding the three query words.
inline AnalogyResult analogy_eval(const VectorTable& table, const AnalogySet& set, const OovFunction& oov = nullptr) {
  if (set.questions.empty()) throw contract_error("empty analogy set");
  const std::size_t d = table.dim;
  std::vector<double> norms(table.size());
  for (uint32_t i = 0; i < table.size(); ++i) {
    double n = 0.0;
    for (double x : table.row(i)) n += x * x;
    norms[i] = std::sqrt(n);
  }
  auto vec = [&](const text& w) -> std::optional<std::vector<double>> {
    if (auto v = table.find(w)) return std::vector<double>(v->begin(), v->end());
    if (oov) return oov(w);
    return std::nullopt;
  };

  AnalogyResult r;
  std::vector<AnalogyResult::Section> per(set.sections.size());
  for (std::size_t s = 0; s < set.sections.size(); ++s) per[s].name = set.sections[s];
  std::vector<double> q(d);
  for (const auto& question : set.questions) {
    auto& sec = per[question.section];
    ++sec.total;
    ++r.total;
    auto va = vec(question.a), vb = vec(question.b), vc = vec(question.c);
    text answer;
    if (va && vb && vc) {
      for (std::size_t k = 0; k < d; ++k) q[k] = (*vb)[k] - (*va)[k] + (*vc)[k];
      double qn = 0.0;
      for (double x : q) qn += x * x;
      qn = std::sqrt(qn);
      double best = -std::numeric_limits<double>::infinity();
      std::optional<uint32_t> best_i;
      for (uint32_t i = 0; i < table.size(); ++i) {
        const text& name = table.names[i];
        if (name == question.a || name == question.b || name == question.c) continue;
        double dot = 0.0;
        auto row = table.row(i);
        for (std::size_t k = 0; k < d; ++k) dot += q[k] * row[k];
        const double c = (qn == 0.0 || norms[i] == 0.0) ? 0.0 : dot / (qn * norms[i]);
        if (c > best) {
          best = c;
          best_i = i;
        }
      }
      if (best_i) answer = table.names[*best_i];
    }
    if (!answer.empty() && answer == question.d) {
      ++sec.correct;
      ++r.correct;
    }
    r.predictions.push_back(std::move(answer));
  }
  for (auto& s : per)
    if (s.total) r.sections.push_back(std::move(s));
  r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.total);
  return r;
}

}  // namespace morphmine
