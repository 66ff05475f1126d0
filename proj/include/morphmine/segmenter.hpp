#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "morphmine/candidates.hpp"
#include "morphmine/error.hpp"
#include "morphmine/unicode.hpp"

namespace morphmine {

enum class IntervalClass : uint8_t { prefix, suffix, root, word };

// Candidate morpheme occurrence [begin, end) inside a word.
struct Interval {
  std::size_t begin = 0;
  std::size_t end = 0;
  IntervalClass cls = IntervalClass::root;

  std::size_t length() const noexcept { return end - begin; }
  friend bool operator==(const Interval& a, const Interval& b) noexcept {
    return a.begin == b.begin && a.end == b.end;
  }
};

// One piece of a partition: either a selected morpheme or a filler
// covering a maximal run of uncovered characters.
struct Piece {
  text str;
  std::size_t begin = 0;
  std::size_t end = 0;
  bool filler = false;
  IntervalClass cls = IntervalClass::root;
};

struct Segmentation {
  std::vector<Piece> pieces;
  std::size_t coverage = 0;  // characters covered by morphemes
  std::size_t size = 0;      // number of morphemes, fillers excluded
  double log_likelihood = 0.0;

  std::vector<text> strings() const {
    std::vector<text> out;
    out.reserve(pieces.size());
    for (const auto& p : pieces) out.push_back(p.str);
    return out;
  }
};

struct DpResult {
  std::size_t coverage = 0;
  std::size_t size = 0;
  std::vector<Segmentation> optimal;
  bool truncated = false;  // more optimal segmentations existed than the cap
};

inline constexpr std::size_t kDefaultMaxSegmentations = 256;

namespace detail {

inline void validate_interval(const Interval& iv, std::size_t n) {
  if (iv.begin >= iv.end || iv.end > n)
    throw contract_error("interval [" + std::to_string(iv.begin) + ", " + std::to_string(iv.end) +
                         ") out of bounds for word of length " + std::to_string(n));
  if (iv.begin == 0 && iv.end == n) throw contract_error("interval spans the full word");
  if (iv.cls == IntervalClass::prefix && iv.begin != 0) throw contract_error("prefix interval must start the word");
  if (iv.cls == IntervalClass::suffix && iv.end != n) throw contract_error("suffix interval must end the word");
}

// Fills gaps between chosen intervals (sorted, disjoint) with fillers.
inline Segmentation assemble(std::u32string_view word, const std::vector<Interval>& chosen) {
  Segmentation seg;
  std::size_t pos = 0;
  auto filler = [&](std::size_t b, std::size_t e) {
    seg.pieces.push_back({text(word.substr(b, e - b)), b, e, true, IntervalClass::root});
  };
  for (const auto& iv : chosen) {
    if (iv.begin > pos) filler(pos, iv.begin);
    seg.pieces.push_back({text(word.substr(iv.begin, iv.length())), iv.begin, iv.end, false, iv.cls});
    seg.coverage += iv.length();
    ++seg.size;
    pos = iv.end;
  }
  if (pos < word.size()) filler(pos, word.size());
  return seg;
}

}  // namespace detail

// Disjoint interval covering: maximize covered characters, then minimize
// the number of intervals. cov[j]/num[j] hold the optimum over word[0, j);
// every segmentation reaching the optimum is recovered by walking back
// over all tied transitions, up to `max_segmentations`.
inline DpResult dp_segment(std::u32string_view word, std::span<const Interval> intervals,
                           std::size_t max_segmentations = kDefaultMaxSegmentations) {
  const std::size_t n = word.size();
  for (const auto& iv : intervals) detail::validate_interval(iv, n);

  // Counting sort by end position into one flat array; inside a bucket,
  // order by begin and drop repeated (begin, end) pairs, keeping the first.
  std::vector<std::size_t> start(n + 2, 0);
  for (const auto& iv : intervals) ++start[iv.end + 1];
  for (std::size_t j = 1; j <= n + 1; ++j) start[j] += start[j - 1];
  std::vector<Interval> flat(intervals.size());
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (const auto& iv : intervals) flat[fill[iv.end]++] = iv;
  }
  std::vector<std::size_t> stop(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const auto first = flat.begin() + static_cast<std::ptrdiff_t>(start[j]);
    const auto last = flat.begin() + static_cast<std::ptrdiff_t>(start[j + 1]);
    std::stable_sort(first, last, [](const auto& a, const auto& b) { return a.begin < b.begin; });
    stop[j] = static_cast<std::size_t>(std::unique(first, last) - flat.begin());
  }
  auto ending = [&](std::size_t j) {
    return std::span<const Interval>(flat.data() + start[j], stop[j] - start[j]);
  };

  std::vector<std::size_t> cov(n + 1, 0), num(n + 1, 0);
  for (std::size_t j = 1; j <= n; ++j) {
    cov[j] = cov[j - 1];
    num[j] = num[j - 1];
    for (const auto& iv : ending(j)) {
      const std::size_t c = cov[iv.begin] + iv.length();
      const std::size_t k = num[iv.begin] + 1;
      if (c > cov[j] || (c == cov[j] && k < num[j])) {
        cov[j] = c;
        num[j] = k;
      }
    }
  }

  DpResult result;
  result.coverage = cov[n];
  result.size = num[n];

  // Depth-first walk from the end, with an explicit stack so long words
  // cannot overflow the call stack. Every reachable state is optimal for
  // its prefix, so each branch completes to a full segmentation. Choice 0
  // leaves character j-1 uncovered; choice k takes ending(j)[k-1].
  struct Frame {
    std::size_t j;
    std::size_t next = 0;
    bool took_interval = false;
  };
  std::vector<Interval> chosen;
  std::vector<Frame> frames{{n}};
  auto pop = [&] {
    if (frames.back().took_interval) chosen.pop_back();
    frames.pop_back();
  };
  while (!frames.empty()) {
    Frame& f = frames.back();
    const std::size_t j = f.j;
    if (j == 0) {
      result.optimal.push_back(detail::assemble(word, std::vector<Interval>(chosen.rbegin(), chosen.rend())));
      pop();
      continue;
    }
    std::optional<Frame> child;
    while (!child && f.next <= ending(j).size()) {
      const std::size_t c = f.next++;
      if (c == 0) {
        if (cov[j - 1] == cov[j] && num[j - 1] == num[j]) child = Frame{j - 1};
      } else if (const auto& iv = ending(j)[c - 1];
                 cov[iv.begin] + iv.length() == cov[j] && num[iv.begin] + 1 == num[j]) {
        chosen.push_back(iv);
        child = Frame{iv.begin, 0, true};
      }
    }
    if (!child) {
      pop();
    } else if (result.optimal.size() >= max_segmentations) {
      result.truncated = true;
      break;
    } else {
      frames.push_back(*child);
    }
  }
  return result;
}

struct Selection {
  Segmentation segmentation;
  bool flagged = false;  // training filter removed every candidate
};

// Picks the candidate maximizing the sum of log f(m) over its morphemes.
// Fillers count as f = 1. In training mode candidates using a morpheme
// with f(m) <= 1 are skipped unless that would leave nothing. Ties (within
// rounding of the log sums) go to the lexicographically smallest sequence.
inline Selection ml_select(std::span<const Segmentation> candidates, const MorphemeVocab& counts,
                           bool training_mode) {
  if (candidates.empty()) throw contract_error("ml_select needs at least one candidate");

  auto score = [&](const Segmentation& s, bool& has_singleton) {
    double ll = 0.0;
    has_singleton = false;
    for (const auto& p : s.pieces) {
      if (p.filler) continue;
      const uint64_t f = counts.count(p.str);
      if (f <= 1) has_singleton = true;
      ll += std::log(static_cast<double>(std::max<uint64_t>(f, 1)));
    }
    return ll;
  };

  auto pick = [&](bool filter) -> const Segmentation* {
    const Segmentation* best = nullptr;
    double best_ll = 0.0;
    std::vector<text> best_strings;
    for (const auto& c : candidates) {
      bool singleton = false;
      const double ll = score(c, singleton);
      if (filter && singleton) continue;
      if (best) {
        const double tol = 1e-12 * std::max(1.0, std::abs(best_ll));
        if (ll < best_ll - tol) continue;
        if (ll <= best_ll + tol) {
          auto strings = c.strings();
          if (!(strings < best_strings)) continue;
          best_strings = std::move(strings);
          best = &c;
          best_ll = ll;
          continue;
        }
      }
      best = &c;
      best_ll = ll;
      best_strings = c.strings();
    }
    return best;
  };

  Selection sel;
  const Segmentation* best = pick(training_mode);
  if (!best) {
    best = pick(false);
    sel.flagged = true;
  }
  sel.segmentation = *best;
  bool unused = false;
  sel.segmentation.log_likelihood = score(*best, unused);
  return sel;
}

// Occurrences of vocabulary morphemes in `word` as intervals, honoring the
// placement rules: prefixes start the word, suffixes end it, roots may sit
// anywhere. The full word itself is never an interval.
inline std::vector<Interval> find_intervals(std::u32string_view word, const MorphemeVocab& mv) {
  std::vector<Interval> out;
  const auto& trie = mv.trie();
  const std::size_t n = word.size();
  for (std::size_t b = 0; b < n; ++b) {
    auto node = BasicTrie<uint32_t>::root;
    for (std::size_t e = b; e < n; ++e) {
      node = trie.child(node, word[e]);
      if (node == BasicTrie<uint32_t>::npos) break;
      const uint32_t slot = trie.value(node);
      if (!slot || (b == 0 && e + 1 == n)) continue;
      const uint8_t classes = mv.entry_at(slot).classes;
      if (b == 0 && (classes & kPrefix))
        out.push_back({b, e + 1, IntervalClass::prefix});
      else if (e + 1 == n && (classes & kSuffix))
        out.push_back({b, e + 1, IntervalClass::suffix});
      else if (classes & kRoot)
        out.push_back({b, e + 1, IntervalClass::root});
    }
  }
  return out;
}

}  // namespace morphmine
