#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "morphmine/candidates.hpp"
#include "morphmine/error.hpp"
#include "morphmine/parallel.hpp"
#include "morphmine/segmenter.hpp"
#include "morphmine/unicode.hpp"
#include "morphmine/vocab.hpp"

namespace morphmine {

// Node of a hierarchical segmentation. Children concatenate to `str`;
// fillers are always leaves.
struct MorphNode {
  text str;
  bool filler = false;
  std::vector<MorphNode> children;

  bool leaf() const noexcept { return children.empty(); }
  friend bool operator==(const MorphNode&, const MorphNode&) = default;
};

struct MorphForest {
  MorphNode root;
  bool flagged = false;  // some level fell back past the training filter

  const text& word() const noexcept { return root.str; }

  // Leaf partition of the word, fillers included, in order.
  std::vector<text> leaves() const {
    std::vector<text> out;
    auto walk = [&](auto&& self, const MorphNode& n) -> void {
      if (n.leaf()) {
        out.push_back(n.str);
        return;
      }
      for (const auto& c : n.children) self(self, c);
    };
    walk(walk, root);
    return out;
  }

  // Every non-filler node string (the word first), breadth first, unique.
  std::vector<text> flat_set() const {
    std::vector<text> out;
    std::unordered_set<text> seen;
    std::vector<const MorphNode*> level{&root};
    while (!level.empty()) {
      std::vector<const MorphNode*> next;
      for (const auto* n : level) {
        if (!n->filler && seen.insert(n->str).second) out.push_back(n->str);
        for (const auto& c : n->children) next.push_back(&c);
      }
      level = std::move(next);
    }
    return out;
  }

  friend bool operator==(const MorphForest&, const MorphForest&) = default;
};

struct SegmentOptions {
  bool training_mode = true;
  std::size_t max_segmentations = kDefaultMaxSegmentations;
};

// Recursive parsimonious segmentation against a frozen morpheme vocabulary.
// The per-string decisions are memoized; an instance is not thread-safe,
// use one per worker.
class Segmenter {
 public:
  Segmenter(const MorphemeVocab& mv, SegmentOptions opt = {}) : mv_(&mv), opt_(opt) {}

  MorphForest segment(const text& word) {
    if (word.empty()) throw contract_error("cannot segment an empty word");
    MorphForest f;
    f.root = build(word, f.flagged);
    return f;
  }

  // Top-level decision for `s`: empty when no proper interval exists.
  const Selection& level(const text& s) {
    auto it = cache_.find(s);
    if (it != cache_.end()) return it->second;
    Selection sel;
    const auto intervals = find_intervals(s, *mv_);
    if (!intervals.empty()) {
      const auto dp = dp_segment(s, intervals, opt_.max_segmentations);
      sel = ml_select(dp.optimal, *mv_, opt_.training_mode);
    }
    return cache_.emplace(s, std::move(sel)).first->second;
  }

 private:
  MorphNode build(const text& s, bool& flagged) {
    MorphNode node{s, false, {}};
    const Selection& sel = level(s);  // node-based map: stays valid
    flagged = flagged || sel.flagged;
    for (const auto& p : sel.segmentation.pieces) {
      if (p.filler)
        node.children.push_back({p.str, true, {}});
      else
        node.children.push_back(build(p.str, flagged));
    }
    return node;
  }

  const MorphemeVocab* mv_;
  SegmentOptions opt_;
  std::unordered_map<text, Selection> cache_;
};

inline MorphForest segment_recursive(const text& word, const MorphemeVocab& mv, bool training_mode) {
  return Segmenter(mv, {training_mode, kDefaultMaxSegmentations}).segment(word);
}

// Segments every vocabulary word; deterministic for any thread count.
inline std::vector<MorphForest> segment_all(const Vocabulary& vocab, const MorphemeVocab& mv,
                                            SegmentOptions opt, unsigned threads = 1) {
  std::vector<MorphForest> out(vocab.size());
  parallel_for(vocab.size(), threads, [&](std::size_t begin, std::size_t end, unsigned) {
    Segmenter seg(mv, opt);
    for (std::size_t i = begin; i < end; ++i) out[i] = seg.segment(vocab[i].word);
  });
  return out;
}

// Number of words whose hierarchy selected each morpheme at any level
// (the word itself and fillers excluded).
inline std::unordered_map<text, uint64_t> usage_counts(std::span<const MorphForest> forests) {
  std::unordered_map<text, uint64_t> usage;
  std::unordered_set<text> seen;
  for (const auto& f : forests) {
    seen.clear();
    auto walk = [&](auto&& self, const MorphNode& n) -> void {
      for (const auto& c : n.children) {
        if (c.filler) continue;
        if (seen.insert(c.str).second) ++usage[c.str];
        self(self, c);
      }
    };
    walk(walk, f.root);
  }
  return usage;
}

// Replaces counts by usage counts and drops morphemes used fewer than
// `prune_below` times. Counts are capped at their previous value.
inline MorphemeVocab refine_counts(std::span<const MorphForest> forests, const MorphemeVocab& mv,
                                   uint64_t prune_below = 1) {
  const auto usage = usage_counts(forests);
  std::vector<MorphemeEntry> kept;
  for (const auto& e : mv.entries()) {
    auto it = usage.find(e.morpheme);
    const uint64_t used = it == usage.end() ? 0 : it->second;
    if (used == 0 || used < prune_below) continue;
    kept.push_back({e.morpheme, e.classes, std::min(used, e.count)});
  }
  return MorphemeVocab(std::move(kept));
}

struct PipelineConfig {
  MiningOptions mining;
  unsigned rounds = 1;
  uint64_t prune_below = 1;
  bool final_training_mode = false;
  std::size_t max_segmentations = kDefaultMaxSegmentations;
  unsigned threads = 1;
};

struct PipelineResult {
  MorphemeVocab initial_vocab;
  MorphemeVocab final_vocab;
  std::vector<MorphForest> forests;  // vocabulary order
  std::size_t flagged_words = 0;
};

// Segmentation passes against a given morpheme vocabulary: one training
// pass, then `rounds` times refine + resegment. The last resegmentation
// runs with `final_training_mode`.
inline PipelineResult run_pipeline(const Vocabulary& vocab, MorphemeVocab mv, const PipelineConfig& cfg) {
  PipelineResult r;
  r.initial_vocab = mv;
  SegmentOptions opt{true, cfg.max_segmentations};
  r.forests = segment_all(vocab, mv, opt, cfg.threads);
  for (unsigned round = 1; round <= cfg.rounds; ++round) {
    mv = refine_counts(r.forests, mv, cfg.prune_below);
    opt.training_mode = round == cfg.rounds ? cfg.final_training_mode : true;
    r.forests = segment_all(vocab, mv, opt, cfg.threads);
  }
  r.final_vocab = std::move(mv);
  r.flagged_words = static_cast<std::size_t>(
      std::count_if(r.forests.begin(), r.forests.end(), [](const auto& f) { return f.flagged; }));
  return r;
}

inline PipelineResult run_pipeline(const Vocabulary& vocab, const PipelineConfig& cfg) {
  return run_pipeline(vocab, mine_morphemes(vocab, cfg.mining), cfg);
}

// ---- text formats -------------------------------------------------------

// `word<TAB>m1 m2 ...` with the leaf partition.
inline std::string format_flat(const MorphForest& f) {
  std::string out = to_utf8(f.word());
  out += '\t';
  bool first = true;
  for (const auto& l : f.leaves()) {
    if (!first) out += ' ';
    out += to_utf8(l);
    first = false;
  }
  return out;
}

namespace detail {

inline void append_escaped(std::string& out, const text& s) {
  for (char32_t c : s) {
    if (c == U'(' || c == U')' || c == U'\\') out += '\\';
    append_utf8(out, c);
  }
}

inline void format_node(std::string& out, const MorphNode& n) {
  if (n.filler) {
    append_escaped(out, n.str);
    return;
  }
  out += '(';
  if (n.leaf()) {
    append_escaped(out, n.str);
  } else {
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i) out += ' ';
      format_node(out, n.children[i]);
    }
  }
  out += ')';
}

}  // namespace detail

// Bracketed hierarchy, e.g. `spatiotemporal<TAB>((spati) o (temporal))`.
// Each parenthesized group is a node; fillers appear bare. Literal
// parentheses and backslashes are backslash-escaped.
inline std::string format_hierarchical(const MorphForest& f) {
  std::string out = to_utf8(f.word());
  out += '\t';
  detail::format_node(out, f.root);
  return out;
}

// Inverse of format_hierarchical.
inline MorphForest parse_hierarchical(std::string_view line) {
  const auto tab = line.find('\t');
  if (tab == std::string_view::npos) throw parse_error("expected word<TAB>tree");
  const text word = from_utf8(line.substr(0, tab));
  const text body = from_utf8(line.substr(tab + 1));
  std::size_t pos = 0;

  auto read_atom = [&]() {
    text s;
    while (pos < body.size() && body[pos] != U'(' && body[pos] != U')' && body[pos] != U' ') {
      if (body[pos] == U'\\') {
        if (++pos == body.size()) throw parse_error("dangling escape");
      }
      s.push_back(body[pos++]);
    }
    return s;
  };

  auto parse_group = [&](auto&& self) -> MorphNode {
    if (pos >= body.size() || body[pos] != U'(') throw parse_error("expected '('");
    ++pos;
    MorphNode node;
    if (pos < body.size() && body[pos] != U'(') {
      // Either a leaf `(text)` or a group whose first child is a filler.
      text atom = read_atom();
      if (pos < body.size() && body[pos] == U')') {
        ++pos;
        node.str = std::move(atom);
        return node;
      }
      node.children.push_back({std::move(atom), true, {}});
    }
    while (true) {
      if (pos < body.size() && body[pos] == U' ') ++pos;
      if (pos >= body.size()) throw parse_error("unterminated group");
      if (body[pos] == U')') {
        ++pos;
        break;
      }
      if (body[pos] == U'(') {
        node.children.push_back(self(self));
      } else {
        text atom = read_atom();
        if (atom.empty()) throw parse_error("empty filler");
        node.children.push_back({std::move(atom), true, {}});
      }
    }
    if (node.children.empty()) throw parse_error("empty group");
    for (const auto& c : node.children) node.str += c.str;
    return node;
  };

  MorphForest f;
  f.root = parse_group(parse_group);
  if (pos != body.size()) throw parse_error("trailing characters after tree");
  if (f.root.str != word) throw parse_error("tree does not spell the word");
  return f;
}

}  // namespace morphmine
