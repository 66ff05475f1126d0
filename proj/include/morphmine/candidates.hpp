#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "morphmine/error.hpp"
#include "morphmine/trie.hpp"
#include "morphmine/unicode.hpp"
#include "morphmine/vocab.hpp"

namespace morphmine {

// Role bits of a morpheme. A string may hold several roles at once.
enum MorphClass : uint8_t {
  kPrefix = 1,
  kSuffix = 2,
  kRoot = 4,
};

inline std::string class_string(uint8_t classes) {
  std::string s;
  if (classes & kPrefix) s += 'P';
  if (classes & kSuffix) s += 'S';
  if (classes & kRoot) s += 'R';
  return s;
}

inline uint8_t parse_class_string(std::string_view s) {
  uint8_t classes = 0;
  for (char c : s) {
    switch (c) {
      case 'P': classes |= kPrefix; break;
      case 'S': classes |= kSuffix; break;
      case 'R': classes |= kRoot; break;
      default: throw parse_error("unknown morpheme class '" + std::string(1, c) + "'");
    }
  }
  if (!classes) throw parse_error("empty morpheme class set");
  return classes;
}

struct MorphemeEntry {
  text morpheme;
  uint8_t classes = 0;
  uint64_t count = 0;
};

struct MiningOptions {
  uint64_t min_support = 2;
  std::size_t min_root_len = 4;
  std::size_t min_affix_len = 1;
  Weighting weighting = Weighting::type;
  bool end_of_word = true;
};

// The learned morpheme inventory with the counts f(m) used for scoring.
// Immutable once built; refinement produces a new vocabulary.
class MorphemeVocab {
 public:
  using node_id = BasicTrie<uint32_t>::node_id;

  MorphemeVocab() = default;

  explicit MorphemeVocab(std::vector<MorphemeEntry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
      return a.count != b.count ? a.count > b.count : a.morpheme < b.morpheme;
    });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      if (e.morpheme.empty()) throw contract_error("empty morpheme");
      if (e.count == 0) throw contract_error("morpheme count must be positive: " + to_utf8(e.morpheme));
      auto& slot = trie_.value(trie_.insert(e.morpheme));
      if (slot) throw contract_error("duplicate morpheme: " + to_utf8(e.morpheme));
      slot = static_cast<uint32_t>(i + 1);
    }
  }

  const std::vector<MorphemeEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  const MorphemeEntry* find(std::u32string_view m) const {
    const node_id n = trie_.find(m);
    if (n == BasicTrie<uint32_t>::npos || !trie_.value(n)) return nullptr;
    return &entries_[trie_.value(n) - 1];
  }

  uint64_t count(std::u32string_view m) const {
    const auto* e = find(m);
    return e ? e->count : 0;
  }

  // Lookup trie: node values hold entry index + 1, zero for no entry.
  const BasicTrie<uint32_t>& trie() const noexcept { return trie_; }
  const MorphemeEntry& entry_at(uint32_t slot) const { return entries_[slot - 1]; }

 private:
  std::vector<MorphemeEntry> entries_;
  BasicTrie<uint32_t> trie_;
};

// TSV `morpheme<TAB>classes<TAB>count`, descending count then lexicographic.
inline void write_morpheme_vocab(std::ostream& out, const MorphemeVocab& mv) {
  for (const auto& e : mv.entries())
    out << to_utf8(e.morpheme) << '\t' << class_string(e.classes) << '\t' << e.count << '\n';
}

inline MorphemeVocab read_morpheme_vocab(std::istream& in) {
  std::vector<MorphemeEntry> entries;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::strip_eol(raw);
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) throw parse_error("expected morpheme<TAB>classes<TAB>count", line_no);
    MorphemeEntry e;
    text m;
    if (!decode_utf8(line.substr(0, t1), m) || m.empty()) throw parse_error("bad morpheme", line_no);
    e.morpheme = std::move(m);
    try {
      e.classes = parse_class_string(line.substr(t1 + 1, t2 - t1 - 1));
    } catch (const parse_error& err) {
      throw parse_error(err.what(), line_no);
    }
    std::string_view field = line.substr(t2 + 1);
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), e.count);
    if (ec != std::errc() || ptr != field.data() + field.size() || e.count == 0)
      throw parse_error("malformed count field '" + std::string(field) + "'", line_no);
    entries.push_back(std::move(e));
  }
  try {
    return MorphemeVocab(std::move(entries));
  } catch (const contract_error& err) {
    throw parse_error(err.what());
  }
}

// Lengths i (0 < i < |word|) at which the entropy along the word's trie
// path is a strict local maximum. For a forward trie these delimit
// prefixes word[0, i); for a reversed trie, suffixes of length i.
inline std::vector<std::size_t> affix_boundaries(const EntropyTrie& trie, std::u32string_view word) {
  const auto h = trie.path_entropies(word);
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < word.size(); ++i)
    if (h[i] > h[i - 1] && h[i] > h[i + 1]) out.push_back(i);
  return out;
}

// Interior strings left after stripping at most one candidate prefix and
// one candidate suffix (either may be empty). Lengths are as returned by
// affix_boundaries.
inline std::vector<text> extract_roots(std::u32string_view word, const std::vector<std::size_t>& prefix_lens,
                                       const std::vector<std::size_t>& suffix_lens) {
  std::vector<text> roots;
  auto each = [](const std::vector<std::size_t>& lens, auto&& fn) {
    fn(std::size_t{0});
    for (auto l : lens) fn(l);
  };
  each(prefix_lens, [&](std::size_t p) {
    each(suffix_lens, [&](std::size_t s) {
      if (p + s < word.size()) roots.emplace_back(word.substr(p, word.size() - p - s));
    });
  });
  return roots;
}

// Candidate strings per role with the support counts that finalize()
// filters on.
struct RawCandidates {
  struct Support {
    uint64_t prefix = 0;
    uint64_t suffix = 0;
    uint64_t root = 0;
    uint8_t classes = 0;
  };
  std::unordered_map<text, Support> items;
};

// Number (or weight) of vocabulary words containing each key as a
// contiguous substring, counting each word once.
inline std::unordered_map<text, uint64_t> substring_support(const Vocabulary& vocab,
                                                            const std::vector<text>& keys,
                                                            Weighting weighting) {
  struct Slot {
    uint32_t key = 0;        // key index + 1
    uint64_t last_word = 0;  // word index + 1 that last counted this key
  };
  BasicTrie<Slot> trie;
  for (std::size_t k = 0; k < keys.size(); ++k)
    trie.value(trie.insert(keys[k])).key = static_cast<uint32_t>(k + 1);

  std::vector<uint64_t> support(keys.size(), 0);
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    const text& word = vocab[w].word;
    const uint64_t weight = vocab.weight(w, weighting);
    for (std::size_t b = 0; b < word.size(); ++b) {
      auto n = BasicTrie<Slot>::root;
      for (std::size_t e = b; e < word.size(); ++e) {
        n = trie.child(n, word[e]);
        if (n == BasicTrie<Slot>::npos) break;
        auto& slot = trie.value(n);
        if (slot.key && slot.last_word != w + 1) {
          slot.last_word = w + 1;
          support[slot.key - 1] += weight;
        }
      }
    }
  }
  std::unordered_map<text, uint64_t> out;
  out.reserve(keys.size());
  for (std::size_t k = 0; k < keys.size(); ++k) out.emplace(keys[k], support[k]);
  return out;
}

// Entropy-boundary prefixes and suffixes of every word plus the roots left
// after stripping them, each with its role support.
inline RawCandidates generate_candidates(const Vocabulary& vocab, const EntropyTrie& forward,
                                         const EntropyTrie& backward, Weighting weighting) {
  RawCandidates raw;
  for (const auto& entry : vocab.entries()) {
    const text& w = entry.word;
    if (w.size() < 2) continue;
    const auto pre = affix_boundaries(forward, w);
    const auto suf = affix_boundaries(backward, w);
    for (auto l : pre) raw.items[w.substr(0, l)].classes |= kPrefix;
    for (auto l : suf) raw.items[w.substr(w.size() - l)].classes |= kSuffix;
    for (auto& r : extract_roots(w, pre, suf)) raw.items[std::move(r)].classes |= kRoot;
  }

  std::vector<text> root_keys;
  for (auto& [m, s] : raw.items) {
    if (s.classes & kPrefix) s.prefix = forward.count(m);
    if (s.classes & kSuffix) s.suffix = backward.count(reversed(m));
    if (s.classes & kRoot) root_keys.push_back(m);
  }
  const auto support = substring_support(vocab, root_keys, weighting);
  for (const auto& k : root_keys) raw.items[k].root = support.at(k);
  return raw;
}

// Applies the support and length filters role by role. A morpheme keeps
// every role that passes; its count is the largest surviving role support.
inline MorphemeVocab finalize(const RawCandidates& raw, const MiningOptions& opt) {
  std::vector<MorphemeEntry> entries;
  for (const auto& [m, s] : raw.items) {
    MorphemeEntry e{m, 0, 0};
    const bool affix_len_ok = m.size() >= opt.min_affix_len;
    if ((s.classes & kPrefix) && affix_len_ok && s.prefix >= opt.min_support) {
      e.classes |= kPrefix;
      e.count = std::max(e.count, s.prefix);
    }
    if ((s.classes & kSuffix) && affix_len_ok && s.suffix >= opt.min_support) {
      e.classes |= kSuffix;
      e.count = std::max(e.count, s.suffix);
    }
    if ((s.classes & kRoot) && m.size() >= opt.min_root_len && s.root >= opt.min_support) {
      e.classes |= kRoot;
      e.count = std::max(e.count, s.root);
    }
    if (e.classes && e.count > 0) entries.push_back(std::move(e));
  }
  return MorphemeVocab(std::move(entries));
}

inline MorphemeVocab mine_morphemes(const Vocabulary& vocab, const MiningOptions& opt = {}) {
  const EntropyTrie::Options trie_opt{opt.weighting, opt.end_of_word};
  const EntropyTrie forward(vocab, Direction::forward, trie_opt);
  const EntropyTrie backward(vocab, Direction::reversed, trie_opt);
  return finalize(generate_candidates(vocab, forward, backward, opt.weighting), opt);
}

}  // namespace morphmine
