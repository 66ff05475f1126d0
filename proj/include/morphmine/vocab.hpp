#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "morphmine/error.hpp"
#include "morphmine/unicode.hpp"

namespace morphmine {

enum class InputMode { word_list, corpus };

// How vocabulary entries are weighted when counting prefixes, suffixes
// and substrings: once per word type, or by token frequency.
enum class Weighting { type, token };

struct VocabEntry {
  text word;
  uint64_t count = 1;
};

class Vocabulary {
 public:
  Vocabulary() = default;

  // Adds `count` occurrences of `word`, merging with an existing entry.
  void add(const text& word, uint64_t count = 1) {
    if (word.empty()) return;
    auto [it, inserted] = index_.try_emplace(word, entries_.size());
    if (inserted) {
      entries_.push_back({word, count});
      for (char32_t c : word) char_index_.try_emplace(c, static_cast<uint32_t>(char_index_.size() + 1));
    } else {
      entries_[it->second].count += count;
    }
  }

  const std::vector<VocabEntry>& entries() const noexcept { return entries_; }
  const VocabEntry& operator[](std::size_t i) const { return entries_[i]; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  std::size_t total_types() const noexcept { return entries_.size(); }
  std::size_t char_count() const noexcept { return char_index_.size(); }

  uint64_t total_tokens() const noexcept {
    uint64_t n = 0;
    for (const auto& e : entries_) n += e.count;
    return n;
  }

  bool contains(const text& word) const { return index_.count(word) != 0; }

  uint64_t count(const text& word) const {
    auto it = index_.find(word);
    return it == index_.end() ? 0 : entries_[it->second].count;
  }

  // Character id in 1..C, assigned in order of first appearance.
  uint32_t char_id(char32_t c) const {
    auto it = char_index_.find(c);
    if (it == char_index_.end()) throw lookup_error("character not in vocabulary");
    return it->second;
  }

  uint64_t weight(std::size_t i, Weighting w) const {
    return w == Weighting::type ? 1 : entries_[i].count;
  }

 private:
  std::vector<VocabEntry> entries_;
  std::unordered_map<text, std::size_t> index_;
  std::unordered_map<char32_t, uint32_t> char_index_;
};

namespace detail {

inline std::string_view strip_eol(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  return line;
}

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f' || c == '\r'; }

}  // namespace detail

// Reads a word list (`word` or `word<TAB>count` per line) or a raw
// whitespace-tokenized corpus.
inline Vocabulary load_vocabulary(std::istream& in, InputMode mode,
                                  const NormalizationPolicy& policy = {}) {
  Vocabulary vocab;
  std::string raw;
  std::size_t line_no = 0;
  text decoded;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::strip_eol(raw);
    if (!decode_utf8(line, decoded)) throw parse_error("invalid UTF-8", line_no);

    if (mode == InputMode::word_list) {
      if (line.empty()) continue;
      std::string_view word = line;
      uint64_t count = 1;
      if (auto tab = line.find('\t'); tab != std::string_view::npos) {
        word = line.substr(0, tab);
        std::string_view field = line.substr(tab + 1);
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), count);
        if (ec != std::errc() || ptr != field.data() + field.size() || count == 0)
          throw parse_error("malformed count field '" + std::string(field) + "'", line_no);
      }
      if (word.empty()) throw parse_error("empty word", line_no);
      vocab.add(normalize(from_utf8(word), policy), count);
    } else {
      std::size_t i = 0;
      while (i < line.size()) {
        while (i < line.size() && detail::is_space(line[i])) ++i;
        std::size_t j = i;
        while (j < line.size() && !detail::is_space(line[j])) ++j;
        if (j > i) vocab.add(normalize(from_utf8(line.substr(i, j - i)), policy), 1);
        i = j;
      }
    }
  }
  if (vocab.empty()) throw parse_error("empty input: no words found");
  return vocab;
}

// Canonical TSV: `word<TAB>count`, descending count then lexicographic.
inline void write_vocabulary(std::ostream& out, const Vocabulary& vocab) {
  std::vector<const VocabEntry*> order;
  order.reserve(vocab.size());
  for (const auto& e : vocab.entries()) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const VocabEntry* a, const VocabEntry* b) {
    return a->count != b->count ? a->count > b->count : a->word < b->word;
  });
  for (const auto* e : order) out << to_utf8(e->word) << '\t' << e->count << '\n';
}

}  // namespace morphmine
