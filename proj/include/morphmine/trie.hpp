#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string_view>
#include <utility>
#include <vector>

#include "morphmine/error.hpp"
#include "morphmine/unicode.hpp"
#include "morphmine/vocab.hpp"

namespace morphmine {

// Character-keyed prefix tree with a payload per node. Children are kept
// in small sorted vectors; the fan-out is bounded by the alphabet size.
template <typename Payload>
class BasicTrie {
 public:
  using node_id = uint32_t;
  static constexpr node_id npos = std::numeric_limits<node_id>::max();
  static constexpr node_id root = 0;

  struct Node {
    std::vector<std::pair<char32_t, node_id>> children;
    Payload value{};
  };

  BasicTrie() : nodes_(1) {}

  node_id child(node_id n, char32_t c) const {
    const auto& ch = nodes_[n].children;
    auto it = std::lower_bound(ch.begin(), ch.end(), c,
                               [](const auto& p, char32_t key) { return p.first < key; });
    return (it != ch.end() && it->first == c) ? it->second : npos;
  }

  node_id add_child(node_id n, char32_t c) {
    auto& ch = nodes_[n].children;
    auto it = std::lower_bound(ch.begin(), ch.end(), c,
                               [](const auto& p, char32_t key) { return p.first < key; });
    if (it != ch.end() && it->first == c) return it->second;
    const auto id = static_cast<node_id>(nodes_.size());
    ch.insert(it, {c, id});  // `ch` dangles once nodes_ grows
    nodes_.emplace_back();
    return id;
  }

  node_id insert(std::u32string_view key) {
    node_id n = root;
    for (char32_t c : key) n = add_child(n, c);
    return n;
  }

  node_id find(std::u32string_view key) const {
    node_id n = root;
    for (char32_t c : key) {
      n = child(n, c);
      if (n == npos) return npos;
    }
    return n;
  }

  Payload& value(node_id n) { return nodes_[n].value; }
  const Payload& value(node_id n) const { return nodes_[n].value; }
  const Node& node(node_id n) const { return nodes_[n]; }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  // Pre-order traversal; `visit(id, key)` sees each node with its key.
  template <typename Visit>
  void for_each(Visit&& visit) const {
    text key;
    walk(root, key, visit);
  }

 private:
  template <typename Visit>
  void walk(node_id n, text& key, Visit& visit) const {
    visit(n, std::u32string_view(key));
    for (const auto& [c, id] : nodes_[n].children) {
      key.push_back(c);
      walk(id, key, visit);
      key.pop_back();
    }
  }

  std::vector<Node> nodes_;
};

enum class Direction { forward, reversed };

struct TrieOptions {
  Weighting weighting = Weighting::type;
  bool end_of_word = true;  // count "word ends here" as a continuation outcome
};

// Prefix tree over a vocabulary (or over its reversed words) with the
// continuation count f(.) and the base-2 transition entropy of every node.
class EntropyTrie {
 public:
  struct Stats {
    uint64_t count = 0;     // weight of words passing through this node
    uint64_t terminal = 0;  // weight of words ending exactly here
    double entropy_bits = 0.0;
  };

  using node_id = BasicTrie<Stats>::node_id;
  static constexpr node_id npos = BasicTrie<Stats>::npos;

  using Options = TrieOptions;

  EntropyTrie(const Vocabulary& vocab, Direction direction, Options options = {})
      : direction_(direction), options_(options) {
    if (vocab.empty()) throw contract_error("cannot build a trie over an empty vocabulary");
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      const uint64_t w = vocab.weight(i, options_.weighting);
      const text& word = vocab[i].word;
      node_id n = BasicTrie<Stats>::root;
      trie_.value(n).count += w;
      auto step = [&](char32_t c) {
        n = trie_.add_child(n, c);
        trie_.value(n).count += w;
      };
      if (direction_ == Direction::forward)
        for (char32_t c : word) step(c);
      else
        for (auto it = word.rbegin(); it != word.rend(); ++it) step(*it);
      trie_.value(n).terminal += w;
    }
    for (node_id n = 0; n < trie_.node_count(); ++n) trie_.value(n).entropy_bits = node_entropy(n);
  }

  Direction direction() const noexcept { return direction_; }
  const Options& options() const noexcept { return options_; }
  std::size_t node_count() const noexcept { return trie_.node_count(); }

  // `key` is read in trie order: a reversed trie expects reversed strings.
  node_id find(std::u32string_view key) const { return trie_.find(key); }
  const Stats& stats(node_id n) const { return trie_.value(n); }
  const BasicTrie<Stats>& tree() const noexcept { return trie_; }

  double entropy(std::u32string_view key) const { return stats(require(key)).entropy_bits; }
  uint64_t count(std::u32string_view key) const { return stats(require(key)).count; }

  // Conditional probabilities P(key + c | key) of every outcome at a node,
  // with the end-of-word outcome last when enabled.
  std::vector<double> transition_probabilities(node_id n) const {
    const auto& s = trie_.value(n);
    const double total = static_cast<double>(outcome_total(n));
    std::vector<double> p;
    if (total == 0.0) return p;
    for (const auto& [c, id] : trie_.node(n).children)
      p.push_back(static_cast<double>(trie_.value(id).count) / total);
    if (options_.end_of_word && s.terminal > 0) p.push_back(static_cast<double>(s.terminal) / total);
    return p;
  }

  // Entropies H(m_0) .. H(m_n) along the path of `word` (given in natural
  // order; a reversed trie walks it from the end).
  std::vector<double> path_entropies(std::u32string_view word) const {
    std::vector<double> h;
    h.reserve(word.size() + 1);
    node_id n = BasicTrie<Stats>::root;
    h.push_back(trie_.value(n).entropy_bits);
    for (std::size_t i = 0; i < word.size(); ++i) {
      const char32_t c =
          direction_ == Direction::forward ? word[i] : word[word.size() - 1 - i];
      n = trie_.child(n, c);
      if (n == npos) throw lookup_error("word not present in trie: " + to_utf8(word));
      h.push_back(trie_.value(n).entropy_bits);
    }
    return h;
  }

  // Debug dump: `prefix<TAB>count<TAB>entropy_bits`, keys in trie order.
  void dump(std::ostream& out) const {
    trie_.for_each([&](node_id n, std::u32string_view key) {
      const auto& s = trie_.value(n);
      out << to_utf8(key) << '\t' << s.count << '\t' << s.entropy_bits << '\n';
    });
  }

 private:
  node_id require(std::u32string_view key) const {
    const node_id n = trie_.find(key);
    if (n == npos) throw lookup_error("prefix not present in trie: " + to_utf8(key));
    return n;
  }

  uint64_t outcome_total(node_id n) const {
    const auto& s = trie_.value(n);
    return options_.end_of_word ? s.count : s.count - s.terminal;
  }

  double node_entropy(node_id n) const {
    double h = 0.0;
    for (double p : transition_probabilities(n))
      if (p > 0.0) h -= p * std::log2(p);
    return h > 0.0 ? h : 0.0;  // clamp -0.0
  }

  Direction direction_;
  Options options_;
  BasicTrie<Stats> trie_;
};

}  // namespace morphmine
