// morphmine: unsupervised morpheme mining, segmentation and morpheme-aware
// word embeddings from the command line.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include "morphmine/morphmine.hpp"

namespace mm = morphmine;

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- config file ----------------------------------------------------------

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Appends `--key=value` for every config entry whose flag is not already on
// the command line, so explicit flags take precedence.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw data_error("cannot open config file: " + path);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> extra;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw usage_error(path + ":" + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw usage_error(path + ":" + std::to_string(line_no) + ": empty key");
    const std::string flag = "--" + key;
    bool given = false;
    for (std::size_t i = 1; i < args.size(); ++i)
      if (args[i] == flag || args[i].rfind(flag + "=", 0) == 0) given = true;
    if (!given) extra.push_back(flag + "=" + value);
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

// ---- io -------------------------------------------------------------------

std::ifstream open_in(const std::string& path) {
  if (!std::filesystem::exists(path)) throw data_error("no such file: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open file: " + path);
  return in;
}

// Writes to `path`, or stdout when empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw data_error("cannot write file: " + path);
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

template <typename F>
auto with_file(const std::string& path, F&& fn) {
  auto in = open_in(path);
  try {
    return fn(in);
  } catch (const mm::parse_error& e) {
    throw data_error(path + ": " + e.what());
  }
}

void log(const std::string& msg) { std::cerr << msg << '\n'; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string toggle_help(const std::string& text, bool on) { return text + (on ? " (default on)" : " (default off)"); }

// Metric rows: TSV to stdout or --out, an aligned table to stderr.
class Report {
 public:
  template <typename T>
  void add(std::string key, const T& value) {
    if constexpr (std::is_floating_point_v<T>) rows_.emplace_back(std::move(key), fixed(value));
    else rows_.emplace_back(std::move(key), std::to_string(value));
  }

  void emit(const std::string& path) const {
    Output out(path);
    std::size_t width = 0;
    for (const auto& [k, v] : rows_) {
      out.stream() << k << '\t' << v << '\n';
      width = std::max(width, k.size());
    }
    for (const auto& [k, v] : rows_) std::cerr << "  " << k << std::string(width - k.size() + 2, ' ') << v << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

// ---- option groups ----------------------------------------------------------

struct Paths {
  std::string vocab, corpus, morphemes, morphemes_out, segmentation, out, morph_out;
  std::string gold, pred, vectors, morph_vectors, pairs, questions;
};

struct Enums {
  std::string input_mode = "word-list";
  std::string weighting = "type";
  std::string averaging = "micro";
  std::string oov = "infer";
  std::string tag_delimiter = ":";
};

const std::map<std::string, mm::InputMode> kModes{{"word-list", mm::InputMode::word_list},
                                                  {"corpus", mm::InputMode::corpus}};
const std::map<std::string, mm::Weighting> kWeightings{{"type", mm::Weighting::type},
                                                       {"token", mm::Weighting::token}};
const std::map<std::string, mm::Averaging> kAveraging{{"micro", mm::Averaging::micro},
                                                      {"macro", mm::Averaging::macro}};
const std::map<std::string, mm::OovPolicy> kOov{{"infer", mm::OovPolicy::infer}, {"skip", mm::OovPolicy::skip}};

struct State {
  mm::Config cfg;
  Paths paths;
  Enums enums;
  bool hierarchical = false;
  std::size_t expected_dim = 0;
};

void add_common(CLI::App* cmd, State& s) {
  cmd->add_option("--config", "key=value file; flags given on the command line win");
  cmd->add_option("--threads", s.cfg.threads, "worker threads (1 = deterministic)");
  cmd->add_option("--seed", s.cfg.seed, "seed for every random choice");
}

void add_vocab_input(CLI::App* cmd, State& s, bool required) {
  auto* o = cmd->add_option("--vocab", s.paths.vocab, "vocabulary file");
  if (required) o->required();
  cmd->add_option("--input-mode", s.enums.input_mode, "word-list (word[TAB]count) or corpus (running text)")
      ->check(CLI::IsMember({"word-list", "corpus"}));
  cmd->add_flag("--case-fold,!--no-case-fold", s.cfg.normalization.case_fold,
                toggle_help("Unicode case folding", s.cfg.normalization.case_fold));
  cmd->add_flag("--compose,!--no-compose", s.cfg.normalization.compose,
                toggle_help("canonical composition (NFC)", s.cfg.normalization.compose));
}

void add_mining(CLI::App* cmd, State& s) {
  auto& m = s.cfg.pipeline.mining;
  cmd->add_option("--min-support", m.min_support, "minimum word support of a morpheme");
  cmd->add_option("--min-root-len", m.min_root_len, "minimum root length in characters");
  cmd->add_option("--min-affix-len", m.min_affix_len, "minimum prefix/suffix length in characters");
  cmd->add_option("--weighting", s.enums.weighting, "count words by type or by token frequency")
      ->check(CLI::IsMember({"type", "token"}));
  cmd->add_flag("--end-of-word,!--no-end-of-word", m.end_of_word,
                toggle_help("word end counts as a trie continuation", m.end_of_word));
}

void resolve_enums(State& s) {
  s.cfg.input_mode = kModes.at(s.enums.input_mode);
  s.cfg.pipeline.mining.weighting = kWeightings.at(s.enums.weighting);
  s.cfg.averaging = kAveraging.at(s.enums.averaging);
  s.cfg.pipeline.threads = s.cfg.threads;
  s.cfg.embedding.threads = s.cfg.threads;
  s.cfg.embedding.seed = s.cfg.seed;
}

mm::Vocabulary load_vocab(const State& s, const std::string& path) {
  return with_file(path, [&](std::istream& in) {
    return mm::load_vocabulary(in, s.cfg.input_mode, s.cfg.normalization);
  });
}

mm::MorphemeVocab load_morphemes(const std::string& path) {
  return with_file(path, [](std::istream& in) { return mm::read_morpheme_vocab(in); });
}

mm::VectorTable load_vectors(const std::string& path, std::size_t expected_dim) {
  auto t = with_file(path, [](std::istream& in) { return mm::read_vectors(in); });
  if (expected_dim && t.dim != expected_dim)
    throw data_error(path + ": vectors have dimension " + std::to_string(t.dim) + ", expected " +
                     std::to_string(expected_dim));
  return t;
}

// Segmentation file, flat or bracketed, as word -> forest.
std::unordered_map<mm::text, mm::MorphForest> load_segmentation(const std::string& path) {
  return with_file(path, [](std::istream& in) {
    std::unordered_map<mm::text, mm::MorphForest> out;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string_view line = mm::detail::strip_eol(raw);
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string_view::npos) throw mm::parse_error("expected word<TAB>segmentation", line_no);
      mm::MorphForest f;
      try {
        if (tab + 1 < line.size() && line[tab + 1] == '(') {
          f = mm::parse_hierarchical(line);
        } else {
          f.root.str = mm::from_utf8(line.substr(0, tab));
          std::istringstream ms{std::string(line.substr(tab + 1))};
          std::string m;
          mm::text spelled;
          while (ms >> m) {
            f.root.children.push_back({mm::from_utf8(m), false, {}});
            spelled += f.root.children.back().str;
          }
          if (spelled != f.root.str) throw mm::parse_error("segmentation does not spell the word");
          if (f.root.children.size() == 1) f.root.children.clear();
        }
      } catch (const mm::parse_error& e) {
        throw mm::parse_error(e.what(), line_no);
      }
      auto word = f.word();
      out.insert_or_assign(std::move(word), std::move(f));
    }
    return out;
  });
}

// Every node below the root of a hierarchy, fillers included.
std::vector<mm::text> all_granularities(const mm::MorphForest& f) {
  std::vector<mm::text> out;
  auto walk = [&](auto&& self, const mm::MorphNode& n) -> void {
    for (const auto& c : n.children) {
      out.push_back(c.str);
      self(self, c);
    }
  };
  walk(walk, f.root);
  if (out.empty()) out.push_back(f.word());
  return out;
}

// OOV vectors from a morpheme vector table: segment with the frozen
// vocabulary and sum the known pieces.
mm::OovFunction oov_from_tables(const mm::VectorTable& morph, const mm::MorphemeVocab& mv) {
  return [&morph, &mv](const mm::text& w) -> std::optional<std::vector<double>> {
    std::vector<double> v(morph.dim, 0.0);
    bool any = false;
    for (const auto& m : mm::segment_recursive(w, mv, false).flat_set()) {
      if (auto row = morph.find(m)) {
        for (std::size_t k = 0; k < morph.dim; ++k) v[k] += (*row)[k];
        any = true;
      }
    }
    if (!any) return std::nullopt;
    return v;
  };
}

// ---- commands ----------------------------------------------------------------

int cmd_mine(State& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto vocab = load_vocab(s, s.paths.vocab);
  log("words=" + std::to_string(vocab.size()));
  const auto mv = mm::mine_morphemes(vocab, s.cfg.pipeline.mining);
  Output out(s.paths.out);
  mm::write_morpheme_vocab(out.stream(), mv);
  log("morphemes=" + std::to_string(mv.size()));
  log("seconds=" + fixed(seconds_since(t0)));
  return 0;
}

int cmd_segment(State& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto vocab = load_vocab(s, s.paths.vocab);
  mm::MorphemeVocab mv = s.paths.morphemes.empty() ? mm::mine_morphemes(vocab, s.cfg.pipeline.mining)
                                                   : load_morphemes(s.paths.morphemes);
  log("words=" + std::to_string(vocab.size()) + " morphemes=" + std::to_string(mv.size()));
  const auto r = mm::run_pipeline(vocab, std::move(mv), s.cfg.pipeline);
  Output out(s.paths.out);
  for (const auto& f : r.forests)
    out.stream() << (s.hierarchical ? mm::format_hierarchical(f) : mm::format_flat(f)) << '\n';
  if (!s.paths.morphemes_out.empty()) {
    Output mo(s.paths.morphemes_out);
    mm::write_morpheme_vocab(mo.stream(), r.final_vocab);
  }
  log("refined_morphemes=" + std::to_string(r.final_vocab.size()) +
      " flagged=" + std::to_string(r.flagged_words));
  log("seconds=" + fixed(seconds_since(t0)));
  return 0;
}

int cmd_embed(State& s) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<mm::Sentence> corpus;
  with_file(s.paths.corpus, [&](std::istream& in) {
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      mm::text line;
      if (!mm::decode_utf8(mm::detail::strip_eol(raw), line)) throw mm::parse_error("invalid UTF-8", line_no);
      mm::Sentence sent;
      std::size_t i = 0;
      while (i < line.size()) {
        while (i < line.size() && mm::detail::is_space(line[i])) ++i;
        std::size_t j = i;
        while (j < line.size() && !mm::detail::is_space(line[j])) ++j;
        if (j > i) sent.push_back(mm::normalize(std::u32string_view(line).substr(i, j - i), s.cfg.normalization));
        i = j;
      }
      if (!sent.empty()) corpus.push_back(std::move(sent));
    }
    return 0;
  });
  if (corpus.empty()) throw data_error(s.paths.corpus + ": empty corpus");

  std::unordered_map<mm::text, mm::MorphForest> forests;
  if (!s.paths.segmentation.empty()) forests = load_segmentation(s.paths.segmentation);
  std::optional<mm::MorphemeVocab> mv;
  if (!s.paths.morphemes.empty()) mv = load_morphemes(s.paths.morphemes);

  const auto model = mm::train(corpus, forests, mv ? &*mv : nullptr, s.cfg.embedding);
  {
    Output out(s.paths.out);
    mm::write_vectors(out.stream(), mm::word_vectors(model));
  }
  if (!s.paths.morph_out.empty()) {
    Output out(s.paths.morph_out);
    mm::write_vectors(out.stream(), mm::morpheme_vectors(model));
  }
  log("words=" + std::to_string(model.word_count()) + " tokens=" + std::to_string(model.token_count()) +
      " dim=" + std::to_string(model.dim()));
  log("seconds=" + fixed(seconds_since(t0)));
  return 0;
}

int cmd_eval_seg(State& s) {
  std::optional<char32_t> delim;
  if (!s.enums.tag_delimiter.empty()) {
    const auto d = mm::from_utf8(s.enums.tag_delimiter);
    if (d.size() != 1) throw usage_error("--tag-delimiter must be a single character");
    delim = d[0];
  }
  const auto gold = with_file(s.paths.gold, [&](std::istream& in) { return mm::read_gold(in, delim); });
  const auto seg = load_segmentation(s.paths.pred);
  std::unordered_map<mm::text, std::vector<mm::text>> pred;
  for (const auto& [w, f] : seg) pred.emplace(w, s.cfg.include_all_granularities ? all_granularities(f) : f.leaves());
  const auto r = mm::seg_prf(pred, gold, s.cfg.averaging);
  Report rep;
  rep.add("precision", r.precision);
  rep.add("recall", r.recall);
  rep.add("f1", r.f1);
  rep.add("words", r.words);
  rep.emit(s.paths.out);
  return 0;
}

int cmd_eval_sim(State& s) {
  const auto table = load_vectors(s.paths.vectors, s.expected_dim);
  const auto pairs = with_file(s.paths.pairs, [](std::istream& in) { return mm::read_similarity(in); });
  std::optional<mm::VectorTable> morph;
  std::optional<mm::MorphemeVocab> mv;
  mm::OovFunction oov;
  if (!s.paths.morph_vectors.empty() && !s.paths.morphemes.empty()) {
    morph = load_vectors(s.paths.morph_vectors, table.dim);
    mv = load_morphemes(s.paths.morphemes);
    oov = oov_from_tables(*morph, *mv);
  }
  mm::SimilarityResult r;
  try {
    r = mm::spearman_eval(table, pairs, kOov.at(s.enums.oov), oov);
  } catch (const mm::contract_error& e) {
    throw data_error(e.what());
  }
  Report rep;
  rep.add("rho", r.rho);
  rep.add("used", r.used);
  rep.add("skipped", r.skipped);
  rep.emit(s.paths.out);
  return 0;
}

int cmd_eval_analogy(State& s) {
  const auto table = load_vectors(s.paths.vectors, s.expected_dim);
  const auto set = with_file(s.paths.questions, [](std::istream& in) { return mm::read_analogies(in); });
  std::optional<mm::VectorTable> morph;
  std::optional<mm::MorphemeVocab> mv;
  mm::OovFunction oov;
  if (!s.paths.morph_vectors.empty() && !s.paths.morphemes.empty()) {
    morph = load_vectors(s.paths.morph_vectors, table.dim);
    mv = load_morphemes(s.paths.morphemes);
    oov = oov_from_tables(*morph, *mv);
  }
  if (set.questions.empty()) throw data_error(s.paths.questions + ": no analogy questions");
  const auto r = mm::analogy_eval(table, set, oov);
  Report rep;
  rep.add("accuracy", r.accuracy);
  rep.add("correct", r.correct);
  rep.add("total", r.total);
  for (const auto& sec : r.sections)
    if (!sec.name.empty())
      rep.add("accuracy:" + sec.name, static_cast<double>(sec.correct) / static_cast<double>(sec.total));
  rep.emit(s.paths.out);
  return 0;
}

int cmd_stats(State& s) {
  const auto vocab = load_vocab(s, s.paths.vocab);
  const mm::EntropyTrie::Options topt{s.cfg.pipeline.mining.weighting, s.cfg.pipeline.mining.end_of_word};
  Report rep;
  rep.add("types", vocab.total_types());
  rep.add("tokens", vocab.total_tokens());
  rep.add("characters", vocab.char_count());
  rep.add("forward_trie_nodes", mm::EntropyTrie(vocab, mm::Direction::forward, topt).node_count());
  rep.add("reversed_trie_nodes", mm::EntropyTrie(vocab, mm::Direction::reversed, topt).node_count());
  if (!s.paths.morphemes.empty()) {
    const auto mv = load_morphemes(s.paths.morphemes);
    std::size_t p = 0, x = 0, r = 0;
    for (const auto& e : mv.entries()) {
      p += (e.classes & mm::kPrefix) != 0;
      x += (e.classes & mm::kSuffix) != 0;
      r += (e.classes & mm::kRoot) != 0;
    }
    rep.add("morphemes", mv.size());
    rep.add("prefixes", p);
    rep.add("suffixes", x);
    rep.add("roots", r);
  }
  rep.emit(s.paths.out);
  return 0;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const data_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }

  State s;
  CLI::App app{"Unsupervised morpheme mining, segmentation and morpheme-aware embeddings", "morphmine"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", "morphmine 1.0");

  auto* mine = app.add_subcommand("mine", "mine a morpheme vocabulary (TSV: morpheme, classes, count)");
  add_vocab_input(mine, s, true);
  add_mining(mine, s);
  mine->add_option("--out,-o", s.paths.out, "output file (default stdout)");
  add_common(mine, s);

  auto* segment = app.add_subcommand("segment", "segment every vocabulary word");
  add_vocab_input(segment, s, true);
  add_mining(segment, s);
  segment->add_option("--morphemes", s.paths.morphemes, "morpheme vocabulary from `mine` (mined on the fly if absent)");
  segment->add_option("--rounds", s.cfg.pipeline.rounds, "count refinement rounds after the first pass");
  segment->add_option("--prune-below", s.cfg.pipeline.prune_below, "drop morphemes used fewer times during refinement");
  segment->add_option("--max-segmentations", s.cfg.pipeline.max_segmentations, "cap on tied optimal candidates per string");
  segment->add_flag("--final-training,!--no-final-training", s.cfg.pipeline.final_training_mode,
                    toggle_help("exclude count-1 morphemes in the last pass too", s.cfg.pipeline.final_training_mode));
  segment->add_flag("--hierarchical", s.hierarchical, "bracketed hierarchy instead of the flat leaf partition");
  segment->add_option("--morphemes-out", s.paths.morphemes_out, "write the refined morpheme vocabulary here");
  segment->add_option("--out,-o", s.paths.out, "output file (default stdout)");
  add_common(segment, s);

  auto* embed = app.add_subcommand("embed", "train morpheme-aware skip-gram vectors");
  embed->add_option("--corpus", s.paths.corpus, "tokenized text, one sentence per line")->required();
  embed->add_option("--segmentation", s.paths.segmentation, "output of `segment` (flat or hierarchical)");
  embed->add_option("--morphemes", s.paths.morphemes, "morpheme vocabulary for words without a segmentation");
  embed->add_option("--out,-o", s.paths.out, "word vectors (default stdout)");
  embed->add_option("--morph-out", s.paths.morph_out, "morpheme vectors");
  embed->add_option("--dim", s.cfg.embedding.dim, "vector dimension");
  embed->add_option("--window", s.cfg.embedding.window, "maximum context window");
  embed->add_option("--negatives", s.cfg.embedding.negatives, "negative samples per context word");
  embed->add_option("--lr", s.cfg.embedding.learning_rate, "initial learning rate");
  embed->add_option("--epochs", s.cfg.embedding.epochs, "passes over the corpus");
  embed->add_flag("--case-fold,!--no-case-fold", s.cfg.normalization.case_fold,
                  toggle_help("Unicode case folding", s.cfg.normalization.case_fold));
  embed->add_flag("--compose,!--no-compose", s.cfg.normalization.compose,
                  toggle_help("canonical composition (NFC)", s.cfg.normalization.compose));
  add_common(embed, s);

  auto* eval_seg = app.add_subcommand("eval-seg", "precision, recall and F1 of a segmentation against gold");
  eval_seg->add_option("--gold", s.paths.gold, "gold file: word[TAB]alt1, alt2, ...")->required();
  eval_seg->add_option("--pred", s.paths.pred, "predicted segmentation (flat or hierarchical)")->required();
  eval_seg->add_flag("--all-granularities", s.cfg.include_all_granularities, "score every hierarchy node");
  eval_seg->add_option("--averaging", s.enums.averaging, "micro or macro")->check(CLI::IsMember({"micro", "macro"}));
  eval_seg->add_option("--tag-delimiter", s.enums.tag_delimiter, "cut gold morphemes at this character (empty: off)");
  eval_seg->add_option("--out,-o", s.paths.out, "output file (default stdout)");
  add_common(eval_seg, s);

  auto* eval_sim = app.add_subcommand("eval-sim", "Spearman correlation with human similarity scores");
  auto* eval_an = app.add_subcommand("eval-analogy", "3CosAdd analogy accuracy");
  for (auto* cmd : {eval_sim, eval_an}) {
    cmd->add_option("--vectors", s.paths.vectors, "word vector file")->required();
    cmd->add_option("--dim", s.expected_dim, "expected vector dimension (0: accept the file's)");
    cmd->add_option("--morph-vectors", s.paths.morph_vectors, "morpheme vectors for out-of-vocabulary words");
    cmd->add_option("--morphemes", s.paths.morphemes, "morpheme vocabulary for out-of-vocabulary words");
    cmd->add_option("--out,-o", s.paths.out, "output file (default stdout)");
    add_common(cmd, s);
  }
  eval_sim->add_option("--pairs", s.paths.pairs, "word_a[TAB]word_b[TAB]score")->required();
  eval_sim->add_option("--oov", s.enums.oov, "infer or skip unseen words")->check(CLI::IsMember({"infer", "skip"}));
  eval_an->add_option("--questions", s.paths.questions, "a b c d per line, `: name` opens a section")->required();

  auto* stats = app.add_subcommand("stats", "vocabulary and morpheme inventory statistics");
  add_vocab_input(stats, s, true);
  stats->add_option("--weighting", s.enums.weighting, "count words by type or by token frequency")
      ->check(CLI::IsMember({"type", "token"}));
  stats->add_flag("--end-of-word,!--no-end-of-word", s.cfg.pipeline.mining.end_of_word,
                  toggle_help("word end counts as a trie continuation", s.cfg.pipeline.mining.end_of_word));
  stats->add_option("--morphemes", s.paths.morphemes, "morpheme vocabulary to summarize");
  stats->add_option("--out,-o", s.paths.out, "output file (default stdout)");
  add_common(stats, s);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  resolve_enums(s);
  if (const auto errors = mm::validate(s.cfg); !errors.empty()) {
    for (const auto& e : errors) std::cerr << "error: " << e << '\n';
    return kUsageError;
  }

  try {
    if (*mine) return cmd_mine(s);
    if (*segment) return cmd_segment(s);
    if (*embed) return cmd_embed(s);
    if (*eval_seg) return cmd_eval_seg(s);
    if (*eval_sim) return cmd_eval_sim(s);
    if (*eval_an) return cmd_eval_analogy(s);
    if (*stats) return cmd_stats(s);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const data_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const mm::parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
