#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "morphmine/candidates.hpp"
#include "morphmine/embed.hpp"
#include "morphmine/eval.hpp"
#include "morphmine/pipeline.hpp"
#include "morphmine/unicode.hpp"
#include "morphmine/vocab.hpp"

namespace morphmine {

// Every tunable of the toolkit in one place.
struct Config {
  InputMode input_mode = InputMode::word_list;
  NormalizationPolicy normalization;
  PipelineConfig pipeline;  // includes mining thresholds
  EmbeddingHyper embedding;
  bool include_all_granularities = false;  // eval-seg: score every hierarchy node, not leaves
  Averaging averaging = Averaging::micro;
  unsigned threads = 1;
  uint64_t seed = 42;
};

// All problems found, not just the first.
inline std::vector<std::string> validate(const Config& c) {
  std::vector<std::string> errors;
  const auto& m = c.pipeline.mining;
  if (m.min_support < 1) errors.push_back("min-support must be >= 1");
  if (m.min_root_len < 1) errors.push_back("min-root-len must be >= 1");
  if (m.min_affix_len < 1) errors.push_back("min-affix-len must be >= 1");
  if (c.pipeline.prune_below < 1) errors.push_back("prune-below must be >= 1");
  if (c.pipeline.max_segmentations < 1) errors.push_back("max-segmentations must be >= 1");
  const auto& e = c.embedding;
  if (e.dim < 1) errors.push_back("dim must be >= 1");
  if (e.window < 1) errors.push_back("window must be >= 1");
  if (e.epochs < 1) errors.push_back("epochs must be >= 1");
  if (!std::isfinite(e.learning_rate) || e.learning_rate < 0.0) errors.push_back("lr must be a finite value >= 0");
  if (c.threads < 1) errors.push_back("threads must be >= 1");
  return errors;
}

}  // namespace morphmine
