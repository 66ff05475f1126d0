#pragma once

#include "morphmine/candidates.hpp"
#include "morphmine/config.hpp"
#include "morphmine/embed.hpp"
#include "morphmine/error.hpp"
#include "morphmine/eval.hpp"
#include "morphmine/pipeline.hpp"
#include "morphmine/segmenter.hpp"
#include "morphmine/trie.hpp"
#include "morphmine/unicode.hpp"
#include "morphmine/vocab.hpp"
