#pragma once

#include <optional>
#include <span>
#include <string>

#include "crfae/corpus.hpp"
#include "crfae/trees.hpp"

namespace crfae {

struct RegimeScore {
  long correct = 0;
  long total = 0;

  double accuracy() const { return static_cast<double>(correct) / static_cast<double>(total); }
};

// Micro-averaged directed dependency accuracy.  `short_sentences` covers
// sentences with at most `short_length` scored tokens and is empty when no
// such sentence has a scored token.
struct EvalReport {
  int short_length = 10;
  std::optional<RegimeScore> short_sentences;
  RegimeScore all;
  int skipped = 0;  // sentences without a usable gold tree

  std::string table() const;
  std::string json() const;
};

// Throws DataError when the corpora are misaligned (sentence count or
// per-sentence length), or when nothing is scorable.
EvalReport directed_accuracy(const Treebank& gold, std::span<const ParseTree> pred,
                             int short_length = 10);

}  // namespace crfae
