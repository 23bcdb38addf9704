#pragma once

#include <functional>
#include <span>
#include <vector>

#include "crfae/model_file.hpp"
#include "crfae/train.hpp"

namespace crfae {

// Coordinate descent from the informed initialization over an already
// length-filtered treebank.
Model train_model(const Treebank& tb, const Hyperparams& hp, const PriorRules& prior,
                  const TagMap& tag_map,
                  const std::function<void(const RoundLog&)>& on_round = {},
                  std::vector<double>* objective_history = nullptr);

// Best trees for a corpus read with its own vocabulary.  Tags the model
// never saw are parsed as UNK and counted in *unknown_tokens.
std::vector<ParseTree> parse_with_model(const Model& model, const Treebank& tb, TreeSpace space,
                                        int* unknown_tokens = nullptr);

struct GridTrial {
  Hyperparams hp;
  double dev_accuracy;
};

struct GridSearchResult {
  std::vector<GridTrial> trials;
  std::size_t best = 0;  // highest dev accuracy, earliest candidate on ties

  const Hyperparams& best_hp() const { return trials.at(best).hp; }
};

// Trains one model per candidate on `train` and scores its parses of `dev`
// against the dev gold trees (all-lengths accuracy).
GridSearchResult grid_search(const Treebank& train, const Treebank& dev,
                             std::span<const Hyperparams> candidates, const PriorRules& prior,
                             const TagMap& tag_map);

}  // namespace crfae
