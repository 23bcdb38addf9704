#include "crfae/pipeline.hpp"

#include <stdexcept>

#include "crfae/eval.hpp"

namespace crfae {

Model train_model(const Treebank& tb, const Hyperparams& hp, const PriorRules& prior,
                  const TagMap& tag_map, const std::function<void(const RoundLog&)>& on_round,
                  std::vector<double>* objective_history) {
  TrainingData data = TrainingData::prepare(tb, prior, tag_map);
  TrainState state = coordinate_descent(data, hp, on_round);
  if (objective_history) *objective_history = state.objective_history;
  return Model{data.treebank.vocab,
               std::move(data.index),
               std::move(state.weights),
               std::move(state.decoder),
               prior,
               tag_map,
               hp};
}

std::vector<ParseTree> parse_with_model(const Model& model, const Treebank& tb, TreeSpace space,
                                        int* unknown_tokens) {
  Treebank local = rebase(tb, model.vocab, unknown_tokens);
  const TrainingData data = TrainingData::prepare(std::move(local), model.index,
                                                  model.rule_table());
  TrainState state;
  state.weights = model.weights;
  state.decoder = model.decoder;
  return parse_all(data, state, model.hp, space);
}

GridSearchResult grid_search(const Treebank& train, const Treebank& dev,
                             std::span<const Hyperparams> candidates, const PriorRules& prior,
                             const TagMap& tag_map) {
  if (candidates.empty()) throw std::invalid_argument("empty hyperparameter grid");
  GridSearchResult result;
  for (const Hyperparams& hp : candidates) {
    const Model model = train_model(train, hp, prior, tag_map);
    const auto trees = parse_with_model(model, dev, hp.space);
    const double acc = directed_accuracy(dev, trees).all.accuracy();
    if (result.trials.empty() || acc > result.trials[result.best].dev_accuracy)
      result.best = result.trials.size();
    result.trials.push_back({hp, acc});
  }
  return result;
}

}  // namespace crfae
