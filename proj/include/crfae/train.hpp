#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "crfae/corpus.hpp"
#include "crfae/features.hpp"
#include "crfae/model.hpp"

namespace crfae {

// A training corpus with its frozen feature index, per-sentence feature
// caches and compiled prior rules.
struct TrainingData {
  Treebank treebank;
  FeatureIndex index;
  std::vector<SentenceFeatures> features;
  RuleTable rules;

  static TrainingData prepare(Treebank tb, const PriorRules& prior, const TagMap& tag_map);
  static TrainingData prepare(Treebank tb, FeatureIndex index, RuleTable rules);

  std::size_t size() const { return treebank.size(); }
};

struct TrainState {
  EncoderWeights weights;
  DecoderTable decoder;
  int round = 0;
  std::int64_t epochs = 0;  // completed SGD epochs, seeds the next shuffle
  std::vector<double> objective_history;
  std::uint64_t rng_seed = 0;
};

// (feature id, value) pairs sorted by id.
using SparseGradient = std::vector<std::pair<int, double>>;

ArcScorer scorer(const TrainingData& data, const TrainState& state, const Hyperparams& hp);

// Viterbi: -sum log max_y P(x,y|x) Q^alpha(x,y) + lambda |w|_1.
// Soft:    -sum log sum_y P(x,y|x) Q^alpha(x,y) + lambda |w|_1.
double objective(const TrainingData& data, const TrainState& state, const Hyperparams& hp);

// Per-arc coefficient of the sentence gradient: target(i,j) - mu(i,j), where
// mu are encoder-only marginals and the target is the indicator of the best
// tree under the full potentials (Viterbi) or the joint marginals (soft).
ArcMatrixd arc_coefficients(const TrainingData& data, std::size_t sentence,
                            const TrainState& state, const Hyperparams& hp);

// Gradient of the sentence log-likelihood term with respect to w (the loss
// gradient is its negation).  Viterbi: f(y*) - E_enc[f], with y* decoded
// under the full potentials.  Soft: E_joint[f] - E_enc[f].  Every feature
// of every candidate arc appears, zeros included.
SparseGradient grad_w_sentence(const TrainingData& data, std::size_t sentence,
                               const TrainState& state, const Hyperparams& hp);

// One seeded-shuffle pass of AdaGrad steps with an L1 proximal shrink on the
// touched coordinates.  Throws if a weight becomes non-finite.
void sgd_epoch(const TrainingData& data, TrainState& state, const Hyperparams& hp);

// Maximum-likelihood decoder from fixed trees with additive smoothing.
DecoderTable decoder_mle(const Treebank& tb, std::span<const ParseTree> trees, double eps);

// Head-tag/child-tag counts from the best parses (or from joint arc
// marginals for the soft objective), smoothed and row-normalized.
DecoderTable viterbi_em_theta(const TrainingData& data, const TrainState& state,
                              const Hyperparams& hp);

// Harmonic soft counts for theta, w = 0.
TrainState informed_init(const TrainingData& data, const Hyperparams& hp);

struct RoundLog {
  int round;
  double objective;
  double seconds;
};

TrainState coordinate_descent(const TrainingData& data, const Hyperparams& hp,
                              const std::function<void(const RoundLog&)>& on_round = {});

std::vector<ParseTree> parse_all(const TrainingData& data, const TrainState& state,
                                 const Hyperparams& hp, TreeSpace space);

}  // namespace crfae
