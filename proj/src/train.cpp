#include "crfae/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "crfae/decode.hpp"
#include "crfae/inference.hpp"

namespace crfae {

namespace {

constexpr double kAdagradDelta = 1e-6;

double log_partition(const ArcMatrixd& pot, TreeSpace space) {
  return space == TreeSpace::projective ? log_partition_projective(pot)
                                        : log_partition_nonprojective(pot);
}

ArcMatrixd arc_marginals(const ArcMatrixd& pot, TreeSpace space) {
  return space == TreeSpace::projective ? arc_marginals_projective(pot)
                                        : arc_marginals_nonprojective(pot);
}

int tag_of(const Sentence& s, int position) {
  return position == 0 ? TagVocab::kRoot : s.tags[position - 1];
}

}  // namespace

TrainingData TrainingData::prepare(Treebank tb, const PriorRules& prior, const TagMap& tag_map) {
  FeatureIndex index = build_index(tb);
  RuleTable rules(prior, tag_map, tb.vocab);
  return prepare(std::move(tb), std::move(index), std::move(rules));
}

TrainingData TrainingData::prepare(Treebank tb, FeatureIndex index, RuleTable rules) {
  TrainingData d{std::move(tb), std::move(index), {}, std::move(rules)};
  d.features.reserve(d.treebank.size());
  for (const auto& s : d.treebank.sentences)
    d.features.emplace_back(s, d.treebank.vocab, d.index);
  return d;
}

ArcScorer scorer(const TrainingData& data, const TrainState& state, const Hyperparams& hp) {
  return ArcScorer{state.weights, state.decoder, data.rules, hp.alpha};
}

double objective(const TrainingData& data, const TrainState& state, const Hyperparams& hp) {
  const ArcScorer sc = scorer(data, state, hp);
  double total = 0;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const Sentence& s = data.treebank.sentences[k];
    const SentenceFeatures& f = data.features[k];
    const ArcMatrixd enc = potential_matrix(s, f, sc, Potentials::encoder_only);
    const ArcMatrixd full = potential_matrix(s, f, sc, Potentials::full);
    const double log_z = log_partition(enc, hp.space);
    if (hp.objective == Objective::soft) {
      total -= log_partition(full, hp.space) - log_z;
    } else {
      // full tree score = phi(y*) + sum log theta + alpha * rule count
      total -= decode(full, hp.space).score - log_z;
    }
  }
  return total + hp.lambda * state.weights.w.lpNorm<1>();
}

ArcMatrixd arc_coefficients(const TrainingData& data, std::size_t sentence,
                            const TrainState& state, const Hyperparams& hp) {
  const Sentence& s = data.treebank.sentences.at(sentence);
  const SentenceFeatures& f = data.features[sentence];
  const ArcScorer sc = scorer(data, state, hp);
  const int n = s.size();

  const ArcMatrixd mu = arc_marginals(potential_matrix(s, f, sc, Potentials::encoder_only),
                                      hp.space);
  const ArcMatrixd full = potential_matrix(s, f, sc, Potentials::full);
  if (hp.objective == Objective::soft) return arc_marginals(full, hp.space) - mu;

  ArcMatrixd target = ArcMatrixd::Zero(n + 1, n);
  const ParseTree best = decode(full, hp.space).tree;
  for (int j = 1; j <= n; ++j) target(best.head(j), j - 1) = 1.0;
  return target - mu;
}

SparseGradient grad_w_sentence(const TrainingData& data, std::size_t sentence,
                               const TrainState& state, const Hyperparams& hp) {
  const SentenceFeatures& f = data.features.at(sentence);
  const int n = f.size();
  const ArcMatrixd coef = arc_coefficients(data, sentence, state, hp);

  std::unordered_map<int, double> acc;
  for (int i = 0; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      for (int id : f.at(i, j).ids) acc[id] += coef(i, j - 1);
    }
  }
  SparseGradient g(acc.begin(), acc.end());
  std::sort(g.begin(), g.end());
  return g;
}

void sgd_epoch(const TrainingData& data, TrainState& state, const Hyperparams& hp) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::seed_seq seq{static_cast<std::uint32_t>(state.rng_seed),
                    static_cast<std::uint32_t>(state.rng_seed >> 32),
                    static_cast<std::uint32_t>(state.epochs)};
  std::mt19937_64 rng(seq);
  std::shuffle(order.begin(), order.end(), rng);

  // The corpus-level L1 term is spread evenly over the per-sentence steps.
  const double l1 = hp.lambda / static_cast<double>(data.size());
  auto& w = state.weights.w;
  auto& accum = state.weights.adagrad_accum;
  for (std::size_t k : order) {
    for (const auto& [id, loglik_grad] : grad_w_sentence(data, k, state, hp)) {
      const double g = -loglik_grad;
      accum[id] += g * g;
      const double rate = hp.learning_rate / (kAdagradDelta + std::sqrt(accum[id]));
      const double stepped = w[id] - rate * g;
      const double shrink = rate * l1;
      w[id] = std::copysign(std::max(std::abs(stepped) - shrink, 0.0), stepped);
      if (!std::isfinite(w[id]))
        throw std::runtime_error("non-finite weight for feature " + data.index.name(id) +
                                 " in sentence " + data.treebank.sentences[k].source);
    }
  }
  ++state.epochs;
}

DecoderTable decoder_mle(const Treebank& tb, std::span<const ParseTree> trees, double eps) {
  if (trees.size() != tb.size()) throw std::invalid_argument("one tree per sentence required");
  const int v = tb.vocab.size();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(v, v);
  for (std::size_t k = 0; k < tb.size(); ++k) {
    const Sentence& s = tb.sentences[k];
    for (int j = 1; j <= s.size(); ++j) counts(tag_of(s, trees[k].head(j)), tag_of(s, j)) += 1;
  }
  return DecoderTable::from_counts(counts, eps);
}

DecoderTable viterbi_em_theta(const TrainingData& data, const TrainState& state,
                              const Hyperparams& hp) {
  if (hp.objective == Objective::viterbi)
    return decoder_mle(data.treebank, parse_all(data, state, hp, hp.space), hp.smoothing_eps);

  const int v = data.treebank.vocab.size();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(v, v);
  const ArcScorer sc = scorer(data, state, hp);
  for (std::size_t k = 0; k < data.size(); ++k) {
    const Sentence& s = data.treebank.sentences[k];
    const ArcMatrixd mu =
        arc_marginals(potential_matrix(s, data.features[k], sc, Potentials::full), hp.space);
    for (int i = 0; i <= s.size(); ++i)
      for (int j = 1; j <= s.size(); ++j)
        if (i != j) counts(tag_of(s, i), tag_of(s, j)) += mu(i, j - 1);
  }
  return DecoderTable::from_counts(counts, hp.smoothing_eps);
}

TrainState informed_init(const TrainingData& data, const Hyperparams& hp) {
  const int v = data.treebank.vocab.size();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(v, v);
  for (const auto& s : data.treebank.sentences) {
    const int n = s.size();
    Eigen::VectorXd weight(n + 1);
    for (int j = 1; j <= n; ++j) {
      for (int i = 0; i <= n; ++i)
        weight[i] = i == j ? 0.0 : i == 0 ? 1.0 / (n + 1) : 1.0 / std::abs(i - j);
      weight /= weight.sum();
      for (int i = 0; i <= n; ++i)
        if (i != j) counts(tag_of(s, i), tag_of(s, j)) += weight[i];
    }
  }
  TrainState state;
  state.weights = EncoderWeights(data.index.size());
  state.decoder = DecoderTable::from_counts(counts, hp.smoothing_eps);
  state.rng_seed = hp.seed;
  return state;
}

TrainState coordinate_descent(const TrainingData& data, const Hyperparams& hp,
                              const std::function<void(const RoundLog&)>& on_round) {
  hp.validate();
  TrainState state = informed_init(data, hp);
  for (int r = 0; r < hp.rounds; ++r) {
    const auto start = std::chrono::steady_clock::now();
    for (int e = 0; e < hp.sgd_epochs; ++e) sgd_epoch(data, state, hp);
    for (int e = 0; e < hp.em_iters; ++e) state.decoder = viterbi_em_theta(data, state, hp);
    state.round = r + 1;
    const double obj = objective(data, state, hp);
    if (!std::isfinite(obj)) throw std::runtime_error("objective became non-finite");
    state.objective_history.push_back(obj);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    if (on_round) on_round({state.round, obj, elapsed.count()});
  }
  return state;
}

std::vector<ParseTree> parse_all(const TrainingData& data, const TrainState& state,
                                 const Hyperparams& hp, TreeSpace space) {
  const ArcScorer sc = scorer(data, state, hp);
  std::vector<ParseTree> out;
  out.reserve(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    const Sentence& s = data.treebank.sentences[k];
    out.push_back(decode(potential_matrix(s, data.features[k], sc, Potentials::full), space).tree);
  }
  return out;
}

}  // namespace crfae
