#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "crfae/arc_matrix.hpp"
#include "crfae/corpus.hpp"
#include "crfae/features.hpp"
#include "crfae/trees.hpp"

namespace crfae {

// Encoder weights w and their AdaGrad squared-gradient accumulators.
struct EncoderWeights {
  Eigen::VectorXd w;
  Eigen::VectorXd adagrad_accum;

  EncoderWeights() = default;
  explicit EncoderWeights(int size)
      : w(Eigen::VectorXd::Zero(size)), adagrad_accum(Eigen::VectorXd::Zero(size)) {}

  int size() const { return static_cast<int>(w.size()); }
  bool all_finite() const { return w.allFinite() && adagrad_accum.allFinite(); }
};

double encoder_score(const EncoderWeights& wts, const ArcFeatures& feats);

// Reconstruction probabilities theta(head tag, child tag); rows cover the
// whole vocabulary including ROOT, each a distribution over child tags.
class DecoderTable {
 public:
  DecoderTable() = default;

  static DecoderTable uniform(int vocab_size);
  // Adds eps to every cell and normalizes rows.
  static DecoderTable from_counts(const Eigen::MatrixXd& counts, double eps);
  // Validates row sums and positivity; throws on violation.
  static DecoderTable from_probabilities(Eigen::MatrixXd theta);

  double prob(int head_tag, int child_tag) const { return theta_(head_tag, child_tag); }
  double log_prob(int head_tag, int child_tag) const { return log_theta_(head_tag, child_tag); }
  const Eigen::MatrixXd& theta() const { return theta_; }
  int vocab_size() const { return static_cast<int>(theta_.rows()); }

  void check_invariants() const;

 private:
  explicit DecoderTable(Eigen::MatrixXd theta);

  Eigen::MatrixXd theta_;
  Eigen::MatrixXd log_theta_;
};

// Head -> child category pairs rewarded by the prior factor.
class PriorRules {
 public:
  using Rule = std::pair<std::string, std::string>;

  PriorRules() = default;
  explicit PriorRules(std::set<Rule> rules) : rules_(std::move(rules)) {}

  // VERB->VERB, NOUN->NOUN, VERB->NOUN, NOUN->ADJ, VERB->PRON, NOUN->DET,
  // VERB->ADV, NOUN->NUM, VERB->ADP, NOUN->CONJ, ADJ->ADV, ADP->NOUN.
  static PriorRules builtin();
  // "HEAD CHILD" per line; blank lines and '#' comments ignored.
  static PriorRules parse(std::istream& in, const std::string& name = "rules");
  static PriorRules load(const std::filesystem::path& path);

  bool contains(const std::string& head, const std::string& child) const {
    return rules_.contains({head, child});
  }
  const std::set<Rule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }

  bool operator==(const PriorRules&) const = default;

 private:
  std::set<Rule> rules_;
};

// Corpus tag -> universal category, used only for prior rule matching.
// Unmapped tags match as themselves.
struct TagMap {
  std::map<std::string, std::string> mapping;

  const std::string& category(const std::string& tag) const;

  // "TAG CATEGORY" per line (whitespace separated).
  static TagMap parse(std::istream& in, const std::string& name = "tag map");
  static TagMap load(const std::filesystem::path& path);

  bool operator==(const TagMap&) const = default;
};

// Boolean (head tag, child tag) table compiled from rules and a tag map.
// The ROOT row never fires.
class RuleTable {
 public:
  RuleTable() = default;
  RuleTable(const PriorRules& rules, const TagMap& map, const TagVocab& vocab);

  bool fires(int head_tag, int child_tag) const {
    return table_.size() && table_(head_tag, child_tag);
  }

 private:
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> table_;
};

enum class Objective { viterbi, soft };

struct Hyperparams {
  double lambda = 1e-4;
  double alpha = 1.0;
  double learning_rate = 0.1;
  double smoothing_eps = 0.1;
  int rounds = 20;
  int sgd_epochs = 2;
  int em_iters = 2;
  std::uint64_t seed = 0;
  Objective objective = Objective::viterbi;
  TreeSpace space = TreeSpace::projective;

  // Throws std::invalid_argument naming the first out-of-range field.
  void validate() const;
};

// What a potential matrix includes: the encoder score alone (feeds Z and
// the marginals) or encoder + log theta + alpha * rule (feeds decoding).
enum class Potentials { encoder_only, full };

struct ArcScorer {
  const EncoderWeights& weights;
  const DecoderTable& decoder;
  const RuleTable& rules;
  double alpha;
};

double arc_potential(const Sentence& sent, const SentenceFeatures& feats, int head, int child,
                     const ArcScorer& scorer);

ArcMatrixd potential_matrix(const Sentence& sent, const SentenceFeatures& feats,
                            const ArcScorer& scorer, Potentials include);

// Number of tree arcs whose (head tag, child tag) fires a rule.
int rule_count(const Sentence& sent, const ParseTree& tree, const RuleTable& rules);

}  // namespace crfae
