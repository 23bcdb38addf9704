#include "crfae/model.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace crfae {

double encoder_score(const EncoderWeights& wts, const ArcFeatures& feats) {
  double s = 0;
  for (int id : feats.ids) s += wts.w[id];
  return s;
}

DecoderTable::DecoderTable(Eigen::MatrixXd theta)
    : theta_(std::move(theta)), log_theta_(theta_.array().log().matrix()) {}

DecoderTable DecoderTable::uniform(int vocab_size) {
  if (vocab_size < 1) throw std::invalid_argument("empty vocabulary");
  return DecoderTable(Eigen::MatrixXd::Constant(vocab_size, vocab_size, 1.0 / vocab_size));
}

DecoderTable DecoderTable::from_counts(const Eigen::MatrixXd& counts, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("smoothing must be positive");
  if (counts.rows() != counts.cols() || counts.rows() == 0)
    throw std::invalid_argument("count table must be square and non-empty");
  Eigen::MatrixXd theta = counts.array() + eps;
  theta.array().colwise() /= theta.rowwise().sum().array();
  DecoderTable t(std::move(theta));
  t.check_invariants();
  return t;
}

DecoderTable DecoderTable::from_probabilities(Eigen::MatrixXd theta) {
  DecoderTable t(std::move(theta));
  t.check_invariants();
  return t;
}

void DecoderTable::check_invariants() const {
  if (theta_.rows() != theta_.cols()) throw std::logic_error("decoder table not square");
  for (Eigen::Index r = 0; r < theta_.rows(); ++r) {
    if (std::abs(theta_.row(r).sum() - 1.0) > 1e-9)
      throw std::logic_error("decoder row " + std::to_string(r) + " does not sum to 1");
    if ((theta_.row(r).array() <= 0).any() || !theta_.row(r).allFinite())
      throw std::logic_error("decoder row " + std::to_string(r) + " has a non-positive entry");
  }
}

PriorRules PriorRules::builtin() {
  return PriorRules({
      {"VERB", "VERB"}, {"NOUN", "NOUN"}, {"VERB", "NOUN"}, {"NOUN", "ADJ"},
      {"VERB", "PRON"}, {"NOUN", "DET"},  {"VERB", "ADV"},  {"NOUN", "NUM"},
      {"VERB", "ADP"},  {"NOUN", "CONJ"}, {"ADJ", "ADV"},   {"ADP", "NOUN"},
  });
}

namespace {

// Two whitespace-separated fields per non-comment line.
std::vector<std::pair<std::string, std::string>> read_pairs(std::istream& in,
                                                            const std::string& name) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    if (!(fields >> b) || (fields >> extra))
      throw DataError(name + ":" + std::to_string(line_no) + ": expected two fields");
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

}  // namespace

PriorRules PriorRules::parse(std::istream& in, const std::string& name) {
  std::set<Rule> rules;
  for (auto& p : read_pairs(in, name)) rules.insert(std::move(p));
  return PriorRules(std::move(rules));
}

PriorRules PriorRules::load(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse(in, path.string());
}

const std::string& TagMap::category(const std::string& tag) const {
  if (auto it = mapping.find(tag); it != mapping.end()) return it->second;
  return tag;
}

TagMap TagMap::parse(std::istream& in, const std::string& name) {
  TagMap m;
  for (auto& [tag, cat] : read_pairs(in, name)) m.mapping[tag] = cat;
  return m;
}

TagMap TagMap::load(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse(in, path.string());
}

RuleTable::RuleTable(const PriorRules& rules, const TagMap& map, const TagVocab& vocab) {
  const int v = vocab.size();
  table_.setConstant(v, v, false);
  for (int h = TagVocab::kNumReserved; h < v; ++h)
    for (int c = TagVocab::kNumReserved; c < v; ++c)
      table_(h, c) = rules.contains(map.category(vocab.tag(h)), map.category(vocab.tag(c)));
}

void Hyperparams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (!(lambda >= 0) || !std::isfinite(lambda)) fail("lambda must be >= 0");
  if (!(alpha >= 0) || !std::isfinite(alpha)) fail("alpha must be >= 0");
  if (!(learning_rate > 0) || !std::isfinite(learning_rate)) fail("learning rate must be > 0");
  if (!(smoothing_eps > 0) || !std::isfinite(smoothing_eps)) fail("smoothing must be > 0");
  if (rounds < 0) fail("rounds must be >= 0");
  if (sgd_epochs < 1) fail("sgd epochs must be >= 1");
  if (em_iters < 1) fail("em iterations must be >= 1");
}

double arc_potential(const Sentence& sent, const SentenceFeatures& feats, int head, int child,
                     const ArcScorer& scorer) {
  if (head == child) throw std::invalid_argument("self-loop arc");
  const int ht = head == 0 ? TagVocab::kRoot : sent.tags[head - 1];
  const int ct = sent.tags[child - 1];
  const double log_theta = scorer.decoder.log_prob(ht, ct);
  if (!std::isfinite(log_theta))
    throw std::logic_error("decoder probability is zero for an arc");
  double p = encoder_score(scorer.weights, feats.at(head, child)) + log_theta;
  if (scorer.alpha != 0 && scorer.rules.fires(ht, ct)) p += scorer.alpha;
  return p;
}

ArcMatrixd potential_matrix(const Sentence& sent, const SentenceFeatures& feats,
                            const ArcScorer& scorer, Potentials include) {
  const int n = sent.size();
  ArcMatrixd pot(n + 1, n);
  for (int i = 0; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i == j) {
        pot(i, j - 1) = neg_inf<double>();
      } else if (include == Potentials::full) {
        pot(i, j - 1) = arc_potential(sent, feats, i, j, scorer);
      } else {
        pot(i, j - 1) = encoder_score(scorer.weights, feats.at(i, j));
      }
    }
  }
  return pot;
}

int rule_count(const Sentence& sent, const ParseTree& tree, const RuleTable& rules) {
  int count = 0;
  for (int j = 1; j <= tree.size(); ++j) {
    const int h = tree.head(j);
    if (h != 0 && rules.fires(sent.tags[h - 1], sent.tags[j - 1])) ++count;
  }
  return count;
}

}  // namespace crfae
