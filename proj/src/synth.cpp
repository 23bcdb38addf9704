#include "crfae/synth.hpp"

#include <ostream>
#include <random>
#include <stdexcept>

namespace crfae {

namespace {

struct Node {
  int tag;
  std::vector<int> left, right;  // child node ids, nearest first
};

class Sampler {
 public:
  Sampler(const PlantedGrammar& g, std::uint64_t seed) : g_(g), rng_(seed) {}

  // Returns (tags, heads) in surface order.
  std::pair<std::vector<int>, std::vector<int>> sample() {
    nodes_.clear();
    grow(0);
    std::vector<int> order;
    linearize(0, order);
    std::vector<int> position(nodes_.size());
    for (std::size_t p = 0; p < order.size(); ++p) position[order[p]] = static_cast<int>(p) + 1;
    std::vector<int> tags(order.size()), heads(order.size(), 0);
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
      tags[position[id] - 1] = nodes_[id].tag;
      for (int c : nodes_[id].left) heads[position[c] - 1] = position[id];
      for (int c : nodes_[id].right) heads[position[c] - 1] = position[id];
    }
    return {tags, heads};
  }

 private:
  int grow(int tag) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({tag, {}, {}});
    for (int c = 2 * tag + 1; c <= 2 * tag + 2 && c < g_.num_tags; ++c) {
      int copies = 0;
      while (copies < 2 && unit_(rng_) < g_.attach_prob) ++copies;
      for (int k = 0; k < copies; ++k) {
        const int child = grow(c);
        (PlantedGrammar::attaches_left(c) ? nodes_[id].left : nodes_[id].right).push_back(child);
      }
    }
    return id;
  }

  void linearize(int id, std::vector<int>& out) const {
    const Node& n = nodes_[id];
    for (auto it = n.left.rbegin(); it != n.left.rend(); ++it) linearize(*it, out);
    out.push_back(id);
    for (int c : n.right) linearize(c, out);
  }

  const PlantedGrammar& g_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::vector<Node> nodes_;
};

}  // namespace

PriorRules PlantedGrammar::rules() const {
  std::set<PriorRules::Rule> r;
  for (int c = 1; c < num_tags; ++c) r.emplace(tag(parent(c)), tag(c));
  return PriorRules(std::move(r));
}

void write_synthetic(std::ostream& out, const SynthOptions& opts) {
  if (opts.grammar.num_tags < 1) throw std::invalid_argument("need at least one tag");
  if (opts.sentences < 1) throw std::invalid_argument("need at least one sentence");
  if (opts.max_len < 1) throw std::invalid_argument("max length must be >= 1");
  if (!(opts.grammar.attach_prob >= 0 && opts.grammar.attach_prob < 1))
    throw std::invalid_argument("attach probability must be in [0, 1)");

  Sampler sampler(opts.grammar, opts.seed);
  for (int k = 0; k < opts.sentences; ++k) {
    auto [tags, heads] = sampler.sample();
    while (static_cast<int>(tags.size()) > opts.max_len) std::tie(tags, heads) = sampler.sample();
    out << "# sent_id = synth-" << k + 1 << '\n';
    for (std::size_t p = 0; p < tags.size(); ++p) {
      const std::string t = PlantedGrammar::tag(tags[p]);
      out << p + 1 << "\tw" << tags[p] << "\t_\t" << t << '\t' << t << "\t_\t" << heads[p]
          << "\tdep\t_\t_\n";
    }
    out << '\n';
  }
}

}  // namespace crfae
