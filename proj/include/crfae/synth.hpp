#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "crfae/model.hpp"

namespace crfae {

// Head-outward grammar over tags T0..T{k-1}.  T0 is the only root child;
// every other tag c attaches to parent(c) = (c-1)/2, on the left when c is
// odd and on the right when even.  A head emits each of its child tags
// once with probability attach_prob, and a second copy with probability
// attach_prob^2.
struct PlantedGrammar {
  int num_tags = 8;
  double attach_prob = 0.6;

  static std::string tag(int t) { return "T" + std::to_string(t); }
  static int parent(int t) { return (t - 1) / 2; }
  static bool attaches_left(int t) { return t % 2 == 1; }

  // The (parent, child) preferences as prior rules.
  PriorRules rules() const;
};

struct SynthOptions {
  PlantedGrammar grammar;
  int sentences = 500;
  int max_len = 10;
  std::uint64_t seed = 0;
};

// Writes a CoNLL-U treebank with the planted trees as gold heads.  Samples
// longer than max_len are redrawn.  Identical options give identical bytes.
void write_synthetic(std::ostream& out, const SynthOptions& opts);

}  // namespace crfae
