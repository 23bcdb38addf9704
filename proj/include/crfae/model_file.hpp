#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "crfae/corpus.hpp"
#include "crfae/features.hpp"
#include "crfae/model.hpp"

namespace crfae {

inline constexpr const char* kModelVersion = "crfae-model/1";

// Everything needed to parse a new corpus.
struct Model {
  TagVocab vocab;
  FeatureIndex index;
  EncoderWeights weights;
  DecoderTable decoder;
  PriorRules prior;
  TagMap tag_map;
  Hyperparams hp;

  RuleTable rule_table() const { return RuleTable(prior, tag_map, vocab); }
};

// Versioned JSON.  Zero weights and AdaGrad accumulators are not stored.
void save_model(std::ostream& out, const Model& model);
void save_model(const std::filesystem::path& path, const Model& model);

// Throws DataError on malformed files or a version mismatch.
Model load_model(std::istream& in, const std::string& name = "model");
Model load_model(const std::filesystem::path& path);

}  // namespace crfae
