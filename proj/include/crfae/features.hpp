#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "crfae/corpus.hpp"

namespace crfae {

// Dense ids for instantiated feature templates.
class FeatureIndex {
 public:
  FeatureIndex() = default;
  explicit FeatureIndex(std::vector<std::string> names);

  std::optional<int> find(const std::string& name) const;
  int add(const std::string& name);
  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int id) const { return names_.at(id); }
  const std::vector<std::string>& names() const { return names_; }

  bool operator==(const FeatureIndex& o) const { return names_ == o.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> ids_;
};

// Sorted, duplicate-free ids of the binary features active on one arc.
struct ArcFeatures {
  std::vector<int> ids;
};

enum class IndexMode { build, lookup };

constexpr int kNumTemplates = 7;
constexpr int kMaxDistance = 10;

// Feature strings for arc head -> child.  Templates, with dis = |head-child|
// clipped to kMaxDistance and dir = L when the child precedes the head:
//   h    POS(head)
//   c    POS(child)
//   hc   POS(head) POS(child)
//   hpc  POS(head) POS(head-1) POS(child)
//   hnc  POS(head) POS(head+1) POS(child)
//   hcp  POS(head) POS(child) POS(child-1)
//   hcn  POS(head) POS(child) POS(child+1)
// each suffixed with dis and dir.  The root head is ROOT with dir R,
// dis = child, and boundary contexts on both sides; token contexts outside
// 1..n read BOS/EOS.
std::vector<std::string> feature_strings(const Sentence& sent, const TagVocab& vocab,
                                         int head, int child);

// Build mode adds unseen strings to the index; lookup mode drops them.
ArcFeatures extract(const Sentence& sent, const TagVocab& vocab, int head, int child,
                    FeatureIndex& index, IndexMode mode);
ArcFeatures extract(const Sentence& sent, const TagVocab& vocab, int head, int child,
                    const FeatureIndex& index);

// Every feature of every candidate arc of every sentence, in corpus order.
FeatureIndex build_index(const Treebank& tb);

// Cached features of all (n+1) x n candidate arcs of a sentence; self arcs
// are left empty.
class SentenceFeatures {
 public:
  SentenceFeatures() = default;
  SentenceFeatures(const Sentence& sent, const TagVocab& vocab, const FeatureIndex& index);

  int size() const { return n_; }
  const ArcFeatures& at(int head, int child) const {
    return arcs_[static_cast<std::size_t>(head) * n_ + (child - 1)];
  }

 private:
  int n_ = 0;
  std::vector<ArcFeatures> arcs_;
};

}  // namespace crfae
