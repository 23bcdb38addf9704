#include "crfae/features.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace crfae {

FeatureIndex::FeatureIndex(std::vector<std::string> names) {
  for (auto& n : names) {
    if (ids_.contains(n)) throw std::invalid_argument("duplicate feature '" + n + "'");
    add(n);
  }
}

std::optional<int> FeatureIndex::find(const std::string& name) const {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  return std::nullopt;
}

int FeatureIndex::add(const std::string& name) {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  const int id = size();
  names_.push_back(name);
  ids_.emplace(name, id);
  return id;
}

std::vector<std::string> feature_strings(const Sentence& sent, const TagVocab& vocab,
                                         int head, int child) {
  const int n = sent.size();
  if (head == child) throw std::invalid_argument("self-loop arc");
  if (child < 1 || child > n || head < 0 || head > n)
    throw std::out_of_range("arc (" + std::to_string(head) + ", " + std::to_string(child) +
                            ") outside sentence of length " + std::to_string(n));

  auto pos = [&](int p) -> const std::string& {
    if (p < 1) return vocab.tag(TagVocab::kBos);
    if (p > n) return vocab.tag(TagVocab::kEos);
    return vocab.tag(sent.tags[p - 1]);
  };

  const bool root = head == 0;
  const std::string& h = root ? vocab.tag(TagVocab::kRoot) : pos(head);
  const std::string& h_prev = root ? vocab.tag(TagVocab::kBos) : pos(head - 1);
  const std::string& h_next = root ? vocab.tag(TagVocab::kEos) : pos(head + 1);
  const std::string& c = pos(child);
  const std::string& c_prev = pos(child - 1);
  const std::string& c_next = pos(child + 1);

  const int dis = std::min(std::abs(head - child), kMaxDistance);
  const char* dir = child < head ? "L" : "R";
  const std::string suffix = "|" + std::to_string(dis) + "|" + dir;

  return {
      "h:" + h + suffix,
      "c:" + c + suffix,
      "hc:" + h + "|" + c + suffix,
      "hpc:" + h + "|" + h_prev + "|" + c + suffix,
      "hnc:" + h + "|" + h_next + "|" + c + suffix,
      "hcp:" + h + "|" + c + "|" + c_prev + suffix,
      "hcn:" + h + "|" + c + "|" + c_next + suffix,
  };
}

ArcFeatures extract(const Sentence& sent, const TagVocab& vocab, int head, int child,
                    FeatureIndex& index, IndexMode mode) {
  if (mode == IndexMode::lookup)
    return extract(sent, vocab, head, child, static_cast<const FeatureIndex&>(index));
  ArcFeatures f;
  for (const auto& s : feature_strings(sent, vocab, head, child)) f.ids.push_back(index.add(s));
  std::sort(f.ids.begin(), f.ids.end());
  f.ids.erase(std::unique(f.ids.begin(), f.ids.end()), f.ids.end());
  return f;
}

ArcFeatures extract(const Sentence& sent, const TagVocab& vocab, int head, int child,
                    const FeatureIndex& index) {
  ArcFeatures f;
  for (const auto& s : feature_strings(sent, vocab, head, child))
    if (auto id = index.find(s)) f.ids.push_back(*id);
  std::sort(f.ids.begin(), f.ids.end());
  f.ids.erase(std::unique(f.ids.begin(), f.ids.end()), f.ids.end());
  return f;
}

FeatureIndex build_index(const Treebank& tb) {
  FeatureIndex index;
  for (const auto& s : tb.sentences)
    for (int j = 1; j <= s.size(); ++j)
      for (int i = 0; i <= s.size(); ++i)
        if (i != j) extract(s, tb.vocab, i, j, index, IndexMode::build);
  return index;
}

SentenceFeatures::SentenceFeatures(const Sentence& sent, const TagVocab& vocab,
                                   const FeatureIndex& index)
    : n_(sent.size()), arcs_(static_cast<std::size_t>(n_ + 1) * n_) {
  for (int i = 0; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j)
      if (i != j) arcs_[static_cast<std::size_t>(i) * n_ + (j - 1)] =
          extract(sent, vocab, i, j, index);
}

}  // namespace crfae
