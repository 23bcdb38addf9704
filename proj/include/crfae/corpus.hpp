#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "crfae/trees.hpp"

namespace crfae {

// POS alphabet.  Ids 0..3 are reserved boundary/fallback symbols that the
// corpus reader never produces; corpus tags follow in first-seen order.
class TagVocab {
 public:
  static constexpr int kRoot = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;
  static constexpr int kNumReserved = 4;

  TagVocab();
  // Rebuilds a vocabulary from its id-ordered tag list; the reserved
  // symbols must come first.
  static TagVocab from_tags(const std::vector<std::string>& tags);

  int intern(std::string_view tag);
  std::optional<int> find(std::string_view tag) const;
  int id_or_unk(std::string_view tag) const;
  const std::string& tag(int id) const { return tags_.at(id); }
  int size() const { return static_cast<int>(tags_.size()); }
  const std::vector<std::string>& tags() const { return tags_; }

  static bool is_reserved(std::string_view tag);

  bool operator==(const TagVocab& o) const { return tags_ == o.tags_; }

 private:
  std::vector<std::string> tags_;
  std::unordered_map<std::string, int> ids_;
};

struct Sentence {
  std::vector<int> tags;
  std::optional<std::vector<int>> gold_heads;
  bool gold_valid = false;      // gold heads present and form a tree
  std::vector<char> scored;     // 1 if the token counts for accuracy
  std::string source;           // "file:line" of the first row

  // Raw block, kept so output can reproduce every column but the head.
  std::vector<std::string> lines;
  std::vector<std::size_t> token_lines;

  int size() const { return static_cast<int>(tags.size()); }
  int scored_length() const;
};

enum class ConllFormat { conllx, conllu };

struct CorpusOptions {
  ConllFormat format = ConllFormat::conllu;
  std::set<std::string> punct_tags{"PUNCT", ".", ",", ":", "``", "''", "-LRB-", "-RRB-"};
  bool score_punct = false;
};

struct Treebank {
  std::vector<Sentence> sentences;
  TagVocab vocab;

  std::size_t size() const { return sentences.size(); }
};

// Throws DataError on unreadable or malformed input and on an empty
// corpus.  Ill-formed gold trees only clear Sentence::gold_valid.
Treebank load_conll(const std::filesystem::path& path, const CorpusOptions& opts = {});
Treebank read_conll(std::istream& in, const std::string& name,
                    const CorpusOptions& opts = {});

// Keeps sentences whose scored length is at most max_len.
Treebank filter_by_length(const Treebank& tb, int max_len);

// Re-expresses tag ids in another vocabulary; tags it lacks become UNK.
Treebank rebase(const Treebank& tb, const TagVocab& target, int* unknown_tokens = nullptr);

// Writes every block back out.  With heads, column 7 of each token row is
// replaced by the predicted head; all other bytes are copied.
void write_conll(std::ostream& out, const Treebank& tb,
                 std::span<const ParseTree> heads = {});

std::vector<ParseTree> gold_trees(const Treebank& tb);

}  // namespace crfae
