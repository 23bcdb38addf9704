#include "crfae/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "crfae/arc_matrix.hpp"

namespace crfae {

namespace {

constexpr std::string_view kReserved[] = {"<ROOT>", "<BOS>", "<EOS>", "<UNK>"};
constexpr std::size_t kPosColumn = 3;
constexpr std::size_t kHeadColumn = 6;
constexpr std::size_t kMinColumns = 8;

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    cols.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return cols;
}

std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct BlockBuilder {
  Sentence sent;
  std::vector<std::string> heads;  // raw head column
  std::vector<std::size_t> head_line_numbers;
  bool any_token = false;
};

}  // namespace

TagVocab::TagVocab() {
  for (auto r : kReserved) intern(r);
}

TagVocab TagVocab::from_tags(const std::vector<std::string>& tags) {
  TagVocab v;
  if (tags.size() < kNumReserved ||
      !std::equal(std::begin(kReserved), std::end(kReserved), tags.begin()))
    throw DataError("tag list does not start with the reserved symbols");
  for (std::size_t k = kNumReserved; k < tags.size(); ++k) {
    if (is_reserved(tags[k]) || v.find(tags[k]))
      throw DataError("duplicate or reserved tag '" + tags[k] + "'");
    v.intern(tags[k]);
  }
  return v;
}

int TagVocab::intern(std::string_view tag) {
  const std::string key(tag);
  if (auto it = ids_.find(key); it != ids_.end()) return it->second;
  const int id = static_cast<int>(tags_.size());
  tags_.push_back(key);
  ids_.emplace(key, id);
  return id;
}

std::optional<int> TagVocab::find(std::string_view tag) const {
  if (auto it = ids_.find(std::string(tag)); it != ids_.end()) return it->second;
  return std::nullopt;
}

int TagVocab::id_or_unk(std::string_view tag) const {
  const auto id = find(tag);
  if (!id || *id < kNumReserved) return kUnk;
  return *id;
}

bool TagVocab::is_reserved(std::string_view tag) {
  for (auto r : kReserved)
    if (r == tag) return true;
  return false;
}

int Sentence::scored_length() const {
  int n = 0;
  for (char s : scored) n += s;
  return n;
}

Treebank read_conll(std::istream& in, const std::string& name, const CorpusOptions& opts) {
  Treebank tb;
  BlockBuilder block;
  std::size_t line_no = 0;

  auto finish = [&]() {
    if (!block.any_token) {
      block = BlockBuilder{};
      return;
    }
    Sentence& s = block.sent;
    const int n = s.size();
    bool have_heads = true;
    for (const auto& h : block.heads)
      if (h == "_") have_heads = false;
    if (have_heads) {
      std::vector<int> heads(n);
      for (int k = 0; k < n; ++k) {
        const auto v = parse_int(block.heads[k]);
        if (!v || *v < 0 || *v > n)
          throw DataError(name + ":" + std::to_string(block.head_line_numbers[k]) +
                          ": head index '" + block.heads[k] + "' out of range [0.." +
                          std::to_string(n) + "]");
        heads[k] = *v;
      }
      s.gold_valid = is_valid_tree(heads);
      s.gold_heads = std::move(heads);
    }
    tb.sentences.push_back(std::move(s));
    block = BlockBuilder{};
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      finish();
      continue;
    }
    block.sent.lines.push_back(line);
    if (line.front() == '#') continue;

    const auto cols = split_tabs(line);
    if (cols.size() < kMinColumns)
      throw DataError(name + ":" + std::to_string(line_no) + ": expected at least " +
                      std::to_string(kMinColumns) + " tab-separated columns, found " +
                      std::to_string(cols.size()));
    const std::string_view id = cols[0];
    if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos)
      continue;  // multiword token or empty node

    const std::string_view pos = cols[kPosColumn];
    if (TagVocab::is_reserved(pos))
      throw DataError(name + ":" + std::to_string(line_no) + ": tag '" + std::string(pos) +
                      "' collides with a reserved symbol");
    if (!block.any_token) block.sent.source = name + ":" + std::to_string(line_no);
    block.any_token = true;
    block.sent.tags.push_back(tb.vocab.intern(pos));
    block.sent.scored.push_back(
        opts.score_punct || !opts.punct_tags.contains(std::string(pos)) ? 1 : 0);
    block.sent.token_lines.push_back(block.sent.lines.size() - 1);
    block.heads.emplace_back(cols[kHeadColumn]);
    block.head_line_numbers.push_back(line_no);
  }
  if (in.bad()) throw DataError(name + ": read error");
  finish();

  if (tb.sentences.empty()) throw DataError(name + ": no sentences");
  return tb;
}

Treebank load_conll(const std::filesystem::path& path, const CorpusOptions& opts) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_conll(in, path.string(), opts);
}

Treebank filter_by_length(const Treebank& tb, int max_len) {
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  Treebank out;
  out.vocab = tb.vocab;
  for (const auto& s : tb.sentences)
    if (s.scored_length() <= max_len) out.sentences.push_back(s);
  if (out.sentences.empty())
    throw DataError("no sentences of length <= " + std::to_string(max_len));
  return out;
}

Treebank rebase(const Treebank& tb, const TagVocab& target, int* unknown_tokens) {
  Treebank out;
  out.vocab = target;
  out.sentences = tb.sentences;
  int unknown = 0;
  for (auto& s : out.sentences) {
    for (int& t : s.tags) {
      t = target.id_or_unk(tb.vocab.tag(t));
      if (t == TagVocab::kUnk) ++unknown;
    }
  }
  if (unknown_tokens) *unknown_tokens = unknown;
  return out;
}

void write_conll(std::ostream& out, const Treebank& tb, std::span<const ParseTree> heads) {
  if (!heads.empty() && heads.size() != tb.size())
    throw std::invalid_argument("tree count does not match sentence count");
  for (std::size_t k = 0; k < tb.size(); ++k) {
    const Sentence& s = tb.sentences[k];
    std::size_t next_token = 0;
    for (std::size_t l = 0; l < s.lines.size(); ++l) {
      const bool is_token =
          next_token < s.token_lines.size() && s.token_lines[next_token] == l;
      if (heads.empty() || !is_token) {
        out << s.lines[l] << '\n';
        if (is_token) ++next_token;
        continue;
      }
      const auto cols = split_tabs(s.lines[l]);
      for (std::size_t c = 0; c < cols.size(); ++c) {
        if (c) out << '\t';
        if (c == kHeadColumn)
          out << heads[k].heads[next_token];
        else
          out << cols[c];
      }
      out << '\n';
      ++next_token;
    }
    out << '\n';
  }
}

std::vector<ParseTree> gold_trees(const Treebank& tb) {
  std::vector<ParseTree> out;
  out.reserve(tb.size());
  for (const auto& s : tb.sentences)
    out.push_back(ParseTree{s.gold_heads.value_or(std::vector<int>(s.size(), 0))});
  return out;
}

}  // namespace crfae
