#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "crfae/corpus.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) {
  return std::string(CRFAE_TEST_DATA) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// One CoNLL-U block; heads may be empty for "_".
inline std::string conllu_block(const std::vector<std::string>& tags,
                                const std::vector<int>& heads = {}) {
  std::string out;
  for (std::size_t k = 0; k < tags.size(); ++k) {
    const std::string head = heads.empty() ? "_" : std::to_string(heads[k]);
    out += std::to_string(k + 1) + "\tw\tw\t" + tags[k] + "\t" + tags[k] + "\t_\t" + head +
           "\tdep\t_\t_\n";
  }
  return out + "\n";
}

inline crfae::Treebank parse_text(const std::string& text, const crfae::CorpusOptions& opts = {}) {
  std::istringstream in(text);
  return crfae::read_conll(in, "test", opts);
}

inline crfae::Treebank treebank(const std::vector<std::vector<std::string>>& sentences) {
  std::string text;
  for (const auto& s : sentences) text += conllu_block(s);
  return parse_text(text);
}

}  // namespace fixtures
