#include "crfae/eval.hpp"

#include <cstdio>

#include "crfae/arc_matrix.hpp"
#include "json.hpp"

namespace crfae {

EvalReport directed_accuracy(const Treebank& gold, std::span<const ParseTree> pred,
                             int short_length) {
  if (gold.size() != pred.size())
    throw DataError("sentence count mismatch: gold " + std::to_string(gold.size()) +
                    ", predicted " + std::to_string(pred.size()));
  EvalReport r;
  r.short_length = short_length;
  RegimeScore short_score;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const Sentence& s = gold.sentences[k];
    if (pred[k].size() != s.size())
      throw DataError("length mismatch at sentence " + std::to_string(k + 1) + " (" +
                      s.source + "): gold " + std::to_string(s.size()) + ", predicted " +
                      std::to_string(pred[k].size()));
    if (!s.gold_heads || !s.gold_valid) {
      ++r.skipped;
      continue;
    }
    long correct = 0, total = 0;
    for (int j = 0; j < s.size(); ++j) {
      if (!s.scored[j]) continue;
      ++total;
      if (pred[k].heads[j] == (*s.gold_heads)[j]) ++correct;
    }
    r.all.correct += correct;
    r.all.total += total;
    if (s.scored_length() <= short_length) {
      short_score.correct += correct;
      short_score.total += total;
    }
  }
  if (r.all.total == 0) throw DataError("no scorable tokens");
  if (short_score.total > 0) r.short_sentences = short_score;
  return r;
}

std::string EvalReport::table() const {
  char buf[128];
  std::string out = "Length      DDA     correct/total\n";
  auto row = [&](const std::string& label, const std::optional<RegimeScore>& s) {
    if (s)
      std::snprintf(buf, sizeof buf, "%-10s %5.1f   %ld/%ld\n", label.c_str(),
                    100.0 * s->accuracy(), s->correct, s->total);
    else
      std::snprintf(buf, sizeof buf, "%-10s     -   0/0\n", label.c_str());
    out += buf;
  };
  row("<= " + std::to_string(short_length), short_sentences);
  row("All", all);
  return out;
}

std::string EvalReport::json() const {
  nlohmann::json j;
  j["dda_all"] = all.accuracy();
  j["counts_all"] = {all.correct, all.total};
  j["short_length"] = short_length;
  if (short_sentences) {
    j["dda_le" + std::to_string(short_length)] = short_sentences->accuracy();
    j["counts_le" + std::to_string(short_length)] = {short_sentences->correct,
                                                     short_sentences->total};
  } else {
    j["dda_le" + std::to_string(short_length)] = nullptr;
  }
  j["skipped_sentences"] = skipped;
  return j.dump();
}

}  // namespace crfae
