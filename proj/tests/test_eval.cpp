#include <doctest.h>

#include "crfae/arc_matrix.hpp"
#include "crfae/eval.hpp"
#include "fixtures.hpp"
#include "json.hpp"

using namespace crfae;
using fixtures::parse_text;

namespace {

Treebank gold_of(const std::vector<std::pair<std::vector<std::string>, std::vector<int>>>& s) {
  std::string text;
  for (const auto& [tags, heads] : s) text += fixtures::conllu_block(tags, heads);
  return parse_text(text);
}

}  // namespace

TEST_CASE("identical trees score one, two of four score a half") {
  const Treebank gold = load_conll(fixtures::data_path("stocks.conllu"));
  const std::vector<ParseTree> same{ParseTree{{2, 4, 4, 0}}};
  const EvalReport r = directed_accuracy(gold, same);
  CHECK(r.all.correct == 4);
  CHECK(r.all.total == 4);
  CHECK(r.all.accuracy() == 1.0);

  const std::vector<ParseTree> half{ParseTree{{2, 0, 4, 2}}};
  const EvalReport h = directed_accuracy(gold, half);
  CHECK(h.all.correct == 2);
  CHECK(h.all.accuracy() == 0.5);
  REQUIRE(h.short_sentences);
  CHECK(h.short_sentences->accuracy() == 0.5);
}

TEST_CASE("misaligned corpora are rejected") {
  const Treebank gold = load_conll(fixtures::data_path("stocks.conllu"));
  CHECK_THROWS_AS(directed_accuracy(gold, std::vector<ParseTree>{}), DataError);
  CHECK_THROWS_AS(directed_accuracy(gold, std::vector<ParseTree>{ParseTree{{0, 1, 2}}}),
                  DataError);
}

TEST_CASE("length regimes and micro averaging") {
  std::vector<std::string> long_tags(12, "A");
  std::vector<int> long_heads(12, 1);
  long_heads[0] = 0;
  const Treebank gold = gold_of({{{"A", "B"}, {0, 1}}, {long_tags, long_heads}});

  std::vector<int> long_pred(12, 0);
  long_pred[1] = 1;
  long_pred[2] = 1;
  const std::vector<ParseTree> pred{ParseTree{{0, 1}}, ParseTree{long_pred}};
  const EvalReport r = directed_accuracy(gold, pred);
  REQUIRE(r.short_sentences);
  CHECK(r.short_sentences->correct == 2);
  CHECK(r.short_sentences->total == 2);
  CHECK(r.all.correct == 5);
  CHECK(r.all.total == 14);
  CHECK(r.all.accuracy() == doctest::Approx(5.0 / 14));

  const EvalReport wide = directed_accuracy(gold, pred, 20);
  CHECK(wide.short_sentences->correct == wide.all.correct);
  CHECK(wide.short_sentences->total == wide.all.total);

  const EvalReport none = directed_accuracy(gold, pred, 1);
  CHECK_FALSE(none.short_sentences);
}

TEST_CASE("scoring does not depend on sentence order") {
  const Treebank gold = gold_of({{{"A", "B", "C"}, {0, 1, 2}}, {{"A", "B"}, {2, 0}}});
  const Treebank swapped = gold_of({{{"A", "B"}, {2, 0}}, {{"A", "B", "C"}, {0, 1, 2}}});
  const std::vector<ParseTree> p{ParseTree{{0, 1, 1}}, ParseTree{{0, 1}}};
  const std::vector<ParseTree> q{ParseTree{{0, 1}}, ParseTree{{0, 1, 1}}};
  const EvalReport a = directed_accuracy(gold, p), b = directed_accuracy(swapped, q);
  CHECK(a.all.correct == b.all.correct);
  CHECK(a.all.total == b.all.total);
}

TEST_CASE("punctuation is not scored and broken gold trees are skipped") {
  const Treebank gold = gold_of({{{"A", "PUNCT"}, {0, 1}}, {{"A", "B"}, {2, 1}}});
  const std::vector<ParseTree> pred{ParseTree{{0, 0}}, ParseTree{{0, 1}}};
  const EvalReport r = directed_accuracy(gold, pred);
  CHECK(r.all.total == 1);
  CHECK(r.all.correct == 1);
  CHECK(r.skipped == 1);

  const Treebank only_broken = gold_of({{{"A", "B"}, {2, 1}}});
  CHECK_THROWS_AS(directed_accuracy(only_broken, std::vector<ParseTree>{ParseTree{{0, 1}}}),
                  DataError);
}

TEST_CASE("table and json output") {
  const Treebank gold = load_conll(fixtures::data_path("stocks.conllu"));
  const EvalReport r = directed_accuracy(gold, std::vector<ParseTree>{ParseTree{{2, 0, 4, 2}}});
  CHECK(r.table() ==
        "Length      DDA     correct/total\n"
        "<= 10       50.0   2/4\n"
        "All         50.0   2/4\n");
  const auto j = nlohmann::json::parse(r.json());
  CHECK(j["dda_all"] == 0.5);
  CHECK(j["dda_le10"] == 0.5);
  CHECK(j["counts_all"] == nlohmann::json::array({2, 4}));
  CHECK(j["skipped_sentences"] == 0);
}
