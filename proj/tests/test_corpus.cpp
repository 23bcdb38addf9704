#include <doctest.h>

#include <sstream>

#include "crfae/arc_matrix.hpp"
#include "crfae/corpus.hpp"
#include "fixtures.hpp"

using namespace crfae;
using fixtures::parse_text;
using fixtures::treebank;

TEST_CASE("the four-token example block loads with its gold tree") {
  const Treebank tb = load_conll(fixtures::data_path("stocks.conllu"));
  REQUIRE(tb.size() == 1);
  const Sentence& s = tb.sentences[0];
  CHECK(s.size() == 4);
  REQUIRE(s.gold_heads);
  CHECK(*s.gold_heads == std::vector<int>{2, 4, 4, 0});
  CHECK(s.gold_valid);
  CHECK(tb.vocab.tag(s.tags[0]) == "DET");
  CHECK(tb.vocab.tag(s.tags[1]) == "NOUN");
  CHECK(tb.vocab.tag(s.tags[2]) == "ADV");
  CHECK(tb.vocab.tag(s.tags[3]) == "VERB");
  CHECK(s.source.ends_with("stocks.conllu:3"));
}

TEST_CASE("conll-x files read the coarse tag column") {
  CorpusOptions opts;
  opts.format = ConllFormat::conllx;
  const Treebank tb = load_conll(fixtures::data_path("stocks.conllx"), opts);
  REQUIRE(tb.size() == 1);
  CHECK(*tb.sentences[0].gold_heads == std::vector<int>{2, 4, 4, 0, 4});
  CHECK(tb.vocab.tag(tb.sentences[0].tags[3]) == "VBD");
  CHECK(tb.sentences[0].scored_length() == 4);
}

TEST_CASE("empty input is an error") {
  CHECK_THROWS_WITH_AS(parse_text(std::string{}), "test: no sentences", DataError);
  CHECK_THROWS_AS(parse_text("# only a comment\n\n"), DataError);
  CHECK_THROWS_AS(load_conll("/nonexistent/file.conllu"), DataError);
}

TEST_CASE("a two-cycle is loaded but flagged invalid") {
  const Treebank tb = parse_text(fixtures::conllu_block({"A", "B"}, {2, 1}));
  REQUIRE(tb.size() == 1);
  CHECK(tb.sentences[0].gold_heads);
  CHECK_FALSE(tb.sentences[0].gold_valid);
}

TEST_CASE("missing heads leave the sentence without gold") {
  const Treebank tb = parse_text(fixtures::conllu_block({"A", "B"}));
  CHECK_FALSE(tb.sentences[0].gold_heads);
  CHECK_FALSE(tb.sentences[0].gold_valid);
}

TEST_CASE("malformed rows report the line") {
  const std::string short_row = "1\tw\tw\tA\tA\t_\t0\tdep\t_\t_\n2\tw\tw\tB\n\n";
  CHECK_THROWS_WITH_AS(parse_text(short_row),
                       "test:2: expected at least 8 tab-separated columns, found 4", DataError);
  const std::string bad_head = "1\tw\tw\tA\tA\t_\t0\tdep\t_\t_\n2\tw\tw\tB\tB\t_\t7\tdep\t_\t_\n\n";
  CHECK_THROWS_WITH_AS(parse_text(bad_head), "test:2: head index '7' out of range [0..2]",
                       DataError);
  const std::string reserved = fixtures::conllu_block({"A", "<ROOT>"}, {0, 1});
  CHECK_THROWS_AS(parse_text(reserved), DataError);
}

TEST_CASE("multiword ranges and empty nodes are skipped, comments kept") {
  const std::string text =
      "# sent_id = x\n"
      "1\tI\tI\tPRON\tPRON\t_\t3\tdep\t_\t_\n"
      "2-3\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
      "2\tdo\tdo\tAUX\tAUX\t_\t3\tdep\t_\t_\n"
      "2.1\tx\tx\tX\tX\t_\t_\t_\t_\t_\n"
      "3\tknow\tknow\tVERB\tVERB\t_\t0\troot\t_\t_\n\n";
  const Treebank tb = parse_text(text);
  const Sentence& s = tb.sentences[0];
  CHECK(s.size() == 3);
  CHECK(*s.gold_heads == std::vector<int>{3, 3, 0});
  CHECK(s.gold_valid);
  CHECK(s.lines.size() == 6);
  CHECK_FALSE(tb.vocab.find("X"));
}

TEST_CASE("punctuation is kept as a token but not scored") {
  const Treebank tb = load_conll(fixtures::data_path("ud_sample.conllu"));
  const Sentence& s = tb.sentences[0];
  CHECK(s.size() == 5);
  CHECK(s.scored_length() == 4);
  CHECK(s.scored == std::vector<char>{1, 1, 1, 1, 0});

  CorpusOptions all;
  all.score_punct = true;
  CHECK(load_conll(fixtures::data_path("ud_sample.conllu"), all).sentences[0].scored_length() ==
        5);
}

TEST_CASE("vocabulary ids are reserved first, then first-seen order") {
  const Treebank tb = treebank({{"B", "A"}, {"C", "A"}});
  CHECK(tb.vocab.size() == TagVocab::kNumReserved + 3);
  CHECK(tb.vocab.tag(TagVocab::kRoot) == "<ROOT>");
  CHECK(tb.vocab.tag(TagVocab::kUnk) == "<UNK>");
  CHECK(*tb.vocab.find("B") == 4);
  CHECK(*tb.vocab.find("A") == 5);
  CHECK(*tb.vocab.find("C") == 6);
  CHECK(treebank({{"B", "A"}, {"C", "A"}}).vocab == tb.vocab);
  CHECK(TagVocab::from_tags(tb.vocab.tags()) == tb.vocab);
  CHECK_THROWS_AS(TagVocab::from_tags({"A"}), DataError);
}

TEST_CASE("length filter counts scored tokens") {
  std::string text;
  for (int n : {3, 10, 11, 1}) text += fixtures::conllu_block(std::vector<std::string>(n, "A"));
  text += fixtures::conllu_block({"A", "A", "A", "A", "A", "A", "A", "A", "A", "A", "PUNCT"});
  const Treebank tb = parse_text(text);

  const Treebank f = filter_by_length(tb, 10);
  REQUIRE(f.size() == 4);
  CHECK(f.sentences[0].size() == 3);
  CHECK(f.sentences[1].size() == 10);
  CHECK(f.sentences[2].size() == 1);
  CHECK(f.sentences[3].size() == 11);
  CHECK(f.vocab == tb.vocab);

  const Treebank twice = filter_by_length(f, 10);
  CHECK(twice.size() == f.size());

  CHECK_THROWS_AS(filter_by_length(treebank({{"A", "A"}}), 1), DataError);
  CHECK_THROWS_AS(filter_by_length(tb, 0), std::invalid_argument);
}

TEST_CASE("writing without predictions reproduces the input bytes") {
  const std::string original = fixtures::read_file(fixtures::data_path("ud_sample.conllu"));
  const Treebank tb = load_conll(fixtures::data_path("ud_sample.conllu"));
  std::ostringstream out;
  write_conll(out, tb);
  CHECK(out.str() == original);

  std::ostringstream with_gold;
  write_conll(with_gold, tb, gold_trees(tb));
  CHECK(with_gold.str() == original);
}

TEST_CASE("writing predictions replaces only the head column") {
  const Treebank tb = load_conll(fixtures::data_path("stocks.conllu"));
  const std::vector<ParseTree> pred{ParseTree{{0, 1, 2, 3}}};
  std::ostringstream out;
  write_conll(out, tb, pred);
  const Treebank back = parse_text(out.str());
  CHECK(*back.sentences[0].gold_heads == std::vector<int>{0, 1, 2, 3});
  CHECK(back.sentences[0].lines[0] == tb.sentences[0].lines[0]);
  CHECK_THROWS_AS(write_conll(out, tb, std::vector<ParseTree>(2)), std::invalid_argument);
}

TEST_CASE("rebasing maps unseen tags to UNK") {
  const Treebank train = treebank({{"A", "B"}});
  const Treebank test = treebank({{"B", "Z", "A", "Z"}});
  int unknown = -1;
  const Treebank r = rebase(test, train.vocab, &unknown);
  CHECK(unknown == 2);
  CHECK(r.vocab == train.vocab);
  CHECK(r.sentences[0].tags ==
        std::vector<int>{*train.vocab.find("B"), TagVocab::kUnk, *train.vocab.find("A"),
                         TagVocab::kUnk});
}
