#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "crfae/pipeline.hpp"
#include "fixtures.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace crfae;

namespace {

struct Workdir {
  fs::path dir;
  Workdir() {
    dir = fs::temp_directory_path() / ("crfae_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Workdir() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

// Runs the CLI with stdout and stderr captured to files in the work dir.
int run(const Workdir& w, const std::string& args) {
  const std::string cmd = std::string("\"") + CRFAE_CLI + "\" " + args + " >\"" + (w / "stdout") +
                          "\" 2>\"" + (w / "stderr") + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string out(const Workdir& w) { return fixtures::read_file(w / "stdout"); }
std::string err(const Workdir& w) { return fixtures::read_file(w / "stderr"); }

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

const std::string kSample = fixtures::data_path("ud_sample.conllu");

}  // namespace

TEST_CASE("usage errors exit with 1") {
  Workdir w;
  CHECK(run(w, "") == 1);
  CHECK(run(w, "frobnicate") == 1);
  CHECK(run(w, "train --input " + kSample) == 1);
  CHECK(run(w, "train --input /nonexistent --model-out m.json") == 1);
  CHECK(run(w, "train --input " + kSample + " --model-out " + (w / "m.json") +
                   " --learning-rate -1") == 1);
  CHECK(run(w, "synth --attach-prob 1.5") == 1);
  CHECK(run(w, "--help") == 0);
}

TEST_CASE("data errors exit with 2") {
  Workdir w;
  write(w / "bad.conllu", "1\tw\tw\tA\n\n");
  CHECK(run(w, "train --input " + (w / "bad.conllu") + " --model-out " + (w / "m.json")) == 2);
  CHECK(err(w).find("bad.conllu:1") != std::string::npos);
  write(w / "model.json", "{\"version\": \"other\"}");
  CHECK(run(w, "parse --model " + (w / "model.json") + " --input " + kSample) == 2);
}

TEST_CASE("a trained model parses and scores the sample treebank") {
  Workdir w;
  REQUIRE(run(w, "train --input " + kSample + " --model-out " + (w / "m.json") +
                     " --rounds 3 --log " + (w / "log.jsonl") + " --tag-map " +
                     std::string(CRFAE_DATA_DIR) + "/ud2_universal.map") == 0);
  std::ifstream log(w / "log.jsonl");
  std::string line;
  int rounds = 0;
  while (std::getline(log, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["round"] == ++rounds);
    CHECK(j.contains("objective"));
    CHECK(j.contains("seconds"));
  }
  CHECK(rounds == 3);

  REQUIRE(run(w, "parse --model " + (w / "m.json") + " --input " + kSample + " --output " +
                     (w / "pred.conllu")) == 0);
  const Treebank pred = load_conll(w / "pred.conllu");
  const Treebank gold = load_conll(kSample);
  REQUIRE(pred.size() == gold.size());
  for (std::size_t k = 0; k < pred.size(); ++k) {
    CHECK(pred.sentences[k].gold_valid);
    CHECK(is_projective(*pred.sentences[k].gold_heads));
    CHECK(pred.sentences[k].lines.size() == gold.sentences[k].lines.size());
  }

  REQUIRE(run(w, "eval --gold " + kSample + " --pred " + (w / "pred.conllu")) == 0);
  CHECK(out(w).find("<= 10") != std::string::npos);
  CHECK(out(w).find("All") != std::string::npos);
}

TEST_CASE("zero rounds write the initialization") {
  Workdir w;
  REQUIRE(run(w, "train --input " + kSample + " --model-out " + (w / "m.json") + " --rounds 0") ==
          0);
  const Model m = load_model(fs::path(w / "m.json"));
  CHECK(m.weights.w.isZero(0.0));
  CHECK(m.hp.rounds == 0);
}

TEST_CASE("gold arcs scored highest recover the example tree") {
  Workdir w;
  const std::string stocks = fixtures::data_path("stocks.conllu");
  REQUIRE(run(w, "train --input " + stocks + " --model-out " + (w / "m.json") + " --rounds 0") == 0);
  Model m = load_model(fs::path(w / "m.json"));
  for (const char* f : {"hc:NOUN|DET|1|L", "hc:VERB|NOUN|2|L", "hc:VERB|ADV|1|L",
                        "hc:<ROOT>|VERB|4|R"})
    m.weights.w[*m.index.find(f)] = 10.0;
  save_model(fs::path(w / "m.json"), m);

  for (const char* dec : {"eisner", "cle"}) {
    REQUIRE(run(w, "parse --model " + (w / "m.json") + " --input " + stocks + " --decoder " + dec) ==
            0);
    const Treebank pred = fixtures::parse_text(out(w));
    CHECK(*pred.sentences[0].gold_heads == std::vector<int>{2, 4, 4, 0});
  }
}

TEST_CASE("single tokens attach to the root and both decoders agree on two tokens") {
  Workdir w;
  write(w / "short.conllu", fixtures::conllu_block({"NOUN"}, {1}) +
                                fixtures::conllu_block({"NOUN", "VERB"}, {0, 0}) +
                                fixtures::conllu_block({"VERB", "NOUN"}, {0, 0}) +
                                fixtures::conllu_block({"ADJ", "ADJ"}, {0, 0}));
  REQUIRE(run(w, "train --input " + kSample + " --model-out " + (w / "m.json") + " --rounds 2") ==
          0);
  REQUIRE(run(w, "parse --model " + (w / "m.json") + " --input " + (w / "short.conllu") +
                     " --output " + (w / "e.conllu")) == 0);
  REQUIRE(run(w, "parse --model " + (w / "m.json") + " --input " + (w / "short.conllu") +
                     " --decoder cle --output " + (w / "c.conllu")) == 0);
  CHECK(fixtures::read_file(w / "e.conllu") == fixtures::read_file(w / "c.conllu"));
  const Treebank pred = load_conll(w / "e.conllu");
  CHECK(*pred.sentences[0].gold_heads == std::vector<int>{0});
}

TEST_CASE("unseen tags produce a warning") {
  Workdir w;
  write(w / "odd.conllu", fixtures::conllu_block({"NOUN", "MYSTERY", "VERB"}));
  REQUIRE(run(w, "train --input " + kSample + " --model-out " + (w / "m.json") + " --rounds 1") ==
          0);
  REQUIRE(run(w, "parse --model " + (w / "m.json") + " --input " + (w / "odd.conllu")) == 0);
  CHECK(err(w).find("warning: 1 tokens") != std::string::npos);
  CHECK(fixtures::parse_text(out(w)).sentences[0].gold_valid);
}

TEST_CASE("evaluation exit codes and output") {
  Workdir w;
  REQUIRE(run(w, "eval --gold " + kSample + " --pred " + kSample) == 0);
  CHECK(out(w).find("<= 10      100.0") != std::string::npos);
  CHECK(out(w).find("All        100.0") != std::string::npos);

  REQUIRE(run(w, "eval --json --gold " + kSample + " --pred " + kSample) == 0);
  const auto j = nlohmann::json::parse(out(w));
  CHECK(j["dda_all"] == 1.0);
  CHECK(j["dda_le10"] == 1.0);

  CHECK(run(w, "eval --gold " + kSample + " --pred " + fixtures::data_path("stocks.conllu")) == 2);
}

TEST_CASE("synth is deterministic per seed") {
  Workdir w;
  REQUIRE(run(w, "synth --seed 3 --sentences 50 --output " + (w / "a.conllu")) == 0);
  REQUIRE(run(w, "synth --seed 3 --sentences 50 --output " + (w / "b.conllu")) == 0);
  REQUIRE(run(w, "synth --seed 4 --sentences 50 --output " + (w / "c.conllu")) == 0);
  CHECK(fixtures::read_file(w / "a.conllu") == fixtures::read_file(w / "b.conllu"));
  CHECK(fixtures::read_file(w / "a.conllu") != fixtures::read_file(w / "c.conllu"));
  CHECK(load_conll(w / "a.conllu").size() == 50);
}
