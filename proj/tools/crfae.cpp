// crfae: command-line front end for unsupervised CRF-autoencoder
// dependency parsing over POS-tag sequences.
//
// Exit codes: 0 success, 1 usage error, 2 data or runtime error.

#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "crfae/eval.hpp"
#include "crfae/pipeline.hpp"
#include "crfae/synth.hpp"
#include "json.hpp"

namespace {

using namespace crfae;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ConllFormat parse_format(const std::string& f) {
  return f == "conllx" ? ConllFormat::conllx : ConllFormat::conllu;
}

struct TrainArgs {
  std::string input, model_out, format = "conllu", prior = "builtin", tag_map, log;
  int max_len = 10;
  bool soft_em = false, nonprojective = false, include_punct = false;
  Hyperparams hp;
};

int run_train(const TrainArgs& a) {
  CorpusOptions opts;
  opts.format = parse_format(a.format);
  opts.score_punct = a.include_punct;
  const Treebank tb = filter_by_length(load_conll(a.input, opts), a.max_len);

  Hyperparams hp = a.hp;
  hp.objective = a.soft_em ? Objective::soft : Objective::viterbi;
  hp.space = a.nonprojective ? TreeSpace::nonprojective : TreeSpace::projective;
  try {
    hp.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  PriorRules prior;
  if (a.prior == "builtin")
    prior = PriorRules::builtin();
  else if (a.prior != "none")
    prior = PriorRules::load(a.prior);
  TagMap tag_map;
  if (!a.tag_map.empty()) tag_map = TagMap::load(a.tag_map);

  std::unique_ptr<std::ofstream> log;
  if (!a.log.empty()) {
    log = std::make_unique<std::ofstream>(a.log);
    if (!*log) throw DataError("cannot write " + a.log);
  }
  std::cerr << "training on " << tb.size() << " sentences, " << tb.vocab.size() << " tags\n";
  const Model model = train_model(tb, hp, prior, tag_map, [&](const RoundLog& r) {
    const nlohmann::json line{{"round", r.round}, {"objective", r.objective},
                              {"seconds", r.seconds}};
    if (log) *log << line.dump() << '\n' << std::flush;
    std::cerr << "round " << r.round << " objective " << r.objective << '\n';
  });
  save_model(std::filesystem::path(a.model_out), model);
  return 0;
}

struct ParseArgs {
  std::string model, input, output, format = "conllu", decoder = "eisner";
};

int run_parse(const ParseArgs& a) {
  const Model model = load_model(std::filesystem::path(a.model));
  CorpusOptions opts;
  opts.format = parse_format(a.format);
  const Treebank tb = load_conll(a.input, opts);
  int unknown = 0;
  const auto trees = parse_with_model(
      model, tb, a.decoder == "cle" ? TreeSpace::nonprojective : TreeSpace::projective, &unknown);
  if (unknown > 0)
    std::cerr << "warning: " << unknown << " tokens carry tags unseen in training; parsed as "
              << model.vocab.tag(TagVocab::kUnk) << '\n';
  if (a.output.empty() || a.output == "-") {
    write_conll(std::cout, tb, trees);
  } else {
    std::ofstream out(a.output);
    if (!out) throw DataError("cannot write " + a.output);
    write_conll(out, tb, trees);
  }
  return 0;
}

struct EvalArgs {
  std::string gold, pred, format = "conllu";
  int short_length = 10;
  bool json = false, include_punct = false;
};

int run_eval(const EvalArgs& a) {
  CorpusOptions opts;
  opts.format = parse_format(a.format);
  opts.score_punct = a.include_punct;
  const Treebank gold = load_conll(a.gold, opts);
  const Treebank pred = load_conll(a.pred, opts);
  if (gold.size() != pred.size())
    throw DataError("gold has " + std::to_string(gold.size()) + " sentences, predictions have " +
                    std::to_string(pred.size()));
  std::vector<ParseTree> trees;
  for (const auto& s : pred.sentences) {
    if (!s.gold_heads) throw DataError(s.source + ": prediction has no head column");
    trees.push_back(ParseTree{*s.gold_heads});
  }
  const EvalReport report = directed_accuracy(gold, trees, a.short_length);
  if (a.json)
    std::cout << report.json() << '\n';
  else
    std::cout << report.table();
  return 0;
}

struct SynthArgs {
  std::string output;
  SynthOptions opts;
};

int run_synth(const SynthArgs& a) {
  try {
    if (a.output.empty() || a.output == "-") {
      write_synthetic(std::cout, a.opts);
    } else {
      std::ofstream out(a.output);
      if (!out) throw DataError("cannot write " + a.output);
      write_synthetic(out, a.opts);
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised dependency parsing with a CRF autoencoder"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train a model on a CoNLL treebank");
  t->add_option("--input", train.input, "Training treebank")->required()->check(CLI::ExistingFile);
  t->add_option("--model-out", train.model_out, "Model file to write")->required();
  t->add_option("--format", train.format)->check(CLI::IsMember({"conllu", "conllx"}));
  t->add_option("--max-len", train.max_len, "Keep sentences with at most this many scored tokens")
      ->check(CLI::PositiveNumber);
  t->add_option("--alpha", train.hp.alpha, "Prior strength");
  t->add_option("--prior", train.prior, "builtin, none, or a file of HEAD CHILD lines");
  t->add_option("--tag-map", train.tag_map, "TAG CATEGORY lines mapping tags onto rule categories");
  t->add_option("--lambda", train.hp.lambda, "L1 strength");
  t->add_option("--learning-rate", train.hp.learning_rate, "AdaGrad base rate");
  t->add_option("--rounds", train.hp.rounds, "Coordinate descent rounds");
  t->add_option("--sgd-epochs", train.hp.sgd_epochs, "SGD epochs per round");
  t->add_option("--em-iters", train.hp.em_iters, "Viterbi EM iterations per round");
  t->add_option("--smoothing", train.hp.smoothing_eps, "Additive smoothing of decoder counts");
  t->add_option("--seed", train.hp.seed, "Shuffle seed");
  t->add_option("--log", train.log, "JSON-lines training log");
  t->add_flag("--soft-em", train.soft_em, "Marginal likelihood instead of the Viterbi objective");
  t->add_flag("--nonprojective", train.nonprojective, "Train over non-projective trees");
  t->add_flag("--include-punct", train.include_punct, "Count punctuation toward sentence length");

  ParseArgs parse;
  auto* p = app.add_subcommand("parse", "Parse a CoNLL file with a trained model");
  p->add_option("--model", parse.model)->required()->check(CLI::ExistingFile);
  p->add_option("--input", parse.input)->required()->check(CLI::ExistingFile);
  p->add_option("--output", parse.output, "Output file (default stdout)");
  p->add_option("--format", parse.format)->check(CLI::IsMember({"conllu", "conllx"}));
  p->add_option("--decoder", parse.decoder)->check(CLI::IsMember({"eisner", "cle"}));

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Directed dependency accuracy of predictions");
  e->add_option("--gold", eval.gold)->required()->check(CLI::ExistingFile);
  e->add_option("--pred", eval.pred)->required()->check(CLI::ExistingFile);
  e->add_option("--format", eval.format)->check(CLI::IsMember({"conllu", "conllx"}));
  e->add_option("--short-length", eval.short_length)->check(CLI::PositiveNumber);
  e->add_flag("--json", eval.json, "Print JSON instead of a table");
  e->add_flag("--include-punct", eval.include_punct, "Score punctuation tokens");

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Write a treebank sampled from a planted grammar");
  s->add_option("--output", synth.output, "Output file (default stdout)");
  s->add_option("--tags", synth.opts.grammar.num_tags)->check(CLI::PositiveNumber);
  s->add_option("--sentences", synth.opts.sentences)->check(CLI::PositiveNumber);
  s->add_option("--max-len", synth.opts.max_len)->check(CLI::PositiveNumber);
  s->add_option("--attach-prob", synth.opts.grammar.attach_prob);
  s->add_option("--seed", synth.opts.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (t->parsed()) return run_train(train);
    if (p->parsed()) return run_parse(parse);
    if (e->parsed()) return run_eval(eval);
    if (s->parsed()) return run_synth(synth);
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
  return 1;
}
