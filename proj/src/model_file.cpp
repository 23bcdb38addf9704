#include "crfae/model_file.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace crfae {

using nlohmann::json;

namespace {

json hyperparams_json(const Hyperparams& hp) {
  return {
      {"lambda", hp.lambda},
      {"alpha", hp.alpha},
      {"learning_rate", hp.learning_rate},
      {"smoothing", hp.smoothing_eps},
      {"rounds", hp.rounds},
      {"sgd_epochs", hp.sgd_epochs},
      {"em_iters", hp.em_iters},
      {"seed", hp.seed},
      {"objective", hp.objective == Objective::soft ? "soft" : "viterbi"},
      {"space", hp.space == TreeSpace::projective ? "projective" : "nonprojective"},
  };
}

Hyperparams hyperparams_from(const json& j) {
  Hyperparams hp;
  hp.lambda = j.at("lambda").get<double>();
  hp.alpha = j.at("alpha").get<double>();
  hp.learning_rate = j.at("learning_rate").get<double>();
  hp.smoothing_eps = j.at("smoothing").get<double>();
  hp.rounds = j.at("rounds").get<int>();
  hp.sgd_epochs = j.at("sgd_epochs").get<int>();
  hp.em_iters = j.at("em_iters").get<int>();
  hp.seed = j.at("seed").get<std::uint64_t>();
  hp.objective = j.at("objective").get<std::string>() == "soft" ? Objective::soft
                                                                 : Objective::viterbi;
  hp.space = j.at("space").get<std::string>() == "nonprojective" ? TreeSpace::nonprojective
                                                                  : TreeSpace::projective;
  hp.validate();
  return hp;
}

}  // namespace

void save_model(std::ostream& out, const Model& m) {
  json j;
  j["version"] = kModelVersion;
  j["tags"] = m.vocab.tags();

  json features = json::array();
  for (int id = 0; id < m.index.size(); ++id) features.push_back({m.index.name(id), id});
  j["features"] = std::move(features);

  json weights = json::array();
  for (int id = 0; id < m.weights.size(); ++id)
    if (m.weights.w[id] != 0.0) weights.push_back({id, m.weights.w[id]});
  j["weights"] = std::move(weights);

  json theta = json::array();
  for (Eigen::Index r = 0; r < m.decoder.theta().rows(); ++r) {
    std::vector<double> row(m.decoder.theta().cols());
    for (Eigen::Index c = 0; c < m.decoder.theta().cols(); ++c) row[c] = m.decoder.theta()(r, c);
    theta.push_back(std::move(row));
  }
  j["theta"] = std::move(theta);

  json rules = json::array();
  for (const auto& [h, c] : m.prior.rules()) rules.push_back({h, c});
  j["prior_rules"] = std::move(rules);
  j["tag_map"] = m.tag_map.mapping;
  j["hyperparams"] = hyperparams_json(m.hp);

  out << j.dump(1) << '\n';
}

void save_model(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  save_model(out, model);
  if (!out) throw DataError("write failed: " + path.string());
}

Model load_model(std::istream& in, const std::string& name) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(name + ": not a model file: " + e.what());
  }
  const std::string version = j.value("version", std::string("<missing>"));
  if (version != kModelVersion)
    throw DataError(name + ": model version '" + version + "' is not supported (expected '" +
                    kModelVersion + "')");
  try {
    Model m;
    m.vocab = TagVocab::from_tags(j.at("tags").get<std::vector<std::string>>());

    const auto& feats = j.at("features");
    std::vector<std::string> names(feats.size());
    for (const auto& f : feats) {
      const auto id = f.at(1).get<std::size_t>();
      if (id >= names.size() || !names[id].empty())
        throw DataError(name + ": bad feature id " + std::to_string(id));
      names[id] = f.at(0).get<std::string>();
    }
    m.index = FeatureIndex(std::move(names));

    m.weights = EncoderWeights(m.index.size());
    for (const auto& w : j.at("weights")) {
      const auto id = w.at(0).get<int>();
      if (id < 0 || id >= m.index.size())
        throw DataError(name + ": weight for unknown feature " + std::to_string(id));
      m.weights.w[id] = w.at(1).get<double>();
    }

    const auto rows = j.at("theta").get<std::vector<std::vector<double>>>();
    const auto v = static_cast<std::size_t>(m.vocab.size());
    if (rows.size() != v) throw DataError(name + ": decoder table size mismatch");
    Eigen::MatrixXd theta(v, v);
    for (std::size_t r = 0; r < v; ++r) {
      if (rows[r].size() != v) throw DataError(name + ": decoder table size mismatch");
      for (std::size_t c = 0; c < v; ++c) theta(r, c) = rows[r][c];
    }
    m.decoder = DecoderTable::from_probabilities(std::move(theta));

    std::set<PriorRules::Rule> rules;
    for (const auto& r : j.at("prior_rules"))
      rules.emplace(r.at(0).get<std::string>(), r.at(1).get<std::string>());
    m.prior = PriorRules(std::move(rules));
    m.tag_map.mapping = j.at("tag_map").get<std::map<std::string, std::string>>();
    m.hp = hyperparams_from(j.at("hyperparams"));
    return m;
  } catch (const json::exception& e) {
    throw DataError(name + ": malformed model: " + e.what());
  } catch (const std::logic_error& e) {
    throw DataError(name + ": invalid model: " + e.what());
  }
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return load_model(in, path.string());
}

}  // namespace crfae
