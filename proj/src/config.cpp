#include "dmab/config.hpp"

#include <fstream>
#include <set>

namespace dmab {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(where.empty() ? "config" : where, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key))
      throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
  }
}

std::string path_of(const std::string& where, const char* key) {
  return where.empty() ? key : where + "." + key;
}

std::size_t get_count(const json& obj, const std::string& where, const char* key, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(path_of(where, key), "expected an integer");
  if (v.get<long long>() < 0) throw ConfigError(path_of(where, key), "must be >= 0");
  return v.get<std::size_t>();
}

double get_real(const json& obj, const std::string& where, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path_of(where, key), "expected a number");
  return v.get<double>();
}

std::string get_string(const json& obj, const std::string& where, const char* key, std::string fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(path_of(where, key), "expected a string");
  return v.get<std::string>();
}

bool get_bool(const json& obj, const std::string& where, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(path_of(where, key), "expected true or false");
  return v.get<bool>();
}

std::vector<AgentId> get_agents(const json& v, const std::string& field) {
  if (!v.is_array()) throw ConfigError(field, "expected a list of agent ids");
  std::vector<AgentId> out;
  for (const auto& x : v) {
    if (!x.is_number_integer() || x.get<long long>() < 0)
      throw ConfigError(field, "agent ids must be non-negative integers");
    out.push_back(x.get<AgentId>());
  }
  return out;
}

template <typename F>
auto parse_enum(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

GraphSpec parse_graph(const json& g) {
  reject_unknown(g, "graph", {"generator", "nodes", "p", "chord_offset", "max_retries", "edges"});
  GraphSpec spec;
  const std::string name = get_string(g, "graph", "generator", "complete");
  spec.kind = parse_enum("graph.generator", [&] { return graph_kind_from_string(name); });
  spec.nodes = get_count(g, "graph", "nodes", 0);
  if (spec.nodes < 1) throw ConfigError("graph.nodes", "must be >= 1");
  spec.edge_probability = get_real(g, "graph", "p", spec.edge_probability);
  spec.chord_offset = get_count(g, "graph", "chord_offset", 0);
  spec.max_retries = get_count(g, "graph", "max_retries", spec.max_retries);
  if (g.contains("edges")) {
    const auto& edges = g.at("edges");
    if (!edges.is_array()) throw ConfigError("graph.edges", "expected a list of [u, v] pairs");
    for (const auto& e : edges) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
          e[0].get<long long>() < 0 || e[1].get<long long>() < 0)
        throw ConfigError("graph.edges", "each edge must be a pair of node ids");
      spec.edges.emplace_back(e[0].get<AgentId>(), e[1].get<AgentId>());
    }
  }
  if (spec.kind == GraphKind::EdgeList && !g.contains("edges") && spec.nodes > 1)
    throw ConfigError("graph.edges", "required for the 'edges' generator");
  if (spec.kind != GraphKind::EdgeList && g.contains("edges"))
    throw ConfigError("graph.edges", "only used by the 'edges' generator");
  if (spec.kind != GraphKind::ErdosRenyi && (g.contains("p") || g.contains("max_retries")))
    throw ConfigError(g.contains("p") ? "graph.p" : "graph.max_retries",
                      "only used by the 'erdos_renyi' generator");
  if (spec.kind != GraphKind::RingChords && g.contains("chord_offset"))
    throw ConfigError("graph.chord_offset", "only used by the 'ring_chords' generator");
  return spec;
}

InstanceSpec parse_instance(const json& j) {
  reject_unknown(j, "instance", {"arms", "family", "sigma", "means", "mean_range", "clip"});
  InstanceSpec spec;
  spec.arms = get_count(j, "instance", "arms", 0);
  const std::string family = get_string(j, "instance", "family", "gaussian");
  spec.family = parse_enum("instance.family", [&] { return reward_family_from_string(family); });
  spec.sigma = get_real(j, "instance", "sigma", spec.sigma);
  spec.clip = get_bool(j, "instance", "clip", spec.clip);
  if (j.contains("means")) {
    const auto& m = j.at("means");
    if (!m.is_array()) throw ConfigError("instance.means", "expected a list of numbers");
    for (const auto& x : m) {
      if (!x.is_number()) throw ConfigError("instance.means", "expected a list of numbers");
      spec.means.push_back(x.get<double>());
    }
    if (!j.contains("arms")) spec.arms = spec.means.size();
  }
  if (j.contains("mean_range")) {
    const auto& r = j.at("mean_range");
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
      throw ConfigError("instance.mean_range", "expected [lo, hi]");
    spec.mean_lo = r[0].get<double>();
    spec.mean_hi = r[1].get<double>();
  }
  return spec;
}

AlgorithmConfig parse_algorithm(const json& j) {
  reject_unknown(j, "algorithm", {"name", "alpha", "w", "lambda", "ucb_coef"});
  AlgorithmConfig alg;
  alg.name = get_string(j, "algorithm", "name", alg.name);
  alg.alpha = get_real(j, "algorithm", "alpha", alg.alpha);
  alg.w = get_count(j, "algorithm", "w", alg.w);
  alg.ucb_coef = get_real(j, "algorithm", "ucb_coef", alg.ucb_coef);
  if (j.contains("lambda")) {
    const auto& l = j.at("lambda");
    if (l.is_number()) {
      alg.lambda_rule = LambdaRule::Fixed;
      alg.lambda = l.get<double>();
    } else if (l.is_string() && l.get<std::string>() == "experiment") {
      alg.lambda_rule = LambdaRule::Experiment;
    } else if (l.is_string() && l.get<std::string>() == "theory") {
      alg.lambda_rule = LambdaRule::Theory;
    } else {
      throw ConfigError("algorithm.lambda", "expected a number, \"experiment\" or \"theory\"");
    }
  }
  return alg;
}

ThreatConfig parse_threat(const json& j) {
  ThreatConfig threat;
  if (!j.is_object()) throw ConfigError("threat", "expected an object");
  const std::string model = get_string(j, "threat", "model", "none");
  if (model == "none") {
    reject_unknown(j, "threat", {"model"});
    return threat;
  }
  if (model == "corruption") {
    reject_unknown(j, "threat", {"model", "budget", "agents", "attack", "target_threshold", "trigger"});
    threat.model = ThreatModel::Corruption;
    threat.budget = get_real(j, "threat", "budget", 0.0);
    if (const std::string attack = get_string(j, "threat", "attack", "targeted"); attack != "targeted")
      throw ConfigError("threat.attack", "only the 'targeted' corruption attack exists");
    threat.attack.target_threshold = get_real(j, "threat", "target_threshold", 0.5);
    const std::string trigger = get_string(j, "threat", "trigger", "always");
    threat.attack.trigger = parse_enum("threat.trigger", [&] { return attack_trigger_from_string(trigger); });
    if (!j.contains("agents") || (j.at("agents").is_string() && j.at("agents") == "all")) {
      threat.all_agents = true;
    } else {
      threat.agents = get_agents(j.at("agents"), "threat.agents");
    }
    return threat;
  }
  if (model == "byzantine") {
    reject_unknown(j, "threat", {"model", "agents", "attack", "noise", "noise_is"});
    threat.model = ThreatModel::Byzantine;
    if (!j.contains("agents")) throw ConfigError("threat.agents", "required in Byzantine mode");
    threat.agents = get_agents(j.at("agents"), "threat.agents");
    const std::string attack = get_string(j, "threat", "attack", "adaptive");
    threat.byzantine_attack = parse_enum("threat.attack", [&] { return byzantine_attack_from_string(attack); });
    threat.noise = get_real(j, "threat", "noise", threat.noise);
    const std::string noise_is = get_string(j, "threat", "noise_is", "variance");
    if (noise_is != "variance" && noise_is != "std")
      throw ConfigError("threat.noise_is", "expected \"variance\" or \"std\"");
    threat.noise_is_std = noise_is == "std";
    return threat;
  }
  throw ConfigError("threat.model", "unknown threat model '" + model + "'");
}

}  // namespace

ExperimentConfig parse_config_json(const json& doc) {
  reject_unknown(doc, "", {"graph", "instance", "algorithm", "threat", "horizon", "trials", "seed", "manifest"});
  ExperimentConfig cfg;
  if (!doc.contains("graph")) throw ConfigError("graph", "required");
  if (!doc.contains("instance")) throw ConfigError("instance", "required");
  if (!doc.contains("horizon")) throw ConfigError("horizon", "required");
  cfg.graph = parse_graph(doc.at("graph"));
  cfg.instance = parse_instance(doc.at("instance"));
  if (doc.contains("algorithm")) cfg.algorithm = parse_algorithm(doc.at("algorithm"));
  if (doc.contains("threat")) cfg.threat = parse_threat(doc.at("threat"));
  cfg.horizon = get_count(doc, "", "horizon", 0);
  cfg.trials = get_count(doc, "", "trials", 1);
  if (doc.contains("seed")) {
    const auto& s = doc.at("seed");
    if (!s.is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", "'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config_json(doc);
}

json to_json(const ExperimentConfig& cfg) {
  json graph{{"generator", to_string(cfg.graph.kind)}, {"nodes", cfg.graph.nodes}};
  switch (cfg.graph.kind) {
    case GraphKind::ErdosRenyi:
      graph["p"] = cfg.graph.edge_probability;
      graph["max_retries"] = cfg.graph.max_retries;
      break;
    case GraphKind::RingChords:
      graph["chord_offset"] = cfg.graph.chord_offset;
      break;
    case GraphKind::EdgeList: {
      json edges = json::array();
      for (auto [u, v] : cfg.graph.edges) edges.push_back({u, v});
      graph["edges"] = edges;
      break;
    }
    default:
      break;
  }

  json instance{{"arms", cfg.instance.arms},
                {"family", to_string(cfg.instance.family)},
                {"sigma", cfg.instance.sigma},
                {"clip", cfg.instance.clip},
                {"mean_range", {cfg.instance.mean_lo, cfg.instance.mean_hi}}};
  if (!cfg.instance.means.empty()) instance["means"] = cfg.instance.means;

  json algorithm{{"name", cfg.algorithm.name},
                 {"alpha", cfg.algorithm.alpha},
                 {"w", cfg.algorithm.w},
                 {"ucb_coef", cfg.algorithm.ucb_coef}};
  if (cfg.algorithm.lambda_rule == LambdaRule::Fixed) algorithm["lambda"] = cfg.algorithm.lambda;
  else algorithm["lambda"] = to_string(cfg.algorithm.lambda_rule);

  json threat{{"model", to_string(cfg.threat.model)}};
  if (cfg.threat.model == ThreatModel::Corruption) {
    threat["budget"] = cfg.threat.budget;
    threat["attack"] = "targeted";
    threat["target_threshold"] = cfg.threat.attack.target_threshold;
    threat["trigger"] = to_string(cfg.threat.attack.trigger);
    if (cfg.threat.all_agents) threat["agents"] = "all";
    else threat["agents"] = cfg.threat.agents;
  } else if (cfg.threat.model == ThreatModel::Byzantine) {
    threat["agents"] = cfg.threat.agents;
    threat["attack"] = to_string(cfg.threat.byzantine_attack);
    threat["noise"] = cfg.threat.noise;
    threat["noise_is"] = cfg.threat.noise_is_std ? "std" : "variance";
  }

  return json{{"graph", graph},         {"instance", instance}, {"algorithm", algorithm},
              {"threat", threat},       {"horizon", cfg.horizon}, {"trials", cfg.trials},
              {"seed", cfg.seed}};
}

}  // namespace dmab
