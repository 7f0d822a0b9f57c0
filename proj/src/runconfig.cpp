#include "skipdim/runconfig.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace skipdim {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key))
      throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void get_to(const json& j, const char* key, T& out) {
  if (j.contains(key)) {
    try {
      j.at(key).get_to(out);
    } catch (const json::exception& e) {
      throw ConfigError(std::string(key) + ": " + e.what());
    }
  }
}

RepulsionMode repulsion_from_string(const std::string& s) {
  if (s == "sgns") return RepulsionMode::kSgns;
  if (s == "none") return RepulsionMode::kNone;
  if (s == "dimreg") return RepulsionMode::kDimreg;
  throw ConfigError("unknown repulsion_mode '" + s + "'");
}

Variant variant_from_string(const std::string& s) {
  if (s == "I") return Variant::kI;
  if (s == "II0") return Variant::kII0;
  if (s == "II") return Variant::kII;
  throw ConfigError("unknown variant '" + s + "' (expected I, II0, or II)");
}

RepulsionMode mode_for_variant(Variant v) {
  switch (v) {
    case Variant::kI: return RepulsionMode::kSgns;
    case Variant::kII0: return RepulsionMode::kNone;
    case Variant::kII: return RepulsionMode::kDimreg;
  }
  throw ConfigError("bad variant");
}

}  // namespace

std::string to_string(ModelKind m) {
  return m == ModelKind::kLine ? "line" : "node2vec";
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::kI: return "I";
    case Variant::kII0: return "II0";
    default: return "II";
  }
}

std::string to_string(RepulsionMode m) {
  switch (m) {
    case RepulsionMode::kSgns: return "sgns";
    case RepulsionMode::kNone: return "none";
    default: return "dimreg";
  }
}

void RunConfig::validate() const {
  if (dataset_path.empty() == generator.type.empty())
    throw ConfigError("config needs exactly one of dataset.path or dataset.generator");
  if (!generator.type.empty() && generator.type != "sbm" &&
      generator.type != "erdos_renyi")
    throw ConfigError("unknown generator '" + generator.type + "'");
  if (mode_for_variant(variant) != train.repulsion)
    throw ConfigError("variant " + to_string(variant) + " implies repulsion_mode " +
                      to_string(mode_for_variant(variant)));
  if (variant == Variant::kII0 && train.epochs > train.none_epoch_cap &&
      !(allow_variant_override || train.allow_uncapped_none))
    throw ConfigError("variant II0 runs at most " + std::to_string(train.none_epoch_cap) +
                      " epochs; pass allow_variant_override to unlock");
  if (std::abs(split.train + split.valid + split.test - 1.0) > 1e-9)
    throw ConfigError("split ratios must sum to 1");
  walk.validate();
  train.validate();
  classifier.validate();
  if (rank.candidates_per_node < 1) throw ConfigError("candidates_per_node must be >= 1");
}

RunConfig parse_run_config(const json& j) {
  check_keys(j, "config",
             {"dataset", "model", "variant", "seed", "allow_variant_override", "split",
              "walk", "train", "classifier", "rank"});
  RunConfig c;

  if (j.contains("dataset")) {
    const json& d = j.at("dataset");
    check_keys(d, "dataset", {"path", "name", "generator"});
    get_to(d, "path", c.dataset_path);
    get_to(d, "name", c.dataset_name);
    if (d.contains("generator")) {
      const json& g = d.at("generator");
      check_keys(g, "dataset.generator", {"type", "n", "blocks", "p_within", "p_between", "p"});
      get_to(g, "type", c.generator.type);
      get_to(g, "n", c.generator.n);
      get_to(g, "blocks", c.generator.blocks);
      get_to(g, "p_within", c.generator.p_within);
      get_to(g, "p_between", c.generator.p_between);
      get_to(g, "p", c.generator.p);
    }
  }
  if (c.dataset_name.empty()) {
    if (!c.dataset_path.empty()) {
      auto slash = c.dataset_path.find_last_of('/');
      std::string stem = slash == std::string::npos ? c.dataset_path
                                                    : c.dataset_path.substr(slash + 1);
      auto dot = stem.find_last_of('.');
      c.dataset_name = dot == std::string::npos ? stem : stem.substr(0, dot);
    } else {
      c.dataset_name = c.generator.type;
    }
  }

  if (j.contains("model")) {
    std::string m = j.at("model").get<std::string>();
    if (m == "line")
      c.model = ModelKind::kLine;
    else if (m == "node2vec")
      c.model = ModelKind::kNode2vec;
    else
      throw ConfigError("unknown model '" + m + "'");
  }

  bool have_variant = j.contains("variant");
  if (have_variant) c.variant = variant_from_string(j.at("variant").get<std::string>());
  get_to(j, "seed", c.seed);
  get_to(j, "allow_variant_override", c.allow_variant_override);

  if (j.contains("split")) {
    const json& s = j.at("split");
    check_keys(s, "split", {"train", "valid", "test"});
    get_to(s, "train", c.split.train);
    get_to(s, "valid", c.split.valid);
    get_to(s, "test", c.split.test);
  }
  if (j.contains("walk")) {
    const json& w = j.at("walk");
    check_keys(w, "walk", {"p", "q", "walk_length", "walks_per_node", "context_size"});
    get_to(w, "p", c.walk.p);
    get_to(w, "q", c.walk.q);
    get_to(w, "walk_length", c.walk.walk_length);
    get_to(w, "walks_per_node", c.walk.walks_per_node);
    get_to(w, "context_size", c.walk.context_size);
  }

  bool have_mode = false;
  if (j.contains("train")) {
    const json& t = j.at("train");
    check_keys(t, "train",
               {"dim", "epochs", "batch_size", "eta", "repulsion_mode", "k", "alpha",
                "sgns_paper_sign", "lambda", "n_negative", "weight_vector_mode",
                "weight_alpha", "optimizer", "adam_beta1", "adam_beta2", "adam_eps",
                "init_scale", "track_constriction", "allow_uncapped_none"});
    get_to(t, "dim", c.train.dim);
    get_to(t, "epochs", c.train.epochs);
    get_to(t, "batch_size", c.train.batch_size);
    get_to(t, "eta", c.train.eta);
    if (t.contains("repulsion_mode")) {
      c.train.repulsion = repulsion_from_string(t.at("repulsion_mode").get<std::string>());
      have_mode = true;
    }
    get_to(t, "k", c.train.k);
    get_to(t, "alpha", c.train.alpha);
    get_to(t, "sgns_paper_sign", c.train.sgns_paper_sign);
    get_to(t, "lambda", c.train.lambda);
    get_to(t, "n_negative", c.train.n_negative);
    if (t.contains("weight_vector_mode")) {
      std::string w = t.at("weight_vector_mode").get<std::string>();
      if (w == "uniform")
        c.train.weight_mode = WeightVectorMode::kUniform;
      else if (w == "degree_alpha")
        c.train.weight_mode = WeightVectorMode::kDegreeAlpha;
      else
        throw ConfigError("unknown weight_vector_mode '" + w + "'");
    }
    get_to(t, "weight_alpha", c.train.weight_alpha);
    if (t.contains("optimizer")) {
      std::string o = t.at("optimizer").get<std::string>();
      if (o == "sgd")
        c.train.optimizer = OptimizerKind::kSgd;
      else if (o == "adam")
        c.train.optimizer = OptimizerKind::kAdam;
      else
        throw ConfigError("unknown optimizer '" + o + "'");
    }
    get_to(t, "adam_beta1", c.train.adam_beta1);
    get_to(t, "adam_beta2", c.train.adam_beta2);
    get_to(t, "adam_eps", c.train.adam_eps);
    get_to(t, "init_scale", c.train.init_scale);
    get_to(t, "track_constriction", c.train.track_constriction);
    get_to(t, "allow_uncapped_none", c.train.allow_uncapped_none);
  }

  // variant and repulsion_mode determine each other
  if (have_variant && have_mode) {
    if (mode_for_variant(c.variant) != c.train.repulsion)
      throw ConfigError("variant " + to_string(c.variant) +
                        " conflicts with repulsion_mode " + to_string(c.train.repulsion));
  } else if (have_variant) {
    c.train.repulsion = mode_for_variant(c.variant);
  } else if (have_mode) {
    c.variant = c.train.repulsion == RepulsionMode::kSgns  ? Variant::kI
                : c.train.repulsion == RepulsionMode::kNone ? Variant::kII0
                                                            : Variant::kII;
  } else {
    c.train.repulsion = mode_for_variant(c.variant);
  }
  if (c.variant == Variant::kII0 && c.allow_variant_override)
    c.train.allow_uncapped_none = true;

  if (j.contains("classifier")) {
    const json& cl = j.at("classifier");
    check_keys(cl, "classifier", {"hidden", "epochs", "batch_size", "eta"});
    get_to(cl, "hidden", c.classifier.hidden);
    get_to(cl, "epochs", c.classifier.epochs);
    get_to(cl, "batch_size", c.classifier.batch_size);
    get_to(cl, "eta", c.classifier.eta);
  }
  if (j.contains("rank")) {
    const json& r = j.at("rank");
    check_keys(r, "rank", {"candidates_per_node", "k_list"});
    get_to(r, "candidates_per_node", c.rank.candidates_per_node);
    get_to(r, "k_list", c.rank.k_list);
  }

  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_run_config(j);
}

nlohmann::json resolved_json(const RunConfig& c) {
  json j;
  j["dataset"]["path"] = c.dataset_path;
  j["dataset"]["name"] = c.dataset_name;
  j["dataset"]["generator"]["type"] = c.generator.type;
  j["dataset"]["generator"]["n"] = c.generator.n;
  j["dataset"]["generator"]["blocks"] = c.generator.blocks;
  j["dataset"]["generator"]["p_within"] = c.generator.p_within;
  j["dataset"]["generator"]["p_between"] = c.generator.p_between;
  j["dataset"]["generator"]["p"] = c.generator.p;
  j["model"] = to_string(c.model);
  j["variant"] = to_string(c.variant);
  j["seed"] = c.seed;
  j["allow_variant_override"] = c.allow_variant_override;
  j["split"]["train"] = c.split.train;
  j["split"]["valid"] = c.split.valid;
  j["split"]["test"] = c.split.test;
  j["walk"]["p"] = c.walk.p;
  j["walk"]["q"] = c.walk.q;
  j["walk"]["walk_length"] = c.walk.walk_length;
  j["walk"]["walks_per_node"] = c.walk.walks_per_node;
  j["walk"]["context_size"] = c.walk.context_size;
  j["train"]["dim"] = c.train.dim;
  j["train"]["epochs"] = c.train.epochs;
  j["train"]["batch_size"] = c.train.batch_size;
  j["train"]["eta"] = c.train.eta;
  j["train"]["repulsion_mode"] = to_string(c.train.repulsion);
  j["train"]["k"] = c.train.k;
  j["train"]["alpha"] = c.train.alpha;
  j["train"]["sgns_paper_sign"] = c.train.sgns_paper_sign;
  j["train"]["lambda"] = c.train.lambda;
  j["train"]["n_negative"] = c.train.n_negative;
  j["train"]["weight_vector_mode"] =
      c.train.weight_mode == WeightVectorMode::kUniform ? "uniform" : "degree_alpha";
  j["train"]["weight_alpha"] = c.train.weight_alpha;
  j["train"]["optimizer"] =
      c.train.optimizer == OptimizerKind::kSgd ? "sgd" : "adam";
  j["train"]["adam_beta1"] = c.train.adam_beta1;
  j["train"]["adam_beta2"] = c.train.adam_beta2;
  j["train"]["adam_eps"] = c.train.adam_eps;
  j["train"]["init_scale"] = c.train.init_scale;
  j["train"]["track_constriction"] = c.train.track_constriction;
  j["train"]["allow_uncapped_none"] = c.train.allow_uncapped_none;
  j["classifier"]["hidden"] = c.classifier.hidden;
  j["classifier"]["epochs"] = c.classifier.epochs;
  j["classifier"]["batch_size"] = c.classifier.batch_size;
  j["classifier"]["eta"] = c.classifier.eta;
  j["rank"]["candidates_per_node"] = c.rank.candidates_per_node;
  j["rank"]["k_list"] = c.rank.k_list;
  return j;
}

std::string config_hash(const RunConfig& c) {
  const std::string dump = resolved_json(c).dump();
  uint64_t h = fnv1a64(dump);
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

void apply_override(nlohmann::json& j, const std::string& key_value) {
  auto eq = key_value.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like dotted.key=value: " + key_value);
  const std::string path = key_value.substr(0, eq);
  const std::string raw = key_value.substr(eq + 1);

  json* cur = &j;
  size_t start = 0;
  while (true) {
    size_t dot = path.find('.', start);
    std::string part = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ConfigError("bad override path: " + path);
    if (dot == std::string::npos) {
      json value;
      try {
        value = json::parse(raw);
      } catch (const json::exception&) {
        value = raw;  // plain string
      }
      (*cur)[part] = value;
      return;
    }
    cur = &(*cur)[part];
    start = dot + 1;
  }
}

}  // namespace skipdim
