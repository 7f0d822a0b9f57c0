#pragma once

#include <string>

#include "json.hpp"
#include "skipdim/graph.hpp"
#include "skipdim/linkpred.hpp"
#include "skipdim/trainer.hpp"
#include "skipdim/walks.hpp"

namespace skipdim {

enum class ModelKind { kLine, kNode2vec };
// I = vanilla SGNS, II0 = attraction-only special case, II = dimension-regularized.
enum class Variant { kI, kII0, kII };

std::string to_string(ModelKind m);
std::string to_string(Variant v);
std::string to_string(RepulsionMode m);

struct GeneratorSpec {
  std::string type;  // "" (none), "sbm", "erdos_renyi"
  int32_t n = 0;
  int32_t blocks = 2;
  double p_within = 0.0;
  double p_between = 0.0;
  double p = 0.0;
};

struct RunConfig {
  std::string dataset_path;  // edge-list file; empty when generated
  std::string dataset_name;  // metadata tag
  GeneratorSpec generator;

  ModelKind model = ModelKind::kLine;
  Variant variant = Variant::kII;
  uint64_t seed = 1;
  bool allow_variant_override = false;

  SplitRatios split;
  WalkConfig walk;
  TrainConfig train;
  ClassifierConfig classifier;
  RankConfig rank;

  // Enforces variant/repulsion agreement and the II0 epoch guard.
  void validate() const;
};

// Strict parse: unknown keys anywhere are rejected; variant and
// train.repulsion_mode must agree when both are present (each implies the
// other: I=sgns, II0=none, II=dimreg).
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

// Every field materialized, keys in canonical (sorted) order.
nlohmann::json resolved_json(const RunConfig& c);
// 16 hex digits over the canonical resolved dump: the run-directory name.
std::string config_hash(const RunConfig& c);

// Applies "dotted.path=value" onto raw config JSON (value parsed as JSON when
// possible, kept as string otherwise).
void apply_override(nlohmann::json& j, const std::string& key_value);

}  // namespace skipdim
