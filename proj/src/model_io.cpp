#include "model_io.hpp"

#include <fstream>
#include <limits>

#include <json.hpp>

namespace aniso {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kFormatName = "aniso-model";

json side_to_json(const std::vector<double>& side) {
  json arr = json::array();
  for (double v : side) {
    if (std::isfinite(v)) {
      arr.push_back(v);
    } else {
      arr.push_back(nullptr);  // unbounded: -inf on lower sides, +inf on upper
    }
  }
  return arr;
}

json box_to_json(const HyperRectangle& box) {
  return json{{"lower", side_to_json(box.lower)}, {"upper", side_to_json(box.upper)}};
}

std::vector<double> side_from_json(const json& arr, double unbounded) {
  std::vector<double> side;
  side.reserve(arr.size());
  for (const auto& v : arr) {
    side.push_back(v.is_null() ? unbounded : v.get<double>());
  }
  return side;
}

HyperRectangle box_from_json(const json& j) {
  const double inf = std::numeric_limits<double>::infinity();
  return HyperRectangle(side_from_json(j.at("lower"), -inf), side_from_json(j.at("upper"), inf));
}

json alpha_to_json(const Alpha& alpha) {
  if (alpha.is_infinite()) return "inf";
  return alpha.value();
}

Alpha alpha_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return Alpha::infinity();
    fail(ErrorCode::corrupt_file, "model file: unknown alpha string");
  }
  return Alpha(j.get<double>());
}

const char* scorer_name(ScorerKind kind) {
  return kind == ScorerKind::depth ? "depth" : "volume";
}

ScorerKind scorer_from_name(const std::string& name) {
  if (name == "depth") return ScorerKind::depth;
  if (name == "volume") return ScorerKind::volume;
  fail(ErrorCode::corrupt_file, "model file: unknown scorer '" + name + "'");
}

const char* bounding_name(BoundingPolicy policy) {
  switch (policy) {
    case BoundingPolicy::per_tree: return "per_tree";
    case BoundingPolicy::global: return "global";
    case BoundingPolicy::user: return "user";
  }
  return "per_tree";
}

BoundingPolicy bounding_from_name(const std::string& name) {
  if (name == "per_tree") return BoundingPolicy::per_tree;
  if (name == "global") return BoundingPolicy::global;
  if (name == "user") return BoundingPolicy::user;
  fail(ErrorCode::corrupt_file, "model file: unknown bounding policy '" + name + "'");
}

json tree_to_json(const IsolationTree& tree) {
  json nodes = json::array();
  for (const auto& node : tree.nodes()) {
    if (const auto* split = std::get_if<SplitNode>(&node)) {
      nodes.push_back(json{{"feature", split->feature},
                           {"threshold", split->threshold},
                           {"left", split->left},
                           {"right", split->right}});
    } else {
      const auto& leaf = std::get<LeafNode>(node);
      nodes.push_back(json{{"depth", leaf.depth},
                           {"count", leaf.count},
                           {"rect", box_to_json(leaf.rect)}});
    }
  }
  return json{{"subsample_size", tree.subsample_size()},
              {"bounding_box", box_to_json(tree.bounding_box())},
              {"nodes", std::move(nodes)}};
}

IsolationTree tree_from_json(const json& j, std::size_t dim) {
  const auto& node_array = j.at("nodes");
  if (!node_array.is_array() || node_array.empty()) {
    fail(ErrorCode::corrupt_file, "model file: tree without nodes");
  }
  std::vector<TreeNode> nodes;
  nodes.reserve(node_array.size());
  for (const auto& n : node_array) {
    if (n.contains("feature")) {
      SplitNode split;
      split.feature = n.at("feature").get<std::uint32_t>();
      split.threshold = n.at("threshold").get<double>();
      split.left = n.at("left").get<std::uint32_t>();
      split.right = n.at("right").get<std::uint32_t>();
      if (split.feature >= dim || split.left >= node_array.size() ||
          split.right >= node_array.size() || !std::isfinite(split.threshold)) {
        fail(ErrorCode::corrupt_file, "model file: split node out of range");
      }
      nodes.emplace_back(split);
    } else {
      LeafNode leaf;
      leaf.depth = n.at("depth").get<std::uint32_t>();
      leaf.count = n.at("count").get<std::uint32_t>();
      leaf.rect = box_from_json(n.at("rect"));
      if (leaf.rect.dim() != dim || leaf.count == 0) {
        fail(ErrorCode::corrupt_file, "model file: malformed leaf");
      }
      nodes.emplace_back(std::move(leaf));
    }
  }
  HyperRectangle bounding = box_from_json(j.at("bounding_box"));
  if (bounding.dim() != dim) {
    fail(ErrorCode::corrupt_file, "model file: tree bounding box dimension mismatch");
  }
  return IsolationTree(std::move(nodes), j.at("subsample_size").get<std::uint32_t>(),
                       std::move(bounding));
}

}  // namespace

void save_model(const std::string& path, const Detector& detector) {
  const auto& config = detector.config();
  json doc;
  doc["format"] = kFormatName;
  doc["format_version"] = kModelFormatVersion;

  json cfg;
  cfg["n_estimators"] = config.n_estimators;
  cfg["subsample_size"] = config.subsample_size;
  cfg["scorer"] = scorer_name(config.scorer);
  cfg["alpha"] = alpha_to_json(config.alpha);
  cfg["tau"] = config.tau ? json(*config.tau) : json(nullptr);
  cfg["contamination"] = config.contamination ? json(*config.contamination) : json(nullptr);
  cfg["seed"] = config.seed;
  cfg["strict_paper_depth"] = config.strict_paper_depth;
  cfg["bounding_policy"] = bounding_name(config.bounding);
  cfg["user_box"] = config.user_box ? box_to_json(*config.user_box) : json(nullptr);
  doc["config"] = std::move(cfg);

  doc["fitted_tau"] = detector.fitted_tau() ? json(*detector.fitted_tau()) : json(nullptr);
  doc["dim"] = detector.forest().dim();
  doc["data_bounds"] = box_to_json(detector.forest().data_bounds());
  doc["trees"] = json::array();
  for (const auto& tree : detector.forest().trees()) {
    doc["trees"].push_back(tree_to_json(tree));
  }

  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  out << doc.dump(1) << '\n';
  if (!out.good()) fail(ErrorCode::io_error, "failed writing '" + path + "'");
}

Detector load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open '" + path + "' for reading");

  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::corrupt_file, std::string("model file: ") + e.what());
  }

  try {
    if (!doc.contains("format_version") || !doc.at("format_version").is_number_integer()) {
      fail(ErrorCode::corrupt_file, "model file: missing format version");
    }
    if (doc.at("format_version").get<int>() != kModelFormatVersion) {
      fail(ErrorCode::version_mismatch,
           "model file: format version " + doc.at("format_version").dump() +
               ", this build reads version " + std::to_string(kModelFormatVersion));
    }

    const auto& cfg = doc.at("config");
    DetectorConfig config;
    config.n_estimators = cfg.at("n_estimators").get<std::uint32_t>();
    config.subsample_size = cfg.at("subsample_size").get<std::uint32_t>();
    config.scorer = scorer_from_name(cfg.at("scorer").get<std::string>());
    config.alpha = alpha_from_json(cfg.at("alpha"));
    if (!cfg.at("tau").is_null()) config.tau = cfg.at("tau").get<double>();
    if (!cfg.at("contamination").is_null()) {
      config.contamination = cfg.at("contamination").get<double>();
    }
    config.seed = cfg.at("seed").get<std::uint64_t>();
    config.strict_paper_depth = cfg.at("strict_paper_depth").get<bool>();
    config.bounding = bounding_from_name(cfg.at("bounding_policy").get<std::string>());
    if (!cfg.at("user_box").is_null()) config.user_box = box_from_json(cfg.at("user_box"));

    const auto dim = doc.at("dim").get<std::size_t>();
    HyperRectangle data_bounds = box_from_json(doc.at("data_bounds"));
    if (data_bounds.dim() != dim) {
      fail(ErrorCode::corrupt_file, "model file: data bounds dimension mismatch");
    }

    std::vector<IsolationTree> trees;
    for (const auto& tj : doc.at("trees")) {
      trees.push_back(tree_from_json(tj, dim));
    }
    ForestModel forest(std::move(trees),
                       FitConfig{config.n_estimators, config.subsample_size, config.seed},
                       std::move(data_bounds));

    std::optional<double> fitted_tau;
    if (!doc.at("fitted_tau").is_null()) fitted_tau = doc.at("fitted_tau").get<double>();
    return Detector(std::move(forest), std::move(config), fitted_tau);
  } catch (const json::exception& e) {
    fail(ErrorCode::corrupt_file, std::string("model file: ") + e.what());
  } catch (const Error&) {
    throw;
  }
}

}  // namespace aniso
