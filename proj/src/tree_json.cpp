#include "treepat/tree_json.hpp"

#include <json.hpp>

#include "treepat/errors.hpp"

namespace treepat {

using nlohmann::json;

namespace {

json nodesOf(const RootedTree& t) {
  json nodes = json::array();
  for (NodeId v = 0; v < t.size(); ++v) {
    json node{{"id", v}};
    if (auto p = t.parent(v)) node["parent"] = *p;
    else node["parent"] = nullptr;
    nodes.push_back(std::move(node));
  }
  return nodes;
}

std::uint64_t requireUnsigned(const json& j, const std::string& what) {
  if (!j.is_number_unsigned()) throw ParseError(what + " must be a non-negative integer");
  return j.get<std::uint64_t>();
}

}  // namespace

std::string serializeTree(const RootedTree& t) {
  return json{{"nodes", nodesOf(t)}}.dump();
}

std::string serializeTree(const SplitTree& t) {
  json nodes = nodesOf(t.tree());
  for (NodeId v = 0; v < t.tree().size(); ++v) nodes[v]["balls"] = t.bag(v);
  const SplitParams& p = t.params();
  json meta{{"b", p.b},
            {"s", p.s},
            {"s0", p.s0},
            {"s1", p.s1},
            {"distribution", p.distribution.name()},
            {"seed", t.seed()},
            {"n", t.ballCount()}};
  return json{{"nodes", std::move(nodes)}, {"meta", std::move(meta)}}.dump();
}

TreeDocument parseTreeDocument(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("tree document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array())
    throw ParseError("tree document needs a \"nodes\" array");
  const json& nodes = doc["nodes"];
  const std::size_t n = nodes.size();
  if (n == 0) throw ParseError("tree has no nodes");

  std::vector<NodeId> parents(n, kNoNode);
  std::vector<char> seen(n, 0);
  std::vector<std::vector<BallId>> bags(n);
  bool anyBalls = false;
  for (std::size_t i = 0; i < n; ++i) {
    const json& node = nodes[i];
    if (!node.is_object() || !node.contains("id")) throw ParseError("node entry " + std::to_string(i) + " has no id");
    const std::uint64_t id = requireUnsigned(node["id"], "node entry " + std::to_string(i) + " id");
    if (id >= n) throw ParseError("node " + std::to_string(id) + ": ids must be 0.." + std::to_string(n - 1));
    if (seen[id]) throw ParseError("node " + std::to_string(id) + " listed twice");
    seen[id] = 1;
    const std::string where = "node " + std::to_string(id);
    if (!node.contains("parent")) throw ParseError(where + " has no parent field");
    if (!node["parent"].is_null()) {
      const std::uint64_t p = requireUnsigned(node["parent"], where + " parent");
      if (p >= n) throw ParseError(where + " has out-of-range parent " + std::to_string(p));
      parents[id] = static_cast<NodeId>(p);
    }
    if (node.contains("balls")) {
      if (!node["balls"].is_array()) throw ParseError(where + " balls must be an array");
      anyBalls = true;
      for (const json& b : node["balls"]) bags[id].push_back(static_cast<BallId>(requireUnsigned(b, where + " ball")));
    }
  }
  RootedTree tree = RootedTree::fromParents(std::move(parents));
  if (!anyBalls) return TreeDocument(std::move(tree));

  SplitParams params;
  std::uint64_t seed = 0;
  if (doc.contains("meta")) {
    const json& meta = doc["meta"];
    try {
      if (meta.contains("b")) params.b = static_cast<unsigned>(requireUnsigned(meta["b"], "meta.b"));
      if (meta.contains("s")) params.s = static_cast<unsigned>(requireUnsigned(meta["s"], "meta.s"));
      if (meta.contains("s0")) params.s0 = static_cast<unsigned>(requireUnsigned(meta["s0"], "meta.s0"));
      if (meta.contains("s1")) params.s1 = static_cast<unsigned>(requireUnsigned(meta["s1"], "meta.s1"));
      if (meta.contains("distribution"))
        params.distribution = SplitDistribution::parse(meta["distribution"].get<std::string>(), params.b);
      if (meta.contains("seed")) seed = requireUnsigned(meta["seed"], "meta.seed");
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed meta: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("malformed meta: ") + e.what());
    }
  }
  try {
    SplitTree split(std::move(tree), std::move(bags), std::move(params), seed);
    if (doc.contains("meta") && doc["meta"].contains("n") &&
        requireUnsigned(doc["meta"]["n"], "meta.n") != split.ballCount())
      throw ParseError("meta.n disagrees with the number of balls listed");
    return TreeDocument(std::move(split));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

RootedTree deserializeTree(const std::string& text) {
  return parseTreeDocument(text).tree();
}

}  // namespace treepat
