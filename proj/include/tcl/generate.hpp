#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tcl/errors.hpp"
#include "tcl/graph.hpp"
#include "tcl/profile.hpp"

namespace tcl {

// ---------------------------------------------------------------------------
// family builders

inline Graph make_path(int length) {
  if (length < 1) throw InvalidSpec("path length must be positive");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < length; ++i) edges.emplace_back(i, i + 1);
  return Graph::from_edges(length, edges);
}

inline Graph make_cycle(int length) {
  if (length < 3) throw InvalidSpec("cycle length must be at least 3");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < length; ++i) edges.emplace_back(i, i + 1);
  edges.emplace_back(length - 1, 0);
  return Graph::from_edges(length, edges);
}

inline Graph make_complete(int size) {
  if (size < 1) throw InvalidSpec("complete graph size must be positive");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < size; ++i)
    for (int j = i + 1; j < size; ++j) edges.emplace_back(i, j);
  return Graph::from_edges(size, edges);
}

/// Root is node 0, leaves are 1..leaves.
inline Graph make_star(int leaves) {
  if (leaves < 1) throw InvalidSpec("star needs at least one leaf");
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
  return Graph::from_edges(leaves + 1, edges);
}

/// Complete b-ary tree of the given height, nodes in BFS order from the
/// root (id 0).
inline Graph make_tree(int branching, int height) {
  if (branching < 1 || height < 0) throw InvalidSpec("tree needs branching >= 1, height >= 0");
  std::vector<std::pair<int, int>> edges;
  std::vector<int> level{0};
  int next_id = 1;
  for (int h = 0; h < height; ++h) {
    std::vector<int> next_level;
    for (int parent : level)
      for (int b = 0; b < branching; ++b) {
        edges.emplace_back(parent, next_id);
        next_level.push_back(next_id++);
      }
    level = std::move(next_level);
  }
  return Graph::from_edges(next_id, edges);
}

inline Graph make_hypercube(int dimension) {
  if (dimension < 1 || dimension > 20) throw InvalidSpec("hypercube dimension out of range");
  const int n = 1 << dimension;
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int b = 0; b < dimension; ++b) {
      int v = u ^ (1 << b);
      if (u < v) edges.emplace_back(u, v);
    }
  return Graph::from_edges(n, edges);
}

/// d-dimensional grid, row-major indexing (last coordinate fastest).
inline Graph make_grid(const std::vector<int>& sides) {
  if (sides.empty()) throw InvalidSpec("grid needs at least one side");
  long long n = 1;
  for (int s : sides) {
    if (s < 1) throw InvalidSpec("grid sides must be positive");
    n *= s;
    if (n > 2'000'000) throw InvalidSpec("grid too large");
  }
  const int d = static_cast<int>(sides.size());
  std::vector<int> stride(d, 1);
  for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * sides[i + 1];
  std::vector<std::pair<int, int>> edges;
  std::vector<int> coord(d, 0);
  for (int id = 0; id < n; ++id) {
    for (int i = 0; i < d; ++i)
      if (coord[i] + 1 < sides[i]) edges.emplace_back(id, id + stride[i]);
    for (int i = d - 1; i >= 0; --i) {
      if (++coord[i] < sides[i]) break;
      coord[i] = 0;
    }
  }
  return Graph::from_edges(static_cast<int>(n), edges);
}

inline Graph make_grid(int rows, int cols) { return make_grid(std::vector<int>{rows, cols}); }

// ---------------------------------------------------------------------------
// profiles

/// j participants at the root of a star, the rest split evenly over the
/// leaves.
inline Profile star_root_profile(int leaves, long long j, long long n) {
  if (leaves < 1) throw InvalidSpec("star needs at least one leaf");
  if (j < 0 || j > n) throw OutOfRange("root mass must be within [0, n]");
  if ((n - j) % leaves != 0)
    throw IndivisibleRemainder("cannot split " + std::to_string(n - j) + " participants over " +
                               std::to_string(leaves) + " leaves");
  Profile p(leaves + 1);
  p.add(0, j);
  const long long per_leaf = (n - j) / leaves;
  for (int i = 1; i <= leaves; ++i) p.add(i, per_leaf);
  return p;
}

// ---------------------------------------------------------------------------
// declarative specs

enum class Family { Path, Grid, Tree, Star, Hypercube, Cycle, Complete, Explicit };

struct ProfileSpec {
  enum class Kind { UniformK, Counts, DyadicCounterexample, GridNine, StarRoot };

  Kind kind = Kind::UniformK;
  long long uniform_k = 1;
  std::map<int, long long> counts;
  int param_k = 0;                          // dyadic_counterexample / grid_nine
  int star_leaves = 0;                      // star_root
  long long star_j = 0, star_n = 0;

  static ProfileSpec uniform(long long k) {
    ProfileSpec p;
    p.kind = Kind::UniformK;
    p.uniform_k = k;
    return p;
  }
  static ProfileSpec from_counts(std::map<int, long long> m) {
    ProfileSpec p;
    p.kind = Kind::Counts;
    p.counts = std::move(m);
    return p;
  }
  static ProfileSpec dyadic_counterexample(int k) {
    ProfileSpec p;
    p.kind = Kind::DyadicCounterexample;
    p.param_k = k;
    return p;
  }
  static ProfileSpec grid_nine(int k) {
    ProfileSpec p;
    p.kind = Kind::GridNine;
    p.param_k = k;
    return p;
  }
  static ProfileSpec star_root(int leaves, long long j, long long n) {
    ProfileSpec p;
    p.kind = Kind::StarRoot;
    p.star_leaves = leaves;
    p.star_j = j;
    p.star_n = n;
    return p;
  }
};

struct GeneratorSpec {
  Family family = Family::Path;
  int length = 0;                            // path, cycle
  int size = 0;                              // complete
  int leaves = 0;                            // star
  int branching = 0, height = 0;             // tree
  int dimension = 0;                         // hypercube
  std::vector<int> sides;                    // grid
  int nodes = 0;                             // explicit
  std::vector<std::pair<int, int>> edges;    // explicit
  ProfileSpec profile;

  static GeneratorSpec path(int length, ProfileSpec p = ProfileSpec::uniform(1)) {
    GeneratorSpec s;
    s.family = Family::Path;
    s.length = length;
    s.profile = std::move(p);
    return s;
  }
  static GeneratorSpec grid(std::vector<int> sides, ProfileSpec p = ProfileSpec::uniform(1)) {
    GeneratorSpec s;
    s.family = Family::Grid;
    s.sides = std::move(sides);
    s.profile = std::move(p);
    return s;
  }
  static GeneratorSpec tree(int branching, int height, ProfileSpec p = ProfileSpec::uniform(1)) {
    GeneratorSpec s;
    s.family = Family::Tree;
    s.branching = branching;
    s.height = height;
    s.profile = std::move(p);
    return s;
  }
  static GeneratorSpec star(int leaves, ProfileSpec p = ProfileSpec::uniform(1)) {
    GeneratorSpec s;
    s.family = Family::Star;
    s.leaves = leaves;
    s.profile = std::move(p);
    return s;
  }
  static GeneratorSpec hypercube(int dimension, ProfileSpec p = ProfileSpec::uniform(1)) {
    GeneratorSpec s;
    s.family = Family::Hypercube;
    s.dimension = dimension;
    s.profile = std::move(p);
    return s;
  }
  static GeneratorSpec cycle(int length, ProfileSpec p = ProfileSpec::uniform(1)) {
    GeneratorSpec s;
    s.family = Family::Cycle;
    s.length = length;
    s.profile = std::move(p);
    return s;
  }
  static GeneratorSpec complete(int size, ProfileSpec p = ProfileSpec::uniform(1)) {
    GeneratorSpec s;
    s.family = Family::Complete;
    s.size = size;
    s.profile = std::move(p);
    return s;
  }
  static GeneratorSpec explicit_graph(int nodes, std::vector<std::pair<int, int>> edges,
                                      ProfileSpec p = ProfileSpec::uniform(1)) {
    GeneratorSpec s;
    s.family = Family::Explicit;
    s.nodes = nodes;
    s.edges = std::move(edges);
    s.profile = std::move(p);
    return s;
  }
};

inline Graph build_family(const GeneratorSpec& s) {
  switch (s.family) {
    case Family::Path: return make_path(s.length);
    case Family::Cycle: return make_cycle(s.length);
    case Family::Complete: return make_complete(s.size);
    case Family::Star: return make_star(s.leaves);
    case Family::Tree: return make_tree(s.branching, s.height);
    case Family::Hypercube: return make_hypercube(s.dimension);
    case Family::Grid: return make_grid(s.sides);
    case Family::Explicit: return Graph::from_edges(s.nodes, s.edges);
  }
  throw InvalidSpec("unknown family");
}

/// Deterministic graph + profile for a spec. Structured profiles are checked
/// against the family they presuppose.
inline std::pair<Graph, Profile> generate(const GeneratorSpec& s) {
  Graph g = build_family(s);
  const int n = g.node_count();
  Profile p(n);
  switch (s.profile.kind) {
    case ProfileSpec::Kind::UniformK: {
      if (s.profile.uniform_k < 1) throw InvalidSpec("uniform_k must be positive");
      for (int v = 0; v < n; ++v) p.add(v, s.profile.uniform_k);
      break;
    }
    case ProfileSpec::Kind::Counts: {
      for (auto [node, c] : s.profile.counts) {
        if (node < 0 || node >= n) throw InvalidSpec("profile count at unknown node");
        p.add(node, c);
      }
      if (p.total() < 1) throw InvalidSpec("profile has no participants");
      break;
    }
    case ProfileSpec::Kind::DyadicCounterexample: {
      const int k = s.profile.param_k;
      if (s.family != Family::Path || s.length != k + 1)
        throw InvalidSpec("dyadic_counterexample(k) requires a path of k+1 nodes");
      p.add(0, k + 1);
      for (int i = 1; i <= k; ++i) p.add(i, 1);
      break;
    }
    case ProfileSpec::Kind::GridNine: {
      const int k = s.profile.param_k;
      if (s.family != Family::Grid || s.sides != std::vector<int>{k, k})
        throw InvalidSpec("grid_nine(k) requires a k x k grid");
      for (int v = 0; v < n; ++v) p.add(v, 9);
      break;
    }
    case ProfileSpec::Kind::StarRoot: {
      if (s.family != Family::Star || s.leaves != s.profile.star_leaves)
        throw InvalidSpec("star_root requires a star with matching leaf count");
      p = star_root_profile(s.profile.star_leaves, s.profile.star_j, s.profile.star_n);
      break;
    }
  }
  return {std::move(g), std::move(p)};
}

// ---------------------------------------------------------------------------
// JSON spec format

namespace detail {

inline void require_keys(const nlohmann::json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const auto& k : allowed)
      if (it.key() == k) known = true;
    if (!known) throw SchemaError("unknown key \"" + it.key() + "\" in " + where);
  }
}

inline long long get_int(const nlohmann::json& obj, const std::string& key) {
  if (!obj.contains(key)) throw SchemaError("missing key \"" + key + "\"");
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw SchemaError("key \"" + key + "\" must be an integer");
  return v.get<long long>();
}

}  // namespace detail

inline ProfileSpec parse_profile_spec(const nlohmann::json& j) {
  if (!j.is_object() || j.size() != 1)
    throw SchemaError("profile must be an object with exactly one kind");
  if (j.contains("uniform_k")) {
    if (!j.at("uniform_k").is_number_integer()) throw SchemaError("uniform_k must be an integer");
    return ProfileSpec::uniform(j.at("uniform_k").get<long long>());
  }
  if (j.contains("counts")) {
    const auto& c = j.at("counts");
    if (!c.is_object()) throw SchemaError("counts must map node ids to integers");
    std::map<int, long long> counts;
    for (auto it = c.begin(); it != c.end(); ++it) {
      std::size_t pos = 0;
      int node;
      try {
        node = std::stoi(it.key(), &pos);
      } catch (const std::exception&) {
        throw SchemaError("counts key \"" + it.key() + "\" is not a node id");
      }
      if (pos != it.key().size()) throw SchemaError("counts key \"" + it.key() + "\" is not a node id");
      if (!it.value().is_number_integer()) throw SchemaError("counts values must be integers");
      counts[node] = it.value().get<long long>();
    }
    return ProfileSpec::from_counts(std::move(counts));
  }
  if (j.contains("dyadic_counterexample")) {
    const auto& o = j.at("dyadic_counterexample");
    if (!o.is_object()) throw SchemaError("dyadic_counterexample must be an object");
    detail::require_keys(o, {"k"}, "dyadic_counterexample");
    return ProfileSpec::dyadic_counterexample(static_cast<int>(detail::get_int(o, "k")));
  }
  if (j.contains("grid_nine")) {
    const auto& o = j.at("grid_nine");
    if (!o.is_object()) throw SchemaError("grid_nine must be an object");
    detail::require_keys(o, {"k"}, "grid_nine");
    return ProfileSpec::grid_nine(static_cast<int>(detail::get_int(o, "k")));
  }
  if (j.contains("star_root")) {
    const auto& o = j.at("star_root");
    if (!o.is_object()) throw SchemaError("star_root must be an object");
    detail::require_keys(o, {"leaves", "j", "n"}, "star_root");
    return ProfileSpec::star_root(static_cast<int>(detail::get_int(o, "leaves")),
                                  detail::get_int(o, "j"), detail::get_int(o, "n"));
  }
  throw SchemaError("profile kind not recognized");
}

inline GeneratorSpec parse_spec(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("spec must be a JSON object");
  if (!j.contains("family") || !j.at("family").is_string())
    throw SchemaError("spec needs a \"family\" string");
  if (!j.contains("profile")) throw SchemaError("spec needs a \"profile\" object");
  const std::string family = j.at("family").get<std::string>();
  GeneratorSpec s;
  s.profile = parse_profile_spec(j.at("profile"));
  if (family == "path" || family == "cycle") {
    detail::require_keys(j, {"family", "length", "profile"}, "spec");
    s.family = family == "path" ? Family::Path : Family::Cycle;
    s.length = static_cast<int>(detail::get_int(j, "length"));
  } else if (family == "complete") {
    detail::require_keys(j, {"family", "size", "profile"}, "spec");
    s.family = Family::Complete;
    s.size = static_cast<int>(detail::get_int(j, "size"));
  } else if (family == "star") {
    detail::require_keys(j, {"family", "leaves", "profile"}, "spec");
    s.family = Family::Star;
    s.leaves = static_cast<int>(detail::get_int(j, "leaves"));
  } else if (family == "tree") {
    detail::require_keys(j, {"family", "branching", "height", "profile"}, "spec");
    s.family = Family::Tree;
    s.branching = static_cast<int>(detail::get_int(j, "branching"));
    s.height = static_cast<int>(detail::get_int(j, "height"));
  } else if (family == "hypercube") {
    detail::require_keys(j, {"family", "dimension", "profile"}, "spec");
    s.family = Family::Hypercube;
    s.dimension = static_cast<int>(detail::get_int(j, "dimension"));
  } else if (family == "grid") {
    detail::require_keys(j, {"family", "sides", "profile"}, "spec");
    if (!j.contains("sides") || !j.at("sides").is_array())
      throw SchemaError("grid spec needs \"sides\" array");
    s.family = Family::Grid;
    for (const auto& v : j.at("sides")) {
      if (!v.is_number_integer()) throw SchemaError("grid sides must be integers");
      s.sides.push_back(v.get<int>());
    }
  } else if (family == "explicit") {
    detail::require_keys(j, {"family", "nodes", "edges", "profile"}, "spec");
    s.family = Family::Explicit;
    s.nodes = static_cast<int>(detail::get_int(j, "nodes"));
    if (!j.contains("edges") || !j.at("edges").is_array())
      throw SchemaError("explicit spec needs \"edges\" array");
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
        throw SchemaError("edges must be [int,int] pairs");
      s.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
  } else {
    throw SchemaError("unknown family \"" + family + "\"");
  }
  return s;
}

inline nlohmann::json profile_spec_to_json(const ProfileSpec& p) {
  nlohmann::json j;
  switch (p.kind) {
    case ProfileSpec::Kind::UniformK: j["uniform_k"] = p.uniform_k; break;
    case ProfileSpec::Kind::Counts: {
      nlohmann::json c = nlohmann::json::object();
      for (auto [node, count] : p.counts) c[std::to_string(node)] = count;
      j["counts"] = std::move(c);
      break;
    }
    case ProfileSpec::Kind::DyadicCounterexample:
      j["dyadic_counterexample"] = {{"k", p.param_k}};
      break;
    case ProfileSpec::Kind::GridNine: j["grid_nine"] = {{"k", p.param_k}}; break;
    case ProfileSpec::Kind::StarRoot:
      j["star_root"] = {{"leaves", p.star_leaves}, {"j", p.star_j}, {"n", p.star_n}};
      break;
  }
  return j;
}

inline nlohmann::json spec_to_json(const GeneratorSpec& s) {
  nlohmann::json j;
  switch (s.family) {
    case Family::Path:
      j["family"] = "path";
      j["length"] = s.length;
      break;
    case Family::Cycle:
      j["family"] = "cycle";
      j["length"] = s.length;
      break;
    case Family::Complete:
      j["family"] = "complete";
      j["size"] = s.size;
      break;
    case Family::Star:
      j["family"] = "star";
      j["leaves"] = s.leaves;
      break;
    case Family::Tree:
      j["family"] = "tree";
      j["branching"] = s.branching;
      j["height"] = s.height;
      break;
    case Family::Hypercube:
      j["family"] = "hypercube";
      j["dimension"] = s.dimension;
      break;
    case Family::Grid:
      j["family"] = "grid";
      j["sides"] = s.sides;
      break;
    case Family::Explicit:
      j["family"] = "explicit";
      j["nodes"] = s.nodes;
      j["edges"] = nlohmann::json::array();
      for (auto [u, v] : s.edges) j["edges"].push_back({u, v});
      break;
  }
  j["profile"] = profile_spec_to_json(s.profile);
  return j;
}

/// Parse a UTF-8 JSON document and generate its graph and profile.
inline std::pair<Graph, Profile> load_spec(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return generate(parse_spec(j));
}

}  // namespace tcl
