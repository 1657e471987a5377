#pragma once

// Built-in fundamental graphs.
//
//   line2(q)        1D lattice with period 2: v0 -> v1 index 0, v1 -> v0 index 1,
//                   potentials (+q, -q).
//   lattice(d)      d-dimensional square lattice: one vertex, d loops e_1..e_d.
//   hexagonal(q)    hexagonal lattice: v1 -> v2 index (0,0), v2 -> v1 indices
//                   (1,0) and (0,1), potentials (+q, -q).
//   hex-limit(q)    limit graph of line2 perturbed by v0 -> v1: edge indices
//                   (0,0), (1,0), (0,1), isomorphic to the hexagonal lattice.
//   line2-limit(q)  alias of hex-limit.
//   hexagonal-limit(q)  limit graph of the hexagonal lattice perturbed by
//                   v1 -> v2: four edges, indices e_0 = 0, e_1, e_2, e_3.
//
// Keys accept an optional ":<int>" suffix, used as the dimension for lattice.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pgraph/graph.hpp"

namespace pgraph {

inline constexpr double kDefaultPotential = 0.5;

inline FundamentalGraph lattice_graph(int d) {
  if (d < 1) throw GraphError("lattice dimension must be >= 1, got " + std::to_string(d));
  std::vector<EdgeSpec> edges;
  for (int s = 0; s < d; ++s) {
    IndexVector idx(static_cast<std::size_t>(d), 0);
    idx[static_cast<std::size_t>(s)] = 1;
    edges.push_back({"v", "v", idx});
  }
  return FundamentalGraph::build(d, {{"v", 0.0}}, edges);
}

inline FundamentalGraph line2_graph(double q) {
  return FundamentalGraph::build(1, {{"v0", q}, {"v1", -q}},
                                 {{"v0", "v1", {0}}, {"v1", "v0", {1}}});
}

inline FundamentalGraph hexagonal_graph(double q) {
  return FundamentalGraph::build(
      2, {{"v1", q}, {"v2", -q}},
      {{"v1", "v2", {0, 0}}, {"v2", "v1", {1, 0}}, {"v2", "v1", {0, 1}}});
}

inline FundamentalGraph hex_limit_graph(double q) {
  return lift_to_limit(perturb(line2_graph(q), {"v0", "v1", {0}}));
}

inline FundamentalGraph hexagonal_limit_graph(double q) {
  return lift_to_limit(perturb(hexagonal_graph(q), {"v1", "v2", {0, 0}}));
}

inline FundamentalGraph builtin(std::string_view key, double q = kDefaultPotential) {
  if (!std::isfinite(q)) throw GraphError("built-in potential q must be finite");
  std::string name(key);
  std::optional<int> param;
  if (auto colon = name.find(':'); colon != std::string::npos) {
    std::string arg = name.substr(colon + 1);
    name.resize(colon);
    try {
      std::size_t used = 0;
      param = std::stoi(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
    } catch (const std::exception&) {
      throw GraphError("bad built-in parameter '" + arg + "'");
    }
  }
  if (name == "lattice") return lattice_graph(param.value_or(2));
  if (param) throw GraphError("built-in '" + name + "' takes no ':' parameter");
  if (name == "line2") return line2_graph(q);
  if (name == "hexagonal") return hexagonal_graph(q);
  if (name == "hex-limit" || name == "line2-limit") return hex_limit_graph(q);
  if (name == "hexagonal-limit") return hexagonal_limit_graph(q);
  throw GraphError("unknown built-in graph '" + std::string(key) + "'");
}

inline std::vector<std::string> builtin_names() {
  return {"line2", "lattice:<d>", "hexagonal", "hex-limit", "line2-limit", "hexagonal-limit"};
}

}  // namespace pgraph
