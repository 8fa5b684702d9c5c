/*
 * Copyright (C) 2026 The isingdyn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ISINGDYN_GRAPH_HPP
#define ISINGDYN_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "isingdyn/index_set.hpp"

namespace isingdyn {

struct Edge {
  Vertex u;
  Vertex v;
  friend bool operator==(const Edge &, const Edge &) = default;
};

/// Simple undirected graph. Edge indices follow insertion order and never
/// change; every EdgeSubset and every per-edge random stream keys off them.
/// Immutable after construction.
class Graph {
public:
  Graph() = default;
  /// Throws on self-loops, duplicate edges or endpoints >= n.
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t max_degree() const { return max_degree_; }

  const std::vector<Edge> &edges() const { return edges_; }
  const Edge &edge(EdgeIndex e) const { return edges_[e]; }

  struct Incidence {
    Vertex neighbor;
    EdgeIndex edge;
  };
  const std::vector<Incidence> &incident(Vertex v) const { return adjacency_[v]; }
  std::size_t degree(Vertex v) const { return adjacency_[v].size(); }

  friend bool operator==(const Graph &a, const Graph &b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::size_t max_degree_ = 0;
};

/// Reads "u v" lines; '#' starts a comment. n = max index + 1.
Graph load_edge_list(const std::filesystem::path &path);
Graph parse_edge_list(const std::string &text);

VertexSet ball(const Graph &g, Vertex v, std::size_t radius);
VertexSet sphere(const Graph &g, Vertex v, std::size_t radius);
/// BFS distances from v; unreachable vertices get SIZE_MAX.
std::vector<std::size_t> distances_from(const Graph &g, Vertex v);

Graph edgeless(std::size_t n);
Graph path(std::size_t n);
Graph cycle(std::size_t n);
Graph grid(std::size_t width, std::size_t height);
/// Root has `degree` children, every other internal vertex has degree-1
/// children, so all internal vertices have degree `degree`. Height 1 is a star.
Graph complete_tree(std::size_t degree, std::size_t height);
/// Pairing model with rejection of loops and multi-edges.
Graph random_regular(std::size_t n, std::size_t degree, std::uint64_t seed);

/// Builds a graph from a short textual description:
///   edge | triangle | path:N | cycle:N | star:K | edgeless:N | grid:WxH |
///   tree:D,H | regular:N,D[,SEED]
/// Anything else is treated as an edge-list file path.
Graph graph_from_spec(const std::string &spec);

/// Expands "family:a..b" or "family:a|b|c" into one spec per size; any other
/// spec is returned unchanged.
std::vector<std::string> expand_graph_sweep(const std::string &spec);

} // namespace isingdyn

#endif // ISINGDYN_GRAPH_HPP
