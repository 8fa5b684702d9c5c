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

#include "isingdyn/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include "isingdyn/error.hpp"
#include "isingdyn/random.hpp"

namespace isingdyn {

Graph::Graph(std::size_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)), adjacency_(n) {
  std::set<std::pair<Vertex, Vertex>> seen;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge &e = edges_[i];
    require(e.u < n_ && e.v < n_, "edge " + std::to_string(i) + " has an endpoint >= n");
    require(e.u != e.v, "self-loop at vertex " + std::to_string(e.u));
    auto key = std::minmax(e.u, e.v);
    require(seen.insert({key.first, key.second}).second,
            "duplicate edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "}");
    adjacency_[e.u].push_back({e.v, static_cast<EdgeIndex>(i)});
    adjacency_[e.v].push_back({e.u, static_cast<EdgeIndex>(i)});
  }
  for (const auto &nbrs : adjacency_) {
    max_degree_ = std::max(max_degree_, nbrs.size());
  }
}

namespace {

bool parse_vertex(std::string_view token, Vertex &out) {
  const char *first = token.data();
  const char *last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

} // namespace

Graph parse_edge_list(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Edge> edges;
  std::set<std::pair<Vertex, Vertex>> seen;
  std::size_t n = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) {
      tokens.push_back(tok);
    }
    if (tokens.empty()) {
      continue;
    }
    const std::string where = "line " + std::to_string(lineno) + ": ";
    Vertex u = 0;
    Vertex v = 0;
    if (tokens.size() != 2 || !parse_vertex(tokens[0], u) || !parse_vertex(tokens[1], v)) {
      fail(ErrorKind::Parse, where + "expected two nonnegative integers, got '" + line + "'");
    }
    if (u == v) {
      fail(ErrorKind::Parse, where + "self-loop at vertex " + std::to_string(u));
    }
    auto key = std::minmax(u, v);
    if (!seen.insert({key.first, key.second}).second) {
      fail(ErrorKind::Parse, where + "duplicate edge {" + std::to_string(u) + "," +
                                 std::to_string(v) + "}");
    }
    edges.push_back({u, v});
    n = std::max<std::size_t>(n, std::max(u, v) + std::size_t{1});
  }
  if (edges.empty()) {
    fail(ErrorKind::Parse, "edge list contains no edges");
  }
  return Graph(n, std::move(edges));
}

Graph load_edge_list(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorKind::Io, "cannot open edge list '" + path.string() + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_edge_list(buffer.str());
}

std::vector<std::size_t> distances_from(const Graph &g, Vertex v) {
  require(v < g.num_vertices(), "vertex " + std::to_string(v) + " out of range");
  std::vector<std::size_t> dist(g.num_vertices(), std::numeric_limits<std::size_t>::max());
  std::queue<Vertex> frontier;
  dist[v] = 0;
  frontier.push(v);
  while (!frontier.empty()) {
    Vertex x = frontier.front();
    frontier.pop();
    for (const auto &inc : g.incident(x)) {
      if (dist[inc.neighbor] == std::numeric_limits<std::size_t>::max()) {
        dist[inc.neighbor] = dist[x] + 1;
        frontier.push(inc.neighbor);
      }
    }
  }
  return dist;
}

VertexSet ball(const Graph &g, Vertex v, std::size_t radius) {
  auto dist = distances_from(g, v);
  VertexSet out(g.num_vertices());
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    if (dist[u] <= radius) {
      out.insert(u);
    }
  }
  return out;
}

VertexSet sphere(const Graph &g, Vertex v, std::size_t radius) {
  auto dist = distances_from(g, v);
  VertexSet out(g.num_vertices());
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    if (dist[u] == radius + 1) {
      out.insert(u);
    }
  }
  return out;
}

Graph edgeless(std::size_t n) {
  require(n >= 1, "edgeless graph needs n >= 1");
  return Graph(n, {});
}

Graph path(std::size_t n) {
  require(n >= 1, "path needs n >= 1");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(i + 1)});
  }
  return Graph(n, std::move(edges));
}

Graph cycle(std::size_t n) {
  require(n >= 3, "cycle needs n >= 3");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % n)});
  }
  return Graph(n, std::move(edges));
}

Graph grid(std::size_t width, std::size_t height) {
  require(width >= 1 && height >= 1, "grid needs positive dimensions");
  std::vector<Edge> edges;
  auto at = [width](std::size_t x, std::size_t y) { return static_cast<Vertex>(y * width + x); };
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      if (x + 1 < width) {
        edges.push_back({at(x, y), at(x + 1, y)});
      }
      if (y + 1 < height) {
        edges.push_back({at(x, y), at(x, y + 1)});
      }
    }
  }
  return Graph(width * height, std::move(edges));
}

Graph complete_tree(std::size_t degree, std::size_t height) {
  require(degree >= 2, "complete tree needs degree >= 2");
  require(height >= 1, "complete tree needs height >= 1");
  std::vector<Edge> edges;
  std::vector<Vertex> level{0};
  std::size_t n = 1;
  for (std::size_t h = 0; h < height; ++h) {
    std::vector<Vertex> next;
    for (Vertex parent : level) {
      std::size_t children = h == 0 ? degree : degree - 1;
      for (std::size_t c = 0; c < children; ++c) {
        auto child = static_cast<Vertex>(n++);
        edges.push_back({parent, child});
        next.push_back(child);
      }
    }
    level = std::move(next);
  }
  return Graph(n, std::move(edges));
}

Graph random_regular(std::size_t n, std::size_t degree, std::uint64_t seed) {
  require(n >= 1 && degree >= 1, "random regular graph needs positive parameters");
  require((n * degree) % 2 == 0, "random regular graph needs n*d even");
  require(degree < n, "random regular graph needs d < n");
  constexpr std::uint64_t kMaxAttempts = 100'000;
  RandomStream stream = RandomStream(seed).split(0x7265677261706800ULL);
  std::vector<Vertex> points(n * degree);
  for (std::uint64_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      points[i] = static_cast<Vertex>(i / degree);
    }
    // Fisher-Yates driven by the counter-based stream; std::shuffle is not
    // reproducible across standard libraries.
    for (std::size_t i = points.size() - 1; i > 0; --i) {
      auto j = stream.below(attempt, StreamLabel::Auxiliary, static_cast<std::uint32_t>(i),
                            static_cast<std::uint32_t>(i + 1));
      std::swap(points[i], points[j]);
    }
    std::set<std::pair<Vertex, Vertex>> seen;
    std::vector<Edge> edges;
    bool ok = true;
    for (std::size_t i = 0; i < points.size() && ok; i += 2) {
      Vertex u = points[i];
      Vertex v = points[i + 1];
      auto key = std::minmax(u, v);
      ok = u != v && seen.insert({key.first, key.second}).second;
      edges.push_back({key.first, key.second});
    }
    if (ok) {
      std::sort(edges.begin(), edges.end(), [](const Edge &a, const Edge &b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
      });
      return Graph(n, std::move(edges));
    }
  }
  fail(ErrorKind::InvalidArgument, "random regular graph: no simple pairing found after " +
                                       std::to_string(kMaxAttempts) + " attempts");
}

namespace {

std::vector<std::size_t> parse_numbers(const std::string &text, const std::string &spec) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find_first_of(",x", pos);
    if (end == std::string::npos) {
      end = text.size();
    }
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + end, value);
    if (ec != std::errc() || ptr != text.data() + end || end == pos) {
      fail(ErrorKind::Parse, "bad graph spec '" + spec + "'");
    }
    out.push_back(value);
    pos = end + 1;
  }
  return out;
}

} // namespace

Graph graph_from_spec(const std::string &spec) {
  if (spec == "edge") {
    return path(2);
  }
  if (spec == "triangle") {
    return cycle(3);
  }
  auto colon = spec.find(':');
  if (colon == std::string::npos) {
    return load_edge_list(spec);
  }
  const std::string family = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);
  auto expect = [&](std::size_t lo, std::size_t hi) {
    auto nums = parse_numbers(args, spec);
    if (nums.size() < lo || nums.size() > hi) {
      fail(ErrorKind::Parse, "wrong number of parameters in graph spec '" + spec + "'");
    }
    return nums;
  };
  if (family == "path") {
    return path(expect(1, 1)[0]);
  }
  if (family == "cycle") {
    return cycle(expect(1, 1)[0]);
  }
  if (family == "edgeless") {
    return edgeless(expect(1, 1)[0]);
  }
  if (family == "star") {
    return complete_tree(expect(1, 1)[0], 1);
  }
  if (family == "grid") {
    auto nums = expect(2, 2);
    return grid(nums[0], nums[1]);
  }
  if (family == "tree") {
    auto nums = expect(2, 2);
    return complete_tree(nums[0], nums[1]);
  }
  if (family == "regular") {
    auto nums = expect(2, 3);
    return random_regular(nums[0], nums[1], nums.size() == 3 ? nums[2] : 1);
  }
  return load_edge_list(spec);
}

std::vector<std::string> expand_graph_sweep(const std::string &spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) {
    return {spec};
  }
  const std::string family = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);
  std::vector<std::string> out;
  if (auto dots = args.find(".."); dots != std::string::npos) {
    auto lo = parse_numbers(args.substr(0, dots), spec);
    auto hi = parse_numbers(args.substr(dots + 2), spec);
    if (lo.size() != 1 || hi.size() != 1 || lo[0] > hi[0]) {
      fail(ErrorKind::Parse, "bad size range in '" + spec + "'");
    }
    for (std::size_t k = lo[0]; k <= hi[0]; ++k) {
      out.push_back(family + ":" + std::to_string(k));
    }
    return out;
  }
  if (args.find('|') != std::string::npos) {
    std::size_t pos = 0;
    while (pos <= args.size()) {
      auto end = args.find('|', pos);
      if (end == std::string::npos) {
        end = args.size();
      }
      out.push_back(family + ":" + args.substr(pos, end - pos));
      pos = end + 1;
    }
    return out;
  }
  return {spec};
}

} // namespace isingdyn
