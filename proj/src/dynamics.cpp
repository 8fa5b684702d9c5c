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

#include "isingdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "isingdyn/error.hpp"

namespace isingdyn {

std::string to_string(DynamicsKind kind) {
  switch (kind) {
  case DynamicsKind::Glauber:
    return "glauber";
  case DynamicsKind::Block:
    return "block";
  case DynamicsKind::SwendsenWang:
    return "sw";
  case DynamicsKind::IsolatedVertex:
    return "iv";
  case DynamicsKind::MonotoneSW:
    return "msw";
  }
  return "unknown";
}

std::string DynamicsSpec::name() const {
  return to_string(kind) + (censor ? "_A" : "");
}

void DynamicsSpec::validate(const Graph &g) const {
  const std::size_t n = g.num_vertices();
  if (kind == DynamicsKind::Block) {
    require(!blocks.empty(), "block dynamics needs at least one block");
    VertexSet covered(n);
    for (const auto &b : blocks) {
      require(!b.empty(), "blocks must be nonempty");
      if (b.size() > kMaxBlockSize) {
        fail(ErrorKind::SizeLimit, "block of size " + std::to_string(b.size()) +
                                       " exceeds the exact-sampling limit " +
                                       std::to_string(kMaxBlockSize));
      }
      for (Vertex v : b) {
        require(v < n, "block vertex " + std::to_string(v) + " out of range");
        covered.insert(v);
      }
    }
    require(covered.count() == n, "blocks must cover every vertex");
  } else {
    require(blocks.empty(), "blocks are only meaningful for block dynamics");
  }
  if (censor) {
    require(kind != DynamicsKind::SwendsenWang,
            "Swendsen-Wang dynamics has no censored variant");
    for (Vertex v : *censor) {
      require(v < n, "censor vertex " + std::to_string(v) + " out of range");
    }
  }
}

VertexSet DynamicsSpec::censor_set(std::size_t n) const {
  if (!censor) {
    return VertexSet::full(n);
  }
  VertexSet a(n);
  for (Vertex v : *censor) {
    a.insert(v);
  }
  return a;
}

std::vector<std::vector<Vertex>> singleton_blocks(std::size_t n) {
  std::vector<std::vector<Vertex>> out;
  for (std::size_t v = 0; v < n; ++v) {
    out.push_back({static_cast<Vertex>(v)});
  }
  return out;
}

std::vector<std::vector<Vertex>> whole_block(std::size_t n) {
  std::vector<Vertex> all(n);
  std::iota(all.begin(), all.end(), Vertex{0});
  return {all};
}

std::vector<std::vector<Vertex>> ball_blocks(const Graph &g, std::size_t radius) {
  std::vector<std::vector<Vertex>> out;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    out.push_back(ball(g, v, radius).members());
  }
  return out;
}

DynamicsSpec parse_dynamics(const std::string &text, const Graph &g) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception &e) {
    fail(ErrorKind::Parse, std::string("dynamics JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    fail(ErrorKind::Parse, "dynamics JSON needs a string field \"kind\"");
  }
  for (const auto &[key, value] : doc.items()) {
    if (key != "kind" && key != "blocks" && key != "censor") {
      fail(ErrorKind::Parse, "unknown dynamics field \"" + key + "\"");
    }
  }
  DynamicsSpec spec;
  const auto kind = doc["kind"].get<std::string>();
  if (kind == "glauber") {
    spec.kind = DynamicsKind::Glauber;
  } else if (kind == "block") {
    spec.kind = DynamicsKind::Block;
  } else if (kind == "sw") {
    spec.kind = DynamicsKind::SwendsenWang;
  } else if (kind == "iv") {
    spec.kind = DynamicsKind::IsolatedVertex;
  } else if (kind == "msw") {
    spec.kind = DynamicsKind::MonotoneSW;
  } else {
    fail(ErrorKind::Parse, "unknown dynamics kind \"" + kind + "\"");
  }
  try {
    if (doc.contains("blocks")) {
      const auto &b = doc["blocks"];
      if (b.is_string()) {
        auto rule = b.get<std::string>();
        if (rule == "singletons") {
          spec.blocks = singleton_blocks(g.num_vertices());
        } else if (rule == "whole") {
          spec.blocks = whole_block(g.num_vertices());
        } else if (rule.rfind("ball:", 0) == 0) {
          spec.blocks = ball_blocks(g, std::stoul(rule.substr(5)));
        } else {
          fail(ErrorKind::Parse, "unknown block rule \"" + rule + "\"");
        }
      } else {
        spec.blocks = b.get<std::vector<std::vector<Vertex>>>();
      }
    } else if (spec.kind == DynamicsKind::Block) {
      fail(ErrorKind::Parse, "block dynamics needs \"blocks\"");
    }
    if (doc.contains("censor")) {
      spec.censor = doc["censor"].get<std::vector<Vertex>>();
    }
  } catch (const json::exception &e) {
    fail(ErrorKind::Parse, std::string("dynamics JSON: ") + e.what());
  } catch (const std::logic_error &e) {
    fail(ErrorKind::Parse, std::string("dynamics JSON: ") + e.what());
  }
  spec.validate(g);
  return spec;
}

std::string dynamics_to_json(const DynamicsSpec &spec) {
  nlohmann::json doc;
  doc["kind"] = to_string(spec.kind);
  if (spec.kind == DynamicsKind::Block) {
    doc["blocks"] = spec.blocks;
  }
  if (spec.censor) {
    doc["censor"] = *spec.censor;
  }
  return doc.dump();
}

double bond_probability(double beta) { return 1.0 - std::exp(-2.0 * beta); }

EdgeSubset agreeing_edges(const Graph &g, const SpinConfig &sigma) {
  require(sigma.size() == g.num_vertices(), "configuration size does not match graph");
  EdgeSubset out(g.num_edges());
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    if (sigma[g.edge(e).u] == sigma[g.edge(e).v]) {
      out.insert(e);
    }
  }
  return out;
}

EdgeSubset percolate(const Graph &g, const SpinConfig &sigma, double beta,
                     std::span<const double> uniforms) {
  require(uniforms.size() == g.num_edges(), "need one uniform per edge");
  const double p = bond_probability(beta);
  EdgeSubset out(g.num_edges());
  if (p <= 0.0) {
    return out;
  }
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    if (sigma[g.edge(e).u] == sigma[g.edge(e).v] && uniforms[e] <= p) {
      out.insert(e);
    }
  }
  return out;
}

EdgeSubset percolate(const Graph &g, const SpinConfig &sigma, double beta,
                     const StepRandomness &rng) {
  const double p = bond_probability(beta);
  EdgeSubset out(g.num_edges());
  if (p <= 0.0) {
    return out;
  }
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    if (sigma[g.edge(e).u] == sigma[g.edge(e).v] && rng.edge_uniform(e) <= p) {
      out.insert(e);
    }
  }
  return out;
}

ComponentPartition components(const Graph &g, const EdgeSubset &f) {
  const std::size_t n = g.num_vertices();
  std::vector<Vertex> parent(n);
  std::iota(parent.begin(), parent.end(), Vertex{0});
  auto find = [&parent](Vertex x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (EdgeIndex e : f.members()) {
    Vertex a = find(g.edge(e).u);
    Vertex b = find(g.edge(e).v);
    if (a != b) {
      parent[std::max(a, b)] = std::min(a, b);
    }
  }
  ComponentPartition out;
  out.id.assign(n, 0);
  std::vector<std::int64_t> root_id(n, -1);
  for (Vertex v = 0; v < n; ++v) {
    Vertex r = find(v);
    if (root_id[r] < 0) {
      root_id[r] = static_cast<std::int64_t>(out.members.size());
      out.members.emplace_back();
    }
    out.id[v] = static_cast<std::uint32_t>(root_id[r]);
    out.members[out.id[v]].push_back(v);
  }
  return out;
}

double heat_bath_plus(const Graph &g, double beta, const SpinConfig &sigma, Vertex v) {
  int field = 0;
  for (const auto &inc : g.incident(v)) {
    field += sigma[inc.neighbor];
  }
  return 1.0 / (1.0 + std::exp(-2.0 * beta * field));
}

namespace {

bool inside(const std::vector<Vertex> &members, const VertexSet &a) {
  return std::all_of(members.begin(), members.end(), [&a](Vertex v) { return a.contains(v); });
}

void check_size(const Graph &g, const SpinConfig &sigma) {
  require(sigma.size() == g.num_vertices(), "configuration size does not match graph");
}

} // namespace

SpinConfig sw_step(const Graph &g, double beta, const SpinConfig &sigma,
                   const StepRandomness &rng) {
  check_size(g, sigma);
  auto parts = components(g, percolate(g, sigma, beta, rng));
  SpinConfig next = sigma;
  for (const auto &c : parts.members) {
    int s = rng.vertex_spin(c.front());
    for (Vertex v : c) {
      next.set(v, s);
    }
  }
  return next;
}

SpinConfig iv_step(const Graph &g, double beta, const SpinConfig &sigma,
                   const StepRandomness &rng, const VertexSet &a) {
  check_size(g, sigma);
  auto f = percolate(g, sigma, beta, rng);
  SpinConfig next = sigma;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!a.contains(v)) {
      continue;
    }
    const auto &inc = g.incident(v);
    bool isolated = std::none_of(inc.begin(), inc.end(),
                                 [&f](const Graph::Incidence &i) { return f.contains(i.edge); });
    if (isolated) {
      next.set(v, rng.vertex_spin(v));
    }
  }
  return next;
}

SpinConfig msw_step(const Graph &g, double beta, const SpinConfig &sigma,
                    const StepRandomness &rng, const VertexSet &a) {
  check_size(g, sigma);
  auto parts = components(g, percolate(g, sigma, beta, rng));
  SpinConfig next = sigma;
  for (const auto &c : parts.members) {
    if (!inside(c, a)) {
      continue;
    }
    // 2^-(|C|-1) is a dyadic rational, so u < q has probability exactly q.
    double q = std::ldexp(1.0, -static_cast<int>(c.size() - 1));
    if (rng.component_coin(c.front()) < q) {
      int s = rng.vertex_spin(c.front());
      for (Vertex v : c) {
        next.set(v, s);
      }
    }
  }
  return next;
}

SpinConfig msw_step_alt(const Graph &g, double beta, const SpinConfig &sigma,
                        const StepRandomness &rng, const VertexSet &a) {
  check_size(g, sigma);
  auto parts = components(g, percolate(g, sigma, beta, rng));
  SpinConfig next = sigma;
  for (const auto &c : parts.members) {
    if (!inside(c, a)) {
      continue;
    }
    int s = rng.vertex_spin(c.front());
    bool agree = std::all_of(c.begin(), c.end(),
                             [&rng, s](Vertex v) { return rng.vertex_spin(v) == s; });
    if (agree) {
      for (Vertex v : c) {
        next.set(v, s);
      }
    }
  }
  return next;
}

SpinConfig glauber_step(const Graph &g, double beta, const SpinConfig &sigma,
                        const StepRandomness &rng, const VertexSet &a) {
  check_size(g, sigma);
  SpinConfig next = sigma;
  Vertex v = rng.vertex_pick(static_cast<std::uint32_t>(g.num_vertices()));
  if (a.contains(v)) {
    next.set(v, rng.vertex_uniform(v) <= heat_bath_plus(g, beta, sigma, v) ? 1 : -1);
  }
  return next;
}

SpinConfig block_step(const Graph &g, double beta, const SpinConfig &sigma,
                      std::span<const std::vector<Vertex>> blocks,
                      const StepRandomness &rng, const VertexSet &a) {
  check_size(g, sigma);
  require(!blocks.empty(), "block dynamics needs at least one block");
  const auto &block = blocks[rng.block_pick(static_cast<std::uint32_t>(blocks.size()))];
  std::vector<Vertex> free;
  for (Vertex v : block) {
    if (a.contains(v)) {
      free.push_back(v);
    }
  }
  std::sort(free.begin(), free.end());
  free.erase(std::unique(free.begin(), free.end()), free.end());
  if (free.empty()) {
    return sigma;
  }
  if (free.size() > kMaxBlockSize) {
    fail(ErrorKind::SizeLimit, "block exceeds the exact-sampling limit");
  }
  const std::size_t n = g.num_vertices();
  std::vector<std::int32_t> local(n, -1);
  for (std::size_t i = 0; i < free.size(); ++i) {
    local[free[i]] = static_cast<std::int32_t>(i);
  }
  std::vector<int> field(free.size(), 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> inner;
  for (const auto &e : g.edges()) {
    std::int32_t lu = local[e.u];
    std::int32_t lv = local[e.v];
    if (lu >= 0 && lv >= 0) {
      inner.emplace_back(lu, lv);
    } else if (lu >= 0) {
      field[lu] += sigma[e.v];
    } else if (lv >= 0) {
      field[lv] += sigma[e.u];
    }
  }
  const std::size_t states = std::size_t{1} << free.size();
  std::vector<double> lw(states);
  double top = -INFINITY;
  for (std::size_t s = 0; s < states; ++s) {
    int sum = 0;
    for (std::size_t i = 0; i < free.size(); ++i) {
      sum += ((s >> i) & 1U) != 0 ? field[i] : -field[i];
    }
    for (const auto &[i, j] : inner) {
      sum += ((((s >> i) ^ (s >> j)) & 1U) == 0) ? 1 : -1;
    }
    lw[s] = beta * sum;
    top = std::max(top, lw[s]);
  }
  double total = 0.0;
  for (double &x : lw) {
    x = std::exp(x - top);
    total += x;
  }
  const double target = rng.block_sample() * total;
  std::size_t chosen = states - 1;
  double acc = 0.0;
  for (std::size_t s = 0; s < states; ++s) {
    acc += lw[s];
    if (target < acc) {
      chosen = s;
      break;
    }
  }
  SpinConfig next = sigma;
  for (std::size_t i = 0; i < free.size(); ++i) {
    next.set(free[i], ((chosen >> i) & 1U) != 0 ? 1 : -1);
  }
  return next;
}

SpinConfig step(const Graph &g, double beta, const DynamicsSpec &spec, const SpinConfig &sigma,
                const StepRandomness &rng) {
  const VertexSet a = spec.censor_set(g.num_vertices());
  switch (spec.kind) {
  case DynamicsKind::Glauber:
    return glauber_step(g, beta, sigma, rng, a);
  case DynamicsKind::Block:
    return block_step(g, beta, sigma, spec.blocks, rng, a);
  case DynamicsKind::SwendsenWang:
    require(!spec.censor, "Swendsen-Wang dynamics has no censored variant");
    return sw_step(g, beta, sigma, rng);
  case DynamicsKind::IsolatedVertex:
    return iv_step(g, beta, sigma, rng, a);
  case DynamicsKind::MonotoneSW:
    return msw_step(g, beta, sigma, rng, a);
  }
  fail(ErrorKind::InvalidArgument, "unknown dynamics kind");
}

SpinConfig run_chain(const Graph &g, double beta, const DynamicsSpec &spec, SpinConfig start,
                     const RandomStream &stream, std::uint64_t steps) {
  spec.validate(g);
  for (std::uint64_t t = 0; t < steps; ++t) {
    start = step(g, beta, spec, start, StepRandomness(stream, t));
  }
  return start;
}

} // namespace isingdyn
