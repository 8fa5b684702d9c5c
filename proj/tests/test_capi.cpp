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

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <json.hpp>

#include "isingdyn.h"

namespace {

std::string state(const isd_chain *c, std::size_t n) {
  std::string buf(n + 1, '\0');
  REQUIRE(isd_chain_state(c, buf.data(), buf.size()) == ISD_OK);
  buf.resize(n);
  return buf;
}

struct Fixture {
  isd_graph *g = nullptr;
  isd_dynamics *iv = nullptr;
  Fixture() {
    REQUIRE(isd_graph_from_spec("cycle:6", &g) == ISD_OK);
    REQUIRE(isd_dynamics_parse(g, "{\"kind\":\"iv\"}", &iv) == ISD_OK);
  }
  ~Fixture() {
    isd_dynamics_free(iv);
    isd_graph_free(g);
  }
};

} // namespace

TEST_CASE("graphs and status codes") {
  isd_graph *g = nullptr;
  CHECK(isd_graph_from_spec("cycle:2", &g) == ISD_ERR_INVALID_ARGUMENT);
  CHECK(g == nullptr);
  CHECK(std::strlen(isd_last_error()) > 0);
  CHECK(isd_graph_from_spec("/nonexistent/graph.txt", &g) == ISD_ERR_IO);
  CHECK(isd_graph_from_spec(nullptr, &g) == ISD_ERR_INVALID_ARGUMENT);
  CHECK(std::string(isd_status_name(ISD_ERR_SIZE_LIMIT)) == "size limit exceeded");

  const std::uint32_t edges[] = {0, 1, 1, 2, 2, 0};
  REQUIRE(isd_graph_from_edges(3, edges, 3, &g) == ISD_OK);
  CHECK(isd_graph_num_vertices(g) == 3);
  CHECK(isd_graph_num_edges(g) == 3);
  CHECK(isd_graph_max_degree(g) == 2);
  isd_graph_free(g);
  const std::uint32_t loop[] = {1, 1};
  CHECK(isd_graph_from_edges(3, loop, 1, &g) == ISD_ERR_INVALID_ARGUMENT);
  isd_graph_free(nullptr);
  CHECK(std::string(isd_version()) == "0.1.0");
}

TEST_CASE("dynamics handles") {
  Fixture f;
  char *name = nullptr;
  REQUIRE(isd_dynamics_name(f.iv, &name) == ISD_OK);
  CHECK(std::string(name) == "iv");
  isd_string_free(name);
  CHECK(isd_dynamics_is_monotone(f.iv) == 1);

  isd_dynamics *d = nullptr;
  CHECK(isd_dynamics_parse(f.g, "{\"kind\":", &d) == ISD_ERR_PARSE);
  CHECK(isd_dynamics_parse(f.g, "{\"kind\":\"sw\",\"censor\":[0]}", &d) ==
        ISD_ERR_INVALID_ARGUMENT);
  CHECK(isd_dynamics_parse(f.g, "{\"kind\":\"msw\",\"censor\":[9]}", &d) ==
        ISD_ERR_INVALID_ARGUMENT);
  REQUIRE(isd_dynamics_parse(f.g, "{\"kind\":\"sw\"}", &d) == ISD_OK);
  CHECK(isd_dynamics_is_monotone(d) == 0);
  isd_dynamics_free(d);
}

TEST_CASE("chains are deterministic in the seed") {
  Fixture f;
  isd_chain *a = nullptr;
  isd_chain *b = nullptr;
  isd_chain *c = nullptr;
  REQUIRE(isd_chain_new(f.g, 0.4, f.iv, 11, nullptr, &a) == ISD_OK);
  REQUIRE(isd_chain_new(f.g, 0.4, f.iv, 11, "++++++", &b) == ISD_OK);
  REQUIRE(isd_chain_new(f.g, 0.4, f.iv, 12, nullptr, &c) == ISD_OK);
  CHECK(state(a, 6) == "++++++");
  std::vector<std::string> ta;
  std::vector<std::string> tc;
  for (int i = 0; i < 20; ++i) {
    REQUIRE(isd_chain_advance(a, 1) == ISD_OK);
    REQUIRE(isd_chain_advance(c, 1) == ISD_OK);
    ta.push_back(state(a, 6));
    tc.push_back(state(c, 6));
  }
  REQUIRE(isd_chain_advance(b, 20) == ISD_OK);
  CHECK(state(b, 6) == ta.back());
  CHECK(isd_chain_time(a) == 20);
  CHECK(ta != tc);
  char small[3];
  CHECK(isd_chain_state(a, small, sizeof small) == ISD_ERR_INVALID_ARGUMENT);
  isd_chain *bad = nullptr;
  CHECK(isd_chain_new(f.g, 0.4, f.iv, 1, "++", &bad) == ISD_ERR_INVALID_ARGUMENT);
  CHECK(isd_chain_new(f.g, -1.0, f.iv, 1, nullptr, &bad) == ISD_ERR_INVALID_ARGUMENT);
  CHECK(isd_chain_new(f.g, NAN, f.iv, 1, nullptr, &bad) == ISD_ERR_INVALID_ARGUMENT);
  isd_chain_free(a);
  isd_chain_free(b);
  isd_chain_free(c);
}

TEST_CASE("gibbs through the api") {
  isd_graph *g = nullptr;
  REQUIRE(isd_graph_from_spec("edge", &g) == ISD_OK);
  double probs[4];
  REQUIRE(isd_gibbs(g, 0.5, probs, 4) == ISD_OK);
  const double z = 2 * std::exp(0.5) + 2 * std::exp(-0.5);
  CHECK(probs[0] == doctest::Approx(std::exp(0.5) / z).epsilon(1e-14));
  CHECK(probs[1] == doctest::Approx(std::exp(-0.5) / z).epsilon(1e-14));
  CHECK(isd_gibbs(g, 0.5, probs, 3) == ISD_ERR_INVALID_ARGUMENT);
  isd_graph_free(g);
}

TEST_CASE("coupling through the api") {
  Fixture f;
  std::uint64_t s1 = 0;
  std::uint64_t s2 = 0;
  int timeout = 1;
  REQUIRE(isd_coupling_time(f.g, 0.3, f.iv, 5, 10000, &s1, &timeout) == ISD_OK);
  CHECK(timeout == 0);
  CHECK(s1 > 0);
  REQUIRE(isd_coupling_time(f.g, 0.3, f.iv, 5, 10000, &s2, &timeout) == ISD_OK);
  CHECK(s1 == s2);
  REQUIRE(isd_coupling_time(f.g, 0.3, f.iv, 5, 0, &s2, &timeout) == ISD_OK);
  CHECK(timeout == 1);
  CHECK(s2 == 0);
  isd_dynamics *sw = nullptr;
  REQUIRE(isd_dynamics_parse(f.g, "{\"kind\":\"sw\"}", &sw) == ISD_OK);
  CHECK(isd_coupling_time(f.g, 0.3, sw, 5, 100, &s1, &timeout) == ISD_ERR_UNSUPPORTED);
  isd_dynamics_free(sw);
}

TEST_CASE("verify through the api") {
  isd_graph *g = nullptr;
  REQUIRE(isd_graph_from_spec("path:3", &g) == ISD_OK);
  char *json = nullptr;
  int all_pass = 0;
  REQUIRE(isd_verify(g, "path:3", 0.5, 0.25, ISD_VERIFY_DEFAULT, &json, &all_pass) == ISD_OK);
  CHECK(all_pass == 1);
  auto j = nlohmann::json::parse(json);
  CHECK(j["all_pass"] == true);
  CHECK(j["checks"][0]["graph"] == "path:3");
  isd_string_free(json);
  REQUIRE(isd_verify(g, nullptr, 0.5, 0.25, ISD_VERIFY_INJECT_FAULT, &json, &all_pass) == ISD_OK);
  CHECK(all_pass == 0);
  isd_string_free(json);
  isd_graph_free(g);
  REQUIRE(isd_graph_from_spec("cycle:12", &g) == ISD_OK);
  CHECK(isd_verify(g, nullptr, 0.5, 0.25, 0, &json, &all_pass) == ISD_ERR_SIZE_LIMIT);
  isd_graph_free(g);
}

TEST_CASE("gap, assm and beta_c through the api") {
  isd_graph *g = nullptr;
  REQUIRE(isd_graph_from_spec("cycle:5", &g) == ISD_OK);
  isd_gap_report rep{};
  REQUIRE(isd_gap(g, 0.3, &rep) == ISD_OK);
  CHECK(rep.gap_sw >= rep.gap_iv - 1e-9);
  CHECK(rep.trel_iv == doctest::Approx(1.0 / rep.gap_iv));
  CHECK(rep.trel_iv_infinite == 0);
  isd_graph_free(g);

  REQUIRE(isd_graph_from_spec("cycle:12", &g) == ISD_OK);
  char *json = nullptr;
  int found = 0;
  std::size_t radius = 99;
  REQUIRE(isd_assm(g, 0.3, 4, &json, &found, &radius) == ISD_OK);
  CHECK(found == 1);
  CHECK(radius == 1);
  auto j = nlohmann::json::parse(json);
  CHECK(j["radius"] == 1);
  CHECK(j["tables"].size() == 12);
  isd_string_free(json);
  isd_graph_free(g);

  double bc = 0.0;
  REQUIRE(isd_beta_c(3, &bc) == ISD_OK);
  CHECK(std::abs(bc - std::atanh(0.5)) < 1e-12);
  CHECK(isd_beta_c(2, &bc) == ISD_ERR_INVALID_ARGUMENT);
}
