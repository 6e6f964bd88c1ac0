#include <doctest.h>

#include "jborg/instances.hpp"
#include "jborg/io.hpp"

using namespace jborg;

TEST_CASE("json17 output is deterministic and round-trips matrices") {
  Rng rng(191);
  Mat x = rng.hermitian(3, 1.0);
  json j = matrix_to_json(x);
  std::string s1 = dump_json17(j);
  std::string s2 = dump_json17(matrix_to_json(x));
  CHECK(s1 == s2);
  Mat back = matrix_from_json(json::parse(s1));
  CHECK((back - x).norm() == 0.0);  // %.17g round-trips doubles exactly
}

TEST_CASE("measure json round trip") {
  MatrixMeasure mu;
  mu.normalized = true;
  Rng rng(193);
  for (int i = 0; i < 5; ++i) {
    mu.nodes.push_back(-1.0 + 0.5 * i);
    Mat h = rng.hermitian(2, 1.0);
    mu.weights.push_back(Mat(h * h.adjoint()));
  }
  json j = measure_to_json(mu);
  MatrixMeasure back = measure_from_json(json::parse(dump_json17(j)));
  CHECK(back.normalized);
  REQUIRE(back.nodes.size() == mu.nodes.size());
  for (std::size_t i = 0; i < mu.nodes.size(); ++i) {
    CHECK(back.nodes[i] == mu.nodes[i]);
    CHECK((back.weights[i] - mu.weights[i]).norm() == 0.0);
  }
}

TEST_CASE("xi grid csv has the lambda column plus m^2 re/im pairs") {
  XiGrid g;
  g.lambdas = {0.0, 1.0};
  g.values = {Mat::Identity(2, 2), Mat::Zero(2, 2)};
  std::string csv = xi_grid_to_csv(g);
  CHECK(csv.find("lambda,re_00,im_00,re_01,im_01,re_10,im_10,re_11,im_11") ==
        0);
  CHECK(csv.find("\n0,1,0,0,0,0,0,1,0\n") != std::string::npos);
}

TEST_CASE("complex parse rejects malformed input") {
  CHECK_THROWS_AS(complex_from_json(json::parse("[1]")), ConfigError);
  CHECK_THROWS_AS(matrix_from_json(json::parse("3")), ConfigError);
}

TEST_CASE("config canonicalization is a fixed point") {
  json raw = json::parse(R"({
    "model": {"type": "random", "m": 2, "seed": 9, "amplitude": 0.25},
    "grid": {"z_points": [[0.5, 1.0]], "epsilon": 0.002},
    "truncation": {"sites": 300},
    "sites": [0, 3],
    "tolerances": {"tol": 1e-9}
  })");
  RunConfig c1 = parse_config_json(raw);
  json canon = canonical_config(c1);
  RunConfig c2 = parse_config_json(canon);
  CHECK(dump_json17(canonical_config(c2)) == dump_json17(canon));
  CHECK_FALSE(c2.lambda_set);
  CHECK(c2.k_lo == -150);
  CHECK(c2.k_hi == 149);
  CHECK(c2.tol == 1e-9);

  // explicit lambda range survives the round trip as set
  raw["grid"]["lambda_min"] = -2.0;
  raw["grid"]["lambda_max"] = 2.0;
  RunConfig c3 = parse_config_json(canonical_config(parse_config_json(raw)));
  CHECK(c3.lambda_set);
  CHECK(c3.lambda_min == -2.0);

  CHECK_THROWS_AS(parse_config_json(json::parse("{}")), ConfigError);
}

TEST_CASE("model builders: type dispatch and validation errors") {
  json free_model = {{"type", "free"}, {"m", 2}};
  CHECK(build_jacobi_model(free_model).dim() == 2);
  json bad = {{"type", "nonsense"}};
  CHECK_THROWS_AS(build_jacobi_model(bad), ConfigError);
  json dirac = {{"type", "borg-dirac"},
                {"E_minus", 1.0},
                {"E_plus", 4.0},
                {"signs", {1, -1}}};
  CHECK(dirac_model_signs(dirac) == std::vector<int>{1, -1});
  CHECK_THROWS_AS(build_jacobi_model(dirac), ConfigError);
}
