#pragma once

#include <json.hpp>
#include <string>

#include "jborg/herglotz.hpp"

namespace jborg {

using json = nlohmann::json;

// Serializes a json tree with every number printed through "%.17g", so
// identical trees produce byte-identical files.
std::string dump_json17(const json& j, int indent = 2);

json complex_to_json(cplx z);                 // [re, im]
cplx complex_from_json(const json& j);
json matrix_to_json(const Mat& x);            // row-major [[re,im],...] rows
Mat matrix_from_json(const json& j);

json measure_to_json(const MatrixMeasure& mu);
MatrixMeasure measure_from_json(const json& j);

// Xi grid as CSV: lambda, then m^2 entries re/im row-major.
std::string xi_grid_to_csv(const XiGrid& g);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Run configuration shared by the CLI commands. Canonicalization is a fixed
// point: parsing the canonical JSON again yields the identical canonical
// JSON, and random models are fully reproducible from the seed.
struct RunConfig {
  json model;
  std::vector<cplx> z_points;
  double lambda_min = 0.0, lambda_max = 0.0;
  bool lambda_set = false;
  int lambda_nodes = 10001;
  double eps = 1e-3;
  int k_lo = -250, k_hi = 249;
  std::vector<int> sites{0};
  double tol = 1e-10;
  double delta = 2e-2;
  std::string out_dir;  // optional; the --out flag takes precedence
};

RunConfig parse_config_json(const json& j, double tol_override = -1.0,
                            long seed_override = -1);
RunConfig parse_config_file(const std::string& path,
                            double tol_override = -1.0,
                            long seed_override = -1);
json canonical_config(const RunConfig& cfg);

// Model builders for the config's model object.
JacobiCoefficients build_jacobi_model(const json& model);
std::vector<int> dirac_model_signs(const json& model);

}  // namespace jborg
