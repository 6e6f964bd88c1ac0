#include "jborg/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "jborg/instances.hpp"

namespace jborg {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void dump_rec(const json& j, std::string& out, int indent, int level) {
  const std::string pad(static_cast<std::size_t>(indent) * level, ' ');
  const std::string pad1(static_cast<std::size_t>(indent) * (level + 1), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad1 + json(it.key()).dump() + ": ";
        dump_rec(it.value(), out, indent, level + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad1;
        dump_rec(v, out, indent, level + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float:
      out += fmt17(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_json17(const json& j, int indent) {
  std::string out;
  dump_rec(j, out, indent, 0);
  out += "\n";
  return out;
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError("complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const Mat& x) {
  json rows = json::array();
  for (int i = 0; i < x.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < x.cols(); ++j) row.push_back(complex_to_json(x(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Mat matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("matrix must be an array");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Mat x(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols)
      throw ConfigError("ragged matrix rows");
    for (int c = 0; c < cols; ++c) x(i, c) = complex_from_json(j[i][c]);
  }
  return x;
}

json measure_to_json(const MatrixMeasure& mu) {
  json nodes = json::array();
  json weights = json::array();
  for (std::size_t i = 0; i < mu.nodes.size(); ++i) {
    nodes.push_back(mu.nodes[i]);
    weights.push_back(matrix_to_json(mu.weights[i]));
  }
  return json{{"nodes", nodes},
              {"weights", weights},
              {"normalized", mu.normalized}};
}

MatrixMeasure measure_from_json(const json& j) {
  MatrixMeasure mu;
  if (!j.contains("nodes") || !j.contains("weights"))
    throw ConfigError("measure JSON needs nodes and weights");
  for (const auto& n : j["nodes"]) mu.nodes.push_back(n.get<double>());
  for (const auto& w : j["weights"]) mu.weights.push_back(matrix_from_json(w));
  if (mu.nodes.size() != mu.weights.size())
    throw ConfigError("measure nodes/weights length mismatch");
  mu.normalized = j.value("normalized", false);
  return mu;
}

std::string xi_grid_to_csv(const XiGrid& g) {
  std::ostringstream os;
  const int m = g.values.empty() ? 0 : static_cast<int>(g.values[0].rows());
  os << "lambda";
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      os << ",re_" << i << j << ",im_" << i << j;
  os << "\n";
  for (std::size_t n = 0; n < g.lambdas.size(); ++n) {
    os << fmt17(g.lambdas[n]);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        os << "," << fmt17(g.values[n](i, j).real()) << ","
           << fmt17(g.values[n](i, j).imag());
      }
    os << "\n";
  }
  return os.str();
}

RunConfig parse_config_json(const json& j, double tol_override,
                            long seed_override) {
  RunConfig cfg;
  if (!j.contains("model") || !j["model"].contains("type"))
    throw ConfigError("config needs model.type");
  cfg.model = j["model"];
  if (seed_override >= 0) cfg.model["seed"] = seed_override;
  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (g.contains("z_points")) {
      cfg.z_points.clear();
      for (const auto& zp : g["z_points"])
        cfg.z_points.push_back(complex_from_json(zp));
    }
    if (g.contains("lambda_min") && g.contains("lambda_max")) {
      cfg.lambda_min = g["lambda_min"].get<double>();
      cfg.lambda_max = g["lambda_max"].get<double>();
      cfg.lambda_set = true;
    }
    cfg.lambda_nodes = g.value("lambda_nodes", cfg.lambda_nodes);
    cfg.eps = g.value("epsilon", cfg.eps);
  }
  if (j.contains("truncation")) {
    const json& t = j["truncation"];
    if (t.contains("sites")) {
      int n = t["sites"].get<int>();
      cfg.k_lo = -(n / 2);
      cfg.k_hi = cfg.k_lo + n - 1;
    }
    if (t.contains("k_lo")) cfg.k_lo = t["k_lo"].get<int>();
    if (t.contains("k_hi")) cfg.k_hi = t["k_hi"].get<int>();
  }
  if (j.contains("sites")) {
    cfg.sites.clear();
    for (const auto& s : j["sites"]) cfg.sites.push_back(s.get<int>());
  }
  if (j.contains("tolerances")) {
    cfg.tol = j["tolerances"].value("tol", cfg.tol);
    cfg.delta = j["tolerances"].value("delta", cfg.delta);
  }
  if (j.contains("output")) cfg.out_dir = j["output"].value("dir", "");
  if (tol_override > 0) cfg.tol = tol_override;
  if (cfg.z_points.empty())
    cfg.z_points = {cplx(0.3, 1.0), cplx(-0.8, 0.6), cplx(1.1, -0.7)};
  return cfg;
}

RunConfig parse_config_file(const std::string& path, double tol_override,
                            long seed_override) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse failure: ") + e.what());
  }
  return parse_config_json(j, tol_override, seed_override);
}

json canonical_config(const RunConfig& cfg) {
  json z = json::array();
  for (cplx v : cfg.z_points) z.push_back(complex_to_json(v));
  json grid{{"z_points", z},
            {"lambda_nodes", cfg.lambda_nodes},
            {"epsilon", cfg.eps}};
  if (cfg.lambda_set) {
    grid["lambda_min"] = cfg.lambda_min;
    grid["lambda_max"] = cfg.lambda_max;
  }
  json out{{"model", cfg.model},
           {"grid", grid},
           {"truncation", {{"k_lo", cfg.k_lo}, {"k_hi", cfg.k_hi}}},
           {"sites", cfg.sites},
           {"tolerances", {{"tol", cfg.tol}, {"delta", cfg.delta}}}};
  if (!cfg.out_dir.empty()) out["output"] = json{{"dir", cfg.out_dir}};
  return out;
}

JacobiCoefficients build_jacobi_model(const json& model) {
  const std::string type = model["type"].get<std::string>();
  if (type == "free") return free_jacobi(model.value("m", 1));
  if (type == "borg-jacobi")
    return borg_jacobi(model["E_minus"].get<double>(),
                       model["E_plus"].get<double>(), model.value("m", 1));
  if (type == "random")
    return random_jacobi(model.value("m", 2),
                         static_cast<std::uint64_t>(model.value("seed", 1)),
                         model.value("amplitude", 0.3));
  if (type == "explicit") {
    if (!model.contains("a") || !model.contains("b"))
      throw ConfigError("explicit model needs a and b matrix lists");
    int k_lo = model.value("k_lo", 0);
    std::vector<Mat> av, bv;
    for (const auto& e : model["a"]) av.push_back(matrix_from_json(e));
    for (const auto& e : model["b"]) bv.push_back(matrix_from_json(e));
    try {
      return validate_jacobi(MatrixSeq(k_lo, av), MatrixSeq(k_lo, bv));
    } catch (const SiteError& e) {
      throw ConfigError(std::string("invalid coefficients: ") + e.what());
    }
  }
  if (type == "borg-dirac")
    throw ConfigError("command needs a Jacobi model, got borg-dirac");
  throw ConfigError("unknown model.type: " + type);
}

std::vector<int> dirac_model_signs(const json& model) {
  std::vector<int> signs;
  if (!model.contains("signs")) throw ConfigError("borg-dirac needs signs");
  for (const auto& s : model["signs"]) signs.push_back(s.get<int>());
  if (signs.empty()) throw ConfigError("signs must be nonempty");
  return signs;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open for writing: " + path);
  f << content;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace jborg
