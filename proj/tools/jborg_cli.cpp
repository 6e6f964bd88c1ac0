// jborg: matrix-valued Jacobi / supersymmetric Dirac spectral toolbox.
//
// Subcommands run verification suites on a configured model and emit
// machine-readable JSON reports (fixed 17-significant-digit formatting, so
// identical configs produce byte-identical files) plus CSV grids.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "jborg/acceptance.hpp"
#include "jborg/dirac.hpp"
#include "jborg/instances.hpp"
#include "jborg/io.hpp"
#include "jborg/parallel.hpp"
#include "jborg/reconstruct.hpp"
#include "jborg/series.hpp"

namespace fs = std::filesystem;
using namespace jborg;

namespace {

struct Reporter {
  json failures = json::array();
  void require(bool ok, const std::string& what, double value, double bound) {
    if (!ok)
      failures.push_back(
          json{{"check", what}, {"value", value}, {"bound", bound}});
  }
  bool ok() const { return failures.empty(); }
};

void write_report(const fs::path& out, const std::string& name,
                  const json& body) {
  fs::create_directories(out);
  write_file((out / name).string(), dump_json17(body));
}

// ---- commands -----------------------------------------------------------

int cmd_spectrum(const RunConfig& cfg, const fs::path& out) {
  json body{{"command", "spectrum"}, {"config", canonical_config(cfg)}};
  if (cfg.model["type"] == "borg-dirac") {
    auto mem = borg_family(cfg.model["E_minus"].get<double>(),
                           cfg.model["E_plus"].get<double>(),
                           dirac_model_signs(cfg.model), cfg.k_lo, cfg.k_hi);
    body["eigenvalues"] = dirac_spectrum_susy(mem.coeffs, cfg.k_lo, cfg.k_hi);
    body["operator"] = "dirac (susy image of H1)";
  } else {
    auto c = build_jacobi_model(cfg.model);
    body["eigenvalues"] =
        spectrum_estimate(truncate_jacobi(c, cfg.k_lo, cfg.k_hi));
    body["operator"] = "jacobi";
  }
  write_report(out, "spectrum.json", body);
  return 0;
}

int cmd_weyl(const RunConfig& cfg, const fs::path& out) {
  auto c = build_jacobi_model(cfg.model);
  WeylOptions opt;
  opt.tol = cfg.tol;
  json rows = json::array();
  Reporter rep;
  for (int k : cfg.sites)
    for (cplx z : cfg.z_points) {
      auto msp = weyl_m_small(c, z, k, Side::Plus, opt);
      auto msm = weyl_m_small(c, z, k, Side::Minus, opt);
      auto mbp = weyl_m_big(c, z, k, Side::Plus, opt);
      auto mbm = weyl_m_big(c, z, k, Side::Minus, opt);
      rows.push_back(json{{"k", k},
                          {"z", complex_to_json(z)},
                          {"m_plus", matrix_to_json(msp.value)},
                          {"m_minus", matrix_to_json(msm.value)},
                          {"M_plus", matrix_to_json(mbp.value)},
                          {"M_minus", matrix_to_json(mbm.value)},
                          {"depth", mbp.depth},
                          {"riccati_residual_plus", mbp.residual},
                          {"riccati_residual_minus", mbm.residual},
                          {"cross_route_plus", mbp.cross_residual},
                          {"cross_route_minus", mbm.cross_residual}});
      rep.require(mbp.residual <= 10 * cfg.tol, "riccati residual (+)",
                  mbp.residual, 10 * cfg.tol);
      rep.require(mbm.residual <= 10 * cfg.tol, "riccati residual (-)",
                  mbm.residual, 10 * cfg.tol);
    }
  json body{{"command", "weyl"},
            {"config", canonical_config(cfg)},
            {"table", rows},
            {"failures", rep.failures}};
  write_report(out, "weyl.json", body);
  return rep.ok() ? 0 : 1;
}

int cmd_greens(const RunConfig& cfg, const fs::path& out) {
  auto c = build_jacobi_model(cfg.model);
  WeylOptions opt;
  opt.tol = cfg.tol;
  const int m = c.dim();
  const int n = std::max(64, cfg.k_hi - cfg.k_lo + 1);
  const int lo = -(n / 2);
  auto t = truncate_jacobi(c, lo, lo + n - 1);
  Reporter rep;
  json rows = json::array();
  for (cplx z : cfg.z_points) {
    Mat h = t.dense();
    h.diagonal().array() -= z;
    Eigen::PartialPivLU<Mat> lu(h);
    for (int k : cfg.sites)
      for (int l = k - 3; l <= k + 3; ++l) {
        Mat g = greens_full(c, z, k, l, opt);
        Mat rhs = Mat::Zero(n * m, m);
        rhs.block((l - lo) * m, 0, m, m) = Mat::Identity(m, m);
        Mat col = lu.solve(rhs);
        double resid = opnorm(g - col.block((k - lo) * m, 0, m, m));
        rows.push_back(json{{"z", complex_to_json(z)},
                            {"k", k},
                            {"l", l},
                            {"G", matrix_to_json(g)},
                            {"brute_force_residual", resid}});
        rep.require(resid <= 1e-6, "greens vs dense inverse", resid, 1e-6);
      }
  }
  json body{{"command", "greens"},
            {"config", canonical_config(cfg)},
            {"entries", rows},
            {"failures", rep.failures}};
  write_report(out, "greens.json", body);
  return rep.ok() ? 0 : 1;
}

std::pair<double, double> numerical_band(const JacobiCoefficients& c) {
  auto ev = spectrum_estimate(truncate_jacobi(c, -1000, 999));
  double pad = 1e-6 * (ev.back() - ev.front());
  return {ev.front() - pad, ev.back() + pad};
}

int cmd_xi(const RunConfig& cfg, const fs::path& out, int workers) {
  WeylOptions opt;
  opt.tol = cfg.tol;
  opt.fast_tail = true;
  Reporter rep;
  json files = json::array();
  fs::create_directories(out);
  const bool dirac = cfg.model["type"] == "borg-dirac";
  const int nodes = std::min(cfg.lambda_nodes, 4001);

  auto bound_check = [&](const XiGrid& g) {
    double worst = 0.0;
    for (const Mat& v : g.values) {
      auto ev = herm_eigenvalues(v);
      worst = std::max({worst, -ev.minCoeff(), ev.maxCoeff() - 1.0});
    }
    rep.require(worst <= 1e-6, "0 <= Xi <= I", worst, 1e-6);
  };
  auto emit = [&](const XiGrid& g, int k, const char* prefix) {
    bound_check(g);
    std::string name = std::string(prefix) + std::to_string(k) + ".csv";
    write_file((out / name).string(), xi_grid_to_csv(g));
    files.push_back(name);
  };

  if (dirac) {
    auto mem = borg_family(cfg.model["E_minus"].get<double>(),
                           cfg.model["E_plus"].get<double>(),
                           dirac_model_signs(cfg.model), cfg.k_lo, cfg.k_hi);
    double lo = cfg.lambda_min, hi = cfg.lambda_max;
    if (!cfg.lambda_set) {
      lo = -std::sqrt(cfg.model["E_plus"].get<double>()) - 0.5;
      hi = -lo;
    }
    for (int k : cfg.sites)
      emit(upsilon_dirac_grid(mem.coeffs, k, lo, hi, nodes, cfg.eps, opt,
                              workers),
           k, "upsilon_k");
  } else {
    auto c = build_jacobi_model(cfg.model);
    double lo = cfg.lambda_min, hi = cfg.lambda_max;
    if (!cfg.lambda_set) {
      auto [em, ep] = numerical_band(c);
      lo = em - 0.5;
      hi = ep + 0.5;
    }
    for (int k : cfg.sites)
      emit(xi_grid(c, k, lo, hi, nodes, cfg.eps, XiTarget::XiOfG, Side::Plus,
                   opt, workers),
           k, "xi_k");
  }
  json body{{"command", "xi"},
            {"config", canonical_config(cfg)},
            {"files", files},
            {"failures", rep.failures}};
  write_report(out, "xi.json", body);
  return rep.ok() ? 0 : 1;
}

int cmd_trace(const RunConfig& cfg, const fs::path& out, int workers) {
  auto c = build_jacobi_model(cfg.model);
  WeylOptions opt;
  opt.tol = cfg.tol;
  opt.fast_tail = true;
  auto [em, ep] = numerical_band(c);
  Reporter rep;
  json rows = json::array();
  for (int k : cfg.sites) {
    XiGrid g = xi_grid(c, k, em, ep, cfg.lambda_nodes, cfg.eps,
                       XiTarget::XiOfG, Side::Plus, opt, workers);
    auto s = s_series(c, k, 3);
    Mat r2 = trace_rhs(2, g, em, ep);
    Mat r3 = trace_rhs(3, g, em, ep);
    double e2 = opnorm(r2 - s.coeff(2));
    double e3 = opnorm(r3 - s.coeff(3));
    rows.push_back(json{{"k", k},
                        {"E_minus", em},
                        {"E_plus", ep},
                        {"s2_error", e2},
                        {"s3_error", e3},
                        {"s2", matrix_to_json(s.coeff(2))},
                        {"trace_rhs2", matrix_to_json(r2)},
                        {"s3", matrix_to_json(s.coeff(3))},
                        {"trace_rhs3", matrix_to_json(r3)}});
    rep.require(e2 <= 2e-2, "trace formula j=2", e2, 2e-2);
    rep.require(e3 <= 5e-2, "trace formula j=3", e3, 5e-2);
  }
  json body{{"command", "trace"},
            {"config", canonical_config(cfg)},
            {"sites", rows},
            {"failures", rep.failures}};
  write_report(out, "trace.json", body);
  return rep.ok() ? 0 : 1;
}

int cmd_borg_jacobi(const RunConfig& cfg, const fs::path& out, int workers) {
  if (cfg.model["type"] != "borg-jacobi")
    throw ConfigError("borg-jacobi command needs a borg-jacobi model");
  const double em = cfg.model["E_minus"].get<double>();
  const double ep = cfg.model["E_plus"].get<double>();
  const int m = cfg.model.value("m", 2);
  auto c = borg_jacobi(em, ep, m);
  WeylOptions opt;
  opt.tol = cfg.tol;
  opt.fast_tail = true;
  Reporter rep;

  auto ev = spectrum_estimate(truncate_jacobi(c, -1000, 999));
  rep.require(ev.front() >= em - 1e-8 && ev.back() <= ep + 1e-8,
              "spectrum containment",
              std::min(ev.front() - em, ep - ev.back()), 1e-8);
  double gap = std::max(std::abs(ev.front() - em), std::abs(ev.back() - ep));
  rep.require(gap <= 1e-3, "endpoint gaps", gap, 1e-3);

  Rng rng(2026);
  double g_err = 0.0, m_err = 0.0;
  for (int i = 0; i < 20; ++i) {
    cplx z(rng.uniform(em - 2, ep + 2), rng.uniform(1.0, 2.5));
    for (int k : {-2, -1, 0, 1, 2}) {
      g_err = std::max(g_err, opnorm(greens_full(c, z, k, k, opt) -
                                     borg_reference_g(z, em, ep, m)));
      MPair p = weyl_pair(c, z, k, opt);
      m_err = std::max(
          {m_err, opnorm(p.plus - borg_reference_M(z, em, ep, Side::Plus, m)),
           opnorm(p.minus - borg_reference_M(z, em, ep, Side::Minus, m))});
    }
  }
  rep.require(g_err <= 1e-8, "g matches the closed form", g_err, 1e-8);
  rep.require(m_err <= 1e-8, "M_pm match the closed form", m_err, 1e-8);

  auto refl = reflectionless_check(c, em, ep, {-2, -1, 0, 1, 2}, cfg.eps,
                                   2e-2, 201, opt, workers);
  double xi_dev = 0.0;
  for (double d : refl.max_deviation) xi_dev = std::max(xi_dev, d);
  rep.require(refl.verdict, "Xi within delta of I/2", xi_dev, 2e-2);

  json body{{"command", "borg-jacobi"},
            {"config", canonical_config(cfg)},
            {"spectrum_min", ev.front()},
            {"spectrum_max", ev.back()},
            {"greens_reference_error", g_err},
            {"weyl_reference_error", m_err},
            {"max_xi_deviation", xi_dev},
            {"failures", rep.failures}};
  write_report(out, "borg_jacobi.json", body);
  return rep.ok() ? 0 : 1;
}

int cmd_borg_dirac(const RunConfig& cfg, const fs::path& out, int workers) {
  if (cfg.model["type"] != "borg-dirac")
    throw ConfigError("borg-dirac command needs a borg-dirac model");
  const double em = cfg.model["E_minus"].get<double>();
  const double ep = cfg.model["E_plus"].get<double>();
  const int m = static_cast<int>(dirac_model_signs(cfg.model).size());
  WeylOptions opt;
  opt.tol = cfg.tol;
  Reporter rep;

  std::vector<std::vector<int>> patterns;
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::vector<int> s(m);
    for (int j = 0; j < m; ++j) s[j] = (mask >> j) & 1 ? -1 : 1;
    patterns.push_back(s);
  }

  std::vector<BorgFamilyMember> mems;
  for (const auto& p : patterns)
    mems.push_back(borg_family(em, ep, p, cfg.k_lo, cfg.k_hi));
  std::vector<std::vector<double>> spectra(patterns.size());
  parallel_for(
      static_cast<long>(patterns.size()),
      [&](long i) {
        spectra[i] = dirac_spectrum_susy(mems[i].coeffs, cfg.k_lo, cfg.k_hi);
      },
      workers);

  auto hausdorff = [](const std::vector<double>& a,
                      const std::vector<double>& b) {
    double h = 0.0;
    std::size_t j = 0;
    for (double x : a) {  // both sorted ascending
      while (j + 1 < b.size() && std::abs(b[j + 1] - x) <= std::abs(b[j] - x))
        ++j;
      h = std::max(h, std::abs(b[j] - x));
    }
    return h;
  };

  double worst_h = 0.0, worst_band = 0.0;
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    for (std::size_t j2 = i + 1; j2 < spectra.size(); ++j2)
      worst_h = std::max({worst_h, hausdorff(spectra[i], spectra[j2]),
                          hausdorff(spectra[j2], spectra[i])});
    for (double v : spectra[i]) {
      double av = std::abs(v);
      double dist = av < std::sqrt(em)   ? std::sqrt(em) - av
                    : av > std::sqrt(ep) ? av - std::sqrt(ep)
                                         : 0.0;
      worst_band = std::max(worst_band, dist);
    }
  }
  rep.require(worst_h <= 1e-3, "pairwise Hausdorff", worst_h, 1e-3);
  rep.require(worst_band <= 1e-3, "band containment", worst_band, 1e-3);

  // cross-route Weyl agreement on every member; in-gap mode count of the
  // direct window truncation reported as a boundary-artifact diagnostic
  json members = json::array();
  Rng rng(515);
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    double cross = 0.0;
    for (int t = 0; t < 5; ++t) {
      cplx z(rng.uniform(0.3, 1.5), rng.uniform(0.3, 1.2));
      auto w =
          dirac_weyl(mems[i].coeffs, z, 0, Side::Plus, DiracRoute::H1, opt);
      cross = std::max(cross, w.cross_residual);
    }
    rep.require(cross <= 1e-8, "Weyl cross route", cross, 1e-8);
    int gap_modes = 0;
    auto direct = truncate_dirac(mems[i].coeffs, -50, 49).spectrum();
    for (double v : direct)
      if (std::abs(v) < std::sqrt(em) - 1e-3) ++gap_modes;
    members.push_back(json{{"signs", patterns[i]},
                           {"rho", matrix_to_json(mems[i].rho_value)},
                           {"chi", matrix_to_json(mems[i].chi_value)},
                           {"cross_route_error", cross},
                           {"window_gap_modes", gap_modes}});
  }

  json body{{"command", "borg-dirac"},
            {"config", canonical_config(cfg)},
            {"members", members},
            {"pairwise_hausdorff", worst_h},
            {"band_containment_error", worst_band},
            {"failures", rep.failures}};
  write_report(out, "borg_dirac.json", body);
  return rep.ok() ? 0 : 1;
}

int cmd_reconstruct(const RunConfig& cfg, const fs::path& out) {
  auto c = build_jacobi_model(cfg.model);
  const int k0 = 0, steps = 5, n_sites = 12;
  MatrixMeasure mu = spectral_measure_halfline(c, k0, Side::Plus, n_sites);
  write_report(out, "measure.json", measure_to_json(mu));
  // round trip through the exported file
  MatrixMeasure mu2 = measure_from_json(
      json::parse(read_file((out / "measure.json").string())));
  auto sys = block_lanczos(mu2, steps);
  auto rec = map_to_lattice(sys, k0, Side::Plus);
  Reporter rep;
  double worst = 0.0;
  for (int k = 0; k < steps; ++k) {
    worst = std::max(worst, opnorm(rec.a.at(k0 + k) - c.a().at(k0 + k)));
    worst = std::max(worst, opnorm(rec.b.at(k0 + k) - c.b().at(k0 + k)));
  }
  rep.require(worst <= 1e-8, "round trip first 5 sites", worst, 1e-8);
  double poly = 0.0;
  for (int k = 0; k <= 4; ++k)
    poly = std::max(
        poly, poly_solution_identity(c, k0, cplx(0.8, 0.6), k, n_sites));
  rep.require(poly <= 1e-8, "polynomial identities", poly, 1e-8);
  json body{{"command", "reconstruct"},
            {"config", canonical_config(cfg)},
            {"roundtrip_error", worst},
            {"poly_identity_residual", poly},
            {"failures", rep.failures}};
  write_report(out, "reconstruct.json", body);
  return rep.ok() ? 0 : 1;
}

int cmd_verify_all(const fs::path& out, int workers) {
  auto results = run_all_criteria(workers, true);
  json rows = json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    rows.push_back(json{{"id", r.id},
                        {"name", r.name},
                        {"passed", r.passed},
                        {"max_error", r.max_error},
                        {"tolerance", r.tolerance},
                        {"seconds", r.seconds},
                        {"detail", r.detail}});
  }
  write_report(out, "verify_all.json",
               json{{"command", "verify-all"}, {"criteria", rows}});
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix-valued Jacobi / supersymmetric Dirac spectral toolbox"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  int workers = 0;
  double tol = -1.0;
  long seed = -1;
  app.add_option("--config", config_path, "config JSON path");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--workers", workers,
                 "worker threads (JBORG_WORKERS fallback)");
  app.add_option("--tol", tol, "override tolerances.tol");
  app.add_option("--seed", seed, "override model seed");

  for (const char* n :
       {"spectrum", "weyl", "greens", "xi", "trace", "borg-jacobi",
        "borg-dirac", "reconstruct", "verify-all"})
    app.add_subcommand(n)->fallthrough();

  CLI11_PARSE(app, argc, argv);
  std::string cmd = app.get_subcommands().front()->get_name();
  workers = resolve_workers(workers);

  try {
    fs::path out(out_dir);
    if (cmd == "verify-all") return cmd_verify_all(out, workers);
    if (config_path.empty()) throw ConfigError("--config is required");
    RunConfig cfg = parse_config_file(config_path, tol, seed);
    if (cmd == "spectrum") return cmd_spectrum(cfg, out);
    if (cmd == "weyl") return cmd_weyl(cfg, out);
    if (cmd == "greens") return cmd_greens(cfg, out);
    if (cmd == "xi") return cmd_xi(cfg, out, workers);
    if (cmd == "trace") return cmd_trace(cfg, out, workers);
    if (cmd == "borg-jacobi") return cmd_borg_jacobi(cfg, out, workers);
    if (cmd == "borg-dirac") return cmd_borg_dirac(cfg, out, workers);
    if (cmd == "reconstruct") return cmd_reconstruct(cfg, out);
    throw ConfigError("unknown command " + cmd);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
}
