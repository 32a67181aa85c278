#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spiralbound/bound.hpp"
#include "spiralbound/certificate.hpp"
#include "spiralbound/config.hpp"
#include "spiralbound/csv.hpp"
#include "spiralbound/fd/eigensolver.hpp"
#include "spiralbound/fd/grid.hpp"
#include "spiralbound/fd/laplacian.hpp"
#include "spiralbound/potential.hpp"
#include "spiralbound/window.hpp"

namespace spiralbound::run {

namespace fs = std::filesystem;

inline std::string hash_string(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
  return buf;
}

inline void write_json(const fs::path& path, nlohmann::json j, std::uint64_t hash) {
  j["config_hash"] = hash_string(hash);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << j.dump(2) << "\n";
}

/// Builds the geometry window and emits the sampled admissible table.
inline GeometryWindow run_geometry(const RunConfig& cfg, const fs::path& out_dir) {
  WindowOptions opts;
  opts.grid_ratio = cfg.geometry.grid_ratio;
  opts.bump_refine = cfg.geometry.bump_refine;
  GeometryWindow w = find_s0(cfg.spiral, cfg.geometry.horizon, cfg.geometry.margin, opts);

  if (cfg.output.csv) {
    csv::Writer out((out_dir / "geometry.csv").string(),
                    {"theta", "s", "gamma", "dgamma_ds", "ddgamma_ds2", "d", "W_eff"},
                    cfg.hash);
    for (const WindowRow& r : w.admissible_rows()) {
      const CurvatureData c{r.s, r.gamma, r.dgamma_ds, r.ddgamma_ds2};
      out.row(r.theta, r.s, r.gamma, r.dgamma_ds, r.ddgamma_ds2, r.d,
              potential_effective_from(c, r.d));
    }
  }
  return w;
}

inline BoundResult dispatch_bound(const GeometryWindow& w, const RunConfig& cfg,
                                  double sigma) {
  BoundParams p;
  p.sigma = sigma;
  p.threshold = cfg.bound.threshold;
  p.r_factor = cfg.bound.r_factor;
  p.quad_rel_tol = cfg.bound.quad_rel_tol;
  p.tail_cut = cfg.bound.tail_cut;
  return sigma >= 1.5 ? bound_main(w, p) : bound_low_sigma(w, p);
}

/// One bound row per sigma; sigma >= 3/2 routes to the main bound, smaller
/// sigma to the low-sigma variant.
inline std::vector<BoundResult> run_bounds(const RunConfig& cfg, const GeometryWindow& w,
                                           const fs::path& out_dir) {
  std::vector<BoundResult> results;
  results.reserve(cfg.bound.sigmas.size());
  for (double sigma : cfg.bound.sigmas) results.push_back(dispatch_bound(w, cfg, sigma));

  if (cfg.output.csv) {
    csv::Writer out((out_dir / "bounds.csv").string(),
                    {"sigma", "integral_term", "omega2_term", "total",
                     "quad_error_estimate", "s_star"},
                    cfg.hash);
    for (std::size_t i = 0; i < results.size(); ++i) {
      const BoundResult& b = results[i];
      out.row(cfg.bound.sigmas[i], b.integral_term, b.omega2_term, b.total,
              b.quad_error_estimate, b.s_star);
    }
  }
  if (cfg.output.json) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      const BoundResult& b = results[i];
      rows.push_back({{"sigma", cfg.bound.sigmas[i]},
                      {"integral_term", b.integral_term},
                      {"omega2_term", b.omega2_term},
                      {"total", b.total},
                      {"quad_error_estimate", b.quad_error_estimate},
                      {"s_star", b.s_star},
                      {"tail_estimate", b.tail_estimate},
                      {"positive_at_horizon", b.positive_at_horizon}});
    }
    write_json(out_dir / "bounds.json", {{"bounds", rows}}, cfg.hash);
  }
  return results;
}

/// Certificate, integrability and asymptotic diagnostics.
inline CertificateReport run_certify(const RunConfig& cfg, const GeometryWindow& w,
                                     const fs::path& out_dir) {
  const CertificateReport rep = no_discrete_spectrum_certificate(w, cfg.certify.rel_tol);

  if (cfg.output.csv) {
    csv::Writer out((out_dir / "margins.csv").string(), {"theta", "s", "lhs", "rhs", "margin"},
                    cfg.hash);
    for (const CertificateSample& smp : certificate_margins(w, rep.alpha))
      out.row(smp.theta, smp.s, smp.lhs, smp.rhs, smp.lhs - smp.rhs);

    if (w.spec().family != RhoFamily::power_tail) {
      csv::Writer diag((out_dir / "diagnostics.csv").string(),
                       {"theta", "s", "theta6_d_residual", "curvature_residual",
                        "arclength_residual", "potential_residual"},
                       cfg.hash);
      for (const DiagnosticsRow& r : asymptotic_diagnostics(w))
        diag.row(r.theta, r.s, r.theta6_d_residual, r.curvature_residual,
                 r.arclength_residual, r.potential_residual);
    }
  }
  if (cfg.output.json) {
    nlohmann::json tails = nlohmann::json::array();
    for (double sigma : cfg.bound.sigmas) {
      const TailReport t = tail_integrability(w, sigma);
      tails.push_back({{"sigma", sigma},
                       {"finite", t.finite},
                       {"tail_estimate", t.tail_estimate},
                       {"note", t.note}});
    }
    write_json(out_dir / "certificate.json",
               {{"verdict", to_string(rep.verdict)},
                {"alpha", rep.alpha},
                {"alpha_limit_archimedean", 4.0 * kPi * std::pow(w.a0(), 3.0)},
                {"worst_margin", rep.worst_margin},
                {"worst_s", rep.worst_s},
                {"worst_rel_margin", rep.worst_rel_margin},
                {"rel_tol", rep.rel_tol},
                {"note", rep.note},
                {"window_notes", w.notes()},
                {"tail_integrability", tails}},
               cfg.hash);
  }
  return rep;
}

struct VerifyOutcome {
  fd::SpectrumResult spectrum;
  std::vector<double> moments;       // per sigma
  std::vector<double> bound_totals;  // per sigma
  bool all_hold = false;
};

inline void dump_binary(const fs::path& path, const void* data, std::size_t bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out.write(static_cast<const char*>(data), std::streamsize(bytes));
}

/// FD-oracle comparison: eigenvalue moments below the threshold against the
/// bound totals, plus plot data (integrand vs s, eigenvalues vs threshold).
inline VerifyOutcome run_verify(const RunConfig& cfg, const GeometryWindow& w,
                                const std::vector<BoundResult>& bounds,
                                const fs::path& out_dir) {
  const double lambda = std::isnan(cfg.bound.threshold)
                            ? 1.0 / (4.0 * cfg.spiral.a0 * cfg.spiral.a0)
                            : cfg.bound.threshold;

  if (cfg.output.csv) {
    csv::Writer out((out_dir / "integrand.csv").string(),
                    [&] {
                      std::vector<std::string> h{"s"};
                      for (double sg : cfg.bound.sigmas)
                        h.push_back("integrand_sigma_" + csv::format(sg));
                      return h;
                    }(),
                    cfg.hash);
    const auto rows = w.admissible_rows();
    const int n_plot = 200;
    for (int i = 0; i < n_plot; ++i) {
      const double s = rows.front().s +
                       (rows.back().s - rows.front().s) * i / double(n_plot - 1);
      std::vector<std::string> cells{csv::format(s)};
      for (double sg : cfg.bound.sigmas) {
        BoundParams p;
        p.sigma = sg;
        p.threshold = cfg.bound.threshold;
        p.r_factor = cfg.bound.r_factor;
        cells.push_back(csv::format(bound_integrand(w, p, s)));
      }
      out.row_cells(cells);
    }
  }

  const fd::GridDomain grid = fd::build_grid(cfg.spiral, cfg.oracle.h, cfg.oracle.R);
  const fd::DirichletLaplacian op(grid);
  fd::EigenOptions eo;
  eo.k = cfg.oracle.k;
  eo.tol = cfg.oracle.tol;
  eo.shift = cfg.oracle.shift;
  eo.seed = cfg.oracle.seed;
  eo.max_basis = cfg.oracle.max_basis;
  eo.max_restarts = cfg.oracle.max_restarts;
  fd::SpectrumResult spec = fd::lowest_eigenvalues(op, eo);
  spec.threshold = lambda;

  if (cfg.output.csv) {
    csv::Writer out((out_dir / "eigenvalues.csv").string(), {"index", "lambda", "residual"},
                    cfg.hash);
    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i)
      out.row(int(i), spec.eigenvalues[i], spec.residuals[i]);
  }
  if (cfg.oracle.dump_eigenvectors) {
    dump_binary(out_dir / "mask.bin", grid.status.data(), grid.status.size());
    write_json(out_dir / "mask.json",
               {{"side", grid.side()},
                {"h", grid.h},
                {"R", grid.R},
                {"origin_index", grid.n},
                {"encoding", "int8 row-major: 0 interior, 1 dirichlet_curve, 2 dirichlet_outer"}},
               cfg.hash);
    for (std::size_t v = 0; v < spec.vectors.size(); ++v) {
      std::vector<double> full(grid.node_count(), 0.0);
      for (std::size_t k2 = 0; k2 < grid.interior_count(); ++k2)
        full[std::size_t(grid.interior_nodes[k2])] = spec.vectors[v][Eigen::Index(k2)];
      char name[32];
      std::snprintf(name, sizeof(name), "eigvec_%03zu.bin", v);
      dump_binary(out_dir / name, full.data(), full.size() * sizeof(double));
    }
    write_json(out_dir / "eigvec.json",
               {{"count", spec.vectors.size()},
                {"side", grid.side()},
                {"h", grid.h},
                {"R", grid.R},
                {"encoding", "float64 row-major, zeros at dirichlet nodes"}},
               cfg.hash);
  }

  if (!spec.converged) {
    // partial artifacts stay on disk
    throw std::runtime_error("verify: eigensolver did not reach the residual tolerance (best " +
                             std::to_string(spec.residuals.empty() ? -1.0
                                                                   : spec.residuals.back()) +
                             ")");
  }

  VerifyOutcome out;
  out.spectrum = std::move(spec);
  out.all_hold = true;
  nlohmann::json per_sigma = nlohmann::json::array();
  for (std::size_t i = 0; i < cfg.bound.sigmas.size(); ++i) {
    const double sigma = cfg.bound.sigmas[i];
    const double moment = fd::moment_sum(out.spectrum, sigma, lambda);
    const double total = bounds[i].total;
    const bool holds = moment <= total;
    out.moments.push_back(moment);
    out.bound_totals.push_back(total);
    out.all_hold = out.all_hold && holds;
    per_sigma.push_back(
        {{"sigma", sigma}, {"moment", moment}, {"bound_total", total}, {"holds", holds}});
  }

  if (cfg.output.json) {
    write_json(out_dir / "verify.json",
               {{"threshold", lambda},
                {"eigenvalues", out.spectrum.eigenvalues},
                {"residuals", out.spectrum.residuals},
                {"shift_used", out.spectrum.shift_used},
                {"op_applications", out.spectrum.op_applications},
                {"comparison", per_sigma},
                {"all_hold", out.all_hold}},
               cfg.hash);
  }
  return out;
}

}  // namespace spiralbound::run
