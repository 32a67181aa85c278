// Command-line front end: geometry construction, eigenvalue-moment bounds,
// the no-discrete-spectrum certificate, and the finite-difference
// verification oracle, driven by a single declarative JSON config.
#include <CLI11.hpp>
#include <Eigen/Core>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spiralbound/runner.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::vector<double> sigmas;
  std::optional<std::string> family;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

spiralbound::RunConfig effective_config(const CliOverrides& o) {
  spiralbound::RunConfig cfg = spiralbound::load_config(o.config_path);
  if (o.out_dir) cfg.output.directory = *o.out_dir;
  if (!o.sigmas.empty()) cfg.bound.sigmas = o.sigmas;
  if (o.seed) cfg.oracle.seed = *o.seed;
  if (o.family) {
    spiralbound::SpiralSpec s = cfg.spiral;
    if (*o.family == "pure") {
      s.family = spiralbound::RhoFamily::pure;
    } else if (*o.family == "power_tail") {
      s.family = spiralbound::RhoFamily::power_tail;
      if (s.c <= 0.0) s.c = 0.5;
      if (s.p <= 1.0 || s.p >= 2.0) s.p = 1.5;
    } else if (*o.family == "bump") {
      s.family = spiralbound::RhoFamily::bump;
      if (!(s.theta2 > s.theta1)) {
        s.amplitude = 0.5;
        s.theta1 = 10.0;
        s.theta2 = 20.0;
      }
    } else {
      throw std::invalid_argument("--family must be pure, power_tail or bump");
    }
    cfg.spiral = s;
  }
  cfg.validate();
  cfg.hash = spiralbound::config_hash(cfg);
  return cfg;
}

enum class Stage { geometry, bounds, certify, verify, all };

int run_stages(Stage stage, const CliOverrides& o) {
  namespace sb = spiralbound;
  namespace fs = std::filesystem;
  const sb::RunConfig cfg = effective_config(o);
  const fs::path out_dir = cfg.output.directory;
  fs::create_directories(out_dir);

  std::printf("config %s  family=%s  out=%s\n", sb::run::hash_string(cfg.hash).c_str(),
              sb::to_string(cfg.spiral.family), out_dir.string().c_str());

  const sb::GeometryWindow window = sb::run::run_geometry(cfg, out_dir);
  std::printf("geometry: s0=%.6g (theta0=%.6g), %zu admissible samples\n", window.s0(),
              window.theta0(), window.admissible_rows().size());
  for (const std::string& note : window.notes()) std::printf("  note: %s\n", note.c_str());
  if (stage == Stage::geometry) return 0;

  bool ok = true;
  std::vector<sb::BoundResult> bounds;
  if (stage == Stage::bounds || stage == Stage::verify || stage == Stage::all) {
    bounds = sb::run::run_bounds(cfg, window, out_dir);
    for (std::size_t i = 0; i < bounds.size(); ++i)
      std::printf("bound sigma=%g: integral=%.8g omega2=%.8g total=%.8g (err<=%.2g)\n",
                  cfg.bound.sigmas[i], bounds[i].integral_term, bounds[i].omega2_term,
                  bounds[i].total, bounds[i].quad_error_estimate);
  }
  if (stage == Stage::certify || stage == Stage::all) {
    const sb::CertificateReport rep = sb::run::run_certify(cfg, window, out_dir);
    std::printf("certificate: %s (alpha=%.8g, worst margin %.4g at s=%.6g)\n",
                sb::to_string(rep.verdict), rep.alpha, rep.worst_margin, rep.worst_s);
  }
  if (stage == Stage::verify || stage == Stage::all) {
    const sb::run::VerifyOutcome v = sb::run::run_verify(cfg, window, bounds, out_dir);
    for (std::size_t i = 0; i < v.moments.size(); ++i)
      std::printf("verify sigma=%g: moment=%.8g <= total=%.8g : %s\n", cfg.bound.sigmas[i],
                  v.moments[i], v.bound_totals[i],
                  v.moments[i] <= v.bound_totals[i] ? "true" : "false");
    ok = ok && v.all_hold;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral bounds for Dirichlet Laplacians on spiral-shaped domains"};
  app.require_subcommand(1);

  CliOverrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "run configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", o.out_dir, "output directory (overrides config)");
    sub->add_option("--sigma", o.sigmas, "sigma list (overrides config)")->delimiter(',');
    sub->add_option("--family", o.family, "spiral family tag (overrides config)");
    sub->add_option("--seed", o.seed, "oracle starting-block seed (overrides config)");
    sub->add_option("--threads", o.threads, "solver thread budget");
  };

  std::map<std::string, Stage> stages{{"geometry", Stage::geometry},
                                      {"bounds", Stage::bounds},
                                      {"certify", Stage::certify},
                                      {"verify", Stage::verify},
                                      {"all", Stage::all}};
  std::map<std::string, CLI::App*> subs;
  subs["geometry"] = app.add_subcommand("geometry", "build the window and emit the table");
  subs["bounds"] = app.add_subcommand("bounds", "evaluate the eigenvalue-moment bounds");
  subs["certify"] = app.add_subcommand("certify", "no-discrete-spectrum certificate");
  subs["verify"] = app.add_subcommand("verify", "finite-difference oracle comparison");
  subs["all"] = app.add_subcommand("all", "every stage in sequence");
  for (auto& [name, sub] : subs) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  Eigen::setNbThreads(std::max(o.threads, 1));
  try {
    for (auto& [name, sub] : subs)
      if (sub->parsed()) return run_stages(stages.at(name), o);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
