#include "normsol/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "normsol/blowup.hpp"
#include "normsol/report.hpp"
#include "normsol/snapshot.hpp"
#include "normsol/soliton.hpp"
#include "normsol/sphere_min.hpp"
#include "normsol/spectral.hpp"
#include "normsol/tiling.hpp"
#include "normsol/two_constraint.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace normsol {

namespace {

struct CommonArgs {
  std::string domain = "interval:0,pi";
  int n = 512;
  double p = 3.0;
  std::uint64_t seed = 12345;
  std::string out = ".";
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_p = true) {
  cmd->add_option("--domain", a.domain, "domain: interval:a,b | rectangle:w0,w1 | square:w | disk:r");
  cmd->add_option("--n", a.n, "grid resolution per axis");
  if (with_p) cmd->add_option("--p", a.p, "nonlinearity exponent");
  cmd->add_option("--seed", a.seed, "seed for randomized restarts");
  cmd->add_option("--out", a.out, "output directory");
  cmd->set_config("--config", "", "flat key=value config file (flags win)");
}

std::string out_path(const CommonArgs& a, const std::string& name) {
  fs::create_directories(a.out);
  return (fs::path(a.out) / name).string();
}

void put_common(RunConfig& cfg, const std::string& command, const CommonArgs& a) {
  cfg.set("command", command);
  cfg.set("domain", a.domain);
  cfg.set("n", a.n);
  cfg.set("seed", std::to_string(a.seed));
}

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw config_error("cannot open " + path);
  os << j.dump(2) << "\n";
}

double finite_or(double x, double fallback) { return std::isfinite(x) ? x : fallback; }

json json_num(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

int cmd_eig(const CommonArgs& a, int count, bool snapshots) {
  RunConfig cfg;
  put_common(cfg, "eig", a);
  cfg.set("count", count);

  GridPtr grid = build_grid(parse_domain(a.domain), a.n);
  auto pairs = dirichlet_eigs(grid, count);
  write_eig_csv(out_path(a, "eig.csv"), pairs, cfg.hash());
  if (snapshots) {
    char name[32];
    for (const EigenPair& ep : pairs) {
      std::snprintf(name, sizeof(name), "phi_%03d.mbf", ep.k);
      write_snapshot(out_path(a, name), ep.phi, a.p);
    }
  }
  std::cout << "eig: " << count << " pairs on " << a.domain << ", lambda1 = "
            << fmt17(pairs[0].lambda) << "\n";
  return 0;
}

int cmd_soliton(const CommonArgs& a, int N) {
  RunConfig cfg;
  put_common(cfg, "soliton", a);
  cfg.set("N", N);
  cfg.set("p", a.p);

  SolitonProfile prof = shoot_ground_state(N, a.p);
  const double C = gn_constant(prof);

  GridPtr grid = build_grid(parse_domain(a.domain), a.n);
  auto pairs = dirichlet_eigs(grid, 3);
  Constants cons = thresholds(N, a.p, C, pairs[0].lambda, pairs[2].lambda);
  const double mh = mu_hat_1(pairs[0].lambda, C, measure(grid->domain), N, a.p);

  json j;
  j["config_hash"] = cfg.hash();
  j["N"] = N;
  j["p"] = a.p;
  j["beta"] = cons.beta;
  j["C_Np"] = C;
  j["Z0"] = prof.z0;
  j["Z_l2sq"] = prof.l2sq;
  j["D_Np"] = cons.D_Np;
  j["rho_star"] = json_num(cons.rho_star);
  j["rho1_lower"] = json_num(cons.rho1_lower);
  j["rho3_lower"] = json_num(cons.rho3_lower);
  j["mu_hat_1"] = json_num(mh);
  j["lambda1"] = pairs[0].lambda;
  j["lambda3"] = pairs[2].lambda;
  write_json(out_path(a, "constants.json"), j);
  std::cout << "soliton: N=" << N << " p=" << fmt17(a.p) << " Z0=" << fmt17(prof.z0)
            << " C_Np=" << fmt17(C) << "\n";
  return 0;
}

int cmd_branch(const CommonArgs& a, const std::string& alpha_range, int steps,
               bool snapshots) {
  const auto colon = alpha_range.find(':');
  if (colon == std::string::npos)
    throw config_error("--alpha expects start:end, got " + alpha_range);
  const double a0 = parse_number(alpha_range.substr(0, colon));
  const double a1 = parse_number(alpha_range.substr(colon + 1));

  RunConfig cfg;
  put_common(cfg, "branch", a);
  cfg.set("p", a.p);
  cfg.set("alpha_start", a0);
  cfg.set("alpha_end", a1);
  cfg.set("steps", steps);

  GridPtr grid = build_grid(parse_domain(a.domain), a.n);
  SolverOptions opts;
  opts.seed = a.seed;
  Branch br = continue_branch(grid, a.p, a0, a1, steps, opts);

  BranchMeta meta;
  meta.domain = grid->domain;
  meta.resolution = a.n;
  meta.p = a.p;
  meta.lambda1 = grid->lambda1;
  meta.config_hash = cfg.hash();
  write_branch_csv(out_path(a, "branch.csv"), br, meta);
  if (snapshots) {
    char name[32];
    for (size_t i = 0; i < br.points.size(); ++i) {
      std::snprintf(name, sizeof(name), "point_%03zu.mbf", i);
      write_snapshot(out_path(a, name), br.points[i].u, a.p);
    }
  }
  std::cout << "branch: " << br.points.size() << " points, alpha in ["
            << fmt17(a0) << ", " << fmt17(a1) << "], final mu = "
            << fmt17(br.points.back().mu) << "\n";
  return 0;
}

int cmd_minimize(const CommonArgs& a, double mu, double alpha_cap) {
  RunConfig cfg;
  put_common(cfg, "minimize", a);
  cfg.set("p", a.p);
  cfg.set("mu", mu);
  cfg.set("alpha_cap", alpha_cap);

  GridPtr grid = build_grid(parse_domain(a.domain), a.n);
  MinimizerResult res = minimize_local(grid, a.p, mu, alpha_cap);

  json j;
  j["config_hash"] = cfg.hash();
  j["p"] = a.p;
  j["mu"] = mu;
  j["rho"] = rho_from_mu(mu, a.p);
  j["alpha_cap"] = res.alpha_cap;
  j["h1sq"] = res.h1sq;
  j["lambda"] = res.lambda;
  j["energy"] = res.energy;
  j["morse"] = res.morse;
  j["morse_borderline"] = res.morse_borderline;
  j["hit_cap"] = res.hit_cap;
  j["converged"] = res.converged;
  j["residual"] = res.residual;
  j["iterations"] = res.iterations;
  write_json(out_path(a, "minimize.json"), j);
  if (res.converged) write_snapshot(out_path(a, "minimizer.mbf"), res.u, a.p);

  std::cout << "minimize: mu=" << fmt17(mu)
            << (res.hit_cap ? " hit_cap" : res.converged ? " converged" : " not converged")
            << " h1sq=" << fmt17(res.h1sq) << " morse=" << res.morse << "\n";
  return res.converged ? 0 : 3;
}

int cmd_tile(const CommonArgs& a, const std::string& in, double lambda, double mu, int k) {
  RunConfig cfg;
  put_common(cfg, "tile", a);
  cfg.set("in", in);
  cfg.set("lambda", lambda);
  cfg.set("mu", mu);
  cfg.set("k", k);

  Snapshot snap = read_snapshot(in);
  TiledSolution tiled = tile_rectangle(snap.field, lambda, mu, snap.p, k);
  MorseCount mc = morse_index(tiled.u, tiled.lambda, mu, snap.p);

  json j;
  j["config_hash"] = cfg.hash();
  j["p"] = snap.p;
  j["k"] = k;
  j["lambda_new"] = tiled.lambda;
  j["mass_ratio"] = tiled.mass_ratio;
  j["residual"] = tiled.residual;
  j["morse"] = mc.index;
  j["morse_borderline"] = mc.borderline;
  write_json(out_path(a, "tile.json"), j);
  write_snapshot(out_path(a, "tiled.mbf"), tiled.u, snap.p);
  std::cout << "tile: k=" << k << " mass_ratio=" << fmt17(tiled.mass_ratio)
            << " lambda_new=" << fmt17(tiled.lambda) << " morse=" << mc.index << "\n";
  return 0;
}

int cmd_diag(const CommonArgs& a, const std::string& in) {
  RunConfig cfg;
  put_common(cfg, "diag", a);
  cfg.set("in", in);

  const fs::path dir(in);
  BranchFile bf = read_branch_csv((dir / "branch.csv").string());
  const int N = bf.meta.domain.dim();
  BlowupReport rep = asymptotic_ratios_rows(bf.rows, N, bf.meta.p, bf.meta.lambda1);

  json j;
  j["config_hash"] = cfg.hash();
  j["p"] = bf.meta.p;
  j["alpha_lambda_limit"] = rep.verdicts.alpha_lambda_limit;
  j["mu_trichotomy"] = rep.verdicts.mu_trichotomy;
  j["mu_limit"] = json_num(rep.verdicts.mu_limit);
  j["gn_ratio_limit"] = rep.verdicts.gn_ratio_limit;
  j["stable"] = rep.verdicts.stable;

  json rows = json::array();
  for (const RatioRow& r : rep.rows) {
    rows.push_back({{"alpha", r.alpha},
                    {"lambda", r.lambda},
                    {"mu", r.mu},
                    {"alpha_over_lambda", r.alpha_over_lambda},
                    {"gn_ratio", r.gn_ratio}});
  }
  j["rows"] = rows;

  // Bump structure and decay fit from the last snapshot, when present.
  char name[32];
  std::snprintf(name, sizeof(name), "point_%03zu.mbf", bf.rows.size() - 1);
  const fs::path last = dir / name;
  if (fs::exists(last)) {
    Snapshot snap = read_snapshot(last.string());
    const double lambda = bf.rows.back().lambda;
    BumpInfo bumps = bump_detect(snap.field, lambda);
    j["bumps"] = bumps.centers.size();
    j["min_boundary_dist_scaled"] = finite_or(bumps.min_boundary_dist_scaled, 0.0);
    try {
      j["gamma_fit"] = decay_fit(snap.field, lambda, bumps.centers);
    } catch (const numerical_error&) {
      j["gamma_fit"] = nullptr;
    }
  }
  write_json(out_path(a, "diag.json"), j);
  std::cout << "diag: alpha/lambda -> " << fmt17(rep.verdicts.alpha_lambda_limit)
            << ", mu " << rep.verdicts.mu_trichotomy << ", GN ratio -> "
            << fmt17(rep.verdicts.gn_ratio_limit) << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"normalized solutions of -Lap U + lambda U = |U|^{p-1} U on bounded domains"};
  app.require_subcommand(1);

  CommonArgs a;
  int count = 3, steps = 40, k = 2, N = 1;
  double mu = 0.1, alpha_cap = 0.0, lambda_in = 0.0, mu_in = 1.0;
  std::string alpha_range = "2:100", in;
  bool snapshots = false;

  CLI::App* eig = app.add_subcommand("eig", "Dirichlet eigenpairs to CSV + snapshots");
  add_common(eig, a, false);
  eig->add_option("--count", count, "number of eigenpairs");
  eig->add_flag("--snapshots", snapshots, "write eigenfunction snapshots");

  CLI::App* soliton = app.add_subcommand("soliton", "ground-state constants report");
  add_common(soliton, a);
  soliton->add_option("--N", N, "space dimension (1..3)");

  CLI::App* branch = app.add_subcommand("branch", "two-constraint continuation in alpha");
  add_common(branch, a);
  branch->add_option("--alpha", alpha_range, "alpha range start:end");
  branch->add_option("--steps", steps, "number of branch points");
  branch->add_flag("--snapshots", snapshots, "write per-point field snapshots");

  CLI::App* minimize = app.add_subcommand("minimize", "local minimizer on the mass sphere");
  add_common(minimize, a);
  minimize->add_option("--mu", mu, "nonlinearity weight mu")->required();
  minimize->add_option("--alpha-cap", alpha_cap, "H1 cap (0 = automatic)");

  CLI::App* tile = app.add_subcommand("tile", "alternating-sign tiling of a stored solution");
  add_common(tile, a);
  tile->add_option("--in", in, "input field snapshot (.mbf)")->required();
  tile->add_option("--lambda", lambda_in, "multiplier lambda of the input")->required();
  tile->add_option("--mu", mu_in, "multiplier mu of the input");
  tile->add_option("--k", k, "tiles per axis");

  CLI::App* diag = app.add_subcommand("diag", "asymptotic diagnostics of a stored branch");
  add_common(diag, a);
  diag->add_option("--in", in, "directory containing branch.csv")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help();
      return 0;
    }
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (eig->parsed()) return cmd_eig(a, count, snapshots);
    if (soliton->parsed()) return cmd_soliton(a, N);
    if (branch->parsed()) return cmd_branch(a, alpha_range, steps, snapshots);
    if (minimize->parsed()) return cmd_minimize(a, mu, alpha_cap);
    if (tile->parsed()) return cmd_tile(a, in, lambda_in, mu_in, k);
    if (diag->parsed()) return cmd_diag(a, in);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace normsol
