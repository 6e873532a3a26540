#include "nls/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "nls/asymptotics.hpp"
#include "nls/io.hpp"

namespace nls::cli {

namespace {

namespace fs = std::filesystem;

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = lo * std::pow(hi / lo, n > 1 ? double(i) / (n - 1) : 0.0);
  return g;
}

std::string opath(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.output_dir);
  return (fs::path(c.output_dir) / name).string();
}

int run_constants(const RunConfig& c) {
  const ProblemParams p = c.params();
  const Soliton sol = soliton(p);
  const Constants consts = compute_constants(p, sol);
  const Json j = constants_json(p, consts);
  write_json_file(opath(c, "constants.json"), j);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_soliton(const RunConfig& c) {
  const ProblemParams p = c.params();
  const Soliton sol = soliton(p);
  write_csv_file(opath(c, "soliton.csv"), sol.profile, p, -1.0);
  const Json j{{"center", sol.center},
               {"mass_sq", sol.mass_sq},
               {"lq_q", sol.lq_q},
               {"grad_sq", sol.grad_sq},
               {"gn_constant", gn_constant(p, sol)}};
  write_json_file(opath(c, "soliton.json"), j);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_bubble(const RunConfig& c) {
  const ProblemParams p = c.params();
  const double r_max = c.r_max > 0 ? c.r_max : 1e3 * c.eps;
  auto grid = make_graded_grid(p, c.eps / 30.0, r_max,
                               c.n_nodes ? c.n_nodes / 20 : 1500);
  const RadialFn u = bubble(c.eps, grid);
  write_csv_file(opath(c, "bubble.csv"), u, p);
  std::cout << "bubble written, center " << fmt17(u.center) << "\n";
  return 0;
}

int run_project(const RunConfig& c) {
  const ProblemParams p = c.params();
  if (c.profile_csv.empty())
    fail(ErrorKind::InvalidArgument, "project needs --profile <csv>");
  const RadialFn u = read_csv_file(c.profile_csv, p.N);
  const FiberNorms n = FiberNorms::of(u, p);
  const FiberingProjection pr = project(n, p);
  Json j{{"t_plus", nullptr},
         {"t_minus", nullptr},
         {"psi_values", Json::object()},
         {"class_at_each", Json::object()}};
  if (pr.t_plus) {
    j["t_plus"] = *pr.t_plus;
    j["psi_values"]["plus"] = *pr.psi_at_plus;
    j["class_at_each"]["plus"] = "plus";
  }
  if (pr.t_minus) {
    j["t_minus"] = *pr.t_minus;
    j["psi_values"]["minus"] = *pr.psi_at_minus;
    j["class_at_each"]["minus"] = "minus";
  }
  write_json_file(opath(c, "projection.json"), j);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_solve(const RunConfig& c) {
  const ProblemParams p = c.params();
  std::vector<SolutionBranch> sols;
  if (c.branch == "ground") {
    sols.push_back(ground_state(c.a, c.mu, p));
  } else if (c.branch == "mp") {
    try {
      SolutionBranch s = solve_mass(c.a, c.mu, 1, p);
      sols.push_back(std::move(s));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BranchLost &&
          e.kind() != ErrorKind::NoSolutionOnBranch)
        throw;
      sols.push_back(solve_mass(c.a, c.mu, 0, p));
    }
  } else if (c.branch == "all") {
    for (int id = 0; id < 3; ++id) {
      try {
        sols.push_back(solve_mass(c.a, c.mu, id, p));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::BranchLost &&
            e.kind() != ErrorKind::NoSolutionOnBranch)
          throw;
      }
    }
    if (sols.empty())
      fail(ErrorKind::NoSolutionOnBranch, "no branch attains the mass");
  } else {
    fail(ErrorKind::InvalidArgument, "--branch must be ground|mp|all");
  }
  Json arr = Json::array();
  for (std::size_t i = 0; i < sols.size(); ++i) {
    arr.push_back(branch_json(sols[i], p));
    write_csv_file(
        opath(c, "profile_branch" + std::to_string(sols[i].branch_id) + ".csv"),
        sols[i].profile, p, sols[i].lambda);
  }
  const Json j = sols.size() == 1 ? arr[0] : Json{{"solutions", arr}};
  write_json_file(opath(c, "solve.json"), j);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int finish_check(const RunConfig& c, const CheckReport& rep,
                 const std::string& name) {
  const Json v = verdict_json(rep);
  write_json_file(opath(c, name + "_verdict.json"), v);
  std::cout << v.dump(2) << "\n";
  return rep.pass ? 0 : 1;
}

int run_sweep(const RunConfig& c) {
  const ProblemParams p = c.params();
  const auto grid = log_grid(c.mu_min, c.mu_max, c.points);

  if (c.check == "lemma21") {
    auto recs = sweep(p, grid, BranchKind::Plus);
    write_sweep_csv(opath(c, "sweep_plus.csv"), recs, p);
    const auto res = check_lemma21(recs, p);
    std::vector<double> mus, lams;
    for (const auto& r : recs) { mus.push_back(r.mu); lams.push_back(-r.lambda); }
    write_xy_csv(opath(c, "fit_lambda.csv"), "mu", "minus_lambda", mus, lams);
    return finish_check(c, res.report, c.check);
  }
  if (c.check == "prop21") {
    auto recs = sweep(p, grid, BranchKind::Plus);
    const Soliton sol = soliton(p);
    const auto res = check_prop21_profile(recs, p, sol);
    write_sweep_csv(opath(c, "sweep_plus.csv"), recs, p);
    return finish_check(c, res.report, c.check);
  }
  if (c.check == "bubble") {
    auto recs = sweep(p, grid, BranchKind::Minus);
    const double S = sobolev_constant(p.N);
    const auto rep = check_bubble_limit(recs, p, S);
    write_sweep_csv(opath(c, "sweep_minus.csv"), recs, p);
    return finish_check(c, rep, c.check);
  }
  if (c.check == "431") {
    auto recs = sweep(p, grid, BranchKind::Minus);
    const auto res = check_431(recs, p);
    write_sweep_csv(opath(c, "sweep_minus.csv"), recs, p);
    std::vector<double> eps, mus;
    for (const auto& r : recs)
      if (r.eps_mu) { eps.push_back(*r.eps_mu); mus.push_back(r.mu); }
    write_xy_csv(opath(c, "fit_eps.csv"), "eps_mu", "mu", eps, mus);
    return finish_check(c, res.report, c.check);
  }
  if (c.check == "thm13") {
    auto recs = sweep(p, grid, BranchKind::Minus);
    const Soliton sol = soliton(p);
    const double c_nq = gn_constant(p, sol);
    const auto rep = check_theorem13(recs, p, sol, c_nq);
    write_sweep_csv(opath(c, "sweep_minus.csv"), recs, p);
    return finish_check(c, rep, c.check);
  }
  if (c.check == "thm13crit") {
    const Soliton sol = soliton(p);
    const double S = sobolev_constant(p.N);
    const double alpha_a =
        std::pow(p.a, p.q * p.gamma_q - p.q) *
        alpha_crit(p, gn_constant(p, sol));
    std::vector<double> mus;  // --mu-* are fractions of the threshold here
    for (double f : log_grid(c.mu_min, c.mu_max, c.points))
      mus.push_back(f * alpha_a);
    const auto rep = check_theorem13_critical(p, mus, sol, S);
    return finish_check(c, rep, c.check);
  }
  if (c.check == "testfn") {
    const auto eps = log_grid(c.eps_min, c.eps_max, std::max(c.points, 13));
    const auto res = testfn_orders(eps, p);
    return finish_check(c, res.report, c.check);
  }
  if (c.check == "critmass") {
    const Soliton sol = soliton(p);
    return finish_check(c, critical_mass_sweep(c.a, p, sol), c.check);
  }
  if (c.check == "gap") {
    return finish_check(c, energy_gap_check(c.a, c.mu, p, c.eps), c.check);
  }
  fail(ErrorKind::InvalidArgument, "unknown --check " + c.check);
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig c;
  CLI::App app{"normalized solutions of the critical mixed-nonlinearity "
               "radial problem"};
  app.set_config("--config", "", "flat key=value file mirroring the flags");
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--N", c.N, "dimension (>= 3)");
    sub->add_option("--q", c.q, "subcritical exponent, 2 < q < 2N/(N-2)");
    sub->add_option("--a", c.a, "mass level");
    sub->add_option("--mu", c.mu, "coupling");
    sub->add_option("--r-max", c.r_max, "grid truncation radius override");
    sub->add_option("--n", c.n_nodes, "grid node count override");
    sub->add_option("--stretch", c.stretch, "grid clustering ratio override");
    sub->add_option("--output-dir", c.output_dir, "artifact directory");
    sub->add_option("--seed", c.seed, "seed for randomized families");
  };

  add_common(app.add_subcommand("constants", "named constants as JSON"));
  add_common(app.add_subcommand("soliton", "reference ground profile"));
  auto* bub = app.add_subcommand("bubble", "explicit extremal profile");
  add_common(bub);
  bub->add_option("--eps", c.eps, "concentration scale");
  auto* prj = app.add_subcommand("project", "fibering projection of a profile");
  add_common(prj);
  prj->add_option("--profile", c.profile_csv, "input profile CSV");
  auto* slv = app.add_subcommand("solve", "normalized solution at (a, mu)");
  add_common(slv);
  slv->add_option("--branch", c.branch, "ground|mp|all");
  auto* swp = app.add_subcommand("sweep", "parameter sweeps and verdicts");
  add_common(swp);
  swp->add_option("--check", c.check,
                  "lemma21|prop21|bubble|431|thm13|thm13crit|testfn|critmass|gap");
  swp->add_option("--mu-min", c.mu_min, "sweep lower end");
  swp->add_option("--mu-max", c.mu_max, "sweep upper end");
  swp->add_option("--points", c.points, "sweep points");
  swp->add_option("--eps", c.eps, "test-function scale (gap)");
  swp->add_option("--eps-min", c.eps_min, "testfn lower end");
  swp->add_option("--eps-max", c.eps_max, "testfn upper end");
  auto* tfn = app.add_subcommand("testfn", "cutoff-bubble norm orders");
  add_common(tfn);
  tfn->add_option("--eps-min", c.eps_min, "lower end");
  tfn->add_option("--eps-max", c.eps_max, "upper end");
  tfn->add_option("--points", c.points, "grid points");
  auto* cms = app.add_subcommand("critical-mass", "threshold behavior");
  add_common(cms);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    fail(ErrorKind::InvalidArgument, e.what());
  }
  c.mode = app.get_subcommands().front()->get_name();
  (void)c.params();  // validate (N, q, a, mu) eagerly
  return c;
}

int run(const RunConfig& c) {
  if (c.mode == "constants") return run_constants(c);
  if (c.mode == "soliton") return run_soliton(c);
  if (c.mode == "bubble") return run_bubble(c);
  if (c.mode == "project") return run_project(c);
  if (c.mode == "solve") return run_solve(c);
  if (c.mode == "sweep") return run_sweep(c);
  if (c.mode == "testfn") {
    RunConfig cc = c;
    cc.check = "testfn";
    return run_sweep(cc);
  }
  if (c.mode == "critical-mass") {
    RunConfig cc = c;
    cc.check = "critmass";
    return run_sweep(cc);
  }
  fail(ErrorKind::InvalidArgument, "unknown mode " + c.mode);
}

int main(int argc, char** argv) {
  try {
    const RunConfig c =
        parse_config(std::vector<std::string>(argv + 1, argv + argc));
    return run(c);
  } catch (const Error& e) {
    const Json j = error_json(e);
    std::cerr << j.dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "unexpected"}, {"message", e.what()}}.dump(2)
              << "\n";
    return 2;
  }
}

}  // namespace nls::cli
