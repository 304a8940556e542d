#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reserve/constants.hpp"
#include "reserve/harness.hpp"
#include "reserve/instance.hpp"
#include "reserve/lp.hpp"
#include "reserve/policies.hpp"
#include "reserve/sim.hpp"

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void cmd_constants(int d, double uj, double cj) {
  reserve::RlsConstants rls = reserve::solve_rls_constants();
  std::cout << "r_star=" << num(rls.r_star) << "\n";
  std::cout << "z_star=" << num(rls.z_star) << "\n";
  std::cout << "ls_ratio=" << num(reserve::ls_ratio()) << "\n";
  std::cout << "d,uj_s,ratio_L,ratio_S,ratio_all\n";
  for (int step = 0; step <= 10; ++step) {
    double ujs = uj * step / 10.0;
    reserve::MlsRatios r = reserve::mls_ratios(d, uj - ujs, ujs, uj, cj);
    std::cout << d << "," << reserve::format_csv_number(ujs) << ","
              << reserve::format_csv_number(r.ratio_L) << ","
              << reserve::format_csv_number(r.ratio_S) << ","
              << reserve::format_csv_number(r.ratio_all) << "\n";
  }
}

void cmd_solve_lp(const std::string& instance_path, const std::string& method,
                  const std::string& dump_path) {
  reserve::Instance inst = reserve::load_instance(instance_path);
  reserve::FractionalRouting routing;
  if (method == "greedy" || (method == "auto" && inst.scheduling))
    routing = reserve::solve_layered_greedy(inst);
  else
    routing = reserve::solve_routing_lp(inst);
  reserve::check_routing(inst, routing);
  std::cout << "objective=" << num(routing.objective) << "\n";
  std::cout << "n=" << routing.n << "\n";
  std::cout << "m=" << routing.m << "\n";
  if (!dump_path.empty()) {
    std::ofstream out(dump_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + dump_path);
    out << reserve::routing_to_json(routing) << "\n";
  }
}

struct GenArgs {
  std::string family;
  std::string out;
  double epsilon = 0.05;
  double lambda1 = 1000;
  int m = 500;
  int days = 50;
  int sessions = 4;
  double session_minutes = 60;
  int deadline = 20;
  double scale = 1.0;
  bool monday = false;
  std::vector<double> mix;
  std::uint64_t seed = 1;
};

void cmd_gen(const GenArgs& a) {
  reserve::Instance inst;
  if (a.family == "prop1") {
    inst = reserve::make_prop1_instance(a.epsilon, a.lambda1);
  } else if (a.family == "ls-tight") {
    inst = reserve::make_ls_tightness_instance(a.epsilon, a.m);
  } else if (a.family == "hospital") {
    reserve::HospitalParams p;
    p.days = a.days;
    p.sessions_per_day = a.sessions;
    p.session_minutes = a.session_minutes;
    p.deadline_days = a.deadline;
    p.scale = a.scale;
    p.monday_only_regular = a.monday;
    if (!a.mix.empty()) {
      if (a.mix.size() != 6)
        throw std::invalid_argument("--mix needs exactly six values");
      for (int k = 0; k < 6; ++k) p.category_mix[k] = a.mix[k];
    }
    inst = reserve::make_hospital_scenario(p);
  } else if (a.family == "random") {
    inst = reserve::make_random_setting(a.seed);
  } else {
    throw std::invalid_argument("unknown family: " + a.family);
  }
  reserve::save_instance(inst, a.out);
}

struct SimArgs {
  std::string instance_path;
  std::string policy;
  int replicates = 200;
  std::uint64_t seed = 1;
  std::string oracle = "lp_bound";
  long long oracle_paths = 100000;
  int mls_d = 0;
  int threads = 0;
};

void cmd_simulate(const SimArgs& a) {
  reserve::Instance inst = reserve::load_instance(a.instance_path);
  reserve::ExperimentSpec spec;
  spec.instance = &inst;
  spec.policies = {reserve::parse_policy_name(a.policy)};
  spec.replicates = a.replicates;
  spec.master_seed = a.seed;
  spec.oracle_paths = a.oracle_paths;
  spec.policy_options.mls_d = a.mls_d;
  spec.threads = a.threads;
  reserve::OfflineOracle oracle = reserve::parse_offline_oracle(a.oracle);
  switch (oracle) {
    case reserve::OfflineOracle::lp_bound:
      spec.denominator = reserve::Denominator::lp_bound;
      break;
    case reserve::OfflineOracle::prop1_exact:
      spec.denominator = reserve::Denominator::prop1_exact;
      break;
    case reserve::OfflineOracle::tightness_exact:
      spec.denominator = reserve::Denominator::tightness_exact;
      break;
  }
  reserve::RunReport report = reserve::run_experiment(spec);
  const reserve::PolicyReport& pr = report.policies.front();
  std::cout << "policy=" << reserve::policy_name_str(pr.policy) << "\n";
  std::cout << "replicates=" << a.replicates << "\n";
  std::cout << "denominator=" << num(report.denominator_value) << "\n";
  std::cout << "denominator_se=" << num(report.denominator_se) << "\n";
  std::cout << "mean_reward=" << num(pr.mean_reward) << "\n";
  std::cout << "stderr=" << num(pr.se) << "\n";
  std::cout << "ratio=" << num(pr.ratio) << "\n";
  std::cout << "ratio_se=" << num(pr.ratio_se) << "\n";
  std::cout << "mean_accepted=" << num(pr.mean_accepted) << "\n";
  std::cout << "mean_rejected=" << num(pr.mean_rejected) << "\n";
  if (pr.wait) {
    std::cout << "wait_mean=" << num(pr.wait->mean) << "\n";
    std::cout << "wait_p90=" << num(pr.wait->p90) << "\n";
    std::cout << "wait_max=" << num(pr.wait->max) << "\n";
    std::cout << "wait_count=" << pr.wait->count << "\n";
  }
  std::cout << "path_checksum=" << report.path_checksum << "\n";
}

struct BenchArgs {
  std::string grid;
  std::string out;
  std::uint64_t seed = 1;
  int replicates = 200;
  int settings = 100;
  int setting_replicates = 50;
  int threads = 0;
  bool full_scale = false;
};

void cmd_bench(const BenchArgs& a) {
  reserve::BenchOptions options;
  options.seed = a.seed;
  options.replicates = a.replicates;
  options.settings = a.settings;
  options.setting_replicates = a.setting_replicates;
  options.threads = a.threads;
  options.full_scale = a.full_scale;
  if (a.grid == "tables")
    reserve::bench_tables(a.out, options);
  else if (a.grid == "random-settings")
    reserve::bench_random_settings(a.out, options);
  else
    throw std::invalid_argument("unknown grid: " + a.grid);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online advance-reservation policies against an LP upper bound"};
  app.require_subcommand(1);

  auto* c_constants = app.add_subcommand("constants", "print solved analytic constants");
  int c_d = 2;
  double c_uj = 1.0, c_cj = 1.0;
  c_constants->add_option("--d", c_d, "threshold parameter for the ratio table");
  c_constants->add_option("--uj", c_uj, "total load for the ratio table");
  c_constants->add_option("--cj", c_cj, "capacity for the ratio table");

  auto* c_lp = app.add_subcommand("solve-lp", "solve the routing relaxation for an instance");
  std::string lp_instance, lp_dump;
  std::string lp_method = "auto";
  c_lp->add_option("--instance", lp_instance, "instance JSON file")->required();
  c_lp->add_option("--lp-dump", lp_dump, "write the fractional routing as JSON");
  c_lp->add_option("--method", lp_method, "auto, simplex, or greedy")
      ->check(CLI::IsMember({"auto", "simplex", "greedy"}));

  auto* c_gen = app.add_subcommand("gen", "generate an instance file");
  GenArgs gen;
  c_gen->add_option("--family", gen.family, "prop1, ls-tight, hospital, or random")->required();
  c_gen->add_option("--out", gen.out, "output JSON path")->required();
  c_gen->add_option("--epsilon", gen.epsilon, "prop1 / ls-tight epsilon");
  c_gen->add_option("--lambda1", gen.lambda1, "prop1 expected low-type arrivals");
  c_gen->add_option("--m", gen.m, "ls-tight resource count");
  c_gen->add_option("--days", gen.days, "hospital horizon in days");
  c_gen->add_option("--sessions", gen.sessions, "hospital sessions per day");
  c_gen->add_option("--session-minutes", gen.session_minutes, "hospital session length");
  c_gen->add_option("--deadline", gen.deadline, "hospital regular booking window in days");
  c_gen->add_option("--scale", gen.scale, "hospital capacity-to-demand scale");
  c_gen->add_flag("--monday", gen.monday, "regulars arrive on Mondays only");
  c_gen->add_option("--mix", gen.mix, "six category proportions")->expected(6);
  c_gen->add_option("--seed", gen.seed, "random-family seed");

  auto* c_sim = app.add_subcommand("simulate", "run one policy on an instance");
  SimArgs sim;
  c_sim->add_option("--instance", sim.instance_path, "instance JSON file")->required();
  c_sim->add_option("--policy", sim.policy, "ls, mls, rls, grd, rsrv, or pd")->required();
  c_sim->add_option("--replicates", sim.replicates, "number of sample paths");
  c_sim->add_option("--seed", sim.seed, "master seed");
  c_sim->add_option("--oracle", sim.oracle, "denominator: lp_bound, prop1_exact, tightness_exact");
  c_sim->add_option("--oracle-paths", sim.oracle_paths, "sample paths for offline oracles");
  c_sim->add_option("--mls-d", sim.mls_d, "threshold parameter override (0 = auto)");
  c_sim->add_option("--threads", sim.threads, "worker threads (0 = auto)");

  auto* c_bench = app.add_subcommand("bench", "run an experiment grid");
  BenchArgs bench;
  c_bench->add_option("--grid", bench.grid, "tables or random-settings")->required();
  c_bench->add_option("--out", bench.out, "output directory")->required();
  c_bench->add_option("--seed", bench.seed, "master seed");
  c_bench->add_option("--replicates", bench.replicates, "replicates per tables cell");
  c_bench->add_option("--settings", bench.settings, "number of random settings");
  c_bench->add_option("--setting-replicates", bench.setting_replicates,
                      "replicates per random setting");
  c_bench->add_option("--threads", bench.threads, "worker threads (0 = auto)");
  c_bench->add_flag("--full-scale", bench.full_scale, "full 200-day, 1000-replicate grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help() << std::flush;
    return 1;
  }

  try {
    if (c_constants->parsed()) cmd_constants(c_d, c_uj, c_cj);
    if (c_lp->parsed()) cmd_solve_lp(lp_instance, lp_method, lp_dump);
    if (c_gen->parsed()) cmd_gen(gen);
    if (c_sim->parsed()) cmd_simulate(sim);
    if (c_bench->parsed()) cmd_bench(bench);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
