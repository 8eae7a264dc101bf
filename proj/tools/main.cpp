#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgvem/experiments.hpp"
#include "sgvem/mesh.hpp"

namespace {

using namespace sgvem;

int report(const CheckReport& rep) {
  for (const std::string& msg : rep.messages) std::cout << msg << '\n';
  std::cout << (rep.passed ? "all checks passed" : "checks FAILED") << '\n';
  return rep.passed ? 0 : 1;
}

void print_soliton_summary(const SolitonResult& result) {
  std::printf("mesh: %d cells, %d dofs, h = %.4f\n", result.mesh.n_cells(),
              result.mesh.n_vertices(), result.mesh.mesh_size);
  std::printf("newton: total %ld, max per step %d\n", result.newton_total,
              result.newton_max_step);
  std::printf("max |u| at end: %.6f\n", result.max_abs_final);
  if (result.seconds > 0.0) std::printf("seconds: %.3f\n", result.seconds);
}

int dispatch(const ExperimentConfig& cfg, bool check_windows) {
  if (cfg.test_id == "test1") {
    const auto records = run_test1(cfg);
    std::cout << csv_string(records);
    return check_windows ? report(check_test1(records)) : 0;
  }
  if (cfg.test_id == "test2") {
    const auto result = run_test2(cfg);
    std::cout << comparison_csv_string(result);
    return check_windows ? report(check_test2(result)) : 0;
  }
  if (cfg.test_id == "test3") {
    const auto records = run_test3(cfg);
    std::cout << csv_string(records);
    return check_windows ? report(check_test3(records)) : 0;
  }
  if (cfg.test_id == "solitons") {
    const auto result = run_solitons(cfg);
    print_soliton_summary(result);
    return check_windows ? report(check_solitons(result)) : 0;
  }
  throw std::invalid_argument("unknown test id '" + cfg.test_id + "'");
}

Rect parse_domain(const std::vector<double>& bounds) {
  if (bounds.empty()) return Rect{};
  if (bounds.size() != 4)
    throw CLI::ValidationError("--domain needs xmin,xmax,ymin,ymax");
  return Rect{bounds[0], bounds[1], bounds[2], bounds[3]};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polygonal-mesh solver for the damped sine-Gordon equation"};
  app.require_subcommand(1);

  // solve: run one experiment described by a key = value config file.
  std::string config_path;
  bool solve_check = false;
  CLI::App* solve = app.add_subcommand("solve", "Run an experiment from a config file");
  solve->add_option("--config", config_path, "Flat key = value config file")
      ->required();
  solve->add_flag("--check", solve_check, "Evaluate acceptance windows; nonzero exit on failure");

  // sweep: convergence study for one of the published tests.
  int sweep_test = 1;
  std::string sweep_family = "voronoi";
  std::vector<int> sweep_levels;
  double sweep_dt = 0.0;
  std::vector<double> sweep_dt_levels;
  double sweep_mesh_size = 0.0;
  double sweep_t_end = 0.0;
  double sweep_theta = -1.0;
  double sweep_gamma = -1.0;
  std::string sweep_treatment;
  int sweep_lloyd = -1;
  long sweep_seed = -1;
  bool sweep_start2_on = false;
  bool sweep_start2_off = false;
  bool sweep_no_timing = false;
  bool sweep_check = false;
  std::string sweep_out, sweep_comparison_out;
  CLI::App* sweep = app.add_subcommand("sweep", "Convergence sweep for test 1, 2 or 3");
  sweep->add_option("--test", sweep_test, "Which published test to run")
      ->required()
      ->check(CLI::IsMember({1, 2, 3}));
  sweep->add_option("--family", sweep_family, "Mesh family (test 1: voronoi or triangles)");
  sweep->add_option("--levels", sweep_levels,
                    "Level sizes (test 1: target dofs or grid n; test 2: cells)")
      ->delimiter(',');
  sweep->add_option("--dt", sweep_dt, "Time step (tests 1 and 2)");
  sweep->add_option("--dt-levels", sweep_dt_levels, "Time-step sweep (test 3)")
      ->delimiter(',');
  sweep->add_option("--mesh-size", sweep_mesh_size, "Target mesh size (test 3)");
  sweep->add_option("--t-end", sweep_t_end, "Final time");
  sweep->add_option("--theta", sweep_theta, "Scheme weight");
  sweep->add_option("--gamma", sweep_gamma, "Damping coefficient");
  sweep->add_option("--treatment", sweep_treatment, "product or quadrature")
      ->check(CLI::IsMember({"product", "quadrature"}));
  sweep->add_option("--lloyd", sweep_lloyd, "Lloyd smoothing iterations");
  sweep->add_option("--seed", sweep_seed, "Mesh generator seed");
  CLI::Option* start2_on = sweep->add_flag(
      "--second-order-start", sweep_start2_on,
      "Add the initial-acceleration term to the first time level");
  sweep->add_flag("--first-order-start", sweep_start2_off,
                  "Plain u0 + dt*v0 first time level")
      ->excludes(start2_on);
  sweep->add_flag("--no-timing", sweep_no_timing, "Zero the seconds column (byte-stable output)");
  sweep->add_option("--out", sweep_out, "Rate table CSV path");
  sweep->add_option("--comparison-out", sweep_comparison_out,
                    "Treatment comparison CSV path (test 2)");
  sweep->add_flag("--check", sweep_check, "Evaluate acceptance windows; nonzero exit on failure");

  // solitons: the ring-collision simulation.
  double sol_mesh_size = 0.0;
  double sol_dt = 0.0;
  double sol_t_end = 0.0;
  double sol_gamma = -1.0;
  int sol_lloyd = -1;
  long sol_seed = -1;
  bool sol_no_timing = false;
  bool sol_check = false;
  std::string sol_out_dir;
  CLI::App* solitons = app.add_subcommand("solitons", "Ring-soliton collision run");
  solitons->add_option("--mesh-size", sol_mesh_size, "Target mesh size");
  solitons->add_option("--dt", sol_dt, "Time step");
  solitons->add_option("--t-end", sol_t_end, "Final time");
  solitons->add_option("--gamma", sol_gamma, "Damping coefficient");
  solitons->add_option("--lloyd", sol_lloyd, "Lloyd smoothing iterations");
  solitons->add_option("--seed", sol_seed, "Mesh generator seed");
  solitons->add_flag("--no-timing", sol_no_timing, "Suppress the seconds summary line");
  solitons->add_option("--out-dir", sol_out_dir, "Directory for field snapshots");
  solitons->add_flag("--check", sol_check, "Evaluate acceptance windows; nonzero exit on failure");

  // mesh gen: write a mesh file.
  CLI::App* mesh_cmd = app.add_subcommand("mesh", "Mesh utilities");
  mesh_cmd->require_subcommand(1);
  std::string gen_family;
  int gen_n = 0, gen_ny = 0, gen_lloyd = 3;
  double gen_distortion = 0.25;
  long gen_seed = 7;
  std::vector<double> gen_domain;
  std::string gen_out;
  CLI::App* gen = mesh_cmd->add_subcommand("gen", "Generate a polygonal mesh file");
  gen->add_option("--family", gen_family, "voronoi, distorted, nonconvex or triangles")
      ->required()
      ->check(CLI::IsMember({"voronoi", "distorted", "nonconvex", "triangles"}));
  gen->add_option("--n", gen_n, "Cell count (voronoi) or grid size")->required();
  gen->add_option("--ny", gen_ny, "Grid rows (defaults to --n)");
  gen->add_option("--distortion", gen_distortion, "Node jitter in [0, 0.5) (distorted)");
  gen->add_option("--lloyd", gen_lloyd, "Lloyd smoothing iterations (voronoi)");
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--domain", gen_domain, "xmin,xmax,ymin,ymax (default unit square)")
      ->delimiter(',');
  gen->add_option("--out", gen_out, "Output mesh file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const ExperimentConfig cfg =
          experiment_from_config(Config::parse_file(config_path));
      return dispatch(cfg, solve_check);
    }

    if (*sweep) {
      const std::string test_id = "test" + std::to_string(sweep_test);
      ExperimentConfig cfg = default_experiment(test_id, sweep_family);
      if (!sweep_levels.empty()) cfg.mesh_levels = sweep_levels;
      if (sweep_dt > 0.0) cfg.dt_levels = {sweep_dt};
      if (!sweep_dt_levels.empty()) cfg.dt_levels = sweep_dt_levels;
      if (sweep_mesh_size > 0.0) cfg.target_mesh_size = sweep_mesh_size;
      if (sweep_t_end > 0.0) cfg.t_end = sweep_t_end;
      if (sweep_theta >= 0.0) cfg.theta = sweep_theta;
      if (sweep_gamma >= 0.0) cfg.gamma = sweep_gamma;
      if (!sweep_treatment.empty())
        cfg.treatment = sweep_treatment == "product"
                            ? NonlinearTreatment::product
                            : NonlinearTreatment::quadrature;
      if (sweep_lloyd >= 0) cfg.lloyd_iterations = sweep_lloyd;
      if (sweep_seed >= 0) cfg.seed = static_cast<unsigned long>(sweep_seed);
      if (sweep_start2_on) cfg.second_order_start = true;
      if (sweep_start2_off) cfg.second_order_start = false;
      cfg.timing = !sweep_no_timing;
      cfg.csv_path = sweep_out;
      cfg.comparison_csv_path = sweep_comparison_out;
      return dispatch(cfg, sweep_check);
    }

    if (*solitons) {
      ExperimentConfig cfg = default_experiment("solitons");
      if (sol_mesh_size > 0.0) cfg.target_mesh_size = sol_mesh_size;
      if (sol_dt > 0.0) cfg.dt_levels = {sol_dt};
      if (sol_t_end > 0.0) cfg.t_end = sol_t_end;
      if (sol_gamma >= 0.0) cfg.gamma = sol_gamma;
      if (sol_lloyd >= 0) cfg.lloyd_iterations = sol_lloyd;
      if (sol_seed >= 0) cfg.seed = static_cast<unsigned long>(sol_seed);
      cfg.timing = !sol_no_timing;
      cfg.field_dir = sol_out_dir;
      return dispatch(cfg, sol_check);
    }

    if (*gen) {
      const Rect domain = parse_domain(gen_domain);
      const int ny = gen_ny > 0 ? gen_ny : gen_n;
      PolygonalMesh mesh;
      if (gen_family == "voronoi")
        mesh = generate_voronoi(domain, gen_n, gen_lloyd,
                                static_cast<std::uint64_t>(gen_seed));
      else if (gen_family == "distorted")
        mesh = generate_distorted_quads(gen_n, ny, gen_distortion,
                                        static_cast<std::uint64_t>(gen_seed),
                                        domain);
      else if (gen_family == "nonconvex")
        mesh = generate_nonconvex(gen_n, ny, domain);
      else
        mesh = generate_triangles(gen_n, ny, domain);
      write_mesh(mesh, gen_out);
      std::printf("%s: %d vertices, %d cells, h = %.6g\n", gen_out.c_str(),
                  mesh.n_vertices(), mesh.n_cells(), mesh.mesh_size);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
