// hcone: solve and verify prescribed mean curvature disks inside a cone.
#include <Eigen/Core>
#include <iostream>

#include "CLI11.hpp"
#include "hcone/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Prescribed mean curvature disks spanning curves inside a cone"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string surface_path;
  int threads = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "existing output directory (overrides output.dir)");
    sub->add_option("--threads", threads, "worker threads; 1 gives bit-reproducible output")
        ->check(CLI::PositiveNumber);
  };
  CLI::App* solve = app.add_subcommand("solve", "solve and write surface.obj, surface.json, solve.json");
  CLI::App* verify = app.add_subcommand("verify", "verify a surface and write verify.json, radial_graph.csv");
  CLI::App* domain = app.add_subcommand("check-domain", "beta-convexity and orientation report");
  CLI::App* profile = app.add_subcommand("profile-cone", "smoothed cone profiles and margins");
  for (CLI::App* sub : {solve, verify, domain, profile}) add_common(sub);
  verify->add_option("--surface", surface_path, "surface.json from a previous solve; solves when omitted");

  CLI11_PARSE(app, argc, argv);
  Eigen::setNbThreads(threads);

  try {
    hcone::RunConfig config = hcone::load_config(config_path);
    if (!out_dir.empty()) config.output.dir = out_dir;

    hcone::RunResult result;
    if (*solve) result = hcone::run_solve(config);
    else if (*verify) {
      std::optional<std::filesystem::path> surface;
      if (!surface_path.empty()) surface = surface_path;
      result = hcone::run_verify(config, surface);
    } else if (*domain) result = hcone::run_check_domain(config);
    else result = hcone::run_profile_cone(config);

    for (const auto& path : result.artifacts) std::cout << "wrote " << path.string() << '\n';
    if (result.report.contains("pass")) {
      std::cout << (result.report["pass"].get<bool>() ? "PASS" : "FAIL") << '\n';
    }
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hcone::exit_code_for(e);
  }
}
