#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <thread>

#include "relsim/engine.hpp"
#include "relsim/netfile.hpp"
#include "relsim/results.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo reliability simulator for electric transmission systems"};

  std::string network_path;
  std::string profile_path;
  std::string out_dir = "out";
  int years = 100;
  std::uint64_t seed = 1;
  double loading_level = 1.0;
  double response_min = 15.0;
  bool no_operator = false;
  std::string size_metric = "energy";
  int workers = 0;

  app.add_option("--network", network_path, "network description file")->required();
  app.add_option("--profile", profile_path, "hourly demand-factor file")->required();
  app.add_option("--years", years, "number of simulated years")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "base RNG seed");
  app.add_option("--loading-level", loading_level, "demand/capacity scaling factor L")
      ->check(CLI::PositiveNumber);
  auto* resp_opt = app.add_option("--operator-response-min", response_min,
                                  "operator solution-finding delay in minutes (overrides the "
                                  "per-area values from the network file)")
                       ->check(CLI::NonNegativeNumber);
  app.add_flag("--no-operator", no_operator, "disable all corrective operator actions");
  app.add_option("--size-metric", size_metric, "blackout size metric for freq.csv")
      ->check(CLI::IsMember({"energy", "max-demand"}));
  app.add_option("--workers", workers, "worker threads (0 = hardware concurrency)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    relsim::NetworkModel model = relsim::parse_network(network_path);
    const relsim::NetworkModel scaled = relsim::apply_loading_level(model, loading_level);
    const relsim::DemandProfile profile = relsim::parse_profile(profile_path, model.n_areas());

    relsim::EngineConfig config;
    config.years = years;
    config.seed = seed;
    config.grid_operator.enabled = !no_operator;
    if (resp_opt->count() > 0) config.grid_operator.response_override_min = response_min;
    config.workers = workers > 0 ? workers
                                 : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    const auto results = relsim::run_monte_carlo(scaled, profile, config);

    relsim::RunHeader header;
    header.seed = seed;
    header.years = years;
    header.loading_level = loading_level;
    header.operator_enabled = config.grid_operator.enabled;
    header.response_override_min = config.grid_operator.response_override_min;
    header.metric =
        size_metric == "energy" ? relsim::SizeMetric::Energy : relsim::SizeMetric::MaxDemand;
    header.model_hash = scaled.content_hash();
    relsim::write_results_bundle(out_dir, header, scaled, results);

    long aborted = 0;
    for (const auto& r : results)
      if (r.aborted) ++aborted;
    std::fprintf(stderr, "completed %ld/%d years (%ld aborted); results in %s\n",
                 static_cast<long>(results.size()) - aborted, years, aborted, out_dir.c_str());
    return aborted == static_cast<long>(results.size()) ? 1 : 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
