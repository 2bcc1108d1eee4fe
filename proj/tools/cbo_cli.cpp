// Command line front end: seeded benchmark campaigns, surface listing and
// Monte Carlo feasible-volume estimation.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cbo/cbo.hpp"

namespace {

cbo::json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f.good()) throw cbo::ConfigError("", "cannot open config file: " + path);
    try {
        return cbo::json::parse(f);
    } catch (const cbo::json::parse_error& e) {
        throw cbo::ConfigError("", std::string("config is not valid JSON: ") + e.what());
    }
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& surface,
            const std::vector<std::string>& strategy, const std::vector<int>& budget,
            const std::vector<int>& repeats, const std::vector<std::uint64_t>& seed,
            const std::vector<double>& lambda, const std::string& out_dir, int jobs) {
    cbo::json j = config_path.empty() ? cbo::json::object() : load_json_file(config_path);

    // flags override the config file field by field
    if (!surface.empty()) j["surface"] = surface.back();
    if (!strategy.empty()) j["strategy"] = strategy;
    if (!budget.empty()) j["budget"] = budget.back();
    if (!repeats.empty()) j["repeats"] = repeats.back();
    if (!seed.empty()) j["seed"] = seed.back();
    if (!lambda.empty()) j["lambda_schedule"] = lambda;
    if (jobs >= 0) j["jobs"] = jobs;

    const cbo::RunConfig cfg = cbo::parse_run_config(j);
    const cbo::SuiteResult result = cbo::run_suite(cfg);

    if (!out_dir.empty()) {
        cbo::write_suite_outputs(result, out_dir);
        int written = 0;
        for (const cbo::CampaignTrace& t : result.traces)
            if (!t.failed) ++written;
        std::fprintf(stderr, "wrote %d trace file(s), summary.json and timings.json to %s\n",
                     written, out_dir.c_str());
    } else {
        std::cout << result.summary.dump(2) << "\n";
    }

    for (const auto& [name, agg] : result.summary["strategies"].items()) {
        std::ostringstream line;
        line << name << ": " << agg["runs"].size() << " run(s)";
        if (agg.contains("final_regret"))
            line << ", mean final regret " << agg["final_regret"]["mean"].get<double>()
                 << " +- " << agg["final_regret"]["ci95_half"].get<double>();
        if (agg.contains("evals_to_optimum")) {
            const cbo::json& e = agg["evals_to_optimum"];
            line << ", optimum found in " << e["found_count"].get<std::size_t>() << "/"
                 << agg["runs"].size() << " run(s)";
            if (e["found_count"].get<std::size_t>() > 0)
                line << " after " << e["mean"].get<double>() << " eval(s) on average";
        }
        if (agg["failed_runs"].get<int>() > 0)
            line << ", " << agg["failed_runs"].get<int>() << " failed";
        std::fprintf(stderr, "%s\n", line.str().c_str());
    }
    return 0;
}

int cmd_surfaces_list() {
    for (const std::string& name : cbo::surface_names()) std::printf("%s\n", name.c_str());
    return 0;
}

int cmd_volume(const std::string& surface, std::size_t probes, std::uint64_t seed) {
    const cbo::BenchmarkSurface s = cbo::make_surface(surface);
    cbo::Rng rng(seed);
    const double fraction = s.space.estimate_feasible_fraction(probes, rng);
    std::printf("%s\n", cbo::format_double(fraction).c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"constrained black-box optimization campaigns over benchmark surfaces"};
    app.require_subcommand(1);

    // run
    std::string config_path, out_dir;
    std::vector<std::string> surface, strategy;
    std::vector<int> budget, repeats;
    std::vector<std::uint64_t> seed;
    std::vector<double> lambda;
    int jobs = -1;
    CLI::App* run = app.add_subcommand("run", "run a campaign suite and emit traces");
    run->add_option("--config", config_path, "JSON config file; flags override its fields")
        ->check(CLI::ExistingFile);
    run->add_option("--surface", surface, "benchmark surface name (see: surfaces list)");
    run->add_option("--strategy", strategy,
                    "gryffin-adam|gryffin-genetic|random|genetic (repeat or comma-separate "
                    "for several)")
        ->delimiter(',');
    run->add_option("--budget", budget, "evaluations per run");
    run->add_option("--repeats", repeats, "independent repeats per strategy");
    run->add_option("--seed", seed, "base seed; repeat r uses seed+r");
    run->add_option("--lambda", lambda, "sampling parameter schedule, e.g. \"1,-1\"")
        ->delimiter(',');
    run->add_option("--out", out_dir, "output directory for trace CSVs and summary.json");
    run->add_option("--jobs", jobs, "worker threads (default: hardware concurrency)");

    // surfaces list
    CLI::App* surfaces = app.add_subcommand("surfaces", "inspect the surface registry");
    surfaces->require_subcommand(1);
    surfaces->add_subcommand("list", "print every registered surface name");

    // volume
    std::string vol_surface;
    std::size_t probes = 10000;
    std::uint64_t vol_seed = 0;
    CLI::App* volume =
        app.add_subcommand("volume", "Monte Carlo estimate of the feasible fraction");
    volume->add_option("--surface", vol_surface, "benchmark surface name")->required();
    volume->add_option("--probes", probes, "number of uniform probes");
    volume->add_option("--seed", vol_seed, "probe RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config_path, surface, strategy, budget, repeats, seed, lambda,
                           out_dir, jobs);
        if (surfaces->parsed()) return cmd_surfaces_list();
        if (volume->parsed()) return cmd_volume(vol_surface, probes, vol_seed);
    } catch (const cbo::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
