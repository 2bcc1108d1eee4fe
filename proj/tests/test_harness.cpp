#include <catch2/catch_amalgamated.hpp>

#include "cbo/cbo.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cbo;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

CampaignTrace synthetic_trace(const std::vector<double>& incumbents) {
    CampaignTrace t;
    for (std::size_t i = 0; i < incumbents.size(); ++i) {
        TraceRecord rec;
        rec.iteration = static_cast<int>(i) + 1;
        rec.params = {static_cast<double>(i), static_cast<double>(i)};
        rec.incumbent = incumbents[i];
        t.records.push_back(rec);
    }
    return t;
}

std::string slurp(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& stem) {
    const fs::path dir = fs::temp_directory_path() / stem;
    fs::remove_all(dir);
    return dir;
}

} // namespace

TEST_CASE("regret is the absolute distance between incumbent and optimum") {
    const CampaignTrace t = synthetic_trace({5.0, 3.0, 3.0, 1.0});
    const std::vector<double> r = regret(t, 1.0);
    REQUIRE(r == std::vector<double>{4.0, 2.0, 2.0, 0.0});
    // also defined when the incumbent overshoots a signed target
    const std::vector<double> r2 = regret(t, 4.0);
    REQUIRE(r2 == std::vector<double>{1.0, 1.0, 1.0, 3.0});
}

TEST_CASE("evals_to_optimum returns the first hit, 1-based") {
    CampaignTrace t = synthetic_trace({3.0, 2.0, 1.0, 1.0});
    // params are (0,0), (1,1), (2,2), (3,3)
    std::vector<ParamVector> optima = {{9.0, 9.0}, {2.0, 2.0}};
    auto hit = evals_to_optimum(t, optima);
    REQUIRE(hit.has_value());
    REQUIRE(*hit == 3);

    REQUIRE(evals_to_optimum(t, ParamVector{1.0, 1.0}) == 2);
    REQUIRE_FALSE(evals_to_optimum(t, ParamVector{7.0, 7.0}).has_value());

    // first match wins even if a later record also matches
    t.records[3].params = {2.0, 2.0};
    REQUIRE(evals_to_optimum(t, optima) == 3);
}

TEST_CASE("parse_goal accepts both spellings and rejects junk") {
    REQUIRE(parse_goal("min", "/g") == Goal::Minimize);
    REQUIRE(parse_goal("minimize", "/g") == Goal::Minimize);
    REQUIRE(parse_goal("max", "/g") == Goal::Maximize);
    REQUIRE(parse_goal("maximize", "/g") == Goal::Maximize);
    try {
        parse_goal("upwards", "/objectives/0/goal");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.path == "/objectives/0/goal");
    }
}

TEST_CASE("parse_run_config fills defaults and reads every field") {
    const json j = {
        {"surface", "branin"},
        {"strategy", json::array({"gryffin-adam", "random"})},
        {"budget", 25},
        {"repeats", 4},
        {"seed", 99},
        {"lambda_schedule", json::array({0.5, -0.5, 0.0})},
        {"jobs", 2},
    };
    const RunConfig cfg = parse_run_config(j);
    REQUIRE(cfg.surface == "branin");
    REQUIRE(cfg.strategies ==
            std::vector<Strategy>{Strategy::GryffinAdam, Strategy::Random});
    REQUIRE(cfg.budget == 25);
    REQUIRE(cfg.repeats == 4);
    REQUIRE(cfg.seed == 99);
    REQUIRE(cfg.lambda_schedule == std::vector<double>{0.5, -0.5, 0.0});
    REQUIRE(cfg.jobs == 2);
    REQUIRE(cfg.objectives.empty());

    const RunConfig minimal =
        parse_run_config({{"surface", "sphere"}, {"strategy", "random"}});
    REQUIRE(minimal.strategies == std::vector<Strategy>{Strategy::Random});
    REQUIRE(minimal.budget == 100);
    REQUIRE(minimal.repeats == 1);
    REQUIRE(minimal.seed == 0);
    REQUIRE(minimal.lambda_schedule == std::vector<double>{1.0, -1.0});
    REQUIRE(minimal.jobs == 0);
}

TEST_CASE("parse_run_config reads objective specs with thresholds") {
    const json j = {
        {"surface", "flow_reactor"},
        {"strategy", "gryffin-genetic"},
        {"objectives",
         json::array({
             {{"name", "yield"}, {"goal", "maximize"}, {"threshold", 0.9}},
             {{"name", "cost"}, {"goal", "min"}},
         })},
    };
    const RunConfig cfg = parse_run_config(j);
    REQUIRE(cfg.objectives.size() == 2);
    REQUIRE(cfg.objectives[0].name == "yield");
    REQUIRE(cfg.objectives[0].goal == Goal::Maximize);
    REQUIRE(cfg.objectives[0].threshold == Approx(0.9));
    REQUIRE(cfg.objectives[1].goal == Goal::Minimize);
    REQUIRE_FALSE(cfg.objectives[1].threshold.has_value());
}

TEST_CASE("parse_run_config reports the offending JSON pointer") {
    auto path_of = [](const json& j) -> std::string {
        try {
            parse_run_config(j);
        } catch (const ConfigError& e) {
            return e.path;
        }
        return "(no error)";
    };

    REQUIRE(path_of(json::array()) == "");
    REQUIRE(path_of({{"strategy", "random"}}) == "/surface");
    REQUIRE(path_of({{"surface", 7}, {"strategy", "random"}}) == "/surface");
    REQUIRE(path_of({{"surface", "sphere"}}) == "/strategy");
    REQUIRE(path_of({{"surface", "sphere"}, {"strategy", "simplex"}}) == "/strategy");
    REQUIRE(path_of({{"surface", "sphere"}, {"strategy", json::array()}}) == "/strategy");
    REQUIRE(path_of({{"surface", "sphere"}, {"strategy", "random"}, {"budget", 0}}) ==
            "/budget");
    REQUIRE(path_of({{"surface", "sphere"}, {"strategy", "random"}, {"budget", 2.5}}) ==
            "/budget");
    REQUIRE(path_of({{"surface", "sphere"}, {"strategy", "random"}, {"repeats", -1}}) ==
            "/repeats");
    REQUIRE(path_of({{"surface", "sphere"}, {"strategy", "random"}, {"seed", "abc"}}) ==
            "/seed");
    REQUIRE(path_of({{"surface", "sphere"},
                     {"strategy", "random"},
                     {"lambda_schedule", json::array()}}) == "/lambda_schedule");
    REQUIRE(path_of({{"surface", "sphere"},
                     {"strategy", "random"},
                     {"lambda_schedule", json::array({1.0, "x"})}}) ==
            "/lambda_schedule/1");
    REQUIRE(path_of({{"surface", "sphere"},
                     {"strategy", "random"},
                     {"objectives", json::array({json::object()})}}) == "/objectives/0");
    REQUIRE(path_of({{"surface", "sphere"},
                     {"strategy", "random"},
                     {"objectives",
                      json::array({{{"name", "y"}, {"goal", "sideways"}}})}}) ==
            "/objectives/0/goal");
    REQUIRE(path_of({{"surface", "sphere"},
                     {"strategy", "random"},
                     {"objectives",
                      json::array({{{"name", "y"}, {"goal", "min"}, {"threshold", "z"}}})}}) ==
            "/objectives/0/threshold");
    // non-last objective without threshold fails whole-list validation
    REQUIRE(path_of({{"surface", "sphere"},
                     {"strategy", "random"},
                     {"objectives",
                      json::array({{{"name", "a"}, {"goal", "min"}},
                                   {{"name", "b"}, {"goal", "min"}}})}}) == "/objectives");
    REQUIRE(path_of({{"surface", "sphere"}, {"strategy", "random"}, {"jobs", -3}}) ==
            "/jobs");
}

TEST_CASE("run_config_to_json round-trips through parse_run_config") {
    RunConfig cfg;
    cfg.surface = "flow_reactor";
    cfg.strategies = {Strategy::GryffinGenetic, Strategy::Genetic};
    cfg.budget = 40;
    cfg.repeats = 3;
    cfg.seed = 1234;
    cfg.lambda_schedule = {1.0, 0.0, -1.0};
    cfg.objectives = {{"yield", Goal::Maximize, 0.9}, {"cost", Goal::Minimize, {}}};

    const json j = run_config_to_json(cfg);
    REQUIRE(j["strategy"].is_array());
    const RunConfig back = parse_run_config(j);
    REQUIRE(back.surface == cfg.surface);
    REQUIRE(back.strategies == cfg.strategies);
    REQUIRE(back.budget == cfg.budget);
    REQUIRE(back.repeats == cfg.repeats);
    REQUIRE(back.seed == cfg.seed);
    REQUIRE(back.lambda_schedule == cfg.lambda_schedule);
    REQUIRE(back.objectives.size() == 2);
    REQUIRE(back.objectives[0].threshold == Approx(0.9));

    // a single strategy serializes as a plain string
    cfg.strategies = {Strategy::Random};
    REQUIRE(run_config_to_json(cfg)["strategy"] == "random");
    REQUIRE(parse_run_config(run_config_to_json(cfg)).strategies ==
            std::vector<Strategy>{Strategy::Random});
}

TEST_CASE("fnv1a_hex matches the published 64-bit test vectors") {
    REQUIRE(fnv1a_hex("") == "cbf29ce484222325");
    REQUIRE(fnv1a_hex("a") == "af63dc4c8601ec8c");
    REQUIRE(fnv1a_hex("foobar") == "85944171f73967e8");
    REQUIRE(fnv1a_hex("config") == fnv1a_hex("config"));
    REQUIRE(fnv1a_hex("config") != fnv1a_hex("confih"));
}

TEST_CASE("space_from_json builds mixed spaces") {
    const json j = {
        {"parameters",
         json::array({
             {{"type", "continuous"}, {"name", "temp"}, {"low", 100.0}, {"high", 150.0}},
             {{"type", "discrete"}, {"options", json::array({0.0, 5.0, 10.0})}},
             {{"type", "categorical"},
              {"name", "solvent"},
              {"options", json::array({"thf", "dmf"})}},
         })},
        {"feasible_fraction", 0.25},
    };
    const ParameterSpace space = space_from_json(j);
    REQUIRE(space.size() == 3);
    REQUIRE(space[0].name == "temp");
    REQUIRE(space[0].kind == ParamKind::Continuous);
    REQUIRE(space[0].low == Approx(100.0));
    REQUIRE(space[0].high == Approx(150.0));
    REQUIRE(space[1].name == "x1"); // defaulted
    REQUIRE(space[1].kind == ParamKind::Discrete);
    REQUIRE(space[1].options == std::vector<double>{0.0, 5.0, 10.0});
    REQUIRE(space[2].kind == ParamKind::Categorical);
    REQUIRE(space[2].categories == std::vector<std::string>{"thf", "dmf"});
    REQUIRE(space.feasible_fraction == Approx(0.25));

    auto path_of = [](const json& bad) -> std::string {
        try {
            space_from_json(bad);
        } catch (const ConfigError& e) {
            return e.path;
        }
        return "(no error)";
    };
    REQUIRE(path_of(json::object()) == "/parameters");
    REQUIRE(path_of({{"parameters", json::array({json::object()})}}) == "/parameters/0");
    REQUIRE(path_of({{"parameters", json::array({{{"type", "fuzzy"}}})}}) ==
            "/parameters/0/type");
    REQUIRE(path_of({{"parameters",
                      json::array({{{"type", "continuous"}, {"low", 0.0}}})}}) ==
            "/parameters/0");
    REQUIRE(path_of({{"parameters", json::array({{{"type", "discrete"}}})}}) ==
            "/parameters/0/options");
    // low >= high is caught by the parameter factory and rewrapped
    REQUIRE(path_of({{"parameters",
                      json::array({{{"type", "continuous"},
                                    {"low", 2.0},
                                    {"high", 1.0}}})}}) == "/parameters/0");
}

TEST_CASE("csv_field quotes exactly when RFC 4180 requires it") {
    REQUIRE(csv_field("plain") == "plain");
    REQUIRE(csv_field("") == "");
    REQUIRE(csv_field("a,b") == "\"a,b\"");
    REQUIRE(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    REQUIRE(csv_field("line\nbreak") == "\"line\nbreak\"");
    REQUIRE(csv_field("cr\rhere") == "\"cr\rhere\"");
}

TEST_CASE("parse_csv handles quoting, embedded delimiters and CRLF") {
    const std::string text = "a,b,c\r\n1,\"x,y\",\"he said \"\"no\"\"\"\r\n2,,\"multi\nline\"\r\n";
    const auto rows = parse_csv(text);
    REQUIRE(rows.size() == 3);
    REQUIRE(rows[0] == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(rows[1] == std::vector<std::string>{"1", "x,y", "he said \"no\""});
    REQUIRE(rows[2] == std::vector<std::string>{"2", "", "multi\nline"});

    // fields written by csv_field survive a round trip
    const std::vector<std::string> nasty = {"plain", "a,b", "q\"q", "nl\nnl", ""};
    std::string line;
    for (std::size_t i = 0; i < nasty.size(); ++i)
        line += (i ? "," : "") + csv_field(nasty[i]);
    line += "\r\n";
    const auto back = parse_csv(line);
    REQUIRE(back.size() == 1);
    REQUIRE(back[0] == nasty);
}

TEST_CASE("summarize computes mean and a sample-sd confidence half-width") {
    const std::vector<double> vals = {1.0, 2.0, 3.0, 4.0};
    const SuiteStats s = summarize(vals);
    REQUIRE(s.values == vals);
    REQUIRE(s.mean == Approx(2.5));
    // sample sd = sqrt(5/3), half-width = 1.96 * sd / sqrt(4)
    REQUIRE(s.ci95_half == Approx(1.96 * std::sqrt(5.0 / 3.0) / 2.0));

    const SuiteStats single = summarize(std::vector<double>{7.0});
    REQUIRE(single.mean == Approx(7.0));
    REQUIRE(single.ci95_half == 0.0);

    const SuiteStats none = summarize(std::vector<double>{});
    REQUIRE(none.values.empty());
    REQUIRE(none.mean == 0.0);
    REQUIRE(none.ci95_half == 0.0);
}

TEST_CASE("run_campaign respects the budget and keeps every proposal feasible") {
    RunConfig cfg;
    cfg.surface = "branin";
    cfg.budget = 12;
    const CampaignTrace t = run_campaign(cfg, Strategy::Random, 5);
    REQUIRE_FALSE(t.failed);
    REQUIRE(t.surface == "branin");
    REQUIRE(t.strategy == "random");
    REQUIRE(t.seed == 5);
    REQUIRE(t.records.size() == 12); // continuous surface: no early stop
    REQUIRE(t.config_hash.size() == 16);

    const BenchmarkSurface surface = make_surface("branin");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.records.size(); ++i) {
        const TraceRecord& rec = t.records[i];
        REQUIRE(rec.iteration == static_cast<int>(i) + 1);
        REQUIRE(surface.is_feasible(rec.params));
        REQUIRE(rec.objectives.size() == 1);
        REQUIRE(rec.merit == Approx(rec.objectives[0]));
        best = std::min(best, rec.merit);
        REQUIRE(rec.incumbent == Approx(best));
        REQUIRE(rec.regret.has_value());
        REQUIRE(*rec.regret == Approx(std::abs(*surface.optimum_value - rec.incumbent)));
        if (i > 0) REQUIRE(rec.incumbent <= t.records[i - 1].incumbent + 1e-12);
    }
}

TEST_CASE("run_campaign stops a grid campaign once the optimum tile is proposed") {
    RunConfig cfg;
    cfg.surface = "sphere";
    cfg.budget = 441; // no-revisit random must cover all 361 feasible tiles
    const CampaignTrace t = run_campaign(cfg, Strategy::Random, 11);
    REQUIRE_FALSE(t.failed);
    REQUIRE(t.records.size() <= 361);
    const BenchmarkSurface surface = make_surface("sphere");
    REQUIRE(t.records.back().params == surface.optimum_locations[0]);
    const auto found = evals_to_optimum(t, surface.optimum_locations);
    REQUIRE(found.has_value());
    REQUIRE(*found == static_cast<int>(t.records.size()));
    REQUIRE(t.records.back().regret == Approx(0.0));
}

TEST_CASE("run_campaign records the objective tuple on multi-objective tasks") {
    RunConfig cfg;
    cfg.surface = "flow_reactor";
    cfg.budget = 8;
    const CampaignTrace t = run_campaign(cfg, Strategy::Random, 3);
    REQUIRE_FALSE(t.failed);
    REQUIRE(t.records.size() == 8);
    for (const TraceRecord& rec : t.records) {
        REQUIRE(rec.objectives.size() == 2);
        REQUIRE_FALSE(rec.regret.has_value()); // no scalar optimum on this task
        REQUIRE(rec.merit >= -3.0);
        REQUIRE(rec.merit <= 0.0);
        // merit and incumbent in one record share the same normalization
        // state, so the incumbent can never sit above the fresh merit
        REQUIRE(rec.incumbent <= rec.merit + 1e-12);
    }
}

TEST_CASE("run_campaign propagates unknown surface names") {
    RunConfig cfg;
    cfg.surface = "does_not_exist";
    REQUIRE_THROWS_AS(run_campaign(cfg, Strategy::Random, 0), NameError);
}

TEST_CASE("trace CSV serialization is byte-identical across reruns") {
    RunConfig cfg;
    cfg.surface = "camel";
    cfg.budget = 20;
    const BenchmarkSurface surface = make_surface("camel");
    const CampaignTrace a = run_campaign(cfg, Strategy::GryffinGenetic, 21);
    const CampaignTrace b = run_campaign(cfg, Strategy::GryffinGenetic, 21);
    const std::string csv_a = trace_to_csv(a, surface.space, surface.default_objectives);
    const std::string csv_b = trace_to_csv(b, surface.space, surface.default_objectives);
    REQUIRE(csv_a == csv_b);

    const CampaignTrace c = run_campaign(cfg, Strategy::GryffinGenetic, 22);
    REQUIRE(csv_a != trace_to_csv(c, surface.space, surface.default_objectives));
}

TEST_CASE("trace CSV layout: header, CRLF rows and parseable numbers") {
    RunConfig cfg;
    cfg.surface = "sphere";
    cfg.budget = 6;
    const BenchmarkSurface surface = make_surface("sphere");
    const CampaignTrace t = run_campaign(cfg, Strategy::Genetic, 17);
    const std::string csv = trace_to_csv(t, surface.space, surface.default_objectives);

    REQUIRE(csv.rfind("iteration,x0,x1,objective,merit,incumbent,regret\r\n", 0) == 0);
    // every line terminator is CRLF
    for (std::size_t i = 0; i < csv.size(); ++i) {
        if (csv[i] == '\n') {
            REQUIRE(i > 0);
            REQUIRE(csv[i - 1] == '\r');
        }
    }

    const auto rows = parse_csv(csv);
    REQUIRE(rows.size() == t.records.size() + 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const TraceRecord& rec = t.records[i - 1];
        REQUIRE(rows[i].size() == 7);
        REQUIRE(std::stoi(rows[i][0]) == rec.iteration);
        REQUIRE(std::stod(rows[i][1]) == Approx(rec.raw[0]));
        REQUIRE(std::stod(rows[i][2]) == Approx(rec.raw[1]));
        REQUIRE(std::stod(rows[i][3]) == Approx(rec.objectives[0]));
        REQUIRE(std::stod(rows[i][4]) == Approx(rec.merit));
        REQUIRE(std::stod(rows[i][5]) == Approx(rec.incumbent));
        REQUIRE(std::stod(rows[i][6]) == Approx(*rec.regret));
    }
}

TEST_CASE("categorical raw values are serialized as their labels") {
    ParameterSpace space({ParameterDef::continuous("x", 0.0, 1.0),
                          ParameterDef::categorical("solvent", {"thf", "dmf", "a,b"})});
    CampaignTrace t;
    TraceRecord rec;
    rec.iteration = 1;
    rec.params = {0.5, 2.0};
    rec.raw = {0.5, 2.0};
    rec.objectives = {1.25};
    rec.merit = 1.25;
    rec.incumbent = 1.25;
    t.records.push_back(rec);

    const std::string csv = trace_to_csv(t, space, {});
    const auto rows = parse_csv(csv);
    REQUIRE(rows[0] == std::vector<std::string>{"iteration", "x", "solvent", "objective",
                                                "merit", "incumbent", "regret"});
    REQUIRE(rows[1][2] == "a,b"); // label with a comma is quoted and read back intact
    REQUIRE(rows[1][6].empty()); // no optimum known, regret column stays empty
}

TEST_CASE("run_suite runs strategy-major, seed-minor and aggregates a summary") {
    RunConfig cfg;
    cfg.surface = "sphere";
    cfg.strategies = {Strategy::Random, Strategy::Genetic};
    cfg.budget = 30;
    cfg.repeats = 3;
    cfg.seed = 7;
    cfg.jobs = 1;
    const SuiteResult result = run_suite(cfg);

    REQUIRE(result.traces.size() == 6);
    const std::vector<std::pair<std::string, std::uint64_t>> expected = {
        {"random", 7}, {"random", 8},  {"random", 9},
        {"genetic", 7}, {"genetic", 8}, {"genetic", 9},
    };
    for (std::size_t i = 0; i < expected.size(); ++i) {
        REQUIRE(result.traces[i].strategy == expected[i].first);
        REQUIRE(result.traces[i].seed == expected[i].second);
    }

    const json& summary = result.summary;
    REQUIRE(summary["config_hash"].get<std::string>().size() == 16);
    REQUIRE(summary["config"]["surface"] == "sphere");
    REQUIRE(summary["strategies"].size() == 2);
    for (const std::string name : {"random", "genetic"}) {
        const json& agg = summary["strategies"][name];
        REQUIRE(agg["runs"].size() == 3);
        REQUIRE(agg["failed_runs"] == 0);
        for (const json& run : agg["runs"]) {
            REQUIRE(run.contains("final_incumbent"));
            REQUIRE(run.contains("final_regret"));
            REQUIRE(run.contains("evals_to_optimum")); // grid surface
            REQUIRE(run["trace_file"].get<std::string>().rfind("trace_" + name, 0) == 0);
        }
        REQUIRE(agg["final_regret"]["values"].size() == 3);
        REQUIRE(agg["evals_to_optimum"].contains("found_count"));
        const json& curve = agg["regret_curve"];
        const std::size_t len = curve["mean"].size();
        REQUIRE(len >= 1);
        REQUIRE(len <= 30);
        REQUIRE(curve["ci95_half"].size() == len);
        // the padded mean curve is monotone non-increasing for a minimization run
        for (std::size_t i = 1; i < len; ++i)
            REQUIRE(curve["mean"][i].get<double>() <=
                    curve["mean"][i - 1].get<double>() + 1e-12);
    }

    REQUIRE(result.timings["runs"].size() == 6);
    for (const json& run : result.timings["runs"]) {
        REQUIRE(run.contains("strategy"));
        REQUIRE(run.contains("seed"));
        REQUIRE(run["total_ms"].get<double>() >= 0.0);
        REQUIRE(run.contains("mean_iteration_ms"));
    }
}

TEST_CASE("run_suite is deterministic no matter the worker count") {
    RunConfig cfg;
    cfg.surface = "michalewicz";
    cfg.strategies = {Strategy::Random, Strategy::GryffinGenetic};
    cfg.budget = 15;
    cfg.repeats = 2;
    cfg.seed = 42;

    cfg.jobs = 1;
    const SuiteResult serial = run_suite(cfg);
    cfg.jobs = 4;
    const SuiteResult parallel = run_suite(cfg);

    REQUIRE(serial.summary == parallel.summary);
    const BenchmarkSurface surface = make_surface("michalewicz");
    REQUIRE(serial.traces.size() == parallel.traces.size());
    for (std::size_t i = 0; i < serial.traces.size(); ++i) {
        REQUIRE(trace_to_csv(serial.traces[i], surface.space, surface.default_objectives) ==
                trace_to_csv(parallel.traces[i], surface.space, surface.default_objectives));
    }
}

TEST_CASE("write_suite_outputs writes traces and summaries atomically") {
    RunConfig cfg;
    cfg.surface = "slope";
    cfg.strategies = {Strategy::Random};
    cfg.budget = 25;
    cfg.repeats = 2;
    cfg.seed = 100;
    cfg.jobs = 1;
    const SuiteResult result = run_suite(cfg);

    const fs::path dir = fresh_dir("cbo_harness_out");
    write_suite_outputs(result, dir.string());

    REQUIRE(fs::exists(dir / "summary.json"));
    REQUIRE(fs::exists(dir / "timings.json"));
    REQUIRE(fs::exists(dir / "trace_random_100.csv"));
    REQUIRE(fs::exists(dir / "trace_random_101.csv"));
    for (const auto& entry : fs::directory_iterator(dir))
        REQUIRE(entry.path().extension() != ".tmp");

    const json summary = json::parse(slurp(dir / "summary.json"));
    REQUIRE(summary == result.summary);
    const json timings = json::parse(slurp(dir / "timings.json"));
    REQUIRE(timings["runs"].size() == 2);

    // the summary is recomputable from the published CSVs alone
    const BenchmarkSurface surface = make_surface("slope");
    for (const json& run : summary["strategies"]["random"]["runs"]) {
        const auto rows = parse_csv(slurp(dir / run["trace_file"].get<std::string>()));
        REQUIRE(rows.size() == run["records"].get<std::size_t>() + 1);
        const auto& last = rows.back();
        REQUIRE(std::stod(last[last.size() - 2]) ==
                Approx(run["final_incumbent"].get<double>()));
        REQUIRE(std::stod(last.back()) == Approx(run["final_regret"].get<double>()));
        // replay the proposals against the surface: merit column matches
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const ParamVector raw = {std::stod(rows[i][1]), std::stod(rows[i][2])};
            REQUIRE(std::stod(rows[i][3]) ==
                    Approx(surface.evaluate_scalar(surface.space.normalize(raw))));
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("rewriting the same suite leaves byte-identical trace files") {
    RunConfig cfg;
    cfg.surface = "dejong";
    cfg.strategies = {Strategy::GryffinAdam};
    cfg.budget = 6;
    cfg.repeats = 1;
    cfg.seed = 2;
    cfg.jobs = 1;

    const fs::path dir_a = fresh_dir("cbo_harness_rerun_a");
    const fs::path dir_b = fresh_dir("cbo_harness_rerun_b");
    write_suite_outputs(run_suite(cfg), dir_a.string());
    write_suite_outputs(run_suite(cfg), dir_b.string());

    const std::string name = "trace_gryffin-adam_2.csv";
    REQUIRE(slurp(dir_a / name) == slurp(dir_b / name));
    const json sa = json::parse(slurp(dir_a / "summary.json"));
    const json sb = json::parse(slurp(dir_b / "summary.json"));
    REQUIRE(sa == sb);
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}
