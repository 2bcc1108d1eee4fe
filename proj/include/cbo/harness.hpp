#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "benchmarks.hpp"
#include "planner.hpp"

namespace cbo {

using json = nlohmann::json;

struct TraceRecord {
    int iteration = 0;              // 1-based
    ParamVector params;             // internal coordinates (not serialized)
    ParamVector raw;                // denormalized values (categorical: index)
    std::vector<double> objectives; // measured tuple
    double merit = 0.0;             // internal value of this observation
    double incumbent = 0.0;         // best internal value up to here
    std::optional<double> regret;   // |f* - incumbent| when f* is known
    double wall_ms = 0.0;           // recorded, never serialized into the CSV
};

struct CampaignTrace {
    std::string surface;
    std::string strategy;
    std::uint64_t seed = 0;
    int budget = 0;
    std::vector<double> lambda_schedule;
    std::string config_hash;
    std::vector<TraceRecord> records;
    bool failed = false;
    std::string error;
};

// Regret series from the running incumbent: r_k = |f* - f(x_k+)|.
inline std::vector<double> regret(const CampaignTrace& trace, double f_star) {
    std::vector<double> r;
    r.reserve(trace.records.size());
    for (const TraceRecord& rec : trace.records) r.push_back(std::abs(f_star - rec.incumbent));
    return r;
}

// First 1-based iteration whose proposal hit one of the optimum tiles.
inline std::optional<int> evals_to_optimum(const CampaignTrace& trace,
                                           std::span<const ParamVector> optima) {
    for (const TraceRecord& rec : trace.records)
        for (const ParamVector& opt : optima)
            if (rec.params == opt) return rec.iteration;
    return std::nullopt;
}

inline std::optional<int> evals_to_optimum(const CampaignTrace& trace, const ParamVector& opt) {
    return evals_to_optimum(trace, std::span<const ParamVector>(&opt, 1));
}

struct RunConfig {
    std::string surface;
    std::vector<Strategy> strategies = {Strategy::GryffinAdam};
    int budget = 100;
    int repeats = 1;
    std::uint64_t seed = 0;
    std::vector<double> lambda_schedule = {1.0, -1.0};
    std::vector<ObjectiveSpec> objectives; // empty = surface default
    int jobs = 0;                          // 0 = hardware concurrency
    std::string out_dir;                   // empty = keep results in memory
};

// ---------------------------------------------------------------------------
// Config JSON
// ---------------------------------------------------------------------------

inline Goal parse_goal(const std::string& g, const std::string& path) {
    if (g == "min" || g == "minimize") return Goal::Minimize;
    if (g == "max" || g == "maximize") return Goal::Maximize;
    throw ConfigError(path, "goal must be min|max");
}

inline RunConfig parse_run_config(const json& j) {
    if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
    RunConfig cfg;

    if (!j.contains("surface") || !j["surface"].is_string())
        throw ConfigError("/surface", "required string");
    cfg.surface = j["surface"].get<std::string>();

    if (!j.contains("strategy")) throw ConfigError("/strategy", "required");
    const json& st = j["strategy"];
    try {
        if (st.is_string()) {
            cfg.strategies = {parse_strategy(st.get<std::string>())};
        } else if (st.is_array() && !st.empty()) {
            cfg.strategies.clear();
            for (const json& s : st) cfg.strategies.push_back(parse_strategy(s.get<std::string>()));
        } else {
            throw ConfigError("/strategy", "must be a strategy name or a list of them");
        }
    } catch (const NameError& e) {
        throw ConfigError("/strategy", e.what());
    }

    if (j.contains("budget")) {
        if (!j["budget"].is_number_integer() || j["budget"].get<int>() <= 0)
            throw ConfigError("/budget", "must be a positive integer");
        cfg.budget = j["budget"].get<int>();
    }
    if (j.contains("repeats")) {
        if (!j["repeats"].is_number_integer() || j["repeats"].get<int>() <= 0)
            throw ConfigError("/repeats", "must be a positive integer");
        cfg.repeats = j["repeats"].get<int>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer())
            throw ConfigError("/seed", "must be an integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("lambda_schedule")) {
        if (!j["lambda_schedule"].is_array() || j["lambda_schedule"].empty())
            throw ConfigError("/lambda_schedule", "must be a non-empty array of numbers");
        cfg.lambda_schedule.clear();
        for (std::size_t i = 0; i < j["lambda_schedule"].size(); ++i) {
            const json& v = j["lambda_schedule"][i];
            if (!v.is_number())
                throw ConfigError("/lambda_schedule/" + std::to_string(i), "must be a number");
            cfg.lambda_schedule.push_back(v.get<double>());
        }
    }
    if (j.contains("objectives")) {
        if (!j["objectives"].is_array())
            throw ConfigError("/objectives", "must be an array");
        for (std::size_t i = 0; i < j["objectives"].size(); ++i) {
            const json& o = j["objectives"][i];
            const std::string path = "/objectives/" + std::to_string(i);
            if (!o.is_object() || !o.contains("name") || !o.contains("goal"))
                throw ConfigError(path, "needs name and goal");
            ObjectiveSpec spec;
            spec.name = o["name"].get<std::string>();
            spec.goal = parse_goal(o["goal"].get<std::string>(), path + "/goal");
            if (o.contains("threshold")) {
                if (!o["threshold"].is_number())
                    throw ConfigError(path + "/threshold", "must be a number");
                spec.threshold = o["threshold"].get<double>();
            }
            cfg.objectives.push_back(std::move(spec));
        }
        try {
            validate_objective_specs(cfg.objectives);
        } catch (const SpecError& e) {
            throw ConfigError("/objectives", e.what());
        }
    }
    if (j.contains("jobs")) {
        if (!j["jobs"].is_number_integer() || j["jobs"].get<int>() < 0)
            throw ConfigError("/jobs", "must be a non-negative integer");
        cfg.jobs = j["jobs"].get<int>();
    }
    return cfg;
}

inline json run_config_to_json(const RunConfig& cfg) {
    json j;
    j["surface"] = cfg.surface;
    json strategies = json::array();
    for (Strategy s : cfg.strategies) strategies.push_back(strategy_name(s));
    j["strategy"] = strategies.size() == 1 ? strategies[0] : strategies;
    j["budget"] = cfg.budget;
    j["repeats"] = cfg.repeats;
    j["seed"] = cfg.seed;
    j["lambda_schedule"] = cfg.lambda_schedule;
    if (!cfg.objectives.empty()) {
        json objs = json::array();
        for (const ObjectiveSpec& o : cfg.objectives) {
            json jo;
            jo["name"] = o.name;
            jo["goal"] = o.goal == Goal::Maximize ? "max" : "min";
            if (o.threshold) jo["threshold"] = *o.threshold;
            objs.push_back(jo);
        }
        j["objectives"] = objs;
    }
    return j;
}

inline std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Campaign execution
// ---------------------------------------------------------------------------

// Documented JSON form of a parameter space, for library consumers that load
// spaces from files. Constraints stay in code: the CLI only runs the named
// built-in surfaces.
inline ParameterSpace space_from_json(const json& j) {
    if (!j.is_object() || !j.contains("parameters") || !j["parameters"].is_array())
        throw ConfigError("/parameters", "space needs a parameters array");
    std::vector<ParameterDef> defs;
    for (std::size_t i = 0; i < j["parameters"].size(); ++i) {
        const json& p = j["parameters"][i];
        const std::string path = "/parameters/" + std::to_string(i);
        if (!p.is_object() || !p.contains("type"))
            throw ConfigError(path, "needs a type");
        const std::string type = p["type"].get<std::string>();
        const std::string name =
            p.contains("name") ? p["name"].get<std::string>() : "x" + std::to_string(i);
        try {
            if (type == "continuous") {
                if (!p.contains("low") || !p.contains("high"))
                    throw ConfigError(path, "continuous parameter needs low and high");
                defs.push_back(ParameterDef::continuous(name, p["low"].get<double>(),
                                                        p["high"].get<double>()));
            } else if (type == "discrete") {
                if (!p.contains("options") || !p["options"].is_array())
                    throw ConfigError(path + "/options", "discrete parameter needs options");
                defs.push_back(ParameterDef::discrete(
                    name, p["options"].get<std::vector<double>>()));
            } else if (type == "categorical") {
                if (!p.contains("options") || !p["options"].is_array())
                    throw ConfigError(path + "/options", "categorical parameter needs options");
                defs.push_back(ParameterDef::categorical(
                    name, p["options"].get<std::vector<std::string>>()));
            } else {
                throw ConfigError(path + "/type", "must be continuous|discrete|categorical");
            }
        } catch (const SpecError& e) {
            throw ConfigError(path, e.what());
        }
    }
    ParameterSpace space(std::move(defs));
    if (j.contains("feasible_fraction")) {
        if (!j["feasible_fraction"].is_number())
            throw ConfigError("/feasible_fraction", "must be a number");
        space.feasible_fraction = j["feasible_fraction"].get<double>();
    }
    return space;
}

// One seeded campaign against a named surface. Grid surfaces stop early once
// an optimum tile is proposed (evaluation counts stay meaningful); continuous
// surfaces always use the full budget.
inline CampaignTrace run_campaign(const RunConfig& cfg, Strategy strategy,
                                  std::uint64_t seed) {
    const BenchmarkSurface surface = make_surface(cfg.surface);

    CampaignConfig cc;
    cc.strategy = strategy;
    cc.seed = seed;
    cc.lambda_schedule = cfg.lambda_schedule;
    cc.objectives = !cfg.objectives.empty() ? cfg.objectives : surface.default_objectives;

    CampaignTrace trace;
    trace.surface = cfg.surface;
    trace.strategy = strategy_name(strategy);
    trace.seed = seed;
    trace.budget = cfg.budget;
    trace.lambda_schedule = cfg.lambda_schedule;
    trace.config_hash = fnv1a_hex(run_config_to_json(cfg).dump());

    const bool single_objective = cc.objectives.empty();
    try {
        Campaign campaign(surface.space, cc);
        for (int it = 1; it <= cfg.budget; ++it) {
            const auto t0 = std::chrono::steady_clock::now();
            const Proposal p = campaign.ask();
            const std::vector<double> y = surface.evaluate(p.params);
            campaign.tell(p, y);
            const auto t1 = std::chrono::steady_clock::now();

            TraceRecord rec;
            rec.iteration = it;
            rec.params = p.params;
            rec.raw = p.raw;
            rec.objectives = y;
            rec.merit = campaign.history().back().internal;
            rec.incumbent = campaign.incumbent().internal;
            if (single_objective && surface.optimum_value)
                rec.regret = std::abs(*surface.optimum_value - rec.incumbent);
            rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            trace.records.push_back(std::move(rec));

            if (surface.grid && !surface.optimum_locations.empty()) {
                bool hit = false;
                for (const ParamVector& opt : surface.optimum_locations)
                    if (p.params == opt) {
                        hit = true;
                        break;
                    }
                if (hit) break;
            }
        }
    } catch (const FeasibilityError& e) {
        trace.failed = true;
        trace.error = e.what();
    }
    return trace;
}

// ---------------------------------------------------------------------------
// CSV serialization (RFC 4180: CRLF line endings, quoting only when needed)
// ---------------------------------------------------------------------------

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

inline std::string trace_csv_header(const ParameterSpace& space,
                                    std::span<const ObjectiveSpec> objectives) {
    std::string h = "iteration";
    for (std::size_t i = 0; i < space.size(); ++i) h += "," + csv_field(space[i].name);
    if (objectives.empty()) {
        h += ",objective";
    } else {
        for (const ObjectiveSpec& o : objectives) h += "," + csv_field(o.name);
    }
    h += ",merit,incumbent,regret\r\n";
    return h;
}

inline std::string trace_to_csv(const CampaignTrace& trace, const ParameterSpace& space,
                                std::span<const ObjectiveSpec> objectives) {
    std::string out = trace_csv_header(space, objectives);
    for (const TraceRecord& rec : trace.records) {
        out += std::to_string(rec.iteration);
        for (std::size_t d = 0; d < space.size(); ++d) {
            out += ",";
            if (space[d].kind == ParamKind::Categorical)
                out += csv_field(space[d].categories[static_cast<std::size_t>(rec.raw[d])]);
            else
                out += format_double(rec.raw[d]);
        }
        for (double y : rec.objectives) out += "," + format_double(y);
        out += "," + format_double(rec.merit);
        out += "," + format_double(rec.incumbent);
        out += ",";
        if (rec.regret) out += format_double(*rec.regret);
        out += "\r\n";
    }
    return out;
}

// Minimal RFC-4180 reader used for summary recomputation and tests.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (c == '\r') {
            // handled with the following newline
        } else if (c == '\n') {
            row.push_back(std::move(field));
            field.clear();
            rows.push_back(std::move(row));
            row.clear();
        } else {
            field += c;
        }
    }
    if (!field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Suite running and aggregation
// ---------------------------------------------------------------------------

struct SuiteStats {
    std::vector<double> values;
    double mean = 0.0;
    double ci95_half = 0.0; // 1.96 * sd / sqrt(n), sample sd
};

inline SuiteStats summarize(std::span<const double> values) {
    SuiteStats s;
    s.values.assign(values.begin(), values.end());
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
        s.ci95_half = 1.96 * sd / std::sqrt(static_cast<double>(values.size()));
    }
    return s;
}

struct SuiteResult {
    RunConfig config;
    std::vector<CampaignTrace> traces; // (strategy-major, seed-minor) order
    json summary;
    json timings;
};

namespace harness_detail {

inline json stats_json(const SuiteStats& s) {
    json j;
    j["values"] = s.values;
    j["mean"] = s.mean;
    j["ci95_half"] = s.ci95_half;
    return j;
}

} // namespace harness_detail

// Aggregates per-strategy metrics exactly the way the recomputation test
// does: runs in seed order, padded regret curves, sample-sd confidence bands.
inline json summarize_suite(const RunConfig& cfg,
                            const std::vector<CampaignTrace>& traces) {
    const BenchmarkSurface surface = make_surface(cfg.surface);
    json summary;
    summary["config"] = run_config_to_json(cfg);
    summary["config_hash"] = fnv1a_hex(run_config_to_json(cfg).dump());

    json strategies = json::object();
    for (Strategy strategy : cfg.strategies) {
        const std::string name = strategy_name(strategy);
        std::vector<const CampaignTrace*> runs;
        for (const CampaignTrace& t : traces)
            if (t.strategy == name) runs.push_back(&t);

        json agg;
        json run_list = json::array();
        std::vector<double> finals;
        std::vector<double> evals_found;
        std::size_t longest = 0;
        int failed = 0;
        for (const CampaignTrace* t : runs) {
            json rj;
            rj["seed"] = t->seed;
            rj["records"] = t->records.size();
            rj["failed"] = t->failed;
            if (t->failed) {
                rj["error"] = t->error;
                ++failed;
                run_list.push_back(rj);
                continue;
            }
            longest = std::max(longest, t->records.size());
            if (!t->records.empty()) {
                rj["final_incumbent"] = t->records.back().incumbent;
                if (t->records.back().regret) {
                    rj["final_regret"] = *t->records.back().regret;
                    finals.push_back(*t->records.back().regret);
                }
            }
            if (surface.grid && !surface.optimum_locations.empty()) {
                const auto evals = evals_to_optimum(*t, surface.optimum_locations);
                rj["evals_to_optimum"] = evals ? json(*evals) : json(nullptr);
                if (evals) evals_found.push_back(static_cast<double>(*evals));
            }
            rj["trace_file"] = "trace_" + name + "_" + std::to_string(t->seed) + ".csv";
            run_list.push_back(rj);
        }
        agg["runs"] = run_list;
        agg["failed_runs"] = failed;
        if (!finals.empty()) agg["final_regret"] = harness_detail::stats_json(summarize(finals));
        if (surface.grid && !surface.optimum_locations.empty()) {
            json ej = harness_detail::stats_json(summarize(evals_found));
            ej["found_count"] = evals_found.size();
            agg["evals_to_optimum"] = ej;
        }

        // Iteration-wise regret band; shorter (early-stopped) runs carry
        // their final regret forward.
        if (longest > 0 && !finals.empty()) {
            std::vector<double> mean_curve, ci_curve;
            for (std::size_t i = 0; i < longest; ++i) {
                std::vector<double> at;
                for (const CampaignTrace* t : runs) {
                    if (t->failed || t->records.empty()) continue;
                    const TraceRecord& rec =
                        t->records[std::min(i, t->records.size() - 1)];
                    if (rec.regret) at.push_back(*rec.regret);
                }
                const SuiteStats s = summarize(at);
                mean_curve.push_back(s.mean);
                ci_curve.push_back(s.ci95_half);
            }
            json curve;
            curve["mean"] = mean_curve;
            curve["ci95_half"] = ci_curve;
            agg["regret_curve"] = curve;
        }
        strategies[name] = agg;
    }
    summary["strategies"] = strategies;
    return summary;
}

inline SuiteResult run_suite(const RunConfig& cfg) {
    SuiteResult result;
    result.config = cfg;

    struct Job {
        Strategy strategy;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (Strategy s : cfg.strategies)
        for (int r = 0; r < cfg.repeats; ++r)
            jobs.push_back({s, cfg.seed + static_cast<std::uint64_t>(r)});

    result.traces.resize(jobs.size());
    unsigned n_workers = cfg.jobs > 0 ? static_cast<unsigned>(cfg.jobs)
                                      : std::max(1u, std::thread::hardware_concurrency());
    n_workers = std::min<unsigned>(n_workers, jobs.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                result.traces[i] = run_campaign(cfg, jobs[i].strategy, jobs[i].seed);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    result.summary = summarize_suite(cfg, result.traces);

    json truns = json::array();
    for (const CampaignTrace& t : result.traces) {
        double total = 0.0;
        for (const TraceRecord& r : t.records) total += r.wall_ms;
        json tj;
        tj["strategy"] = t.strategy;
        tj["seed"] = t.seed;
        tj["total_ms"] = total;
        tj["mean_iteration_ms"] = t.records.empty() ? 0.0 : total / t.records.size();
        truns.push_back(tj);
    }
    result.timings["runs"] = truns;
    return result;
}

// Writes trace CSVs, summary.json and timings.json under out_dir. Files are
// staged with a .tmp suffix and renamed so readers never see partial output.
inline void write_suite_outputs(const SuiteResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const BenchmarkSurface surface = make_surface(result.config.surface);
    const std::vector<ObjectiveSpec>& objectives = !result.config.objectives.empty()
                                                       ? result.config.objectives
                                                       : surface.default_objectives;

    auto write_atomic = [](const fs::path& path, const std::string& content) {
        const fs::path tmp = path.string() + ".tmp";
        {
            std::ofstream f(tmp, std::ios::binary);
            f.write(content.data(), static_cast<std::streamsize>(content.size()));
        }
        fs::rename(tmp, path);
    };

    for (const CampaignTrace& t : result.traces) {
        if (t.failed) continue;
        const fs::path path =
            fs::path(out_dir) / ("trace_" + t.strategy + "_" + std::to_string(t.seed) + ".csv");
        write_atomic(path, trace_to_csv(t, surface.space, objectives));
    }
    write_atomic(fs::path(out_dir) / "summary.json", result.summary.dump(2) + "\n");
    write_atomic(fs::path(out_dir) / "timings.json", result.timings.dump(2) + "\n");
}

} // namespace cbo
