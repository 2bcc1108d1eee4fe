#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "acqopt.hpp"
#include "domain.hpp"
#include "scalarize.hpp"
#include "surrogate.hpp"

namespace cbo {

enum class Strategy { GryffinAdam, GryffinGenetic, Random, Genetic };

inline Strategy parse_strategy(const std::string& name) {
    if (name == "gryffin-adam") return Strategy::GryffinAdam;
    if (name == "gryffin-genetic") return Strategy::GryffinGenetic;
    if (name == "random") return Strategy::Random;
    if (name == "genetic") return Strategy::Genetic;
    throw NameError("unknown strategy '" + name + "'");
}

inline std::string strategy_name(Strategy s) {
    switch (s) {
    case Strategy::GryffinAdam: return "gryffin-adam";
    case Strategy::GryffinGenetic: return "gryffin-genetic";
    case Strategy::Random: return "random";
    case Strategy::Genetic: return "genetic";
    }
    return "?";
}

struct CampaignConfig {
    Strategy strategy = Strategy::GryffinAdam;
    Goal goal = Goal::Minimize;               // single-objective direction
    std::vector<double> lambda_schedule = {1.0, -1.0};
    std::vector<ObjectiveSpec> objectives;    // non-empty => multi-objective
    std::uint64_t seed = 0;
    double self_avoid_tol = 0.01;             // inf-norm, internal coords
    std::size_t n_probe = 10000;              // feasible-fraction estimation
    std::size_t proposal_count = 0;           // 0 = dimension-scaled default
    std::size_t ga_population = 20;           // direct-GA baseline
    AdamHillConfig adam;
    GeneticConfig genetic;
    KernelSetConfig kernel;
};

struct Proposal {
    ParamVector params;        // internal coordinates, feasible
    ParamVector raw;           // denormalized view
    double acquisition_value;  // NaN for strategies that do not rank by alpha
    double lambda_used;
    Strategy strategy;
};

// Sequential ask-tell planner. One instance is single-writer (serialize
// ask/tell externally); distinct campaigns are fully independent.
class Campaign {
public:
    Campaign(ParameterSpace space, CampaignConfig cfg)
        : space_(std::move(space)), cfg_(std::move(cfg)), rng_(cfg_.seed) {
        if (space_.size() == 0) throw SpecError("campaign needs a non-empty space");
        if (cfg_.lambda_schedule.empty())
            throw SpecError("lambda schedule must not be empty");
        for (double l : cfg_.lambda_schedule)
            if (!std::isfinite(l)) throw SpecError("lambda values must be finite");
        if (!cfg_.objectives.empty()) validate_objective_specs(cfg_.objectives);
        // Feasible fraction: a user-supplied value wins, otherwise estimate
        // once up front so every kernel build sees the same density scale.
        v_c_ = space_.feasible_fraction
                   ? *space_.feasible_fraction
                   : space_.estimate_feasible_fraction(cfg_.n_probe, rng_);
        if (v_c_ <= 0.0)
            throw FeasibilityError("constraint admits no feasible volume");
    }

    const ParameterSpace& space() const { return space_; }
    const CampaignConfig& config() const { return cfg_; }
    const std::vector<Observation>& history() const { return history_; }
    double feasible_fraction() const { return v_c_; }
    std::size_t asks() const { return asks_; }

    Proposal ask() {
        const double lambda =
            cfg_.lambda_schedule[asks_ % cfg_.lambda_schedule.size()];
        ++asks_;
        Proposal p;
        p.lambda_used = lambda;
        p.strategy = cfg_.strategy;
        p.acquisition_value = std::numeric_limits<double>::quiet_NaN();
        switch (cfg_.strategy) {
        case Strategy::GryffinAdam:
        case Strategy::GryffinGenetic: {
            auto [x, alpha] = ask_gryffin(lambda);
            p.params = std::move(x);
            p.acquisition_value = alpha;
            break;
        }
        case Strategy::Random:
            p.params = ask_random();
            break;
        case Strategy::Genetic:
            p.params = ask_direct_ga();
            break;
        }
        p.raw = space_.denormalize(p.params);
        return p;
    }

    // Thin batched variant: consecutive schedule slots, one proposal each.
    std::vector<Proposal> ask(std::size_t count) {
        std::vector<Proposal> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) out.push_back(ask());
        return out;
    }

    void tell(const Proposal& p, double measurement) {
        tell(p, std::vector<double>{measurement});
    }

    void tell(const Proposal& p, const std::vector<double>& measurement) {
        tell_params(p.params, measurement);
    }

    // Observations from outside the ask loop are accepted as long as they
    // live in the same space and respect the constraint.
    void tell_params(const ParamVector& x, const std::vector<double>& measurement) {
        if (x.size() != space_.size())
            throw SpaceMismatchError("proposal dimensionality does not match the campaign space");
        if (!space_.is_feasible(x))
            throw FeasibilityError("told an infeasible observation");
        const std::size_t arity = cfg_.objectives.empty() ? 1 : cfg_.objectives.size();
        if (measurement.size() != arity)
            throw SpecError("expected " + std::to_string(arity) + " objective value(s), got " +
                            std::to_string(measurement.size()));

        Observation obs;
        obs.params = x;
        obs.objectives = measurement;
        obs.objective = measurement[0];
        history_.push_back(std::move(obs));
        refresh_internal_values();

        if (cfg_.strategy == Strategy::Genetic) note_ga_measurement();
    }

    const Observation& incumbent() const {
        if (history_.empty()) throw EmptyHistoryError("no observations yet");
        std::size_t best = 0;
        for (std::size_t i = 1; i < history_.size(); ++i)
            if (history_[i].internal < history_[best].internal) best = i;
        return history_[best];
    }

private:
    // Maximization flips sign so the core always minimizes; multi-objective
    // histories are rescalarized wholesale because merits are history scaled.
    void refresh_internal_values() {
        if (cfg_.objectives.empty()) {
            const double sign = cfg_.goal == Goal::Maximize ? -1.0 : 1.0;
            for (Observation& o : history_) {
                o.internal = sign * o.objective;
                o.scalarized.reset();
            }
            return;
        }
        std::vector<std::vector<double>> tuples;
        tuples.reserve(history_.size());
        for (const Observation& o : history_) tuples.push_back(o.objectives);
        const std::vector<double> merits = scalarize(cfg_.objectives, tuples);
        for (std::size_t i = 0; i < history_.size(); ++i) {
            history_[i].scalarized = merits[i];
            history_[i].internal = merits[i];
        }
    }

    std::pair<ParamVector, double> ask_gryffin(double lambda) {
        std::vector<ParamVector> xs;
        std::vector<double> values;
        xs.reserve(history_.size());
        values.reserve(history_.size());
        for (const Observation& o : history_) {
            xs.push_back(o.params);
            values.push_back(o.internal);
        }
        const KernelSet ks =
            KernelSet::build(space_, xs, values, lambda, v_c_, cfg_.kernel);

        const std::vector<ParamVector> init =
            initial_proposals(space_, rng_, cfg_.proposal_count);
        const std::vector<ParamVector> refined =
            cfg_.strategy == Strategy::GryffinAdam
                ? optimize_adam_hill(ks, space_, init, cfg_.adam, rng_)
                : optimize_genetic(ks, space_, init, cfg_.genetic, rng_);

        // Lowest acquisition wins, but candidates sitting on top of a past
        // observation are skipped unless nothing else is available.
        std::size_t best_far = refined.size(), best_any = 0;
        double alpha_far = 0.0, alpha_any = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < refined.size(); ++i) {
            const double a = ks.acquisition(refined[i]);
            if (a < alpha_any) {
                alpha_any = a;
                best_any = i;
            }
            if (is_far_from_history(refined[i]) && (best_far == refined.size() || a < alpha_far)) {
                alpha_far = a;
                best_far = i;
            }
        }
        const std::size_t pick = best_far < refined.size() ? best_far : best_any;
        const double alpha = best_far < refined.size() ? alpha_far : alpha_any;
        return {refined[pick], alpha};
    }

    bool is_far_from_history(const ParamVector& x) const {
        for (const Observation& o : history_)
            if (linf_distance(x, o.params) < cfg_.self_avoid_tol) return false;
        return true;
    }

    ParamVector ask_random() {
        ParamVector x = space_.rejection_sample(1, rng_)[0];
        // On exhaustible (fully finite) spaces, redraw while the tile has
        // already been measured; plain independent draws would make the
        // expected hitting time scale with the full tile count instead of
        // the visited fraction. Continuous spaces never repeat anyway.
        if (space_.all_finite() && !history_.empty()) {
            for (int attempt = 0; attempt < 1000 && !is_far_from_history(x); ++attempt)
                x = space_.rejection_sample(1, rng_)[0];
        }
        return x;
    }

    // Direct GA over the measured objective: propose, in order, the members
    // whose genome changed during evolution; unchanged members keep their
    // measured value, so a generation only costs as many evaluations as it
    // has varied offspring. Evolves once no unmeasured member remains.
    ParamVector ask_direct_ga() {
        if (ga_population_.empty()) {
            ga_population_ = space_.rejection_sample(cfg_.ga_population, rng_);
            ga_values_.assign(ga_population_.size(),
                              std::numeric_limits<double>::quiet_NaN());
            ga_pending_ = npos;
        }
        if (ga_pending_ != npos) {
            // Asked ahead of the measurement; hand out an independent sample
            // rather than re-proposing the member awaiting its value.
            return space_.rejection_sample(1, rng_)[0];
        }
        for (int round = 0; round < 64; ++round) {
            for (std::size_t i = 0; i < ga_population_.size(); ++i)
                if (std::isnan(ga_values_[i])) {
                    ga_pending_ = i;
                    return ga_population_[i];
                }
            std::vector<double> carried;
            ga_population_ = evolve_generation(space_, ga_population_, ga_values_,
                                               cfg_.genetic, rng_, &carried);
            ga_values_ = std::move(carried);
        }
        // Vanishingly unlikely: variation left 64 straight generations
        // untouched. Keep the ask honest with an independent draw.
        return space_.rejection_sample(1, rng_)[0];
    }

    void note_ga_measurement() {
        if (ga_pending_ != npos && ga_pending_ < ga_values_.size()) {
            ga_values_[ga_pending_] = history_.back().internal;
            ga_pending_ = npos;
        }
    }

    ParameterSpace space_;
    CampaignConfig cfg_;
    Rng rng_;
    double v_c_ = 1.0;
    std::size_t asks_ = 0;
    std::vector<Observation> history_;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<ParamVector> ga_population_;
    std::vector<double> ga_values_;
    std::size_t ga_pending_ = npos;
};

} // namespace cbo
