#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "domain.hpp"
#include "rng.hpp"
#include "surrogate.hpp"

namespace cbo {

struct AdamHillConfig {
    int adam_iters = 200;  // gradient steps for continuous dims
    int hill_sweeps = 50;  // random-improvement sweeps for finite dims
    double learning_rate = 0.05; // normalized units
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double fd_step = 1e-3; // central-difference half step
};

struct GeneticConfig {
    int tournament_size = 3;
    double elite_fraction = 0.05;     // top fraction copied unchanged (min 1)
    double crossover_prob = 0.5;      // per consecutive pair
    double mutation_prob = 0.4;       // per individual
    double indep_mutation_prob = 0.2; // per attribute once mutating
    double mutation_scale = 0.1;      // fraction of the attribute range
    int max_generations = 10;
    double diversity_stop = 0.10;     // span fraction below which search stops
    double projection_tol = 0.01;     // inf-norm feasibility-boundary tolerance
};

// Default global-search size: proportional to dimensionality, clamped.
inline std::size_t default_proposal_count(std::size_t dims) {
    return std::clamp<std::size_t>(100 * dims, 200, 2000);
}

inline std::vector<ParamVector> initial_proposals(const ParameterSpace& space, Rng& rng,
                                                  std::size_t count = 0) {
    if (count == 0) count = default_proposal_count(space.size());
    return space.rejection_sample(count, rng);
}

// Pulls an infeasible offspring back toward its feasible parent. Feasible
// offspring pass through untouched. Categorical dims are first reset to the
// parent's values; continuous/discrete dims are then bisected along the
// parent-offspring segment (discrete midpoints round toward the parent) until
// the endpoints are within tol (continuous) and adjacent (discrete), and the
// feasible endpoint is returned. If resetting the categoricals was what fixed
// feasibility, the original categorical values are restored afterwards when
// they keep the point feasible.
inline ParamVector project_to_feasible(const ParameterSpace& space, ParamVector offspring,
                                       const ParamVector& parent, double tol = 0.01) {
    if (space.is_feasible(offspring)) return offspring;

    const std::size_t d = space.size();
    std::vector<std::size_t> cat_dims, seg_dims;
    for (std::size_t i = 0; i < d; ++i)
        (space[i].kind == ParamKind::Categorical ? cat_dims : seg_dims).push_back(i);

    ParamVector original_cats = offspring;
    bool cats_changed = false;
    for (std::size_t i : cat_dims)
        if (offspring[i] != parent[i]) {
            offspring[i] = parent[i];
            cats_changed = true;
        }
    if (cats_changed && space.is_feasible(offspring)) return offspring;

    ParamVector lo = parent, hi = offspring; // lo feasible, hi infeasible
    auto converged = [&] {
        for (std::size_t i : seg_dims) {
            const double gap = std::abs(lo[i] - hi[i]);
            if (space[i].kind == ParamKind::Continuous ? gap >= tol : gap > 1.0)
                return false;
        }
        return true;
    };
    while (!converged()) {
        ParamVector mid = lo;
        bool moved = false;
        for (std::size_t i : seg_dims) {
            const double avg = 0.5 * (lo[i] + hi[i]);
            if (space[i].kind == ParamKind::Continuous) {
                mid[i] = avg;
            } else {
                // round toward the feasible endpoint so progress is guaranteed
                mid[i] = hi[i] > lo[i] ? std::floor(avg) : std::ceil(avg);
            }
            if (mid[i] != lo[i]) moved = true;
        }
        if (!moved) break;
        (space.is_feasible(mid) ? lo : hi) = std::move(mid);
    }

    if (!cat_dims.empty()) {
        ParamVector restored = lo;
        bool differs = false;
        for (std::size_t i : cat_dims)
            if (restored[i] != original_cats[i]) {
                restored[i] = original_cats[i];
                differs = true;
            }
        if (differs && space.is_feasible(restored)) return restored;
    }
    return lo;
}

namespace detail {

// One hill sweep over the given dims: per dim draw a random option and keep it
// only when the move stays feasible and the full-vector acquisition improves.
// An infeasible redraw is rejected like any non-improving one. Returns the
// updated alpha.
inline double hill_sweep(const KernelSet& ks, const ParameterSpace& space,
                         std::span<const std::size_t> dims, ParamVector& x, double alpha_x,
                         Rng& rng) {
    for (std::size_t d : dims) {
        const double candidate = static_cast<double>(rng.uniform_int(space[d].option_count()));
        if (candidate == x[d]) continue;
        const double old = x[d];
        x[d] = candidate;
        if (!space.is_feasible(x)) {
            x[d] = old;
            continue;
        }
        const double a = ks.acquisition(x);
        if (a < alpha_x)
            alpha_x = a;
        else
            x[d] = old;
    }
    return alpha_x;
}

} // namespace detail

// Local refinement of feasible samples: Adam on continuous dims (numerical
// central-difference gradients) interleaved with hill sweeps on discrete and
// categorical dims. A sample's refinement stops at the previous iterate as
// soon as an update leaves the feasible region, and the refined point never
// has a worse acquisition value than its starting point.
inline std::vector<ParamVector> optimize_adam_hill(const KernelSet& ks,
                                                   const ParameterSpace& space,
                                                   std::span<const ParamVector> init,
                                                   const AdamHillConfig& cfg, Rng& rng) {
    std::vector<std::size_t> cont, cat, disc;
    for (std::size_t i = 0; i < space.size(); ++i)
        switch (space[i].kind) {
        case ParamKind::Continuous: cont.push_back(i); break;
        case ParamKind::Categorical: cat.push_back(i); break;
        case ParamKind::Discrete: disc.push_back(i); break;
        }
    const int iters = std::max(cont.empty() ? 0 : cfg.adam_iters,
                               cat.empty() && disc.empty() ? 0 : cfg.hill_sweeps);

    std::vector<ParamVector> refined;
    refined.reserve(init.size());
    std::vector<double> m(cont.size()), v(cont.size()), grad(cont.size());

    for (const ParamVector& start : init) {
        ParamVector x = start;
        const double alpha_init = ks.acquisition(start);
        std::fill(m.begin(), m.end(), 0.0);
        std::fill(v.begin(), v.end(), 0.0);

        ParamVector result = x;
        for (int t = 1; t <= iters; ++t) {
            ParamVector prev = x;
            if (!cont.empty() && t <= cfg.adam_iters) {
                ParamVector probe = x;
                for (std::size_t j = 0; j < cont.size(); ++j) {
                    const std::size_t d = cont[j];
                    probe[d] = x[d] + cfg.fd_step;
                    const double hiv = ks.acquisition(probe);
                    probe[d] = x[d] - cfg.fd_step;
                    const double lov = ks.acquisition(probe);
                    probe[d] = x[d];
                    grad[j] = (hiv - lov) / (2.0 * cfg.fd_step);
                }
                for (std::size_t j = 0; j < cont.size(); ++j) {
                    m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * grad[j];
                    v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * grad[j] * grad[j];
                    const double mhat = m[j] / (1.0 - std::pow(cfg.beta1, t));
                    const double vhat = v[j] / (1.0 - std::pow(cfg.beta2, t));
                    x[cont[j]] = std::clamp(
                        x[cont[j]] - cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon),
                        0.0, 1.0);
                }
            }
            if ((!cat.empty() || !disc.empty()) && t <= cfg.hill_sweeps) {
                double a = ks.acquisition(x);
                a = detail::hill_sweep(ks, space, cat, x, a, rng);
                detail::hill_sweep(ks, space, disc, x, a, rng);
            }
            if (!space.is_feasible(x)) {
                result = std::move(prev);
                break;
            }
            result = x;
        }

        // Refinement must never hand back something worse than its start.
        refined.push_back(ks.acquisition(result) <= alpha_init ? std::move(result)
                                                               : ParamVector(start));
    }
    return refined;
}

namespace detail {

inline bool population_collapsed(const ParameterSpace& space,
                                 std::span<const ParamVector> pop, double stop_fraction) {
    for (std::size_t d = 0; d < space.size(); ++d) {
        double lo = pop[0][d], hi = pop[0][d];
        for (const ParamVector& x : pop) {
            lo = std::min(lo, x[d]);
            hi = std::max(hi, x[d]);
        }
        const double span = space.range_span(d);
        if (span > 0.0 && (hi - lo) / span >= stop_fraction) return false;
    }
    return true;
}

inline void cross_two_point(ParamVector& a, ParamVector& b, Rng& rng) {
    const std::size_t size = a.size();
    if (size < 2) return;
    std::size_t c1 = 1 + rng.uniform_int(size);
    std::size_t c2 = 1 + rng.uniform_int(size - 1);
    if (c2 >= c1)
        ++c2;
    else
        std::swap(c1, c2);
    for (std::size_t i = c1; i < c2; ++i) std::swap(a[i], b[i]);
}

inline void cross_uniform(ParamVector& a, ParamVector& b, Rng& rng) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (rng.uniform() < 0.5) std::swap(a[i], b[i]);
}

inline void mutate(const ParameterSpace& space, ParamVector& x, const GeneticConfig& cfg,
                   Rng& rng) {
    for (std::size_t d = 0; d < space.size(); ++d) {
        if (rng.uniform() >= cfg.indep_mutation_prob) continue;
        const ParameterDef& def = space[d];
        switch (def.kind) {
        case ParamKind::Continuous:
            x[d] = std::clamp(x[d] + rng.normal(0.0, cfg.mutation_scale), 0.0, 1.0);
            break;
        case ParamKind::Discrete: {
            // scale is a fraction of the index range; steps snap to the grid
            const double span = space.range_span(d);
            const double step = std::round(rng.normal(0.0, cfg.mutation_scale * span));
            x[d] = std::clamp(x[d] + step, 0.0, span);
            break;
        }
        case ParamKind::Categorical:
            x[d] = static_cast<double>(rng.uniform_int(def.option_count()));
            break;
        }
    }
}

} // namespace detail

// One generation of the constrained GA: elitism, tournament selection,
// crossover (uniform for d >= 3, two-point below), mutation, and feasibility
// projection of every offspring toward its pre-variation parent. fitness must
// align with population; lower fitness wins, ties go to the earlier index.
// When carried is given it receives one entry per output member: the parent's
// fitness if no variation op touched the member, NaN if it needs re-scoring.
inline std::vector<ParamVector> evolve_generation(const ParameterSpace& space,
                                                  std::span<const ParamVector> population,
                                                  std::span<const double> fitness,
                                                  const GeneticConfig& cfg, Rng& rng,
                                                  std::vector<double>* carried = nullptr) {
    const std::size_t n = population.size();
    if (n != fitness.size()) throw SpaceMismatchError("population/fitness size mismatch");

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });

    const std::size_t n_elites =
        std::max<std::size_t>(1, static_cast<std::size_t>(cfg.elite_fraction * n));
    std::vector<ParamVector> next;
    std::vector<double> keep;
    next.reserve(n);
    keep.reserve(n);
    for (std::size_t i = 0; i < std::min(n_elites, n); ++i) {
        next.push_back(population[order[i]]);
        keep.push_back(fitness[order[i]]);
    }

    // Tournament selection with replacement. Members the variation operators
    // leave alone keep their parent's fitness; crossed or mutated ones are
    // marked stale (NaN) so callers paying per evaluation re-measure only
    // those.
    constexpr double stale = std::numeric_limits<double>::quiet_NaN();
    std::vector<ParamVector> selected;
    std::vector<double> sel_fit;
    selected.reserve(n - next.size());
    sel_fit.reserve(n - next.size());
    while (selected.size() < n - next.size()) {
        std::size_t best = rng.uniform_int(n);
        for (int k = 1; k < cfg.tournament_size; ++k) {
            const std::size_t c = rng.uniform_int(n);
            if (fitness[c] < fitness[best] || (fitness[c] == fitness[best] && c < best))
                best = c;
        }
        selected.push_back(population[best]);
        sel_fit.push_back(fitness[best]);
    }

    for (std::size_t i = 1; i < selected.size(); i += 2) {
        if (rng.uniform() >= cfg.crossover_prob) continue;
        ParamVector pa = selected[i - 1], pb = selected[i];
        if (space.size() >= 3)
            detail::cross_uniform(selected[i - 1], selected[i], rng);
        else
            detail::cross_two_point(selected[i - 1], selected[i], rng);
        selected[i - 1] = project_to_feasible(space, std::move(selected[i - 1]), pa,
                                              cfg.projection_tol);
        selected[i] = project_to_feasible(space, std::move(selected[i]), pb,
                                          cfg.projection_tol);
        sel_fit[i - 1] = stale;
        sel_fit[i] = stale;
    }
    for (std::size_t i = 0; i < selected.size(); ++i) {
        if (rng.uniform() >= cfg.mutation_prob) continue;
        ParamVector parent = selected[i];
        detail::mutate(space, selected[i], cfg, rng);
        selected[i] = project_to_feasible(space, std::move(selected[i]), parent,
                                          cfg.projection_tol);
        sel_fit[i] = stale;
    }

    for (std::size_t i = 0; i < selected.size(); ++i) {
        next.push_back(std::move(selected[i]));
        keep.push_back(sel_fit[i]);
    }
    if (carried) *carried = std::move(keep);
    return next;
}

// Global-to-local GA refinement of the acquisition surface. Stops early once
// every attribute of the population spans less than diversity_stop of its
// range (checked before each generation, so a collapsed initial population is
// returned as-is).
inline std::vector<ParamVector> optimize_genetic(const KernelSet& ks,
                                                 const ParameterSpace& space,
                                                 std::span<const ParamVector> init,
                                                 const GeneticConfig& cfg, Rng& rng) {
    if (init.size() < 4) throw SpecError("genetic refinement needs at least 4 samples");
    std::vector<ParamVector> pop(init.begin(), init.end());
    std::vector<double> fitness(pop.size());
    for (int g = 0; g < cfg.max_generations; ++g) {
        if (detail::population_collapsed(space, pop, cfg.diversity_stop)) break;
        for (std::size_t i = 0; i < pop.size(); ++i) fitness[i] = ks.acquisition(pop[i]);
        pop = evolve_generation(space, pop, fitness, cfg, rng);
    }
    return pop;
}

} // namespace cbo
