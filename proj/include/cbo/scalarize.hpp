#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "domain.hpp"

namespace cbo {

// One objective of a priority-ordered list (index 0 = most important).
// threshold is an absolute satisfaction level in raw units; only the last
// objective may omit it (pure minimize/maximize tail).
struct ObjectiveSpec {
    std::string name;
    Goal goal = Goal::Minimize;
    std::optional<double> threshold;
};

inline void validate_objective_specs(std::span<const ObjectiveSpec> specs) {
    if (specs.empty()) throw SpecError("objective list must not be empty");
    for (std::size_t j = 0; j + 1 < specs.size(); ++j)
        if (!specs[j].threshold)
            throw SpecError("objective '" + specs[j].name +
                            "' needs a threshold (only the last may omit one)");
}

// Collapses objective tuples into a single merit per history entry (lower is
// better). Each entry is scored by its first unsatisfied tier k (1-based):
// merit = -k + g_k where g_k is the min-max normalized value of objective k
// over the whole history. Entries satisfying every threshold get k = m+1 and
// are ranked by the last objective. Tiers occupy disjoint unit intervals, so
// satisfying one more leading threshold always wins. Merits are history
// dependent and must be recomputed whenever the history changes.
inline std::vector<double> scalarize(std::span<const ObjectiveSpec> specs,
                                     const std::vector<std::vector<double>>& history) {
    validate_objective_specs(specs);
    if (history.empty()) throw EmptyHistoryError("scalarize needs at least one entry");
    const std::size_t m = specs.size();
    for (const auto& row : history)
        if (row.size() != m)
            throw SpecError("objective tuple arity " + std::to_string(row.size()) +
                            " does not match " + std::to_string(m) + " specs");

    const std::size_t n = history.size();
    // Internal minimization view, normalized per objective over the history.
    std::vector<std::vector<double>> norm(m, std::vector<double>(n));
    std::vector<std::optional<double>> thresh(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double sign = specs[j].goal == Goal::Maximize ? -1.0 : 1.0;
        double lo = sign * history[0][j], hi = lo;
        for (std::size_t i = 0; i < n; ++i) {
            const double g = sign * history[i][j];
            norm[j][i] = g;
            lo = std::min(lo, g);
            hi = std::max(hi, g);
        }
        if (hi > lo) {
            for (std::size_t i = 0; i < n; ++i) norm[j][i] = (norm[j][i] - lo) / (hi - lo);
            if (specs[j].threshold)
                thresh[j] = std::clamp((sign * *specs[j].threshold - lo) / (hi - lo), 0.0, 1.0);
        } else {
            // Constant objective: everything collapses to 0 and the threshold
            // is treated as met at 0.
            for (std::size_t i = 0; i < n; ++i) norm[j][i] = 0.0;
            if (specs[j].threshold) thresh[j] = 0.0;
        }
    }

    std::vector<double> merit(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t k = m + 1; // all satisfied
        for (std::size_t j = 0; j < m; ++j) {
            const bool violated = !thresh[j] || norm[j][i] > *thresh[j];
            if (violated) {
                k = j + 1;
                break;
            }
        }
        const std::size_t rank_on = std::min(k, m) - 1;
        merit[i] = -static_cast<double>(k) + norm[rank_on][i];
    }
    return merit;
}

} // namespace cbo
