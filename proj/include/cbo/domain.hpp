#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace cbo {

enum class ParamKind { Continuous, Discrete, Categorical };
enum class Goal { Minimize, Maximize };

// A point in internal coordinates: continuous dims hold a value in [0,1],
// discrete and categorical dims hold the option index (stored as double).
// Constraint callbacks always receive internal coordinates.
using ParamVector = std::vector<double>;
using ConstraintFn = std::function<bool(const ParamVector&)>;

inline double linf_distance(const ParamVector& a, const ParamVector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

struct ParameterDef {
    std::string name;
    ParamKind kind = ParamKind::Continuous;
    double low = 0.0, high = 1.0;        // continuous only
    std::vector<double> options;         // discrete only (native values)
    std::vector<std::string> categories; // categorical only (labels)

    static ParameterDef continuous(std::string name, double low, double high) {
        if (!(low < high))
            throw SpecError("continuous parameter '" + name + "' needs low < high");
        ParameterDef d;
        d.name = std::move(name);
        d.kind = ParamKind::Continuous;
        d.low = low;
        d.high = high;
        return d;
    }

    static ParameterDef discrete(std::string name, std::vector<double> options) {
        if (options.empty())
            throw SpecError("discrete parameter '" + name + "' needs at least one option");
        ParameterDef d;
        d.name = std::move(name);
        d.kind = ParamKind::Discrete;
        d.options = std::move(options);
        return d;
    }

    // Convenience for integer grids: options 0, 1, ..., count-1.
    static ParameterDef discrete_range(std::string name, std::size_t count) {
        std::vector<double> opts(count);
        for (std::size_t i = 0; i < count; ++i) opts[i] = static_cast<double>(i);
        return discrete(std::move(name), std::move(opts));
    }

    static ParameterDef categorical(std::string name, std::vector<std::string> categories) {
        if (categories.empty())
            throw SpecError("categorical parameter '" + name + "' needs at least one option");
        ParameterDef d;
        d.name = std::move(name);
        d.kind = ParamKind::Categorical;
        d.categories = std::move(categories);
        return d;
    }

    bool finite() const { return kind != ParamKind::Continuous; }

    std::size_t option_count() const {
        switch (kind) {
        case ParamKind::Discrete: return options.size();
        case ParamKind::Categorical: return categories.size();
        default:
            throw KindError("parameter '" + name + "' is continuous and has no options");
        }
    }
};

class ParameterSpace {
public:
    ParameterSpace() = default;
    explicit ParameterSpace(std::vector<ParameterDef> defs, ConstraintFn constraint = nullptr)
        : defs_(std::move(defs)), constraint_(std::move(constraint)) {}

    void add(ParameterDef def) { defs_.push_back(std::move(def)); }

    std::size_t size() const { return defs_.size(); }
    const ParameterDef& operator[](std::size_t i) const { return defs_[i]; }

    const std::vector<ParameterDef>& defs() const { return defs_; }

    std::size_t index_of(std::string_view name) const {
        for (std::size_t i = 0; i < defs_.size(); ++i)
            if (defs_[i].name == name) return i;
        throw NameError("no parameter named '" + std::string(name) + "'");
    }
    const ParameterDef& at(std::string_view name) const { return defs_[index_of(name)]; }

    void set_constraint(ConstraintFn c) { constraint_ = std::move(c); }
    bool has_constraint() const { return static_cast<bool>(constraint_); }
    const ConstraintFn& constraint() const { return constraint_; }

    // Supplied by the caller when the feasible fraction of the domain is known
    // up front; otherwise estimated on demand (see resolved_feasible_fraction).
    std::optional<double> feasible_fraction;

    bool all_finite() const {
        return std::all_of(defs_.begin(), defs_.end(),
                           [](const ParameterDef& d) { return d.finite(); });
    }

    // Bounds check in internal coordinates (no constraint involved).
    bool contains(const ParamVector& x) const {
        if (x.size() != defs_.size()) return false;
        for (std::size_t i = 0; i < defs_.size(); ++i) {
            const ParameterDef& d = defs_[i];
            if (d.kind == ParamKind::Continuous) {
                if (!(x[i] >= 0.0 && x[i] <= 1.0)) return false;
            } else {
                const double idx = x[i];
                if (idx != std::floor(idx) || idx < 0.0 ||
                    idx >= static_cast<double>(d.option_count()))
                    return false;
            }
        }
        return true;
    }

    void require_in_space(const ParamVector& x) const {
        if (x.size() != defs_.size())
            throw SpaceMismatchError("vector has " + std::to_string(x.size()) +
                                     " dims, space has " + std::to_string(defs_.size()));
        if (!contains(x))
            throw BoundsError("vector outside parameter bounds");
    }

    bool is_feasible(const ParamVector& x) const {
        require_in_space(x);
        return constraint_ ? constraint_(x) : true;
    }

    // Uniform draw over the full domain (not the feasible region).
    ParamVector sample(Rng& rng) const {
        ParamVector x(defs_.size());
        for (std::size_t i = 0; i < defs_.size(); ++i) {
            const ParameterDef& d = defs_[i];
            x[i] = d.kind == ParamKind::Continuous
                       ? rng.uniform()
                       : static_cast<double>(rng.uniform_int(d.option_count()));
        }
        return x;
    }

    // Uniform feasible draws; gives up after budget_factor * count attempts.
    std::vector<ParamVector> rejection_sample(std::size_t count, Rng& rng,
                                              std::size_t budget_factor = 200) const {
        std::vector<ParamVector> out;
        out.reserve(count);
        const std::size_t budget = budget_factor * count;
        for (std::size_t attempt = 0; attempt < budget && out.size() < count; ++attempt) {
            ParamVector x = sample(rng);
            if (!constraint_ || constraint_(x)) out.push_back(std::move(x));
        }
        if (out.size() < count)
            throw FeasibilityError("rejection sampling produced " + std::to_string(out.size()) +
                                   " of " + std::to_string(count) + " feasible points within " +
                                   std::to_string(budget) + " attempts");
        return out;
    }

    // Monte Carlo estimate of the feasible fraction of the domain.
    double estimate_feasible_fraction(std::size_t n_probe, Rng& rng) const {
        if (n_probe == 0) throw BoundsError("n_probe must be positive");
        if (!constraint_) return 1.0;
        std::size_t hits = 0;
        for (std::size_t i = 0; i < n_probe; ++i)
            if (constraint_(sample(rng))) ++hits;
        return static_cast<double>(hits) / static_cast<double>(n_probe);
    }

    // User-supplied fraction wins; otherwise a seeded estimate.
    double resolved_feasible_fraction(std::size_t n_probe, Rng& rng) const {
        if (feasible_fraction) return *feasible_fraction;
        return estimate_feasible_fraction(n_probe, rng);
    }

    // Native values -> internal coordinates. Discrete values must match an
    // option (tiny tolerance for round-tripped doubles); categorical entries
    // carry the option index.
    ParamVector normalize(const ParamVector& raw) const {
        if (raw.size() != defs_.size())
            throw SpaceMismatchError("vector size does not match space");
        ParamVector x(raw.size());
        for (std::size_t i = 0; i < defs_.size(); ++i) {
            const ParameterDef& d = defs_[i];
            switch (d.kind) {
            case ParamKind::Continuous: {
                if (raw[i] < d.low || raw[i] > d.high)
                    throw BoundsError("value " + std::to_string(raw[i]) + " outside [" +
                                      std::to_string(d.low) + ", " + std::to_string(d.high) +
                                      "] for '" + d.name + "'");
                x[i] = (raw[i] - d.low) / (d.high - d.low);
                break;
            }
            case ParamKind::Discrete: {
                const auto& opts = d.options;
                std::size_t best = opts.size();
                for (std::size_t j = 0; j < opts.size(); ++j)
                    if (std::abs(opts[j] - raw[i]) <= 1e-9 * std::max(1.0, std::abs(opts[j]))) {
                        best = j;
                        break;
                    }
                if (best == opts.size())
                    throw BoundsError("value " + std::to_string(raw[i]) +
                                      " is not an option of '" + d.name + "'");
                x[i] = static_cast<double>(best);
                break;
            }
            case ParamKind::Categorical: {
                const double idx = raw[i];
                if (idx != std::floor(idx) || idx < 0.0 ||
                    idx >= static_cast<double>(d.categories.size()))
                    throw BoundsError("categorical index out of range for '" + d.name + "'");
                x[i] = idx;
                break;
            }
            }
        }
        return x;
    }

    // Internal coordinates -> native values (categorical: option index).
    ParamVector denormalize(const ParamVector& x) const {
        require_in_space(x);
        ParamVector raw(x.size());
        for (std::size_t i = 0; i < defs_.size(); ++i) {
            const ParameterDef& d = defs_[i];
            switch (d.kind) {
            case ParamKind::Continuous:
                raw[i] = d.low + x[i] * (d.high - d.low);
                break;
            case ParamKind::Discrete:
                raw[i] = d.options[static_cast<std::size_t>(x[i])];
                break;
            case ParamKind::Categorical:
                raw[i] = x[i];
                break;
            }
        }
        return raw;
    }

    // Attribute span used for mutation scales and diversity checks: the unit
    // interval for continuous dims, the index range for finite dims.
    double range_span(std::size_t i) const {
        const ParameterDef& d = defs_[i];
        return d.kind == ParamKind::Continuous
                   ? 1.0
                   : static_cast<double>(d.option_count() - 1);
    }

private:
    std::vector<ParameterDef> defs_;
    ConstraintFn constraint_;
};

// All grid points of a fully finite space, odometer order (last dim fastest).
inline std::vector<ParamVector> enumerate_grid(const ParameterSpace& space) {
    if (!space.all_finite())
        throw KindError("grid enumeration requires discrete/categorical dims only");
    std::size_t total = 1;
    for (std::size_t i = 0; i < space.size(); ++i) total *= space[i].option_count();
    std::vector<ParamVector> pts;
    pts.reserve(total);
    ParamVector x(space.size(), 0.0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        pts.push_back(x);
        for (std::size_t i = space.size(); i-- > 0;) {
            x[i] += 1.0;
            if (x[i] < static_cast<double>(space[i].option_count())) break;
            x[i] = 0.0;
        }
    }
    return pts;
}

} // namespace cbo
