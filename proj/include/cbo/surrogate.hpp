#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "domain.hpp"

namespace cbo {

struct Observation {
    ParamVector params;               // internal coordinates, feasible
    double objective = 0.0;           // raw measurement (first objective for tuples)
    std::vector<double> objectives;   // full tuple for multi-objective runs
    std::optional<double> scalarized; // merit set by the scalarizer
    double internal = 0.0;            // minimization view the planner ranks by
};

// Min-max normalization to [0,1]; a constant (or single-entry) history maps to
// all zeros so the exploration parameter keeps a consistent scale against f_k.
inline std::vector<double> normalize_objectives(std::span<const double> raw) {
    std::vector<double> f(raw.size(), 0.0);
    if (raw.empty()) return f;
    double lo = raw[0], hi = raw[0];
    for (double v : raw) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi > lo)
        for (std::size_t i = 0; i < raw.size(); ++i) f[i] = (raw[i] - lo) / (hi - lo);
    return f;
}

struct KernelSetConfig {
    // Experimental: treat ordered discrete dims as a Gaussian over the
    // normalized index instead of the temperature-softened indicator.
    bool gaussian_on_index = false;
};

// Immutable per-iteration snapshot of the kernel-regression surrogate.
// acquisition() is pure and safe to call from many threads at once.
class KernelSet {
public:
    // xs: feasible points (internal coords); internal_values: the matching
    // minimization objectives (raw or scalarized); v_c: feasible fraction.
    static KernelSet build(const ParameterSpace& space, std::span<const ParamVector> xs,
                           std::span<const double> internal_values, double lambda,
                           double v_c = 1.0, KernelSetConfig config = {}) {
        if (v_c <= 0.0 || v_c > 1.0)
            throw BoundsError("feasible fraction must be in (0, 1]");
        if (xs.size() != internal_values.size())
            throw SpaceMismatchError("observation/objective count mismatch");

        KernelSet ks;
        ks.lambda_ = lambda;
        ks.dims_ = space.size();
        ks.n_ = xs.size();
        if (ks.n_ == 0) return ks;

        ks.rho_ = static_cast<double>(ks.n_) / v_c;
        ks.tau_ = 12.0 * ks.rho_ * ks.rho_;
        ks.temp_ = 0.5 + 10.0 / ks.rho_;
        ks.f_ = normalize_objectives(internal_values);

        for (std::size_t d = 0; d < space.size(); ++d) {
            const ParameterDef& def = space[d];
            if (def.kind == ParamKind::Continuous ||
                (config.gaussian_on_index && def.kind == ParamKind::Discrete)) {
                ks.cont_dims_.push_back(d);
                ks.cont_scale_.push_back(def.kind == ParamKind::Continuous
                                             ? 1.0
                                             : 1.0 / space.range_span(d));
            } else {
                const double m = static_cast<double>(def.option_count());
                const double e = std::exp(1.0 / ks.temp_);
                ks.fin_dims_.push_back(d);
                // Option weights scaled by M so the uniform-temperature limit
                // is 1 per dim; over all M options they sum to M.
                ks.fin_match_.push_back(m * e / (e + (m - 1.0)));
                ks.fin_other_.push_back(m / (e + (m - 1.0)));
            }
        }
        ks.prefactor_ = std::pow(ks.tau_ / (2.0 * std::numbers::pi),
                                 0.5 * static_cast<double>(ks.cont_dims_.size()));

        // Flatten observations for the hot loop.
        ks.cont_vals_.resize(ks.n_ * ks.cont_dims_.size());
        ks.fin_vals_.resize(ks.n_ * ks.fin_dims_.size());
        for (std::size_t k = 0; k < ks.n_; ++k) {
            for (std::size_t j = 0; j < ks.cont_dims_.size(); ++j)
                ks.cont_vals_[k * ks.cont_dims_.size() + j] =
                    xs[k][ks.cont_dims_[j]] * ks.cont_scale_[j];
            for (std::size_t j = 0; j < ks.fin_dims_.size(); ++j)
                ks.fin_vals_[k * ks.fin_dims_.size() + j] = xs[k][ks.fin_dims_[j]];
        }
        return ks;
    }

    std::size_t size() const { return n_; }
    std::size_t dims() const { return dims_; }
    double lambda() const { return lambda_; }
    double rho() const { return rho_; }
    double tau() const { return tau_; }
    double temperature() const { return temp_; }
    std::span<const double> normalized_objectives() const { return f_; }

    // Density of observation k's kernel at x: product over dims of a Gaussian
    // (continuous) or a temperature-softened indicator (finite options).
    double kernel_density(std::size_t k, const ParamVector& x) const {
        const std::size_t nc = cont_dims_.size(), nf = fin_dims_.size();
        double expo = 0.0;
        for (std::size_t j = 0; j < nc; ++j) {
            const double dx = x[cont_dims_[j]] * cont_scale_[j] - cont_vals_[k * nc + j];
            expo += dx * dx;
        }
        double w = prefactor_ * std::exp(-0.5 * tau_ * expo);
        for (std::size_t j = 0; j < nf; ++j)
            w *= x[fin_dims_[j]] == fin_vals_[k * nf + j] ? fin_match_[j] : fin_other_[j];
        return w;
    }

    // Blended utility: (sum_k f_k p_k(x) + lambda) / (sum_k p_k(x) + 1).
    // The uniform density is identically 1 in internal coordinates, so the
    // value is a convex combination of the f_k and lambda; lower is better.
    double acquisition(const ParamVector& x) const {
        double num = lambda_, den = 1.0;
        const std::size_t nc = cont_dims_.size(), nf = fin_dims_.size();
        const double* cv = cont_vals_.data();
        const double* fv = fin_vals_.data();
        for (std::size_t k = 0; k < n_; ++k) {
            double expo = 0.0;
            for (std::size_t j = 0; j < nc; ++j) {
                const double dx = x[cont_dims_[j]] * cont_scale_[j] - cv[k * nc + j];
                expo += dx * dx;
            }
            double w = prefactor_ * std::exp(-0.5 * tau_ * expo);
            for (std::size_t j = 0; j < nf; ++j)
                w *= x[fin_dims_[j]] == fv[k * nf + j] ? fin_match_[j] : fin_other_[j];
            num += f_[k] * w;
            den += w;
        }
        return num / den;
    }

private:
    std::size_t n_ = 0, dims_ = 0;
    double lambda_ = 0.0, rho_ = 0.0, tau_ = 0.0, temp_ = 0.0, prefactor_ = 1.0;
    std::vector<double> f_;
    std::vector<std::size_t> cont_dims_, fin_dims_;
    std::vector<double> cont_scale_;          // 1 or 1/(M-1) for index Gaussians
    std::vector<double> fin_match_, fin_other_;
    std::vector<double> cont_vals_, fin_vals_; // row-major per observation
};

} // namespace cbo
