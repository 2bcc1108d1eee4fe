#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "domain.hpp"
#include "rng.hpp"
#include "scalarize.hpp"

namespace cbo {

// Shortest round-trip decimal form of a double (used by all CSV writers so
// emitted files are reproducible byte for byte).
inline std::string format_double(double v) {
    std::array<char, 32> buf;
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

// ---------------------------------------------------------------------------
// Frozen constraint tables. The random sets below are generated determin-
// istically (our PRNG, seed 42) and exported once to data/*.csv; the shipped
// files are asserted byte-identical to these generators in the test suite.
// Draw order, circles: cx, cy, then radius, one circle at a time.
// Draw order, tuples: x0 then x1, one row at a time; fixed rows appended last.
// ---------------------------------------------------------------------------

struct Circle {
    double cx, cy, r;
};

inline std::vector<Circle> generate_schwefel_circles(std::uint64_t seed = 42) {
    Rng rng(seed);
    std::vector<Circle> circles(20);
    for (Circle& c : circles) {
        c.cx = rng.uniform();
        c.cy = rng.uniform();
        c.r = rng.uniform(0.05, 0.15);
    }
    return circles;
}

inline std::vector<std::pair<int, int>> generate_camel_exclusions(std::uint64_t seed = 42) {
    Rng rng(seed);
    std::vector<std::pair<int, int>> rows;
    rows.reserve(103);
    for (int i = 0; i < 100; ++i) {
        const int x0 = static_cast<int>(rng.uniform_int(21));
        const int x1 = static_cast<int>(rng.uniform_int(21));
        rows.emplace_back(x0, x1);
    }
    rows.emplace_back(7, 11);
    rows.emplace_back(7, 15);
    rows.emplace_back(13, 5);
    return rows;
}

inline const std::vector<Circle>& schwefel_circles() {
    static const std::vector<Circle> circles = generate_schwefel_circles();
    return circles;
}

inline const std::vector<std::pair<int, int>>& camel_exclusions() {
    static const std::vector<std::pair<int, int>> rows = generate_camel_exclusions();
    return rows;
}

inline std::string schwefel_circles_csv() {
    std::string s = "cx,cy,radius\r\n";
    for (const Circle& c : schwefel_circles())
        s += format_double(c.cx) + "," + format_double(c.cy) + "," + format_double(c.r) + "\r\n";
    return s;
}

inline std::string camel_exclusions_csv() {
    std::string s = "x0,x1\r\n";
    for (auto [a, b] : camel_exclusions())
        s += std::to_string(a) + "," + std::to_string(b) + "\r\n";
    return s;
}

// ---------------------------------------------------------------------------
// Surface registry
// ---------------------------------------------------------------------------

struct BenchmarkSurface {
    std::string name;
    ParameterSpace space; // constraint + feasible_fraction attached
    std::size_t objective_count = 1;
    bool grid = false; // fully finite 21x21 surface
    // Evaluates internal coordinates (denormalization happens inside).
    std::function<std::vector<double>(const ParamVector&)> evaluate;
    std::optional<double> optimum_value;        // constrained minimum
    std::vector<ParamVector> optimum_locations; // internal coords, all ties
    std::optional<int> feasible_tiles;          // grid surfaces only
    std::vector<ObjectiveSpec> default_objectives;

    double evaluate_scalar(const ParamVector& x) const { return evaluate(x)[0]; }
    bool is_feasible(const ParamVector& x) const { return space.is_feasible(x); }
};

namespace bench_detail {

constexpr double pi = std::numbers::pi;

inline double branin_native(double x1, double x2) {
    const double b = 5.1 / (4.0 * pi * pi);
    const double c = 5.0 / pi;
    const double t = 1.0 / (8.0 * pi);
    const double u = x2 - b * x1 * x1 + c * x1 - 6.0;
    return u * u + 10.0 * (1.0 - t) * std::cos(x1) + 10.0;
}

inline double schwefel_native(double x0, double x1) {
    return 418.9829 * 2.0 - x0 * std::sin(std::sqrt(std::abs(x0))) -
           x1 * std::sin(std::sqrt(std::abs(x1)));
}

inline double ackley_native(double x0, double x1) {
    const double a = 20.0, b = 0.2, c = 2.0 * pi;
    const double rms = std::sqrt(0.5 * (x0 * x0 + x1 * x1));
    const double cosavg = 0.5 * (std::cos(c * x0) + std::cos(c * x1));
    return -a * std::exp(-b * rms) - std::exp(cosavg) + a + std::exp(1.0);
}

inline double michalewicz_grid(double g0, double g1) {
    const double z0 = pi * g0 / 20.0, z1 = pi * g1 / 20.0;
    const double s0 = std::sin(z0) * std::pow(std::sin(1.0 * z0 * z0 / pi), 20.0);
    const double s1 = std::sin(z1) * std::pow(std::sin(2.0 * z1 * z1 / pi), 20.0);
    return -(s0 + s1);
}

inline double camel_grid(double g0, double g1) {
    const double x = -3.0 + 6.0 * g0 / 20.0;
    const double y = -2.0 + 4.0 * g1 / 20.0;
    return (4.0 - 2.1 * x * x + x * x * x * x / 3.0) * x * x + x * y +
           (-4.0 + 4.0 * y * y) * y * y;
}

// --- constraint predicates (feasible == true), internal coordinates ---

inline bool branin_feasible(const ParamVector& x) {
    const double a0 = x[0] - 0.12389382, a1 = x[1] - 0.81833333;
    const double b0 = x[0] - 0.961652, b1 = x[1] - 0.165;
    const double y0 = a0 * a0 + a1 * a1;
    const double y1 = b0 * b0 + b1 * b1;
    return !(y0 < 0.2 * 0.2 || y1 < 0.35 * 0.35);
}

inline bool schwefel_feasible(const ParamVector& x) {
    for (const Circle& c : schwefel_circles()) {
        const double dx = x[0] - c.cx, dy = x[1] - c.cy;
        if (dx * dx + dy * dy < c.r * c.r) return false;
    }
    return true;
}

inline bool dejong_feasible(const ParamVector& x) {
    if (std::abs(x[0] - x[1]) < 0.1) return false;
    const double dx = x[0] - 0.5, dy = x[1] - 0.5;
    const double r2 = dx * dx + dy * dy;
    return !(r2 > 0.05 && r2 < 0.15);
}

inline bool ackley_feasible(const ParamVector& x) {
    if (x[0] > 0.41 && x[0] < 0.46) return false;
    if (x[0] > 0.54 && x[0] < 0.59) return false;
    if (x[1] > 0.34 && x[1] < 0.41) return false;
    if (x[1] > 0.59 && x[1] < 0.66) return false;
    return true;
}

inline bool slope_feasible(const ParamVector& x) {
    const double y = x[0] * x[0] + x[1] * x[1];
    if (y > 5.0 && y < 25.0) return false;
    if (y > 70.0 && y < 110.0) return false;
    if (y > 200.0 && y < 300.0) return false;
    return true;
}

inline bool sphere_feasible(const ParamVector& x) {
    if (x[0] == 9.0 || x[0] == 11.0) return false;
    if (x[1] == 9.0 || x[1] == 11.0) return false;
    return true;
}

inline bool michalewicz_feasible(const ParamVector& x) {
    const double d0 = x[0] - 14.0, d1 = x[1] - 10.0;
    const double y = d0 * d0 + d1 * d1;
    if (y > 5.0 && y < 30.0) return false;
    if (x[0] > 12.5 && x[0] < 15.5 && x[1] < 5.5) return false;
    if (x[1] > 8.5 && x[1] < 11.5 && x[0] < 9.5) return false;
    return true;
}

inline bool camel_feasible(const ParamVector& x) {
    const int g0 = static_cast<int>(x[0]), g1 = static_cast<int>(x[1]);
    for (auto [a, b] : camel_exclusions())
        if (a == g0 && b == g1) return false;
    return true;
}

inline bool flow_feasible_native(double fc, double fs) {
    const double total = fc + fs;
    return total > 10.0 && total < 310.0 && fc < 2.0 * fs && fs < 2.0 * fc;
}

// Summary data for a continuous surface: deterministic dense-grid scan for
// the feasible fraction and the constrained minimum; analytic minima are
// folded in when they are feasible (the grid alone would stop just short).
struct ContinuousInfo {
    double feasible_fraction;
    double f_star;
    ParamVector arg_min; // internal coords
};

template <typename F, typename C>
ContinuousInfo scan_unit_square(F f, C feasible, const std::vector<ParamVector>& candidates) {
    constexpr int n = 1000; // 1001 x 1001 points including both edges
    ContinuousInfo info{0.0, std::numeric_limits<double>::infinity(), {}};
    std::size_t feas = 0;
    ParamVector x(2);
    for (int i = 0; i <= n; ++i) {
        x[0] = static_cast<double>(i) / n;
        for (int j = 0; j <= n; ++j) {
            x[1] = static_cast<double>(j) / n;
            if (!feasible(x)) continue;
            ++feas;
            const double v = f(x);
            if (v < info.f_star) {
                info.f_star = v;
                info.arg_min = x;
            }
        }
    }
    info.feasible_fraction = static_cast<double>(feas) / ((n + 1.0) * (n + 1.0));
    for (const ParamVector& c : candidates) {
        if (!feasible(c)) continue;
        const double v = f(c);
        if (v < info.f_star) {
            info.f_star = v;
            info.arg_min = c;
        }
    }
    return info;
}

// Exhaustive description of a 21x21 grid surface under its constraint.
struct GridInfo {
    int feasible_tiles;
    double f_star;
    std::vector<ParamVector> minima; // every argmin tile
    double feasible_fraction;
};

template <typename F, typename C>
GridInfo scan_grid(F f, C feasible) {
    GridInfo info{0, std::numeric_limits<double>::infinity(), {}, 0.0};
    ParamVector x(2);
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j) {
            x[0] = i;
            x[1] = j;
            if (!feasible(x)) continue;
            ++info.feasible_tiles;
            const double v = f(x[0], x[1]);
            if (v < info.f_star - 1e-12) {
                info.f_star = v;
                info.minima.clear();
                info.minima.push_back(x);
            } else if (std::abs(v - info.f_star) <= 1e-12) {
                info.minima.push_back(x);
            }
        }
    info.feasible_fraction = info.feasible_tiles / 441.0;
    return info;
}

} // namespace bench_detail

inline const std::vector<std::string>& surface_names() {
    static const std::vector<std::string> names = {
        "branin", "schwefel", "dejong", "ackley",
        "slope",  "sphere",   "michalewicz", "camel", "flow_reactor"};
    return names;
}

// Flow reactor emulator in native units: temperature in [100, 150] and two
// pump rates in [0, 200]. Yield saturates with total flow and peaks around
// T = 125; cost is dominated by the catalyst pump. Infeasible inputs are
// refused rather than evaluated.
inline std::pair<double, double> eval_flow_reactor(double t, double fc, double fs) {
    if (t < 100.0 || t > 150.0 || fc < 0.0 || fc > 200.0 || fs < 0.0 || fs > 200.0)
        throw BoundsError("flow reactor input outside its domain");
    if (!bench_detail::flow_feasible_native(fc, fs))
        throw FeasibilityError("flow reactor conditions violate the operating constraints");
    const double total = fc + fs;
    const double dt = (t - 125.0) / 20.0;
    const double yield = std::exp(-dt * dt) * total / (total + 20.0);
    const double cost = (fc * 168.8 + fs * 2.674) / 1e6;
    return {yield, cost};
}

inline BenchmarkSurface make_surface(const std::string& name) {
    using namespace bench_detail;
    BenchmarkSurface s;
    s.name = name;

    auto grid_21x21 = [&](ConstraintFn c) {
        s.space = ParameterSpace({ParameterDef::discrete_range("x0", 21),
                                  ParameterDef::discrete_range("x1", 21)},
                                 std::move(c));
        s.grid = true;
    };

    if (name == "branin") {
        s.space = ParameterSpace({ParameterDef::continuous("x0", -5.0, 10.0),
                                  ParameterDef::continuous("x1", 0.0, 15.0)},
                                 branin_feasible);
        s.evaluate = [space = s.space](const ParamVector& x) {
            const ParamVector raw = space.denormalize(x);
            return std::vector<double>{branin_native(raw[0], raw[1])};
        };
        static const ContinuousInfo info = scan_unit_square(
            [](const ParamVector& x) {
                return branin_native(-5.0 + 15.0 * x[0], 15.0 * x[1]);
            },
            branin_feasible,
            {{(-pi + 5.0) / 15.0, 12.275 / 15.0},
             {(pi + 5.0) / 15.0, 2.275 / 15.0},
             {(9.42478 + 5.0) / 15.0, 2.475 / 15.0}});
        s.space.feasible_fraction = info.feasible_fraction;
        s.optimum_value = info.f_star;
        s.optimum_locations = {info.arg_min};
    } else if (name == "schwefel") {
        s.space = ParameterSpace({ParameterDef::continuous("x0", -500.0, 500.0),
                                  ParameterDef::continuous("x1", -500.0, 500.0)},
                                 schwefel_feasible);
        s.evaluate = [space = s.space](const ParamVector& x) {
            const ParamVector raw = space.denormalize(x);
            return std::vector<double>{schwefel_native(raw[0], raw[1])};
        };
        static const ContinuousInfo info = scan_unit_square(
            [](const ParamVector& x) {
                return schwefel_native(-500.0 + 1000.0 * x[0], -500.0 + 1000.0 * x[1]);
            },
            schwefel_feasible, {{0.9209687, 0.9209687}});
        s.space.feasible_fraction = info.feasible_fraction;
        s.optimum_value = info.f_star;
        s.optimum_locations = {info.arg_min};
    } else if (name == "dejong") {
        s.space = ParameterSpace({ParameterDef::continuous("x0", -5.0, 5.0),
                                  ParameterDef::continuous("x1", -5.0, 5.0)},
                                 dejong_feasible);
        s.evaluate = [space = s.space](const ParamVector& x) {
            const ParamVector raw = space.denormalize(x);
            return std::vector<double>{raw[0] * raw[0] + raw[1] * raw[1]};
        };
        static const ContinuousInfo info = scan_unit_square(
            [](const ParamVector& x) {
                const double a = -5.0 + 10.0 * x[0], b = -5.0 + 10.0 * x[1];
                return a * a + b * b;
            },
            dejong_feasible, {{0.5, 0.5}, {0.55, 0.45}, {0.45, 0.55}});
        s.space.feasible_fraction = info.feasible_fraction;
        s.optimum_value = info.f_star;
        s.optimum_locations = {info.arg_min};
    } else if (name == "ackley") {
        s.space = ParameterSpace({ParameterDef::continuous("x0", -32.768, 32.768),
                                  ParameterDef::continuous("x1", -32.768, 32.768)},
                                 ackley_feasible);
        s.evaluate = [space = s.space](const ParamVector& x) {
            const ParamVector raw = space.denormalize(x);
            return std::vector<double>{ackley_native(raw[0], raw[1])};
        };
        static const ContinuousInfo info = scan_unit_square(
            [](const ParamVector& x) {
                return ackley_native(-32.768 + 65.536 * x[0], -32.768 + 65.536 * x[1]);
            },
            ackley_feasible, {{0.5, 0.5}});
        s.space.feasible_fraction = info.feasible_fraction;
        s.optimum_value = info.f_star;
        s.optimum_locations = {info.arg_min};
    } else if (name == "slope") {
        grid_21x21(slope_feasible);
        s.evaluate = [](const ParamVector& x) {
            return std::vector<double>{x[0] + x[1]};
        };
        static const GridInfo info = scan_grid(
            [](double a, double b) { return a + b; }, slope_feasible);
        s.space.feasible_fraction = info.feasible_fraction;
        s.optimum_value = info.f_star;
        s.optimum_locations = info.minima;
        s.feasible_tiles = info.feasible_tiles;
    } else if (name == "sphere") {
        grid_21x21(sphere_feasible);
        s.evaluate = [](const ParamVector& x) {
            return std::vector<double>{(x[0] - 10.0) * (x[0] - 10.0) +
                                       (x[1] - 10.0) * (x[1] - 10.0)};
        };
        static const GridInfo info = scan_grid(
            [](double a, double b) {
                return (a - 10.0) * (a - 10.0) + (b - 10.0) * (b - 10.0);
            },
            sphere_feasible);
        s.space.feasible_fraction = info.feasible_fraction;
        s.optimum_value = info.f_star;
        s.optimum_locations = info.minima;
        s.feasible_tiles = info.feasible_tiles;
    } else if (name == "michalewicz") {
        grid_21x21(michalewicz_feasible);
        s.evaluate = [](const ParamVector& x) {
            return std::vector<double>{michalewicz_grid(x[0], x[1])};
        };
        static const GridInfo info = scan_grid(michalewicz_grid, michalewicz_feasible);
        s.space.feasible_fraction = info.feasible_fraction;
        s.optimum_value = info.f_star;
        s.optimum_locations = info.minima;
        s.feasible_tiles = info.feasible_tiles;
    } else if (name == "camel") {
        grid_21x21(camel_feasible);
        s.evaluate = [](const ParamVector& x) {
            return std::vector<double>{camel_grid(x[0], x[1])};
        };
        static const GridInfo info = scan_grid(camel_grid, camel_feasible);
        s.space.feasible_fraction = info.feasible_fraction;
        s.optimum_value = info.f_star;
        s.optimum_locations = info.minima;
        s.feasible_tiles = info.feasible_tiles;
    } else if (name == "flow_reactor") {
        ParameterSpace space({ParameterDef::continuous("temperature", 100.0, 150.0),
                              ParameterDef::continuous("catalyst_flow", 0.0, 200.0),
                              ParameterDef::continuous("solvent_flow", 0.0, 200.0)});
        space.set_constraint([space](const ParamVector& x) {
            const ParamVector raw = space.denormalize(x);
            return bench_detail::flow_feasible_native(raw[1], raw[2]);
        });
        // deterministic coarse-grid volume estimate; T does not constrain
        static const double fraction = [] {
            constexpr int n = 400;
            std::size_t feas = 0;
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= n; ++j)
                    if (bench_detail::flow_feasible_native(200.0 * i / n, 200.0 * j / n))
                        ++feas;
            return static_cast<double>(feas) / ((n + 1.0) * (n + 1.0));
        }();
        space.feasible_fraction = fraction;
        s.space = space;
        s.objective_count = 2;
        s.evaluate = [space](const ParamVector& x) {
            const ParamVector raw = space.denormalize(x);
            auto [yield, cost] = eval_flow_reactor(raw[0], raw[1], raw[2]);
            return std::vector<double>{yield, cost};
        };
        s.default_objectives = {
            ObjectiveSpec{"yield", Goal::Maximize, 0.9},
            ObjectiveSpec{"cost", Goal::Minimize, std::nullopt},
        };
    } else {
        throw NameError("unknown surface '" + name + "'");
    }
    return s;
}

inline double eval_surface(const std::string& name, const ParamVector& internal_x) {
    return make_surface(name).evaluate_scalar(internal_x);
}

inline bool surface_feasible(const std::string& name, const ParamVector& internal_x) {
    return make_surface(name).is_feasible(internal_x);
}

// All feasible tiles of a grid surface, odometer order.
inline std::vector<ParamVector> feasible_grid(const std::string& name) {
    const BenchmarkSurface s = make_surface(name);
    if (!s.grid) throw KindError("surface '" + name + "' is not a grid surface");
    std::vector<ParamVector> out;
    for (ParamVector& x : enumerate_grid(s.space))
        if (s.space.is_feasible(x)) out.push_back(std::move(x));
    return out;
}

} // namespace cbo
