#pragma once

// The deviation function E(v_a) = u(b; v_a) - u_b, the H1-seminorm projection
// of a shot onto the boundary conditions, and one iterative solver covering
// five shooting strategies. Every strategy takes the same update
//
//     v* = v - E(v) / k
//
// and differs only in the slope k: the projection method uses k = b - a (the
// derivative at a of the projected trajectory obeys exactly this update), the
// fixed-point method uses a user constant, Newton uses a finite-difference
// slope of E at the current iterate, constant-slope Newton freezes that slope
// at the starting guess, and secant uses the slope through the last two
// iterates.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "shootbvp/ivp.hpp"
#include "shootbvp/problems.hpp"

namespace shootbvp::shooting {

enum class MethodKind { Projection, FixedPoint, Newton, ConstantSlopeNewton, Secant };

struct MethodSpec {
    MethodKind kind = MethodKind::Projection;
    double fixed_slope = 1.0;                                // FixedPoint only
    std::optional<std::pair<double, double>> secant_seed{};  // default (v0 - 0.2, v0)
    double fd_step = 1e-6;  // relative step for finite-difference slopes

    static MethodSpec projection() { return {}; }
    static MethodSpec fixed_point(double slope = 1.0) {
        MethodSpec m{MethodKind::FixedPoint};
        m.fixed_slope = slope;
        return m;
    }
    static MethodSpec newton(double fd_step = 1e-6) {
        MethodSpec m{MethodKind::Newton};
        m.fd_step = fd_step;
        return m;
    }
    static MethodSpec constant_slope_newton(double fd_step = 1e-6) {
        MethodSpec m{MethodKind::ConstantSlopeNewton};
        m.fd_step = fd_step;
        return m;
    }
    static MethodSpec secant(double first, double second) {
        MethodSpec m{MethodKind::Secant};
        m.secant_seed = {first, second};
        return m;
    }
};

inline const char* method_name(MethodKind kind) {
    switch (kind) {
        case MethodKind::Projection: return "projection";
        case MethodKind::FixedPoint: return "fixed-point";
        case MethodKind::Newton: return "newton";
        case MethodKind::ConstantSlopeNewton: return "constant-slope-newton";
        default: return "secant";
    }
}

inline std::optional<MethodKind> method_from_name(std::string_view name) {
    if (name == "projection") return MethodKind::Projection;
    if (name == "fixed-point") return MethodKind::FixedPoint;
    if (name == "newton") return MethodKind::Newton;
    if (name == "constant-slope-newton") return MethodKind::ConstantSlopeNewton;
    if (name == "secant") return MethodKind::Secant;
    return std::nullopt;
}

struct IterationRecord {
    int index;
    double v;          // current initial-condition iterate
    double deviation;  // E(v); NaN when the shot blew up
    double slope;      // k used to step from this iterate; NaN when no step was taken
};

enum class SolveStatus { Converged, Diverged, MaxIterationsReached, SlopeDegenerate };

inline const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::Diverged: return "diverged";
        case SolveStatus::MaxIterationsReached: return "max-iterations";
        default: return "slope-degenerate";
    }
}

struct SolveResult {
    SolveStatus status = SolveStatus::Diverged;
    std::optional<double> root{};  // valid iff Converged
    int iterations = 0;            // update steps taken
    std::vector<IterationRecord> trace{};
    std::optional<ivp::Trajectory> final_trajectory{};  // valid iff Converged
};

using DeviationOutcome = std::variant<double, ivp::Blowup>;

/// E(v_a) = u(b; v_a) - u_b, or the Blowup of a divergent shot.
inline DeviationOutcome deviation(const problems::Tpbvp& problem, double v_a,
                                  const ivp::IntegratorConfig& cfg = {}) {
    auto shot = ivp::integrate(problem.rhs, problem.a, problem.b, problem.u_a, v_a, cfg);
    if (const auto* blowup = std::get_if<ivp::Blowup>(&shot)) return *blowup;
    return std::get<ivp::Trajectory>(shot).nodes.back().u - problem.u_b;
}

/// The shared iteration formula v* = v - E / k.
inline double update_step(double v, double deviation, double slope) {
    if (slope == 0.0 || !std::isfinite(slope))
        throw std::invalid_argument("update_step: slope must be finite and nonzero");
    return v - deviation / slope;
}

// Inputs a slope rule may need: the current iterate plus, for secant, the
// previous iterate and the deviations at both.
struct SlopeQuery {
    double v = 0.0;
    double deviation = 0.0;
    double prev_v = 0.0;
    double prev_deviation = 0.0;
};

struct SlopeFailure {
    enum class Kind { Degenerate, Blowup } kind;
};

using SlopeOutcome = std::variant<double, SlopeFailure>;

inline SlopeOutcome slope_for(const MethodSpec& method, const problems::Tpbvp& problem,
                              const SlopeQuery& query, const ivp::IntegratorConfig& cfg = {}) {
    double k = 0.0;
    switch (method.kind) {
        case MethodKind::Projection:
            k = problem.b - problem.a;
            break;
        case MethodKind::FixedPoint:
            k = method.fixed_slope;
            break;
        case MethodKind::Newton:
        case MethodKind::ConstantSlopeNewton: {
            const double h = std::max(method.fd_step, method.fd_step * std::fabs(query.v));
            const auto above = deviation(problem, query.v + h, cfg);
            const auto below = deviation(problem, query.v - h, cfg);
            if (std::holds_alternative<ivp::Blowup>(above) ||
                std::holds_alternative<ivp::Blowup>(below))
                return SlopeFailure{SlopeFailure::Kind::Blowup};
            k = (std::get<double>(above) - std::get<double>(below)) / (2.0 * h);
            break;
        }
        case MethodKind::Secant:
            k = (query.deviation - query.prev_deviation) / (query.v - query.prev_v);
            break;
    }
    if (!std::isfinite(k) || k == 0.0) return SlopeFailure{SlopeFailure::Kind::Degenerate};
    return k;
}

namespace solve_detail {

struct Shot {
    double deviation;
    ivp::Trajectory trajectory;
};

inline std::optional<Shot> shoot(const problems::Tpbvp& problem, double v,
                                 const ivp::IntegratorConfig& cfg) {
    auto outcome = ivp::integrate(problem.rhs, problem.a, problem.b, problem.u_a, v, cfg);
    if (std::holds_alternative<ivp::Blowup>(outcome)) return std::nullopt;
    auto traj = std::get<ivp::Trajectory>(std::move(outcome));
    const double dev = traj.nodes.back().u - problem.u_b;
    return Shot{dev, std::move(traj)};
}

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

inline SolveResult solve_secant(const problems::Tpbvp& problem, const MethodSpec& method,
                                double v0, double tol, int max_iters,
                                const ivp::IntegratorConfig& cfg) {
    const auto [seed0, seed1] = method.secant_seed.value_or(std::pair{v0 - 0.2, v0});
    if (!std::isfinite(seed0) || !std::isfinite(seed1) || seed0 == seed1)
        throw std::invalid_argument("solve: secant seeds must be distinct finite values");

    SolveResult res;
    auto converge = [&](double v, Shot&& shot) {
        res.status = SolveStatus::Converged;
        res.root = v;
        res.final_trajectory = std::move(shot.trajectory);
    };

    double prev_v = seed0;
    double prev_dev;
    {
        auto shot = shoot(problem, seed0, cfg);
        if (!shot) {
            res.trace.push_back({0, seed0, nan, nan});
            res.status = SolveStatus::Diverged;
            return res;
        }
        prev_dev = shot->deviation;
        res.trace.push_back({0, seed0, prev_dev, nan});
        if (std::fabs(prev_dev) < tol) {
            converge(seed0, std::move(*shot));
            return res;
        }
    }

    double cur_v = seed1;
    double cur_dev;
    {
        auto shot = shoot(problem, seed1, cfg);
        if (!shot) {
            res.trace.push_back({1, seed1, nan, nan});
            res.status = SolveStatus::Diverged;
            return res;
        }
        cur_dev = shot->deviation;
        if (std::fabs(cur_dev) < tol) {
            res.trace.push_back({1, seed1, cur_dev, nan});
            converge(seed1, std::move(*shot));
            return res;
        }
    }

    int index = 1;
    while (true) {
        if (res.iterations == max_iters) {
            res.trace.push_back({index, cur_v, cur_dev, nan});
            res.status = SolveStatus::MaxIterationsReached;
            return res;
        }
        const double k = (cur_dev - prev_dev) / (cur_v - prev_v);
        if (!std::isfinite(k) || k == 0.0) {
            res.trace.push_back({index, cur_v, cur_dev, nan});
            res.status = SolveStatus::SlopeDegenerate;
            return res;
        }
        res.trace.push_back({index, cur_v, cur_dev, k});
        const double next_v = cur_v - cur_dev / k;
        ++res.iterations;
        ++index;
        if (!std::isfinite(next_v) || std::fabs(next_v) > cfg.guard) {
            res.status = SolveStatus::Diverged;
            return res;
        }
        auto shot = shoot(problem, next_v, cfg);
        if (!shot) {
            res.trace.push_back({index, next_v, nan, nan});
            res.status = SolveStatus::Diverged;
            return res;
        }
        prev_v = cur_v;
        prev_dev = cur_dev;
        cur_v = next_v;
        cur_dev = shot->deviation;
        if (std::fabs(cur_dev) < tol) {
            res.trace.push_back({index, cur_v, cur_dev, nan});
            converge(cur_v, std::move(*shot));
            return res;
        }
    }
}

}  // namespace solve_detail

// Iterates v <- v - E(v)/k until |E| < tol. Divergence (a blown-up shot,
// non-finite E, or |v| beyond cfg.guard) and a degenerate slope are reported
// as statuses, not exceptions. The trace records every iterate including the
// starting guess; secant seeds occupy the first two records.
inline SolveResult solve(const problems::Tpbvp& problem, const MethodSpec& method, double v0,
                         double tol, int max_iters = 100, const ivp::IntegratorConfig& cfg = {}) {
    if (!(tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");
    if (max_iters < 1) throw std::invalid_argument("solve: max_iters must be >= 1");
    if (!std::isfinite(v0)) throw std::invalid_argument("solve: v0 must be finite");

    using solve_detail::nan;
    if (method.kind == MethodKind::Secant)
        return solve_detail::solve_secant(problem, method, v0, tol, max_iters, cfg);

    SolveResult res;
    std::optional<double> frozen;  // ConstantSlopeNewton slope, fixed at the starting guess
    double v = v0;
    int index = 0;

    // slope attached to a record no update is taken from; free for constant-k
    // methods, NaN where it would cost extra shots
    auto resting_slope = [&]() -> double {
        switch (method.kind) {
            case MethodKind::Projection: return problem.b - problem.a;
            case MethodKind::FixedPoint: return method.fixed_slope;
            case MethodKind::ConstantSlopeNewton: return frozen ? *frozen : nan;
            default: return nan;
        }
    };

    while (true) {
        auto shot = solve_detail::shoot(problem, v, cfg);
        if (!shot) {
            res.trace.push_back({index, v, nan, nan});
            res.status = SolveStatus::Diverged;
            return res;
        }
        const double dev = shot->deviation;

        if (std::fabs(dev) < tol) {
            res.trace.push_back({index, v, dev, resting_slope()});
            res.status = SolveStatus::Converged;
            res.root = v;
            res.final_trajectory = std::move(shot->trajectory);
            return res;
        }
        if (res.iterations == max_iters) {
            res.trace.push_back({index, v, dev, resting_slope()});
            res.status = SolveStatus::MaxIterationsReached;
            return res;
        }

        double k;
        if (method.kind == MethodKind::ConstantSlopeNewton && frozen) {
            k = *frozen;
        } else if (method.kind == MethodKind::Newton ||
                   method.kind == MethodKind::ConstantSlopeNewton) {
            const auto outcome = slope_for(method, problem, SlopeQuery{.v = v}, cfg);
            if (const auto* failure = std::get_if<SlopeFailure>(&outcome)) {
                res.trace.push_back({index, v, dev, nan});
                res.status = failure->kind == SlopeFailure::Kind::Blowup
                                 ? SolveStatus::Diverged
                                 : SolveStatus::SlopeDegenerate;
                return res;
            }
            k = std::get<double>(outcome);
            if (method.kind == MethodKind::ConstantSlopeNewton) frozen = k;
        } else {
            k = method.kind == MethodKind::Projection ? problem.b - problem.a
                                                      : method.fixed_slope;
        }
        if (!std::isfinite(k) || k == 0.0) {
            res.trace.push_back({index, v, dev, nan});
            res.status = SolveStatus::SlopeDegenerate;
            return res;
        }

        res.trace.push_back({index, v, dev, k});
        v -= dev / k;
        ++res.iterations;
        ++index;
        if (!std::isfinite(v) || std::fabs(v) > cfg.guard) {
            res.status = SolveStatus::Diverged;
            return res;
        }
    }
}

// The projection of a shot onto the boundary conditions u*(a) = u(a),
// u*(b) = u_b: the unique curve with the same second derivative satisfying
// both conditions,
//
//     u*(t) = u(t) - E (t - a)/(b - a),   u*'(t) = u'(t) - E/(b - a).
//
// Among all curves meeting the boundary conditions it minimizes the
// integral of (u*' - u')^2, and u*'(a) equals update_step(v_a, E, b - a).
inline ivp::Trajectory project_trajectory(const ivp::Trajectory& traj, double u_b) {
    if (traj.nodes.size() < 2)
        throw std::invalid_argument("project_trajectory: trajectory incomplete");
    const double dev = traj.nodes.back().u - u_b;
    const double width = traj.b - traj.a;
    const double slope_shift = dev / width;

    ivp::Trajectory projected = traj;
    for (ivp::TrajectoryNode& node : projected.nodes) {
        node.u -= dev * ((node.t - traj.a) / width);
        node.v -= slope_shift;
    }
    return projected;
}

/// Integral of (u*' - u')^2 over [a, b] for the projected trajectory;
/// closed form E^2/(b - a).
inline double projection_seminorm(const ivp::Trajectory& traj, double u_b) {
    if (traj.nodes.size() < 2)
        throw std::invalid_argument("projection_seminorm: trajectory incomplete");
    const double dev = traj.nodes.back().u - u_b;
    return dev * dev / (traj.b - traj.a);
}

// JSON export: {status, root, iterations, trace:[{index, v, E, k}...]}.
// Non-finite numbers become null.
inline nlohmann::json to_json(const SolveResult& result) {
    auto number_or_null = [](double x) {
        return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json();
    };
    nlohmann::json j;
    j["status"] = status_name(result.status);
    j["root"] = result.root ? nlohmann::json(*result.root) : nlohmann::json();
    j["iterations"] = result.iterations;
    nlohmann::json trace = nlohmann::json::array();
    for (const IterationRecord& rec : result.trace)
        trace.push_back({{"index", rec.index},
                         {"v", number_or_null(rec.v)},
                         {"E", number_or_null(rec.deviation)},
                         {"k", number_or_null(rec.slope)}});
    j["trace"] = std::move(trace);
    return j;
}

inline void write_trace_json(const SolveResult& result, std::ostream& os) {
    os << to_json(result).dump(2) << '\n';
}

}  // namespace shootbvp::shooting
