#pragma once

// Fixed-step RK4 integration of u'' = f(t, u, u') as the first-order system
// (u, v)' = (v, f(t, u, v)). The grid is deterministic, so repeated runs are
// bitwise identical and iteration counts are reproducible. A shot whose state
// goes non-finite or past the guard is reported as a Blowup, which callers
// treat as a divergent outcome rather than an error.

#include <cmath>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "shootbvp/detail/format.hpp"
#include "shootbvp/expr.hpp"

namespace shootbvp::ivp {

struct IntegratorConfig {
    std::size_t steps = 1000;
    double guard = 1e8;
};

struct TrajectoryNode {
    double t;
    double u;
    double v;  // v approximates u'(t)
};

// Uniform grid over [a, b]: steps + 1 nodes, first node at a, last at b.
struct Trajectory {
    double a = 0.0;
    double b = 0.0;
    std::vector<TrajectoryNode> nodes{};
};

struct Blowup {
    std::size_t step;  // index of the step that produced the bad state
};

using IntegrateOutcome = std::variant<Trajectory, Blowup>;

inline IntegrateOutcome integrate(const expr::Expression& rhs, double a, double b, double u_a,
                                  double v_a, const IntegratorConfig& cfg = {}) {
    if (!(b > a)) throw std::invalid_argument("integrate: b must exceed a");
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(u_a) || !std::isfinite(v_a))
        throw std::invalid_argument("integrate: inputs must be finite");
    if (cfg.steps < 1) throw std::invalid_argument("integrate: steps must be >= 1");
    if (!(cfg.guard > 0.0)) throw std::invalid_argument("integrate: guard must be positive");

    const std::size_t n = cfg.steps;
    const double h = (b - a) / static_cast<double>(n);

    Trajectory traj;
    traj.a = a;
    traj.b = b;
    traj.nodes.reserve(n + 1);

    double u = u_a;
    double v = v_a;
    traj.nodes.push_back({a, u, v});

    for (std::size_t i = 0; i < n; ++i) {
        const double t = a + h * static_cast<double>(i);
        const double tm = t + 0.5 * h;
        const double te = (i + 1 == n) ? b : t + h;

        const double k1u = v;
        const double k1v = evaluate(rhs, t, u, v);
        const double k2u = v + 0.5 * h * k1v;
        const double k2v = evaluate(rhs, tm, u + 0.5 * h * k1u, k2u);
        const double k3u = v + 0.5 * h * k2v;
        const double k3v = evaluate(rhs, tm, u + 0.5 * h * k2u, k3u);
        const double k4u = v + h * k3v;
        const double k4v = evaluate(rhs, te, u + h * k3u, k4u);

        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);

        if (!std::isfinite(u) || !std::isfinite(v) || std::fabs(u) > cfg.guard ||
            std::fabs(v) > cfg.guard)
            return Blowup{i};

        traj.nodes.push_back({te, u, v});
    }
    return traj;
}

/// (u(b), u'(b)) of a completed trajectory.
inline std::pair<double, double> end_state(const Trajectory& traj) {
    if (traj.nodes.empty()) throw std::invalid_argument("end_state: empty trajectory");
    const TrajectoryNode& last = traj.nodes.back();
    return {last.u, last.v};
}

// Cubic Hermite interpolation on the containing step, using the stored value
// and derivative at both ends. Exact at the nodes.
inline std::pair<double, double> sample(const Trajectory& traj, double t) {
    if (traj.nodes.size() < 2) throw std::invalid_argument("sample: trajectory incomplete");
    if (!(t >= traj.a && t <= traj.b)) throw std::out_of_range("sample: t outside [a, b]");

    const std::size_t last = traj.nodes.size() - 1;
    const double h = (traj.b - traj.a) / static_cast<double>(last);
    double raw = std::floor((t - traj.a) / h);
    if (raw < 0.0) raw = 0.0;
    std::size_t i = static_cast<std::size_t>(raw);
    if (i > last - 1) i = last - 1;
    while (i > 0 && t < traj.nodes[i].t) --i;
    while (i + 1 < last && t >= traj.nodes[i + 1].t) ++i;

    const TrajectoryNode& n0 = traj.nodes[i];
    const TrajectoryNode& n1 = traj.nodes[i + 1];
    if (t == n0.t) return {n0.u, n0.v};
    if (t == n1.t) return {n1.u, n1.v};

    const double dt = n1.t - n0.t;
    const double s = (t - n0.t) / dt;
    const double s2 = s * s;
    const double s3 = s2 * s;

    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    const double u = h00 * n0.u + h10 * dt * n0.v + h01 * n1.u + h11 * dt * n1.v;

    const double d00 = (6.0 * s2 - 6.0 * s) / dt;
    const double d10 = 3.0 * s2 - 4.0 * s + 1.0;
    const double d01 = (-6.0 * s2 + 6.0 * s) / dt;
    const double d11 = 3.0 * s2 - 2.0 * s;
    const double up = d00 * n0.u + d10 * n0.v + d01 * n1.u + d11 * n1.v;

    return {u, up};
}

// Header t,u,up; one row per node; values round-trip through text exactly.
inline void write_csv(const Trajectory& traj, std::ostream& os) {
    os << "t,u,up\n";
    for (const TrajectoryNode& node : traj.nodes)
        os << detail::format_double(node.t) << ',' << detail::format_double(node.u) << ','
           << detail::format_double(node.v) << '\n';
}

}  // namespace shootbvp::ivp
