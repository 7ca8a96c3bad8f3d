#pragma once

// Tools around the deviation curve E(v_a): range sweeps, the slope m of E at
// a root, the local convergence criterion |1 - m/k| < 1, and empirical
// convergence-order estimation from a solve trace.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "shootbvp/shooting.hpp"

namespace shootbvp::analysis {

struct SweepRow {
    double v;
    std::optional<double> deviation;  // nullopt marks a blown-up shot
};

struct SweepTable {
    std::vector<SweepRow> rows;
};

/// E sampled at n equally spaced points of [v_lo, v_hi]; blowups are recorded
/// as markers, not dropped.
inline SweepTable sweep(const problems::Tpbvp& problem, double v_lo, double v_hi, std::size_t n,
                        const ivp::IntegratorConfig& cfg = {}) {
    if (!(v_lo < v_hi)) throw std::invalid_argument("sweep: v_lo must be below v_hi");
    if (n < 2) throw std::invalid_argument("sweep: need at least 2 points");

    SweepTable table;
    table.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = (i + 1 == n)
                             ? v_hi
                             : v_lo + (v_hi - v_lo) * (static_cast<double>(i) /
                                                       static_cast<double>(n - 1));
        const auto outcome = shooting::deviation(problem, v, cfg);
        if (const auto* dev = std::get_if<double>(&outcome))
            table.rows.push_back({v, *dev});
        else
            table.rows.push_back({v, std::nullopt});
    }
    return table;
}

// Header v,E,status; E empty on blowup rows.
inline void write_csv(const SweepTable& table, std::ostream& os) {
    os << "v,E,status\n";
    for (const SweepRow& row : table.rows) {
        os << detail::format_double(row.v) << ',';
        if (row.deviation)
            os << detail::format_double(*row.deviation) << ",ok\n";
        else
            os << ",blowup\n";
    }
}

/// Central finite-difference slope of E at a root, step max(1e-6, 1e-6|root|).
inline double root_slope(const problems::Tpbvp& problem, double root,
                         const ivp::IntegratorConfig& cfg = {}) {
    if (!std::isfinite(root)) throw std::invalid_argument("root_slope: root must be finite");
    const double h = std::max(1e-6, 1e-6 * std::fabs(root));
    const auto above = shooting::deviation(problem, root + h, cfg);
    const auto below = shooting::deviation(problem, root - h, cfg);
    if (std::holds_alternative<ivp::Blowup>(above) || std::holds_alternative<ivp::Blowup>(below))
        throw std::runtime_error("root_slope: shot blew up at a probe point");
    return (std::get<double>(above) - std::get<double>(below)) / (2.0 * h);
}

struct ConvergenceVerdict {
    double m;            // slope of E at the root
    double k;            // iteration slope
    double contraction;  // |1 - m/k|
    bool locally_convergent;
    bool quadratic;  // m = k up to 1e-6 relative
};

inline ConvergenceVerdict convergence_check(double m, double k) {
    if (k == 0.0 || !std::isfinite(k) || !std::isfinite(m))
        throw std::invalid_argument("convergence_check: m must be finite, k finite and nonzero");
    ConvergenceVerdict verdict{};
    verdict.m = m;
    verdict.k = k;
    verdict.contraction = std::fabs(1.0 - m / k);
    verdict.locally_convergent = verdict.contraction < 1.0;
    verdict.quadratic = std::fabs(m - k) <= 1e-6 * std::max(std::fabs(m), std::fabs(k));
    return verdict;
}

// Least-squares slope of log|e_{n+1}| against log|e_n| over the trace tail
// (last 8 usable iterates), clamped to [0.5, 3]. Early iterates are excluded
// on purpose; on problems with non-monotone E they pollute the fit.
inline double estimate_order(const std::vector<shooting::IterationRecord>& trace, double root) {
    std::vector<double> log_err;
    for (const shooting::IterationRecord& rec : trace) {
        if (!std::isfinite(rec.v)) continue;
        const double err = std::fabs(rec.v - root);
        if (err <= 0.0 || !std::isfinite(err)) continue;
        log_err.push_back(std::log(err));
    }
    constexpr std::size_t tail = 8;
    if (log_err.size() > tail)
        log_err.erase(log_err.begin(), log_err.end() - static_cast<std::ptrdiff_t>(tail));
    if (log_err.size() < 4)
        throw std::invalid_argument("estimate_order: too few usable records");

    const std::size_t pairs = log_err.size() - 1;
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        mean_x += log_err[i];
        mean_y += log_err[i + 1];
    }
    mean_x /= static_cast<double>(pairs);
    mean_y /= static_cast<double>(pairs);

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        const double dx = log_err[i] - mean_x;
        sxx += dx * dx;
        sxy += dx * (log_err[i + 1] - mean_y);
    }
    if (sxx == 0.0) throw std::invalid_argument("estimate_order: errors do not vary");
    return std::clamp(sxy / sxx, 0.5, 3.0);
}

}  // namespace shootbvp::analysis
