#pragma once

// Problem definitions: the Tpbvp type, three built-in benchmark problems, and
// a line-oriented `key = value` config loader for user problems.

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "shootbvp/expr.hpp"
#include "shootbvp/ivp.hpp"

namespace shootbvp::problems {

// Closed-form solution handle; built-ins only.
struct ExactSolution {
    double (*u)(double);
    double (*du)(double);
};

struct Tpbvp {
    std::string name;
    double a;
    double b;
    double u_a;
    double u_b;
    expr::Expression rhs;  // f(t, u, up)
    std::optional<ExactSolution> exact{};
};

inline void validate(const Tpbvp& p) {
    if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.u_a) ||
        !std::isfinite(p.u_b))
        throw std::invalid_argument("problem '" + p.name + "': a, b, u_a, u_b must be finite");
    if (!(p.b > p.a)) throw std::invalid_argument("problem '" + p.name + "': b must exceed a");
    if (p.exact) {
        if (std::fabs(p.exact->u(p.a) - p.u_a) > 1e-9 || std::fabs(p.exact->u(p.b) - p.u_b) > 1e-9)
            throw std::invalid_argument("problem '" + p.name +
                                        "': exact solution does not match boundary values");
    }
}

namespace builtin_detail {

inline double ex1_theta(double t) { return std::numbers::sqrt2 / 8.0 * t + 13.0 / 6.0; }

inline double ex1_u(double t) {
    const double tn = std::tan(ex1_theta(t));
    return std::log(0.5 * tn * tn + 0.5);
}

inline double ex1_du(double t) { return std::numbers::sqrt2 / 4.0 * std::tan(ex1_theta(t)); }

inline double ex2_u(double t) { return t / std::sqrt(1.0 + t * t); }

inline double ex2_du(double t) { return std::pow(1.0 + t * t, -1.5); }

}  // namespace builtin_detail

// Built-in problems: paper-ex1, paper-ex2, paper-ex3. Boundary values with a
// closed-form solution are computed from it at construction, not hard-coded.
inline Tpbvp builtin(std::string_view name) {
    using namespace builtin_detail;
    if (name == "paper-ex1") {
        const double a = -2.0 * std::numbers::sqrt2 / 3.0;
        const double b = 4.0 * std::numbers::sqrt2 / 3.0;
        Tpbvp p{std::string(name), a,
                b,                 ex1_u(a),
                ex1_u(b),          expr::parse("(1/8)*exp(u)"),
                ExactSolution{&ex1_u, &ex1_du}};
        validate(p);
        return p;
    }
    if (name == "paper-ex2") {
        Tpbvp p{std::string(name),
                1.0,
                2.0,
                ex2_u(1.0),  // 1/sqrt(2)
                ex2_u(2.0),  // 2/sqrt(5)
                expr::parse("-3*u^2*up/t"),
                ExactSolution{&ex2_u, &ex2_du}};
        validate(p);
        return p;
    }
    if (name == "paper-ex3") {
        Tpbvp p{std::string(name), 0.0, 5.0, 1.0, 2.0,
                expr::parse("-(1/50)*u*cosh(t*u/5 + u)")};
        validate(p);
        return p;
    }
    throw std::invalid_argument("unknown built-in problem '" + std::string(name) + "'");
}

namespace config_detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace config_detail

// Problem config format: `key = value` lines; keys name, a, b, u_a, u_b, rhs.
// rhs is a double-quoted expression string; `#` starts a comment; unknown and
// duplicate keys are rejected. Errors carry the offending line number.
inline Tpbvp load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open problem file '" + path.string() + "'");

    const std::string where = path.filename().string();
    auto fail = [&](int line, const std::string& msg) -> void {
        throw std::runtime_error(where + ":" + std::to_string(line) + ": " + msg);
    };

    std::optional<std::string> name;
    std::optional<double> a, b, u_a, u_b;
    std::optional<std::string> rhs_src;
    int rhs_line = 0;
    std::set<std::string> seen;

    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = config_detail::trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(lineno, "expected `key = value`");
        const std::string key{config_detail::trim(line.substr(0, eq))};
        const std::string_view value = config_detail::trim(line.substr(eq + 1));
        if (key.empty()) fail(lineno, "missing key before '='");
        if (!seen.insert(key).second) fail(lineno, "duplicate key '" + key + "'");

        auto number = [&]() -> double {
            const auto parsed = detail::parse_double(value);
            if (!parsed) fail(lineno, "invalid number '" + std::string(value) + "'");
            return *parsed;
        };
        if (key == "name") {
            name = std::string(value);
        } else if (key == "a") {
            a = number();
        } else if (key == "b") {
            b = number();
        } else if (key == "u_a") {
            u_a = number();
        } else if (key == "u_b") {
            u_b = number();
        } else if (key == "rhs") {
            if (value.size() < 2 || value.front() != '"' || value.back() != '"')
                fail(lineno, "rhs must be a double-quoted expression string");
            rhs_src = std::string(value.substr(1, value.size() - 2));
            rhs_line = lineno;
        } else {
            fail(lineno, "unknown key '" + key + "'");
        }
    }

    auto require = [&](bool present, const char* key) {
        if (!present)
            throw std::runtime_error(where + ": missing required key '" + std::string(key) + "'");
    };
    require(a.has_value(), "a");
    require(b.has_value(), "b");
    require(u_a.has_value(), "u_a");
    require(u_b.has_value(), "u_b");
    require(rhs_src.has_value(), "rhs");

    std::optional<expr::Expression> rhs;
    try {
        rhs = expr::parse(*rhs_src);
    } catch (const expr::ParseError& e) {
        fail(rhs_line, std::string("rhs: ") + e.what());
    }

    Tpbvp p{name.value_or(path.stem().string()), *a, *b, *u_a, *u_b, std::move(*rhs)};
    validate(p);
    return p;
}

// Inverse of load for problems without an exact handle; numeric fields are
// written in round-trip decimal form so reloading reproduces them exactly.
inline void save(const Tpbvp& p, std::ostream& os) {
    os << "name = " << p.name << '\n'
       << "a = " << detail::format_double(p.a) << '\n'
       << "b = " << detail::format_double(p.b) << '\n'
       << "u_a = " << detail::format_double(p.u_a) << '\n'
       << "u_b = " << detail::format_double(p.u_b) << '\n'
       << "rhs = \"" << expr::to_string(p.rhs) << "\"\n";
}

inline void save(const Tpbvp& p, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write problem file '" + path.string() + "'");
    save(p, out);
}

/// Largest node-wise |u_i - exact.u(t_i)|; requires an exact solution.
inline double exact_error(const ivp::Trajectory& traj, const Tpbvp& p) {
    if (!p.exact) throw std::invalid_argument("exact_error: problem has no exact solution");
    double worst = 0.0;
    for (const ivp::TrajectoryNode& node : traj.nodes)
        worst = std::max(worst, std::fabs(node.u - p.exact->u(node.t)));
    return worst;
}

}  // namespace shootbvp::problems
