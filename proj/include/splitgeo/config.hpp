#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "metric.hpp"
#include "potential.hpp"

namespace splitgeo {

enum class Command {
    MetricInfo,
    Integrate,
    VerifyClosedForm,
    FindIntegrals,
    LiouvilleCheck,
    MaxwellGate,
};

struct PotentialConfig {
    std::string kind;           // constant | linear | tanh_cubic | liouville_builtin
    std::vector<double> params; // meaning per kind
    std::string form = "real_wave"; // elliptic tanh_cubic only
};

struct MetricConfig {
    PotentialConfig alpha;
    PotentialConfig beta;
    double lambda = 0.0;
};

struct MetricInfoCmd {
    MetricConfig metric;
    Vec4 point{};
};

struct IntegrateCmd {
    MetricConfig metric;
    Vec4 x0{};
    Vec4 init{}; // velocities or covariant momenta
    bool init_is_momentum = false;
    std::array<double, 2> span{0.0, 1.0};
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    std::string csv_path = "trajectory.csv";
};

struct VerifyClosedFormCmd {
    std::string family; // hyperbolic_linear | hyperbolic_tanh | elliptic_linear | elliptic_tanh
    std::vector<double> potential;
    std::vector<double> data;
    std::optional<std::array<double, 4>> fit_initial;
    std::array<double, 2> span{0.0, 1.0};
    int samples = 21;
    double root_tol = 1e-10;
    double max_error = 1e-6;
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
};

struct FindIntegralsCmd {
    PotentialConfig pot;
    Block block = Block::Hyperbolic;
    int degree = 1;
    int basis_degree = 3;
    std::optional<std::array<double, 2>> basis_tanh;
    std::array<double, 4> rect{-1.0, 1.0, -1.0, 1.0};
    int grid = 7;
    double svd_tol = 1e-10;
    std::uint64_t seed = 42;
};

struct LiouvilleCheckCmd {
    PotentialConfig pot;
    Block block = Block::Hyperbolic;
    double coefficient = 0.0;
    EllipticSign sign = EllipticSign::Minus;
    std::array<double, 4> rect{-1.0, 1.0, -1.0, 1.0};
    int grid = 10;
    std::optional<double> max_residual;
};

struct MaxwellGateCmd {
    double k = 1.0;
    double c = 1.0;
    double lambda = 0.0;
    double J = 0.0;
    double I1 = 0.0;
    bool symmetric_k2 = false;
};

struct RunConfig {
    Command command;
    std::variant<MetricInfoCmd, IntegrateCmd, VerifyClosedFormCmd, FindIntegralsCmd,
                 LiouvilleCheckCmd, MaxwellGateCmd>
        cmd;
    std::string report_path = "report.json";
    // Key/value pairs in file order, echoed verbatim into reports.
    std::vector<std::pair<std::string, std::string>> echo;
};

namespace cfg_detail {

struct Entry {
    std::string value;
    int line;
    bool used = false;
};

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw ValidationError("line " + std::to_string(line) + ": key '" + key +
                              "' expects a number, got '" + v + "'");
    }
}

inline std::vector<double> to_doubles(const std::string& v, const std::string& key, int line) {
    std::vector<double> out;
    std::string token;
    std::istringstream iss(v);
    while (std::getline(iss, token, ',')) {
        token = trim(token);
        if (token.empty()) continue;
        out.push_back(to_double(token, key, line));
    }
    if (out.empty())
        throw ValidationError("line " + std::to_string(line) + ": key '" + key +
                              "' expects a comma-separated number list");
    return out;
}

class Table {
  public:
    explicit Table(const std::string& text) {
        std::istringstream iss(text);
        std::string raw;
        int line = 0;
        while (std::getline(iss, raw)) {
            ++line;
            const std::size_t hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            const std::string s = trim(raw);
            if (s.empty()) continue;
            const std::size_t eq = s.find('=');
            if (eq == std::string::npos)
                throw ParseError("line " + std::to_string(line) + ": expected 'key = value'");
            const std::string key = trim(s.substr(0, eq));
            const std::string value = trim(s.substr(eq + 1));
            if (key.empty())
                throw ParseError("line " + std::to_string(line) + ": empty key");
            if (value.empty())
                throw ParseError("line " + std::to_string(line) + ": empty value for key '" +
                                 key + "'");
            if (entries_.count(key))
                throw ParseError("line " + std::to_string(line) + ": duplicate key '" + key +
                                 "'");
            entries_[key] = Entry{value, line};
            order_.emplace_back(key, value);
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string require(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw ValidationError("missing required key '" + key + "'");
        it->second.used = true;
        return it->second.value;
    }

    std::optional<std::string> optional(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    int line_of(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    double number(const std::string& key) { return to_double(require(key), key, line_of(key)); }

    double number_or(const std::string& key, double fallback) {
        auto v = optional(key);
        return v ? to_double(*v, key, line_of(key)) : fallback;
    }

    std::vector<double> numbers(const std::string& key, std::size_t n = 0) {
        auto vals = to_doubles(require(key), key, line_of(key));
        if (n != 0 && vals.size() != n)
            throw ValidationError("line " + std::to_string(line_of(key)) + ": key '" + key +
                                  "' expects " + std::to_string(n) + " numbers");
        return vals;
    }

    // Any key never consumed by the active command is unknown.
    void reject_unused() const {
        for (const auto& [key, entry] : entries_)
            if (!entry.used)
                throw ParseError("line " + std::to_string(entry.line) + ": unknown key '" +
                                 key + "'");
    }

    const std::vector<std::pair<std::string, std::string>>& order() const { return order_; }

  private:
    std::map<std::string, Entry> entries_;
    std::vector<std::pair<std::string, std::string>> order_;
};

inline void check_tol(double value, const char* which) {
    if (value > 1e-2)
        throw ValidationError(std::string(which) + " tolerance above 1e-2");
    if (value < 1e-14)
        throw ValidationError(std::string(which) + " tolerance below 1e-14");
}

inline PotentialConfig read_potential(Table& t, const std::string& prefix) {
    PotentialConfig pc;
    pc.kind = t.require(prefix + ".kind");
    static const std::set<std::string> kinds = {"constant", "linear", "tanh_cubic",
                                                "liouville_builtin"};
    if (!kinds.count(pc.kind))
        throw ValidationError("line " + std::to_string(t.line_of(prefix + ".kind")) +
                              ": unknown potential kind '" + pc.kind + "'");
    pc.params = t.numbers(prefix + ".params");
    const std::size_t need = pc.kind == "constant"            ? 1
                             : pc.kind == "linear"            ? 3
                             : pc.kind == "liouville_builtin" ? 1
                                                              : 6;
    if (pc.params.size() != need)
        throw ValidationError("potential kind '" + pc.kind + "' expects " +
                              std::to_string(need) + " parameters");
    if (auto f = t.optional(prefix + ".form")) {
        if (*f != "real_wave" && *f != "complex_re" && *f != "complex_im")
            throw ValidationError("unknown tanh form '" + *f + "'");
        pc.form = *f;
    }
    return pc;
}

inline MetricConfig read_metric(Table& t) {
    MetricConfig mc;
    mc.alpha = read_potential(t, "metric.alpha");
    mc.beta = read_potential(t, "metric.beta");
    mc.lambda = t.number_or("metric.lambda", 0.0);
    return mc;
}

inline Vec4 read_vec4(Table& t, const std::string& key) {
    const auto v = t.numbers(key, 4);
    return {v[0], v[1], v[2], v[3]};
}

} // namespace cfg_detail

// Builds a Potential from its config description.
inline Potential make_potential(const PotentialConfig& pc, Block block) {
    if (pc.kind == "constant") return Potential::constant(block, pc.params[0]);
    if (pc.kind == "linear")
        return Potential::linear(block, pc.params[0], pc.params[1], pc.params[2]);
    if (pc.kind == "liouville_builtin") return Potential::liouville_builtin(block, pc.params[0]);
    EllipticTanhForm form = EllipticTanhForm::RealWave;
    if (pc.form == "complex_re") form = EllipticTanhForm::ComplexRe;
    if (pc.form == "complex_im") form = EllipticTanhForm::ComplexIm;
    return Potential::tanh_cubic(block, pc.params[0], pc.params[1], pc.params[2], pc.params[3],
                                 pc.params[4], pc.params[5], form);
}

// Parses and validates the flat key-value config format.  Throws ParseError
// for syntax problems and unknown keys (naming key and line) and
// ValidationError for out-of-range or missing values.
inline RunConfig parse_config(const std::string& text) {
    using namespace cfg_detail;
    Table t(text);
    RunConfig rc;
    const std::string cmd = t.require("command");
    if (auto rp = t.optional("output.report")) rc.report_path = *rp;

    if (cmd == "metric-info") {
        rc.command = Command::MetricInfo;
        MetricInfoCmd c;
        c.metric = read_metric(t);
        c.point = read_vec4(t, "info.point");
        rc.cmd = c;
    } else if (cmd == "integrate") {
        rc.command = Command::Integrate;
        IntegrateCmd c;
        c.metric = read_metric(t);
        c.x0 = read_vec4(t, "integrate.x0");
        const bool has_v = t.has("integrate.v0"), has_p = t.has("integrate.p0");
        if (has_v == has_p)
            throw ValidationError("integrate requires exactly one of integrate.v0 / integrate.p0");
        c.init = read_vec4(t, has_v ? "integrate.v0" : "integrate.p0");
        c.init_is_momentum = has_p;
        const auto span = t.numbers("integrate.s_span", 2);
        c.span = {span[0], span[1]};
        if (c.span[0] == c.span[1]) throw ValidationError("integrate.s_span is degenerate");
        c.abs_tol = t.number_or("integrate.abs_tol", 1e-12);
        c.rel_tol = t.number_or("integrate.rel_tol", 1e-10);
        check_tol(c.abs_tol, "abs");
        check_tol(c.rel_tol, "rel");
        if (auto p = t.optional("output.csv")) c.csv_path = *p;
        rc.cmd = c;
    } else if (cmd == "verify-closed-form") {
        rc.command = Command::VerifyClosedForm;
        VerifyClosedFormCmd c;
        c.family = t.require("closed_form.family");
        static const std::set<std::string> fams = {"hyperbolic_linear", "hyperbolic_tanh",
                                                   "elliptic_linear", "elliptic_tanh"};
        if (!fams.count(c.family)) throw ValidationError("unknown closed_form.family '" + c.family + "'");
        c.potential = t.numbers("closed_form.potential");
        const bool linear_fam = c.family == "hyperbolic_linear" || c.family == "elliptic_linear";
        if (c.potential.size() != (linear_fam ? 3u : 6u))
            throw ValidationError("closed_form.potential has the wrong arity for " + c.family);
        if (c.family == "hyperbolic_linear") {
            c.data = t.numbers("closed_form.data", 4); // D, E, F, G
        } else if (c.family == "hyperbolic_tanh") {
            c.data = t.numbers("closed_form.data", 3); // G, H, J
        } else {
            const auto fi = t.numbers("closed_form.fit_initial", 4);
            c.fit_initial = std::array<double, 4>{fi[0], fi[1], fi[2], fi[3]};
        }
        if (t.has("closed_form.s_span")) {
            const auto span = t.numbers("closed_form.s_span", 2);
            c.span = {span[0], span[1]};
        }
        c.samples = static_cast<int>(t.number_or("closed_form.samples", 21));
        if (c.samples < 2) throw ValidationError("closed_form.samples must be >= 2");
        c.root_tol = t.number_or("closed_form.root_tol", 1e-10);
        if (!(c.root_tol >= 1e-14 && c.root_tol <= 1e-4))
            throw ValidationError("root tolerance outside [1e-14, 1e-4]");
        c.max_error = t.number_or("verify.max_error", 1e-6);
        c.abs_tol = t.number_or("verify.abs_tol", 1e-12);
        c.rel_tol = t.number_or("verify.rel_tol", 1e-10);
        check_tol(c.abs_tol, "abs");
        check_tol(c.rel_tol, "rel");
        rc.cmd = c;
    } else if (cmd == "find-integrals") {
        rc.command = Command::FindIntegrals;
        FindIntegralsCmd c;
        const std::string block = t.require("integrals.block");
        if (block != "hyperbolic" && block != "elliptic")
            throw ValidationError("integrals.block must be hyperbolic or elliptic");
        c.block = block == "hyperbolic" ? Block::Hyperbolic : Block::Elliptic;
        c.pot = read_potential(t, "integrals.potential");
        c.degree = static_cast<int>(t.number("integrals.degree"));
        if (c.degree < 1 || c.degree > 8)
            throw ValidationError("integrals.degree must lie in [1, 8]");
        c.basis_degree = static_cast<int>(t.number_or("integrals.basis.degree", 3));
        if (c.basis_degree < 0 || c.basis_degree > 8)
            throw ValidationError("integrals.basis.degree must lie in [0, 8]");
        if (t.has("integrals.basis.tanh")) {
            const auto ab = t.numbers("integrals.basis.tanh", 2);
            c.basis_tanh = std::array<double, 2>{ab[0], ab[1]};
        }
        const auto rect = t.numbers("integrals.rect", 4);
        c.rect = {rect[0], rect[1], rect[2], rect[3]};
        c.grid = static_cast<int>(t.number_or("integrals.grid", 7));
        if (c.grid < 2 || c.grid > 64) throw ValidationError("integrals.grid must lie in [2, 64]");
        c.svd_tol = t.number_or("integrals.svd_tol", 1e-10);
        if (!(c.svd_tol > 0.0 && c.svd_tol <= 1e-2))
            throw ValidationError("integrals.svd_tol outside (0, 1e-2]");
        c.seed = static_cast<std::uint64_t>(t.number_or("integrals.seed", 42));
        rc.cmd = c;
    } else if (cmd == "liouville-check") {
        rc.command = Command::LiouvilleCheck;
        LiouvilleCheckCmd c;
        const std::string block = t.require("check.block");
        if (block != "hyperbolic" && block != "elliptic")
            throw ValidationError("check.block must be hyperbolic or elliptic");
        c.block = block == "hyperbolic" ? Block::Hyperbolic : Block::Elliptic;
        c.pot = read_potential(t, "check.potential");
        c.coefficient = t.number("check.coefficient");
        if (auto s = t.optional("check.elliptic_sign")) {
            if (*s == "plus")
                c.sign = EllipticSign::Plus;
            else if (*s == "minus")
                c.sign = EllipticSign::Minus;
            else
                throw ValidationError("check.elliptic_sign must be minus or plus");
        }
        const auto rect = t.numbers("check.rect", 4);
        c.rect = {rect[0], rect[1], rect[2], rect[3]};
        c.grid = static_cast<int>(t.number_or("check.grid", 10));
        if (c.grid < 2 || c.grid > 256) throw ValidationError("check.grid must lie in [2, 256]");
        if (t.has("check.max_residual")) c.max_residual = t.number("check.max_residual");
        rc.cmd = c;
    } else if (cmd == "maxwell-gate") {
        rc.command = Command::MaxwellGate;
        MaxwellGateCmd c;
        c.k = t.number_or("maxwell.k", 1.0);
        c.c = t.number("maxwell.c");
        if (!(c.c > 0.0)) throw ValidationError("maxwell.c must be positive");
        c.lambda = t.number_or("maxwell.lambda", 0.0);
        c.J = t.number("maxwell.J");
        c.I1 = t.number("maxwell.I1");
        if (auto b = t.optional("maxwell.symmetric_k2")) {
            if (*b == "true")
                c.symmetric_k2 = true;
            else if (*b == "false")
                c.symmetric_k2 = false;
            else
                throw ValidationError("maxwell.symmetric_k2 must be true or false");
        }
        rc.cmd = c;
    } else {
        throw ValidationError("unknown command '" + cmd + "'");
    }

    t.reject_unused();
    rc.echo = t.order();
    return rc;
}

} // namespace splitgeo
