#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "closed_form.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "first_integrals.hpp"
#include "geodesic.hpp"
#include "maxwell.hpp"
#include "metric.hpp"
#include "version.hpp"

namespace splitgeo {

using ordered_json = nlohmann::ordered_json;

namespace run_detail {

inline const char* command_name(Command c) {
    switch (c) {
        case Command::MetricInfo: return "metric-info";
        case Command::Integrate: return "integrate";
        case Command::VerifyClosedForm: return "verify-closed-form";
        case Command::FindIntegrals: return "find-integrals";
        case Command::LiouvilleCheck: return "liouville-check";
        case Command::MaxwellGate: return "maxwell-gate";
    }
    return "unknown";
}

inline SplitMetric build_metric(const MetricConfig& mc) {
    return SplitMetric(make_potential(mc.alpha, Block::Hyperbolic),
                       make_potential(mc.beta, Block::Elliptic), mc.lambda);
}

inline ordered_json base_report(const RunConfig& rc, const char* command) {
    ordered_json rep;
    rep["version"] = kVersion;
    rep["command"] = command;
    ordered_json inputs = ordered_json::object();
    for (const auto& [k, v] : rc.echo) inputs[k] = v;
    rep["inputs"] = inputs;
    rep["results"] = ordered_json::object();
    rep["status"] = "ok";
    rep["diagnostics"] = ordered_json::array();
    return rep;
}

inline void write_report(const ordered_json& rep, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write report to " + path.string());
    os << rep.dump(2) << '\n';
}

inline int finish(ordered_json& rep, const std::filesystem::path& out_dir,
                  const std::string& report_path, int code) {
    if (code != 0) rep["status"] = "verification_failed";
    write_report(rep, out_dir / report_path);
    return code;
}

inline int run_metric_info(const RunConfig& rc, const MetricInfoCmd& c,
                           const std::filesystem::path& out_dir) {
    ordered_json rep = base_report(rc, "metric-info");
    const auto metric = build_metric(c.metric);
    const auto comps = metric.components(c.point);
    const auto [rh, re] = metric.block_scalar_curvatures(c.point);
    auto& res = rep["results"];
    res["point"] = c.point;
    res["g"] = comps.g;
    res["ginv"] = comps.ginv;
    res["kretschmann"] = metric.kretschmann(c.point);
    res["block_curvatures"] = {rh, re};
    res["liouville_residual_alpha"] =
        liouville_residual(metric.alpha(), 2.0 * metric.lambda(), c.point[0], c.point[1]);
    res["liouville_residual_beta"] =
        liouville_residual(metric.beta(), 2.0 * metric.lambda(), c.point[2], c.point[3]);
    return finish(rep, out_dir, rc.report_path, 0);
}

inline int run_integrate(const RunConfig& rc, const IntegrateCmd& c,
                         const std::filesystem::path& out_dir) {
    ordered_json rep = base_report(rc, "integrate");
    const auto metric = build_metric(c.metric);
    PhaseState init;
    init.s = c.span[0];
    init.x = c.x0;
    init.p = c.init_is_momentum ? c.init : momentum_from_velocity(metric, c.x0, c.init);
    const auto path =
        integrate(metric, init, {c.span[0], c.span[1]}, {c.abs_tol, c.rel_tol});

    std::ofstream os(out_dir / c.csv_path);
    if (!os) throw Error("cannot write CSV to " + (out_dir / c.csv_path).string());
    write_trajectory_csv(os, metric, path);

    auto& res = rep["results"];
    res["csv"] = c.csv_path;
    res["samples"] = path.samples.size();
    res["hamiltonian_drift"] = path.diagnostics.hamiltonian_drift;
    res["steps_accepted"] = path.diagnostics.steps_accepted;
    res["steps_rejected"] = path.diagnostics.steps_rejected;
    res["termination"] = path.diagnostics.reason == StopReason::SpanEnd
                             ? "span_end"
                             : "coordinate_singularity";
    if (path.diagnostics.reason == StopReason::CoordinateSingularityHit) {
        res["singular_axis"] = path.diagnostics.singular_axis;
        res["s_exit"] = path.diagnostics.s_exit;
    }
    return finish(rep, out_dir, rc.report_path, 0);
}

inline int run_verify_closed_form(const RunConfig& rc, const VerifyClosedFormCmd& c,
                                  const std::filesystem::path& out_dir) {
    ordered_json rep = base_report(rc, "verify-closed-form");
    auto& res = rep["results"];
    res["family"] = c.family;

    const Potential flat_beta = Potential::constant(Block::Elliptic, 0.0);
    const Potential flat_alpha = Potential::constant(Block::Hyperbolic, 0.0);
    const double s0 = c.span[0], s1 = c.span[1];
    std::vector<double> stops;
    for (int i = 0; i <= c.samples - 1; ++i)
        stops.push_back(s0 + (s1 - s0) * i / (c.samples - 1));

    PathComparison cmp;
    if (c.family == "hyperbolic_linear") {
        const auto& p = c.potential;
        HyperbolicLinearClosedForm cf(p[0], p[1], p[2], c.data[0], c.data[1], c.data[2],
                                      c.data[3]);
        const SplitMetric metric(cf.matching_alpha(), flat_beta, 0.0);
        const auto x = cf.eval_x(s0);
        const auto v = cf.eval_x_dot(s0);
        const auto init = state_from_velocity(metric, s0, {x[0], x[1], 0.0, 0.0},
                                              {v[0], v[1], 0.0, 0.0});
        const auto path = integrate(metric, init, {s0, s1}, {c.abs_tol, c.rel_tol}, stops);
        cmp = compare_paths(path, [&](double s) {
            const auto xx = cf.eval_x(s);
            return Vec4{xx[0], xx[1], 0.0, 0.0};
        });
    } else if (c.family == "hyperbolic_tanh") {
        const auto& p = c.potential;
        HyperbolicTanhClosedForm cf(p[0], p[1], p[2], p[3], p[4], p[5], c.data[0], c.data[1],
                                    c.data[2]);
        const SplitMetric metric(cf.matching_alpha(), flat_beta, 0.0);
        const auto x = cf.eval_x(s0, c.root_tol);
        const auto v = cf.eval_x_dot(s0, c.root_tol);
        const auto init = state_from_velocity(metric, s0, {x[0], x[1], 0.0, 0.0},
                                              {v[0], v[1], 0.0, 0.0});
        const auto path = integrate(metric, init, {s0, s1}, {c.abs_tol, c.rel_tol}, stops);
        cmp = compare_paths(path, [&](double s) {
            const auto xx = cf.eval_x(s, c.root_tol);
            return Vec4{xx[0], xx[1], 0.0, 0.0};
        });
    } else if (c.family == "elliptic_linear") {
        const auto& p = c.potential;
        const auto& fi = *c.fit_initial;
        const auto cf =
            EllipticLinearClosedForm::fit(p[0], p[1], p[2], fi[0], fi[1], fi[2], fi[3]);
        const SplitMetric metric(flat_alpha, cf.matching_beta(), 0.0);
        const auto init = state_from_velocity(metric, s0, {0.0, 0.0, fi[0], fi[1]},
                                              {0.0, 0.0, fi[2], fi[3]});
        const auto path = integrate(metric, init, {s0, s1}, {c.abs_tol, c.rel_tol}, stops);
        double max_imag = 0.0;
        cmp = compare_paths(path, [&](double s) {
            const auto pt = cf.eval(s, 1e-3);
            max_imag = std::max(max_imag, pt.imag_residue);
            return Vec4{0.0, 0.0, pt.x2, pt.x3};
        });
        res["imag_residue"] = max_imag;
    } else { // elliptic_tanh: complex potential, verified against its own ODE
        const auto& p = c.potential;
        const auto& fi = *c.fit_initial;
        const auto cf = EllipticTanhClosedForm::fit(p[0], p[1], p[2], p[3], p[4], p[5], fi[0],
                                                    fi[1], fi[2], fi[3]);
        // Finite-difference residual of the complex light-cone system
        // z'' + w'(z) z'^2 = 0 along s, plus the reported imaginary residue.
        double max_resid = 0.0, max_imag = 0.0;
        const double h = 1e-4;
        for (double s : stops) {
            const auto zm = cf.eval_z(s - h, c.root_tol);
            const auto z0 = cf.eval_z(s, c.root_tol);
            const auto zp = cf.eval_z(s + h, c.root_tol);
            const cplx d1 = (zp[1] - zm[1]) / (2.0 * h);
            const cplx d2 = (zp[1] - 2.0 * z0[1] + zm[1]) / (h * h);
            const cplx t = std::tanh(cf.B_ * z0[1] + cf.A_);
            const cplx wprime = detail::tanh_poly_d1(t, cf.D_, cf.E_, cf.F_) *
                                (1.0 - t * t) * cf.B_;
            max_resid = std::max(max_resid, std::abs(d2 + wprime * d1 * d1));
            const auto pt = cf.eval(s, c.root_tol);
            max_imag = std::max(max_imag, pt.imag_residue);
        }
        res["ode_residual"] = max_resid;
        res["imag_residue"] = max_imag;
        res["note"] = "complex-characteristic family; mapped-back reality is reported, "
                      "not assumed";
        cmp.max_error = max_resid;
        cmp.s_at_max = 0.0;
    }

    res["max_error"] = cmp.max_error;
    res["s_at_max"] = cmp.s_at_max;
    res["threshold"] = c.max_error;
    const bool pass = cmp.max_error <= c.max_error;
    if (!pass)
        rep["diagnostics"].push_back("max_error above threshold");
    return finish(rep, out_dir, rc.report_path, pass ? 0 : 2);
}

inline int run_find_integrals(const RunConfig& rc, const FindIntegralsCmd& c,
                              const std::filesystem::path& out_dir) {
    ordered_json rep = base_report(rc, "find-integrals");
    const Potential pot = make_potential(c.pot, c.block);
    BasisSpec basis;
    basis.monomial_degree = c.basis_degree;
    if (c.basis_tanh) basis.tanh_wave = *c.basis_tanh;
    GridSpec grid;
    grid.u0 = c.rect[0];
    grid.u1 = c.rect[1];
    grid.v0 = c.rect[2];
    grid.v1 = c.rect[3];
    grid.nu = grid.nv = c.grid;
    grid.seed = c.seed;
    const auto result = find_first_integrals(pot, c.degree, basis, grid, c.svd_tol);

    auto& res = rep["results"];
    res["degree"] = c.degree;
    res["basis"] = basis.describe();
    res["svd_tol"] = c.svd_tol;
    res["scale"] = result.scale;
    res["singular_values"] = result.singular_values;
    res["nullspace_dimension"] = result.nullspace_dimension;
    ordered_json cands = ordered_json::array();
    for (const auto& repc : result.reports) {
        ordered_json jc;
        jc["max_residual"] = repc.max_residual;
        std::vector<double> coeffs(repc.candidate.coefficients().data(),
                                   repc.candidate.coefficients().data() +
                                       repc.candidate.coefficients().size());
        jc["coefficients"] = coeffs;
        cands.push_back(jc);
    }
    res["candidates"] = cands;
    return finish(rep, out_dir, rc.report_path, 0);
}

inline int run_liouville_check(const RunConfig& rc, const LiouvilleCheckCmd& c,
                               const std::filesystem::path& out_dir) {
    ordered_json rep = base_report(rc, "liouville-check");
    const Potential pot = make_potential(c.pot, c.block);
    double worst = 0.0, sum = 0.0;
    int count = 0;
    for (int i = 0; i < c.grid; ++i)
        for (int j = 0; j < c.grid; ++j) {
            const double u = c.rect[0] + (c.rect[1] - c.rect[0]) * (i + 0.5) / c.grid;
            const double v = c.rect[2] + (c.rect[3] - c.rect[2]) * (j + 0.5) / c.grid;
            const double r = std::abs(liouville_residual(pot, c.coefficient, u, v, c.sign));
            worst = std::max(worst, r);
            sum += r;
            ++count;
        }
    auto& res = rep["results"];
    res["coefficient"] = c.coefficient;
    res["elliptic_sign"] = c.sign == EllipticSign::Minus ? "minus" : "plus";
    res["grid"] = c.grid;
    res["max_residual"] = worst;
    res["mean_residual"] = sum / count;
    int code = 0;
    if (c.max_residual) {
        res["threshold"] = *c.max_residual;
        if (worst > *c.max_residual) {
            rep["diagnostics"].push_back("residual above threshold");
            code = 2;
        }
    }
    return finish(rep, out_dir, rc.report_path, code);
}

inline int run_maxwell_gate(const RunConfig& rc, const MaxwellGateCmd& c,
                            const std::filesystem::path& out_dir) {
    ordered_json rep = base_report(rc, "maxwell-gate");
    auto& res = rep["results"];
    const auto data = MaxwellData::make(c.k, c.c, c.lambda, c.J, c.I1, c.symmetric_k2);
    res["k1"] = data.k1;
    res["k2"] = data.k2;
    res["l"] = data.l;
    res["m"] = data.m;
    res["J"] = data.J;
    res["I1"] = data.I1;
    const auto verdict = integrability_gate(c.J, c.lambda);
    res["integrable"] = verdict.integrable;
    res["reason"] = verdict.reason;
    return finish(rep, out_dir, rc.report_path, 0);
}

} // namespace run_detail

// Executes a validated config.  Returns the process exit code: 0 on
// success, 2 on domain or verification failure (with the failure recorded
// in the report).  Config errors are thrown before this point and map to
// exit code 1 in the CLI.
inline int run(const RunConfig& rc, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    using namespace run_detail;
    try {
        switch (rc.command) {
            case Command::MetricInfo:
                return run_metric_info(rc, std::get<MetricInfoCmd>(rc.cmd), out_dir);
            case Command::Integrate:
                return run_integrate(rc, std::get<IntegrateCmd>(rc.cmd), out_dir);
            case Command::VerifyClosedForm:
                return run_verify_closed_form(rc, std::get<VerifyClosedFormCmd>(rc.cmd),
                                              out_dir);
            case Command::FindIntegrals:
                return run_find_integrals(rc, std::get<FindIntegralsCmd>(rc.cmd), out_dir);
            case Command::LiouvilleCheck:
                return run_liouville_check(rc, std::get<LiouvilleCheckCmd>(rc.cmd), out_dir);
            case Command::MaxwellGate:
                return run_maxwell_gate(rc, std::get<MaxwellGateCmd>(rc.cmd), out_dir);
        }
        throw Error("unreachable command");
    } catch (const Error& e) {
        // Domain or verification failure: record it in a report instead of
        // crashing, and exit 2.
        ordered_json rep = run_detail::base_report(rc, run_detail::command_name(rc.command));
        rep["status"] = "verification_failed";
        rep["diagnostics"].push_back(e.what());
        run_detail::write_report(rep, out_dir / rc.report_path);
        return 2;
    }
}

} // namespace splitgeo
