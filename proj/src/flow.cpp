#include "ctrg/flow.hpp"

#include <chrono>
#include <cmath>

#include "ctrg/errors.hpp"
#include "ctrg/oracles.hpp"
#include "ctrg/pert_trg.hpp"

namespace ctrg {

void RunConfig::validate() const {
    if (!std::isfinite(mass) || mass <= 0.0) throw InvalidConfig("mass must be finite and positive");
    if (order != 0 && order != 1) throw Unsupported("order must be 0 or 1");
    if (chi_max < 1) throw InvalidConfig("chi_max must be at least 1");
    if (sites_exponent < 0 || sites_exponent > 30) throw InvalidConfig("sites exponent must lie in [0, 30]");
    if (!(zero_tol >= 0.0 && zero_tol < 1.0)) throw InvalidConfig("zero_tol must lie in [0, 1)");
    if (!std::isfinite(coupling)) throw InvalidConfig("coupling must be finite");
    for (double m : sweep_masses)
        if (!std::isfinite(m) || m <= 0.0) throw InvalidConfig("sweep masses must be positive");
    for (std::size_t c : sweep_chis)
        if (c < 1) throw InvalidConfig("sweep chi values must be at least 1");
    if (diagnostics && order != 1) throw InvalidConfig("diagnostics need order 1");
    if (diagnostics && chi_max > 24) throw InvalidConfig("diagnostics are limited to chi_max <= 24");
}

double relative_error(double value, double exact) { return std::abs(value - exact) / std::abs(exact); }

namespace {

using Clock = std::chrono::steady_clock;

LevelRecord make_record(const FreeWeightState& state, const SplitData& split) {
    LevelRecord r;
    r.level = state.level;
    r.chi = state.chi;
    r.chi_pre = static_cast<std::size_t>(split.kept_count + split.truncated_count);
    r.chi_post = split.chi_next();
    r.discarded_zero = split.discarded_zero_count;
    r.singular_values = split.spectrum;
    r.cdl_distance = cdl_distance(split.spectrum, state.chi);
    r.log_const = state.log_norm;
    r.structure_error = state.structure_error;
    return r;
}

LevelRecord final_record(const FreeWeightState& state) {
    const SplitData all = full_split(state);
    LevelRecord r;
    r.level = state.level;
    r.chi = state.chi;
    r.singular_values = all.spectrum;
    r.cdl_distance = cdl_distance(all.spectrum, state.chi);
    r.log_const = state.log_norm;
    r.structure_error = state.structure_error;
    for (double b : all.spectrum) r.chi_pre += b > 0.0 ? 1 : 0;
    r.chi_post = r.chi_pre;
    return r;
}

FreeEnergyReport base_report(const RunConfig& c) {
    FreeEnergyReport rep;
    rep.mass = c.mass;
    rep.chi_max = c.chi_max;
    rep.order = c.order;
    rep.levels = c.levels();
    rep.sites = std::ldexp(1.0, c.levels());
    return rep;
}

void attach_oracles(const RunConfig& c, FreeEnergyReport& rep) {
    if (!c.oracle) return;
    rep.exact_f0 = exact_f0(c.mass);
    rep.delta_f0 = relative_error(rep.f0, *rep.exact_f0);
    if (rep.f1 && c.mass > 0.0) {
        rep.exact_f1 = exact_f1(c.mass);
        rep.delta_f1 = relative_error(*rep.f1, *rep.exact_f1);
    }
}

void omega_record(const RunConfig& c, const FreeWeightState& state, const FormalPayload& formal, LevelRecord& rec,
                  RGTrace& trace) {
    if (formal.level != state.level) return;
    const PertTensors t = formal_cubic(state, formal, c.backend);
    const OmegaVectors w = omega_vectors(t, c.chi_max);
    rec.omega2 = w.omega2;
    rec.omega4 = w.omega4;
    if (state.level == c.omega_matrix_level) {
        trace.omega_matrix_level = state.level;
        trace.omega_matrix = omega_matrix(t, c.chi_max).mat();
    }
}

} // namespace

FlowResult run_free_flow(const RunConfig& c) {
    c.validate();
    const auto t_start = Clock::now();
    FlowResult out;
    const int levels = c.levels();
    FreeWeightState state = init_free(c.mass);
    FreeEnergyAccumulator acc(levels);
    for (int n = 0; n < levels; ++n) {
        const SplitData split = split_weight(state, c.chi_max, c.zero_tol);
        out.trace.levels.push_back(make_record(state, split));
        const LoopKernel kernel = build_loop(state, split);
        state = coarse_grain_free(state, split, kernel, &acc);
    }
    out.trace.levels.push_back(final_record(state));
    const double closure = close_trace(state);
    out.report = base_report(c);
    out.report.f0 = -(acc.per_site + std::ldexp(closure, -levels));
    attach_oracles(c, out.report);
    out.trace.cdl_onset = detect_cdl_onset(out.trace);
    out.report.wall_seconds = std::chrono::duration<double>(Clock::now() - t_start).count();
    return out;
}

FlowResult run_pert_flow(const RunConfig& c) {
    c.validate();
    if (c.order != 1) throw InvalidConfig("run_pert_flow needs order 1");
    const auto t_start = Clock::now();
    FlowResult out;
    const int levels = c.levels();
    PertWeightState ps = init_pert(c.mass, c.coupling);
    FreeEnergyAccumulator acc(levels);
    PertAccumulator pacc(levels);
    FormalPayload formal;
    FormalPayload* formal_ptr = c.diagnostics ? &formal : nullptr;
    for (int n = 0; n < levels; ++n) {
        const SplitData split = split_weight(ps.free, c.chi_max, c.zero_tol);
        LevelRecord rec = make_record(ps.free, split);
        if (c.diagnostics) omega_record(c, ps.free, formal, rec, out.trace);
        const LoopKernel kernel = build_loop(ps.free, split);
        const CubicPayload cubic = split_pert(ps, split, c.backend);
        const FreeWeightState next_free = coarse_grain_free(ps.free, split, kernel, &acc);
        ps = coarse_grain_pert(ps, next_free, split, kernel, cubic, &pacc, formal_ptr, c.backend);
        rec.t0 = pacc.t0.back();
        out.trace.levels.push_back(std::move(rec));
    }
    LevelRecord last = final_record(ps.free);
    if (c.diagnostics) omega_record(c, ps.free, formal, last, out.trace);
    out.trace.levels.push_back(std::move(last));

    const double closure0 = close_trace(ps.free);
    const double closure1 = close_pert_trace(ps, c.backend);
    out.report = base_report(c);
    out.report.f0 = -(acc.per_site + std::ldexp(closure0, -levels));
    const double first = -(pacc.per_site + std::ldexp(closure1, -levels));
    out.report.f1 = c.coupling != 0.0 ? first / c.coupling : 0.0;
    attach_oracles(c, out.report);
    out.trace.cdl_onset = detect_cdl_onset(out.trace);
    if (c.diagnostics) out.trace.freeze_level = detect_freeze(out.trace);
    out.report.wall_seconds = std::chrono::duration<double>(Clock::now() - t_start).count();
    return out;
}

FlowResult run_flow(const RunConfig& c) { return c.order == 1 ? run_pert_flow(c) : run_free_flow(c); }

} // namespace ctrg
