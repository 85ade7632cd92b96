#include "fdshock/run.hpp"

#include "fdshock/cases.hpp"
#include "fdshock/error.hpp"

#include <chrono>
#include <cmath>

namespace fdshock {

RunSpec case_spec(int id) {
    const CaseDefinition c = builtin_case(id);
    RunSpec spec;
    spec.case_id = id;
    spec.flux = c.flux;
    spec.u_minus = c.u_minus;
    spec.initial = c.initial;
    spec.config = c.config;
    return spec;
}

PerturbationField field_of(const SimState& state, const SimConfig& config, const ProfileTable& profile, double x0) {
    const double drift = profile.shock().speed - config.frame_speed_for(profile);
    return antiderivative(state.z, state.u, profile, x0 - drift * state.t, x0);
}

RunResult run_case(const RunSpec& spec, const ProgressFn& progress) {
    const FluxSpec flux(spec.flux);
    const ShockData shock = analyze_shock(flux, spec.u_minus);
    if (!shock.valid()) {
        throw ValidationError("flux: the shock condition fails for u_minus = " + std::to_string(spec.u_minus));
    }
    auto profile = std::make_shared<const ProfileTable>(build_profile(shock, flux, spec.profile_options));
    return run_case(spec, std::move(profile), progress);
}

RunResult run_case(const RunSpec& spec, std::shared_ptr<const ProfileTable> profile, const ProgressFn& progress) {
    const auto started = std::chrono::steady_clock::now();
    RunResult out;
    out.profile = profile;
    out.config = spec.config;
    const ProfileTable& table = *profile;

    SimState state = initial_state(out.config, table, spec.initial);
    out.shift = compute_shift(state.z, state.u, table);
    out.config.boundary_shift = spec.shift_boundary ? out.shift.x0 : 0.0;
    out.config.validate(table);
    const SimConfig& config = out.config;

    const double interval = spec.diagnostics_interval > 0.0 ? spec.diagnostics_interval : config.t_end / 200.0;
    DiagnosticsAccumulator acc(out.shift.x0);
    auto record_row = [&](const SimState& s) {
        const DiagnosticsRow& row = acc.add(s.t, field_of(s, config, table, out.shift.x0), table);
        if (progress) {
            progress(s, row);
        }
    };

    out.snapshots.push_back(state);
    record_row(state);
    double next_diag = interval;

    while (state.t < config.t_end) {
        double dt = stable_dt(state, config, table);
        // land exactly on diagnostics times
        if (state.t + dt > next_diag) {
            dt = next_diag - state.t;
        }
        if (state.t + dt > config.t_end) {
            dt = config.t_end - state.t;
        }
        if (dt <= 0.0) {
            throw SolverError("time step collapsed to zero at t = " + std::to_string(state.t));
        }
        state = step(state, config, table, dt);
        const bool at_end = state.t >= config.t_end || config.t_end - state.t < 1e-12 * config.t_end;
        if (at_end) {
            state.t = config.t_end;
        }
        if (at_end || state.t >= next_diag - 1e-12 * interval) {
            record_row(state);
            while (next_diag <= state.t + 1e-12 * interval) {
                next_diag += interval;
            }
        }
        if (at_end) {
            break;
        }
        if (config.output_stride > 0 && state.step_count % config.output_stride == 0) {
            out.snapshots.push_back(state);
        }
    }
    out.snapshots.push_back(state);
    out.steps = state.step_count;
    out.clamp_count = state.clamp_count;
    out.record = acc.take();
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

}  // namespace fdshock
