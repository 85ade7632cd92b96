#pragma once

#include "fdshock/diagnostics.hpp"
#include "fdshock/solver.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace fdshock {

/// Everything needed to reproduce one simulation.
struct RunSpec {
    std::optional<int> case_id;
    std::vector<double> flux;  // constant term first
    double u_minus = 0.0;
    InitialData initial;
    SimConfig config;
    ProfileOptions profile_options;
    /// Time between diagnostics rows; zero selects t_end / 200.
    double diagnostics_interval = 0.0;
    /// Impose U(z + x0) at the boundaries instead of U(z).
    bool shift_boundary = true;
};

/// Fills flux, u-, initial data and domain from a built-in case.
RunSpec case_spec(int id);

struct RunResult {
    std::shared_ptr<const ProfileTable> profile;
    SimConfig config;  // as run, boundary_shift filled in
    ShiftEstimate shift;
    std::vector<SimState> snapshots;
    DiagnosticsRecord record;
    long steps = 0;
    long clamp_count = 0;
    double wall_seconds = 0.0;
};

/// Progress hook, called after every diagnostics row.
using ProgressFn = std::function<void(const SimState&, const DiagnosticsRow&)>;

/// Perturbation field of a state against U(z + x0 - (s - c) t).
PerturbationField field_of(const SimState& state, const SimConfig& config, const ProfileTable& profile, double x0);

/// Builds the profile, integrates to t_end and folds diagnostics online.
/// Throws ValidationError for bad input and SolverError on solver aborts.
RunResult run_case(const RunSpec& spec, const ProgressFn& progress = {});

/// Same, reusing an existing profile table for the same flux and u-.
RunResult run_case(const RunSpec& spec, std::shared_ptr<const ProfileTable> profile,
                   const ProgressFn& progress = {});

}  // namespace fdshock
