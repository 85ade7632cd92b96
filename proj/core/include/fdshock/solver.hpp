#pragma once

#include "fdshock/profile.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace fdshock {

enum class Scheme {
    ImexLagged,   // explicit advection, implicit lagged-coefficient diffusion
    ExplicitRk2,  // SSP-RK2 on the full right-hand side
};

std::string_view to_string(Scheme s);

/// Initial profile u0(x). Built-in tags reproduce the three reference
/// scenarios; Profile perturbs the shock profile; Tabulated interpolates
/// user samples linearly with constant extension.
struct InitialData {
    enum class Kind { Case1, Case2, Case3, Profile, Tabulated };

    Kind kind = Kind::Profile;
    /// Profile: u0(x) = U(x + shift) + amplitude sech(x).
    double shift = 0.0;
    double amplitude = 0.0;
    /// Tabulated: strictly increasing abscissae with matching values.
    std::vector<double> x;
    std::vector<double> u;
};

std::string_view to_string(InitialData::Kind k);

/// u0(x); may be zero (Case 3 for x >= 0), the solver floors it.
double sample_initial(const InitialData& data, const ProfileTable& profile, double x);

struct SimConfig {
    double z_left = -30.0;
    double z_right = 100.0;
    int n_cells = 800;
    double t_end = 20.0;
    double cfl_safety = 0.5;
    /// Zero selects 1e-6 u-.
    double u_floor = 0.0;
    Scheme scheme = Scheme::ImexLagged;
    /// Steps between stored snapshots; 0 keeps only the first and last.
    int output_stride = 0;
    /// Speed of the computational frame; unset means the shock speed
    /// (moving frame). Zero gives the lab frame.
    std::optional<double> frame_speed;
    /// Boundary values are U(z + boundary_shift - (s - c) t).
    double boundary_shift = 0.0;

    double dz() const { return (z_right - z_left) / n_cells; }
    double floor_for(const ProfileTable& profile) const;
    double frame_speed_for(const ProfileTable& profile) const;

    /// Throws ValidationError naming the offending field.
    void validate(const ProfileTable& profile) const;
};

struct SimState {
    double t = 0.0;
    std::vector<double> z;  // uniform cell centers
    std::vector<double> u;
    long step_count = 0;
    double dt_last = 0.0;
    long clamp_count = 0;
};

/// Cells sampled at their midpoints from the initial data, floored.
SimState initial_state(const SimConfig& config, const ProfileTable& profile, const InitialData& data);

/// Profile value imposed outside the domain at frame coordinate z, time t.
double boundary_value(const SimConfig& config, const ProfileTable& profile, double z, double t);

/// -(f(u) - c u)_z by MUSCL reconstruction with van Leer slopes and a local
/// Lax-Friedrichs (Rusanov) face flux, c the frame speed.
std::vector<double> advective_tendency(const SimState& state, const SimConfig& config, const ProfileTable& profile);

/// (u_z / u)_z with face fluxes (u_{i+1} - u_i) / (dz * harmonic mean).
std::vector<double> diffusive_tendency(const SimState& state, const SimConfig& config, const ProfileTable& profile);

/// Sum of the advective and diffusive tendencies.
std::vector<double> moving_frame_rhs(const SimState& state, const SimConfig& config, const ProfileTable& profile);

/// IMEX: cfl dz / max|f'(u) - c|. Explicit: also bounded by cfl dz^2 min(u) / 2.
double stable_dt(const SimState& state, const SimConfig& config, const ProfileTable& profile);

/// One SSP-RK2 step of size dt. Each stage floors u and counts clamps.
/// Throws SolverError on NaN or a failed tridiagonal solve.
SimState step(const SimState& state, const SimConfig& config, const ProfileTable& profile, double dt);

/// step() with dt = stable_dt(), trimmed so as not to pass t_end.
SimState step(const SimState& state, const SimConfig& config, const ProfileTable& profile);

}  // namespace fdshock
