#include "fdshock/solver.hpp"

#include "fdshock/error.hpp"
#include "fdshock/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fdshock {

namespace {

constexpr int kGhosts = 2;

// van Leer limited slope from the two one-sided differences
double van_leer(double a, double b) {
    if (a * b <= 0.0) {
        return 0.0;
    }
    return 2.0 * a * b / (a + b);
}

double harmonic_mean(double a, double b) { return 2.0 * a * b / (a + b); }

// Cell values padded with two profile ghost cells on each side.
std::vector<double> with_ghosts(const SimState& s, const SimConfig& config, const ProfileTable& profile, double t) {
    const std::size_t n = s.u.size();
    const double dz = config.dz();
    std::vector<double> ue(n + 2 * kGhosts);
    for (int g = 0; g < kGhosts; ++g) {
        const double zl = config.z_left - (kGhosts - g - 0.5) * dz;
        const double zr = config.z_right + (g + 0.5) * dz;
        ue[static_cast<std::size_t>(g)] = boundary_value(config, profile, zl, t);
        ue[n + kGhosts + static_cast<std::size_t>(g)] = boundary_value(config, profile, zr, t);
    }
    std::copy(s.u.begin(), s.u.end(), ue.begin() + kGhosts);
    return ue;
}

std::vector<double> advection_from_padded(const std::vector<double>& ue, const SimConfig& config,
                                          const ProfileTable& profile) {
    const FluxSpec& f = profile.flux();
    const Polynomial df = f.derivative();
    const double c = config.frame_speed_for(profile);
    const double dz = config.dz();
    const std::size_t m = ue.size();
    const std::size_t n = m - 2 * kGhosts;

    std::vector<double> slope(m, 0.0);
    for (std::size_t j = 1; j + 1 < m; ++j) {
        slope[j] = van_leer(ue[j] - ue[j - 1], ue[j + 1] - ue[j]);
    }
    // face k sits between padded cells k + 1 and k + 2, k = 0..n
    std::vector<double> flux(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const std::size_t a = k + 1;
        const double ul = ue[a] + 0.5 * slope[a];
        const double ur = ue[a + 1] - 0.5 * slope[a + 1];
        const double ql = f(ul) - c * ul;
        const double qr = f(ur) - c * ur;
        const double alpha = std::max(std::abs(df(ul) - c), std::abs(df(ur) - c));
        flux[k] = 0.5 * (ql + qr) - 0.5 * alpha * (ur - ul);
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = -(flux[i + 1] - flux[i]) / dz;
    }
    return out;
}

std::vector<double> diffusion_from_padded(const std::vector<double>& ue, const SimConfig& config) {
    const double dz = config.dz();
    const std::size_t n = ue.size() - 2 * kGhosts;
    std::vector<double> face(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double a = ue[k + 1];
        const double b = ue[k + 2];
        face[k] = (b - a) / (dz * harmonic_mean(a, b));
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (face[i + 1] - face[i]) / dz;
    }
    return out;
}

void check_finite(const std::vector<double>& u, double t) {
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u[i])) {
            std::ostringstream os;
            os << "non-finite value in cell " << i << " at t = " << t;
            throw SolverError(os.str());
        }
    }
}

long apply_floor(std::vector<double>& u, double floor) {
    long clamps = 0;
    for (double& v : u) {
        if (v < floor) {
            v = floor;
            ++clamps;
        }
    }
    return clamps;
}

// Forward-Euler advection followed by one lagged implicit diffusion solve.
std::vector<double> imex_stage(const SimState& s, const SimConfig& config, const ProfileTable& profile, double dt) {
    const std::size_t n = s.u.size();
    const double dz = config.dz();
    const std::vector<double> ue = with_ghosts(s, config, profile, s.t);
    const std::vector<double> adv = advection_from_padded(ue, config, profile);

    // Ghost values at the new time level enter as Dirichlet data.
    const double t_new = s.t + dt;
    const double ghost_left = boundary_value(config, profile, config.z_left - 0.5 * dz, t_new);
    const double ghost_right = boundary_value(config, profile, config.z_right + 0.5 * dz, t_new);

    std::vector<double> k(n + 1);
    for (std::size_t f = 0; f <= n; ++f) {
        k[f] = 1.0 / harmonic_mean(ue[f + 1], ue[f + 2]);
    }
    const double r = dt / (dz * dz);
    std::vector<double> lower(n), diag(n), upper(n), rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        lower[i] = -r * k[i];
        upper[i] = -r * k[i + 1];
        diag[i] = 1.0 + r * (k[i] + k[i + 1]);
        rhs[i] = s.u[i] + dt * adv[i];
    }
    rhs[0] += r * k[0] * ghost_left;
    rhs[n - 1] += r * k[n] * ghost_right;
    lower[0] = 0.0;
    upper[n - 1] = 0.0;
    return solve_tridiagonal(lower, diag, upper, rhs);
}

std::vector<double> explicit_stage(const SimState& s, const SimConfig& config, const ProfileTable& profile,
                                   double dt) {
    const std::vector<double> rhs = moving_frame_rhs(s, config, profile);
    std::vector<double> out(s.u.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = s.u[i] + dt * rhs[i];
    }
    return out;
}

}  // namespace

std::string_view to_string(Scheme s) {
    return s == Scheme::ImexLagged ? "imex" : "explicit";
}

std::string_view to_string(InitialData::Kind k) {
    switch (k) {
        case InitialData::Kind::Case1:
            return "case1";
        case InitialData::Kind::Case2:
            return "case2";
        case InitialData::Kind::Case3:
            return "case3";
        case InitialData::Kind::Profile:
            return "profile";
        case InitialData::Kind::Tabulated:
            return "tabulated";
    }
    return "profile";
}

double sample_initial(const InitialData& data, const ProfileTable& profile, double x) {
    switch (data.kind) {
        case InitialData::Kind::Case1:
            return x < 0.0 ? 2.0 - std::cos(8.0 * x) * std::exp(2.0 * x) : 1.0 / (1.0 + 2.0 * x);
        case InitialData::Kind::Case2:
            return x < 0.0 ? 2.0 : 2.0 / ((1.0 + x) * (1.0 + x));
        case InitialData::Kind::Case3:
            return x < 0.0 ? 1.0 - 1.0 / (1.0 + std::abs(x)) : 0.0;
        case InitialData::Kind::Profile:
            return profile.eval(x + data.shift) + data.amplitude / std::cosh(x);
        case InitialData::Kind::Tabulated: {
            const auto& xs = data.x;
            if (x <= xs.front()) {
                return data.u.front();
            }
            if (x >= xs.back()) {
                return data.u.back();
            }
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const std::size_t k = static_cast<std::size_t>(it - xs.begin()) - 1;
            const double w = (x - xs[k]) / (xs[k + 1] - xs[k]);
            return (1.0 - w) * data.u[k] + w * data.u[k + 1];
        }
    }
    return 0.0;
}

double SimConfig::floor_for(const ProfileTable& profile) const {
    return u_floor > 0.0 ? u_floor : 1e-6 * profile.shock().u_minus;
}

double SimConfig::frame_speed_for(const ProfileTable& profile) const {
    return frame_speed.value_or(profile.shock().speed);
}

void SimConfig::validate(const ProfileTable& profile) const {
    auto fail = [](const std::string& msg) { throw ValidationError(msg); };
    if (!(z_left < 0.0 && 0.0 < z_right)) {
        fail("z_left < 0 < z_right is required");
    }
    if (n_cells < 100) {
        fail("n_cells must be >= 100");
    }
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
        fail("t_end must be a finite nonnegative number");
    }
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) {
        fail("cfl_safety must lie in (0, 1]");
    }
    if (u_floor < 0.0) {
        fail("u_floor must be positive (or zero for the default)");
    }
    if (output_stride < 0) {
        fail("output_stride must be >= 0");
    }
    const double floor = floor_for(profile);
    const double right = boundary_value(*this, profile, z_right, 0.0);
    if (floor > right) {
        std::ostringstream os;
        os << "u_floor = " << floor << " exceeds the boundary profile value U(z_right) = " << right;
        fail(os.str());
    }
}

double boundary_value(const SimConfig& config, const ProfileTable& profile, double z, double t) {
    const double drift = profile.shock().speed - config.frame_speed_for(profile);
    return profile.eval(z + config.boundary_shift - drift * t);
}

SimState initial_state(const SimConfig& config, const ProfileTable& profile, const InitialData& data) {
    if (data.kind == InitialData::Kind::Tabulated) {
        if (data.x.size() < 2 || data.x.size() != data.u.size()) {
            throw ValidationError("tabulated initial data needs >= 2 matching (x, u) samples");
        }
        for (std::size_t i = 1; i < data.x.size(); ++i) {
            if (!(data.x[i] > data.x[i - 1])) {
                throw ValidationError("tabulated initial data abscissae must be strictly increasing");
            }
        }
    }
    SimState s;
    const int n = config.n_cells;
    const double dz = config.dz();
    s.z.resize(static_cast<std::size_t>(n));
    s.u.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double z = config.z_left + (i + 0.5) * dz;
        s.z[static_cast<std::size_t>(i)] = z;
        s.u[static_cast<std::size_t>(i)] = sample_initial(data, profile, z);
    }
    check_finite(s.u, 0.0);
    s.clamp_count = apply_floor(s.u, config.floor_for(profile));
    return s;
}

std::vector<double> advective_tendency(const SimState& state, const SimConfig& config, const ProfileTable& profile) {
    return advection_from_padded(with_ghosts(state, config, profile, state.t), config, profile);
}

std::vector<double> diffusive_tendency(const SimState& state, const SimConfig& config, const ProfileTable& profile) {
    return diffusion_from_padded(with_ghosts(state, config, profile, state.t), config);
}

std::vector<double> moving_frame_rhs(const SimState& state, const SimConfig& config, const ProfileTable& profile) {
    const std::vector<double> ue = with_ghosts(state, config, profile, state.t);
    std::vector<double> out = advection_from_padded(ue, config, profile);
    const std::vector<double> diff = diffusion_from_padded(ue, config);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] += diff[i];
    }
    return out;
}

double stable_dt(const SimState& state, const SimConfig& config, const ProfileTable& profile) {
    const Polynomial df = profile.flux().derivative();
    const double c = config.frame_speed_for(profile);
    const std::vector<double> ue = with_ghosts(state, config, profile, state.t);
    double speed = 0.0;
    double u_min = ue.front();
    for (double v : ue) {
        speed = std::max(speed, std::abs(df(v) - c));
        u_min = std::min(u_min, v);
    }
    const double dz = config.dz();
    const double advective = dz / std::max(speed, 1e-12);
    if (config.scheme == Scheme::ImexLagged) {
        return config.cfl_safety * advective;
    }
    return config.cfl_safety * std::min(advective, 0.5 * dz * dz * u_min);
}

SimState step(const SimState& state, const SimConfig& config, const ProfileTable& profile, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw SolverError("time step must be positive and finite");
    }
    const double floor = config.floor_for(profile);
    auto stage = [&](const SimState& s) {
        return config.scheme == Scheme::ImexLagged ? imex_stage(s, config, profile, dt)
                                                   : explicit_stage(s, config, profile, dt);
    };

    SimState next = state;
    SimState mid = state;
    mid.u = stage(state);
    check_finite(mid.u, state.t + dt);
    next.clamp_count += apply_floor(mid.u, floor);
    mid.t = state.t + dt;

    std::vector<double> second = stage(mid);
    check_finite(second, state.t + dt);
    next.clamp_count += apply_floor(second, floor);

    for (std::size_t i = 0; i < next.u.size(); ++i) {
        next.u[i] = 0.5 * (state.u[i] + second[i]);
    }
    next.clamp_count += apply_floor(next.u, floor);
    next.t = state.t + dt;
    next.step_count = state.step_count + 1;
    next.dt_last = dt;
    return next;
}

SimState step(const SimState& state, const SimConfig& config, const ProfileTable& profile) {
    double dt = stable_dt(state, config, profile);
    const double remaining = config.t_end - state.t;
    if (remaining > 0.0 && dt > remaining) {
        dt = remaining;
    }
    return step(state, config, profile, dt);
}

}  // namespace fdshock
