#include "fdshock/diagnostics.hpp"

#include "fdshock/error.hpp"

#include "quadrature.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fdshock {

namespace {

std::vector<double> divided_difference(const std::vector<double>& v, double dz) {
    const std::size_t n = v.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) {
        return d;
    }
    d[0] = (v[1] - v[0]) / dz;
    d[n - 1] = (v[n - 1] - v[n - 2]) / dz;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d[i] = (v[i + 1] - v[i - 1]) / (2.0 * dz);
    }
    return d;
}

PerturbationField assemble(std::span<const double> z, std::span<const double> u, std::vector<double> profile_u,
                           double shift_x0, double left_tail) {
    if (z.size() != u.size() || z.size() != profile_u.size() || z.size() < 2) {
        throw ValidationError("perturbation field needs matching grids with at least two cells");
    }
    PerturbationField f;
    const std::size_t n = z.size();
    f.z.assign(z.begin(), z.end());
    f.dz = (z.back() - z.front()) / static_cast<double>(n - 1);
    f.shift_x0 = shift_x0;
    f.profile_u = std::move(profile_u);
    f.phi_z.resize(n);
    f.phi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        f.phi_z[i] = u[i] - f.profile_u[i];
    }
    double running = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        f.phi[i] = left_tail + f.dz * (running + 0.5 * f.phi_z[i]);
        running += f.phi_z[i];
    }
    f.mass_defect = f.dz * running;
    f.phi_zz = divided_difference(f.phi_z, f.dz);
    f.phi_zzz = divided_difference(f.phi_zz, f.dz);
    return f;
}

// Taylor remainder f(U + e) - f(U) - f'(U) e of a polynomial, term by term.
double taylor_remainder(std::span<const double> coefficients, double u, double e) {
    std::vector<double> c(coefficients.begin(), coefficients.end());
    const std::size_t n = c.size();
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = n - 1; i > k; --i) {
            c[i - 1] += u * c[i];
        }
    }
    double acc = 0.0;
    for (std::size_t j = n; j-- > 2;) {
        acc = acc * e + c[j];
    }
    return acc * e * e;
}

// ln(1 + x) - x
double log_remainder(double x) {
    if (std::abs(x) < 1e-3) {
        const double x2 = x * x;
        return x2 * (-0.5 + x * (1.0 / 3.0 + x * (-0.25 + x * 0.2)));
    }
    return std::log1p(x) - x;
}

double bracket_without_time(const DiagnosticsRow& r) {
    return r.norms.phi * r.norms.phi + r.norms.phi_w4 * r.norms.phi_w4 + r.norms.phi_z_h1_w1 * r.norms.phi_z_h1_w1;
}

double dissipation_rate(const NormBundle& n) {
    return n.phi_z_w2 * n.phi_z_w2 + n.phi_z_w5 * n.phi_z_w5 + n.phi_zz_h1_w3 * n.phi_zz_h1_w3;
}

}  // namespace

std::string_view to_string(WeightKind k) {
    switch (k) {
        case WeightKind::W1:
            return "w1";
        case WeightKind::W2:
            return "w2";
        case WeightKind::W3:
            return "w3";
        case WeightKind::W4:
            return "w4";
        case WeightKind::W5:
            return "w5";
    }
    return "w1";
}

double weight_eval(WeightKind kind, double u, const ShockFunction& g, double coefficient_scale) {
    const double um = g.u_minus();
    if (!(u > 0.0 && u < um)) {
        std::ostringstream os;
        os << "weight_eval: U = " << u << " outside (0, " << um << ")";
        throw ValidationError(os.str());
    }
    switch (kind) {
        case WeightKind::W1:
            return 1.0 / (u * u);
        case WeightKind::W2:
            return 1.0 / u;
        case WeightKind::W3:
            return 1.0 / (u * u * u);
        case WeightKind::W4:
        case WeightKind::W5: {
            const double gu = g.g(u);
            double w5 = 0.0;
            if (std::abs(gu) < 1e-12 * coefficient_scale) {
                w5 = 1.0 / (u * g.quotient(u));
            } else {
                w5 = (u - um) / gu;
            }
            return kind == WeightKind::W5 ? w5 : u * w5;
        }
    }
    return 0.0;
}

double weight_eval(WeightKind kind, double u, const ShockData& shock, const FluxSpec& flux) {
    const ShockFunction g(flux, shock);
    return weight_eval(kind, u, g, 1.0 + flux.polynomial().max_abs_coefficient());
}

double tail_mass(const ProfileTable& profile, bool at_right, double z_edge, double cell_z, double cell_error) {
    const double um = profile.shock().u_minus;
    // Below this the cell error is rounding noise of U near u-.
    const double resolution = 8.0 * std::numeric_limits<double>::epsilon() * um;
    if (std::abs(cell_error) <= resolution) {
        return 0.0;
    }
    const double uz = profile.derivatives(cell_z).u_z;
    if (uz == 0.0) {
        return 0.0;
    }
    const double span = std::abs(profile.z_max() - profile.z_min());
    const double delta = std::clamp(cell_error / uz, -span, span);
    if (delta == 0.0) {
        return 0.0;
    }
    if (at_right) {
        auto f = [&profile](double z) { return profile.eval(z); };
        return -detail::adaptive_gk(f, z_edge, z_edge + delta, 1e-10, 12);
    }
    auto f = [&profile](double z) { return profile.deficit_at(z); };
    return -detail::adaptive_gk(f, z_edge, z_edge + delta, 1e-10, 12);
}

ShiftEstimate compute_shift(std::span<const double> z, std::span<const double> u0, const ProfileTable& profile) {
    if (z.size() != u0.size() || z.size() < 2) {
        throw ValidationError("compute_shift: grid and data sizes differ");
    }
    const std::size_t n = z.size();
    const double dz = (z.back() - z.front()) / static_cast<double>(n - 1);
    const double um = profile.shock().u_minus;
    auto mass = [&](double x) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += u0[i] - profile.eval(z[i] + x);
        }
        return acc * dz;
    };

    ShiftEstimate est;
    const double interior_mass = mass(0.0);
    est.interior = -interior_mass / um;
    const double e_left = u0[0] - profile.eval(z[0]);
    const double e_right = u0[n - 1] - profile.eval(z[n - 1]);
    const double tail = tail_mass(profile, false, z.front() - 0.5 * dz, z.front(), e_left) +
                        tail_mass(profile, true, z.back() + 0.5 * dz, z.back(), e_right);
    est.tail = -tail / um;

    // mass(x) increases with x since U is decreasing.
    if (interior_mass == 0.0) {
        est.x0 = 0.0;
    } else {
        const double span = z.back() - z.front();
        double step = std::max(1.0, std::abs(est.interior));
        double lo = 0.0;
        double hi = 0.0;
        if (interior_mass < 0.0) {
            hi = step;
            while (mass(hi) < 0.0) {
                lo = hi;
                step *= 2.0;
                hi += step;
                if (hi > 4.0 * span) {
                    throw Error("compute_shift: no shift balances the initial mass on the grid");
                }
            }
        } else {
            lo = -step;
            while (mass(lo) > 0.0) {
                hi = lo;
                step *= 2.0;
                lo -= step;
                if (lo < -4.0 * span) {
                    throw Error("compute_shift: no shift balances the initial mass on the grid");
                }
            }
        }
        std::uintmax_t iterations = 200;
        const auto root = boost::math::tools::toms748_solve(mass, lo, hi, boost::math::tools::eps_tolerance<double>(50),
                                                            iterations);
        est.x0 = 0.5 * (root.first + root.second);
    }
    if (std::abs(est.tail) > 1e-4 * std::abs(est.x0)) {
        std::ostringstream os;
        os << "shift x0 = " << est.x0 << ": the tails beyond the grid would add " << est.tail
           << " to the whole-line value";
        est.warning = os.str();
    }
    return est;
}

PerturbationField antiderivative(std::span<const double> z, std::span<const double> u, const ProfileTable& profile,
                                 double profile_offset, double shift_x0) {
    std::vector<double> values(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        values[i] = profile.eval(z[i] + profile_offset);
    }
    double left_tail = 0.0;
    if (z.size() >= 2) {
        const double dz = (z.back() - z.front()) / static_cast<double>(z.size() - 1);
        left_tail = tail_mass(profile, false, z.front() - 0.5 * dz + profile_offset, z.front() + profile_offset,
                              u[0] - values[0]);
    }
    return assemble(z, u, std::move(values), shift_x0, left_tail);
}

PerturbationField antiderivative_from_values(std::span<const double> z, std::span<const double> u,
                                             std::span<const double> profile_u, double shift_x0) {
    return assemble(z, u, std::vector<double>(profile_u.begin(), profile_u.end()), shift_x0, 0.0);
}

NormBundle weighted_norms(const PerturbationField& field, const ProfileTable& profile) {
    const ShockFunction& g = profile.shock_function();
    const double scale = 1.0 + profile.flux().polynomial().max_abs_coefficient();
    double phi = 0, phi_w4 = 0, phi_z = 0, phi_z_w1 = 0, phi_zz_w1 = 0, phi_z_w2 = 0, phi_z_w5 = 0;
    double phi_zz_w3 = 0, phi_zzz_w3 = 0;
    for (std::size_t i = 0; i < field.z.size(); ++i) {
        const double u = field.profile_u[i];
        const double w1 = weight_eval(WeightKind::W1, u, g, scale);
        const double w2 = weight_eval(WeightKind::W2, u, g, scale);
        const double w3 = weight_eval(WeightKind::W3, u, g, scale);
        const double w4 = weight_eval(WeightKind::W4, u, g, scale);
        const double w5 = weight_eval(WeightKind::W5, u, g, scale);
        const double p = field.phi[i];
        const double pz = field.phi_z[i];
        const double pzz = field.phi_zz[i];
        const double pzzz = field.phi_zzz[i];
        phi += p * p;
        phi_w4 += w4 * p * p;
        phi_z += pz * pz;
        phi_z_w1 += w1 * pz * pz;
        phi_zz_w1 += w1 * pzz * pzz;
        phi_z_w2 += w2 * pz * pz;
        phi_z_w5 += w5 * pz * pz;
        phi_zz_w3 += w3 * pzz * pzz;
        phi_zzz_w3 += w3 * pzzz * pzzz;
    }
    const double dz = field.dz;
    NormBundle b;
    b.phi = std::sqrt(dz * phi);
    b.phi_w4 = std::sqrt(dz * phi_w4);
    b.phi_z = std::sqrt(dz * phi_z);
    b.phi_z_w1 = std::sqrt(dz * phi_z_w1);
    b.phi_z_h1_w1 = std::sqrt(dz * (phi_z_w1 + phi_zz_w1));
    b.phi_z_w2 = std::sqrt(dz * phi_z_w2);
    b.phi_z_w5 = std::sqrt(dz * phi_z_w5);
    b.phi_zz_h1_w3 = std::sqrt(dz * (phi_zz_w3 + phi_zzz_w3));
    return b;
}

RemainderReport nonlinear_remainders(const PerturbationField& field, const FluxSpec& flux) {
    RemainderReport r;
    const auto coefficients = flux.coefficients();
    for (std::size_t i = 0; i < field.z.size(); ++i) {
        const double u = field.profile_u[i];
        const double e = field.phi_z[i];
        if (!(u + e > 0.0)) {
            ++r.positivity_violations;
            if (!r.first_violation_z) {
                r.first_violation_z = field.z[i];
            }
            continue;
        }
        const double x = e / u;
        r.max_relative = std::max(r.max_relative, std::abs(x));
        if (e == 0.0) {
            continue;  // 0/0 counts as 0
        }
        const double big_f = -taylor_remainder(coefficients, u, e);
        r.r_f = std::max(r.r_f, std::abs(big_f) / (e * e));
        r.r_g = std::max(r.r_g, std::abs(log_remainder(x)) / (x * x));
    }
    return r;
}

const std::vector<std::string>& diagnostics_columns() {
    static const std::vector<std::string> columns{
        "t",           "sup_err",        "mass_defect",   "phi_norm",         "phi_w4_norm",
        "phi_z_norm",  "phi_z_w1_norm",  "phi_z_h1w1_norm", "phi_z_w2_norm",  "phi_z_w5_norm",
        "phi_zz_h1w3_norm", "N",         "R_F",           "R_G",              "phi_z_over_U_max",
        "dissipation", "positivity_violations"};
    return columns;
}

std::vector<double> row_values(const DiagnosticsRow& r) {
    return {r.t,
            r.sup_err,
            r.mass_defect,
            r.norms.phi,
            r.norms.phi_w4,
            r.norms.phi_z,
            r.norms.phi_z_w1,
            r.norms.phi_z_h1_w1,
            r.norms.phi_z_w2,
            r.norms.phi_z_w5,
            r.norms.phi_zz_h1_w3,
            r.n_t,
            r.r_f,
            r.r_g,
            r.max_relative,
            r.dissipation,
            static_cast<double>(r.positivity_violations)};
}

DiagnosticsRow row_from_values(std::span<const double> v) {
    if (v.size() != diagnostics_columns().size()) {
        throw ValidationError("diagnostics row has the wrong number of columns");
    }
    DiagnosticsRow r;
    r.t = v[0];
    r.sup_err = v[1];
    r.mass_defect = v[2];
    r.norms.phi = v[3];
    r.norms.phi_w4 = v[4];
    r.norms.phi_z = v[5];
    r.norms.phi_z_w1 = v[6];
    r.norms.phi_z_h1_w1 = v[7];
    r.norms.phi_z_w2 = v[8];
    r.norms.phi_z_w5 = v[9];
    r.norms.phi_zz_h1_w3 = v[10];
    r.n_t = v[11];
    r.r_f = v[12];
    r.r_g = v[13];
    r.max_relative = v[14];
    r.dissipation = v[15];
    r.positivity_violations = static_cast<int>(v[16]);
    return r;
}

const DiagnosticsRow& DiagnosticsAccumulator::add(double t, const PerturbationField& field,
                                                  const ProfileTable& profile) {
    DiagnosticsRow row;
    row.t = t;
    for (double e : field.phi_z) {
        row.sup_err = std::max(row.sup_err, std::abs(e));
    }
    row.mass_defect = field.mass_defect;
    row.norms = weighted_norms(field, profile);
    const RemainderReport rem = nonlinear_remainders(field, profile.flux());
    row.r_f = rem.r_f;
    row.r_g = rem.r_g;
    row.max_relative = rem.max_relative;
    row.positivity_violations = rem.positivity_violations;

    const double current_n = row.norms.phi + row.norms.phi_z_h1_w1;
    if (record_.rows.empty()) {
        row.n_t = current_n;
        row.dissipation = 0.0;
    } else {
        const DiagnosticsRow& prev = record_.rows.back();
        row.n_t = std::max(prev.n_t, current_n);
        row.dissipation =
            prev.dissipation + 0.5 * (dissipation_rate(prev.norms) + dissipation_rate(row.norms)) * (t - prev.t);
    }
    record_.rows.push_back(row);
    return record_.rows.back();
}

MonitorReport apriori_monitor(const DiagnosticsRecord& record, double ceiling) {
    MonitorReport m;
    if (record.rows.size() < 2) {
        throw ValidationError("apriori_monitor needs at least two samples");
    }
    m.initial_bracket = bracket_without_time(record.rows.front());
    if (!(m.initial_bracket > 1e-30)) {
        m.zero_perturbation = true;
        return m;
    }
    for (const DiagnosticsRow& r : record.rows) {
        const double ratio = (bracket_without_time(r) + r.dissipation) / m.initial_bracket;
        m.ratios.push_back(ratio);
        m.max_ratio = std::max(m.max_ratio, ratio);
    }
    m.final_ratio = m.ratios.back();
    m.exceeded = m.max_ratio > ceiling;
    return m;
}

std::vector<double> recompute_n(const DiagnosticsRecord& record) {
    std::vector<double> out;
    double running = 0.0;
    for (const DiagnosticsRow& r : record.rows) {
        running = std::max(running, r.norms.phi + r.norms.phi_z_h1_w1);
        out.push_back(running);
    }
    return out;
}

}  // namespace fdshock
