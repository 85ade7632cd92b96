#pragma once

#include "fdshock/profile.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fdshock {

enum class WeightKind { W1, W2, W3, W4, W5 };

std::string_view to_string(WeightKind k);

/// Stability weights as functions of the profile value U in (0, u-):
///   w1 = U^-2, w2 = U^-1, w3 = U^-3,
///   w4 = U (U - u-) / g(U), w5 = (U - u-) / g(U).
/// w4 and w5 fall back to the exact polynomial quotient
/// g = U (U - u-) q(U) when |g(U)| < 1e-12 (1 + max |c_i|), which removes
/// the 0/0 at the end states. Throws ValidationError for U outside (0, u-).
double weight_eval(WeightKind kind, double u, const ShockData& shock, const FluxSpec& flux);
double weight_eval(WeightKind kind, double u, const ShockFunction& g, double coefficient_scale);

struct ShiftEstimate {
    /// Shift used downstream: the root of sum (u0_i - U(z_i + x0)) dz = 0,
    /// i.e. the whole-line identity restricted to the grid.
    double x0 = 0.0;
    /// -(1/u-) times the in-domain integral of u0 - U alone.
    double interior = 0.0;
    /// Tail correction beyond the grid, so that interior + tail is the
    /// whole-line value -(1/u-) int_R (u0 - U).
    double tail = 0.0;
    double whole_line() const { return interior + tail; }
    /// Set when |tail| exceeds 1e-4 |x0|.
    std::optional<std::string> warning;
};

/// Integral of u - U over one tail beyond the grid, modelling the
/// perturbation there as a local translation of the profile matched at
/// the outermost cell: int (U(z + d) - U(z)) dz. `at_right` selects the
/// tail; `z_edge` is the domain edge; `cell_z` and `cell_error` describe
/// the outermost cell.
double tail_mass(const ProfileTable& profile, bool at_right, double z_edge, double cell_z, double cell_error);

/// Shift x0 with the sign fixed so that u0 = U(. + a) yields x0 = a.
/// `z` are uniform cell centers, `u0` the cell values.
ShiftEstimate compute_shift(std::span<const double> z, std::span<const double> u0, const ProfileTable& profile);

/// Anti-derivative phi of the perturbation about U(z - drift t + x0).
struct PerturbationField {
    std::vector<double> z;
    std::vector<double> profile_u;  // shifted U at the grid
    std::vector<double> phi;
    std::vector<double> phi_z;      // u - U, pointwise
    std::vector<double> phi_zz;     // divided differences of phi_z
    std::vector<double> phi_zzz;    // divided differences of phi_zz
    double dz = 0.0;
    double shift_x0 = 0.0;
    double mass_defect = 0.0;       // int (u - U) over the domain
};

/// `profile_offset` is added to z before evaluating U, i.e. U(z + offset).
PerturbationField antiderivative(std::span<const double> z, std::span<const double> u, const ProfileTable& profile,
                                 double profile_offset, double shift_x0);

/// Builds the field from precomputed profile values (used by the snapshot
/// post-processor, where U is read from file).
PerturbationField antiderivative_from_values(std::span<const double> z, std::span<const double> u,
                                             std::span<const double> profile_u, double shift_x0);

/// Weighted L2 norms (not squared). h1 variants include the next derivative.
struct NormBundle {
    double phi = 0.0;           // ||phi||
    double phi_w4 = 0.0;        // ||phi||_{w4}
    double phi_z = 0.0;         // ||phi_z||
    double phi_z_w1 = 0.0;      // ||phi_z||_{w1}
    double phi_z_h1_w1 = 0.0;   // ||phi_z||_{1,w1}
    double phi_z_w2 = 0.0;      // ||phi_z||_{w2}
    double phi_z_w5 = 0.0;      // ||phi_z||_{w5}
    double phi_zz_h1_w3 = 0.0;  // ||phi_zz||_{1,w3}
};

NormBundle weighted_norms(const PerturbationField& field, const ProfileTable& profile);

struct RemainderReport {
    double r_f = 0.0;            // max |F| / phi_z^2
    double r_g = 0.0;            // max |G| U^2 / phi_z^2
    double max_relative = 0.0;   // max |phi_z / U|
    int positivity_violations = 0;
    std::optional<double> first_violation_z;
};

/// F = -(f(U + phi_z) - f(U) - f'(U) phi_z), G = ln(U + phi_z) - ln U - phi_z / U.
/// Cells where U + phi_z <= 0 are skipped and reported.
RemainderReport nonlinear_remainders(const PerturbationField& field, const FluxSpec& flux);

struct DiagnosticsRow {
    double t = 0.0;
    double sup_err = 0.0;
    double mass_defect = 0.0;
    NormBundle norms;
    double n_t = 0.0;  // N(t): running sup of ||phi|| + ||phi_z||_{1,w1}
    double r_f = 0.0;
    double r_g = 0.0;
    double max_relative = 0.0;
    /// int_0^t (||phi_z||_{w2}^2 + ||phi_z||_{w5}^2 + ||phi_zz||_{1,w3}^2)
    double dissipation = 0.0;
    int positivity_violations = 0;
};

struct DiagnosticsRecord {
    double shift_x0 = 0.0;
    std::vector<DiagnosticsRow> rows;
};

/// Column names of the diagnostics CSV, in order.
const std::vector<std::string>& diagnostics_columns();
std::vector<double> row_values(const DiagnosticsRow& row);
DiagnosticsRow row_from_values(std::span<const double> values);

/// Sequential fold building a DiagnosticsRecord one sample at a time.
class DiagnosticsAccumulator {
public:
    explicit DiagnosticsAccumulator(double shift_x0) { record_.shift_x0 = shift_x0; }

    const DiagnosticsRow& add(double t, const PerturbationField& field, const ProfileTable& profile);
    const DiagnosticsRecord& record() const { return record_; }
    DiagnosticsRecord take() { return std::move(record_); }

private:
    DiagnosticsRecord record_;
};

struct MonitorReport {
    bool zero_perturbation = false;
    double initial_bracket = 0.0;
    double max_ratio = 0.0;
    double final_ratio = 0.0;
    std::vector<double> ratios;
    bool exceeded = false;
};

/// Ratio of [||phi||^2 + ||phi||_{w4}^2 + ||phi_z||_{1,w1}^2 + dissipation]
/// to the same bracket at t = 0 without the time integral. Flags ratios
/// above `ceiling`. A vanishing initial bracket yields the
/// zero_perturbation sentinel and no ratios.
MonitorReport apriori_monitor(const DiagnosticsRecord& record, double ceiling = 100.0);

/// Recomputes N(t) from the stored norms (running sup).
std::vector<double> recompute_n(const DiagnosticsRecord& record);

}  // namespace fdshock
