#include "acceptance.hpp"

#include "fdshock/cases.hpp"
#include "fdshock/diagnostics.hpp"
#include "fdshock/flux.hpp"
#include "fdshock/io.hpp"
#include "fdshock/profile.hpp"
#include "fdshock/run.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace fdshock::cli {

namespace {

// Baseline drift of the profile-initialized run (t = 10, z in [-30, 100]),
// measured at 5.3e-3 (400 cells) and 1.3e-3 (800 cells); thresholds allow 1.5x.
constexpr double kDrift400 = 8e-3;
constexpr double kDrift800 = 2e-3;
constexpr double kPerturbation = 0.01;

struct SteadyRuns {
    double drift400 = 0.0;
    double drift800 = 0.0;
    double mass_rate = 0.0;
    double domain = 0.0;
    bool done = false;
};

struct Context {
    const AcceptanceOptions& options;
    std::ostream* log;
    std::map<int, std::shared_ptr<const ProfileTable>> profiles;
    SteadyRuns steady;
    std::map<int, RunResult> small;

    void say(const std::string& msg) const {
        if (log) {
            *log << "[verify] " << msg << '\n';
        }
    }

    std::shared_ptr<const ProfileTable> profile(int id) {
        auto it = profiles.find(id);
        if (it != profiles.end()) {
            return it->second;
        }
        const CaseDefinition c = builtin_case(id);
        const FluxSpec flux(c.flux);
        auto table = std::make_shared<const ProfileTable>(build_profile(analyze_shock(flux, c.u_minus), flux));
        profiles.emplace(id, table);
        return table;
    }

    void save(const RunSpec& spec, const RunResult& result, const std::string& name,
              std::vector<std::pair<std::string, double>> notes = {}) const {
        if (options.output_dir) {
            write_run(spec, result, *options.output_dir / name, std::move(notes));
        }
    }
};

std::string fmt(double v, int precision = 4) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

CriterionResult shock_speeds(Context&) {
    CriterionResult r;
    const std::map<int, std::string> expected{{1, "1"}, {2, "2"}, {3, "1/2"}};
    r.passed = true;
    for (const auto& [id, want] : expected) {
        const CaseDefinition c = builtin_case(id);
        const FluxSpec flux(c.flux);
        const std::string got = shock_speed_exact(flux, c.u_minus);
        const bool ok = got == want;
        r.passed = r.passed && ok;
        r.detail += "case" + std::to_string(id) + " s=" + got + (ok ? " " : " (expected " + want + ") ");
    }
    return r;
}

CriterionResult classification(Context&) {
    CriterionResult r;
    struct Want {
        ShockClass cls;
        int k_plus;
        int k_minus;
    };
    const std::map<int, Want> expected{{1, {ShockClass::Nondegenerate, 0, 0}},
                                       {2, {ShockClass::DegeneratePlus, 1, 0}},
                                       {3, {ShockClass::DegenerateMinus, 0, 1}}};
    r.passed = true;
    for (const auto& [id, want] : expected) {
        const CaseDefinition c = builtin_case(id);
        const FluxSpec flux(c.flux);
        const ShockData s = analyze_shock(flux, c.u_minus);
        bool ok = s.shock_class == want.cls && s.k_plus == want.k_plus && s.k_minus == want.k_minus;
        // the labels f'(0) = s and s = f'(u-) of the degenerate cases
        if (id == 2) {
            ok = ok && flux.derivative_at(0.0, 1) == s.speed;
        }
        if (id == 3) {
            ok = ok && flux.derivative_at(c.u_minus, 1) == s.speed;
        }
        r.passed = r.passed && ok;
        r.detail += "case" + std::to_string(id) + " " + std::string(to_string(s.shock_class)) +
                    " k+=" + std::to_string(s.k_plus) + " k-=" + std::to_string(s.k_minus) + (ok ? "; " : " MISMATCH; ");
    }
    return r;
}

double closed_form_case1(double u) {
    return 0.5 * std::log((2.0 - u) / u) + 1.0 / u - 1.0;
}

CriterionResult profile_oracle(Context& ctx) {
    CriterionResult r;
    const auto table = ctx.profile(1);
    double worst = 0.0;
    double worst_u = 0.0;
    const int n = 1001;
    for (int i = 0; i < n; ++i) {
        const double u = 0.05 + 1.9 * i / (n - 1);
        const double err = std::abs(table->coordinate_of(u) - closed_form_case1(u));
        if (err > worst) {
            worst = err;
            worst_u = u;
        }
    }
    double worst_node = 0.0;
    for (std::size_t i = 0; i < table->size(); ++i) {
        const double u = table->u()[i];
        if (u >= 0.05 && u <= 1.95) {
            worst_node = std::max(worst_node, std::abs(table->z()[i] - closed_form_case1(u)));
        }
    }
    r.passed = worst <= 1e-8 && worst_node <= 1e-8;
    r.detail = "max |H - closed form| = " + fmt(worst, 3) + " at U=" + fmt(worst_u) + ", at nodes " +
               fmt(worst_node, 3) + " (tol 1e-8)";
    return r;
}

CriterionResult tail_rates(Context& ctx) {
    CriterionResult r;
    const RateReport r1 = decay_rate_check(*ctx.profile(1), Side::Right, 50.0, 500.0);
    const RateReport r2 = decay_rate_check(*ctx.profile(2), Side::Right, 100.0, 1000.0);
    const RateReport l1 = decay_rate_check(*ctx.profile(1), Side::Left);
    const RateReport l3 = decay_rate_check(*ctx.profile(3), Side::Left);
    const bool ok1 = std::abs(r1.fitted + 1.0) <= 0.05;
    const bool ok2 = std::abs(r2.fitted + 0.5) <= 0.05;
    const bool ok3 = std::abs(l1.fitted - 2.0) <= 0.05 * 2.0;
    const bool ok4 = std::abs(l3.fitted + 1.0) <= 0.1;
    r.passed = ok1 && ok2 && ok3 && ok4;
    r.detail = "case1 right " + fmt(r1.fitted, 5) + " (-1+-0.05), case2 right " + fmt(r2.fitted, 5) +
               " (-0.5+-0.05), case1 left rate " + fmt(l1.fitted, 5) + " (2+-5%), case3 left " + fmt(l3.fitted, 5) +
               " (-1+-0.1)";
    return r;
}

double max_sup(const DiagnosticsRecord& rec) {
    double m = 0.0;
    for (const auto& row : rec.rows) {
        m = std::max(m, row.sup_err);
    }
    return m;
}

SteadyRuns& steady_runs(Context& ctx) {
    SteadyRuns& runs = ctx.steady;
    if (runs.done) {
        return runs;
    }
    for (int n : {400, 800}) {
        RunSpec spec = case_spec(1);
        spec.initial.kind = InitialData::Kind::Profile;
        spec.config.z_left = -30.0;
        spec.config.z_right = 100.0;
        spec.config.n_cells = n;
        spec.config.t_end = 10.0;
        ctx.say("steady profile run, " + std::to_string(n) + " cells");
        const RunResult res = run_case(spec, ctx.profile(1));
        const double drift = max_sup(res.record);
        (n == 400 ? runs.drift400 : runs.drift800) = drift;
        if (n == 800) {
            const auto& rows = res.record.rows;
            for (std::size_t i = 1; i < rows.size(); ++i) {
                const double rate = std::abs(rows[i].mass_defect - rows[i - 1].mass_defect) / (rows[i].t - rows[i - 1].t);
                runs.mass_rate = std::max(runs.mass_rate, rate);
            }
            runs.domain = spec.config.z_right - spec.config.z_left;
        }
        ctx.save(spec, res, "steady_n" + std::to_string(n),
                 {{"drift_sup", drift}, {"drift_threshold", n == 400 ? kDrift400 : kDrift800}});
    }
    runs.done = true;
    return runs;
}

CriterionResult steady_state(Context& ctx) {
    CriterionResult r;
    const SteadyRuns& s = steady_runs(ctx);
    const double ratio = s.drift400 / s.drift800;
    r.passed = ratio >= 3.5 && s.drift400 <= kDrift400 && s.drift800 <= kDrift800;
    r.detail = "drift 400 cells " + fmt(s.drift400, 3) + " (<= " + fmt(kDrift400) + "), 800 cells " +
               fmt(s.drift800, 3) + " (<= " + fmt(kDrift800) + "), ratio " + fmt(ratio) + " (>= 3.5)";
    return r;
}

CriterionResult mass_conservation(Context& ctx) {
    CriterionResult r;
    const SteadyRuns& s = steady_runs(ctx);
    const double bound = 1e-6 * s.domain;
    r.passed = s.mass_rate <= bound;
    r.detail = "max |d/dt int(u - U)| = " + fmt(s.mass_rate, 3) + " (<= " + fmt(bound, 3) + ")";
    return r;
}

// Smallest sup |u - U(. + a)| over translates a, for reporting only.
std::pair<double, double> best_translate(const SimState& state, const ProfileTable& profile, double guess) {
    auto misfit = [&](double a) {
        double m = 0.0;
        for (std::size_t i = 0; i < state.z.size(); ++i) {
            m = std::max(m, std::abs(state.u[i] - profile.eval(state.z[i] + a)));
        }
        return m;
    };
    double best_a = guess;
    double best = misfit(guess);
    for (double a = guess - 5.0; a <= guess + 5.0; a += 0.01) {
        const double m = misfit(a);
        if (m < best) {
            best = m;
            best_a = a;
        }
    }
    std::uintmax_t iterations = 100;
    const auto r = boost::math::tools::brent_find_minima(misfit, best_a - 0.01, best_a + 0.01, 40, iterations);
    return {r.first, r.second};
}

CriterionResult stability(Context& ctx) {
    CriterionResult r;
    r.passed = true;
    for (int id : {1, 2, 3}) {
        const RunSpec spec = case_spec(id);
        ctx.say("stability run, case " + std::to_string(id));
        const RunResult res = run_case(spec, ctx.profile(id));
        ctx.save(spec, res, "case" + std::to_string(id));
        const auto& rows = res.record.rows;
        const double s0 = rows.front().sup_err;
        const double s1 = rows.back().sup_err;
        const bool decayed = s1 < 0.1 * s0;
        bool monotone = true;
        const double t_quarter = 0.75 * spec.config.t_end;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i - 1].t >= t_quarter && rows[i].sup_err > 1.01 * rows[i - 1].sup_err) {
                monotone = false;
            }
        }
        const bool ok = decayed && monotone;
        r.passed = r.passed && ok;
        const auto [a, fit] = best_translate(res.snapshots.back(), *res.profile, res.shift.x0);
        r.detail += "case" + std::to_string(id) + " sup_err " + fmt(s0, 3) + " -> " + fmt(s1, 3) + " (ratio " +
                    fmt(s1 / s0, 3) + (decayed ? "" : " > 0.1") + (monotone ? ", tail monotone" : ", tail not monotone") +
                    "; x0 " + fmt(res.shift.x0) + ", nearest translate a " + fmt(a) + " at " + fmt(fit, 3) +
                    (ok ? "); " : ") FAIL; ");
    }
    return r;
}

std::map<int, RunResult>& small_runs(Context& ctx) {
    std::map<int, RunResult>& runs = ctx.small;
    if (!runs.empty()) {
        return runs;
    }
    for (int id : {1, 2, 3}) {
        RunSpec spec = case_spec(id);
        spec.initial.kind = InitialData::Kind::Profile;
        spec.initial.amplitude = kPerturbation;
        ctx.say("small-perturbation run, case " + std::to_string(id));
        RunResult res = run_case(spec, ctx.profile(id));
        ctx.save(spec, res, "small_case" + std::to_string(id));
        runs.emplace(id, std::move(res));
    }
    return runs;
}

CriterionResult remainder_monitors(Context& ctx) {
    CriterionResult r;
    const RunResult& res = small_runs(ctx).at(1);
    const auto& rows = res.record.rows;
    const double rf0 = rows.front().r_f;
    const double rg0 = rows.front().r_g;
    double rg_small = 0.0;
    double rf_max = 0.0;
    double rg_max = 0.0;
    int small = 0;
    for (const auto& row : rows) {
        if (row.max_relative <= 0.1) {
            rg_small = std::max(rg_small, row.r_g);
            ++small;
        }
        rf_max = std::max(rf_max, row.r_f);
        rg_max = std::max(rg_max, row.r_g);
    }
    const bool ok_bound = rg_small <= 0.6;
    const bool ok_growth = rf_max <= 10.0 * rf0 && rg_max <= 10.0 * rg0;
    r.passed = ok_bound && ok_growth && small > 0;
    r.detail = "R_G <= " + fmt(rg_small) + " on " + std::to_string(small) + "/" + std::to_string(rows.size()) +
               " samples with |phi_z/U| <= 0.1 (<= 0.6); max R_F " + fmt(rf_max) + " vs initial " + fmt(rf0) +
               ", max R_G " + fmt(rg_max) + " vs initial " + fmt(rg0) + " (<= 10x)";
    return r;
}

CriterionResult apriori(Context& ctx) {
    CriterionResult r;
    r.passed = true;
    for (auto& [id, res] : small_runs(ctx)) {
        const MonitorReport m = apriori_monitor(res.record, 100.0);
        const bool ok = !m.zero_perturbation && !m.exceeded;
        r.passed = r.passed && ok;
        r.detail += "case" + std::to_string(id) + " max ratio " + fmt(m.max_ratio) + (ok ? "; " : " FAIL; ");
    }
    r.detail += "ceiling 100";
    return r;
}

const std::vector<std::pair<std::string, std::function<CriterionResult(Context&)>>>& table() {
    static const std::vector<std::pair<std::string, std::function<CriterionResult(Context&)>>> t{
        {"shock-speeds", shock_speeds},
        {"classification", classification},
        {"profile-oracle", profile_oracle},
        {"tail-rates", tail_rates},
        {"steady-state", steady_state},
        {"mass-conservation", mass_conservation},
        {"stability", stability},
        {"remainder-monitors", remainder_monitors},
        {"apriori-monitor", apriori},
    };
    return t;
}

}  // namespace

const std::vector<std::string>& criterion_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> out;
        for (const auto& [id, fn] : table()) {
            out.push_back(id);
        }
        return out;
    }();
    return ids;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream* log) {
    Context ctx{options, log, {}, {}, {}};
    std::vector<CriterionResult> results;
    for (const auto& [id, fn] : table()) {
        if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end()) {
            continue;
        }
        const auto started = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = fn(ctx);
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("error: ") + e.what();
        }
        r.id = id;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        results.push_back(r);
    }
    return results;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os.precision(3);
    os << (r.passed ? "PASS " : "FAIL ") << r.id << " (" << r.seconds << " s): " << r.detail;
    return os.str();
}

}  // namespace fdshock::cli
