#include "sobconst/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cfloat>
#include <cmath>
#include <exception>
#include <optional>
#include <ostream>
#include <random>
#include <thread>

#include "sobconst/constants.hpp"
#include "sobconst/interpolation.hpp"
#include "sobconst/kernel.hpp"
#include "sobconst/series.hpp"
#include "sobconst/spectral.hpp"

#ifndef SOBCONST_GOLDEN_DIR
#define SOBCONST_GOLDEN_DIR "golden"
#endif

namespace sobconst {

std::map<std::string, double> RunConfig::default_tolerances() {
    return {
        {"duality", 1e-12},        {"identity", 1e-10},        {"band_stability", 0.05},
        {"ipq_stability", 0.05},   {"weak_sup", 1e-6},         {"kernel_stability", 0.02},
        {"norm_agreement", 1e-8},  {"radius", 0.02},           {"spectral_exact", 1e-10},
        {"contraction", 1e-9},     {"embed_stability", 0.10},  {"resolution", 0.01},
        {"mt_moment", 0.01},       {"b1", 1e-10},              {"golden", 1e-8},
    };
}

double RunConfig::tolerance(const std::string& name) const {
    const auto it = tolerances.find(name);
    if (it == tolerances.end()) throw ConfigError("no tolerance named '" + name + "'");
    return it->second;
}

double RunConfig::spectral_tau() const { return tau_override.value_or(tau_delta(geometry)); }

void RunConfig::validate() const {
    geometry.validate();
    for (const auto& [name, tol] : tolerances) {
        if (!(tol > 0.0) || !std::isfinite(tol)) throw ConfigError("tolerance '" + name + "' must be positive");
    }
    if (tau_override && !(*tau_override >= 1.0)) throw ConfigError("tau must be >= 1");
    if (jobs < 1) throw ConfigError("--jobs must be >= 1");
}

namespace {

double to_number(const std::string& key, const std::string& value) {
    const auto list = parse_number_list(value);
    if (list.size() != 1) throw ConfigError("config key '" + key + "' expects a single number");
    return list.front();
}

}  // namespace

RunConfig parse_run_config(const std::string& text, RunConfig base) {
    const auto kv = parse_key_values(text);
    base.grid = parse_grid_config(text, base.grid);
    for (const auto& [key, value] : kv) {
        if (key == "p_values" || key == "alpha_fractions" || key == "d_values") continue;
        if (key == "D") {
            base.geometry.D = to_number(key, value);
        } else if (key == "b") {
            base.geometry.b = to_number(key, value);
        } else if (key == "c_heat") {
            base.geometry.c_heat = to_number(key, value);
        } else if (key == "c_delta") {
            base.geometry.c_delta = to_number(key, value);
        } else if (key == "c_chi") {
            base.geometry.c_chi = to_number(key, value);
        } else if (key == "c_delta_chi_inv") {
            base.geometry.c_delta_chi_inv = to_number(key, value);
        } else if (key == "tau") {
            base.tau_override = to_number(key, value);
        } else if (key.rfind("tol.", 0) == 0) {
            const std::string name = key.substr(4);
            if (!base.tolerances.count(name)) throw ConfigError("unknown tolerance '" + name + "'");
            base.tolerances[name] = to_number(key, value);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    base.validate();
    return base;
}

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"constants", "interp", "kernel", "embed", "mt", "verify-all"};
    return names;
}

std::string run_hash(const RunConfig& config) {
    std::string text = canonical_string(config.grid) + "|" + canonical_string(config.geometry) + "|tau=";
    text += config.tau_override ? format_number(*config.tau_override) : "default";
    return fingerprint(text);
}

namespace {

// Results land in index order whatever the thread count; the lowest-index exception is rethrown.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, int jobs, Fn&& fn) {
    std::vector<std::optional<T>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), n));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    std::vector<T> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

std::vector<std::string> with_check_columns(std::vector<std::string> inputs) {
    for (const char* c : {"check", "value", "bound", "margin", "pass"}) inputs.emplace_back(c);
    return inputs;
}

/// Pass/fail rows: margin >= 0 exactly when the check passes.
class Checks {
public:
    Checks(std::string name, std::vector<std::string> inputs, std::string hash) : inputs_(inputs.size()) {
        table_.name = std::move(name);
        table_.grid_hash = std::move(hash);
        table_.columns = with_check_columns(std::move(inputs));
    }

    void le(std::vector<Cell> key, const std::string& check, double value, double bound) {
        add(std::move(key), check, value, bound, bound - value);
    }
    void ge(std::vector<Cell> key, const std::string& check, double value, double bound) {
        add(std::move(key), check, value, bound, value - bound);
    }
    /// |value - reference| / |reference| <= tol
    void close(std::vector<Cell> key, const std::string& check, double value, double reference, double tol) {
        const double rel = std::abs(value - reference) / (reference == 0.0 ? 1.0 : std::abs(reference));
        le(std::move(key), check, rel, tol);
    }

    ResultTable finish(std::vector<std::string>& failures) {
        table_.sort_rows(inputs_ + 1);
        const std::size_t pass_col = table_.columns.size() - 1;
        for (const auto& row : table_.rows) {
            if (std::get<std::string>(row[pass_col]) == "pass") continue;
            std::string msg = table_.name + ":";
            for (std::size_t i = 0; i < pass_col; ++i) {
                const Cell& c = row[i];
                msg += " " + table_.columns[i] + "=" +
                       (std::holds_alternative<double>(c) ? format_number(std::get<double>(c)) : std::get<std::string>(c));
            }
            failures.push_back(msg);
        }
        return table_;
    }

private:
    void add(std::vector<Cell> key, const std::string& check, double value, double bound, double margin) {
        const bool pass = std::isfinite(margin) && margin >= 0.0;
        key.emplace_back(check);
        key.emplace_back(value);
        key.emplace_back(bound);
        key.emplace_back(margin);
        key.emplace_back(std::string(pass ? "pass" : "fail"));
        table_.add_row(std::move(key));
    }

    ResultTable table_;
    std::size_t inputs_;
};

class Fitted {
public:
    Fitted(std::string name, std::string hash) {
        table_.name = std::move(name);
        table_.grid_hash = std::move(hash);
        table_.columns = {"key", "value"};
    }
    void add(const std::string& key, double value) { table_.add_row({key, value}); }
    ResultTable finish() {
        table_.sort_rows(1);
        return table_;
    }

private:
    ResultTable table_;
};

ResultTable make_table(std::string name, std::string hash, std::vector<std::string> columns) {
    ResultTable t;
    t.name = std::move(name);
    t.grid_hash = std::move(hash);
    t.columns = std::move(columns);
    return t;
}

std::vector<Cell> pair_key(const ExponentPair& pair) {
    return {static_cast<double>(pair.d()), pair.p(), pair.alpha(), pair.q()};
}

const std::vector<std::string> kPairColumns{"d", "p", "alpha", "q"};

std::string dkey(const std::string& stem, int d) { return stem + "_d" + std::to_string(d); }

// ---------------------------------------------------------------- constants

void comparability_checks(Checks& checks, const ExponentPair& pair, const ConstantReport& r) {
    const auto key = pair_key(pair);
    if (pair.q() >= pair.p_conj()) {
        checks.le(key, "F<=4Q", r.F, 4.0 * r.Q);
        checks.ge(key, "F>=Q/4", r.F, 0.25 * r.Q);
        checks.le(key, "Q<=Q_dual", r.Q, r.Q_dual);
    }
    checks.ge(key, "F>=S/4", r.F, 0.25 * r.S);
}

struct Band {
    double max = 0.0;
    double min = HUGE_VAL;
};

std::map<int, Band> comparability_band(const std::vector<ExponentPair>& pairs, int jobs) {
    const auto ratios =
        parallel_map<double>(pairs.size(), jobs, [&](std::size_t i) { return lieb_upper_bound(pairs[i]) / S(pairs[i]); });
    std::map<int, Band> bands;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        Band& b = bands[pairs[i].d()];
        b.max = std::max(b.max, ratios[i]);
        b.min = std::min(b.min, ratios[i]);
    }
    return bands;
}

void duality_checks(Checks& checks, const RunConfig& cfg) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> log_gap(std::log(1e-3), std::log(50.0));
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    std::uniform_int_distribution<int> dim(1, 8);
    double worst_s = 0.0;
    double worst_f = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double p = 1.0 + std::exp(log_gap(rng));
        const int d = dim(rng);
        const double alpha = frac(rng) * 0.999 * d / p;
        const ExponentPair pair(p, alpha, d);
        const ExponentPair dual = pair.dual();
        const double s = S(pair);
        const double f = F(pair);
        worst_s = std::max(worst_s, std::abs(s - S(dual)) / s);
        worst_f = std::max(worst_f, std::abs(f - F(dual)) / f);
    }
    const double tol = cfg.tolerance("duality");
    checks.le({"random_10000"}, "S(p,q)=S(q',p')", worst_s, tol);
    checks.le({"random_10000"}, "F(p,q)=F(q',p')", worst_f, tol);
}

RunOutcome run_constants(const RunConfig& cfg) {
    const std::string hash = run_hash(cfg);
    RunOutcome out;
    auto table = make_table("constants", hash, {"d", "p", "alpha", "q", "S", "Q", "Q_dual", "F", "E_H", "E_H_over_S"});
    Checks checks("constants_checks", kPairColumns, hash);

    const auto add_report = [&](const ConstantReport& r) {
        auto row = pair_key(r.pair);
        const double nan = std::nan("");
        for (double v : {r.S, r.Q, r.Q_dual, r.F, r.E_H_tilde.value_or(nan), r.ratio_EH_over_S.value_or(nan)}) {
            row.emplace_back(v);
        }
        table.add_row(std::move(row));
        comparability_checks(checks, r.pair, r);
    };

    if (cfg.p) {
        const int d = cfg.d.value_or(cfg.geometry.d);
        std::optional<ExponentPair> pair;
        if (cfg.q) {
            pair = pair_from_pq(*cfg.p, *cfg.q, d);
        } else if (cfg.alpha) {
            pair = sobolev_pair(*cfg.p, *cfg.alpha, d);
        } else {
            throw ConfigError("constants --p needs --q or --alpha");
        }
        add_report(constant_report(*pair));
        out.tables.push_back(table);
        out.tables.push_back(checks.finish(out.failures));
        return out;
    }

    const auto pairs = make_grid(cfg.grid);
    const auto reports =
        parallel_map<ConstantReport>(pairs.size(), cfg.jobs, [&](std::size_t i) { return constant_report(pairs[i]); });
    for (const auto& r : reports) add_report(r);
    table.sort_rows(4);

    Checks symmetry("constants_symmetry", {"case"}, hash);
    duality_checks(symmetry, cfg);
    for (double alpha : {0.5, 1.0, 2.0}) {
        symmetry.close({"alpha=" + format_number(alpha)}, "b1=2", b1_multiplier_bound(alpha), 2.0, cfg.tolerance("b1"));
    }
    for (double alpha : {2.5, 3.0, 3.5}) {
        symmetry.le({"alpha=" + format_number(alpha)}, "b1 finite", b1_multiplier_bound(alpha), DBL_MAX);
    }

    auto band_table = make_table("constants_band", hash, {"d", "grid", "max", "min", "max_over_min"});
    Checks band_checks("constants_band_checks", {"d"}, hash);
    Fitted fitted("constants_fitted", hash);
    const auto base = comparability_band(pairs, cfg.jobs);
    const auto refined = comparability_band(make_grid(refine_grid(cfg.grid)), cfg.jobs);
    const double tol = cfg.tolerance("band_stability");
    for (const auto& [d, b] : base) {
        const Band& r = refined.at(d);
        band_table.add_row({static_cast<double>(d), std::string("default"), b.max, b.min, b.max / b.min});
        band_table.add_row({static_cast<double>(d), std::string("refined"), r.max, r.min, r.max / r.min});
        const double dd = d;
        band_checks.le({dd}, "band finite", b.max / b.min, DBL_MAX);
        band_checks.close({dd}, "max stable under refinement", r.max, b.max, tol);
        band_checks.close({dd}, "min stable under refinement", r.min, b.min, tol);
        fitted.add(dkey("B3_max", d), b.max);
        fitted.add(dkey("B3_min", d), b.min);
        fitted.add(dkey("B3", d), b.max / b.min);
    }

    out.tables.push_back(table);
    out.tables.push_back(checks.finish(out.failures));
    out.tables.push_back(symmetry.finish(out.failures));
    out.tables.push_back(band_table);
    out.tables.push_back(band_checks.finish(out.failures));
    out.fitted.push_back(fitted.finish());
    return out;
}

// ---------------------------------------------------------------- interp

std::map<int, double> ipq_fit(const std::vector<MarcinkiewiczData>& data) {
    std::map<int, double> fit;
    for (const auto& m : data) fit[m.pair.d()] = std::max(fit[m.pair.d()], m.ratio);
    return fit;
}

double global_max(const std::map<int, double>& fit) {
    double best = 0.0;
    for (const auto& [d, v] : fit) best = std::max(best, v);
    return best;
}

RunOutcome run_interp(const RunConfig& cfg) {
    const std::string hash = run_hash(cfg);
    RunOutcome out;
    const auto pairs = make_grid(cfg.grid);
    const auto data =
        parallel_map<MarcinkiewiczData>(pairs.size(), cfg.jobs, [&](std::size_t i) { return assemble(pairs[i]); });
    const auto refined_pairs = make_grid(refine_grid(cfg.grid));
    const auto refined = parallel_map<MarcinkiewiczData>(refined_pairs.size(), cfg.jobs,
                                                         [&](std::size_t i) { return assemble(refined_pairs[i]); });

    auto table = make_table("interp", hash,
                            {"d", "p", "alpha", "q", "theta", "M0", "M1", "M2", "assembled", "ipq_shape", "ratio",
                             "final_bound"});
    Checks checks("interp_checks", kPairColumns, hash);
    const double tol = cfg.tolerance("identity");
    for (const auto& m : data) {
        auto row = pair_key(m.pair);
        for (double v : {m.theta, m.M0, m.M1, m.M2, m.assembled, m.ipq_rhs_shape, m.ratio, m.final_bound}) {
            row.emplace_back(v);
        }
        table.add_row(std::move(row));
        const auto key = pair_key(m.pair);
        const double p = m.pair.p();
        const double q = m.pair.q();
        checks.le(key, "1/p convex", std::abs(1.0 / p - ((1.0 - m.theta) / m.p1 + m.theta / m.p2)) * p, tol);
        checks.le(key, "1/q convex", std::abs(1.0 / q - ((1.0 - m.theta) / m.q1 + m.theta / m.q2)) * q, tol);
        checks.le(key, "M1<=d/alpha", m.M1, m.m1_bound);
        checks.le(key, "M0<=eq+C", m.M0, m.m0_bound);
        checks.le(key, "M2^theta bound", m.m2_theta, m.m2_theta_bound);
        checks.le(key, "final bound", m.assembled, m.final_bound);
    }
    table.sort_rows(4);

    Checks fit_checks("interp_fit_checks", {"d"}, hash);
    Fitted fitted("interp_fitted", hash);
    const auto base_fit = ipq_fit(data);
    const auto refined_fit = ipq_fit(refined);
    const double stab = cfg.tolerance("ipq_stability");
    for (const auto& [d, c] : base_fit) {
        fit_checks.close({static_cast<double>(d)}, "Ipq C stable", refined_fit.at(d), c, stab);
        fitted.add(dkey("Ipq_C", d), c);
    }
    fit_checks.close({0.0}, "Ipq C stable (all d)", global_max(refined_fit), global_max(base_fit), stab);
    fitted.add("Ipq_C", global_max(base_fit));

    Checks weak("interp_weak_sup", {"p_t", "q_t"}, hash);
    const double weak_tol = cfg.tolerance("weak_sup");
    for (double pt : {1.1, 1.5, 2.0, 3.0, 5.0}) {
        for (double m : {1.1, 1.5, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0, 34.0, 55.0}) {
            const double v = weak_sup_factor(pt, pt * m);
            weak.le({pt, pt * m}, "sup<=1", v, 1.0 + 1e-12);
            weak.ge({pt, pt * m}, "sup>=1-tol", v, 1.0 - weak_tol);
        }
    }

    out.tables.push_back(table);
    out.tables.push_back(checks.finish(out.failures));
    out.tables.push_back(fit_checks.finish(out.failures));
    out.tables.push_back(weak.finish(out.failures));
    out.fitted.push_back(fitted.finish());
    return out;
}

// ---------------------------------------------------------------- kernel

struct KernelCase {
    int d;
    double fraction;
};

struct KernelResult {
    double local, local_tight, global, global_chi, threshold;
    bool rejected;
};

RunOutcome run_kernel(const RunConfig& cfg) {
    const std::string hash = run_hash(cfg);
    RunOutcome out;
    std::vector<KernelCase> cases;
    for (int d : {1, 2, 3}) {
        for (int i = 1; i <= 9; ++i) cases.push_back({d, i / 10.0});
    }
    const auto results = parallel_map<KernelResult>(cases.size(), cfg.jobs, [&](std::size_t i) {
        GroupGeometry g = cfg.geometry;
        g.d = cases[i].d;
        const double alpha = cases[i].fraction * g.d;
        const GreenKernelParams kp = delta_kernel_params(alpha, g);
        KernelResult r{};
        r.local = local_bound_constant(kp, 1e-8);
        r.local_tight = local_bound_constant(kp, 1e-9);
        r.global = global_bound_constant(kp, g, 1e-8);
        r.global_chi = global_bound_constant_chi(chi_kernel_params(alpha, g), g, 1e-8);
        const double shift = 2.0 * g.D + g.b0();
        r.threshold = 2.0 / g.b * shift * shift;
        GreenKernelParams below = kp;
        below.a = std::max(1.0, 0.5 * r.threshold);
        r.rejected = false;
        if (below.a < r.threshold) {
            try {
                global_bound_constant(below, g, 1e-8);
            } catch (const DomainError&) {
                r.rejected = true;
            }
        }
        return r;
    });

    auto table = make_table("kernel", hash, {"d", "alpha", "local_sup", "local_sup_tight", "global_sup", "global_sup_chi"});
    Checks checks("kernel_checks", {"d", "alpha"}, hash);
    Fitted fitted("kernel_fitted", hash);
    const double stab = cfg.tolerance("kernel_stability");
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& c = cases[i];
        const auto& r = results[i];
        const double alpha = c.fraction * c.d;
        const std::vector<Cell> key{static_cast<double>(c.d), alpha};
        table.add_row({static_cast<double>(c.d), alpha, r.local, r.local_tight, r.global, r.global_chi});
        checks.le(key, "local sup finite", r.local, DBL_MAX);
        checks.close(key, "local sup stable", r.local_tight, r.local, stab);
        checks.le(key, "global sup finite", r.global, DBL_MAX);
        checks.le(key, "global chi sup finite", r.global_chi, DBL_MAX);
        if (0.5 * r.threshold >= 1.0) checks.ge(key, "rejects a below threshold", r.rejected ? 1.0 : 0.0, 1.0);
        char frac[16];
        std::snprintf(frac, sizeof frac, "%.1f", c.fraction);
        fitted.add(dkey("local_sup", c.d) + "_f" + frac, r.local);
        fitted.add(dkey("global_sup", c.d) + "_f" + frac, r.global);
    }

    Checks norms("kernel_norm_checks", {"case"}, hash);
    const double agree = cfg.tolerance("norm_agreement");
    const RadialVolumeModel model{1, cfg.geometry.D, 1.0};
    for (int d : {1, 2, 3}) {
        for (double fraction : {0.25, 0.5, 0.75}) {
            const double alpha = fraction * d;
            for (double s : {0.25, 0.5, 1.0}) {
                for (double r : {1.0, 1.5, 2.0}) {
                    if (std::abs((alpha - d) * r + d) < 1e-9) continue;
                    RadialVolumeModel m = model;
                    m.d = d;
                    const auto closed = kalpha_norms(alpha, d, s, r, m);
                    const auto quad = kalpha_norms_quadrature(alpha, d, s, r, m, 1e-13);
                    char name[96];
                    std::snprintf(name, sizeof name, "d=%d alpha=%g s=%g r=%g", d, alpha, s, r);
                    norms.close({std::string(name)}, "L1 inner", quad.l1_inner, closed.l1_inner, agree);
                    norms.close({std::string(name)}, "Lr outer", quad.lrp_outer, closed.lrp_outer, agree);
                }
            }
        }
        for (double p : {1.5, 2.0, 3.0}) {
            for (double qm : {1.0, 2.0}) {
                RadialVolumeModel m = model;
                m.d = d;
                const double closed = chi_weighted_local_norm(p, p * qm, d, 2.0, m);
                const double quad = chi_weighted_local_norm_quadrature(p, p * qm, d, 2.0, m, 1e-13);
                char name[96];
                std::snprintf(name, sizeof name, "d=%d p=%g q=%g", d, p, p * qm);
                norms.close({std::string(name)}, "chi local", quad, closed, agree);
            }
        }
    }
    for (double t : {0.5, 1.0, 4.0, 100.0}) {
        const CutoffSchedule sched{CutoffSchedule::Mode::integrable, 2.0, 4.0, 1.0, 4};
        norms.close({"cutoff t=" + format_number(t)}, "Linf = t/2", cutoff_linf_bound(t, sched), t / 2.0,
                    cfg.tolerance("identity"));
        const CutoffSchedule endpoint{CutoffSchedule::Mode::endpoint, 1.0, 4.0 / 3.0, 1.0, 4};
        norms.le({"cutoff t=" + format_number(t)}, "endpoint Linf <= t", cutoff_linf_bound(t, endpoint), t);
    }

    auto shells = make_table("kernel_shells", hash, {"r", "tilde_k_norm", "chi_global_norm"});
    for (double r : {1.0, 1.5, 2.0, 4.0}) {
        const double tk = tilde_k_norm(r, cfg.geometry);
        const double cg = chi_global_norm(r, cfg.geometry);
        shells.add_row({r, tk, cg});
        fitted.add("tilde_k_norm_r" + format_number(r), tk);
    }

    out.tables.push_back(table);
    out.tables.push_back(checks.finish(out.failures));
    out.tables.push_back(norms.finish(out.failures));
    out.tables.push_back(shells);
    out.fitted.push_back(fitted.finish());
    return out;
}

// ---------------------------------------------------------------- embed

std::vector<double> base_widths() { return {0.5, 1.0, 2.0}; }
std::vector<double> refined_widths() { return {0.5, std::sqrt(0.5), 1.0, std::sqrt(2.0), 2.0}; }

struct SweepResult {
    std::string label;
    int dim;
    int n;
    EmbeddingSweep sweep;
};

double max_ratio_over_s_at(const EmbeddingSweep& s, double p) {
    double best = 0.0;
    for (const auto& r : s.rows) {
        if (r.pair.p() == p) best = std::max(best, r.ratio_over_S);
    }
    return best;
}

RunOutcome run_embed(const RunConfig& cfg) {
    const std::string hash = run_hash(cfg);
    const double tau = cfg.spectral_tau();
    RunOutcome out;
    std::vector<int> dims;
    for (int d : cfg.grid.d_values) {
        if (d == 1 || d == 2) dims.push_back(d);
    }
    const auto all_pairs = make_grid(cfg.grid);

    struct Job {
        std::string label;
        int dim;
        int n;
        std::vector<double> widths;
    };
    std::vector<Job> jobs;
    for (int dim : dims) {
        jobs.push_back({"n128", dim, 128, base_widths()});
        jobs.push_back({"n256", dim, 256, base_widths()});
        jobs.push_back({"n128_refined", dim, 128, refined_widths()});
    }
    const auto sweeps = parallel_map<SweepResult>(jobs.size(), cfg.jobs, [&](std::size_t i) {
        const Job& job = jobs[i];
        std::vector<ExponentPair> pairs;
        for (const auto& pr : all_pairs) {
            if (pr.d() == job.dim) pairs.push_back(pr);
        }
        const TorusGrid grid{job.dim, job.n, 16.0};
        return SweepResult{job.label, job.dim, job.n,
                           embedding_sweep({TrialFamily::Kind::gaussian, job.widths}, pairs, tau, grid)};
    });

    auto table = make_table("embed", hash, {"d", "sweep", "width", "p", "alpha", "q", "ratio", "ratio_over_S"});
    Checks checks("embed_checks", {"d", "case"}, hash);
    Fitted fitted("embed_fitted", hash);
    const double stab = cfg.tolerance("embed_stability");
    std::map<std::pair<int, std::string>, double> fit;
    for (const auto& s : sweeps) {
        bool all_positive = true;
        for (const auto& r : s.sweep.rows) {
            table.add_row({static_cast<double>(s.dim), s.label, r.width, r.pair.p(), r.pair.alpha(), r.pair.q(), r.ratio,
                           r.ratio_over_S});
            all_positive = all_positive && std::isfinite(r.ratio) && r.ratio > 0.0;
        }
        checks.ge({static_cast<double>(s.dim), s.label}, "ratios finite and positive", all_positive ? 1.0 : 0.0, 1.0);
        fit[{s.dim, s.label}] = s.sweep.fitted_A;
        if (!s.sweep.rows.empty()) {
            const double p_min = std::min_element(s.sweep.rows.begin(), s.sweep.rows.end(), [](const auto& a, const auto& b) {
                                     return a.pair.p() < b.pair.p();
                                 })->pair.p();
            checks.le({static_cast<double>(s.dim), s.label}, "ratio/S at smallest p <= fitted A",
                      max_ratio_over_s_at(s.sweep, p_min), s.sweep.fitted_A);
        }
    }
    table.sort_rows(6);
    for (int dim : dims) {
        const double dd = dim;
        const double a128 = fit.at({dim, "n128"});
        checks.close({dd, "n256 vs n128"}, "fitted A stable", fit.at({dim, "n256"}), a128, stab);
        checks.close({dd, "refined widths"}, "fitted A stable", fit.at({dim, "n128_refined"}), a128, stab);
        fitted.add(dkey("A1", dim), fit.at({dim, "n256"}));
    }

    // Transform sanity and the p = 2 contraction on the base family.
    const double exact = cfg.tolerance("spectral_exact");
    for (int dim : dims) {
        for (int n : {128, 256}) {
            const TorusGrid grid{dim, n, 16.0};
            const std::string label = "n=" + std::to_string(n);
            double roundtrip = 0.0;
            double parseval = 0.0;
            double contraction = 0.0;
            for (double w : base_widths()) {
                const SpectralField f = trial_member(TrialFamily::Kind::gaussian, w, grid);
                const SpectralField back = inverse_transform(grid, forward_transform(f));
                roundtrip = std::max(roundtrip, (back.values - f.values).abs().maxCoeff() / f.values.abs().maxCoeff());
                parseval = std::max(parseval, parseval_defect(f));
                contraction = std::max(contraction, embedding_ratio(f, ExponentPair(2.0, 0.0, dim), tau));
            }
            checks.le({static_cast<double>(dim), label}, "round trip", roundtrip, exact);
            checks.le({static_cast<double>(dim), label}, "parseval", parseval, exact);
            checks.le({static_cast<double>(dim), label}, "p=2 contraction at alpha=0", contraction,
                      1.0 + cfg.tolerance("contraction"));
        }
    }

    // Golden ratio for the width-1 Gaussian in two dimensions at two resolutions.
    if (std::find(dims.begin(), dims.end(), 2) != dims.end()) {
        const ExponentPair pair = pair_from_pq(2.0, 4.0, 2);
        double ratios[2];
        for (int i = 0; i < 2; ++i) {
            const TorusGrid grid{2, 128 << i, 16.0};
            ratios[i] = embedding_ratio(trial_member(TrialFamily::Kind::gaussian, 1.0, grid), pair, tau);
        }
        checks.close({2.0, "gaussian w=1 p=2 q=4"}, "resolution stable", ratios[1], ratios[0], cfg.tolerance("resolution"));
        fitted.add("ratio_gaussian_w1_p2_q4_d2", ratios[1]);
    }

    // Moser-Trudinger functional: small-gamma limit against the moment integral.
    {
        const TorusGrid grid{1, 256, 16.0};
        const SpectralField f = trial_member(TrialFamily::Kind::gaussian, 1.0, grid);
        for (double p : {2.0, 3.0}) {
            const int K = mt_tail_start(p);
            const double pc = conjugate_exponent(p);
            const double gamma = 1e-4;
            const double scaled = mt_functional(f, gamma, p) / std::pow(gamma, K);
            const double moment = std::pow(lp_norm(f, pc * K), pc * K) / std::tgamma(K + 1.0);
            checks.close({1.0, "p=" + format_number(p)}, "mt small-gamma limit", scaled, moment,
                         cfg.tolerance("mt_moment"));
        }
        double prev = 0.0;
        bool monotone = true;
        for (double gamma : {0.0, 0.01, 0.1, 0.5, 1.0, 2.0}) {
            const double v = mt_functional(f, gamma, 2.0);
            monotone = monotone && v >= prev;
            prev = v;
        }
        checks.ge({1.0, "p=2"}, "mt monotone in gamma", monotone ? 1.0 : 0.0, 1.0);
    }

    // Interpolation inequality on the Bessel scale.
    double c4[2] = {0.0, 0.0};
    {
        const double ones = cfg.tolerance("contraction");
        for (int i = 0; i < 2; ++i) {
            const TorusGrid grid{1, 128 << i, 16.0};
            for (double w : base_widths()) {
                const SpectralField f = trial_member(TrialFamily::Kind::gaussian, w, grid);
                const std::string label = "n=" + std::to_string(grid.n) + " w=" + format_number(w);
                checks.le({1.0, label}, "p=2 theta=1/2 ratio<=1", interpolation_check(f, 2.0, 1.0, 0.5, tau).ratio,
                          1.0 + ones);
                checks.le({1.0, label}, "theta=0 ratio=1",
                          std::abs(interpolation_check(f, 4.0, 1.0, 0.0, tau).ratio - 1.0), 0.0);
                checks.le({1.0, label}, "theta=1 ratio=1",
                          std::abs(interpolation_check(f, 4.0, 1.0, 1.0, tau).ratio - 1.0), 0.0);
                for (double theta : {0.25, 0.5, 0.75}) {
                    for (double alpha : {0.5, 1.0, 2.0}) {
                        c4[i] = std::max(c4[i], interpolation_check(f, 4.0, alpha, theta, tau).ratio);
                    }
                }
            }
        }
        checks.close({1.0, "C4"}, "resolution stable", c4[1], c4[0], cfg.tolerance("resolution"));
        fitted.add("C4_empirical", c4[1]);
    }

    // Gagliardo-type check, widths 1/8 .. 8 with a box scaled to each width.
    {
        const ExponentPair pair = pair_from_pq(2.0, 4.0, 1);
        double worst[2] = {0.0, 0.0};
        for (int i = 0; i < 2; ++i) {
            for (int e = -3; e <= 3; ++e) {
                const double w = std::ldexp(1.0, e);
                const TorusGrid grid{1, 128 << i, 16.0 * w};
                const auto g = gagliardo_interp_check(trial_member(TrialFamily::Kind::gaussian, w, grid), pair, tau);
                worst[i] = std::max(worst[i], g.lhs / g.rhs_shape);
            }
        }
        checks.le({1.0, "gagliardo"}, "ratio finite", worst[1], DBL_MAX);
        checks.close({1.0, "gagliardo"}, "resolution stable", worst[1], worst[0], cfg.tolerance("resolution"));
        fitted.add("gagliardo_C", worst[1]);
    }

    out.tables.push_back(table);
    out.tables.push_back(checks.finish(out.failures));
    out.fitted.push_back(fitted.finish());
    return out;
}

// ---------------------------------------------------------------- mt

RunOutcome run_mt(const RunConfig& cfg) {
    const std::string hash = run_hash(cfg);
    RunOutcome out;
    auto table = make_table("mt", hash, {"p", "c", "radius", "closed_form", "radius_times_L"});
    Checks checks("mt_checks", {"p", "c"}, hash);
    Fitted fitted("mt_fitted", hash);
    const double tol = cfg.tolerance("radius");
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
        for (double c : {0.5, 1.0, 2.0}) {
            const MTSeriesSpec spec{p, c, 1000};
            const double radius = mt_series_radius(spec);
            const double closed = mt_radius_closed_form(spec);
            table.add_row({p, c, radius, closed, radius / closed});
            checks.ge({p, c}, "radius*L >= 1-tol", radius / closed, 1.0 - tol);
            checks.le({p, c}, "radius*L <= 1+tol", radius / closed, 1.0 + tol);
            const double pc = conjugate_exponent(p);
            const double g1 = gamma_one(p, 1.0, c / (pc - 1.0));
            checks.close({p, c}, "gamma_one closed form", g1, closed, cfg.tolerance("identity"));
            checks.le({p, c}, "ratio crossings below radius", mt_ratio_crossings(spec, 0.9 * radius, spec.k_max), 0.0);
            const double once = mt_ratio_crossings(spec, 1.1 * radius, spec.k_max);
            checks.le({p, c}, "ratio crosses once above radius", std::abs(once - 1.0), 0.0);
        }
        int violations = 0;
        for (int k = std::max(1, static_cast<int>(std::ceil(p - 1.0))); k <= 200; ++k) {
            violations += mt_majorant_check(p, k).holds ? 0 : 1;
        }
        checks.le({p, std::nan("")}, "majorant violations k<=200", violations, 0.0);
    }
    const MTSeriesSpec base{2.0, 1.0, 1000};
    const double stirling = 1.0 / (2.0 * std::exp(1.0));
    checks.close({2.0, 1.0}, "radius = 1/(2e)", mt_series_radius(base), stirling, tol);
    const double partial = mt_series_partial(base, 0.1, 50);
    fitted.add("partial_p2_c1_g0.1_K50", partial);
    fitted.add("radius_p2_c1", mt_series_radius(base));
    fitted.add("radius_p2_c2", mt_series_radius({2.0, 2.0, 1000}));

    Checks div("mt_divergence", {"case"}, hash);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int violations = 0;
    double worst_equal = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double p = 1.05 + 6.0 * unit(rng);
        const double gamma = std::exp(std::log(1e-2) + std::log(1e3) * unit(rng));
        const double sigma = 1.0 + 9.0 * unit(rng) * unit(rng);
        std::vector<double> moments(1 + static_cast<std::size_t>(12 * unit(rng)), 0.0);
        for (auto& m : moments) m = unit(rng) < 0.4 ? std::exp(6.0 * unit(rng) - 3.0) : 0.0;
        const auto r = mt_scaling_divergence(p, gamma, moments, sigma);
        violations += r.lhs >= r.rhs ? 0 : 1;
        const auto one = mt_scaling_divergence(p, gamma, moments, 1.0);
        worst_equal = std::max(worst_equal, std::abs(one.lhs - one.rhs));
    }
    div.le({"random_1000"}, "lhs<rhs count", violations, 0.0);
    div.le({"random_1000 sigma=1"}, "|lhs-rhs|", worst_equal, 0.0);
    for (double sigma : {1.5, 2.0, 10.0}) {
        const auto r = mt_scaling_divergence(2.0, 1.0, {1.0}, sigma);
        div.le({"p=2 k=2 sigma=" + format_number(sigma)}, "|lhs-rhs|", std::abs(r.lhs - r.rhs), 0.0);
    }

    out.tables.push_back(table);
    out.tables.push_back(checks.finish(out.failures));
    out.tables.push_back(div.finish(out.failures));
    out.fitted.push_back(fitted.finish());
    return out;
}

void append(RunOutcome& into, RunOutcome&& from) {
    for (auto& t : from.tables) into.tables.push_back(std::move(t));
    for (auto& t : from.fitted) into.fitted.push_back(std::move(t));
    for (auto& f : from.failures) into.failures.push_back(std::move(f));
}

}  // namespace

RunOutcome execute(const std::string& subcommand, const RunConfig& config) {
    config.validate();
    if (subcommand == "constants") return run_constants(config);
    if (subcommand == "interp") return run_interp(config);
    if (subcommand == "kernel") return run_kernel(config);
    if (subcommand == "embed") return run_embed(config);
    if (subcommand == "mt") return run_mt(config);
    if (subcommand == "verify-all") {
        RunOutcome all;
        append(all, run_constants(config));
        append(all, run_interp(config));
        append(all, run_kernel(config));
        append(all, run_embed(config));
        append(all, run_mt(config));
        return all;
    }
    throw ConfigError("unknown subcommand '" + subcommand + "'");
}

int run(const std::string& subcommand, const RunConfig& config, std::ostream& out, std::ostream& err) {
    RunOutcome outcome;
    try {
        outcome = execute(subcommand, config);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 1;
    }

    const std::filesystem::path golden_dir = config.golden_dir.empty() ? SOBCONST_GOLDEN_DIR : config.golden_dir;
    std::vector<std::string> failures = outcome.failures;
    try {
        for (const auto& t : outcome.tables) out << "wrote " << write_table(t, config.format, config.output_dir).string() << '\n';
        for (const auto& t : outcome.fitted) {
            out << "wrote " << write_table(t, config.format, config.output_dir).string() << '\n';
            const auto path = golden_dir / (t.name + ".json");
            if (config.bless) {
                GoldenSnapshot g{t.name, t.grid_hash, {}};
                const std::size_t k = t.column_index("key");
                const std::size_t v = t.column_index("value");
                for (const auto& row : t.rows) {
                    g.values[std::get<std::string>(row[k])] = {std::get<double>(row[v]), config.tolerance("golden")};
                }
                save_golden(g, path);
                out << "blessed " << path.string() << '\n';
            } else if (!std::filesystem::exists(path)) {
                failures.push_back(t.name + ": no golden snapshot at " + path.string() + " (run with --bless)");
            } else {
                const auto report = compare_golden(t, load_golden(path));
                for (const auto& f : report.failures) failures.push_back(t.name + " golden: " + f);
            }
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    if (failures.empty()) {
        out << subcommand << ": all checks passed\n";
        return 0;
    }
    err << subcommand << ": " << failures.size() << " failing check(s)\n";
    for (const auto& f : failures) err << "  " << f << '\n';
    return 1;
}

}  // namespace sobconst
