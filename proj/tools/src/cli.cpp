#include "otto_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "otto/analysis.hpp"
#include "otto/cumulants.hpp"
#include "otto/detail/format.hpp"
#include "otto/landauzener.hpp"
#include "otto/trajectory.hpp"

namespace otto::cli {

namespace {

using detail::fmt17;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Tolerances {
    double regime = kRegimeTol;
    double bound = kBoundTol;
    double cf = 1e-6;
};

struct Axis {
    std::string name;
    double start = 0.0;
    double stop = 1.0;
    int steps = 0;

    double at(int i) const {
        return steps == 1 ? start : start + (stop - start) * i / (steps - 1);
    }
};

struct RunConfig {
    std::string command;
    CycleParams cycle;
    bool zeta_given = false;
    std::optional<double> theta;
    std::optional<PauliChannel> pauli;
    std::optional<MeasurementChannel> meas;
    std::optional<ControlSpec> control;
    double phi = 0.0;
    Axis axis;
    Axis axis2;
    std::uint64_t seed = 1;
    std::uint64_t samples = 0;
    std::string mode = "all";
    std::string out;
    Tolerances tol;
};

Tolerances parse_tolerances(const char* env) {
    Tolerances t;
    if (!env) return t;
    std::stringstream ss(env);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) throw InputError("OTTO_TOL entry '" + item + "' lacks '='");
        std::string key = item.substr(0, eq);
        double v;
        try {
            v = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw InputError("OTTO_TOL value for '" + key + "' is not a number");
        }
        if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("OTTO_TOL values must be >= 0");
        if (key == "regime") t.regime = v;
        else if (key == "bound") t.bound = v;
        else if (key == "cf") t.cf = v;
        else throw InputError("unknown OTTO_TOL key '" + key + "'");
    }
    return t;
}

double channel_theta(const RunConfig& c) {
    if (c.theta) return *c.theta;
    if (c.pauli) return theta_of(*c.pauli);
    if (c.meas) return theta_of(*c.meas);
    throw InputError("a channel is required: --theta, --p0..--p3 or --alpha-m");
}

Mode mode_for(const RunConfig& c, const CycleParams& p) {
    if (c.control) return Mode::coherent(*c.control);
    return p.delta == p.zeta ? Mode::symmetric() : Mode::asymmetric();
}

// Applies one axis value to a copy of the configuration.
RunConfig with_axis(RunConfig c, const std::string& name, double v) {
    if (name == "beta") c.cycle.beta = v;
    else if (name == "nu1") c.cycle.nu1 = v;
    else if (name == "nu2") c.cycle.nu2 = v;
    else if (name == "delta") {
        c.cycle.delta = v;
        if (!c.zeta_given) c.cycle.zeta = v;
    } else if (name == "zeta") c.cycle.zeta = v;
    else if (name == "theta") {
        c.theta = v;
        c.pauli.reset();
        c.meas.reset();
    } else if (name == "cs-alpha") {
        c.control = ControlSpec(v, c.control ? c.control->branch : Branch::plus);
    } else if (name == "alpha-m") {
        c.meas = MeasurementChannel(v, c.meas ? c.meas->chi : 0.0);
        c.theta.reset();
        c.pauli.reset();
    } else throw InputError("unknown sweep axis '" + name + "'");
    c.cycle.validate();
    return c;
}

void check_axis(const Axis& a, const char* flag) {
    if (a.name.empty()) throw InputError(std::string("missing ") + flag);
    if (a.steps < 2) throw InputError("steps must be >= 2");
    if (!std::isfinite(a.start) || !std::isfinite(a.stop)) throw InputError("axis range not finite");
}

std::string describe(const RunConfig& c) {
    std::ostringstream s;
    s << "# config: command=" << c.command << " beta=" << fmt17(c.cycle.beta)
      << " nu1=" << fmt17(c.cycle.nu1) << " nu2=" << fmt17(c.cycle.nu2)
      << " delta=" << fmt17(c.cycle.delta) << " zeta=" << fmt17(c.cycle.zeta);
    if (c.theta) s << " theta=" << fmt17(*c.theta);
    if (c.pauli)
        s << " p0=" << fmt17(c.pauli->p0) << " p1=" << fmt17(c.pauli->p1)
          << " p2=" << fmt17(c.pauli->p2) << " p3=" << fmt17(c.pauli->p3);
    if (c.meas) s << " alpha-m=" << fmt17(c.meas->alpha_m) << " chi=" << fmt17(c.meas->chi);
    if (c.control)
        s << " cs-alpha=" << fmt17(c.control->alpha)
          << " branch=" << (c.control->branch == Branch::plus ? "plus" : "minus");
    if (c.command == "lz-compare") s << " phi=" << fmt17(c.phi);
    if (!c.axis.name.empty())
        s << " axis=" << c.axis.name << " start=" << fmt17(c.axis.start)
          << " stop=" << fmt17(c.axis.stop) << " steps=" << c.axis.steps;
    if (!c.axis2.name.empty())
        s << " axis2=" << c.axis2.name << " start2=" << fmt17(c.axis2.start)
          << " stop2=" << fmt17(c.axis2.stop) << " steps2=" << c.axis2.steps;
    if (c.command == "sample" || c.command == "verify-bounds")
        s << " seed=" << c.seed << " samples=" << c.samples;
    if (c.command == "verify-bounds") s << " mode=" << c.mode;
    s << " tol=regime:" << fmt17(c.tol.regime) << ",bound:" << fmt17(c.tol.bound)
      << ",cf:" << fmt17(c.tol.cf);
    return s.str();
}

// ---- subcommands ----------------------------------------------------------

void cmd_cumulants(const RunConfig& c, std::ostream& os) {
    const double theta = channel_theta(c);
    const CycleParams& p = c.cycle;
    os << "direction,quantity,order,enumeration,closed_form,cf_derivative,delta_closed,delta_cf\n";

    auto emit = [&](const char* dir, const CycleParams& q, const JointDistribution& d,
                    const std::optional<FirstSecond>& cfs, const std::optional<FirstCumulants>& f1,
                    const std::optional<CumulantSet>& cf) {
        const auto e = cumulants_from_distribution(d);
        auto row = [&](const char* name, int order, double en, double closed, double deriv,
                       double scale) {
            double dc = std::isnan(closed) ? kNaN : scaled_error(en, closed, scale);
            double dd = std::isnan(deriv) ? kNaN : scaled_error(en, deriv, scale);
            os << dir << ',' << name << ',' << order << ',' << fmt17(en) << ',' << fmt17(closed)
               << ',' << fmt17(deriv) << ',' << fmt17(dc) << ',' << fmt17(dd) << '\n';
        };
        for (int k = 1; k <= 4; ++k) {
            double closed = kNaN;
            if (cfs) closed = k == 1 ? cfs->w : (k == 2 ? cfs->w2 : kNaN);
            if (f1 && k == 1) closed = f1->w;
            row("W", k, e.w[k - 1], closed, cf ? cf->w[k - 1] : kNaN, abs_moment(d, 0, k));
        }
        for (int k = 1; k <= 4; ++k) {
            double closed = kNaN;
            if (cfs) closed = k == 1 ? cfs->q_m : (k == 2 ? cfs->q_m2 : kNaN);
            if (f1 && k == 1) closed = f1->q_m;
            row("Q_M", k, e.q_m[k - 1], closed, cf ? cf->q_m[k - 1] : kNaN, abs_moment(d, 1, k));
        }
        double qt_closed = cfs ? cfs->q_t : (f1 ? f1->q_t : kNaN);
        row("Q_T", 1, e.q_t, qt_closed, cf ? cf->q_t : kNaN,
            abs_moment(d, 0, 1) + abs_moment(d, 1, 1));
        (void)q;
    };

    auto try_cf = [&](auto&& f) -> std::optional<CumulantSet> {
        try {
            return f();
        } catch (const PhysicsError&) {
            return std::nullopt; // unstable finite differences are reported as NaN
        }
    };

    if (c.control) {
        const ControlSpec ctrl = *c.control;
        auto run_dir = [&](const char* dir, const CycleParams& q) {
            auto d = cs_distribution(q, theta, ctrl);
            auto cf = try_cf([&] { return cf_derivative_check(q, theta, ctrl, 4, c.tol.cf); });
            emit(dir, q, d, std::nullopt, cs_first_cumulants(q, theta, ctrl), cf);
        };
        run_dir("forward", p);
        if (p.delta != p.zeta) run_dir("backward", p.swapped());
    } else {
        auto run_dir = [&](const char* dir, const CycleParams& q) {
            auto d = enumerate_paths(q, theta);
            auto cf = try_cf([&] { return cf_derivative_check(q, theta, 4, c.tol.cf); });
            emit(dir, q, d, closed_form_first_second(q, theta), std::nullopt, cf);
        };
        run_dir("forward", p);
        if (p.delta != p.zeta) run_dir("backward", p.swapped());
    }

    const Mode m = mode_for(c, p);
    const auto mc = mode_cumulants(p, theta, m);
    const double rf_factor = mc.direction == Direction::combined ? 2.0 : 1.0;
    os << "# mode=" << to_string(m.kind)
       << " regime=" << to_string(classify_regime(mc, p.beta, c.tol.regime))
       << " efficiency=" << fmt17(mc.q_m[0] > 0.0 ? mc.w[0] / mc.q_m[0] : kNaN)
       << " rf_w=" << fmt17(relative_fluctuation(mc.w[0], rf_factor * mc.w[1], c.tol.regime))
       << " rf_q_m=" << fmt17(relative_fluctuation(mc.q_m[0], rf_factor * mc.q_m[1], c.tol.regime))
       << '\n';
}

struct SweepPoint {
    CumulantSet c;
    Regime regime;
    double eta;
    double rf_w;
    double rf_q;
};

SweepPoint evaluate(const RunConfig& c) {
    const double theta = channel_theta(c);
    const Mode m = mode_for(c, c.cycle);
    SweepPoint s{mode_cumulants(c.cycle, theta, m), Regime::Undetermined, kNaN, 0.0, 0.0};
    s.regime = classify_regime(s.c, c.cycle.beta, c.tol.regime);
    s.eta = s.c.q_m[0] > 0.0 ? s.c.w[0] / s.c.q_m[0] : kNaN;
    const double f = s.c.direction == Direction::combined ? 2.0 : 1.0;
    s.rf_w = relative_fluctuation(s.c.w[0], f * s.c.w[1], c.tol.regime);
    s.rf_q = relative_fluctuation(s.c.q_m[0], f * s.c.q_m[1], c.tol.regime);
    return s;
}

void cmd_sweep(const RunConfig& c, std::ostream& os, std::ostream* bounds) {
    check_axis(c.axis, "--axis");
    std::vector<double> xs(c.axis.steps);
    std::vector<SweepPoint> pts(c.axis.steps);
    std::vector<std::vector<BoundReport>> reports(c.axis.steps);
    for (int i = 0; i < c.axis.steps; ++i) {
        xs[i] = c.axis.at(i);
        RunConfig ci = with_axis(c, c.axis.name, xs[i]);
        pts[i] = evaluate(ci);
        reports[i] = verify_bounds(ci.cycle, channel_theta(ci), mode_for(ci, ci.cycle), c.tol.bound);
    }
    os << "axis_value,w1,w2,w3,w4,qm1,qm2,qm3,qm4,qt,efficiency,regime,rf_w,rf_qm\n";
    for (int i = 0; i < c.axis.steps; ++i) {
        const auto& s = pts[i];
        os << fmt17(xs[i]);
        for (double v : s.c.w) os << ',' << fmt17(v);
        for (double v : s.c.q_m) os << ',' << fmt17(v);
        os << ',' << fmt17(s.c.q_t) << ',' << fmt17(s.eta) << ',' << to_string(s.regime) << ','
           << fmt17(s.rf_w) << ',' << fmt17(s.rf_q) << '\n';
    }
    for (int i = 0; i + 1 < c.axis.steps; ++i) {
        double a = pts[i].c.w[0], b = pts[i + 1].c.w[0];
        if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
            auto f = [&](double x) { return evaluate(with_axis(c, c.axis.name, x)).c.w[0]; };
            os << "# zero_work_crossing " << c.axis.name << '='
               << fmt17(zero_work_crossing(f, xs[i], xs[i + 1])) << " rf_w=inf\n";
        }
    }
    if (bounds) {
        *bounds << describe(c) << '\n';
        *bounds << "axis_value,bound_name,left,right,applicable,satisfied,margin\n";
        for (int i = 0; i < c.axis.steps; ++i) {
            std::ostringstream tmp;
            write_bounds_csv(tmp, reports[i], false);
            std::string line;
            std::istringstream in(tmp.str());
            while (std::getline(in, line)) *bounds << fmt17(xs[i]) << ',' << line << '\n';
        }
    }
}

void cmd_classify(const RunConfig& c, std::ostream& os) {
    check_axis(c.axis, "--axis");
    check_axis(c.axis2, "--axis2");
    if (c.axis.name == c.axis2.name) throw InputError("--axis and --axis2 must differ");
    os << c.axis.name << ',' << c.axis2.name << ",regime,w,q_m,q_t\n";
    for (int i = 0; i < c.axis.steps; ++i) {
        RunConfig ci = with_axis(c, c.axis.name, c.axis.at(i));
        for (int j = 0; j < c.axis2.steps; ++j) {
            RunConfig cij = with_axis(ci, c.axis2.name, c.axis2.at(j));
            auto s = evaluate(cij);
            os << fmt17(c.axis.at(i)) << ',' << fmt17(c.axis2.at(j)) << ','
               << to_string(s.regime) << ',' << fmt17(s.c.w[0]) << ',' << fmt17(s.c.q_m[0])
               << ',' << fmt17(s.c.q_t) << '\n';
        }
    }
}

struct Tally {
    std::uint64_t satisfied = 0;
    std::uint64_t violated = 0;
    std::uint64_t inapplicable = 0;
    double min_margin = std::numeric_limits<double>::infinity();
};

void cmd_verify_bounds(const RunConfig& c, std::ostream& os) {
    static const std::vector<std::string> all = {"symmetric", "asymmetric", "coherent"};
    std::vector<std::string> modes;
    if (c.mode == "all") modes = all;
    else modes = {c.mode};
    const std::uint64_t n = c.samples ? c.samples : 10000;

    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::pair<std::string, std::string>, Tally> tally;

    for (std::uint64_t i = 0; i < n; ++i) {
        CycleParams p;
        do p.beta = -2.0 + 4.0 * unit(rng);
        while (p.beta == 0.0);
        p.nu1 = 3.0 * (1.0 - unit(rng));
        p.nu2 = (i % 4 == 3) ? p.nu1 : 3.0 * (1.0 - unit(rng));
        const double d = unit(rng), z = unit(rng), th = unit(rng);
        const double a = unit(rng);
        const Branch br = unit(rng) < 0.5 ? Branch::plus : Branch::minus;
        for (const auto& mname : modes) {
            CycleParams q = p;
            q.delta = d;
            double theta = th;
            Mode m;
            if (mname == "symmetric") {
                q.zeta = d;
                m = Mode::symmetric();
            } else if (mname == "asymmetric") {
                q.zeta = z;
                m = Mode::asymmetric();
            } else {
                q.zeta = z;
                theta = 0.5 * th;
                m = Mode::coherent(ControlSpec(a, br));
            }
            for (const auto& r : verify_bounds(q, theta, m, c.tol.bound)) {
                auto key = std::make_pair(mname, r.name);
                auto [it, fresh] = tally.try_emplace(key);
                if (fresh) order.push_back(key);
                Tally& t = it->second;
                if (!r.applicable) ++t.inapplicable;
                else {
                    r.satisfied ? ++t.satisfied : ++t.violated;
                    if (!std::isnan(r.margin)) t.min_margin = std::min(t.min_margin, r.margin);
                }
            }
        }
    }
    os << "mode,bound_name,satisfied,violated,inapplicable,min_margin\n";
    for (const auto& key : order) {
        const Tally& t = tally[key];
        os << key.first << ',' << key.second << ',' << t.satisfied << ',' << t.violated << ','
           << t.inapplicable << ',' << fmt17(t.min_margin) << '\n';
    }
}

JointDistribution point_distribution(const RunConfig& c) {
    const double theta = channel_theta(c);
    if (c.control) return cs_distribution(c.cycle, theta, *c.control);
    return enumerate_paths(c.cycle, theta);
}

void cmd_sample(const RunConfig& c, std::ostream& os) {
    const auto d = point_distribution(c);
    const std::uint64_t n = c.samples ? c.samples : 1000000;
    const auto st = sample(d, n, c.seed);
    const auto e = cumulants_from_distribution(d);
    os << "quantity,statistic,enumerated,empirical,std_error,z_score\n";
    auto row = [&](const char* q, const char* s, double en, double emp, double se) {
        double z = se > 0.0 ? (emp - en) / se : (emp == en ? 0.0 : kNaN);
        os << q << ',' << s << ',' << fmt17(en) << ',' << fmt17(emp) << ',' << fmt17(se) << ','
           << fmt17(z) << '\n';
    };
    row("W", "mean", e.w[0], st.w.mean, st.w.mean_se);
    row("W", "variance", e.w[1], st.w.variance, st.w.variance_se);
    row("Q_M", "mean", e.q_m[0], st.q_m.mean, st.q_m.mean_se);
    row("Q_M", "variance", e.q_m[1], st.q_m.variance, st.q_m.variance_se);
}

void cmd_lz_compare(const RunConfig& c, std::ostream& os) {
    if (!c.meas) throw InputError("lz-compare needs --alpha-m (and optionally --chi)");
    Axis a = c.axis;
    if (a.name.empty()) a.name = "delta";
    if (a.name != "delta") throw InputError("lz-compare sweeps delta only");
    check_axis(a, "--axis");
    LZParams p;
    p.cycle = c.cycle;
    p.phi = c.phi;
    p.channel = *c.meas;
    std::vector<double> grid;
    for (int i = 0; i < a.steps; ++i) grid.push_back(a.at(i));
    write_lz_csv(os, monitored_vs_unmonitored(p, grid));
}

void dispatch(const RunConfig& c, std::ostream& os) {
    std::ofstream file;
    std::ofstream bounds_file;
    std::ostream* dest = &os;
    if (!c.out.empty()) {
        file.open(c.out);
        if (!file) throw InputError("cannot open output file " + c.out);
        dest = &file;
    }
    *dest << describe(c) << '\n';
    if (c.command == "cumulants") cmd_cumulants(c, *dest);
    else if (c.command == "sweep") {
        std::ostream* b = nullptr;
        if (!c.out.empty()) {
            bounds_file.open(c.out + ".bounds.csv");
            if (!bounds_file) throw InputError("cannot open bounds file");
            b = &bounds_file;
        }
        cmd_sweep(c, *dest, b);
    } else if (c.command == "classify") cmd_classify(c, *dest);
    else if (c.command == "verify-bounds") cmd_verify_bounds(c, *dest);
    else if (c.command == "sample") cmd_sample(c, *dest);
    else if (c.command == "lz-compare") cmd_lz_compare(c, *dest);
    else if (c.command == "distribution") write_distribution_csv(*dest, point_distribution(c));
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monitored quantum Otto cycle statistics"};
    app.set_config("--config", "", "INI-style key=value file; flags override it");
    app.require_subcommand(1, 1);

    CycleParams cyc;
    double theta = 0, p0 = 1, p1 = 0, p2 = 0, p3 = 0, alpha_m = 0, chi = 0, cs_alpha = 0, phi = 0;
    std::string branch = "plus";
    Axis ax, ax2;
    std::uint64_t seed = 1, samples = 0;
    std::string mode = "all", outp;

    app.add_option("--beta", cyc.beta, "inverse bath temperature");
    app.add_option("--nu1", cyc.nu1, "gap of H1");
    app.add_option("--nu2", cyc.nu2, "gap of H2");
    app.add_option("--delta", cyc.delta, "transition probability of the first stroke");
    app.add_option("--zeta", cyc.zeta, "transition probability of the second stroke (default: delta)");
    auto* o_theta = app.add_option("--theta", theta, "unital channel parameter");
    auto* o_p0 = app.add_option("--p0", p0, "Pauli weight of identity");
    auto* o_p1 = app.add_option("--p1", p1, "Pauli weight of sigma_x");
    auto* o_p2 = app.add_option("--p2", p2, "Pauli weight of sigma_y");
    auto* o_p3 = app.add_option("--p3", p3, "Pauli weight of sigma_z");
    auto* o_am = app.add_option("--alpha-m", alpha_m, "measurement polar angle");
    auto* o_chi = app.add_option("--chi", chi, "measurement phase");
    auto* o_cs = app.add_option("--cs-alpha", cs_alpha, "control-qubit weight alpha");
    app.add_option("--branch", branch, "post-selected control branch")
        ->check(CLI::IsMember({"plus", "minus"}));
    app.add_option("--phi", phi, "Landau-Zener driving phase");
    app.add_option("--axis", ax.name, "sweep axis");
    app.add_option("--start", ax.start);
    app.add_option("--stop", ax.stop);
    app.add_option("--steps", ax.steps);
    app.add_option("--axis2", ax2.name, "second axis for classify");
    app.add_option("--start2", ax2.start);
    app.add_option("--stop2", ax2.stop);
    app.add_option("--steps2", ax2.steps);
    app.add_option("--seed", seed);
    app.add_option("--samples", samples, "draws for sample, tuples for verify-bounds");
    app.add_option("--mode", mode, "verify-bounds mode")
        ->check(CLI::IsMember({"all", "symmetric", "asymmetric", "coherent"}));
    app.add_option("--out", outp, "output CSV path (default stdout)");

    for (auto* p : {o_p0, o_p1, o_p2, o_p3}) {
        p->excludes(o_theta);
        p->excludes(o_am);
    }
    o_am->excludes(o_theta);
    o_chi->needs(o_am);

    const std::pair<const char*, const char*> subs[] = {
        {"cumulants", "cumulants by enumeration, closed form and CF derivatives"},
        {"sweep", "one-axis sweep with regimes and bound reports"},
        {"classify", "regime map over a 2-D grid"},
        {"verify-bounds", "randomized bound-verification campaign"},
        {"sample", "Monte Carlo draws against enumeration"},
        {"lz-compare", "Landau-Zener monitored vs unmonitored table"},
        {"distribution", "joint (W, Q_M) distribution"},
    };
    for (const auto& [name, help] : subs) app.add_subcommand(name, help)->fallthrough();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    RunConfig c;
    try {
        c.command = app.get_subcommands().front()->get_name();
        c.cycle = cyc;
        c.zeta_given = app.count("--zeta") > 0;
        if (!c.zeta_given) c.cycle.zeta = c.cycle.delta;
        if (o_theta->count()) c.theta = theta;
        if (o_p0->count() || o_p1->count() || o_p2->count() || o_p3->count())
            c.pauli = PauliChannel(p0, p1, p2, p3);
        if (o_am->count()) c.meas = MeasurementChannel(alpha_m, chi);
        if (o_cs->count())
            c.control = ControlSpec(cs_alpha, branch == "plus" ? Branch::plus : Branch::minus);
        c.phi = phi;
        c.axis = ax;
        c.axis2 = ax2;
        c.seed = seed;
        c.samples = samples;
        c.mode = mode;
        c.out = outp;
        c.tol = parse_tolerances(std::getenv("OTTO_TOL"));
        if (c.command != "verify-bounds") c.cycle.validate();
        if (c.theta && (!(*c.theta >= 0.0) || *c.theta > 1.0))
            throw InputError("theta must lie in [0, 1]");
        dispatch(c, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const PhysicsError& e) {
        err << "physics error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

} // namespace otto::cli
