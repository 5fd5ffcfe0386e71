#include "otto/analysis.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include <boost/math/tools/roots.hpp>

#include "otto/detail/format.hpp"

namespace otto {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int sign_of(double x, double tol) { return x > tol ? 1 : (x < -tol ? -1 : 0); }

double safe_div(double a, double b) { return b == 0.0 ? kNaN : a / b; }

BoundReport le(std::string name, double left, double right, bool applicable, double tol) {
    BoundReport r;
    r.name = std::move(name);
    r.left = left;
    r.right = right;
    r.applicable = applicable;
    r.margin = right - left;
    r.satisfied = (left <= right + tol) || (std::isinf(right) && right > 0);
    return r;
}

BoundReport lt(std::string name, double left, double right, bool applicable) {
    BoundReport r = le(std::move(name), left, right, applicable, 0.0);
    r.satisfied = left < right;
    return r;
}

bool condnu(const CycleParams& p, double theta) {
    if (!(p.delta < 0.5) || theta <= 0.0) return false;
    double d = p.delta;
    return p.nu2 >= (theta + 2 * d * (1 - d) * (1 - 2 * theta)) / (2 * (1 - 2 * d) * theta) * p.nu1;
}

bool hopm(const CycleParams& p, double theta) {
    double d = p.delta;
    return (1 - 2 * d) * theta * p.nu2 >= (1 - d) * (d + theta - 2 * d * theta) * p.nu1;
}

bool connu2(const CycleParams& p, double theta) {
    double s = p.delta + p.zeta;
    if (!(s < 1.0) || theta <= 0.0) return false;
    double u = p.delta + p.zeta - 2 * p.delta * p.zeta;
    return p.nu2 >= (theta + (1 - 2 * theta) * u) / (2 * (1 - s) * theta) * p.nu1;
}

double mixing_c(double d, double z, double th) {
    return th + z - 2 * th * z + d * (-1 + 2 * th) * (-1 + 2 * z);
}

void common_bounds(std::vector<BoundReport>& out, const CycleParams& p, const CumulantSet& c,
                   double tol) {
    const double otto = otto_efficiency(p);
    const double eta = safe_div(c.w[0], c.q_m[0]);
    const bool engine = p.beta > 0.0 && classify_regime(c, p.beta) == Regime::Engine;
    out.push_back(le("qt_nonpositive", c.q_t, 0.0, p.beta > 0.0, tol));
    out.push_back(le("eta_le_otto", eta, otto, engine, tol));
    out.push_back(le("eta2_le_otto2", eta * eta, otto * otto, engine, tol));
}

} // namespace

const char* to_string(Regime r) {
    switch (r) {
    case Regime::Engine: return "Engine";
    case Regime::Accelerator: return "Accelerator";
    case Regime::Heater: return "Heater";
    case Regime::EnginePrime: return "EnginePrime";
    case Regime::Undetermined: return "Undetermined";
    }
    return "?";
}

const char* to_string(ModeKind k) {
    switch (k) {
    case ModeKind::symmetric: return "symmetric";
    case ModeKind::asymmetric: return "asymmetric";
    case ModeKind::coherent: return "coherent";
    }
    return "?";
}

Regime classify_regime(double q_t, double q_m, double w, double beta, double tol) {
    int st = sign_of(q_t, tol), sm = sign_of(q_m, tol), sw = sign_of(w, tol);
    if (beta > 0.0) {
        if (st < 0 && sm > 0 && sw > 0) return Regime::Engine;
        if (st < 0 && sm > 0 && sw < 0) return Regime::Accelerator;
        if (st < 0 && sm < 0 && sw < 0) return Regime::Heater;
    } else if (beta < 0.0) {
        if (st > 0 && sm < 0 && sw < 0) return Regime::Accelerator;
        if (st > 0 && sm < 0 && sw > 0) return Regime::Engine;
        if (st > 0 && sm > 0 && sw > 0) return Regime::EnginePrime;
    }
    return Regime::Undetermined;
}

Regime classify_regime(const CumulantSet& c, double beta, double tol) {
    return classify_regime(c.q_t, c.q_m[0], c.w[0], beta, tol);
}

void check_mode(const CycleParams& p, const Mode& m) {
    if (m.kind == ModeKind::symmetric && p.delta != p.zeta)
        throw InputError("symmetric mode requires delta == zeta");
}

CumulantSet mode_cumulants(const CycleParams& p, double theta, const Mode& m) {
    check_mode(p, m);
    switch (m.kind) {
    case ModeKind::symmetric: return cumulants_from_distribution(enumerate_paths(p, theta));
    case ModeKind::asymmetric:
        return combine(cumulants_from_distribution(enumerate_paths(p, theta)),
                       cumulants_from_distribution(backward_distribution(p, theta)));
    case ModeKind::coherent: {
        auto f = cumulants_from_distribution(cs_distribution(p, theta, m.control));
        if (p.delta == p.zeta) return f;
        auto b = cumulants_from_distribution(cs_distribution(p.swapped(), theta, m.control));
        return combine(f, b);
    }
    }
    throw InputError("unknown mode");
}

Threshold positive_work_threshold(const CycleParams& p, double theta, const Mode& m) {
    p.validate();
    check_mode(p, m);
    const double d = p.delta, z = p.zeta;
    if (m.kind == ModeKind::symmetric) {
        if (d >= 0.5) throw InputError("no positive-work threshold for delta >= 1/2");
        if (theta <= 0.0) return {kInf, true};
        return {(theta + 2 * d * (1 - 2 * theta) * (1 - d)) / (theta * (1 - 2 * d)) * p.nu1, true};
    }
    const double u = d + z - 2 * d * z;
    if (theta <= 0.0 || d + z >= 1.0) return {kInf, m.kind == ModeKind::coherent};
    if (m.kind == ModeKind::asymmetric)
        return {(theta + (1 - 2 * theta) * u) / (theta * (1 - d - z)) * p.nu1, false};
    const double s = m.control.sign() * m.control.coherence();
    return {(theta + (1 - 2 * theta + s) * u) / (theta * (1 - d - z)) * p.nu1, true};
}

double otto_efficiency(const CycleParams& p) { return 1.0 - p.nu1 / p.nu2; }

double efficiency(const CycleParams& p, double theta, const Mode& m) {
    p.validate();
    check_mode(p, m);
    const double d = p.delta, z = p.zeta, r = p.nu1 / p.nu2;
    if (p.beta == 0.0 || theta <= 0.0) throw PhysicsError("zero heat input");
    if (m.kind == ModeKind::symmetric) {
        if (d == 0.5) throw PhysicsError("zero heat input");
        return 1.0 - r * (theta + 2 * d * (1 - 2 * theta) * (1 - d)) / ((1 - 2 * d) * theta);
    }
    if (d + z == 1.0) throw PhysicsError("zero heat input");
    const double eta0 = 1.0 - r * mixing_c(d, z, theta) / ((1 - d - z) * theta);
    if (m.kind == ModeKind::asymmetric) return eta0;
    const double u = d + z - 2 * d * z;
    return eta0 - m.control.sign() * r * m.control.coherence() * u / ((1 - d - z) * theta);
}

double relative_fluctuation(double k1, double k2, double tol) {
    if (std::abs(k1) <= tol) return kInf;
    return k2 / (k1 * k1);
}

double zero_work_crossing(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) throw InputError("bracket does not change sign");
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                               boost::math::tools::eps_tolerance<double>(50),
                                               iters);
    return 0.5 * (r.first + r.second);
}

std::vector<BoundReport> verify_bounds(const CycleParams& p, double theta, const Mode& m,
                                       double tol) {
    p.validate();
    check_mode(p, m);
    std::vector<BoundReport> out;
    const double otto = otto_efficiency(p);
    const bool equal_gaps = p.nu1 == p.nu2;

    if (m.kind == ModeKind::coherent) {
        const auto c = mode_cumulants(p, theta, m);
        common_bounds(out, p, c, tol);
        out[0].name = "cs_qt_nonpositive";
        out[0].applicable = p.beta > 0.0 && theta <= 0.5;
        out[1].name = "cs_eta_le_otto";
        out[2].name = "cs_eta2_le_otto2";
        const double s_alpha = m.control.alpha;
        const auto cp = mode_cumulants(p, theta, Mode::coherent({s_alpha, Branch::plus}));
        const auto cm = mode_cumulants(p, theta, Mode::coherent({s_alpha, Branch::minus}));
        const auto c0 = mode_cumulants(p, theta, Mode::coherent({0.0, Branch::plus}));
        const double ep = safe_div(cp.w[0], cp.q_m[0]);
        const double em = safe_div(cm.w[0], cm.q_m[0]);
        const double e0 = safe_div(c0.w[0], c0.q_m[0]);
        const bool engine0 = p.beta > 0.0 && classify_regime(c0, p.beta) == Regime::Engine;
        out.push_back(le("cs_eta0_le_eta_minus", e0, em, engine0, tol));
        out.push_back(le("cs_eta_plus_le_eta0", ep, e0, engine0, tol));
        return out;
    }

    if (m.kind == ModeKind::symmetric) {
        const auto c = cumulants_from_distribution(enumerate_paths(p, theta));
        common_bounds(out, p, c, tol);
        const double eta = safe_div(c.w[0], c.q_m[0]);
        const double ratio = safe_div(c.w[1], c.q_m[1]);
        const double rf_w = relative_fluctuation(c.w[0], c.w[1]);
        const double rf_q = relative_fluctuation(c.q_m[0], c.q_m[1]);
        const bool cn = condnu(p, theta);
        const bool engine = p.beta > 0.0 && classify_regime(c, p.beta) == Regime::Engine;
        out.push_back(le("rf_order", rf_q, rf_w, cn, tol));
        out.push_back(le("eta2_le_ratio", eta * eta, ratio, cn, tol));
        out.push_back(le("ratio_le_one", ratio, 1.0, cn, tol));
        out.push_back(lt("ratio_lt_one_engine", ratio, 1.0, engine));
        out.push_back(le("otto2_le_ratio", otto * otto, ratio,
                         p.nu2 >= p.nu1 && theta > 0.0 && hopm(p, theta), tol));
        out.push_back(le("summed_work_equal_gaps", 2.0 * c.w[0], 0.0,
                         p.beta > 0.0 && equal_gaps, tol));
        return out;
    }

    const auto f = cumulants_from_distribution(enumerate_paths(p, theta));
    const auto b = cumulants_from_distribution(backward_distribution(p, theta));
    const auto c = combine(f, b);
    common_bounds(out, p, c, tol);
    const double eta = safe_div(c.w[0], c.q_m[0]);
    const double ratio = safe_div(c.w[1], c.q_m[1]);
    const double rf_w = relative_fluctuation(c.w[0], 2.0 * c.w[1]);
    const double rf_q = relative_fluctuation(c.q_m[0], 2.0 * c.q_m[1]);
    const bool cn = connu2(p, theta);
    const bool engine = p.beta > 0.0 && classify_regime(c, p.beta) == Regime::Engine;
    out.push_back(le("sym_rf_order", rf_q, rf_w, cn, tol));
    out.push_back(le("eta2_le_ratio", eta * eta, ratio, cn, tol));
    out.push_back(le("ratio_le_one", ratio, 1.0, cn, tol));
    out.push_back(lt("ratio_lt_one_engine", ratio, 1.0, engine));
    out.push_back(le("summed_work_equal_gaps", c.w[0], 0.0, p.beta > 0.0 && equal_gaps, tol));
    if (p.beta != 0.0) {
        double th = std::tanh(p.beta * p.nu1);
        double a = asym_a_term(p.delta, p.zeta, theta, 1.0 / (th * th));
        out.push_back(le("asym_a_nonnegative", -a, 0.0, true, tol));
    }
    return out;
}

void write_bounds_csv(std::ostream& os, const std::vector<BoundReport>& reports, bool header) {
    if (header) os << "bound_name,left,right,applicable,satisfied,margin\n";
    for (const auto& r : reports)
        os << r.name << ',' << detail::fmt17(r.left) << ',' << detail::fmt17(r.right) << ','
           << (r.applicable ? 1 : 0) << ',' << (r.satisfied ? 1 : 0) << ','
           << detail::fmt17(r.margin) << '\n';
}

RatioScan cumulant_ratio_scan(const CycleParams& p, double theta, int n) {
    if (n < 2 || n > 4) throw InputError("ratio order must be 2, 3 or 4");
    const auto c = cumulants_from_distribution(enumerate_paths(p, theta));
    RatioScan r;
    r.order = n;
    r.regime = classify_regime(c, p.beta);
    r.efficiency = safe_div(c.w[0], c.q_m[0]);
    r.efficiency_pow = std::pow(r.efficiency, n);
    const double num = c.w[n - 1], den = c.q_m[n - 1];
    if (std::abs(den) < 1e-14) {
        r.undefined = true;
        r.ratio = kNaN;
        return r;
    }
    r.ratio = num / den;
    r.below_efficiency_pow = r.ratio < r.efficiency_pow;
    r.above_one = r.ratio > 1.0;
    r.sign_mismatch = (num > 0) != (den > 0) && num != 0.0;
    return r;
}

Shape shape_stats(const std::array<double, 4>& k) {
    if (!(k[1] > 1e-14)) throw PhysicsError("zero variance");
    return {k[2] / std::pow(k[1], 1.5), k[3] / (k[1] * k[1])};
}

ShapeStats shape_stats(const CumulantSet& c) { return {shape_stats(c.w), shape_stats(c.q_m)}; }

double asym_rf_difference(const CycleParams& p, double theta) {
    const auto f = cumulants_from_distribution(enumerate_paths(p, theta));
    const auto b = cumulants_from_distribution(backward_distribution(p, theta));
    const double sw1 = f.w[0] + b.w[0], sw2 = f.w[1] + b.w[1];
    const double sq1 = f.q_m[0] + b.q_m[0], sq2 = f.q_m[1] + b.q_m[1];
    return 2 * sw2 / (sw1 * sw1) - 2 * sq2 / (sq1 * sq1);
}

double asym_rf_difference_closed_form(const CycleParams& p, double theta) {
    const double d = p.delta, z = p.zeta, th = theta, n1 = p.nu1, n2 = p.nu2;
    const double c = mixing_c(d, z, th);
    const double t = std::tanh(p.beta * n1);
    const double coth2 = 1.0 / (t * t);
    const double lead = n1 * (-c * n1 + 2 * th * (1 - d - z) * n2) /
                        (th * (-1 + d + z) * (-1 + d + z));
    const double den = c * n1 + th * (-1 + d + z) * n2;
    const double num = -(th * (d - z) * (d - z) * c +
                         (d * d * th + d * (-1 + 2 * z - 2 * th * z) + z * (-1 + th * z)) * coth2);
    return lead * num / (den * den);
}

double asym_a_term(double d, double z, double th, double coth2) {
    return -(d * d * th + d * (-1 + 2 * z - 2 * th * z) + z * (-1 + th * z)) * coth2 -
           th * (d - z) * (d - z) * mixing_c(d, z, th);
}

} // namespace otto
