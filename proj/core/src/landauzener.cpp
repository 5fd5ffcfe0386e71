#include "otto/landauzener.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "otto/cumulants.hpp"
#include "otto/detail/format.hpp"

namespace otto {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

LZParams normalized(const LZParams& p) {
    LZParams q = p;
    q.cycle.zeta = q.cycle.delta;
    q.validate();
    return q;
}

double energy(const Mat2& rho, double nu) { return (rho * hamiltonian(nu)).trace().real(); }

} // namespace

void LZParams::validate() const {
    cycle.validate();
    if (!std::isfinite(phi)) throw InputError("phi must be finite");
    if (!std::isfinite(channel.alpha_m) || !std::isfinite(channel.chi))
        throw InputError("measurement angles must be finite");
}

std::pair<Mat2, Mat2> lz_unitaries(const LZParams& in) {
    const LZParams p = normalized(in);
    const double s = std::sqrt(p.cycle.delta), c = std::sqrt(1.0 - p.cycle.delta);
    const cplx ph = std::exp(cplx(0.0, p.phi));
    Mat2 u;
    u << c * ph, s, -s, c * std::conj(ph);
    Mat2 v = u.adjoint().conjugate();
    return {u, v};
}

UnmonitoredResult unmonitored_cycle(const LZParams& in) {
    const LZParams p = normalized(in);
    const auto [u, v] = lz_unitaries(p);
    const double n1 = p.cycle.nu1, n2 = p.cycle.nu2;
    const Mat2 r1 = thermal_state(p.cycle.beta, n1).matrix();
    const Mat2 r2 = u * r1 * u.adjoint();
    const Mat2 a = p.channel.pi1(), b = p.channel.pi2();
    const Mat2 r3 = a * r2 * a + b * r2 * b;
    const Mat2 r4 = v * r3 * v.adjoint();
    UnmonitoredResult r;
    r.e1 = energy(r1, n1);
    r.e2 = energy(r2, n2);
    r.e3 = energy(r3, n2);
    r.e4 = energy(r4, n1);
    r.q_m = r.e3 - r.e2;
    r.q_t = r.e1 - r.e4;
    r.w = r.q_m + r.q_t;
    r.eta = r.q_m > 0.0 ? r.w / r.q_m : kNaN;
    return r;
}

double qum_formula(const LZParams& in) {
    const LZParams p = normalized(in);
    const double d = p.cycle.delta, al = p.channel.alpha_m;
    const double sa = std::sin(al), ca = std::cos(al);
    return p.cycle.nu2 * sa *
           (2.0 * std::sqrt(d * (1.0 - d)) * ca * std::cos(p.phi + p.channel.chi) + sa -
            2.0 * d * sa) *
           p.cycle.tanh_bn1();
}

std::vector<LZRow> monitored_vs_unmonitored(const LZParams& p, const std::vector<double>& deltas) {
    if (deltas.empty()) throw InputError("delta grid is empty");
    const double sa = std::sin(p.channel.alpha_m);
    const double theta = 0.5 * sa * sa;
    std::vector<LZRow> rows;
    rows.reserve(deltas.size());
    for (double d : deltas) {
        LZParams q = p;
        q.cycle.delta = d;
        q = normalized(q);
        const auto c = cumulants_from_distribution(enumerate_paths(q.cycle, theta));
        const auto um = unmonitored_cycle(q);
        LZRow r;
        r.delta = d;
        r.w_mon = c.w[0];
        r.eta_mon = c.q_m[0] > 0.0 ? c.w[0] / c.q_m[0] : kNaN;
        r.regime_mon = classify_regime(c, q.cycle.beta);
        r.w_um = um.w;
        r.eta_um = um.eta;
        r.regime_um = classify_regime(um.q_t, um.q_m, um.w, q.cycle.beta);
        rows.push_back(r);
    }
    return rows;
}

void write_lz_csv(std::ostream& os, const std::vector<LZRow>& rows) {
    os << "delta,w_mon,eta_mon,regime_mon,w_um,eta_um,regime_um\n";
    for (const auto& r : rows)
        os << detail::fmt17(r.delta) << ',' << detail::fmt17(r.w_mon) << ','
           << detail::fmt17(r.eta_mon) << ',' << to_string(r.regime_mon) << ','
           << detail::fmt17(r.w_um) << ',' << detail::fmt17(r.eta_um) << ','
           << to_string(r.regime_um) << '\n';
}

} // namespace otto
