#include "otto/cumulants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace otto {

namespace {

const cplx I(0.0, 1.0);

cplx eix(double x) { return {std::cos(x), std::sin(x)}; }

// 2 cos(x + i s beta nu1)/Z for s = +-1; the cosh(beta nu1) cancels exactly.
cplx cz(double x, double s, double t) { return {std::cos(x), -std::sin(x) * s * t}; }

void check_theta(double theta) {
    if (!std::isfinite(theta) || theta < 0.0 || theta > 1.0)
        throw InputError("theta must lie in [0, 1]");
}

std::array<double, 4> cumulants_of(const JointDistribution& d, bool use_w) {
    // extended-precision accumulation: higher cumulants cancel heavily near zero
    long double mu = 0.0L;
    for (const auto& o : d.outcomes) mu += static_cast<long double>(o.prob) * (use_w ? o.w : o.q_m);
    long double m2 = 0.0L, m3 = 0.0L, m4 = 0.0L;
    for (const auto& o : d.outcomes) {
        long double x = static_cast<long double>(use_w ? o.w : o.q_m) - mu;
        long double x2 = x * x;
        m2 += o.prob * x2;
        m3 += o.prob * x2 * x;
        m4 += o.prob * x2 * x2;
    }
    return {static_cast<double>(mu), static_cast<double>(m2), static_cast<double>(m3),
            static_cast<double>(m4 - 3.0L * m2 * m2)};
}

// chi - 1 as a function of (gamma_w, gamma_m)
using Excess = std::function<cplx(double, double)>;

// log(1 + w) without losing w when it is tiny.
cplx log1p_c(cplx w) {
    const double re = 0.5 * std::log1p(2.0 * w.real() + std::norm(w));
    return {re, std::atan2(w.imag(), 1.0 + w.real())};
}

// Central-difference estimate of d^n f/dg^n at 0 with step h.
cplx stencil(const std::function<cplx(double)>& f, int n, double h) {
    switch (n) {
    case 1: return (f(h) - f(-h)) / (2.0 * h);
    case 2: return (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
    case 3: return (f(2 * h) - 2.0 * f(h) + 2.0 * f(-h) - f(-2 * h)) / (2.0 * h * h * h);
    case 4: {
        static const double c[5] = {91.0 / 8, -122.0 / 15, 169.0 / 60, -2.0 / 5, 7.0 / 240};
        cplx s = c[0] * f(0.0);
        for (int j = 1; j <= 4; ++j) s += c[j] * (f(j * h) + f(-j * h));
        return s / (h * h * h * h);
    }
    }
    throw InputError("derivative order must be 1..4");
}

int stencil_accuracy(int n) { return n == 4 ? 6 : 2; }

double base_step(int n) {
    switch (n) {
    case 1:
    case 2: return 1e-3;
    case 3: return 1e-2;
    default: return 5e-2;
    }
}

double richardson(const std::function<cplx(double)>& f, int n, double h) {
    double r = std::ldexp(1.0, stencil_accuracy(n));
    cplx coarse = stencil(f, n, h);
    cplx fine = stencil(f, n, 0.5 * h);
    cplx ext = (r * fine - coarse) / (r - 1.0);
    // d^n/d(i g)^n = (-i)^n d^n/dg^n
    cplx rot = std::pow(-I, n);
    return (rot * ext).real();
}

std::array<double, 4> derivative_route(const std::function<cplx(double)>& lnchi,
                                       const JointDistribution& d, int which, int n,
                                       double tol) {
    std::array<double, 4> out;
    out.fill(std::numeric_limits<double>::quiet_NaN());
    double L = 0.0;
    for (const auto& o : d.outcomes)
        if (o.prob > 0.0) L = std::max(L, std::abs(which == 0 ? o.w : o.q_m));
    for (int k = 1; k <= n; ++k) {
        if (L == 0.0) {
            out[k - 1] = 0.0;
            continue;
        }
        double h = base_step(k) / L;
        double a = richardson(lnchi, k, h);
        double b = richardson(lnchi, k, 2.0 * h);
        double scale = std::max({std::abs(a), abs_moment(d, which, k)});
        if (std::abs(a - b) > tol * scale)
            throw PhysicsError("finite-difference cumulant unstable between step sizes");
        out[k - 1] = a;
    }
    return out;
}

CumulantSet derivative_set(const Excess& ex, const JointDistribution& d, int n, double tol) {
    if (n < 1 || n > 4) throw InputError("derivative order must be 1..4");
    auto lw = [&](double g) { return log1p_c(ex(g, 0.0)); };
    auto lq = [&](double g) { return log1p_c(ex(0.0, g)); };
    CumulantSet c;
    c.w = derivative_route(lw, d, 0, n, tol);
    c.q_m = derivative_route(lq, d, 1, n, tol);
    c.q_t = c.w[0] - c.q_m[0];
    return c;
}

} // namespace

CumulantSet combine(const CumulantSet& f, const CumulantSet& b) {
    CumulantSet c;
    for (int i = 0; i < 4; ++i) {
        c.w[i] = f.w[i] + b.w[i];
        c.q_m[i] = f.q_m[i] + b.q_m[i];
    }
    c.q_t = f.q_t + b.q_t;
    c.direction = Direction::combined;
    return c;
}

cplx ccos(double x, double y) {
    return {std::cos(x) * std::cosh(y), -std::sin(x) * std::sinh(y)};
}

cplx cf_general(const CycleParams& p, const GeneralQubitChannel& ch, double gw, double gm) {
    p.validate();
    const double th = ch.theta(), h = ch.h();
    const double t = p.tanh_bn1();
    const double em = 0.5 * (1.0 + t); // e^{beta nu1}/Z
    const double ep = 0.5 * (1.0 - t); // e^{-beta nu1}/Z
    const double d = p.delta, z = p.zeta, n1 = p.nu1, n2 = p.nu2;
    cplx r = 0.0;
    r += (1 - d) * (1 - z) * (em * (h - th) + ep * (1 - th));
    r += (1 - d) * z * (em * eix(-2 * gw * n1) * (h - th) + ep * eix(2 * gw * n1) * (1 - th));
    r += (1 - d) * z *
         (em * (1 - h + th) * eix(2 * gw * n2 + 2 * gm * n2) +
          ep * eix(-2 * gw * n2 - 2 * gm * n2) * th);
    r += (1 - d) * (1 - z) *
         (em * (1 - h + th) * eix(2 * gw * (n2 - n1) + 2 * gm * n2) +
          ep * eix(-2 * gw * (n2 - n1) - 2 * gm * n2) * th);
    r += d * (1 - z) *
         (em * eix(-2 * gw * n2 - 2 * gm * n2) * th +
          ep * eix(2 * gw * n2 + 2 * gm * n2) * (1 - h + th));
    r += d * z *
         (em * eix(-2 * gw * (n1 + n2) - 2 * gm * n2) * th +
          ep * eix(2 * gw * (n1 + n2) + 2 * gm * n2) * (1 - h + th));
    r += d * z * (em * (1 - th) + ep * (h - th));
    r += d * (1 - z) * (em * eix(-2 * gw * n1) * (1 - th) + ep * eix(2 * gw * n1) * (h - th));
    return r;
}

namespace {

// Shared body of the unital and coherently-controlled forms: c0 multiplies the
// diagonal-channel bracket, c1 the theta bracket.
cplx unital_form(const CycleParams& p, double c0, double c1, double gw, double gm) {
    const double t = p.tanh_bn1();
    const double d = p.delta, z = p.zeta, n1 = p.nu1, n2 = p.nu2;
    const double u = d + z - 2 * d * z;
    cplx first = 1.0 + (cz(2 * gw * n1, 1.0, t) - 1.0) * u;
    cplx second = (1 - d) * (z * cz(2 * (gw + gm) * n2, -1.0, t) +
                             (1 - z) * cz(2 * (gw * (n2 - n1) + gm * n2), -1.0, t)) +
                  d * ((1 - z) * cz(2 * (gw + gm) * n2, 1.0, t) +
                       z * cz(2 * ((n1 + n2) * gw + gm * n2), 1.0, t));
    return c0 * first + c1 * second;
}

// 2 cos(x + i s beta nu1)/Z - 1
cplx czm1(double x, double s, double t) {
    const double h = std::sin(0.5 * x);
    return {-2.0 * h * h, -std::sin(x) * s * t};
}

// unital_form - 1, valid when c0 + c1 = 1; every bracket is a convex combination.
cplx unital_excess(const CycleParams& p, double c0, double c1, double gw, double gm) {
    const double t = p.tanh_bn1();
    const double d = p.delta, z = p.zeta, n1 = p.nu1, n2 = p.nu2;
    const double u = d + z - 2 * d * z;
    cplx first = czm1(2 * gw * n1, 1.0, t) * u;
    cplx second = (1 - d) * (z * czm1(2 * (gw + gm) * n2, -1.0, t) +
                             (1 - z) * czm1(2 * (gw * (n2 - n1) + gm * n2), -1.0, t)) +
                  d * ((1 - z) * czm1(2 * (gw + gm) * n2, 1.0, t) +
                       z * czm1(2 * ((n1 + n2) * gw + gm * n2), 1.0, t));
    return c0 * first + c1 * second;
}

} // namespace

cplx cf_unital(const CycleParams& p, double theta, double gw, double gm) {
    p.validate();
    check_theta(theta);
    return unital_form(p, 1.0 - theta, theta, gw, gm);
}

cplx cf_cs(const CycleParams& p, double theta, const ControlSpec& ctrl, double gw, double gm) {
    // validates theta/alpha domain through the merged distribution
    (void)cs_distribution(p, theta, ctrl);
    const double s = ctrl.sign() * ctrl.coherence();
    const double two_p = 1.0 + s;
    return unital_form(p, (1.0 - theta + s) / two_p, theta / two_p, gw, gm);
}

cplx cf_transform(const JointDistribution& d, double gw, double gm) {
    cplx r = 0.0;
    for (const auto& o : d.outcomes) r += o.prob * eix(gw * o.w + gm * o.q_m);
    return r;
}

CumulantSet cumulants_from_distribution(const JointDistribution& d) {
    CumulantSet c;
    c.w = cumulants_of(d, true);
    c.q_m = cumulants_of(d, false);
    c.q_t = c.w[0] - c.q_m[0];
    c.direction = d.direction;
    return c;
}

FirstSecond closed_form_first_second(const CycleParams& p, double theta) {
    p.validate();
    check_theta(theta);
    const double t = p.tanh_bn1();
    const double d = p.delta, z = p.zeta, th = theta, n1 = p.nu1, n2 = p.nu2;
    const double c = th + z - 2 * th * z + d * (-1 + 2 * th) * (-1 + 2 * z);
    FirstSecond r;
    r.q_m = 2 * (1 - 2 * d) * th * n2 * t;
    r.q_m2 = -4 * th * n2 * n2 * (-1 + (1 - 2 * d) * (1 - 2 * d) * th * t * t);
    r.q_t = -2 * (th + (1 - 2 * th) * (d + z - 2 * d * z)) * n1 * t;
    r.w = 2 * ((1 - 2 * d) * th * n2 - (th + (1 - 2 * th) * (d + z - 2 * d * z)) * n1) * t;
    double lin = c * n1 + (-1 + 2 * d) * th * n2;
    r.w2 = 4 * c * n1 * n1 + 8 * th * (-1 + d + z) * n1 * n2 + 4 * th * n2 * n2 -
           4 * lin * lin * t * t;
    return r;
}

FirstCumulants cs_first_cumulants(const CycleParams& p, double theta, const ControlSpec& ctrl) {
    p.validate();
    check_theta(theta);
    const double t = p.tanh_bn1();
    const double d = p.delta, z = p.zeta, th = theta, n1 = p.nu1, n2 = p.nu2;
    const double s = ctrl.coherence();
    const double sg = ctrl.sign();
    const double den = 1.0 + sg * s;
    FirstCumulants r;
    r.q_m = 2 * (1 - 2 * d) * th * n2 * t / den;
    r.q_t = -2 * (th + z - 2 * th * z + d * (1 - 2 * z) * (1 - 2 * th)) * n1 * t / den -
            sg * 2 * s * (z + d - 2 * d * z) * n1 * t / den;
    r.w = r.q_m + r.q_t;
    return r;
}

CumulantSet cf_derivative_check(const CycleParams& p, double theta, int n, double cf_tol) {
    auto d = enumerate_paths(p, theta);
    Excess ex = [&](double gw, double gm) {
        return unital_excess(p, 1.0 - theta, theta, gw, gm);
    };
    return derivative_set(ex, d, n, cf_tol);
}

CumulantSet cf_derivative_check(const CycleParams& p, double theta, const ControlSpec& ctrl,
                                int n, double cf_tol) {
    auto d = cs_distribution(p, theta, ctrl);
    const double s = ctrl.sign() * ctrl.coherence();
    const double two_p = 1.0 + s;
    Excess ex = [&](double gw, double gm) {
        return unital_excess(p, (1.0 - theta + s) / two_p, theta / two_p, gw, gm);
    };
    return derivative_set(ex, d, n, cf_tol);
}

double scaled_error(double a, double b, double scale) {
    double s = std::max({std::abs(a), std::abs(b), scale});
    if (s == 0.0) return 0.0;
    return std::abs(a - b) / s;
}

double abs_moment(const JointDistribution& d, int which, int k) {
    double s = 0.0;
    for (const auto& o : d.outcomes) s += o.prob * std::pow(std::abs(which == 0 ? o.w : o.q_m), k);
    return s;
}

} // namespace otto
