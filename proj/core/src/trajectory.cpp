#include "otto/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <tuple>

#include "otto/detail/format.hpp"

namespace otto {

namespace {

constexpr double kNegative = 1e-10;

void check_prob(double x, const char* what) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0)
        throw InputError(std::string(what) + " must lie in [0, 1]");
}

using Key = std::tuple<int, int, int>;

// Energies in units: E1(+) = +nu1 -> sign +1.
int sgn(int s) { return s == 0 ? 1 : -1; }

std::map<Key, double> table(const CycleParams& p, double theta, double h) {
    const double t = p.tanh_bn1();
    const double pn[2] = {0.5 * (1.0 - t), 0.5 * (1.0 + t)};
    std::map<Key, double> rows;
    for (int n = 0; n < 2; ++n)
        for (int m = 0; m < 2; ++m)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    double pu = (n == m) ? 1.0 - p.delta : p.delta;
                    double pc;
                    if (m == 0) pc = (k == 0) ? 1.0 - theta : theta;
                    else pc = (k == 0) ? 1.0 - h + theta : h - theta;
                    double pv = (k == l) ? 1.0 - p.zeta : p.zeta;
                    double pr = pn[n] * pu * pc * pv;
                    // W = -(E2(m) - E1(n) + E1(l) - E2(k)), Q_M = E2(k) - E2(m)
                    int a = sgn(n) - sgn(l);
                    int b = sgn(k) - sgn(m);
                    int c = sgn(k) - sgn(m);
                    rows[{a, b, c}] += pr;
                }
    return rows;
}

JointDistribution finish(const std::map<Key, double>& rows, const CycleParams& p) {
    JointDistribution d;
    for (const auto& [key, pr] : rows) {
        double v = pr;
        if (v < -kNegative) throw PhysicsError("merged outcome probability is negative");
        if (v < 0.0) v = 0.0;
        auto [a, b, c] = key;
        d.outcomes.push_back({a * p.nu1 + b * p.nu2, c * p.nu2, v, a, b, c});
    }
    double tot = d.total();
    if (std::abs(tot - 1.0) > 1e-10) throw PhysicsError("probabilities do not sum to 1");
    return d;
}

void validate_theta(double theta) { check_prob(theta, "theta"); }

} // namespace

void CycleParams::validate() const {
    if (!std::isfinite(beta)) throw InputError("beta must be finite");
    if (!std::isfinite(nu1) || nu1 <= 0.0) throw InputError("nu1 must be positive");
    if (!std::isfinite(nu2) || nu2 <= 0.0) throw InputError("nu2 must be positive");
    check_prob(delta, "delta");
    check_prob(zeta, "zeta");
}

double CycleParams::partition() const { return 2.0 * std::cosh(beta * nu1); }

double CycleParams::tanh_bn1() const { return std::tanh(beta * nu1); }

CycleParams CycleParams::swapped() const {
    CycleParams q = *this;
    std::swap(q.delta, q.zeta);
    return q;
}

const char* to_string(Direction d) {
    switch (d) {
    case Direction::forward: return "forward";
    case Direction::backward: return "backward";
    case Direction::combined: return "combined";
    }
    return "?";
}

double JointDistribution::total() const {
    double s = 0.0;
    for (const auto& o : outcomes) s += o.prob;
    return s;
}

double JointDistribution::mean_w() const {
    double s = 0.0;
    for (const auto& o : outcomes) s += o.prob * o.w;
    return s;
}

double JointDistribution::mean_q_m() const {
    double s = 0.0;
    for (const auto& o : outcomes) s += o.prob * o.q_m;
    return s;
}

JointDistribution enumerate_paths(const CycleParams& p, double theta) {
    p.validate();
    validate_theta(theta);
    return finish(table(p, theta, 1.0), p);
}

JointDistribution enumerate_paths(const CycleParams& p, const GeneralQubitChannel& ch) {
    p.validate();
    return finish(table(p, ch.theta(), ch.h()), p);
}

JointDistribution backward_distribution(const CycleParams& p, double theta) {
    auto d = enumerate_paths(p.swapped(), theta);
    d.direction = Direction::backward;
    return d;
}

JointDistribution cs_distribution(const CycleParams& p, double theta, const ControlSpec& ctrl) {
    p.validate();
    validate_theta(theta);
    // theta > 1/2 is outside the projective-channel model; the minus branch then
    // goes negative and finish() reports it
    const double s = ctrl.sign() * ctrl.coherence();
    const double norm = 1.0 + s; // 2 p_+-
    auto rows = table(p, theta, 1.0);
    for (auto& [key, pr] : rows) pr /= norm;
    for (const auto& [key, pr] : table(p, 0.0, 1.0)) rows[key] += s * pr / norm;
    auto d = finish(rows, p);
    d.control = ctrl;
    return d;
}

SampleStats sample(const JointDistribution& dist, std::uint64_t n, std::uint64_t seed) {
    if (n == 0) throw InputError("sample count must be positive");
    if (dist.outcomes.empty()) throw InputError("empty distribution");
    std::vector<double> cdf;
    double acc = 0.0;
    for (const auto& o : dist.outcomes) {
        acc += o.prob;
        cdf.push_back(acc);
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, acc);
    SampleStats st;
    st.count = n;
    st.seed = seed;
    st.tallies.assign(dist.outcomes.size(), 0);
    for (std::uint64_t i = 0; i < n; ++i) {
        double u = uni(rng);
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
        ++st.tallies[idx];
    }
    auto fill = [&](VarStats& vs, auto value) {
        const double nn = static_cast<double>(n);
        for (std::size_t i = 0; i < dist.outcomes.size(); ++i) {
            double x = value(dist.outcomes[i]);
            double f = st.tallies[i] / nn;
            double xp = 1.0;
            for (int k = 0; k < 4; ++k) {
                xp *= x;
                vs.raw[k] += f * xp;
            }
        }
        vs.mean = vs.raw[0];
        double m2 = 0.0, m4 = 0.0;
        for (std::size_t i = 0; i < dist.outcomes.size(); ++i) {
            double dx = value(dist.outcomes[i]) - vs.mean;
            double f = st.tallies[i] / nn;
            m2 += f * dx * dx;
            m4 += f * dx * dx * dx * dx;
        }
        vs.variance = m2;
        vs.mean_se = std::sqrt(m2 / nn);
        vs.variance_se = std::sqrt(std::max(0.0, m4 - m2 * m2) / nn);
    };
    fill(st.w, [](const Outcome& o) { return o.w; });
    fill(st.q_m, [](const Outcome& o) { return o.q_m; });
    return st;
}

void write_distribution_csv(std::ostream& os, const JointDistribution& dist) {
    os << "w,q_m,prob\n";
    for (const auto& o : dist.outcomes)
        os << detail::fmt17(o.w) << ',' << detail::fmt17(o.q_m) << ',' << detail::fmt17(o.prob)
           << '\n';
}

} // namespace otto
