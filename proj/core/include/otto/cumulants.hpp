#pragma once

#include <array>
#include <complex>

#include "otto/qstate.hpp"
#include "otto/trajectory.hpp"

namespace otto {

struct CumulantSet {
    std::array<double, 4> w{};   // kappa_1..kappa_4 of W
    std::array<double, 4> q_m{}; // kappa_1..kappa_4 of Q_M
    double q_t = 0.0;            // <Q_T> = <W> - <Q_M>
    Direction direction = Direction::forward;
};

// Sum of forward and backward cumulants, tagged combined.
CumulantSet combine(const CumulantSet& f, const CumulantSet& b);

struct CFPoint {
    double gamma_w = 0.0;
    double gamma_m = 0.0;
    cplx value{1.0, 0.0};
};

// cos(x + i y) without forming complex exponentials.
cplx ccos(double x, double y);

cplx cf_general(const CycleParams& p, const GeneralQubitChannel& ch, double gamma_w,
                double gamma_m);
cplx cf_unital(const CycleParams& p, double theta, double gamma_w, double gamma_m);
cplx cf_cs(const CycleParams& p, double theta, const ControlSpec& ctrl, double gamma_w,
           double gamma_m);
// sum_k p_k exp(i gamma_w W_k + i gamma_m Q_k)
cplx cf_transform(const JointDistribution& d, double gamma_w, double gamma_m);

CumulantSet cumulants_from_distribution(const JointDistribution& d);

// First and second cumulants in closed form (forward; use swapped() for backward).
struct FirstSecond {
    double q_m = 0.0;
    double q_m2 = 0.0;
    double q_t = 0.0;
    double w = 0.0;
    double w2 = 0.0;
};

FirstSecond closed_form_first_second(const CycleParams& p, double theta);

struct FirstCumulants {
    double q_m = 0.0;
    double q_t = 0.0;
    double w = 0.0;
};

FirstCumulants cs_first_cumulants(const CycleParams& p, double theta, const ControlSpec& ctrl);

// Numeric derivatives of ln chi at the origin for orders 1..n. Entries above
// n are NaN. Throws PhysicsError when two step sizes disagree beyond cf_tol
// (relative to the natural scale E|X|^k).
CumulantSet cf_derivative_check(const CycleParams& p, double theta, int n,
                                double cf_tol = 1e-6);
CumulantSet cf_derivative_check(const CycleParams& p, double theta, const ControlSpec& ctrl,
                                int n, double cf_tol = 1e-6);

// max(|a|, |b|, scale)-relative difference.
double scaled_error(double a, double b, double scale);
// E|X|^k over the W (which = 0) or Q_M (which = 1) marginal.
double abs_moment(const JointDistribution& d, int which, int k);

} // namespace otto
