#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "otto/cumulants.hpp"

namespace otto {

enum class Regime { Engine, Accelerator, Heater, EnginePrime, Undetermined };

const char* to_string(Regime r);

constexpr double kRegimeTol = 1e-12;
constexpr double kBoundTol = 1e-10;

Regime classify_regime(double q_t, double q_m, double w, double beta, double tol = kRegimeTol);
Regime classify_regime(const CumulantSet& c, double beta, double tol = kRegimeTol);

enum class ModeKind { symmetric, asymmetric, coherent };

struct Mode {
    ModeKind kind = ModeKind::symmetric;
    ControlSpec control{};

    static Mode symmetric() { return {ModeKind::symmetric, {}}; }
    static Mode asymmetric() { return {ModeKind::asymmetric, {}}; }
    static Mode coherent(const ControlSpec& c) { return {ModeKind::coherent, c}; }
};

const char* to_string(ModeKind k);

// symmetric requires delta == zeta.
void check_mode(const CycleParams& p, const Mode& m);

// Cumulants the mode reasons about: forward for symmetric cycles, forward +
// backward for asymmetric ones, the post-selected branch for coherent mode.
CumulantSet mode_cumulants(const CycleParams& p, double theta, const Mode& m);

struct Threshold {
    double value;
    bool strict;
};

Threshold positive_work_threshold(const CycleParams& p, double theta, const Mode& m);

double otto_efficiency(const CycleParams& p);
double efficiency(const CycleParams& p, double theta, const Mode& m);

// kappa_2 / kappa_1^2, +inf when |kappa_1| <= tol.
double relative_fluctuation(double k1, double k2, double tol = kRegimeTol);

// Root of f in [lo, hi]; f must change sign on the bracket.
double zero_work_crossing(const std::function<double(double)>& f, double lo, double hi);

struct BoundReport {
    std::string name;
    double left = 0.0;
    double right = 0.0;
    bool applicable = false;
    bool satisfied = false;
    double margin = 0.0; // right - left
};

std::vector<BoundReport> verify_bounds(const CycleParams& p, double theta, const Mode& m,
                                       double tol = kBoundTol);

void write_bounds_csv(std::ostream& os, const std::vector<BoundReport>& reports,
                      bool header = true);

struct RatioScan {
    int order = 2;
    double ratio = 0.0;
    double efficiency = 0.0;
    double efficiency_pow = 0.0;
    bool below_efficiency_pow = false;
    bool above_one = false;
    bool sign_mismatch = false;
    bool undefined = false;
    Regime regime = Regime::Undetermined;
};

RatioScan cumulant_ratio_scan(const CycleParams& p, double theta, int n);

struct Shape {
    double skewness;
    double kurtosis; // excess
};

struct ShapeStats {
    Shape w;
    Shape q_m;
};

Shape shape_stats(const std::array<double, 4>& k);
ShapeStats shape_stats(const CumulantSet& c);

// Symmetrized RF difference 2 sum k2(W)/(sum k1(W))^2 - 2 sum k2(Q)/(sum k1(Q))^2.
double asym_rf_difference(const CycleParams& p, double theta);
double asym_rf_difference_closed_form(const CycleParams& p, double theta);
// Positivity term of the asymmetric RF difference.
double asym_a_term(double delta, double zeta, double theta, double coth2);

} // namespace otto
