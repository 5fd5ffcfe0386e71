#pragma once

#include <utility>
#include <vector>

#include "otto/analysis.hpp"
#include "otto/qstate.hpp"
#include "otto/trajectory.hpp"

namespace otto {

struct LZParams {
    CycleParams cycle; // zeta is forced to delta
    double phi = 0.0;
    MeasurementChannel channel;

    void validate() const;
};

// (U, V) in the {|+>, |->} bases; V is the entry-wise conjugate of U^dagger.
std::pair<Mat2, Mat2> lz_unitaries(const LZParams& p);

struct UnmonitoredResult {
    double e1 = 0.0, e2 = 0.0, e3 = 0.0, e4 = 0.0;
    double w = 0.0;
    double q_m = 0.0;
    double q_t = 0.0;
    double eta = 0.0; // NaN unless q_m > 0
};

UnmonitoredResult unmonitored_cycle(const LZParams& p);

// Closed form of the unmonitored measurement heat.
double qum_formula(const LZParams& p);

struct LZRow {
    double delta = 0.0;
    double w_mon = 0.0;
    double eta_mon = 0.0;
    Regime regime_mon = Regime::Undetermined;
    double w_um = 0.0;
    double eta_um = 0.0;
    Regime regime_um = Regime::Undetermined;
};

std::vector<LZRow> monitored_vs_unmonitored(const LZParams& p, const std::vector<double>& deltas);

void write_lz_csv(std::ostream& os, const std::vector<LZRow>& rows);

} // namespace otto
