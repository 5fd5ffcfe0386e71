#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "otto/qstate.hpp"

namespace otto {

struct CycleParams {
    double beta = 1.0;
    double nu1 = 1.0;
    double nu2 = 2.0;
    double delta = 0.0;
    double zeta = 0.0;

    void validate() const;
    // Z = e^{beta nu1} + e^{-beta nu1}; overflows to inf for huge |beta nu1|.
    double partition() const;
    double tanh_bn1() const;
    // delta <-> zeta
    CycleParams swapped() const;
};

enum class Direction { forward, backward, combined };

const char* to_string(Direction d);

struct Outcome {
    double w;
    double q_m;
    double prob;
    // integer coefficients: w = a nu1 + b nu2, q_m = c nu2
    int a, b, c;
};

struct JointDistribution {
    std::vector<Outcome> outcomes;
    Direction direction = Direction::forward;
    std::optional<ControlSpec> control;

    double total() const;
    double mean_w() const;
    double mean_q_m() const;
};

// Table of the 16 two-point-measurement paths for a unital channel (h = 1).
JointDistribution enumerate_paths(const CycleParams& p, double theta);
// Same table with theta and h taken from an arbitrary Kraus set.
JointDistribution enumerate_paths(const CycleParams& p, const GeneralQubitChannel& ch);
JointDistribution backward_distribution(const CycleParams& p, double theta);
JointDistribution cs_distribution(const CycleParams& p, double theta, const ControlSpec& ctrl);

struct VarStats {
    std::array<double, 4> raw{};   // E[X^k], k = 1..4
    double mean = 0.0;
    double variance = 0.0;
    double mean_se = 0.0;
    double variance_se = 0.0;
};

struct SampleStats {
    std::uint64_t count = 0;
    std::uint64_t seed = 0;
    VarStats w;
    VarStats q_m;
    std::vector<std::uint64_t> tallies;

    bool operator==(const SampleStats&) const = default;
};

inline bool operator==(const VarStats& x, const VarStats& y) {
    return x.raw == y.raw && x.mean == y.mean && x.variance == y.variance &&
           x.mean_se == y.mean_se && x.variance_se == y.variance_se;
}

SampleStats sample(const JointDistribution& dist, std::uint64_t n, std::uint64_t seed);

void write_distribution_csv(std::ostream& os, const JointDistribution& dist);

} // namespace otto
