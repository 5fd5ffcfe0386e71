#include <cmath>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "otto/cumulants.hpp"

using namespace otto;

namespace {

CycleParams cyc(double beta, double nu1, double nu2, double d, double z) {
    CycleParams p;
    p.beta = beta;
    p.nu1 = nu1;
    p.nu2 = nu2;
    p.delta = d;
    p.zeta = z;
    return p;
}

double rf(double k1, double k2) { return k2 / (k1 * k1); }

} // namespace

TEST(Ccos, MatchesComplexCosine) {
    for (double x : {-2.0, 0.0, 0.3, 5.0})
        for (double y : {-3.0, 0.0, 0.7}) {
            cplx want = std::cos(cplx(x, y));
            EXPECT_NEAR(std::abs(ccos(x, y) - want), 0.0, 1e-14 * std::abs(want) + 1e-15);
        }
}

TEST(CharacteristicFunction, OriginIsOne) {
    auto p = cyc(0.7, 1, 2, 0.1, 0.3);
    EXPECT_NEAR(std::abs(cf_unital(p, 0.2, 0, 0) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(cf_cs(p, 0.2, ControlSpec(0.5, Branch::minus), 0, 0) - 1.0), 0.0, 1e-15);
    GeneralQubitChannel g(PauliChannel(0.6, 0.1, 0.2, 0.1).kraus());
    EXPECT_NEAR(std::abs(cf_general(p, g, 0, 0) - 1.0), 0.0, 1e-15);
}

TEST(CharacteristicFunction, ReferencePoint) {
    auto p = cyc(0.7, 1, 2, 0.1, 0.1);
    auto ref = oracle::theta_paths(p, 0.2);
    EXPECT_NEAR(std::abs(cf_unital(p, 0.2, 0.3, -0.2) - oracle::transform(ref, 0.3, -0.2)), 0.0,
                1e-14);
}

TEST(CharacteristicFunction, UnitalAgreesWithGeneralAndTransform) {
    oracle::Draw r(201);
    for (int i = 0; i < 200; ++i) {
        auto p = r.cycle(false);
        double a = r.uniform(0, 0.5), b = r.uniform(0, 0.5);
        GeneralQubitChannel g(PauliChannel(1 - a - b, a, b, 0).kraus());
        auto ref = oracle::theta_paths(p, a + b);
        for (int j = 0; j < 100; ++j) {
            double gw = r.uniform(-3, 3), gm = r.uniform(-3, 3);
            cplx u = cf_unital(p, a + b, gw, gm);
            EXPECT_NEAR(std::abs(u - cf_general(p, g, gw, gm)), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(u - oracle::transform(ref, gw, gm)), 0.0, 1e-12);
        }
    }
}

TEST(CharacteristicFunction, NonUnitalGeneralMatchesOracle) {
    oracle::Draw r(202);
    for (int i = 0; i < 100; ++i) {
        auto p = r.cycle(false);
        double g = r.uniform(0, 1);
        Mat2 k0 = Mat2::Zero(), k1 = Mat2::Zero();
        k0(0, 0) = std::sqrt(1 - g);
        k0(1, 1) = 1.0;
        k1(1, 0) = std::sqrt(g);
        GeneralQubitChannel ch({k0, k1});
        auto ref = oracle::paths(p.beta, p.nu1, p.nu2, oracle::stroke(p.delta),
                                 oracle::transitions(ch.kraus()), oracle::stroke(p.zeta));
        for (int j = 0; j < 50; ++j) {
            double gw = r.uniform(-3, 3), gm = r.uniform(-3, 3);
            EXPECT_NEAR(std::abs(cf_general(p, ch, gw, gm) - oracle::transform(ref, gw, gm)), 0.0,
                        1e-12);
        }
    }
}

TEST(CharacteristicFunction, DiagonalChannelIgnoresHeatVariable) {
    auto p = cyc(0.4, 1, 2.5, 0.3, 0.2);
    GeneralQubitChannel g({pauli(0) * std::sqrt(0.7), pauli(3) * std::sqrt(0.3)});
    for (double gm : {-1.0, 0.4, 2.0})
        EXPECT_NEAR(std::abs(cf_general(p, g, 0.7, gm) - cf_general(p, g, 0.7, 0.0)), 0.0, 1e-15);
}

TEST(CharacteristicFunction, RealAtInfiniteTemperature) {
    auto p = cyc(0.0, 1.2, 2.1, 0.3, 0.6);
    for (double gw : {-1.0, 0.3, 2.2})
        for (double gm : {-0.5, 0.9}) EXPECT_NEAR(cf_unital(p, 0.35, gw, gm).imag(), 0.0, 1e-15);
}

TEST(CharacteristicFunction, ControlledMatchesTransform) {
    oracle::Draw r(203);
    for (int i = 0; i < 200; ++i) {
        auto p = r.cycle(false);
        double th = r.uniform(0, 0.5);
        ControlSpec c(r.uniform(0, 1), i % 2 ? Branch::plus : Branch::minus);
        auto d = cs_distribution(p, th, c);
        for (int j = 0; j < 20; ++j) {
            double gw = r.uniform(-3, 3), gm = r.uniform(-3, 3);
            EXPECT_NEAR(std::abs(cf_cs(p, th, c, gw, gm) - cf_transform(d, gw, gm)), 0.0, 1e-12);
        }
        EXPECT_NEAR(std::abs(cf_cs(p, th, ControlSpec(0, c.branch), 0.4, 0.9) -
                             cf_unital(p, th, 0.4, 0.9)),
                    0.0, 1e-15);
    }
}

TEST(Cumulants, SingleOutcomeHasNoSpread) {
    JointDistribution d;
    d.outcomes.push_back({3.0, 1.0, 1.0, 0, 0, 0});
    auto c = cumulants_from_distribution(d);
    EXPECT_EQ(c.w[0], 3.0);
    for (int k = 1; k < 4; ++k) {
        EXPECT_EQ(c.w[k], 0.0);
        EXPECT_EQ(c.q_m[k], 0.0);
    }
}

TEST(Cumulants, ReferenceMeansAndRelativeFluctuations) {
    auto a = cumulants_from_distribution(enumerate_paths(cyc(0.7, 1, 2, 0, 0), 0.2));
    auto b = cumulants_from_distribution(enumerate_paths(cyc(0.7, 1, 2, 0, 0), 0.7));
    EXPECT_NEAR(a.w[0], 0.241747, 1e-6);
    EXPECT_NEAR(b.w[0], 0.846115, 1e-6);
    EXPECT_NEAR(rf(a.w[0], a.w[1]), 12.6889, 1e-4);
    EXPECT_NEAR(rf(b.w[0], b.w[1]), 2.9111, 1e-4);
}

TEST(Cumulants, NegativeTemperatureFullTransition) {
    auto a = cumulants_from_distribution(enumerate_paths(cyc(-0.7, 1, 2, 1, 1), 0.2));
    auto b = cumulants_from_distribution(enumerate_paths(cyc(-0.7, 1, 2, 1, 1), 0.7));
    EXPECT_NEAR(a.w[0], 0.725241, 1e-6);
    EXPECT_NEAR(b.w[0], 2.53834, 1e-5);
    EXPECT_NEAR(rf(a.w[0], a.w[1]), 12.6889, 1e-4);
    // full transition is not the work maximum at theta=0.2: peak sits at delta=5/6
    double peak = enumerate_paths(cyc(-0.7, 1, 2, 5.0 / 6, 5.0 / 6), 0.2).mean_w();
    EXPECT_NEAR(peak, 0.7655325177, 1e-9);
    for (double d = 0; d <= 1.0; d += 0.01)
        EXPECT_LE(enumerate_paths(cyc(-0.7, 1, 2, d, d), 0.2).mean_w(), peak + 1e-12);
}

TEST(Cumulants, AgreeWithRawMomentOracle) {
    oracle::Draw r(204);
    for (int i = 0; i < 2000; ++i) {
        auto p = r.cycle(false);
        double th = r.uniform(0, 1);
        auto ref = oracle::theta_paths(p, th);
        auto w = oracle::cumulants(ref, true), q = oracle::cumulants(ref, false);
        auto c = cumulants_from_distribution(enumerate_paths(p, th));
        for (int k = 0; k < 4; ++k) {
            EXPECT_LT(oracle::err(c.w[k], w[k], oracle::abs_moment(ref, true, k + 1)), 1e-12);
            EXPECT_LT(oracle::err(c.q_m[k], q[k], oracle::abs_moment(ref, false, k + 1)), 1e-12);
        }
        EXPECT_NEAR(c.w[0], c.q_m[0] + c.q_t, 1e-12);
    }
}

TEST(ClosedForm, ReferenceValues) {
    auto f = closed_form_first_second(cyc(0.7, 1, 2, 0.1, 0.1), 0.2);
    EXPECT_NEAR(f.q_m, 0.386795, 1e-6);
    EXPECT_NEAR(f.q_t, -0.372290, 1e-6);
    EXPECT_NEAR(f.w, 0.014505, 1e-6);
}

TEST(ClosedForm, AdiabaticWorkVariance) {
    for (double th : {0.0, 0.3, 0.9}) {
        auto p = cyc(0.6, 1.1, 2.3, 0, 0);
        double t = std::tanh(0.6 * 1.1);
        auto f = closed_form_first_second(p, th);
        EXPECT_NEAR(f.w2, 4 * th * std::pow(2.3 - 1.1, 2) * (1 - th * t * t), 1e-13);
    }
}

TEST(ClosedForm, InfiniteTemperature) {
    auto p = cyc(0.0, 1.1, 2.3, 0.2, 0.4);
    auto f = closed_form_first_second(p, 0.3);
    EXPECT_EQ(f.q_m, 0.0);
    EXPECT_EQ(f.q_t, 0.0);
    EXPECT_EQ(f.w, 0.0);
    EXPECT_NEAR(f.q_m2, 4 * 0.3 * 2.3 * 2.3, 1e-14);
    auto c = cumulants_from_distribution(enumerate_paths(p, 0.3));
    EXPECT_NEAR(f.w2, c.w[1], 1e-13);
}

TEST(ClosedForm, MatchesEnumerationProperty) {
    oracle::Draw r(205);
    for (int i = 0; i < 5000; ++i) {
        auto p = r.cycle(i % 2 == 0);
        double th = r.uniform(0, 1);
        auto d = enumerate_paths(p, th);
        auto c = cumulants_from_distribution(d);
        auto f = closed_form_first_second(p, th);
        EXPECT_LT(scaled_error(c.w[0], f.w, abs_moment(d, 0, 1)), 1e-12);
        EXPECT_LT(scaled_error(c.w[1], f.w2, abs_moment(d, 0, 2)), 1e-12);
        EXPECT_LT(scaled_error(c.q_m[0], f.q_m, abs_moment(d, 1, 1)), 1e-12);
        EXPECT_LT(scaled_error(c.q_m[1], f.q_m2, abs_moment(d, 1, 2)), 1e-12);
        EXPECT_LT(scaled_error(c.q_t, f.q_t, abs_moment(d, 0, 1) + abs_moment(d, 1, 1)), 1e-12);
        if (p.beta > 0) EXPECT_LE(c.q_t, 1e-12);
    }
}

TEST(ControlledFirstCumulants, Reductions) {
    auto p = cyc(0.7, 1, 2, 0.1, 0.1);
    auto f = closed_form_first_second(p, 0.2);
    auto g = cs_first_cumulants(p, 0.2, ControlSpec(0.0, Branch::plus));
    EXPECT_NEAR(g.w, f.w, 1e-15);
    EXPECT_NEAR(g.q_m, f.q_m, 1e-15);
    EXPECT_NEAR(g.q_t, f.q_t, 1e-15);

    auto a = cyc(0.7, 1, 2, 0, 0);
    for (Branch b : {Branch::plus, Branch::minus}) {
        ControlSpec c(0.3, b);
        double want = 2 * 0.2 * (2 - 1) * std::tanh(0.7) / (1 + c.sign() * c.coherence());
        EXPECT_NEAR(cs_first_cumulants(a, 0.2, c).w, want, 1e-15);
    }
    EXPECT_GT(cs_first_cumulants(p, 0.2, ControlSpec(0.5, Branch::minus)).w, f.w);
}

TEST(ControlledFirstCumulants, MatchControlledEnumeration) {
    oracle::Draw r(206);
    for (int i = 0; i < 2000; ++i) {
        auto p = r.cycle(false);
        double th = r.uniform(0, 0.5);
        ControlSpec c(r.uniform(0, 1), i % 2 ? Branch::plus : Branch::minus);
        auto d = cs_distribution(p, th, c);
        auto e = cumulants_from_distribution(d);
        auto f = cs_first_cumulants(p, th, c);
        EXPECT_LT(scaled_error(e.w[0], f.w, abs_moment(d, 0, 1)), 1e-12);
        EXPECT_LT(scaled_error(e.q_m[0], f.q_m, abs_moment(d, 1, 1)), 1e-12);
    }
}

TEST(DerivativeRoute, FirstOrderIsTight) {
    oracle::Draw r(207);
    for (int i = 0; i < 200; ++i) {
        auto p = r.cycle(false);
        double th = r.uniform(0, 1);
        auto d = enumerate_paths(p, th);
        auto e = cumulants_from_distribution(d);
        auto c = cf_derivative_check(p, th, 1);
        EXPECT_LT(scaled_error(c.w[0], e.w[0], abs_moment(d, 0, 1)), 1e-8);
        EXPECT_TRUE(std::isnan(c.w[1]));
    }
}

TEST(DerivativeRoute, FourthOrderSymmetricCase) {
    auto p = cyc(0.7, 1, 2, 0.1, 0.1);
    auto e = cumulants_from_distribution(enumerate_paths(p, 0.2));
    auto c = cf_derivative_check(p, 0.2, 4);
    EXPECT_NEAR(c.w[3], e.w[3], std::max(1e-6, 1e-6 * std::abs(e.w[3])));
    EXPECT_NEAR(c.q_m[3], e.q_m[3], std::max(1e-6, 1e-6 * std::abs(e.q_m[3])));
}

TEST(DerivativeRoute, OddOrdersVanishAtInfiniteTemperature) {
    auto c = cf_derivative_check(cyc(0.0, 1, 2, 0.3, 0.2), 0.4, 4);
    EXPECT_NEAR(c.w[0], 0.0, 1e-9);
    EXPECT_NEAR(c.w[2], 0.0, 1e-9);
    EXPECT_NEAR(c.q_m[0], 0.0, 1e-9);
    EXPECT_NEAR(c.q_m[2], 0.0, 1e-9);
}

TEST(DerivativeRoute, ControlledBranch) {
    auto p = cyc(0.7, 1, 2, 0.1, 0.1);
    ControlSpec c(0.5, Branch::minus);
    auto d = cs_distribution(p, 0.2, c);
    auto e = cumulants_from_distribution(d);
    auto g = cf_derivative_check(p, 0.2, c, 4);
    for (int k = 0; k < 4; ++k) {
        EXPECT_LT(scaled_error(g.w[k], e.w[k], abs_moment(d, 0, k + 1)), 1e-6);
        EXPECT_LT(scaled_error(g.q_m[k], e.q_m[k], abs_moment(d, 1, k + 1)), 1e-6);
    }
}

TEST(DerivativeRoute, RejectsBadOrder) {
    EXPECT_THROW(cf_derivative_check(cyc(0.5, 1, 2, 0, 0), 0.2, 5), InputError);
    EXPECT_THROW(cf_derivative_check(cyc(0.5, 1, 2, 0, 0), 0.2, 0), InputError);
}

TEST(Identities, EnergyConservationAndIdentityChannel) {
    oracle::Draw r(208);
    for (int i = 0; i < 1000; ++i) {
        auto p = r.cycle(false);
        auto c = cumulants_from_distribution(enumerate_paths(p, 0.0));
        for (double k : c.q_m) EXPECT_EQ(k, 0.0);
        auto d = cumulants_from_distribution(enumerate_paths(p, r.uniform(0, 1)));
        EXPECT_NEAR(d.w[0], d.q_m[0] + d.q_t, 1e-12);
    }
}

TEST(Identities, QuasistaticRatios) {
    oracle::Draw r(209);
    for (int i = 0; i < 1000; ++i) {
        auto p = r.cycle(true);
        p.delta = p.zeta = 0.0;
        auto d = enumerate_paths(p, r.uniform(0, 1));
        auto c = cumulants_from_distribution(d);
        double ratio = 1.0 - p.nu1 / p.nu2;
        for (int k = 0; k < 4; ++k)
            EXPECT_LT(scaled_error(c.w[k], std::pow(ratio, k + 1) * c.q_m[k],
                                   abs_moment(d, 0, k + 1)),
                      1e-12);
    }
}

TEST(Combine, SumsAndTags) {
    auto p = cyc(0.5, 1, 2, 0.1, 0.4);
    auto f = cumulants_from_distribution(enumerate_paths(p, 0.3));
    auto b = cumulants_from_distribution(backward_distribution(p, 0.3));
    auto c = combine(f, b);
    EXPECT_EQ(c.direction, Direction::combined);
    for (int k = 0; k < 4; ++k) EXPECT_EQ(c.w[k], f.w[k] + b.w[k]);
    EXPECT_EQ(c.q_t, f.q_t + b.q_t);
}
