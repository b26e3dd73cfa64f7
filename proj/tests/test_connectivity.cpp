#include <gtest/gtest.h>

#include <set>

#include "divisor_support.hpp"
#include "hopf/connectivity.hpp"

using namespace hopf;

namespace {

GraphDivisor identity_divisor() { return {Coeffs{0.0, 1.0}, Coeffs{-1.0, 0.0}}; }

GraphDivisor scaled(const GraphDivisor& d, cplx s) {
    Coeffs j = d.joint();
    for (auto& c : j) c *= s;
    return GraphDivisor::from_joint(j);
}

GraphDivisor planted_irregular(std::mt19937_64& rng, int n, const HopfParameter& h) {
    const auto e = branch_values(h).values();
    return hopf::testing::planted_tangency(rng, n, e[1], hopf::testing::random_point(rng));
}

std::vector<double> random_fibre(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> c(2 * (2 * n - 1));
    for (auto& x : c) x = u(rng);
    return c;
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

TEST(CertifySegment, SelfSegment) {
    const auto h = HopfParameter::standard();
    std::mt19937_64 rng(1);
    const GraphDivisor d = hopf::testing::random_divisor(rng, 2);
    const SegmentCertificate c = certify_segment(d, scaled(d, {0.0, 3.0}), h, {});
    const double want = regularity_margin(d.normalized(), h);
    EXPECT_NEAR(c.min_margin, want, 1e-12 * want);
    EXPECT_TRUE(c.monodromy_safe);
}

TEST(CertifySegment, PlantedIrregularCrossingFails) {
    const auto h = HopfParameter::standard();
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 5; ++trial) {
        const GraphDivisor bad = planted_irregular(rng, 2 + trial % 2, h);
        ASSERT_LT(regularity_margin(bad, h), kRegularityThreshold);
        const auto s = hopf::testing::straddle(rng, bad, 0.05);
        ASSERT_TRUE(is_regular(s.first, h));
        ASSERT_TRUE(is_regular(s.second, h));
        PathConfig cfg;
        const SegmentCertificate c = certify_segment(s.first, s.second, h, cfg);
        EXPECT_LT(c.min_margin, cfg.margin_threshold);
        EXPECT_FALSE(c.monodromy_safe);
        cfg.strict = true;
        EXPECT_FALSE(certify_segment(s.first, s.second, h, cfg).strict_certified);
    }
}

TEST(CertifySegment, RefinementIsMonotone) {
    const auto h = HopfParameter::standard();
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 8; ++trial) {
        GraphDivisor a = hopf::testing::random_divisor(rng, 2), b = hopf::testing::random_divisor(rng, 2);
        if (trial % 2 == 1) {
            const auto s = hopf::testing::straddle(rng, planted_irregular(rng, 2, h), 0.2);
            a = s.first;
            b = s.second;
        }
        PathConfig cfg;
        double previous = std::numeric_limits<double>::infinity();
        std::vector<double> coarse;
        for (const int samples : {4, 8, 16, 32}) {
            cfg.samples_per_segment = samples;
            const SegmentCertificate c = certify_segment(a, b, h, cfg);
            EXPECT_LE(c.min_margin, previous);
            const std::set<double> fine(c.samples.begin(), c.samples.end());
            for (double t : coarse) EXPECT_TRUE(fine.count(t)) << t;
            previous = c.min_margin;
            coarse = c.samples;
        }
    }
}

TEST(CertifySegment, StrictModeOnRandomSegments) {
    const auto h = HopfParameter::standard();
    std::mt19937_64 rng(4);
    PathConfig cfg;
    cfg.strict = true;
    int certified = 0;
    for (int trial = 0; trial < 6; ++trial) {
        const GraphDivisor a = hopf::testing::random_divisor(rng, 1 + trial % 3);
        const GraphDivisor b = hopf::testing::random_divisor(rng, 1 + trial % 3);
        const SegmentCertificate c = certify_segment(a, b, h, cfg);
        if (c.strict_certified) {
            ++certified;
            EXPECT_GE(c.min_margin, 0.0);
        }
    }
    EXPECT_GE(certified, 5);
}

TEST(ConnectBase, IdentityAndAntipodal) {
    const auto h = HopfParameter::standard();
    const GraphDivisor d = identity_divisor();
    for (const GraphDivisor& other : {d, scaled(d, -1.0), scaled(d, {0.0, 2.5})}) {
        const CertifiedPath p = connect_base(d, other, h);
        ASSERT_EQ(p.waypoints.size(), 1u);
        EXPECT_DOUBLE_EQ(p.certified_margin, regularity_margin(d.normalized(), h));
        EXPECT_TRUE(p.monodromy_safe);
        EXPECT_TRUE(p.segment_margins.empty());
    }
}

TEST(ConnectBase, SoundnessAndEndpointFidelity) {
    const auto h = HopfParameter::from_tau({0.1, 1.2});
    std::mt19937_64 rng(5);
    int straight = 0;
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 1 + trial % 3;
        const GraphDivisor d0 = scaled(hopf::testing::random_divisor(rng, n), {0.3, -2.0});
        const GraphDivisor d1 = hopf::testing::random_divisor(rng, n);
        PathConfig cfg;
        cfg.seed = trial;
        const CertifiedPath p = connect_base(d0, d1, h, cfg);
        EXPECT_LE(max_abs_diff(p.waypoints.front().joint(), d0.normalized().joint()), 1e-12);
        EXPECT_LE(max_abs_diff(p.waypoints.back().joint(), d1.normalized().joint()), 1e-12);
        EXPECT_GE(p.certified_margin, cfg.margin_threshold);
        EXPECT_TRUE(p.monodromy_safe);
        ASSERT_EQ(p.segment_samples.size(), p.waypoints.size() - 1);
        straight += p.waypoints.size() == 2;
        for (std::size_t s = 0; s + 1 < p.waypoints.size(); ++s) {
            EXPECT_FALSE(p.waypoints[s].equivalent_to(p.waypoints[s + 1]));
            for (double t : p.segment_samples[s])
                EXPECT_GE(regularity_margin(segment_point(p.waypoints[s], p.waypoints[s + 1], t), h),
                          cfg.margin_threshold);
        }
    }
    EXPECT_GE(straight, 10);
}

TEST(ConnectBase, DetoursAroundPlantedIrregularDivisor) {
    const auto h = HopfParameter::standard();
    std::mt19937_64 rng(6);
    const auto s = hopf::testing::straddle(rng, planted_irregular(rng, 2, h), 0.05);
    PathConfig cfg;
    cfg.seed = 17;
    const CertifiedPath p = connect_base(s.first, s.second, h, cfg);
    EXPECT_GE(p.detours, 1);
    EXPECT_LE(p.depth_used, cfg.max_depth);
    EXPECT_GE(p.certified_margin, cfg.margin_threshold);
    for (std::size_t k = 0; k + 1 < p.waypoints.size(); ++k)
        for (double t : p.segment_samples[k])
            EXPECT_GE(regularity_margin(segment_point(p.waypoints[k], p.waypoints[k + 1], t), h),
                      cfg.margin_threshold);

    const CertifiedPath again = connect_base(s.first, s.second, h, cfg);
    ASSERT_EQ(again.waypoints.size(), p.waypoints.size());
    for (std::size_t k = 0; k < p.waypoints.size(); ++k)
        EXPECT_EQ(again.waypoints[k].joint(), p.waypoints[k].joint());
    EXPECT_EQ(again.certified_margin, p.certified_margin);

    cfg.max_depth = 0;
    try {
        connect_base(s.first, s.second, h, cfg);
        FAIL() << "expected an error";
    } catch (const Error& err) {
        EXPECT_EQ(err.kind(), ErrorKind::Budget);
        EXPECT_STREQ(err.what(), "no certified path found at this threshold");
    }
}

TEST(ConnectBase, RejectsBadEndpoints) {
    const auto h = HopfParameter::standard();
    std::mt19937_64 rng(7);
    const GraphDivisor good = hopf::testing::random_divisor(rng, 2);
    const GraphDivisor jump = hopf::testing::planted_jumps(rng, 2, {1}).divisor;
    for (const GraphDivisor& bad : {jump, planted_irregular(rng, 2, h), hopf::testing::random_divisor(rng, 3)}) {
        try {
            connect_base(good, bad, h);
            FAIL() << "expected an error";
        } catch (const Error& err) {
            EXPECT_EQ(err.kind(), ErrorKind::Precondition);
        }
    }
    PathConfig cfg;
    cfg.margin_threshold = -1.0;
    EXPECT_THROW(connect_base(good, good, h, cfg), Error);
}

TEST(ContinueLattice, RecoversAKnownBasisChange) {
    std::mt19937_64 rng(8);
    Eigen::MatrixXcd lattice(1, 2);
    lattice << cplx{1.0, 0.0}, cplx{0.2, 1.3};
    Eigen::MatrixXi m(2, 2);
    m << 2, 1, 1, 1;
    const Eigen::MatrixXcd next = lattice * m.cast<cplx>().inverse();
    const LatticeStep step = continue_lattice(lattice, next);
    EXPECT_EQ(step.change, m);
    EXPECT_LT(step.rounding_residual, 1e-12);
    EXPECT_LT(step.relative_change, 1e-12);
}

TEST(ConnectModuli, IdenticalPoints) {
    const auto h = HopfParameter::standard();
    const ModuliPoint m{identity_divisor(), {{0.25, 0.75}}};
    const ModuliPath p = connect_moduli(m, m, h);
    EXPECT_EQ(p.base.waypoints.size(), 1u);
    EXPECT_EQ(p.fiber.start, p.fiber.end);
    EXPECT_EQ(p.fiber.monodromy, Eigen::MatrixXi::Identity(2, 2));
    EXPECT_EQ(p.fiber.transport_samples, 0);
}

TEST(ConnectModuli, SameDivisorDifferentFibrePoints) {
    const auto h = HopfParameter::standard();
    std::mt19937_64 rng(9);
    const GraphDivisor d = hopf::testing::random_divisor(rng, 2);
    const ModuliPoint a{d, {random_fibre(rng, 2)}}, b{scaled(d, 2.0), {random_fibre(rng, 2)}};
    const ModuliPath p = connect_moduli(a, b, h);
    EXPECT_EQ(p.base.waypoints.size(), 1u);
    for (std::size_t i = 0; i < a.fiber.coords.size(); ++i) {
        EXPECT_LE(std::abs(p.fiber.end[i] - p.fiber.start[i]), 0.5);
        const double reduced = p.fiber.end[i] - std::floor(p.fiber.end[i]);
        EXPECT_NEAR(std::remainder(reduced - b.fiber.coords[i], 1.0), 0.0, 1e-12);
    }
}

TEST(ConnectModuli, EndToEndAndRetrace) {
    const auto h = HopfParameter::standard();
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 1 + trial % 2;
        const ModuliPoint a{hopf::testing::random_divisor(rng, n), {random_fibre(rng, n)}};
        const ModuliPoint b{hopf::testing::random_divisor(rng, n), {random_fibre(rng, n)}};
        PathConfig cfg;
        cfg.seed = trial;
        const ModuliPath there = connect_moduli(a, b, h, cfg);
        EXPECT_TRUE(there.base.monodromy_safe);
        EXPECT_TRUE(is_symplectic(there.fiber.monodromy));
        EXPECT_LT(there.fiber.max_period_change, 0.1);
        EXPECT_LT(there.fiber.max_rounding_residual, 0.05);
        EXPECT_LE(there.fiber.endpoint_residual, 1e-6);
        EXPECT_EQ(there.fiber.method, "period-lattice continuation");

        // Straight segment traversed back: the two basis changes cancel.
        if (there.base.waypoints.size() == 2) {
            const ModuliPath back = connect_moduli(b, a, h, cfg);
            ASSERT_EQ(back.base.waypoints.size(), 2u);
            const auto dim = there.fiber.monodromy.rows();
            EXPECT_EQ(back.fiber.monodromy * there.fiber.monodromy, Eigen::MatrixXi::Identity(dim, dim));
        }

        // A finer initial grid continues to the same basis.
        cfg.samples_per_segment = 48;
        EXPECT_EQ(connect_moduli(a, b, h, cfg).fiber.monodromy, there.fiber.monodromy);
    }
}

TEST(ConnectModuli, RejectsInvalidFibrePoints) {
    const auto h = HopfParameter::standard();
    const GraphDivisor d = identity_divisor();
    EXPECT_THROW(connect_moduli({d, {{0.1}}}, {d, {{0.1, 0.2}}}, h), Error);
    EXPECT_THROW(connect_moduli({d, {{0.1, 1.0}}}, {d, {{0.1, 0.2}}}, h), Error);
}
