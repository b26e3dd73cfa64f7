#pragma once

// Certified paths in the regular locus S_0^reg: a base path of divisors that
// stays away from the non-regular locus, plus a straight fibre path in torus
// coordinates transported along it.

#include <cstdint>
#include <string>
#include <vector>

#include "hopf/graph_divisor.hpp"
#include "hopf/spectral_jacobian.hpp"

namespace hopf {

struct PathConfig {
    double margin_threshold = 1e-10;
    /// Initial uniform samples per segment before adaptive refinement.
    int samples_per_segment = 16;
    /// Levels of midpoint detours.
    int max_depth = 3;
    /// Detour offset as a fraction of the segment length.
    double detour_scale = 0.5;
    /// Smallest parameter step of the adaptive refinement.
    double min_step = 1e-6;
    /// Midpoint draws per detour node.
    int detour_attempts = 3;
    std::uint64_t seed = 0;
    /// Additionally prove each segment by Rouche's theorem on discs around
    /// the branch points.
    bool strict = false;
    PeriodOptions periods;
};

struct SegmentCertificate {
    /// Minimum regularity margin over the sample set.
    double min_margin = 0.0;
    /// Every branch point moved less than half the minimal branch separation
    /// between consecutive samples.
    bool monodromy_safe = false;
    /// Set only in strict mode.
    bool strict_certified = false;
    /// Sample parameters in [0, 1], increasing.
    std::vector<double> samples;
};

/// Samples the segment between the unit-normalized representatives of a and b.
SegmentCertificate certify_segment(const GraphDivisor& a, const GraphDivisor& b, const HopfParameter& h,
                                   const PathConfig& cfg);

/// The divisor at parameter t on the segment used by certify_segment.
GraphDivisor segment_point(const GraphDivisor& a, const GraphDivisor& b, double t);

struct CertifiedPath {
    /// Unit-normalized representatives.
    std::vector<GraphDivisor> waypoints;
    double certified_margin = 0.0;
    int samples_per_segment = 0;
    bool monodromy_safe = false;
    /// Per segment (waypoints.size() - 1 entries).
    std::vector<double> segment_margins;
    std::vector<std::vector<double>> segment_samples;
    int depth_used = 0;
    int detours = 0;
    std::uint64_t seed = 0;
    bool strict = false;
};

/// Throws Precondition for non-regular endpoints or different n, Budget
/// "no certified path found at this threshold" when the detours run out.
CertifiedPath connect_base(const GraphDivisor& d0, const GraphDivisor& d1, const HopfParameter& h,
                           const PathConfig& cfg = {});

struct ModuliPoint {
    GraphDivisor divisor;
    /// Relative to period_matrix(spectral_curve(divisor)).
    TorusPoint fiber;
};

struct FiberPath {
    /// Coordinates at the start, in the basis of the first waypoint.
    std::vector<double> start;
    /// Target in the basis continued along the base path; every entry of
    /// end - start lies in [-1/2, 1/2].
    std::vector<double> end;
    /// Continued basis at the end in terms of the endpoint's own basis:
    /// lattice_continued = lattice_end * monodromy.
    Eigen::MatrixXi monodromy;
    int transport_samples = 0;
    double max_period_change = 0.0;
    double max_rounding_residual = 0.0;
    /// Distance of the reduced continued target from the requested fibre point.
    double endpoint_residual = 0.0;
    std::string method = "period-lattice continuation";
};

struct ModuliPath {
    CertifiedPath base;
    FiberPath fiber;
};

/// Throws as connect_base, Precondition for invalid fibre points, and Budget
/// when the period continuation step falls below cfg.min_step.
ModuliPath connect_moduli(const ModuliPoint& m0, const ModuliPoint& m1, const HopfParameter& h,
                          const PathConfig& cfg = {});

/// Stepwise bookkeeping of connect_moduli's period continuation.
struct LatticeStep {
    Eigen::MatrixXi change;
    double rounding_residual = 0.0;
    double relative_change = 0.0;
};
/// Expresses `previous` in the basis `next` and rounds: previous ~ next * change.
LatticeStep continue_lattice(const Eigen::MatrixXcd& previous, const Eigen::MatrixXcd& next);

}  // namespace hopf
