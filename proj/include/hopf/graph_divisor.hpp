#pragma once

// Divisors {A(x) y0 + B(x) y1 = 0} in |O(n,1)| on P^1 x P^1. Without common
// factors this is the graph of F(x) = [-B(x) : A(x)]; a common factor of
// (A, B) contributes vertical components (jumps).

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hopf/hopf_geometry.hpp"
#include "hopf/poly_core.hpp"

namespace hopf {

inline constexpr double kRegularityThreshold = 1e-12;

class GraphDivisor {
  public:
    /// Coefficients of A and B (same length n+1, c_k at x0^{n-k} x1^k).
    /// Throws Precondition on a length mismatch and on (A, B) = (0, 0).
    GraphDivisor(Coeffs a, Coeffs b);
    static GraphDivisor from_forms(const BinaryForm& A, const BinaryForm& B);
    /// Inverse of joint().
    static GraphDivisor from_joint(std::span<const cplx> joint);

    int n() const { return static_cast<int>(a_.size()) - 1; }
    std::span<const cplx> a() const { return a_; }
    std::span<const cplx> b() const { return b_; }
    /// (a_0..a_n, b_0..b_n), the point of P^{2n+1}.
    Coeffs joint() const;

    /// Unit-norm representative with its largest-modulus coordinate real positive.
    GraphDivisor normalized() const;
    /// Same point of P^{2n+1}, to a relative tolerance.
    bool equivalent_to(const GraphDivisor& other, double tol = 1e-12) const;

    /// F(x) = [-B(x) : A(x)]; throws Precondition at a common zero.
    ProjectivePoint map(const ProjectivePoint& x) const;

  private:
    Coeffs a_;
    Coeffs b_;
};

struct Jump {
    ProjectivePoint point;
    int multiplicity = 1;
};

struct StratumReport {
    int k = 0;
    std::vector<Jump> jumps;
    GraphDivisor residual;
};

StratumReport stratify(const GraphDivisor& d);
/// No jumps: a sufficient condition for stability of the bundle.
bool is_stable_witness(const GraphDivisor& d);

/// Branch point of the spectral cover with the factor it came from:
/// 0 for A (F = infinity), j for B + e_j A.
struct BranchPoint {
    ProjectivePoint point;
    int multiplicity = 1;
    int factor = 0;
};

struct SpectralCurve {
    int n = 0;
    BranchValues branch_values;
    /// P = A (B + e1 A) (B + e2 A) (B + e3 A), degree 4n.
    BinaryForm branch_polynomial = BinaryForm::constant(1.0);
    /// Roots of each factor (degree n each), labelled by factor.
    std::vector<BranchPoint> factor_roots;
    /// Roots of P merged across factors; multiplicities sum to 4n.
    std::vector<ProjectiveRoot> branch_points;
    bool smooth = false;
    /// 2n - 1 when smooth; otherwise the geometric genus of the normalization
    /// (r/2 - 1 for r odd-multiplicity branch points, at least 0).
    int genus = 0;
    /// Squared minimal chordal distance between branch points, 0 when two coincide.
    double margin = 0.0;
    /// |Disc(P)| / ||P||^{2(4n-1)}, reported alongside the margin.
    double normalized_discriminant = 0.0;
};

/// Throws Precondition "vertical component present" for divisors with jumps.
SpectralCurve spectral_curve(const GraphDivisor& d, const HopfParameter& h);

/// 0 for divisors with jumps, else the spectral curve's margin.
double regularity_margin(const GraphDivisor& d, const HopfParameter& h);
/// No jumps and margin above kRegularityThreshold.
bool is_regular(const GraphDivisor& d, const HopfParameter& h);

enum class FiberKind { TypeI, TypeII, TypeIII, IrregularI };
std::string to_string(FiberKind kind);

struct FiberType {
    FiberKind kind = FiberKind::TypeI;
    ProjectivePoint x;
    /// F(x) for non-jump points.
    std::optional<ProjectivePoint> value;
    /// Representatives of the line bundle L0 in the fundamental annulus
    /// ({t, 1/t} or a single half-period); empty for TypeIII.
    std::vector<cplx> line_bundle;
    /// Jump multiplicity (TypeIII) or vanishing order of F - e_j (TypeII, IrregularI).
    int multiplicity = 0;
    /// -1 off the branch locus, 0 for infinity, j for e_j.
    int branch_index = -1;
};

FiberType fiber_type(const GraphDivisor& d, const HopfParameter& h, const ProjectivePoint& x);

/// Parameter count of S_0^reg: base P^{2n+1} plus Jacobian fibre of dimension 2n-1.
struct DimensionCount {
    int base = 0;
    int fiber = 0;
    int total = 0;
};
DimensionCount dimension_count(int n);

}  // namespace hopf
