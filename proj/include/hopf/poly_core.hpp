#pragma once

// Binary forms (homogeneous polynomials in x0, x1) over the complex numbers.
//
// A form of degree d is stored as coefficients c_0..c_d, c_k multiplying
// x0^{d-k} x1^k. Coefficients are kept unit-normalized in l2 with the
// original scale kept alongside, so every downstream tolerance is relative.
// The affine value of a point [x0 : x1] is x0 / x1 (infinity is [1 : 0]).

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "hopf/errors.hpp"

namespace hopf {

using cplx = std::complex<double>;
using Coeffs = std::vector<cplx>;

inline constexpr double kRootTolerance = 1e-10;
inline constexpr double kGcdTolerance = 1e-10;
inline constexpr double kClusterRadius = 1e-6;

/// A point of P^1 as a unit vector; the larger coordinate is real positive.
struct ProjectivePoint {
    cplx x0{1.0};
    cplx x1{0.0};

    static ProjectivePoint normalized(cplx x0, cplx x1);
    static ProjectivePoint from_value(cplx w) { return normalized(w, 1.0); }
    static ProjectivePoint infinity() { return {1.0, 0.0}; }

    bool is_infinite(double tol = 0.0) const { return std::abs(x1) <= tol; }
    /// x0 / x1; callers check is_infinite() first.
    cplx value() const { return x0 / x1; }
};

/// sin of the angle between the two lines; 0 iff equal, 1 for antipodal points.
double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q);

struct ProjectiveRoot {
    ProjectivePoint point;
    int multiplicity = 1;
};

class BinaryForm {
  public:
    /// Throws Error("zero polynomial") on an empty or all-zero list.
    explicit BinaryForm(Coeffs raw);

    static BinaryForm constant(cplx c) { return BinaryForm(Coeffs{c}); }
    /// The linear form vanishing at p: p.x1 * x0 - p.x0 * x1.
    static BinaryForm linear(const ProjectivePoint& p);
    /// Product of linear forms through the given points (with repetition).
    static BinaryForm from_roots(std::span<const ProjectivePoint> points, cplx scale = 1.0);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    std::span<const cplx> coefficients() const { return coeffs_; }
    double scale() const { return scale_; }
    /// scale() * coefficients(), i.e. the form as it was constructed.
    Coeffs raw() const;

    /// Value of the original (unnormalized) form.
    cplx operator()(cplx x0, cplx x1) const { return scale_ * eval_normalized(x0, x1); }
    cplx operator()(const ProjectivePoint& p) const { return (*this)(p.x0, p.x1); }
    cplx eval_normalized(cplx x0, cplx x1) const;

    BinaryForm operator*(const BinaryForm& other) const;
    BinaryForm operator*(cplx s) const;
    /// Same-degree sum; throws when the result vanishes identically.
    BinaryForm operator+(const BinaryForm& other) const;
    BinaryForm operator-(const BinaryForm& other) const;

    /// Derivative along the constant vector field a*d/dx0 + b*d/dx1.
    /// Throws when the result is identically zero.
    BinaryForm directional_derivative(cplx a, cplx b) const;

    /// True when the two forms agree up to a nonzero scalar, to relative tol.
    bool proportional_to(const BinaryForm& other, double tol = 1e-9) const;

  private:
    Coeffs coeffs_;
    double scale_ = 1.0;
};

// Raw coefficient-vector helpers; these accept zero vectors.
namespace coeffs {
double norm(std::span<const cplx> c);
Coeffs multiply(std::span<const cplx> a, std::span<const cplx> b);
cplx evaluate(std::span<const cplx> c, cplx x0, cplx x1);
bool is_zero(std::span<const cplx> c, double rel_tol = 0.0);
}  // namespace coeffs

/// Roots on P^1 with multiplicities summing to deg f.
std::vector<ProjectiveRoot> roots(const BinaryForm& f);

enum class GcdMode { Auto, Numeric, Exact };

/// Degree of an approximate gcd (rank deficiency of the Sylvester matrix).
int gcd_degree(const BinaryForm& f, const BinaryForm& g, double tol = kGcdTolerance);
/// Greatest common divisor up to scalar; degree 0 means coprime.
/// Auto uses exact Gaussian-rational arithmetic when both inputs have
/// Gaussian-integer raw coefficients.
BinaryForm gcd(const BinaryForm& f, const BinaryForm& g, GcdMode mode = GcdMode::Auto,
               double tol = kGcdTolerance);
/// Least-squares quotient f / g; the caller asserts g divides f.
BinaryForm divide(const BinaryForm& f, const BinaryForm& g);

/// Square-free factors q_i with multiplicities m_i, f ~ prod q_i^{m_i}.
std::vector<std::pair<BinaryForm, int>> squarefree_decomposition(const BinaryForm& f,
                                                                 GcdMode mode = GcdMode::Auto);

/// Res(f, g) = c_m(f)^n c_n(g)^m prod (a_i - b_j) in the chart s = x1/x0,
/// extended homogeneously (the Sylvester determinant).
cplx resultant(const BinaryForm& f, const BinaryForm& g);
/// |Res(f,g)| / (||f||^deg g * ||g||^deg f); scale-free.
double normalized_resultant(const BinaryForm& f, const BinaryForm& g);

/// Disc(f) = c_d^{2d-2} prod_{i<j} (a_i - a_j)^2 in the chart s = x1/x0,
/// computed homogeneously from Res(df/dx0, df/dx1).
cplx discriminant(const BinaryForm& f);
/// |Disc(f)| / ||f||^{2(d-1)}.
double normalized_discriminant(const BinaryForm& f);

/// Whether every raw coefficient is a Gaussian integer (to 1e-9).
bool has_gaussian_integer_coefficients(const BinaryForm& f);

/// Greedy single-linkage clustering of points within `radius` (chordal).
std::vector<ProjectiveRoot> cluster_points(std::span<const ProjectiveRoot> points,
                                           double radius = kClusterRadius);

}  // namespace hopf
