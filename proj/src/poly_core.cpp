#include "hopf/poly_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace hopf {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Coefficients below this (relative) are treated as exact zeros when
// peeling off factors of x0 and x1.
constexpr double kStripTolerance = 1e-15;

Error zero_polynomial() { return Error(ErrorKind::Precondition, "zero polynomial"); }

Coeffs normalized_copy(std::span<const cplx> c) {
    const double n = coeffs::norm(c);
    Coeffs out(c.begin(), c.end());
    if (n > 0)
        for (auto& v : out) v /= n;
    return out;
}

// (deg f + k + 1) x (k + 1) matrix of u -> f * u for forms u of degree k.
MatrixXcd convolution_matrix(std::span<const cplx> f, int k) {
    const int m = static_cast<int>(f.size()) - 1;
    MatrixXcd C = MatrixXcd::Zero(m + k + 1, k + 1);
    for (int j = 0; j <= k; ++j)
        for (int i = 0; i <= m; ++i) C(i + j, j) = f[i];
    return C;
}

Coeffs to_coeffs(const VectorXcd& v) { return Coeffs(v.data(), v.data() + v.size()); }

VectorXcd to_vector(std::span<const cplx> c) {
    VectorXcd v(static_cast<Eigen::Index>(c.size()));
    for (std::size_t i = 0; i < c.size(); ++i) v(static_cast<Eigen::Index>(i)) = c[i];
    return v;
}

Coeffs least_squares_quotient(std::span<const cplx> f, std::span<const cplx> g) {
    const int m = static_cast<int>(f.size()) - 1;
    const int n = static_cast<int>(g.size()) - 1;
    if (m < n) throw Error(ErrorKind::Precondition, "divide: divisor degree exceeds dividend");
    const MatrixXcd C = convolution_matrix(g, m - n);
    return to_coeffs(C.colPivHouseholderQr().solve(to_vector(f)));
}

int sylvester_nullity(std::span<const cplx> f, std::span<const cplx> g, double tol) {
    const int m = static_cast<int>(f.size()) - 1;
    const int n = static_cast<int>(g.size()) - 1;
    if (m == 0 || n == 0) return 0;
    const Coeffs fu = normalized_copy(f);
    const Coeffs gu = normalized_copy(g);
    MatrixXcd S(m + n, m + n);
    S << convolution_matrix(fu, n - 1), convolution_matrix(gu, m - 1);
    const Eigen::VectorXd sv = Eigen::JacobiSVD<MatrixXcd>(S).singularValues();
    const double cutoff = tol * sv(0);
    return static_cast<int>(std::count_if(sv.begin(), sv.end(), [&](double s) { return s <= cutoff; }));
}

// Numerical gcd of two nonzero coefficient vectors (forms of formal degree
// size-1). Returns a unit-normalized vector.
Coeffs numeric_gcd(std::span<const cplx> f_in, std::span<const cplx> g_in, double tol) {
    const Coeffs f = normalized_copy(f_in);
    const Coeffs g = normalized_copy(g_in);
    const int m = static_cast<int>(f.size()) - 1;
    const int n = static_cast<int>(g.size()) - 1;
    int r = sylvester_nullity(f, g, tol);
    for (; r > 0; --r) {
        MatrixXcd Sr(m + n - r + 1, (n - r + 1) + (m - r + 1));
        Sr << convolution_matrix(f, n - r), -convolution_matrix(g, m - r);
        Eigen::JacobiSVD<MatrixXcd> svd(Sr, Eigen::ComputeFullV);
        const VectorXcd null = svd.matrixV().col(Sr.cols() - 1);
        const VectorXcd v = null.head(n - r + 1);  // g / h
        const VectorXcd u = null.tail(m - r + 1);  // f / h
        MatrixXcd stack(m + n + 2, r + 1);
        stack << convolution_matrix(to_coeffs(u), r), convolution_matrix(to_coeffs(v), r);
        VectorXcd rhs(m + n + 2);
        rhs << to_vector(f), to_vector(g);
        const VectorXcd h = stack.colPivHouseholderQr().solve(rhs);
        const double residual = (stack * h - rhs).norm() / rhs.norm();
        if (residual < 1e-6) return normalized_copy(to_coeffs(h));
    }
    return Coeffs{1.0};
}

// ---------------------------------------------------------------------------
// Exact arithmetic over Q(i), used for Gaussian-integer inputs.

using boost::multiprecision::cpp_rational;

struct GaussRational {
    cpp_rational re{0};
    cpp_rational im{0};

    bool is_zero() const { return re == 0 && im == 0; }
    friend GaussRational operator+(const GaussRational& a, const GaussRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussRational operator-(const GaussRational& a, const GaussRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    GaussRational inverse() const {
        const cpp_rational n = re * re + im * im;
        return {re / n, -im / n};
    }
    cplx to_complex() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

// Univariate polynomials, ascending powers of s = x1/x0.
using ExactPoly = std::vector<GaussRational>;

void trim(ExactPoly& p) {
    while (p.size() > 1 && p.back().is_zero()) p.pop_back();
}

bool is_zero_poly(const ExactPoly& p) {
    return std::all_of(p.begin(), p.end(), [](const GaussRational& c) { return c.is_zero(); });
}

int exact_degree(const ExactPoly& p) {
    for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k)
        if (!p[k].is_zero()) return k;
    return -1;
}

ExactPoly make_monic(ExactPoly p) {
    trim(p);
    const GaussRational inv = p.back().inverse();
    for (auto& c : p) c = c * inv;
    return p;
}

// Quotient and remainder of a / b.
std::pair<ExactPoly, ExactPoly> exact_divmod(ExactPoly a, ExactPoly b) {
    trim(a);
    trim(b);
    const int db = exact_degree(b);
    int da = exact_degree(a);
    ExactPoly q(std::max(da - db + 1, 1));
    const GaussRational lead_inv = b[db].inverse();
    while (da >= db && da >= 0) {
        const GaussRational factor = a[da] * lead_inv;
        q[da - db] = factor;
        for (int i = 0; i <= db; ++i) a[da - db + i] = a[da - db + i] - factor * b[i];
        da = exact_degree(a);
    }
    trim(a);
    return {q, a};
}

ExactPoly exact_gcd_poly(ExactPoly a, ExactPoly b) {
    if (is_zero_poly(b)) return make_monic(a);
    if (is_zero_poly(a)) return make_monic(b);
    while (!is_zero_poly(b)) {
        auto [q, r] = exact_divmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a);
}

ExactPoly exact_derivative(const ExactPoly& p) {
    if (p.size() <= 1) return ExactPoly{GaussRational{}};
    ExactPoly d(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k)
        d[k - 1] = p[k] * GaussRational{cpp_rational(static_cast<long long>(k)), 0};
    return d;
}

ExactPoly exact_sub(ExactPoly a, const ExactPoly& b) {
    if (a.size() < b.size()) a.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = a[i] - b[i];
    trim(a);
    return a;
}

// Splits raw coefficients of a form into (#leading zeros, #trailing zeros)
// and the middle block, which has nonzero ends.
struct Stripped {
    int x1_power = 0;  // leading zeros: factor x1^k, roots at [1:0]
    int x0_power = 0;  // trailing zeros: factor x0^k, roots at [0:1]
    Coeffs middle;
};

Stripped strip(std::span<const cplx> c, double rel_tol) {
    const double cutoff = rel_tol * coeffs::norm(c);
    Stripped s;
    int lo = 0;
    int hi = static_cast<int>(c.size()) - 1;
    while (lo < hi && std::abs(c[lo]) <= cutoff) ++lo;
    while (hi > lo && std::abs(c[hi]) <= cutoff) --hi;
    s.x1_power = lo;
    s.x0_power = static_cast<int>(c.size()) - 1 - hi;
    s.middle.assign(c.begin() + lo, c.begin() + hi + 1);
    return s;
}

ExactPoly to_exact(std::span<const cplx> c) {
    ExactPoly p;
    p.reserve(c.size());
    for (const cplx& v : c)
        p.push_back({cpp_rational(static_cast<long long>(std::llround(v.real()))),
                     cpp_rational(static_cast<long long>(std::llround(v.imag())))});
    return p;
}

// Raw coefficients snapped to the Gaussian integers they approximate.
Coeffs rounded_raw(const BinaryForm& f) {
    Coeffs c = f.raw();
    for (auto& v : c) v = {std::round(v.real()), std::round(v.imag())};
    return c;
}

Coeffs from_exact(const ExactPoly& p) {
    Coeffs out;
    out.reserve(p.size());
    for (const auto& c : p) out.push_back(c.to_complex());
    return out;
}

Coeffs monomial_factor(int x1_power, int x0_power, std::span<const cplx> middle) {
    Coeffs out(static_cast<std::size_t>(x1_power), cplx{0.0});
    out.insert(out.end(), middle.begin(), middle.end());
    out.resize(out.size() + static_cast<std::size_t>(x0_power), cplx{0.0});
    return out;
}

// Derivative of p(s) = sum p_k s^k.
Coeffs univariate_derivative(std::span<const cplx> p) {
    if (p.size() <= 1) return Coeffs{0.0};
    Coeffs d(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = static_cast<double>(k) * p[k];
    return d;
}

Coeffs sub(std::span<const cplx> a, std::span<const cplx> b) {
    Coeffs out(std::max(a.size(), b.size()), cplx{0.0});
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    return out;
}

// Yun's algorithm on a univariate polynomial with nonzero ends.
std::vector<std::pair<Coeffs, int>> numeric_yun(const Coeffs& p) {
    std::vector<std::pair<Coeffs, int>> out;
    if (p.size() <= 1) return out;
    const Coeffs dp = univariate_derivative(p);
    const Coeffs a0 = numeric_gcd(p, dp, kGcdTolerance);
    Coeffs b = least_squares_quotient(p, a0);
    Coeffs c = least_squares_quotient(dp, a0);
    Coeffs d = sub(c, univariate_derivative(b));
    for (int i = 1; b.size() > 1; ++i) {
        const bool d_vanishes = coeffs::norm(d) <= 1e-8 * std::max(coeffs::norm(c), 1e-300);
        const Coeffs a = d_vanishes ? normalized_copy(b) : numeric_gcd(b, d, kGcdTolerance);
        if (a.size() > 1) out.emplace_back(a, i);
        b = least_squares_quotient(b, a);
        if (b.size() <= 1) break;
        c = d_vanishes ? Coeffs(b.size() - 1, cplx{0.0}) : least_squares_quotient(d, a);
        d = sub(c, univariate_derivative(b));
        if (i > static_cast<int>(p.size())) break;
    }
    return out;
}

std::vector<std::pair<Coeffs, int>> exact_yun(const ExactPoly& p_in) {
    std::vector<std::pair<Coeffs, int>> out;
    ExactPoly p = p_in;
    trim(p);
    if (exact_degree(p) <= 0) return out;
    const ExactPoly dp = exact_derivative(p);
    const ExactPoly a0 = exact_gcd_poly(p, dp);
    ExactPoly b = exact_divmod(p, a0).first;
    ExactPoly c = exact_divmod(dp, a0).first;
    ExactPoly d = exact_sub(c, exact_derivative(b));
    for (int i = 1; exact_degree(b) > 0; ++i) {
        const ExactPoly a = exact_gcd_poly(b, d);
        if (exact_degree(a) > 0) out.emplace_back(from_exact(a), i);
        b = exact_divmod(b, a).first;
        c = exact_divmod(d, a).first;
        d = exact_sub(c, exact_derivative(b));
    }
    return out;
}

// Horner evaluation of p(s) and p'(s).
std::pair<cplx, cplx> horner(std::span<const cplx> p, cplx s) {
    cplx v = 0.0;
    cplx dv = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        dv = dv * s + v;
        v = v * s + *it;
    }
    return {v, dv};
}

std::vector<cplx> companion_roots(const Coeffs& ascending) {
    const int m = static_cast<int>(ascending.size()) - 1;
    if (m <= 0) return {};
    if (m == 1) return {-ascending[0] / ascending[1]};
    MatrixXcd C = MatrixXcd::Zero(m, m);
    for (int i = 1; i < m; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i) C(i, m - 1) = -ascending[i] / ascending[m];
    Eigen::ComplexEigenSolver<MatrixXcd> es(C, false);
    std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + m);
    for (auto& z : out) {
        for (int it = 0; it < 3; ++it) {
            const auto [v, dv] = horner(ascending, z);
            if (dv == cplx{0.0}) break;
            const cplx next = z - v / dv;
            if (std::abs(horner(ascending, next).first) >= std::abs(v)) break;
            z = next;
        }
    }
    return out;
}

// Roots of a form treated as simple; multiplicities from repeated roots at
// 0 / infinity are still counted.
std::vector<ProjectiveRoot> simple_roots(std::span<const cplx> c) {
    std::vector<ProjectiveRoot> out;
    const Stripped s = strip(c, kStripTolerance);
    if (s.x1_power > 0) out.push_back({ProjectivePoint::infinity(), s.x1_power});
    if (s.x0_power > 0) out.push_back({ProjectivePoint::normalized(0.0, 1.0), s.x0_power});
    const Coeffs& p = s.middle;
    const int m = static_cast<int>(p.size()) - 1;
    if (m <= 0) return out;
    if (std::abs(p[m]) >= std::abs(p[0])) {
        for (const cplx& r : companion_roots(p)) out.push_back({ProjectivePoint::normalized(1.0, r), 1});
    } else {
        const Coeffs rev(p.rbegin(), p.rend());
        for (const cplx& r : companion_roots(rev)) out.push_back({ProjectivePoint::normalized(r, 1.0), 1});
    }
    return out;
}

MatrixXcd sylvester_descending(std::span<const cplx> f, std::span<const cplx> g) {
    const int m = static_cast<int>(f.size()) - 1;
    const int n = static_cast<int>(g.size()) - 1;
    MatrixXcd S = MatrixXcd::Zero(m + n, m + n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= m; ++k) S(i, i + k) = f[m - k];
    for (int i = 0; i < m; ++i)
        for (int k = 0; k <= n; ++k) S(n + i, i + k) = g[n - k];
    return S;
}

cplx resultant_coeffs(std::span<const cplx> f, std::span<const cplx> g) {
    const int m = static_cast<int>(f.size()) - 1;
    const int n = static_cast<int>(g.size()) - 1;
    if (m + n == 0) return 1.0;
    return sylvester_descending(f, g).determinant();
}

}  // namespace

// ---------------------------------------------------------------------------

ProjectivePoint ProjectivePoint::normalized(cplx x0, cplx x1) {
    const double n = std::hypot(std::abs(x0), std::abs(x1));
    if (!(n > 0) || !std::isfinite(n)) throw Error(ErrorKind::Invariant, "degenerate projective point");
    x0 /= n;
    x1 /= n;
    const cplx lead = std::abs(x0) >= std::abs(x1) ? x0 : x1;
    const cplx phase = std::conj(lead) / std::abs(lead);
    return {x0 * phase, x1 * phase};
}

double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
    return std::abs(p.x0 * q.x1 - p.x1 * q.x0);
}

namespace coeffs {

double norm(std::span<const cplx> c) {
    double s = 0.0;
    for (const cplx& v : c) s += std::norm(v);
    return std::sqrt(s);
}

Coeffs multiply(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.empty() || b.empty()) return {};
    Coeffs out(a.size() + b.size() - 1, cplx{0.0});
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

cplx evaluate(std::span<const cplx> c, cplx x0, cplx x1) {
    // Horner in the larger coordinate keeps the evaluation well scaled.
    const int d = static_cast<int>(c.size()) - 1;
    if (d < 0) return 0.0;
    cplx v = 0.0;
    if (std::abs(x0) >= std::abs(x1)) {
        const cplx s = x1 / x0;
        for (int k = d; k >= 0; --k) v = v * s + c[k];
        return v * std::pow(x0, d);
    }
    const cplx u = x0 / x1;
    for (int k = 0; k <= d; ++k) v = v * u + c[k];
    return v * std::pow(x1, d);
}

bool is_zero(std::span<const cplx> c, double rel_tol) {
    if (rel_tol <= 0.0)
        return std::all_of(c.begin(), c.end(), [](const cplx& v) { return v == cplx{0.0}; });
    return norm(c) <= rel_tol;
}

}  // namespace coeffs

BinaryForm::BinaryForm(Coeffs raw) {
    const double n = coeffs::norm(raw);
    if (raw.empty() || !(n > 0)) throw zero_polynomial();
    if (!std::isfinite(n)) throw Error(ErrorKind::Invariant, "non-finite polynomial coefficients");
    for (auto& c : raw) c /= n;
    coeffs_ = std::move(raw);
    scale_ = n;
}

BinaryForm BinaryForm::linear(const ProjectivePoint& p) { return BinaryForm(Coeffs{p.x1, -p.x0}); }

BinaryForm BinaryForm::from_roots(std::span<const ProjectivePoint> points, cplx scale) {
    Coeffs c{scale};
    for (const auto& p : points) c = coeffs::multiply(c, Coeffs{p.x1, -p.x0});
    return BinaryForm(std::move(c));
}

Coeffs BinaryForm::raw() const {
    Coeffs out = coeffs_;
    for (auto& c : out) c *= scale_;
    return out;
}

cplx BinaryForm::eval_normalized(cplx x0, cplx x1) const { return coeffs::evaluate(coeffs_, x0, x1); }

BinaryForm BinaryForm::operator*(const BinaryForm& other) const {
    return BinaryForm(coeffs::multiply(raw(), other.raw()));
}

BinaryForm BinaryForm::operator*(cplx s) const {
    Coeffs c = raw();
    for (auto& v : c) v *= s;
    return BinaryForm(std::move(c));
}

BinaryForm BinaryForm::operator+(const BinaryForm& other) const {
    if (degree() != other.degree()) throw Error(ErrorKind::Precondition, "sum of forms of different degree");
    Coeffs a = raw();
    const Coeffs b = other.raw();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return BinaryForm(std::move(a));
}

BinaryForm BinaryForm::operator-(const BinaryForm& other) const { return *this + other * cplx{-1.0}; }

BinaryForm BinaryForm::directional_derivative(cplx a, cplx b) const {
    const int d = degree();
    if (d == 0) throw zero_polynomial();
    const Coeffs c = raw();
    Coeffs out(static_cast<std::size_t>(d), cplx{0.0});
    for (int k = 0; k <= d; ++k) {
        if (k < d) out[k] += a * static_cast<double>(d - k) * c[k];
        if (k > 0) out[k - 1] += b * static_cast<double>(k) * c[k];
    }
    return BinaryForm(std::move(out));
}

bool BinaryForm::proportional_to(const BinaryForm& other, double tol) const {
    if (degree() != other.degree()) return false;
    cplx inner = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) inner += std::conj(other.coeffs_[i]) * coeffs_[i];
    double residual = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) residual += std::norm(coeffs_[i] - inner * other.coeffs_[i]);
    return std::sqrt(residual) <= tol;
}

bool has_gaussian_integer_coefficients(const BinaryForm& f) {
    for (const cplx& c : f.raw()) {
        for (double part : {c.real(), c.imag()}) {
            if (std::abs(part) > 1e12) return false;
            if (std::abs(part - std::round(part)) > 1e-9 * std::max(1.0, std::abs(part))) return false;
        }
    }
    return true;
}

std::vector<ProjectiveRoot> cluster_points(std::span<const ProjectiveRoot> points, double radius) {
    const std::size_t n = points.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (chordal_distance(points[i].point, points[j].point) < radius) parent[find(j)] = find(i);

    std::vector<ProjectiveRoot> out;
    std::vector<std::size_t> slot(n, n);
    std::vector<std::pair<cplx, cplx>> sums;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        const auto& p = points[i];
        if (slot[r] == n) {
            slot[r] = out.size();
            out.push_back({p.point, 0});
            sums.emplace_back(0.0, 0.0);
        }
        auto& acc = out[slot[r]];
        // Align phases with the cluster's first point before averaging.
        const cplx align = acc.point.x0 * std::conj(p.point.x0) + acc.point.x1 * std::conj(p.point.x1);
        const cplx phase = std::abs(align) > 0 ? align / std::abs(align) : cplx{1.0};
        const double w = p.multiplicity;
        sums[slot[r]].first += w * phase * p.point.x0;
        sums[slot[r]].second += w * phase * p.point.x1;
        acc.multiplicity += p.multiplicity;
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i].point = ProjectivePoint::normalized(sums[i].first, sums[i].second);
    return out;
}

std::vector<std::pair<BinaryForm, int>> squarefree_decomposition(const BinaryForm& f, GcdMode mode) {
    std::vector<std::pair<BinaryForm, int>> out;
    const bool exact = mode == GcdMode::Exact || (mode == GcdMode::Auto && has_gaussian_integer_coefficients(f));
    const Coeffs c = exact ? rounded_raw(f) : Coeffs(f.coefficients().begin(), f.coefficients().end());
    const Stripped s = strip(c, exact ? 0.0 : kStripTolerance);
    if (s.x1_power > 0) out.emplace_back(BinaryForm(Coeffs{0.0, 1.0}), s.x1_power);
    if (s.x0_power > 0) out.emplace_back(BinaryForm(Coeffs{1.0, 0.0}), s.x0_power);
    const auto parts = exact ? exact_yun(to_exact(s.middle)) : numeric_yun(s.middle);
    for (const auto& [q, m] : parts) out.emplace_back(BinaryForm(q), m);
    return out;
}

std::vector<ProjectiveRoot> roots(const BinaryForm& f) {
    std::vector<ProjectiveRoot> all;
    for (const auto& [q, m] : squarefree_decomposition(f)) {
        for (auto r : simple_roots(q.coefficients())) {
            r.multiplicity *= m;
            all.push_back(r);
        }
    }
    return cluster_points(all, kClusterRadius);
}

int gcd_degree(const BinaryForm& f, const BinaryForm& g, double tol) {
    return sylvester_nullity(f.coefficients(), g.coefficients(), tol);
}

BinaryForm gcd(const BinaryForm& f, const BinaryForm& g, GcdMode mode, double tol) {
    const bool exact = mode == GcdMode::Exact ||
                       (mode == GcdMode::Auto && has_gaussian_integer_coefficients(f) &&
                        has_gaussian_integer_coefficients(g));
    if (!exact) return BinaryForm(numeric_gcd(f.coefficients(), g.coefficients(), tol));

    const Stripped sf = strip(rounded_raw(f), 0.0);
    const Stripped sg = strip(rounded_raw(g), 0.0);
    const Coeffs mid = from_exact(exact_gcd_poly(to_exact(sf.middle), to_exact(sg.middle)));
    return BinaryForm(monomial_factor(std::min(sf.x1_power, sg.x1_power), std::min(sf.x0_power, sg.x0_power), mid));
}

BinaryForm divide(const BinaryForm& f, const BinaryForm& g) {
    Coeffs q = least_squares_quotient(f.coefficients(), g.coefficients());
    const double ratio = f.scale() / g.scale();
    for (auto& v : q) v *= ratio;
    return BinaryForm(std::move(q));
}

cplx resultant(const BinaryForm& f, const BinaryForm& g) {
    if (f.degree() < 1 || g.degree() < 1) throw Error(ErrorKind::Precondition, "resultant: degree-0 input");
    const cplx r = resultant_coeffs(f.coefficients(), g.coefficients());
    return r * std::pow(f.scale(), g.degree()) * std::pow(g.scale(), f.degree());
}

double normalized_resultant(const BinaryForm& f, const BinaryForm& g) {
    if (f.degree() < 1 || g.degree() < 1) throw Error(ErrorKind::Precondition, "resultant: degree-0 input");
    return std::abs(resultant_coeffs(f.coefficients(), g.coefficients()));
}

namespace {

cplx discriminant_coeffs(std::span<const cplx> c) {
    const int d = static_cast<int>(c.size()) - 1;
    Coeffs fx0(static_cast<std::size_t>(d));
    Coeffs fx1(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) fx0[k] = static_cast<double>(d - k) * c[k];
    for (int k = 1; k <= d; ++k) fx1[k - 1] = static_cast<double>(k) * c[k];
    const cplx r = resultant_coeffs(fx0, fx1);
    const int sign_exp = d * (d - 1) / 2 + (d - 1) * (d - 1);
    const double sign = sign_exp % 2 == 0 ? 1.0 : -1.0;
    return sign * r / std::pow(static_cast<double>(d), d - 2);
}

}  // namespace

cplx discriminant(const BinaryForm& f) {
    const int d = f.degree();
    if (d < 2) throw Error(ErrorKind::Precondition, "discriminant: degree < 2");
    return discriminant_coeffs(f.coefficients()) * std::pow(f.scale(), 2 * (d - 1));
}

double normalized_discriminant(const BinaryForm& f) {
    if (f.degree() < 2) throw Error(ErrorKind::Precondition, "discriminant: degree < 2");
    return std::abs(discriminant_coeffs(f.coefficients()));
}

}  // namespace hopf
