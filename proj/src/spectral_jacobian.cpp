#include "hopf/spectral_jacobian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

namespace hopf {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXi;
using Eigen::VectorXcd;

constexpr double kChartClearance = 1e-3;
constexpr int kMaxPanelDepth = 40;

Eigen::Matrix2cd unitary(double theta, double phi) {
    const cplx e = std::polar(1.0, phi);
    Eigen::Matrix2cd r;
    r << std::cos(theta), -std::conj(e) * std::sin(theta), e * std::sin(theta), std::cos(theta);
    return r;
}

double clearance_at_infinity(const Eigen::Matrix2cd& r, const std::vector<ProjectiveRoot>& pts) {
    const ProjectivePoint inf = ProjectivePoint::normalized(r(0, 0), r(1, 0));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) best = std::min(best, chordal_distance(p.point, inf));
    return best;
}

std::pair<Eigen::Matrix2cd, bool> choose_chart(const std::vector<ProjectiveRoot>& pts) {
    const Eigen::Matrix2cd identity = Eigen::Matrix2cd::Identity();
    if (clearance_at_infinity(identity, pts) >= kChartClearance) return {identity, false};
    Eigen::Matrix2cd best = identity;
    double best_score = -1.0;
    for (const double theta : {std::numbers::pi / 4, std::numbers::pi / 6, std::numbers::pi / 3})
        for (int k = 0; k < 4; ++k) {
            const Eigen::Matrix2cd r = unitary(theta, k * std::numbers::pi / 2);
            const double score = clearance_at_infinity(r, pts);
            if (score > best_score) {
                best_score = score;
                best = r;
            }
        }
    return {best, true};
}

double segment_distance(cplx p, cplx a, cplx b) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    double t = len2 > 0 ? std::real(std::conj(d) * (p - a)) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

// Smallest gap between a branch point and the star of rays from z.
double star_score(cplx z, const std::vector<cplx>& u) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.size(); ++i) {
        best = std::min(best, std::abs(z - u[i]));
        for (std::size_t k = 0; k < u.size(); ++k)
            if (k != i) best = std::min(best, segment_distance(u[k], z, u[i]));
    }
    return best;
}

cplx choose_center(const std::vector<cplx>& u) {
    cplx mean{0.0};
    for (const cplx& v : u) mean += v;
    mean /= static_cast<double>(u.size());
    double spread = 0.0;
    for (const cplx& v : u) spread = std::max(spread, std::abs(v - mean));
    cplx best = mean;
    double best_score = star_score(mean, u);
    for (const double rho : {0.05, 0.15, 0.3, 0.5})
        for (int j = 0; j < 12; ++j) {
            const cplx z = mean + spread * rho * std::polar(1.0, 2.0 * std::numbers::pi * j / 12.0 + 0.1);
            const double score = star_score(z, u);
            if (score > best_score) {
                best_score = score;
                best = z;
            }
        }
    return best;
}

int pairing(const Eigen::VectorXi& x, const Eigen::VectorXi& y, int s) {
    int total = 0;
    for (int i = 0; i + 1 < x.size(); ++i) total += s * (x(i) * y(i + 1) - x(i + 1) * y(i));
    return total;
}

// Integer change of basis taking the chain form (tridiagonal, <c_k, c_{k+1}> = s)
// to the canonical symplectic form.
MatrixXi symplectic_basis(int g, int s) {
    const int m = 2 * g;
    std::vector<Eigen::VectorXi> pool;
    for (int i = 0; i < m; ++i) pool.push_back(Eigen::VectorXi::Unit(m, i));
    std::vector<Eigen::VectorXi> as, bs;
    while (!pool.empty()) {
        const Eigen::VectorXi a = pool.front();
        pool.erase(pool.begin());
        auto it = std::find_if(pool.begin(), pool.end(),
                               [&](const Eigen::VectorXi& v) { return std::abs(pairing(a, v, s)) == 1; });
        if (it == pool.end()) throw Error(ErrorKind::Invariant, "intersection form is not unimodular");
        const Eigen::VectorXi b = *it * pairing(a, *it, s);
        pool.erase(it);
        for (auto& u : pool) u = (u - pairing(u, b, s) * a + pairing(u, a, s) * b).eval();
        as.push_back(a);
        bs.push_back(b);
    }
    MatrixXi out(m, m);
    for (int i = 0; i < g; ++i) {
        out.row(i) = as[i].transpose();
        out.row(g + i) = bs[i].transpose();
    }
    return out;
}

const GaussRule& cached_rule(int order) {
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, gauss_legendre(order)).first;
    return it->second;
}

class RayIntegrator {
  public:
    RayIntegrator(const std::vector<cplx>& u, cplx center, cplx y_center, const Eigen::Matrix2cd& chart, int g,
                  const GaussRule& rule, double tol)
        : u_(u), center_(center), y_center_(y_center), chart_(chart), g_(g), rule_(rule), tol_(tol) {}

    // Integral of the differentials from the center to branch point i.
    VectorXcd integrate(std::size_t i) const {
        const VectorXcd whole = panel(i, 0.0, 1.0);
        const double scale = std::max(whole.norm(), std::numeric_limits<double>::min());
        return refine(i, 0.0, 1.0, whole, scale, 0);
    }

  private:
    // Integrand in v, where x = c + (1 - v^2)(e_i - c).
    VectorXcd integrand(std::size_t i, double v) const {
        const double s = 1.0 - v * v;
        const cplx ei = u_[i];
        const cplx x = center_ + s * (ei - center_);
        cplx denom = y_center_;
        for (std::size_t k = 0; k < u_.size(); ++k) {
            if (k == i) continue;
            denom *= std::sqrt(1.0 + s * (ei - center_) / (center_ - u_[k]));
        }
        const cplx x0 = chart_(0, 0) * x + chart_(0, 1);
        const cplx x1 = chart_(1, 0) * x + chart_(1, 1);
        const cplx common = 2.0 * chart_.determinant() * (ei - center_) / denom;
        VectorXcd out(g_);
        for (int k = 0; k < g_; ++k) out(k) = common * std::pow(x0, k) * std::pow(x1, g_ - 1 - k);
        return out;
    }

    VectorXcd panel(std::size_t i, double lo, double hi) const {
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        VectorXcd sum = VectorXcd::Zero(g_);
        for (std::size_t q = 0; q < rule_.nodes.size(); ++q)
            sum += rule_.weights[q] * integrand(i, mid + half * rule_.nodes[q]);
        return half * sum;
    }

    VectorXcd refine(std::size_t i, double lo, double hi, const VectorXcd& coarse, double scale, int depth) const {
        const double mid = 0.5 * (lo + hi);
        const VectorXcd left = panel(i, lo, mid);
        const VectorXcd right = panel(i, mid, hi);
        const VectorXcd fine = left + right;
        if ((fine - coarse).norm() <= tol_ * scale || depth >= kMaxPanelDepth) return fine;
        return refine(i, lo, mid, left, scale, depth + 1) + refine(i, mid, hi, right, scale, depth + 1);
    }

    const std::vector<cplx>& u_;
    cplx center_;
    cplx y_center_;
    Eigen::Matrix2cd chart_;
    int g_;
    const GaussRule& rule_;
    double tol_;
};

}  // namespace

GaussRule gauss_legendre(int order) {
    if (order < 1) throw Error(ErrorKind::Precondition, "quadrature order must be positive");
    // Golub-Welsch: eigenvalues of the Jacobi matrix of the Legendre recurrence.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        const double beta = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k, k - 1) = jacobi(k - 1, k) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    GaussRule rule;
    for (int k = 0; k < order; ++k) {
        rule.nodes.push_back(es.eigenvalues()(k));
        rule.weights.push_back(2.0 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k));
    }
    return rule;
}

bool is_symplectic(const MatrixXi& m) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0) return false;
    const int g = static_cast<int>(m.rows()) / 2;
    MatrixXi omega = MatrixXi::Zero(2 * g, 2 * g);
    omega.topRightCorner(g, g) = MatrixXi::Identity(g, g);
    omega.bottomLeftCorner(g, g) = -MatrixXi::Identity(g, g);
    return m * omega * m.transpose() == omega;
}

PeriodData period_matrix(const SpectralCurve& s, const PeriodOptions& opt) {
    if (!s.smooth) throw Error(ErrorKind::Singular, "singular spectral curve: Jacobian undefined here");
    const int g = s.genus;
    const int m = 2 * g + 2;
    if (static_cast<int>(s.branch_points.size()) != m)
        throw Error(ErrorKind::Invariant, "branch point count does not match genus");

    PeriodData out;
    out.genus = g;
    out.quadrature_order = opt.quadrature_order;
    out.ordering_shift = opt.ordering_shift;
    std::tie(out.chart, out.chart_rotated) = choose_chart(s.branch_points);

    const Eigen::Matrix2cd inv = out.chart.adjoint();
    std::vector<cplx> u;
    for (const auto& p : s.branch_points) {
        const cplx q0 = inv(0, 0) * p.point.x0 + inv(0, 1) * p.point.x1;
        const cplx q1 = inv(1, 0) * p.point.x0 + inv(1, 1) * p.point.x1;
        u.push_back(q0 / q1);
    }
    out.center = choose_center(u);
    const cplx c = out.center;
    std::sort(u.begin(), u.end(), [&](cplx a, cplx b) {
        const double aa = std::arg(a - c), ab = std::arg(b - c);
        if (aa != ab) return aa < ab;
        return std::abs(a - c) < std::abs(b - c);
    });
    const int shift = ((opt.ordering_shift % m) + m) % m;
    std::rotate(u.begin(), u.begin() + shift, u.end());
    out.ordered_branch_points = u;

    // y(c) on a fixed sheet; each ray continues it factor by factor.
    const cplx lambda = s.branch_polynomial.eval_normalized(out.chart(0, 0), out.chart(1, 0));
    cplx y_center = std::sqrt(lambda);
    for (const cplx& v : u) y_center *= std::sqrt(c - v);

    const RayIntegrator rays(u, c, y_center, out.chart, g, cached_rule(opt.quadrature_order), opt.tolerance);
    std::vector<VectorXcd> I;
    for (int i = 0; i < m; ++i) I.push_back(rays.integrate(static_cast<std::size_t>(i)));
    MatrixXcd chain(g, 2 * g);
    for (int k = 0; k < 2 * g; ++k) chain.col(k) = 2.0 * (I[k] - I[k + 1]);

    for (const int orientation : {1, -1}) {
        const MatrixXi basis = symplectic_basis(g, orientation);
        const MatrixXcd cast = basis.cast<cplx>();
        const MatrixXcd A = chain * cast.topRows(g).transpose();
        const MatrixXcd B = chain * cast.bottomRows(g).transpose();
        const MatrixXcd tau = A.partialPivLu().solve(B);
        const Eigen::MatrixXd im = 0.5 * (tau.imag() + tau.imag().transpose());
        const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(im).eigenvalues().minCoeff();
        if (min_eig > 0.0 || orientation == -1) {
            out.a_periods = A;
            out.b_periods = B;
            out.riemann = tau;
            out.orientation = orientation;
            out.cycles = basis;
            out.symmetry_residual = (tau - tau.transpose()).norm() / tau.norm();
            out.min_imag_eigenvalue = min_eig;
            if (min_eig > 0.0) break;
        }
    }
    if (!(out.min_imag_eigenvalue > 0.0))
        throw Error(ErrorKind::Invariant, "period matrix violates the Riemann relations");
    return out;
}

MatrixXcd period_lattice(const PeriodData& p) {
    MatrixXcd lattice(p.genus, 2 * p.genus);
    lattice << p.a_periods, p.b_periods;
    return lattice;
}

Eigen::VectorXd lattice_coordinates(const MatrixXcd& lattice, const VectorXcd& v) {
    const auto g = lattice.rows();
    if (v.size() != g) throw Error(ErrorKind::Precondition, "torus vector has the wrong length");
    Eigen::MatrixXd real(2 * g, lattice.cols());
    real << lattice.real(), lattice.imag();
    Eigen::VectorXd rhs(2 * g);
    rhs << v.real(), v.imag();
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(real);
    if (real.rows() != real.cols() || lu.rank() < real.cols() || lu.rcond() < 1e-14)
        throw Error(ErrorKind::Singular, "degenerate period lattice");
    return lu.solve(rhs);
}

TorusPoint torus_coordinates(const PeriodData& p, const VectorXcd& v) {
    const Eigen::VectorXd x = lattice_coordinates(period_lattice(p), v);
    TorusPoint t;
    for (const double c : x) {
        double r = c - std::floor(c);
        if (r >= 1.0) r = 0.0;
        t.coords.push_back(r);
    }
    return t;
}

VectorXcd torus_vector(const PeriodData& p, const TorusPoint& t) {
    const MatrixXcd lattice = period_lattice(p);
    if (static_cast<Eigen::Index>(t.coords.size()) != lattice.cols())
        throw Error(ErrorKind::Precondition, "torus point has the wrong dimension");
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(t.coords.data(), lattice.cols());
    return lattice * x.cast<cplx>();
}

cplx branch_j_invariant(const SpectralCurve& s) {
    if (!s.smooth || s.branch_points.size() != 4)
        throw Error(ErrorKind::Precondition, "cross-ratio j-invariant needs four simple branch points");
    const auto bracket = [&](int i, int j) {
        const auto& p = s.branch_points[i].point;
        const auto& q = s.branch_points[j].point;
        return p.x0 * q.x1 - p.x1 * q.x0;
    };
    const cplx l = bracket(0, 2) * bracket(1, 3) / (bracket(0, 3) * bracket(1, 2));
    const cplx num = l * l - l + 1.0;
    return 256.0 * num * num * num / (l * l * (l - 1.0) * (l - 1.0));
}

}  // namespace hopf
