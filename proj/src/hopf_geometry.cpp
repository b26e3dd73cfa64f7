#include "hopf/hopf_geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace hopf {

namespace {

constexpr double kTermCutoff = 1e-16;
constexpr int kMaxTerms = 4000;
constexpr cplx kTwoPiI{0.0, 2.0 * std::numbers::pi};

cplx f_term(cplx w) { return w / ((1.0 - w) * (1.0 - w)); }
cplx g_term(cplx w) { return w * (1.0 + w) / ((1.0 - w) * (1.0 - w) * (1.0 - w)); }

// Sums term(k) for k = first, first+1, ... with adaptive or fixed truncation.
template <class F>
cplx series(F term, int first, const SeriesOptions& opt) {
    cplx sum{0.0};
    if (opt.terms > 0) {
        for (int k = first; k < first + opt.terms; ++k) sum += term(k);
        return sum;
    }
    for (int k = first; k < first + kMaxTerms; ++k) {
        const cplx t = term(k);
        sum += t;
        if (k > first && std::abs(t) < kTermCutoff) break;
    }
    return sum;
}

// t is already reduced, so mu^Z meets the annulus only near 1.
bool is_lattice_point(cplx r) { return std::abs(r - 1.0) < 1e-14; }

}  // namespace

HopfParameter HopfParameter::from_mu(cplx mu) {
    const double a = std::abs(mu);
    if (!(a > 0.0 && a < 1.0)) throw Error(ErrorKind::Precondition, "Hopf parameter requires 0 < |mu| < 1");
    const cplx tau = std::log(mu) / kTwoPiI;
    return HopfParameter(mu, tau);
}

HopfParameter HopfParameter::from_tau(cplx tau) {
    if (!(tau.imag() > 0.0)) throw Error(ErrorKind::Precondition, "Hopf parameter requires Im tau > 0");
    return HopfParameter(std::exp(kTwoPiI * tau), tau);
}

cplx HopfParameter::sqrt_mu() const { return std::exp(cplx{0.0, std::numbers::pi} * tau_); }

cplx reduce_to_annulus(const HopfParameter& h, cplx t) {
    if (t == cplx{0.0} || !std::isfinite(std::abs(t)))
        throw Error(ErrorKind::Precondition, "point of the fibre must be nonzero and finite");
    const cplx mu = h.mu();
    const double log_mu = std::log(std::abs(mu));
    const double k = std::floor(std::log(std::abs(t)) / log_mu);
    cplx r = t * std::pow(mu, -k);
    // Points within rounding of the inner circle belong to the outer one.
    const double slack = 1.0 + 1e-13;
    for (int guard = 0; guard < 4 && std::abs(r) > slack; ++guard) r *= mu;
    for (int guard = 0; guard < 4 && std::abs(r) <= std::abs(mu) * slack; ++guard) r /= mu;
    return r;
}

cplx weierstrass_p(const HopfParameter& h, cplx t, SeriesOptions opt) {
    const cplx mu = h.mu();
    const cplx r = reduce_to_annulus(h, t);
    if (is_lattice_point(r)) return {std::numeric_limits<double>::infinity(), 0.0};
    const cplx s1 = series([&](int n) { return f_term(std::pow(mu, n) * r); }, 0, opt);
    const cplx s2 = series([&](int m) { return f_term(std::pow(mu, m) / r); }, 1, opt);
    const cplx s3 = series([&](int n) { return f_term(std::pow(mu, n)); }, 1, opt);
    return kTwoPiI * kTwoPiI * (1.0 / 12.0 + s1 + s2 - 2.0 * s3);
}

cplx weierstrass_p_prime(const HopfParameter& h, cplx t, SeriesOptions opt) {
    const cplx mu = h.mu();
    const cplx r = reduce_to_annulus(h, t);
    if (is_lattice_point(r)) return {std::numeric_limits<double>::infinity(), 0.0};
    const cplx s1 = series([&](int n) { return g_term(std::pow(mu, n) * r); }, 0, opt);
    const cplx s2 = series([&](int m) { return g_term(std::pow(mu, m) / r); }, 1, opt);
    return kTwoPiI * kTwoPiI * kTwoPiI * (s1 - s2);
}

HalfPeriodSet half_periods(const HopfParameter& h) {
    const cplx s = h.sqrt_mu();
    return {{cplx{1.0}, cplx{-1.0}, s, -s}};
}

BranchValues branch_values(const HopfParameter& h) {
    const cplx s = h.sqrt_mu();
    return {weierstrass_p(h, -1.0), weierstrass_p(h, -s), weierstrass_p(h, s)};
}

ProjectivePoint quotient_map(const HopfParameter& h, cplx t) {
    const cplx w = weierstrass_p(h, t);
    if (!std::isfinite(std::abs(w))) return ProjectivePoint::infinity();
    return ProjectivePoint::from_value(w);
}

std::vector<cplx> quotient_preimages(const HopfParameter& h, const ProjectivePoint& w) {
    if (w.is_infinite()) return {cplx{1.0}};
    const cplx target = w.value();
    const cplx tau = h.tau();
    const cplx mu = h.mu();

    auto same_class = [&](cplx a, cplx b) {
        constexpr double tol = 1e-6;
        return std::abs(a - b) < tol || std::abs(a - mu * b) < tol || std::abs(mu * a - b) < tol;
    };

    std::vector<cplx> found;
    constexpr int grid = 6;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            cplx z = (i + 0.5) / grid + tau * ((j + 0.5) / grid);
            bool converged = false;
            for (int iter = 0; iter < 200; ++iter) {
                const cplx t = std::exp(kTwoPiI * z);
                const cplx value = weierstrass_p(h, t);
                const cplx slope = weierstrass_p_prime(h, t);
                if (!std::isfinite(std::abs(value)) || !std::isfinite(std::abs(slope))) break;
                const cplx residual = value - target;
                if (residual == cplx{0.0}) {
                    converged = true;
                    break;
                }
                if (slope == cplx{0.0}) break;
                const cplx step = residual / slope;
                z -= step;
                // Keep z in the fundamental parallelogram.
                const double b = std::floor(z.imag() / tau.imag());
                z -= b * tau;
                z -= std::floor(z.real());
                if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) {
                    converged = true;
                    break;
                }
            }
            if (!converged) continue;
            cplx t = reduce_to_annulus(h, std::exp(kTwoPiI * z));
            // Double roots converge slowly; move near-boundary representatives outward.
            if (std::abs(t) < std::abs(mu) * (1.0 + 1e-6)) t /= mu;
            const cplx check = weierstrass_p(h, t);
            if (std::abs(check - target) > 1e-7 * std::max(1.0, std::abs(target))) continue;
            bool duplicate = false;
            for (const cplx& f : found) duplicate = duplicate || same_class(f, t);
            if (!duplicate) found.push_back(t);
        }
    }
    return found;
}

}  // namespace hopf
