#include "hopf/graph_divisor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hopf {

namespace {

std::array<Coeffs, 4> factor_coeffs(const GraphDivisor& d, const BranchValues& e) {
    std::array<Coeffs, 4> f;
    f[0].assign(d.a().begin(), d.a().end());
    const auto values = e.values();
    for (int j = 1; j <= 3; ++j) {
        f[j].resize(d.a().size());
        for (std::size_t i = 0; i < f[j].size(); ++i) f[j][i] = d.b()[i] + values[j - 1] * d.a()[i];
    }
    return f;
}

std::vector<BranchPoint> labelled_roots(const std::array<Coeffs, 4>& factors) {
    std::vector<BranchPoint> out;
    for (int j = 0; j < 4; ++j)
        for (const auto& r : roots(BinaryForm(factors[j]))) out.push_back({r.point, r.multiplicity, j});
    return out;
}

cplx half_period_for(const HopfParameter& h, int branch_index) {
    switch (branch_index) {
        case 1: return -1.0;
        case 2: return reduce_to_annulus(h, -h.sqrt_mu());
        case 3: return reduce_to_annulus(h, h.sqrt_mu());
        default: return 1.0;
    }
}

}  // namespace

GraphDivisor::GraphDivisor(Coeffs a, Coeffs b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.empty() || a_.size() != b_.size())
        throw Error(ErrorKind::Precondition, "graph divisor: A and B must have the same degree");
    if (coeffs::is_zero(a_) && coeffs::is_zero(b_)) throw Error(ErrorKind::Precondition, "zero polynomial");
    for (const auto& v : joint())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(ErrorKind::Precondition, "graph divisor: non-finite coefficient");
}

GraphDivisor GraphDivisor::from_forms(const BinaryForm& A, const BinaryForm& B) { return {A.raw(), B.raw()}; }

GraphDivisor GraphDivisor::from_joint(std::span<const cplx> joint) {
    if (joint.size() < 2 || joint.size() % 2 != 0)
        throw Error(ErrorKind::Precondition, "graph divisor: joint vector needs even length");
    const std::size_t half = joint.size() / 2;
    return {Coeffs(joint.begin(), joint.begin() + half), Coeffs(joint.begin() + half, joint.end())};
}

Coeffs GraphDivisor::joint() const {
    Coeffs v(a_);
    v.insert(v.end(), b_.begin(), b_.end());
    return v;
}

GraphDivisor GraphDivisor::normalized() const {
    Coeffs v = joint();
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    const cplx phase = std::conj(v[best]) / std::abs(v[best]);
    const double norm = coeffs::norm(v);
    for (auto& c : v) c *= phase / norm;
    v[best] = std::abs(v[best]);
    return from_joint(v);
}

bool GraphDivisor::equivalent_to(const GraphDivisor& other, double tol) const {
    if (n() != other.n()) return false;
    const Coeffs u = normalized().joint();
    const Coeffs w = other.normalized().joint();
    double diff = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) diff += std::norm(u[i] - w[i]);
    return std::sqrt(diff) <= tol;
}

ProjectivePoint GraphDivisor::map(const ProjectivePoint& x) const {
    const cplx av = coeffs::evaluate(a_, x.x0, x.x1);
    const cplx bv = coeffs::evaluate(b_, x.x0, x.x1);
    const double scale = coeffs::norm(joint());
    if (std::abs(av) <= 1e-14 * scale && std::abs(bv) <= 1e-14 * scale)
        throw Error(ErrorKind::Precondition, "graph divisor: F undefined at a jump");
    return ProjectivePoint::normalized(-bv, av);
}

StratumReport stratify(const GraphDivisor& d) {
    const int n = d.n();
    if (n == 0) return {0, {}, d};
    const bool a_zero = coeffs::is_zero(d.a());
    const bool b_zero = coeffs::is_zero(d.b());

    std::optional<BinaryForm> g;
    if (a_zero) g = BinaryForm(Coeffs(d.b().begin(), d.b().end()));
    else if (b_zero) g = BinaryForm(Coeffs(d.a().begin(), d.a().end()));
    else g = gcd(BinaryForm(Coeffs(d.a().begin(), d.a().end())), BinaryForm(Coeffs(d.b().begin(), d.b().end())));

    const int k = g->degree();
    if (k == 0) return {0, {}, d};

    StratumReport report{k, {}, d};
    for (const auto& r : roots(*g)) report.jumps.push_back({r.point, r.multiplicity});
    auto quotient = [&](std::span<const cplx> c) {
        if (coeffs::is_zero(c)) return Coeffs(static_cast<std::size_t>(n - k + 1), cplx{0.0});
        return divide(BinaryForm(Coeffs(c.begin(), c.end())), *g).raw();
    };
    report.residual = GraphDivisor(quotient(d.a()), quotient(d.b()));
    return report;
}

bool is_stable_witness(const GraphDivisor& d) { return stratify(d).k == 0; }

SpectralCurve spectral_curve(const GraphDivisor& d, const HopfParameter& h) {
    if (d.n() < 1) throw Error(ErrorKind::Precondition, "spectral curve requires n >= 1");
    if (stratify(d).k > 0) throw Error(ErrorKind::Precondition, "vertical component present");

    SpectralCurve s;
    s.n = d.n();
    s.branch_values = branch_values(h);
    const auto factors = factor_coeffs(d, s.branch_values);
    s.factor_roots = labelled_roots(factors);

    Coeffs p = factors[0];
    for (int j = 1; j <= 3; ++j) p = coeffs::multiply(p, factors[j]);
    s.branch_polynomial = BinaryForm(p);

    std::vector<ProjectiveRoot> all;
    for (const auto& r : s.factor_roots) all.push_back({r.point, r.multiplicity});
    s.branch_points = cluster_points(all, kClusterRadius);

    const bool simple = std::all_of(s.branch_points.begin(), s.branch_points.end(),
                                    [](const ProjectiveRoot& r) { return r.multiplicity == 1; });
    if (simple) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < s.branch_points.size(); ++i)
            for (std::size_t j = i + 1; j < s.branch_points.size(); ++j)
                best = std::min(best, chordal_distance(s.branch_points[i].point, s.branch_points[j].point));
        s.margin = best * best;
    }
    s.smooth = s.margin > kRegularityThreshold;
    if (s.smooth) {
        s.genus = 2 * s.n - 1;
    } else {
        const auto odd = std::count_if(s.branch_points.begin(), s.branch_points.end(),
                                       [](const ProjectiveRoot& r) { return r.multiplicity % 2 == 1; });
        s.genus = std::max(0, static_cast<int>(odd) / 2 - 1);
    }
    s.normalized_discriminant = normalized_discriminant(s.branch_polynomial);
    return s;
}

double regularity_margin(const GraphDivisor& d, const HopfParameter& h) {
    if (d.n() < 1 || stratify(d).k > 0) return 0.0;
    return spectral_curve(d, h).margin;
}

bool is_regular(const GraphDivisor& d, const HopfParameter& h) { return regularity_margin(d, h) > kRegularityThreshold; }

std::string to_string(FiberKind kind) {
    switch (kind) {
        case FiberKind::TypeI: return "I";
        case FiberKind::TypeII: return "II";
        case FiberKind::TypeIII: return "III";
        case FiberKind::IrregularI: return "irregular-I";
    }
    return "unknown";
}

FiberType fiber_type(const GraphDivisor& d, const HopfParameter& h, const ProjectivePoint& x) {
    FiberType out;
    out.x = x;
    const StratumReport st = stratify(d);
    for (const auto& jump : st.jumps) {
        if (chordal_distance(jump.point, x) < kClusterRadius) {
            out.kind = FiberKind::TypeIII;
            out.multiplicity = jump.multiplicity;
            return out;
        }
    }

    const GraphDivisor& r = st.residual;
    const BranchValues e = branch_values(h);
    out.value = r.map(x);

    if (r.n() == 0) {
        // F is constant; on the branch locus every fibre is irregular.
        const auto values = e.values();
        for (int j = 0; j < 4; ++j) {
            const ProjectivePoint bv = j == 0 ? ProjectivePoint::infinity() : ProjectivePoint::from_value(values[j - 1]);
            if (chordal_distance(*out.value, bv) < kClusterRadius) {
                out.kind = FiberKind::IrregularI;
                out.branch_index = j;
                out.multiplicity = 2;
                out.line_bundle = {half_period_for(h, j)};
                return out;
            }
        }
    } else {
        for (const auto& root : labelled_roots(factor_coeffs(r, e))) {
            if (chordal_distance(root.point, x) < kClusterRadius) {
                out.kind = root.multiplicity == 1 ? FiberKind::TypeII : FiberKind::IrregularI;
                out.branch_index = root.factor;
                out.multiplicity = root.multiplicity;
                out.line_bundle = {half_period_for(h, root.factor)};
                return out;
            }
        }
    }
    out.kind = FiberKind::TypeI;
    out.line_bundle = quotient_preimages(h, *out.value);
    return out;
}

DimensionCount dimension_count(int n) {
    if (n < 1) throw Error(ErrorKind::Precondition, "dimension count requires n >= 1");
    DimensionCount c;
    c.base = (2 * n + 2) - 1;
    c.fiber = 2 * n - 1;
    c.total = c.base + c.fiber;
    return c;
}

}  // namespace hopf
