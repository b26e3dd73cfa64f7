#include "hopf/connectivity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hopf/rng.hpp"

namespace hopf {
namespace {

// Per-segment cap on adaptive samples; beyond it refinement stops.
constexpr std::size_t kMaxSegmentSamples = 20000;

struct Sample {
    double t = 0.0;
    double margin = 0.0;
    std::vector<BranchPoint> roots;
};

Coeffs lerp(const Coeffs& a, const Coeffs& b, double t) {
    Coeffs out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (1.0 - t) * a[i] + t * b[i];
    return out;
}

Sample evaluate(const Coeffs& ja, const Coeffs& jb, double t, const HopfParameter& h) {
    Sample s;
    s.t = t;
    try {
        const SpectralCurve c = spectral_curve(GraphDivisor::from_joint(lerp(ja, jb, t)), h);
        s.margin = c.margin;
        if (c.smooth) s.roots = c.factor_roots;
    } catch (const Error&) {
    }
    return s;
}

// Nearest-neighbour tracking within each factor; any matching with motion
// below half the separation is the nearest-neighbour one.
bool step_safe(const Sample& a, const Sample& b) {
    if (a.roots.empty() || b.roots.empty() || a.roots.size() != b.roots.size()) return false;
    const double half_sep = 0.5 * std::sqrt(std::min(a.margin, b.margin));
    std::vector<char> used(b.roots.size(), 0);
    for (const auto& p : a.roots) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t j = 0; j < b.roots.size(); ++j) {
            if (b.roots[j].factor != p.factor) continue;
            const double d = chordal_distance(p.point, b.roots[j].point);
            if (d < best) best = d, arg = j;
        }
        if (!(best < half_sep) || used[arg]) return false;
        used[arg] = 1;
    }
    return true;
}

struct SegmentContext {
    const Coeffs& ja;
    const Coeffs& jb;
    const HopfParameter& h;
    const PathConfig& cfg;
    std::vector<Sample>& out;
};

// Appends the samples strictly after a up to and including b. The decision
// depends only on the interval, so a finer initial grid samples a superset.
void refine(const Sample& a, const Sample& b, SegmentContext& ctx) {
    const bool need = std::min(a.margin, b.margin) < 4.0 * ctx.cfg.margin_threshold || !step_safe(a, b);
    if (need && b.t - a.t > ctx.cfg.min_step && ctx.out.size() < kMaxSegmentSamples) {
        const Sample m = evaluate(ctx.ja, ctx.jb, 0.5 * (a.t + b.t), ctx.h);
        refine(a, m, ctx);
        refine(m, b, ctx);
        return;
    }
    ctx.out.push_back(b);
}

// --- strict mode -----------------------------------------------------------

std::array<Coeffs, 4> factors_of(const Coeffs& joint, const BranchValues& e) {
    const std::size_t m = joint.size() / 2;
    const Coeffs a(joint.begin(), joint.begin() + m), b(joint.begin() + m, joint.end());
    std::array<Coeffs, 4> f{a, b, b, b};
    const auto ev = e.values();
    for (int j = 1; j <= 3; ++j)
        for (std::size_t i = 0; i < m; ++i) f[j][i] += ev[j - 1] * a[i];
    return f;
}

// f(R (u0, u1)) for the unitary R = [[q0, -conj q1], [q1, conj q0]].
Coeffs rotate(const Coeffs& c, cplx q0, cplx q1) {
    const int n = static_cast<int>(c.size()) - 1;
    const Coeffs row0{q0, -std::conj(q1)}, row1{q1, std::conj(q0)};
    Coeffs out(c.size(), cplx{0.0});
    for (int k = 0; k <= n; ++k) {
        Coeffs term{c[k]};
        for (int i = 0; i < n - k; ++i) term = coeffs::multiply(term, row0);
        for (int i = 0; i < k; ++i) term = coeffs::multiply(term, row1);
        for (int i = 0; i <= n; ++i) out[i] += term[i];
    }
    return out;
}

ProjectivePoint best_infinity(const std::vector<BranchPoint>& roots) {
    ProjectivePoint best;
    double best_d = -1.0;
    constexpr int kCandidates = 48;
    for (int i = 0; i < kCandidates; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / kCandidates;
        const double phi = i * std::numbers::pi * (3.0 - std::sqrt(5.0));
        // Sphere point (x, y, z) -> [cos(theta/2) : sin(theta/2) e^{-i phi}].
        const double theta = std::acos(z);
        const ProjectivePoint p = ProjectivePoint::normalized(std::cos(0.5 * theta),
                                                              std::sin(0.5 * theta) * std::polar(1.0, -phi));
        double d = std::numeric_limits<double>::infinity();
        for (const auto& r : roots) d = std::min(d, chordal_distance(p, r.point));
        if (d > best_d) best_d = d, best = p;
    }
    return best;
}

// Rouche on [tm - w, tm + w]: every root of every factor stays alone in its
// disc, so no two branch points meet and no jump appears.
bool rouche_interval(const Coeffs& ja, const Coeffs& jb, double tm, double w, const HopfParameter& h,
                     const BranchValues& e, double* margin) {
    const Sample s = evaluate(ja, jb, tm, h);
    *margin = s.margin;
    if (s.roots.empty()) return false;
    const ProjectivePoint q = best_infinity(s.roots);
    const cplx q0 = q.x0, q1 = q.x1;

    std::vector<cplx> u;
    std::vector<int> label;
    for (const auto& r : s.roots) {
        // R^H x
        const cplx v0 = std::conj(q0) * r.point.x0 + std::conj(q1) * r.point.x1;
        const cplx v1 = -q1 * r.point.x0 + q0 * r.point.x1;
        if (std::abs(v1) < 1e-300) return false;
        u.push_back(v0 / v1);
        label.push_back(r.factor);
    }
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = i + 1; j < u.size(); ++j) sep = std::min(sep, std::abs(u[i] - u[j]));
    const double rho = sep / 3.0;

    const auto fm = factors_of(lerp(ja, jb, tm), e);
    Coeffs dj(ja.size());
    for (std::size_t i = 0; i < ja.size(); ++i) dj[i] = jb[i] - ja[i];
    const auto fd = factors_of(dj, e);
    for (int f = 0; f < 4; ++f) {
        const Coeffs cm = rotate(fm[f], q0, q1), cd = rotate(fd[f], q0, q1);
        const double lead = std::abs(cm[0]);
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (label[i] != f) continue;
            double lower = lead * rho;
            for (std::size_t k = 0; k < u.size(); ++k)
                if (k != i && label[k] == f) lower *= std::abs(u[i] - u[k]) - rho;
            const double r = std::abs(u[i]) + rho;
            double upper = 0.0, power = 1.0;
            for (std::size_t k = cd.size(); k-- > 0;) {
                upper += std::abs(cd[k]) * power;
                power *= r;
            }
            if (!(w * upper < lower)) return false;
        }
    }
    return true;
}

bool strict_interval(const Coeffs& ja, const Coeffs& jb, double t0, double t1, const HopfParameter& h,
                     const BranchValues& e, double min_step, double* min_margin) {
    double margin = 0.0;
    const bool ok = rouche_interval(ja, jb, 0.5 * (t0 + t1), 0.5 * (t1 - t0), h, e, &margin);
    *min_margin = std::min(*min_margin, margin);
    if (ok) return true;
    if (t1 - t0 <= min_step) return false;
    const double tm = 0.5 * (t0 + t1);
    return strict_interval(ja, jb, t0, tm, h, e, min_step, min_margin) &&
           strict_interval(ja, jb, tm, t1, h, e, min_step, min_margin);
}

void validate(const PathConfig& cfg) {
    if (!(cfg.margin_threshold > 0.0) || !(cfg.min_step > 0.0) || !(cfg.detour_scale > 0.0) ||
        cfg.samples_per_segment < 1 || cfg.max_depth < 0 || cfg.detour_attempts < 1)
        throw Error(ErrorKind::Precondition, "path configuration: tolerances must be positive");
}

bool accepted(const SegmentCertificate& c, const PathConfig& cfg) {
    return c.min_margin >= cfg.margin_threshold && c.monodromy_safe && (!cfg.strict || c.strict_certified);
}

struct Piece {
    GraphDivisor end;
    SegmentCertificate cert;
    int depth = 0;
};

class Detours {
  public:
    Detours(const HopfParameter& h, const PathConfig& cfg) : h_(h), cfg_(cfg) {}

    bool attempt(const GraphDivisor& a, const GraphDivisor& b, int depth, const Rng& rng,
                 std::vector<Piece>& out) const {
        SegmentCertificate cert = certify_segment(a, b, h_, cfg_);
        if (accepted(cert, cfg_)) {
            out.push_back({b, std::move(cert), depth});
            return true;
        }
        if (depth >= cfg_.max_depth) return false;
        const Coeffs ja = a.joint(), jb = b.joint();
        double length = 0.0;
        for (std::size_t i = 0; i < ja.size(); ++i) length += std::norm(jb[i] - ja[i]);
        length = std::sqrt(length);
        for (int k = 0; k < cfg_.detour_attempts; ++k) {
            Rng node = rng.substream("midpoint", static_cast<std::uint64_t>(k));
            const Coeffs g = node.complex_normal_vector(ja.size());
            const double scale = cfg_.detour_scale * length / coeffs::norm(g);
            Coeffs m = lerp(ja, jb, 0.5);
            for (std::size_t i = 0; i < m.size(); ++i) m[i] += scale * g[i];
            const GraphDivisor mid = GraphDivisor::from_joint(m).normalized();
            if (regularity_margin(mid, h_) < cfg_.margin_threshold) continue;
            const std::size_t mark = out.size();
            if (attempt(a, mid, depth + 1, node.substream("left"), out) &&
                attempt(mid, b, depth + 1, node.substream("right"), out))
                return true;
            out.erase(out.begin() + static_cast<std::ptrdiff_t>(mark), out.end());
        }
        return false;
    }

  private:
    const HopfParameter& h_;
    const PathConfig& cfg_;
};

Eigen::MatrixXcd lattice_at(const GraphDivisor& d, const HopfParameter& h, const PeriodOptions& opt) {
    return period_lattice(period_matrix(spectral_curve(d, h), opt));
}

Eigen::MatrixXi symplectic_inverse(const Eigen::MatrixXi& m) {
    const auto g = m.rows() / 2;
    Eigen::MatrixXi omega = Eigen::MatrixXi::Zero(2 * g, 2 * g);
    omega.topRightCorner(g, g).setIdentity();
    omega.bottomLeftCorner(g, g) = -Eigen::MatrixXi::Identity(g, g);
    return -omega * m.transpose() * omega;
}

double wrap_half(double x) { return x - std::round(x); }

double reduce_unit(double x) {
    double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

class Transport {
  public:
    Transport(const HopfParameter& h, const PathConfig& cfg, FiberPath& f) : h_(h), cfg_(cfg), f_(f) {}

    // Carries `current` (a lattice near the one at ta) to tb.
    void advance(const Coeffs& ja, const Coeffs& jb, double ta, double tb, Eigen::MatrixXcd& current,
                 Eigen::MatrixXi& change, std::size_t segment) {
        Eigen::MatrixXcd next;
        try {
            next = lattice_at(GraphDivisor::from_joint(lerp(ja, jb, tb)), h_, cfg_.periods);
        } catch (const Error&) {
            fail(segment, tb, "singular sample");
        }
        const LatticeStep step = continue_lattice(current, next);
        if (step.rounding_residual >= 0.05 || step.relative_change >= 0.1) {
            if (tb - ta <= cfg_.min_step) fail(segment, tb, "period step too large");
            const double tm = 0.5 * (ta + tb);
            advance(ja, jb, ta, tm, current, change, segment);
            advance(ja, jb, tm, tb, current, change, segment);
            return;
        }
        if (!is_symplectic(step.change))
            throw Error(ErrorKind::Invariant, "period continuation produced a non-symplectic basis change");
        current = next * step.change.cast<cplx>();
        change = step.change;
        ++f_.transport_samples;
        f_.max_period_change = std::max(f_.max_period_change, step.relative_change);
        f_.max_rounding_residual = std::max(f_.max_rounding_residual, step.rounding_residual);
    }

  private:
    [[noreturn]] void fail(std::size_t segment, double t, const char* why) const {
        std::ostringstream msg;
        msg << "monodromy step-size underflow: " << why << " on segment " << segment << " at t = " << t;
        throw Error(ErrorKind::Budget, msg.str());
    }

    const HopfParameter& h_;
    const PathConfig& cfg_;
    FiberPath& f_;
};

}  // namespace

GraphDivisor segment_point(const GraphDivisor& a, const GraphDivisor& b, double t) {
    return GraphDivisor::from_joint(lerp(a.normalized().joint(), b.normalized().joint(), t));
}

SegmentCertificate certify_segment(const GraphDivisor& a, const GraphDivisor& b, const HopfParameter& h,
                                   const PathConfig& cfg) {
    validate(cfg);
    if (a.n() != b.n()) throw Error(ErrorKind::Precondition, "endpoints have different n");
    const Coeffs ja = a.normalized().joint(), jb = b.normalized().joint();

    std::vector<Sample> samples{evaluate(ja, jb, 0.0, h)};
    SegmentContext ctx{ja, jb, h, cfg, samples};
    const int grid = cfg.samples_per_segment;
    for (int i = 0; i < grid; ++i) {
        const Sample next = evaluate(ja, jb, static_cast<double>(i + 1) / grid, h);
        const Sample prev = samples.back();
        refine(prev, next, ctx);
    }

    SegmentCertificate cert;
    cert.min_margin = std::numeric_limits<double>::infinity();
    cert.monodromy_safe = true;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        cert.min_margin = std::min(cert.min_margin, samples[i].margin);
        cert.samples.push_back(samples[i].t);
        if (i > 0 && !step_safe(samples[i - 1], samples[i])) cert.monodromy_safe = false;
    }
    if (cfg.strict) {
        const BranchValues e = branch_values(h);
        cert.strict_certified = true;
        for (std::size_t i = 1; i < samples.size() && cert.strict_certified; ++i)
            cert.strict_certified = strict_interval(ja, jb, samples[i - 1].t, samples[i].t, h, e, cfg.min_step,
                                                    &cert.min_margin);
    }
    return cert;
}

CertifiedPath connect_base(const GraphDivisor& d0, const GraphDivisor& d1, const HopfParameter& h,
                           const PathConfig& cfg) {
    validate(cfg);
    if (d0.n() != d1.n()) throw Error(ErrorKind::Precondition, "endpoints have different n");
    if (!is_regular(d0, h) || !is_regular(d1, h)) throw Error(ErrorKind::Precondition, "endpoint not regular");

    CertifiedPath path;
    path.samples_per_segment = cfg.samples_per_segment;
    path.seed = cfg.seed;
    path.strict = cfg.strict;
    const GraphDivisor a = d0.normalized(), b = d1.normalized();
    path.waypoints.push_back(a);

    if (a.equivalent_to(b)) {
        path.certified_margin = regularity_margin(a, h);
        path.monodromy_safe = true;
        if (path.certified_margin < cfg.margin_threshold)
            throw Error(ErrorKind::Budget, "no certified path found at this threshold");
        return path;
    }

    std::vector<Piece> pieces;
    if (!Detours(h, cfg).attempt(a, b, 0, Rng(cfg.seed, "detour"), pieces))
        throw Error(ErrorKind::Budget, "no certified path found at this threshold");

    path.certified_margin = std::numeric_limits<double>::infinity();
    path.monodromy_safe = true;
    for (auto& p : pieces) {
        path.waypoints.push_back(p.end);
        path.certified_margin = std::min(path.certified_margin, p.cert.min_margin);
        path.monodromy_safe = path.monodromy_safe && p.cert.monodromy_safe;
        path.segment_margins.push_back(p.cert.min_margin);
        path.segment_samples.push_back(std::move(p.cert.samples));
        path.depth_used = std::max(path.depth_used, p.depth);
    }
    path.detours = static_cast<int>(pieces.size()) - 1;
    return path;
}

LatticeStep continue_lattice(const Eigen::MatrixXcd& previous, const Eigen::MatrixXcd& next) {
    const auto m = next.cols();
    Eigen::MatrixXd x(m, m);
    for (Eigen::Index j = 0; j < m; ++j) x.col(j) = lattice_coordinates(next, previous.col(j));
    LatticeStep step;
    const Eigen::MatrixXd rounded = x.array().round().matrix();
    step.change = rounded.cast<int>();
    step.rounding_residual = (x - rounded).cwiseAbs().maxCoeff();
    step.relative_change = (next * step.change.cast<cplx>() - previous).norm() / previous.norm();
    return step;
}

ModuliPath connect_moduli(const ModuliPoint& m0, const ModuliPoint& m1, const HopfParameter& h,
                          const PathConfig& cfg) {
    validate(cfg);
    if (m0.divisor.n() != m1.divisor.n()) throw Error(ErrorKind::Precondition, "endpoints have different n");
    const std::size_t dim = 2 * static_cast<std::size_t>(2 * m0.divisor.n() - 1);
    for (const ModuliPoint* m : {&m0, &m1}) {
        if (m->fiber.coords.size() != dim)
            throw Error(ErrorKind::Precondition, "fibre point has the wrong dimension");
        for (double c : m->fiber.coords)
            if (!(c >= 0.0 && c < 1.0)) throw Error(ErrorKind::Precondition, "fibre coordinates must lie in [0, 1)");
    }

    ModuliPath out;
    out.base = connect_base(m0.divisor, m1.divisor, h, cfg);
    FiberPath& f = out.fiber;
    f.start = m0.fiber.coords;
    f.monodromy = Eigen::MatrixXi::Identity(dim, dim);

    const auto& w = out.base.waypoints;
    if (w.size() > 1) {
        Eigen::MatrixXcd current = lattice_at(w.front(), h, cfg.periods);
        Transport transport(h, cfg, f);
        for (std::size_t s = 0; s + 1 < w.size(); ++s) {
            const Coeffs ja = w[s].joint(), jb = w[s + 1].joint();
            const auto& ts = out.base.segment_samples[s];
            for (std::size_t i = 1; i < ts.size(); ++i)
                transport.advance(ja, jb, ts[i - 1], ts[i], current, f.monodromy, s);
        }
    }

    const Eigen::MatrixXi inv = symplectic_inverse(f.monodromy);
    Eigen::VectorXd target(dim), start(dim);
    for (std::size_t i = 0; i < dim; ++i) target(i) = m1.fiber.coords[i], start(i) = f.start[i];
    const Eigen::VectorXd continued = inv.cast<double>() * target;
    f.end.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) f.end[i] = start(i) + wrap_half(continued(i) - start(i));

    Eigen::VectorXd end(dim);
    for (std::size_t i = 0; i < dim; ++i) end(i) = f.end[i];
    const Eigen::VectorXd back = f.monodromy.cast<double>() * end;
    for (std::size_t i = 0; i < dim; ++i)
        f.endpoint_residual = std::max(f.endpoint_residual, std::abs(wrap_half(reduce_unit(back(i)) - target(i))));
    return out;
}

}  // namespace hopf
