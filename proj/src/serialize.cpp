#include "hopf/serialize.hpp"

#include <cmath>

namespace hopf::io {
namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Parse, what); }

double number(const json& j, const char* what) {
    if (!j.is_number()) bad(std::string("expected a number for ") + what);
    return j.get<double>();
}

json points(const std::vector<ProjectiveRoot>& roots) {
    json out = json::array();
    for (const auto& r : roots) out.push_back({{"point", encode(r.point)}, {"multiplicity", r.multiplicity}});
    return out;
}

}  // namespace

json encode(cplx z) { return json::array({z.real(), z.imag()}); }

cplx decode_complex(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {number(j[0], "re"), number(j[1], "im")};
    if (j.is_object() && j.contains("re") && j.contains("im")) return {number(j["re"], "re"), number(j["im"], "im")};
    bad("expected a complex number [re, im]");
}

json encode(std::span<const cplx> c) {
    json out = json::array();
    for (const cplx& z : c) out.push_back(encode(z));
    return out;
}

Coeffs decode_coeffs(const json& j) {
    if (!j.is_array()) bad("expected a coefficient list");
    Coeffs out;
    for (const auto& z : j) out.push_back(decode_complex(z));
    return out;
}

json encode(const ProjectivePoint& p) {
    json out = {{"x0", encode(p.x0)}, {"x1", encode(p.x1)}};
    out["affine"] = p.is_infinite() ? json("infinity") : encode(p.value());
    return out;
}

ProjectivePoint decode_point(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "infinity") return ProjectivePoint::infinity();
        bad("unknown point '" + j.get<std::string>() + "'");
    }
    if (j.is_object() && j.contains("x0") && j.contains("x1")) {
        const cplx x0 = decode_complex(j["x0"]), x1 = decode_complex(j["x1"]);
        if (x0 == cplx{0.0} && x1 == cplx{0.0}) bad("point [0 : 0]");
        return ProjectivePoint::normalized(x0, x1);
    }
    return ProjectivePoint::from_value(decode_complex(j));
}

json encode(const GraphDivisor& d) { return {{"n", d.n()}, {"A", encode(d.a())}, {"B", encode(d.b())}}; }

GraphDivisor decode_divisor(const json& j) {
    if (!j.is_object() || !j.contains("A") || !j.contains("B")) bad("divisor needs \"A\" and \"B\"");
    Coeffs a = decode_coeffs(j["A"]), b = decode_coeffs(j["B"]);
    if (j.contains("n")) {
        if (!j["n"].is_number_integer()) bad("divisor \"n\" must be an integer");
        const auto n = j["n"].get<long long>();
        if (n < 0 || static_cast<std::size_t>(n) + 1 != a.size() || a.size() != b.size())
            bad("divisor coefficient lists must both have n + 1 entries");
    }
    try {
        return GraphDivisor(std::move(a), std::move(b));
    } catch (const Error& e) {
        bad(std::string("invalid divisor: ") + e.what());
    }
}

json encode(const HopfParameter& h) {
    return {{"mu", {{"re", h.mu().real()}, {"im", h.mu().imag()}}}, {"tau", encode(h.tau())}};
}

HopfParameter decode_hopf(const json& j) {
    try {
        if (j.contains("mu")) return HopfParameter::from_mu(decode_complex(j["mu"]));
        if (j.contains("tau")) return HopfParameter::from_tau(decode_complex(j["tau"]));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Parse) throw;
        bad(std::string("invalid Hopf parameter: ") + e.what());
    }
    return HopfParameter::standard();
}

json encode(const StratumReport& r) {
    json jumps = json::array();
    for (const auto& jp : r.jumps) jumps.push_back({{"point", encode(jp.point)}, {"multiplicity", jp.multiplicity}});
    return {{"k", r.k}, {"jumps", jumps}, {"residual", encode(r.residual)}};
}

json encode(const SpectralCurve& s) {
    json factors = json::array();
    for (const auto& r : s.factor_roots)
        factors.push_back({{"point", encode(r.point)}, {"multiplicity", r.multiplicity}, {"factor", r.factor}});
    const std::array<cplx, 3> e = s.branch_values.values();
    return {{"n", s.n},
            {"branch_values", encode(std::span<const cplx>(e))},
            {"branch_polynomial", encode(s.branch_polynomial.coefficients())},
            {"branch_points", points(s.branch_points)},
            {"branch_point_count", [&] {
                 int c = 0;
                 for (const auto& b : s.branch_points) c += b.multiplicity;
                 return c;
             }()},
            {"factor_roots", factors},
            {"smooth", s.smooth},
            {"genus", s.genus},
            {"margin", s.margin},
            {"normalized_discriminant", s.normalized_discriminant}};
}

json encode(const FiberType& f) {
    json out = {{"kind", to_string(f.kind)},
                {"x", encode(f.x)},
                {"line_bundle", encode(std::span<const cplx>(f.line_bundle))},
                {"multiplicity", f.multiplicity},
                {"branch_index", f.branch_index}};
    out["value"] = f.value ? encode(*f.value) : json(nullptr);
    return out;
}

json encode(const DimensionCount& d) { return {{"base", d.base}, {"fiber", d.fiber}, {"total", d.total}}; }

json encode(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(encode(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

json encode(const Eigen::MatrixXi& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json encode(const PeriodData& p) {
    const Eigen::MatrixXcd chart = p.chart;
    return {{"genus", p.genus},
            {"a_periods", encode(p.a_periods)},
            {"b_periods", encode(p.b_periods)},
            {"riemann", encode(p.riemann)},
            {"residuals", {{"symmetry", p.symmetry_residual}, {"min_imag_eigenvalue", p.min_imag_eigenvalue}}},
            {"metadata",
             {{"chart", encode(chart)},
              {"chart_rotated", p.chart_rotated},
              {"center", encode(p.center)},
              {"ordered_branch_points", encode(std::span<const cplx>(p.ordered_branch_points))},
              {"ordering_shift", p.ordering_shift},
              {"quadrature_order", p.quadrature_order},
              {"orientation", p.orientation},
              {"cycles", encode(p.cycles)},
              {"differentials", "x0^k x1^(g-1-k) (x1 dx0 - x0 dx1) / y, k = 0..g-1"}}}};
}

json encode(const CertifiedPath& p) {
    json waypoints = json::array();
    for (const auto& w : p.waypoints) waypoints.push_back(encode(w));
    json counts = json::array();
    for (const auto& s : p.segment_samples) counts.push_back(s.size());
    return {{"waypoints", waypoints},
            {"certified_margin", p.certified_margin},
            {"samples_per_segment", p.samples_per_segment},
            {"monodromy_safe", p.monodromy_safe},
            {"segment_margins", p.segment_margins},
            {"segment_sample_counts", counts},
            {"segment_samples", p.segment_samples},
            {"depth_used", p.depth_used},
            {"detours", p.detours},
            {"seed", p.seed},
            {"strict", p.strict}};
}

json encode(const FiberPath& f) {
    return {{"start", f.start},
            {"end", f.end},
            {"monodromy", encode(f.monodromy)},
            {"transport_samples", f.transport_samples},
            {"max_period_change", f.max_period_change},
            {"max_rounding_residual", f.max_rounding_residual},
            {"endpoint_residual", f.endpoint_residual},
            {"method", f.method}};
}

ModuliPoint decode_moduli_point(const json& j) {
    if (!j.is_object() || !j.contains("divisor")) bad("moduli point needs \"divisor\"");
    ModuliPoint m{decode_divisor(j["divisor"]), {}};
    if (j.contains("fiber")) {
        if (!j["fiber"].is_array()) bad("\"fiber\" must be a list of coordinates");
        for (const auto& c : j["fiber"]) m.fiber.coords.push_back(number(c, "fiber coordinate"));
    }
    return m;
}

}  // namespace hopf::io
