#pragma once

// JSON encodings ("schema": "v1"). Complex numbers are [re, im] pairs;
// projective points are {"x0": [re, im], "x1": [re, im]}; divisors are
// {"n": n, "A": [...], "B": [...]}. Readers throw Error(Parse).

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "hopf/connectivity.hpp"
#include "hopf/graph_divisor.hpp"
#include "hopf/spectral_jacobian.hpp"

namespace hopf::io {

using json = nlohmann::json;

inline constexpr const char* kSchema = "v1";

json encode(cplx z);
/// Accepts [re, im], {"re": x, "im": y} or a real number.
cplx decode_complex(const json& j);
json encode(std::span<const cplx> c);
Coeffs decode_coeffs(const json& j);

json encode(const ProjectivePoint& p);
/// Accepts {"x0", "x1"}, an affine value, or the string "infinity".
ProjectivePoint decode_point(const json& j);

json encode(const GraphDivisor& d);
GraphDivisor decode_divisor(const json& j);

/// {"mu": {"re", "im"}, "tau": [re, im]}.
json encode(const HopfParameter& h);
/// Accepts "mu" in either complex form, or "tau".
HopfParameter decode_hopf(const json& j);

json encode(const StratumReport& r);
json encode(const SpectralCurve& s);
json encode(const FiberType& f);
json encode(const DimensionCount& d);

json encode(const Eigen::MatrixXcd& m);
json encode(const Eigen::MatrixXi& m);
json encode(const PeriodData& p);

json encode(const CertifiedPath& p);
json encode(const FiberPath& f);

/// {"divisor": ..., "fiber": [...]}.
ModuliPoint decode_moduli_point(const json& j);

}  // namespace hopf::io
