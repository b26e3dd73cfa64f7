#pragma once

// Fixed geometry of a classical Hopf surface C^2 \ {0} / <mu>: the fibre
// T = C* / <mu>, its four half-periods and the 2:1 map Pic0(T) -> P^1 given
// by the Weierstrass function of the lattice Z + tau Z (t = exp(2 pi i z)).
// T* is identified with T through the same lattice.

#include <array>
#include <vector>

#include "hopf/poly_core.hpp"

namespace hopf {

class HopfParameter {
  public:
    /// Requires 0 < |mu| < 1.
    static HopfParameter from_mu(cplx mu);
    /// Requires Im tau > 0.
    static HopfParameter from_tau(cplx tau);
    /// tau = i, mu = exp(-2 pi).
    static HopfParameter standard() { return from_tau(cplx{0.0, 1.0}); }

    cplx mu() const { return mu_; }
    cplx tau() const { return tau_; }
    /// exp(i pi tau), the half-period representative in the annulus.
    cplx sqrt_mu() const;

  private:
    HopfParameter(cplx mu, cplx tau) : mu_(mu), tau_(tau) {}
    cplx mu_;
    cplx tau_;
};

/// The 2-torsion classes {1, -1, sqrt(mu), -sqrt(mu)} in that order.
struct HalfPeriodSet {
    std::array<cplx, 4> points;
};

/// Images of the non-trivial half-periods: e1 at z = 1/2, e2 at z = (1+tau)/2,
/// e3 at z = tau/2. The trivial half-period maps to infinity.
struct BranchValues {
    cplx e1;
    cplx e2;
    cplx e3;
    std::array<cplx, 3> values() const { return {e1, e2, e3}; }
};

struct SeriesOptions {
    /// Number of terms per q-series sum; 0 truncates adaptively at |term| < 1e-16.
    int terms = 0;
};

/// Representative of t in the fundamental annulus |mu| < |t| <= 1.
cplx reduce_to_annulus(const HopfParameter& h, cplx t);

/// wp(z) for t = exp(2 pi i z); infinite (not finite) at t in mu^Z.
cplx weierstrass_p(const HopfParameter& h, cplx t, SeriesOptions opt = {});
/// dwp/dz at t = exp(2 pi i z).
cplx weierstrass_p_prime(const HopfParameter& h, cplx t, SeriesOptions opt = {});

HalfPeriodSet half_periods(const HopfParameter& h);
BranchValues branch_values(const HopfParameter& h);

/// The degree-2 quotient Pic0(T) -> P^1, t -> [wp : 1]; t in mu^Z goes to [1 : 0].
ProjectivePoint quotient_map(const HopfParameter& h, cplx t);

/// Solutions of quotient_map(t) = w in the fundamental annulus: two classes
/// {t, 1/t} for a generic w, one for a branch value.
std::vector<cplx> quotient_preimages(const HopfParameter& h, const ProjectivePoint& w);

}  // namespace hopf
