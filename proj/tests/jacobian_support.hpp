#pragma once

// Independent oracles for period computations: the j-invariant from the
// Eisenstein q-expansions, and lattice comparison up to integer change of basis.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "hopf/poly_core.hpp"

namespace hopf::testing {

// tau moved into the standard fundamental domain.
inline cplx reduce_modular(cplx tau) {
    for (int it = 0; it < 200; ++it) {
        tau -= std::round(tau.real());
        if (std::norm(tau) < 1.0 - 1e-15) tau = -1.0 / tau;
        else break;
    }
    return tau;
}

// j = 1728 E4^3 / (E4^3 - E6^2), E4 = 1 + 240 sum sigma_3(n) q^n, E6 = 1 - 504 sum sigma_5(n) q^n.
inline cplx j_invariant(cplx tau) {
    tau = reduce_modular(tau);
    const cplx q = std::exp(cplx{0.0, 2.0 * std::numbers::pi} * tau);
    cplx e4{1.0}, e6{1.0}, qn{1.0};
    for (int n = 1; n <= 80; ++n) {
        qn *= q;
        double s3 = 0.0, s5 = 0.0;
        for (int d = 1; d <= n; ++d)
            if (n % d == 0) {
                s3 += std::pow(d, 3);
                s5 += std::pow(d, 5);
            }
        e4 += 240.0 * s3 * qn;
        e6 -= 504.0 * s5 * qn;
    }
    const cplx e43 = e4 * e4 * e4;
    return 1728.0 * e43 / (e43 - e6 * e6);
}

// Expresses the columns of `other` in the real basis of `lattice`; returns the
// distance of those coordinates from the nearest integer matrix.
inline double integer_basis_defect(const Eigen::MatrixXcd& lattice, const Eigen::MatrixXcd& other,
                                   Eigen::MatrixXi* rounded = nullptr) {
    const auto g = lattice.rows();
    Eigen::MatrixXd L(2 * g, lattice.cols()), R(2 * g, other.cols());
    L << lattice.real(), lattice.imag();
    R << other.real(), other.imag();
    const Eigen::MatrixXd X = L.fullPivLu().solve(R);
    const Eigen::MatrixXd Xr = X.array().round().matrix();
    if (rounded) *rounded = Xr.cast<int>();
    return (X - Xr).cwiseAbs().maxCoeff();
}

}  // namespace hopf::testing
