#pragma once

// Period matrices of smooth spectral curves y^2 = P(x0, x1), deg P = 2g + 2.
// The holomorphic differentials are x0^k x1^{g-1-k} (x1 dx0 - x0 dx1) / y,
// k = 0..g-1, with P unit-normalized.

#include <Eigen/Dense>
#include <vector>

#include "hopf/graph_divisor.hpp"

namespace hopf {

struct PeriodOptions {
    /// Gauss-Legendre points per panel.
    int quadrature_order = 24;
    /// Cyclic shift of the branch-point ordering (changes the homology basis only).
    int ordering_shift = 0;
    /// Relative panel tolerance of the adaptive quadrature.
    double tolerance = 1e-13;
};

struct PeriodData {
    int genus = 0;
    /// Rows: differentials; columns: a-cycles / b-cycles.
    Eigen::MatrixXcd a_periods;
    Eigen::MatrixXcd b_periods;
    /// a_periods^{-1} b_periods.
    Eigen::MatrixXcd riemann;

    // Metadata: how the basis was built.
    /// Unitary chart (x0, x1) = R (u, 1); identity unless a branch point was near [1 : 0].
    Eigen::Matrix2cd chart = Eigen::Matrix2cd::Identity();
    bool chart_rotated = false;
    cplx center{0.0};
    /// Branch points in the chart, in the order used for the cycles.
    std::vector<cplx> ordered_branch_points;
    int ordering_shift = 0;
    int quadrature_order = 0;
    /// Sign s of the chain intersection numbers <c_k, c_{k+1}> = s.
    int orientation = 1;
    /// Rows 0..g-1: a-cycles, rows g..2g-1: b-cycles, as integer combinations
    /// of the chain cycles c_k (lift of e_k -> center -> e_{k+1}).
    Eigen::MatrixXi cycles;

    double symmetry_residual = 0.0;
    double min_imag_eigenvalue = 0.0;
};

/// Throws Singular "singular spectral curve: Jacobian undefined here" unless s.smooth.
PeriodData period_matrix(const SpectralCurve& s, const PeriodOptions& opt = {});

/// g x 2g lattice generators (a_periods | b_periods).
Eigen::MatrixXcd period_lattice(const PeriodData& p);

struct TorusPoint {
    /// Coordinates in [0, 1)^{2g} against the columns of period_lattice().
    std::vector<double> coords;
};

/// Real coordinates of v in the lattice basis, reduced mod 1. Throws Singular
/// for a degenerate lattice.
TorusPoint torus_coordinates(const PeriodData& p, const Eigen::VectorXcd& v);
/// Real (unreduced) coordinates of v.
Eigen::VectorXd lattice_coordinates(const Eigen::MatrixXcd& lattice, const Eigen::VectorXcd& v);
/// The vector sum_i coords_i * column_i.
Eigen::VectorXcd torus_vector(const PeriodData& p, const TorusPoint& t);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_legendre(int order);

/// j-invariant of a genus-1 curve from the cross-ratio of its four branch
/// points; throws Precondition for other genera.
cplx branch_j_invariant(const SpectralCurve& s);

/// Whether M is in Sp(2g, Z) for the form [[0, I], [-I, 0]].
bool is_symplectic(const Eigen::MatrixXi& m);

}  // namespace hopf
