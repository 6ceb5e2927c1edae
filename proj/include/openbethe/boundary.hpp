#pragma once

#include <cmath>
#include <optional>

#include "openbethe/rmatrix.hpp"
#include "openbethe/types.hpp"

namespace openbethe {

inline constexpr double kCondTolerance = 1e-10;

/// Parameters of the general reflection-equation solutions K~-(lambda) and
/// K~+(lambda). nu-minus/nu-plus are derived, principal square root.
struct BoundaryParams {
    Cplx xi_minus{1.0}, phi_tilde_minus{0.0}, psi_tilde_minus{0.0};
    Cplx xi_plus{1.0}, phi_tilde_plus{0.0}, psi_tilde_plus{0.0};

    Cplx nu_minus() const { return std::sqrt(Cplx{1.0} + phi_tilde_minus * psi_tilde_minus); }
    Cplx nu_plus() const { return std::sqrt(Cplx{1.0} + phi_tilde_plus * psi_tilde_plus); }
};

/// K~-(lambda) = [[xi- - l, psi~- l], [phi~- l, xi- + l]].
inline Matrix k_minus_general(Cplx lambda, const BoundaryParams& p) {
    Matrix k(2, 2);
    k << p.xi_minus - lambda, p.psi_tilde_minus * lambda, p.phi_tilde_minus * lambda, p.xi_minus + lambda;
    return k;
}

/// K~+(lambda) = [[xi+ + l + eta, -psi~+ (l+eta)], [-phi~+ (l+eta), xi+ - l - eta]]
/// = K~-(-lambda-eta) with matched parameters.
inline Matrix k_plus_general(Cplx lambda, Cplx eta, const BoundaryParams& p) {
    Matrix k(2, 2);
    k << p.xi_plus + lambda + eta, -p.psi_tilde_plus * (lambda + eta),
        -p.phi_tilde_plus * (lambda + eta), p.xi_plus - lambda - eta;
    return k;
}

namespace detail {

template <typename KFun>
double reflection_equation_residual(KFun&& k, Cplx lambda, Cplx mu, Cplx eta) {
    static const Matrix p4 = permutation_matrix(2);
    const Matrix i2 = Matrix::Identity(2, 2);
    const auto r21 = [&](Cplx x) { return Matrix(p4 * yang_r(x, eta) * p4); };
    const Matrix k1 = kron(k(lambda), i2);
    const Matrix k2 = kron(i2, k(mu));
    const Matrix lhs = yang_r(lambda - mu, eta) * k1 * r21(lambda + mu) * k2;
    const Matrix rhs = k2 * yang_r(lambda + mu, eta) * k1 * r21(lambda - mu);
    return rel_residual(lhs, rhs);
}

template <typename KFun>
double dual_reflection_equation_residual(KFun&& k, Cplx lambda, Cplx mu, Cplx eta) {
    static const Matrix p4 = permutation_matrix(2);
    const Matrix i2 = Matrix::Identity(2, 2);
    const auto r21 = [&](Cplx x) { return Matrix(p4 * yang_r(x, eta) * p4); };
    const Matrix k1 = kron(k(lambda), i2);
    const Matrix k2 = kron(i2, k(mu));
    const Matrix lhs = yang_r(mu - lambda, eta) * k1 * r21(-lambda - mu - 2.0 * eta) * k2;
    const Matrix rhs = k2 * yang_r(-lambda - mu - 2.0 * eta, eta) * k1 * r21(mu - lambda);
    return rel_residual(lhs, rhs);
}

}  // namespace detail

inline double reflection_residual(Cplx lambda, Cplx mu, Cplx eta, const BoundaryParams& p) {
    return detail::reflection_equation_residual([&](Cplx x) { return k_minus_general(x, p); }, lambda, mu, eta);
}

inline double dual_reflection_residual(Cplx lambda, Cplx mu, Cplx eta, const BoundaryParams& p) {
    return detail::dual_reflection_equation_residual([&](Cplx x) { return k_plus_general(x, eta, p); }, lambda, mu,
                                                     eta);
}

struct CotriangularCheck {
    bool satisfied;
    Cplx defect;
};

/// Simultaneous-triangularizability condition on the parameters:
/// (phi~- psi~+ - phi~+ psi~-)^2 - 4 (phi~- - phi~+)(psi~- - psi~+) must vanish.
inline CotriangularCheck check_cotriangularizable(const BoundaryParams& p) {
    const Cplx s = p.phi_tilde_minus * p.psi_tilde_plus - p.phi_tilde_plus * p.psi_tilde_minus;
    const Cplx defect =
        s * s - 4.0 * (p.phi_tilde_minus - p.phi_tilde_plus) * (p.psi_tilde_minus - p.psi_tilde_plus);
    return CotriangularCheck{std::abs(defect) <= kCondTolerance, defect};
}

/// Upper-triangular boundary pair. K-(lambda) and K+(lambda) below are the
/// working K-matrices of the whole open-chain construction; any complex
/// (xi, nu, psi) triple is admissible (it is the image of some general
/// solution under a constant similarity, hence solves the reflection
/// equations).
struct TriangularBoundary {
    Cplx xi_minus{1.0}, nu_minus{1.0}, psi_minus{0.0};
    Cplx xi_plus{1.0}, nu_plus{1.0}, psi_plus{0.0};
    Matrix similarity;  // 2x2 M, empty when constructed directly from a triple

    /// [[xi- - l nu-, l psi-], [0, xi- + l nu-]]
    Matrix k_minus(Cplx lambda) const {
        Matrix k(2, 2);
        k << xi_minus - lambda * nu_minus, lambda * psi_minus, 0.0, xi_minus + lambda * nu_minus;
        return k;
    }

    /// [[xi+ + (l+eta) nu+, -psi+ (l+eta)], [0, xi+ - (l+eta) nu+]]
    Matrix k_plus(Cplx lambda, Cplx eta) const {
        Matrix k(2, 2);
        k << xi_plus + (lambda + eta) * nu_plus, -psi_plus * (lambda + eta), 0.0,
            xi_plus - (lambda + eta) * nu_plus;
        return k;
    }
};

/// Bring both general K-matrices to upper-triangular form with the single
/// constant similarity M = [[-1-nu-, phi~-], [phi~-, -1-nu-]]. M triangularizes
/// K~- for any parameters; the condition (and its square-root branch) decide
/// whether the same M also triangularizes K~+. The realized nu+ can be either
/// square root of 1 + phi~+ psi~+; it is read off the transformed matrix.
inline TriangularBoundary triangularize(const BoundaryParams& p, Cplx eta) {
    const auto check = check_cotriangularizable(p);
    if (!check.satisfied)
        throw domain_error("triangularize: parameters violate the co-triangularizability condition");
    const Cplx num = p.nu_minus();
    Matrix m(2, 2);
    m << -1.0 - num, p.phi_tilde_minus, p.phi_tilde_minus, -1.0 - num;
    const Cplx det = (1.0 + num) * (1.0 + num) - p.phi_tilde_minus * p.phi_tilde_minus;
    if (std::abs(det) < 1e-12) throw domain_error("triangularize: similarity matrix M is singular");
    const Matrix mi = m.inverse();

    TriangularBoundary tb;
    tb.similarity = m;
    tb.xi_minus = p.xi_minus;
    tb.nu_minus = num;
    tb.psi_minus = p.phi_tilde_minus + p.psi_tilde_minus;

    // Read the K+ triangular data off the transformed matrix at a reference point.
    const Cplx lambda_ref = 0.731 - 0.292 * I;
    const Matrix kp = mi * k_plus_general(lambda_ref, eta, p) * m;
    const double scale = std::max(max_abs(kp), 1.0);
    if (std::abs(kp(1, 0)) > 1e-9 * scale)
        throw domain_error(
            "triangularize: K~+ is not triangularized by M (wrong square-root branch of the condition)");
    tb.xi_plus = (kp(0, 0) + kp(1, 1)) / 2.0;
    tb.nu_plus = (kp(0, 0) - kp(1, 1)) / (2.0 * (lambda_ref + eta));
    tb.psi_plus = -kp(0, 1) / (lambda_ref + eta);
    return tb;
}

struct KMinusDiagonalization {
    Matrix u;                 // 2x2 eigenvector matrix, spectral-parameter independent
    Cplx nu_minus;            // eigenvalues are xi- -+ lambda nu-
    bool standard_form;       // false when psi~- = 0 forces the fallback eigenvector matrix
};

/// Diagonalize K~-(lambda) by a lambda-independent similarity:
/// U^{-1} K~- U = diag(xi- - l nu-, xi- + l nu-), requires nu- != 0.
/// For psi~- != 0 the eigenvector matrix is [[psi~-, psi~-],[1-nu-, 1+nu-]];
/// for psi~- = 0 (then nu- = 1) a fallback eigenvector matrix is used.
inline KMinusDiagonalization diagonalize_k_minus(const BoundaryParams& p) {
    const Cplx num = p.nu_minus();
    if (std::abs(num) < 1e-12)
        throw domain_error("diagonalize_k_minus: nu- = 0 is the Jordan case, see jordan_form_k_minus");
    KMinusDiagonalization out;
    out.nu_minus = num;
    out.u = Matrix(2, 2);
    if (std::abs(p.psi_tilde_minus) > 1e-12) {
        out.u << p.psi_tilde_minus, p.psi_tilde_minus, 1.0 - num, 1.0 + num;
        out.standard_form = true;
    } else {
        // K~- is lower triangular with nu- = 1; eigenvectors assembled directly.
        out.u << 2.0, 0.0, -p.phi_tilde_minus, 1.0;
        out.standard_form = false;
    }
    return out;
}

struct KMinusJordan {
    Matrix u;
    Cplx off_diagonal_slope;  // U^{-1} K~-(l) U = [[xi-, slope*l], [0, xi-]]
};

/// Jordan form for the non-diagonalizable case nu- = 0 (phi~- psi~- = -1),
/// with U = [[psi~-, 0], [1, -phi~-]]. The realized off-diagonal is -l phi~-.
inline KMinusJordan jordan_form_k_minus(const BoundaryParams& p) {
    if (std::abs(p.nu_minus()) > 1e-10)
        throw domain_error("jordan_form_k_minus: requires nu- = 0");
    KMinusJordan out;
    out.u = Matrix(2, 2);
    out.u << p.psi_tilde_minus, 0.0, 1.0, -p.phi_tilde_minus;
    out.off_diagonal_slope = -p.phi_tilde_minus;
    return out;
}

struct GaudinBoundary {
    Cplx xi, nu, psi;
};

/// Collapse a matched triangular pair to the single (xi, nu, psi) triple used
/// by the Gaudin model; both ends of the chain must carry the same parameters.
inline GaudinBoundary gaudin_boundary(const TriangularBoundary& b) {
    const double defect = std::max({std::abs(b.xi_plus - b.xi_minus), std::abs(b.nu_plus - b.nu_minus),
                                    std::abs(b.psi_plus - b.psi_minus)});
    if (defect > 1e-12)
        throw domain_error("gaudin_boundary: left/right parameters differ by " + std::to_string(defect));
    return GaudinBoundary{b.xi_minus, b.nu_minus, b.psi_minus};
}

}  // namespace openbethe
