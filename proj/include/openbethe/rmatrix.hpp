#pragma once

#include "openbethe/tensor.hpp"
#include "openbethe/types.hpp"

namespace openbethe {

/// Rational SL(2)-invariant R-matrix lambda*1 + eta*P on C^2 (x) C^2.
inline Matrix yang_r(Cplx lambda, Cplx eta) {
    static const Matrix p2 = permutation_matrix(2);
    return lambda * Matrix::Identity(4, 4) + eta * p2;
}

namespace detail {

/// Embed a two-space 4x4 matrix into factors (i,j) of C^2 (x) C^2 (x) C^2.
inline Matrix embed_pair_3(const Matrix& m4, int i, int j) {
    const std::vector<Space> full{aux_space(0), aux_space(1), aux_space(2)};
    Operator op{m4, {aux_space(i), aux_space(j)}};
    return promote(op, full).mat;
}

/// Transpose in the second factor of a 4x4 two-space matrix.
inline Matrix partial_transpose_second(const Matrix& m4) {
    Matrix out(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    out(2 * i + j, 2 * k + l) = m4(2 * i + l, 2 * k + j);
    return out;
}

}  // namespace detail

/// Max-norm residual of R12(l-m) R13(l) R23(m) = R23(m) R13(l) R12(l-m), relative.
inline double ybe_residual(Cplx lambda, Cplx mu, Cplx eta) {
    const Matrix r12 = detail::embed_pair_3(yang_r(lambda - mu, eta), 0, 1);
    const Matrix r13 = detail::embed_pair_3(yang_r(lambda, eta), 0, 2);
    const Matrix r23 = detail::embed_pair_3(yang_r(mu, eta), 1, 2);
    return rel_residual(r12 * r13 * r23, r23 * r13 * r12);
}

/// R12(l) R21(-l) = (eta^2 - l^2) 1.
inline double unitarity_residual(Cplx lambda, Cplx eta) {
    static const Matrix p2 = permutation_matrix(2);
    const Matrix r21 = p2 * yang_r(-lambda, eta) * p2;
    return rel_residual(yang_r(lambda, eta) * r21, (eta * eta - lambda * lambda) * Matrix::Identity(4, 4));
}

/// R21(l) = R12(l).
inline double parity_residual(Cplx lambda, Cplx eta) {
    static const Matrix p2 = permutation_matrix(2);
    const Matrix r = yang_r(lambda, eta);
    return rel_residual(p2 * r * p2, r);
}

/// R^t(l) = R(l).
inline double temporal_residual(Cplx lambda, Cplx eta) {
    const Matrix r = yang_r(lambda, eta);
    return rel_residual(r.transpose(), r);
}

/// R(l) = -J1 R^{t2}(-l-eta) J1^{-1} with J = [[0,1],[-1,0]]. The minus sign is
/// required for this R normalization: J1 maps the rank-one block of P^{t2} onto
/// 1 - P, which enters with opposite sign.
inline double crossing_residual(Cplx lambda, Cplx eta) {
    Matrix j(2, 2);
    j << 0.0, 1.0, -1.0, 0.0;
    const Matrix j1 = kron(j, Matrix::Identity(2, 2));
    const Matrix rhs = -j1 * detail::partial_transpose_second(yang_r(-lambda - eta, eta)) * j1.inverse();
    return rel_residual(yang_r(lambda, eta), rhs);
}

}  // namespace openbethe
