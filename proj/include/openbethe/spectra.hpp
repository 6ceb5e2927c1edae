#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <vector>

#include "openbethe/types.hpp"

namespace openbethe {

inline constexpr Eigen::Index kDefaultDimensionCap = 4096;

/// Eigenvalues sorted by (real, imag); the canonical spectrum order.
inline std::vector<Cplx> dense_spectrum(const Matrix& m, Eigen::Index dimension_cap = kDefaultDimensionCap) {
    if (m.rows() > dimension_cap) throw domain_error("dense_spectrum: dimension cap exceeded");
    Eigen::ComplexEigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw domain_error("dense_spectrum: eigensolver failed");
    std::vector<Cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(out.begin(), out.end(),
              [](Cplx a, Cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    return out;
}

struct SpectralDecomposition {
    std::vector<Cplx> eigenvalues;  // canonical order
    Matrix eigenvectors;            // columns match eigenvalues
};

inline SpectralDecomposition dense_eigensystem(const Matrix& m,
                                               Eigen::Index dimension_cap = kDefaultDimensionCap) {
    if (m.rows() > dimension_cap) throw domain_error("dense_eigensystem: dimension cap exceeded");
    Eigen::ComplexEigenSolver<Matrix> es(m, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success) throw domain_error("dense_eigensystem: eigensolver failed");
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const Cplx za = es.eigenvalues()(a), zb = es.eigenvalues()(b);
        return za.real() != zb.real() ? za.real() < zb.real() : za.imag() < zb.imag();
    });
    SpectralDecomposition out;
    out.eigenvectors = Matrix(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out.eigenvalues.push_back(es.eigenvalues()(order[static_cast<std::size_t>(i)]));
        out.eigenvectors.col(i) = es.eigenvectors().col(order[static_cast<std::size_t>(i)]);
    }
    return out;
}

/// Distance from z to the nearest point of the spectrum, relative to the
/// largest eigenvalue magnitude (absolute when the spectrum is all zero).
inline double spectral_distance(Cplx z, const std::vector<Cplx>& spectrum) {
    double best = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (Cplx e : spectrum) {
        best = std::min(best, std::abs(z - e));
        scale = std::max(scale, std::abs(e));
    }
    return scale > 0.0 ? best / scale : best;
}

/// || m v - z v || / (||m|| ||v||): eigenpair residual.
inline double eigenpair_residual(const Matrix& m, Cplx z, const Vector& v) {
    const double scale = max_abs(m) * max_abs(v);
    if (scale == 0.0) return 0.0;
    return max_abs(Vector(m * v - z * v)) / scale;
}

}  // namespace openbethe
