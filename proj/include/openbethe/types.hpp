#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace openbethe {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Cplx I{0.0, 1.0};

/// Max-abs (entrywise sup) norm; the norm used for every residual in the library.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Residual of lhs == rhs, relative to the larger of the two sides.
template <typename A, typename B>
double rel_residual(const Eigen::MatrixBase<A>& lhs, const Eigen::MatrixBase<B>& rhs) {
    const double scale = std::max(max_abs(lhs), max_abs(rhs));
    if (scale == 0.0) return 0.0;
    return max_abs((lhs - rhs).eval()) / scale;
}

/// Commutator residual normalized by the product of the operand norms.
template <typename A, typename B>
double commutator_residual(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    const double scale = max_abs(a) * max_abs(b);
    if (scale == 0.0) return 0.0;
    return max_abs((a * b - b * a).eval()) / scale;
}

struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace openbethe
