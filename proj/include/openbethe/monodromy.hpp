#pragma once

#include <vector>

#include "openbethe/chain.hpp"
#include "openbethe/rmatrix.hpp"
#include "openbethe/tensor.hpp"
#include "openbethe/types.hpp"

namespace openbethe {

/// The 2x2 auxiliary-space blocks of a monodromy-type operator; each block
/// is an operator on the chain Hilbert space.
struct MonodromyBlocks {
    Matrix a, b, c, d;

    Matrix full() const {
        const Eigen::Index h = a.rows();
        Matrix out(2 * h, 2 * h);
        out.topLeftCorner(h, h) = a;
        out.topRightCorner(h, h) = b;
        out.bottomLeftCorner(h, h) = c;
        out.bottomRightCorner(h, h) = d;
        return out;
    }

    static MonodromyBlocks split(const Matrix& full) {
        const Eigen::Index h = full.rows() / 2;
        return MonodromyBlocks{full.topLeftCorner(h, h), full.topRightCorner(h, h),
                               full.bottomLeftCorner(h, h), full.bottomRightCorner(h, h)};
    }

    /// Attach the auxiliary label: Operator on [aux(idx), site_1..site_N].
    Operator as_operator(const ChainConfig& config, int aux_index = 0) const {
        std::vector<Space> spaces{aux_space(aux_index)};
        for (const Space& s : config.site_spaces()) spaces.push_back(s);
        return Operator{full(), std::move(spaces)};
    }
};

/// Lax operator at site m as a 2x2 auxiliary block matrix over the chain space:
/// (1/lambda) [[lambda + eta S3, eta S-], [eta S+, lambda - eta S3]].
inline Matrix lax_full(Cplx lambda, int m, const ChainConfig& config, const SiteOperators& ops) {
    if (std::abs(lambda) < kPoleGuard) throw domain_error("lax: pole at lambda = 0");
    const Eigen::Index h = config.hilbert_dim();
    const Cplx e = config.eta;
    const std::size_t k = static_cast<std::size_t>(m - 1);
    Matrix out(2 * h, 2 * h);
    out.topLeftCorner(h, h) = (lambda * Matrix::Identity(h, h) + e * ops.s3[k]) / lambda;
    out.topRightCorner(h, h) = (e / lambda) * ops.sminus[k];
    out.bottomLeftCorner(h, h) = (e / lambda) * ops.splus[k];
    out.bottomRightCorner(h, h) = (lambda * Matrix::Identity(h, h) - e * ops.s3[k]) / lambda;
    return out;
}

/// Lax operator on [aux(0), site(m)] only, for small-space checks.
inline Operator lax(Cplx lambda, int m, const ChainConfig& config) {
    if (std::abs(lambda) < kPoleGuard) throw domain_error("lax: pole at lambda = 0");
    const Eigen::Index d = config.site_dim(m);
    const SpinTriple t = spin_matrices(SpinRep{config.spins[static_cast<std::size_t>(m - 1)]});
    const Cplx e = config.eta;
    Matrix out(2 * d, 2 * d);
    out.topLeftCorner(d, d) = (lambda * Matrix::Identity(d, d) + e * t.s3) / lambda;
    out.topRightCorner(d, d) = (e / lambda) * t.sminus;
    out.bottomLeftCorner(d, d) = (e / lambda) * t.splus;
    out.bottomRightCorner(d, d) = (lambda * Matrix::Identity(d, d) - e * t.s3) / lambda;
    return Operator{std::move(out), {aux_space(0), site_space(m, d)}};
}

/// T(lambda) = L_{0N}(lambda - alpha_N) ... L_{01}(lambda - alpha_1).
inline MonodromyBlocks monodromy_T(Cplx lambda, const ChainConfig& config) {
    config.guard_poles(lambda);
    const SiteOperators ops(config);
    Matrix t = lax_full(lambda - config.alphas.back(), config.size(), config, ops);
    for (int m = config.size() - 1; m >= 1; --m)
        t *= lax_full(lambda - config.alphas[static_cast<std::size_t>(m - 1)], m, config, ops);
    return MonodromyBlocks::split(t);
}

/// Reversed product: T~(lambda) = L_{01}(lambda + alpha_1 + eta) ... L_{0N}(lambda + alpha_N + eta).
inline MonodromyBlocks monodromy_T_tilde(Cplx lambda, const ChainConfig& config) {
    config.guard_poles_reversed(lambda);
    const SiteOperators ops(config);
    Matrix t = lax_full(lambda + config.alphas.front() + config.eta, 1, config, ops);
    for (int m = 2; m <= config.size(); ++m)
        t *= lax_full(lambda + config.alphas[static_cast<std::size_t>(m - 1)] + config.eta, m, config, ops);
    return MonodromyBlocks::split(t);
}

/// Vacuum eigenvalue of A(lambda): prod (lambda - alpha_m + eta s_m)/(lambda - alpha_m).
inline Cplx vacuum_a(Cplx lambda, const ChainConfig& config) {
    Cplx out = 1.0;
    for (int m = 0; m < config.size(); ++m)
        out *= (lambda - config.alphas[static_cast<std::size_t>(m)] + config.eta * config.spins[static_cast<std::size_t>(m)]) /
               (lambda - config.alphas[static_cast<std::size_t>(m)]);
    return out;
}

inline Cplx vacuum_d(Cplx lambda, const ChainConfig& config) {
    Cplx out = 1.0;
    for (int m = 0; m < config.size(); ++m)
        out *= (lambda - config.alphas[static_cast<std::size_t>(m)] - config.eta * config.spins[static_cast<std::size_t>(m)]) /
               (lambda - config.alphas[static_cast<std::size_t>(m)]);
    return out;
}

inline Cplx vacuum_a_tilde(Cplx lambda, const ChainConfig& config) {
    Cplx out = 1.0;
    for (int m = 0; m < config.size(); ++m)
        out *= (lambda + config.alphas[static_cast<std::size_t>(m)] + config.eta * (1.0 + config.spins[static_cast<std::size_t>(m)])) /
               (lambda + config.alphas[static_cast<std::size_t>(m)] + config.eta);
    return out;
}

inline Cplx vacuum_d_tilde(Cplx lambda, const ChainConfig& config) {
    Cplx out = 1.0;
    for (int m = 0; m < config.size(); ++m)
        out *= (lambda + config.alphas[static_cast<std::size_t>(m)] + config.eta * (1.0 - config.spins[static_cast<std::size_t>(m)])) /
               (lambda + config.alphas[static_cast<std::size_t>(m)] + config.eta);
    return out;
}

namespace detail {

inline std::vector<Space> two_aux_spaces(const ChainConfig& config) {
    std::vector<Space> spaces{aux_space(0), aux_space(1)};
    for (const Space& s : config.site_spaces()) spaces.push_back(s);
    return spaces;
}

inline Matrix r_on_two_aux(Cplx arg, const ChainConfig& config) {
    const Operator r{yang_r(arg, config.eta), {aux_space(0), aux_space(1)}};
    return promote(r, two_aux_spaces(config)).mat;
}

}  // namespace detail

/// RTT residual: R_00'(l-m) T_0(l) T_0'(m) = T_0'(m) T_0(l) R_00'(l-m).
inline double rtt_residual(Cplx lambda, Cplx mu, const ChainConfig& config) {
    const auto spaces = detail::two_aux_spaces(config);
    const Matrix t0 = promote(monodromy_T(lambda, config).as_operator(config, 0), spaces).mat;
    const Matrix t0p = promote(monodromy_T(mu, config).as_operator(config, 1), spaces).mat;
    const Matrix r = detail::r_on_two_aux(lambda - mu, config);
    return rel_residual(r * t0 * t0p, t0p * t0 * r);
}

/// Mixed relation: T~_0'(m) R_00'(l+m) T_0(l) = T_0(l) R_00'(l+m) T~_0'(m).
inline double mixed_ttilde_t_residual(Cplx lambda, Cplx mu, const ChainConfig& config) {
    const auto spaces = detail::two_aux_spaces(config);
    const Matrix t0 = promote(monodromy_T(lambda, config).as_operator(config, 0), spaces).mat;
    const Matrix tt0p = promote(monodromy_T_tilde(mu, config).as_operator(config, 1), spaces).mat;
    const Matrix r = detail::r_on_two_aux(lambda + mu, config);
    return rel_residual(tt0p * r * t0, t0 * r * tt0p);
}

/// Mixed relation: T~_0(l) T~_0'(m) R_00'(m-l) = R_00'(m-l) T~_0'(m) T~_0(l).
inline double mixed_ttilde_ttilde_residual(Cplx lambda, Cplx mu, const ChainConfig& config) {
    const auto spaces = detail::two_aux_spaces(config);
    const Matrix tt0 = promote(monodromy_T_tilde(lambda, config).as_operator(config, 0), spaces).mat;
    const Matrix tt0p = promote(monodromy_T_tilde(mu, config).as_operator(config, 1), spaces).mat;
    const Matrix r = detail::r_on_two_aux(mu - lambda, config);
    return rel_residual(tt0 * tt0p * r, r * tt0p * tt0);
}

}  // namespace openbethe
