#pragma once

#include <cmath>
#include <vector>

#include "openbethe/tensor.hpp"
#include "openbethe/types.hpp"

namespace openbethe {

inline constexpr double kPoleGuard = 1e-8;

/// Inhomogeneous chain data: per-site spins s_m, inhomogeneities alpha_m and
/// the quasi-classical parameter eta. Site indices are 1-based in the API,
/// matching the usual chain-site numbering.
struct ChainConfig {
    std::vector<double> spins;
    std::vector<Cplx> alphas;
    Cplx eta;

    ChainConfig(std::vector<double> s, std::vector<Cplx> a, Cplx e)
        : spins(std::move(s)), alphas(std::move(a)), eta(e) {
        if (spins.size() != alphas.size())
            throw config_error("ChainConfig: spins and inhomogeneities must have equal length");
        if (spins.empty()) throw config_error("ChainConfig: empty chain");
        for (double sp : spins) SpinRep{sp};  // validates half-integer
        if (std::abs(eta) == 0.0)
            throw config_error("ChainConfig: eta must be nonzero (the eta->0 regime is the Gaudin model)");
        for (std::size_t m = 0; m < alphas.size(); ++m)
            for (std::size_t n = m + 1; n < alphas.size(); ++n)
                if (std::abs(alphas[m] - alphas[n]) < kPoleGuard || std::abs(alphas[m] + alphas[n]) < kPoleGuard)
                    throw config_error("ChainConfig: inhomogeneities must be pairwise distinct and non-opposite");
    }

    int size() const { return static_cast<int>(spins.size()); }

    Eigen::Index site_dim(int m) const { return SpinRep{spins[static_cast<std::size_t>(m - 1)]}.dimension(); }

    Eigen::Index hilbert_dim() const {
        Eigen::Index d = 1;
        for (int m = 1; m <= size(); ++m) d *= site_dim(m);
        return d;
    }

    std::vector<Space> site_spaces() const {
        std::vector<Space> out;
        for (int m = 1; m <= size(); ++m) out.push_back(site_space(m, site_dim(m)));
        return out;
    }

    /// Rejects spectral points closer than the pole guard to any lattice pole lambda = alpha_m.
    void guard_poles(Cplx lambda) const {
        for (const Cplx& a : alphas)
            if (std::abs(lambda - a) < kPoleGuard)
                throw domain_error("spectral point too close to a lattice pole alpha_m");
    }

    /// Poles of the reversed monodromy sit at lambda = -alpha_m - eta.
    void guard_poles_reversed(Cplx lambda) const {
        for (const Cplx& a : alphas)
            if (std::abs(lambda + a + eta) < kPoleGuard)
                throw domain_error("spectral point too close to a reversed-monodromy pole -alpha_m-eta");
    }
};

/// 1 (x) ... (x) op (x) ... (x) 1 with op in slot m (1-based).
inline Operator embed_site(const Matrix& op, int m, const ChainConfig& config) {
    if (m < 1 || m > config.size()) throw domain_error("embed_site: site index out of range");
    if (op.rows() != config.site_dim(m) || op.cols() != config.site_dim(m))
        throw domain_error("embed_site: operator dimension does not match the site dimension");
    const Operator local{op, {site_space(m, config.site_dim(m))}};
    return promote(local, config.site_spaces());
}

/// Site spin operators embedded into the chain Hilbert space.
struct SiteOperators {
    std::vector<Matrix> s3, splus, sminus;

    explicit SiteOperators(const ChainConfig& config) {
        for (int m = 1; m <= config.size(); ++m) {
            const SpinTriple t = spin_matrices(SpinRep{config.spins[static_cast<std::size_t>(m - 1)]});
            s3.push_back(embed_site(t.s3, m, config).mat);
            splus.push_back(embed_site(t.splus, m, config).mat);
            sminus.push_back(embed_site(t.sminus, m, config).mat);
        }
    }
};

/// Pseudo-vacuum: tensor product of highest-weight vectors. With the
/// highest-first basis convention this is the first basis vector.
inline Vector pseudo_vacuum(const ChainConfig& config) {
    Vector v = Vector::Zero(config.hilbert_dim());
    v(0) = 1.0;
    return v;
}

}  // namespace openbethe
