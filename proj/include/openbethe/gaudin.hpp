#pragma once

#include <array>
#include <vector>

#include "openbethe/bethe.hpp"
#include "openbethe/boundary.hpp"
#include "openbethe/chain.hpp"
#include "openbethe/types.hpp"

namespace openbethe {

/// Gaudin-model data: chain sites (no quasi-classical parameter) plus the
/// single matched boundary triple (xi, nu, psi).
struct GaudinConfig {
    std::vector<double> spins;
    std::vector<Cplx> alphas;
    Cplx xi{1.0}, nu{1.0}, psi{0.0};

    GaudinConfig(std::vector<double> s, std::vector<Cplx> a, GaudinBoundary b)
        : spins(std::move(s)), alphas(std::move(a)), xi(b.xi), nu(b.nu), psi(b.psi) {
        if (spins.size() != alphas.size())
            throw config_error("GaudinConfig: spins and inhomogeneities must have equal length");
        if (spins.empty()) throw config_error("GaudinConfig: empty chain");
        for (double sp : spins) SpinRep{sp};
        for (std::size_t i = 0; i < alphas.size(); ++i)
            for (std::size_t j = i + 1; j < alphas.size(); ++j)
                if (std::abs(alphas[i] - alphas[j]) < kPoleGuard || std::abs(alphas[i] + alphas[j]) < kPoleGuard)
                    throw config_error("GaudinConfig: inhomogeneities must be distinct and non-opposite");
    }

    int size() const { return static_cast<int>(spins.size()); }

    /// Matching spin chain at quasi-classical parameter eta, same boundary on both ends.
    ChainConfig chain_at(Cplx eta) const { return ChainConfig{spins, alphas, eta}; }

    TriangularBoundary boundary_pair() const {
        TriangularBoundary b;
        b.xi_minus = b.xi_plus = xi;
        b.nu_minus = b.nu_plus = nu;
        b.psi_minus = b.psi_plus = psi;
        return b;
    }

    /// Triangular boundary matrix K(lambda) = [[xi - l nu, l psi], [0, xi + l nu]].
    Matrix k(Cplx lambda) const {
        Matrix m(2, 2);
        m << xi - lambda * nu, lambda * psi, 0.0, xi + lambda * nu;
        return m;
    }

    void guard_poles(Cplx lambda) const {
        for (const Cplx& a : alphas)
            if (std::abs(lambda - a) < kPoleGuard || std::abs(lambda + a) < kPoleGuard)
                throw domain_error("gaudin: spectral point too close to +-alpha_m");
        if (std::abs(xi * xi - lambda * lambda * nu * nu) < kPoleGuard)
            throw domain_error("gaudin: boundary matrix K(lambda) is singular at this point");
    }
};

namespace detail {

/// sigma . S_m as a 2x2 auxiliary block matrix over the chain space.
inline Matrix sigma_dot_s(const SiteOperators& ops, std::size_t m, Eigen::Index h) {
    Matrix out(2 * h, 2 * h);
    out.topLeftCorner(h, h) = ops.s3[m];
    out.topRightCorner(h, h) = ops.sminus[m];
    out.bottomLeftCorner(h, h) = ops.splus[m];
    out.bottomRightCorner(h, h) = -ops.s3[m];
    return out;
}

inline SiteOperators gaudin_site_ops(const GaudinConfig& g) {
    // Embedding needs only the spin list; eta is irrelevant here.
    return SiteOperators{ChainConfig{g.spins, g.alphas, Cplx{1.0}}};
}

/// Conjugate a 2x2-aux block matrix by K in the auxiliary space.
inline Matrix aux_sandwich(const Matrix& k2, const Matrix& big, Eigen::Index h) {
    const Matrix kb = kron(k2, Matrix::Identity(h, h));
    const Matrix kbi = kron(Matrix(k2.inverse()), Matrix::Identity(h, h));
    return kb * big * kbi;
}

}  // namespace detail

/// Gaudin Lax matrix: sum_m [ sigma.S_m/(l - alpha_m) + K(l)(sigma.S_m)K(l)^{-1}/(l + alpha_m) ].
/// The boundary conjugation acts in the auxiliary contraction; this is the
/// order fixed by the eta^2 coefficient of 2l t(l) - Delta(l) in the
/// quasi-classical expansion.
inline Matrix gaudin_lax(Cplx lambda, const GaudinConfig& g) {
    g.guard_poles(lambda);
    const SiteOperators ops = detail::gaudin_site_ops(g);
    const Eigen::Index h = ops.s3.front().rows();
    const Matrix k2 = g.k(lambda);
    Matrix out = Matrix::Zero(2 * h, 2 * h);
    for (std::size_t m = 0; m < g.spins.size(); ++m) {
        const Matrix sds = detail::sigma_dot_s(ops, m, h);
        out += sds / (lambda - g.alphas[m]);
        out += detail::aux_sandwich(k2, sds, h) / (lambda + g.alphas[m]);
    }
    return out;
}

/// Generating function tau(l) = tr_0 L_0^2(l); an even function of lambda.
inline Matrix gaudin_tau(Cplx lambda, const GaudinConfig& g) {
    const Matrix l = gaudin_lax(lambda, g);
    const Matrix l2 = l * l;
    const Eigen::Index h = l.rows() / 2;
    return l2.topLeftCorner(h, h) + l2.bottomRightCorner(h, h);
}

namespace detail {

/// 3x3 matrix O of the adjoint action: K sigma^a K^{-1} = sum_b O_ab sigma^b,
/// Cartesian basis (sigma^1, sigma^2, sigma^3). Complex orthogonal.
inline Matrix adjoint_action(const Matrix& k2) {
    std::array<Matrix, 3> sig;
    sig[0] = Matrix(2, 2);
    sig[0] << 0.0, 1.0, 1.0, 0.0;
    sig[1] = Matrix(2, 2);
    sig[1] << 0.0, -I, I, 0.0;
    sig[2] = Matrix(2, 2);
    sig[2] << 1.0, 0.0, 0.0, -1.0;
    const Matrix ki = k2.inverse();
    Matrix o(3, 3);
    for (int a = 0; a < 3; ++a) {
        const Matrix x = k2 * sig[static_cast<std::size_t>(a)] * ki;
        for (int b = 0; b < 3; ++b)
            o(a, b) = (sig[static_cast<std::size_t>(b)] * x).trace() / 2.0;
    }
    return o;
}

/// Cartesian spin components of site m on the chain space.
inline std::array<Matrix, 3> cartesian_spin(const SiteOperators& ops, std::size_t m) {
    return {Matrix((ops.splus[m] + ops.sminus[m]) / 2.0), Matrix((ops.splus[m] - ops.sminus[m]) / (2.0 * I)),
            ops.s3[m]};
}

}  // namespace detail

struct GaudinHamiltonians {
    std::vector<Matrix> h;        // residue of tau at +alpha_m is 4 h[m]
    std::vector<Matrix> h_tilde;  // residue of tau at -alpha_m is 4 h_tilde[m]
};

/// Long-range boundary Gaudin Hamiltonians from the residues of tau:
///   H_m = sum_{n != m} S_m.S_n/(alpha_m - alpha_n)
///       + sum_n [ (K S_m K^{-1}).S_n + S_n.(K S_m K^{-1}) ] / (2(alpha_m + alpha_n)),
/// with K = K(alpha_m) and the conjugated vector components read off the
/// sigma-decomposition of K (sigma.S_m) K^{-1}. Since tau is even in lambda,
/// the residue at -alpha_m is minus the residue at +alpha_m, so H~_m = -H_m.
inline GaudinHamiltonians gaudin_hamiltonians(const GaudinConfig& g) {
    const SiteOperators ops = detail::gaudin_site_ops(g);
    const Eigen::Index h = ops.s3.front().rows();
    GaudinHamiltonians out;
    const std::size_t n_sites = g.spins.size();
    std::vector<std::array<Matrix, 3>> cart;
    cart.reserve(n_sites);
    for (std::size_t m = 0; m < n_sites; ++m) cart.push_back(detail::cartesian_spin(ops, m));
    for (std::size_t m = 0; m < n_sites; ++m) {
        Matrix hm = Matrix::Zero(h, h);
        for (std::size_t n = 0; n < n_sites; ++n) {
            if (n == m) continue;
            Matrix dot = Matrix::Zero(h, h);
            for (int a = 0; a < 3; ++a)
                dot += cart[m][static_cast<std::size_t>(a)] * cart[n][static_cast<std::size_t>(a)];
            hm += dot / (g.alphas[m] - g.alphas[n]);
        }
        const Matrix o = detail::adjoint_action(g.k(g.alphas[m]));
        std::array<Matrix, 3> conj;
        for (int a = 0; a < 3; ++a) {
            conj[static_cast<std::size_t>(a)] = Matrix::Zero(h, h);
            for (int b = 0; b < 3; ++b)
                conj[static_cast<std::size_t>(a)] += o(a, b) * cart[m][static_cast<std::size_t>(b)];
        }
        for (std::size_t n = 0; n < n_sites; ++n) {
            Matrix sym = Matrix::Zero(h, h);
            for (int a = 0; a < 3; ++a)
                sym += conj[static_cast<std::size_t>(a)] * cart[n][static_cast<std::size_t>(a)] +
                       cart[n][static_cast<std::size_t>(a)] * conj[static_cast<std::size_t>(a)];
            hm += sym / (2.0 * (g.alphas[m] + g.alphas[n]));
        }
        out.h.push_back(hm);
        out.h_tilde.push_back(-hm);
    }
    return out;
}

/// Pseudo-vacuum eigenvalue of tau.
inline Cplx gaudin_chi0(Cplx lambda, const GaudinConfig& g) {
    const Cplx det = g.xi * g.xi - lambda * lambda * g.nu * g.nu;
    Cplx first = 0.0;
    for (std::size_t m = 0; m < g.spins.size(); ++m)
        first += g.spins[m] * (1.0 / (lambda - g.alphas[m]) + 1.0 / (lambda + g.alphas[m]));
    Cplx out = 4.0 * lambda * g.nu * g.nu / det * first;
    for (std::size_t m = 0; m < g.spins.size(); ++m)
        for (std::size_t n = 0; n < g.spins.size(); ++n) {
            const double w = g.spins[m] * g.spins[n] + (m == n ? g.spins[m] : 0.0);
            out += 2.0 * w *
                   (1.0 / ((lambda - g.alphas[m]) * (lambda - g.alphas[n])) +
                    2.0 / ((lambda - g.alphas[m]) * (lambda + g.alphas[n])) +
                    1.0 / ((lambda + g.alphas[m]) * (lambda + g.alphas[n])));
        }
    return out;
}

/// Spectrum of tau on the M-excitation Bethe vector; reduces to chi0 at M = 0.
inline Cplx gaudin_chi(Cplx lambda, const std::vector<Cplx>& roots, const GaudinConfig& g) {
    g.guard_poles(lambda);
    for (Cplx mu : roots)
        if (std::abs(lambda - mu) < kPoleGuard || std::abs(lambda + mu) < kPoleGuard)
            throw domain_error("gaudin_chi: evaluation point collides with +-mu_j");
    const Cplx det = g.xi * g.xi - lambda * lambda * g.nu * g.nu;
    Cplx out = -4.0 * lambda * lambda * g.nu * g.nu * g.nu * g.nu / (det * det);
    for (std::size_t j = 0; j < roots.size(); ++j)
        for (std::size_t k = 0; k < roots.size(); ++k) {
            if (j == k) continue;
            out += 2.0 * (1.0 / ((lambda - roots[j]) * (lambda - roots[k])) +
                          2.0 / ((lambda - roots[j]) * (lambda + roots[k])) +
                          1.0 / ((lambda + roots[j]) * (lambda + roots[k])));
        }
    for (std::size_t m = 0; m < g.spins.size(); ++m)
        for (std::size_t n = 0; n < g.spins.size(); ++n) {
            const double w = g.spins[m] * g.spins[n] + (m == n ? g.spins[m] : 0.0);
            out += 2.0 * w *
                   (1.0 / ((lambda - g.alphas[m]) * (lambda - g.alphas[n])) +
                    2.0 / ((lambda - g.alphas[m]) * (lambda + g.alphas[n])) +
                    1.0 / ((lambda + g.alphas[m]) * (lambda + g.alphas[n])));
        }
    Cplx roots_sum = -lambda * g.nu * g.nu / det;
    for (Cplx mu : roots) roots_sum += 1.0 / (lambda - mu) + 1.0 / (lambda + mu);
    Cplx site_sum = lambda * g.nu * g.nu / det;
    for (std::size_t m = 0; m < g.spins.size(); ++m)
        site_sum += g.spins[m] * (1.0 / (lambda - g.alphas[m]) + 1.0 / (lambda + g.alphas[m]));
    out -= 4.0 * roots_sum * site_sum;
    return out;
}

/// Creation operator F(mu) = sum_m [ (xi+mu nu)/(mu-alpha_m) + (xi-mu nu)/(mu+alpha_m) ]
/// (psi/nu S3_m + S-_m - psi^2/(4 nu^2) S+_m). Commutes with itself at
/// different spectral points.
inline Matrix gaudin_f_operator(Cplx mu, const GaudinConfig& g) {
    if (std::abs(g.nu) < 1e-12) throw domain_error("gaudin_f_operator: nu = 0 is singular");
    for (const Cplx& a : g.alphas)
        if (std::abs(mu - a) < kPoleGuard || std::abs(mu + a) < kPoleGuard)
            throw domain_error("gaudin_f_operator: mu collides with +-alpha_m");
    const SiteOperators ops = detail::gaudin_site_ops(g);
    const Eigen::Index h = ops.s3.front().rows();
    Matrix out = Matrix::Zero(h, h);
    for (std::size_t m = 0; m < g.spins.size(); ++m) {
        const Cplx c = (g.xi + mu * g.nu) / (mu - g.alphas[m]) + (g.xi - mu * g.nu) / (mu + g.alphas[m]);
        out += c * (g.psi / g.nu * ops.s3[m] + ops.sminus[m] -
                    g.psi * g.psi / (4.0 * g.nu * g.nu) * ops.splus[m]);
    }
    return out;
}

/// phi_M = F(mu_1) ... F(mu_M) applied to the pseudo-vacuum.
inline Vector gaudin_bethe_vector(const std::vector<Cplx>& roots, const GaudinConfig& g) {
    Eigen::Index h = 1;
    for (double s : g.spins) h *= SpinRep{s}.dimension();
    Vector v = Vector::Zero(h);
    v(0) = 1.0;
    for (auto it = roots.rbegin(); it != roots.rend(); ++it) v = gaudin_f_operator(*it, g) * v;
    return v;
}

/// Left side of the Gaudin Bethe equation for root i.
inline Cplx gaudin_f(int i, const std::vector<Cplx>& roots, const GaudinConfig& g) {
    const Cplx mi = roots[static_cast<std::size_t>(i)];
    Cplx out = 2.0 * mi * g.nu * g.nu / (g.xi + mi * g.nu);
    Cplx pair_sum = 0.0;
    for (std::size_t j = 0; j < roots.size(); ++j) {
        if (static_cast<int>(j) == i) continue;
        pair_sum += 1.0 / (mi - roots[j]) + 1.0 / (mi + roots[j]);
    }
    out -= 2.0 * (g.xi - mi * g.nu) * pair_sum;
    Cplx site_sum = 0.0;
    for (std::size_t m = 0; m < g.spins.size(); ++m)
        site_sum += g.spins[m] * (1.0 / (mi - g.alphas[m]) + 1.0 / (mi + g.alphas[m]));
    out += 2.0 * (g.xi - mi * g.nu) * site_sum;
    return out;
}

/// Relative residual of
/// tau(l) phi_M = chi_M phi_M + sum_i 4l(xi+mu_i nu)/((xi^2-l^2 nu^2)(l^2-mu_i^2)) f_i phi_M(l,{mu_j}).
inline double gaudin_off_shell_residual(Cplx lambda, const std::vector<Cplx>& roots, const GaudinConfig& g) {
    const Vector phi = gaudin_bethe_vector(roots, g);
    const Vector lhs = gaudin_tau(lambda, g) * phi;
    Vector rhs = gaudin_chi(lambda, roots, g) * phi;
    const Cplx det = g.xi * g.xi - lambda * lambda * g.nu * g.nu;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const Cplx mi = roots[i];
        std::vector<Cplx> swapped{lambda};
        for (std::size_t j = 0; j < roots.size(); ++j)
            if (j != i) swapped.push_back(roots[j]);
        const Cplx pref = 4.0 * lambda * (g.xi + mi * g.nu) / (det * (lambda * lambda - mi * mi));
        rhs += pref * gaudin_f(static_cast<int>(i), roots, g) * gaudin_bethe_vector(swapped, g);
    }
    return rel_residual(lhs, rhs);
}

/// Gaudin analog of the Bethe state.
struct GaudinState {
    int excitations = 0;
    std::vector<Cplx> roots;
    std::vector<double> f_residuals;
    Vector state;
    bool zero_vector = false;
};

/// Newton solution of f_i = 0, deduplicated under permutations and mu -> -mu.
/// mu = 0 is always a fixed point producing the zero vector; such sets are
/// kept but flagged.
inline std::vector<GaudinState> solve_gaudin_bethe(int excitations, const GaudinConfig& g,
                                                   const std::vector<std::vector<Cplx>>& user_seeds = {},
                                                   const SolveOptions& opt = {}) {
    const auto system = [&](const std::vector<Cplx>& roots) {
        for (std::size_t i = 0; i < roots.size(); ++i) {
            for (const Cplx& a : g.alphas)
                if (std::abs(roots[i] - a) < kRootCollision || std::abs(roots[i] + a) < kRootCollision)
                    throw domain_error("gaudin roots: pole collision");
            for (std::size_t j = i + 1; j < roots.size(); ++j)
                if (std::abs(roots[i] - roots[j]) < kRootCollision ||
                    std::abs(roots[i] + roots[j]) < kRootCollision)
                    throw domain_error("gaudin roots: coincident or opposite roots");
        }
        std::vector<Cplx> out(roots.size());
        for (std::size_t i = 0; i < roots.size(); ++i) out[i] = gaudin_f(static_cast<int>(i), roots, g);
        return out;
    };
    double radius = 1.0;
    for (Cplx a : g.alphas) radius = std::max(radius, 2.0 * std::abs(a));
    std::mt19937_64 rng(opt.rng_seed);
    std::uniform_real_distribution<double> unif(-radius, radius);
    std::vector<std::vector<Cplx>> seeds = user_seeds;
    for (int k = 0; k < opt.random_seeds; ++k) {
        std::vector<Cplx> s(static_cast<std::size_t>(excitations));
        for (auto& z : s) z = Cplx{unif(rng), unif(rng)};
        seeds.push_back(std::move(s));
    }
    std::vector<GaudinState> states;
    for (const auto& seed : seeds) {
        const NewtonResult nr = newton_solve(system, seed, opt.newton);
        if (!nr.converged) continue;
        std::vector<Cplx> roots = nr.x;
        for (Cplx& mu : roots)
            if (-mu.real() > mu.real() || (-mu.real() == mu.real() && -mu.imag() > mu.imag())) mu = -mu;
        std::sort(roots.begin(), roots.end(),
                  [](Cplx a, Cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
        bool duplicate = false;
        for (const auto& st : states)
            if (detail::same_root_set(st.roots, roots, opt.dedup_tolerance)) duplicate = true;
        if (duplicate) continue;
        GaudinState st;
        st.excitations = excitations;
        st.roots = roots;
        for (int i = 0; i < excitations; ++i) st.f_residuals.push_back(std::abs(gaudin_f(i, roots, g)));
        bool off_pole = true;
        for (Cplx mu : roots)
            for (const Cplx& a : g.alphas)
                if (std::abs(mu - a) < kRootCollision || std::abs(mu + a) < kRootCollision) off_pole = false;
        if (!off_pole) continue;
        st.state = gaudin_bethe_vector(roots, g);
        st.zero_vector = max_abs(st.state) < 1e-8;
        states.push_back(std::move(st));
    }
    std::sort(states.begin(), states.end(), [](const GaudinState& a, const GaudinState& b) {
        for (std::size_t i = 0; i < a.roots.size(); ++i) {
            if (a.roots[i].real() != b.roots[i].real()) return a.roots[i].real() < b.roots[i].real();
            if (a.roots[i].imag() != b.roots[i].imag()) return a.roots[i].imag() < b.roots[i].imag();
        }
        return false;
    });
    return states;
}

// ---------------------------------------------------------------------------
// Quasi-classical expansion checks
// ---------------------------------------------------------------------------

/// Fitted eta-power series of 2 lambda t(lambda) - Delta(lambda) together with
/// the residuals against the closed-form coefficients
///   c0 = 2 lambda (xi^2 - lambda^2 nu^2) 1
///   c1 = (xi^2 - 3 lambda^2 nu^2) 1
///   c2 = lambda ((xi^2 - lambda^2 nu^2) tau(lambda) - nu^2/2 1).
struct ExpansionReport {
    std::vector<double> etas;
    Matrix c0, c1, c2;
    double fit_residual = 0.0;        // least-squares misfit over the grid
    double richardson_gap = 0.0;      // |c2_fit - c2_richardson| relative
    double c0_residual = 0.0;
    double c1_residual = 0.0;
    double tau_residual = 0.0;        // extracted tau vs direct construction
};

struct ExpansionOptions {
    std::vector<double> etas{3.2e-4, 1.6e-4, 8e-5, 4e-5, 2e-5};
    int degree = 3;
};

inline ExpansionReport quasiclassical_check(Cplx lambda, const GaudinConfig& g,
                                            const ExpansionOptions& opt = {}) {
    if (static_cast<int>(opt.etas.size()) < opt.degree + 1)
        throw config_error("quasiclassical_check: grid too small for the fit degree");
    const TriangularBoundary bnd = g.boundary_pair();
    ExpansionReport rep;
    rep.etas = opt.etas;
    std::vector<Matrix> vals;
    vals.reserve(opt.etas.size());
    for (double e : opt.etas) {
        const ChainConfig chain = g.chain_at(Cplx{e});
        vals.push_back(Matrix(2.0 * lambda * transfer_matrix(lambda, chain, bnd) -
                              sklyanin_determinant(lambda, chain, bnd)));
    }
    const Eigen::Index npts = static_cast<Eigen::Index>(opt.etas.size());
    const Eigen::Index ncoef = opt.degree + 1;
    Eigen::MatrixXd vand(npts, ncoef);
    for (Eigen::Index r = 0; r < npts; ++r) {
        double p = 1.0;
        for (Eigen::Index c = 0; c < ncoef; ++c, p *= opt.etas[static_cast<std::size_t>(r)]) vand(r, c) = p;
    }
    const Eigen::MatrixXd pinv =
        (vand.transpose() * vand).ldlt().solve(vand.transpose() * Eigen::MatrixXd::Identity(npts, npts));
    const Eigen::Index h = vals.front().rows();
    std::vector<Matrix> coef(static_cast<std::size_t>(ncoef), Matrix::Zero(h, h));
    for (Eigen::Index c = 0; c < ncoef; ++c)
        for (Eigen::Index r = 0; r < npts; ++r)
            coef[static_cast<std::size_t>(c)] += pinv(c, r) * vals[static_cast<std::size_t>(r)];
    rep.c0 = coef[0];
    rep.c1 = coef[1];
    rep.c2 = coef[2];

    double misfit = 0.0, scale = 0.0;
    for (Eigen::Index r = 0; r < npts; ++r) {
        Matrix recon = Matrix::Zero(h, h);
        double p = 1.0;
        for (Eigen::Index c = 0; c < ncoef; ++c, p *= opt.etas[static_cast<std::size_t>(r)])
            recon += p * coef[static_cast<std::size_t>(c)];
        misfit = std::max(misfit, max_abs(Matrix(recon - vals[static_cast<std::size_t>(r)])));
        scale = std::max(scale, max_abs(vals[static_cast<std::size_t>(r)]));
    }
    rep.fit_residual = scale > 0.0 ? misfit / scale : 0.0;

    // Three-point Richardson cross-check on the eta^2 coefficient.
    {
        const std::size_t n = opt.etas.size();
        const std::array<double, 3> es{opt.etas[n - 3], opt.etas[n - 2], opt.etas[n - 1]};
        Eigen::Matrix3d v3;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) v3(r, c) = std::pow(es[static_cast<std::size_t>(r)], c);
        const Eigen::Matrix3d v3i = v3.inverse();
        Matrix c2r = Matrix::Zero(h, h);
        for (int r = 0; r < 3; ++r) c2r += v3i(2, r) * vals[n - 3 + static_cast<std::size_t>(r)];
        rep.richardson_gap = rel_residual(rep.c2, c2r);
    }

    const Cplx det = g.xi * g.xi - lambda * lambda * g.nu * g.nu;
    rep.c0_residual = rel_residual(rep.c0, Matrix(2.0 * lambda * det * Matrix::Identity(h, h)));
    rep.c1_residual =
        rel_residual(rep.c1, Matrix((g.xi * g.xi - 3.0 * lambda * lambda * g.nu * g.nu) * Matrix::Identity(h, h)));
    const Matrix tau_extracted = (rep.c2 / lambda + g.nu * g.nu / 2.0 * Matrix::Identity(h, h)) / det;
    rep.tau_residual = rel_residual(tau_extracted, gaudin_tau(lambda, g));
    return rep;
}

/// || Psi_M(eta)/eta^M - phi_M || / || phi_M || at one eta; first order in eta.
inline double bethe_vector_limit_residual(const std::vector<Cplx>& roots, const GaudinConfig& g, double eta) {
    const ChainConfig chain = g.chain_at(Cplx{eta});
    const TriangularBoundary bnd = g.boundary_pair();
    const Vector psi = bethe_vector(roots, chain, bnd);
    const Vector phi = gaudin_bethe_vector(roots, g);
    const double scale = std::pow(eta, static_cast<double>(roots.size()));
    return max_abs(Vector(psi / scale - phi)) / max_abs(phi);
}

/// | F_M(eta)/eta - f_M | / |f_M| at one eta; first order in eta.
inline double bethe_equation_limit_residual(int i, const std::vector<Cplx>& roots, const GaudinConfig& g,
                                            double eta) {
    const ChainConfig chain = g.chain_at(Cplx{eta});
    const TriangularBoundary bnd = g.boundary_pair();
    const Cplx big = bethe_f(i, roots, chain, bnd) / eta;
    const Cplx small = gaudin_f(i, roots, g);
    return std::abs(big - small) / std::abs(small);
}

namespace detail {

/// The scalar eta-series of 2l(Lambda_M - vacuum shift) cancels to O(eta^2)
/// between terms of order one, so the expansion runs in extended precision.
struct LongScalars {
    using L = std::complex<long double>;
    static L up(Cplx z) { return {static_cast<long double>(z.real()), static_cast<long double>(z.imag())}; }

    std::vector<L> spins, alphas;
    L xi, nu;
    L lam;

    LongScalars(Cplx lambda, const GaudinConfig& g) : xi(up(g.xi)), nu(up(g.nu)), lam(up(lambda)) {
        for (double s : g.spins) spins.emplace_back(static_cast<long double>(s), 0.0L);
        for (Cplx a : g.alphas) alphas.push_back(up(a));
    }

    L a(L l, L e) const {
        L out{1.0L};
        for (std::size_t m = 0; m < spins.size(); ++m) out *= (l - alphas[m] + e * spins[m]) / (l - alphas[m]);
        return out;
    }
    L d(L l, L e) const {
        L out{1.0L};
        for (std::size_t m = 0; m < spins.size(); ++m) out *= (l - alphas[m] - e * spins[m]) / (l - alphas[m]);
        return out;
    }
    L at(L l, L e) const {
        L out{1.0L};
        for (std::size_t m = 0; m < spins.size(); ++m)
            out *= (l + alphas[m] + e * (1.0L + spins[m])) / (l + alphas[m] + e);
        return out;
    }
    L dt(L l, L e) const {
        L out{1.0L};
        for (std::size_t m = 0; m < spins.size(); ++m)
            out *= (l + alphas[m] + e * (1.0L - spins[m])) / (l + alphas[m] + e);
        return out;
    }
    L alpha(L l, L e) const { return (xi - l * nu) * a(l, e) * at(l, e); }
    L delta_hat(L l, L e) const {
        return ((xi + l * nu) - e / (2.0L * l + e) * (xi - l * nu)) * d(l, e) * dt(l, e);
    }

    L shifted_eigenvalue(const std::vector<L>& roots, L e) const {
        const L k1 = 2.0L * (xi + lam * nu) * (lam + e) / (2.0L * lam + e);
        const L k2 = xi - (lam + e) * nu;
        L pa = k1 * alpha(lam, e);
        L pd = k2 * delta_hat(lam, e);
        for (L mu : roots) {
            pa *= (lam + mu) * (lam - mu - e) / ((lam - mu) * (lam + mu + e));
            pd *= (lam - mu + e) * (lam + mu + 2.0L * e) / ((lam - mu) * (lam + mu + e));
        }
        const L dvac = alpha(lam + e / 2.0L, e) * delta_hat(lam - e / 2.0L, e);
        return 2.0L * lam * (pa + pd - dvac);
    }
};

/// Least-squares polynomial coefficient extraction on a small grid, extended
/// precision, via normal equations solved by Gaussian elimination.
inline std::complex<long double> polyfit_coefficient(const std::vector<double>& xs,
                                                     const std::vector<std::complex<long double>>& ys,
                                                     int degree, int which) {
    using L = std::complex<long double>;
    const int n = static_cast<int>(xs.size());
    const int k = degree + 1;
    std::vector<std::vector<L>> ata(static_cast<std::size_t>(k), std::vector<L>(static_cast<std::size_t>(k), L{}));
    std::vector<L> aty(static_cast<std::size_t>(k), L{});
    for (int r = 0; r < n; ++r) {
        long double p1 = 1.0L;
        std::vector<long double> pows(static_cast<std::size_t>(k));
        for (int c = 0; c < k; ++c, p1 *= static_cast<long double>(xs[static_cast<std::size_t>(r)]))
            pows[static_cast<std::size_t>(c)] = p1;
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j)
                ata[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                    pows[static_cast<std::size_t>(i)] * pows[static_cast<std::size_t>(j)];
            aty[static_cast<std::size_t>(i)] += pows[static_cast<std::size_t>(i)] * ys[static_cast<std::size_t>(r)];
        }
    }
    for (int col = 0; col < k; ++col) {  // partial pivoting
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(ata[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
                std::abs(ata[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))
                piv = r;
        std::swap(ata[static_cast<std::size_t>(col)], ata[static_cast<std::size_t>(piv)]);
        std::swap(aty[static_cast<std::size_t>(col)], aty[static_cast<std::size_t>(piv)]);
        for (int r = col + 1; r < k; ++r) {
            const L f = ata[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                        ata[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
            for (int c = col; c < k; ++c)
                ata[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
                    f * ata[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
            aty[static_cast<std::size_t>(r)] -= f * aty[static_cast<std::size_t>(col)];
        }
    }
    std::vector<L> sol(static_cast<std::size_t>(k));
    for (int r = k - 1; r >= 0; --r) {
        L acc = aty[static_cast<std::size_t>(r)];
        for (int c = r + 1; c < k; ++c)
            acc -= ata[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] * sol[static_cast<std::size_t>(c)];
        sol[static_cast<std::size_t>(r)] = acc / ata[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
    }
    return sol[static_cast<std::size_t>(which)];
}

}  // namespace detail

/// | 2l(Lambda_M - alpha delta^ shift) eta-series c2 -> chi_M | via direct scalars:
/// expands the vacuum-shifted transfer eigenvalue and compares the eta^2 term
/// with lambda((xi^2-l^2 nu^2) chi_M - nu^2/2).
inline double eigenvalue_limit_residual(Cplx lambda, const std::vector<Cplx>& roots, const GaudinConfig& g,
                                        const ExpansionOptions& opt = {}) {
    using L = std::complex<long double>;
    const detail::LongScalars sc(lambda, g);
    std::vector<L> lroots;
    for (Cplx mu : roots) lroots.push_back(detail::LongScalars::up(mu));
    std::vector<L> vals;
    for (double e : opt.etas) vals.push_back(sc.shifted_eigenvalue(lroots, L{static_cast<long double>(e)}));
    const L c2 = detail::polyfit_coefficient(opt.etas, vals, opt.degree, 2);
    const Cplx det = g.xi * g.xi - lambda * lambda * g.nu * g.nu;
    const Cplx expected = lambda * (det * gaudin_chi(lambda, roots, g) - g.nu * g.nu / 2.0);
    const Cplx c2d{static_cast<double>(c2.real()), static_cast<double>(c2.imag())};
    return std::abs(c2d - expected) / std::max(std::abs(c2d), std::abs(expected));
}

}  // namespace openbethe
