#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "openbethe/sklyanin.hpp"
#include "openbethe/types.hpp"

namespace openbethe {

inline constexpr double kRootCollision = 1e-7;

namespace detail {

inline Cplx rat_a(Cplx l, Cplx m, Cplx e) { return (l + m) * (l - m - e) / ((l - m) * (l + m + e)); }
inline Cplx rat_d(Cplx l, Cplx m, Cplx e) { return (l - m + e) * (l + m + 2.0 * e) / ((l - m) * (l + m + e)); }

inline void guard_roots(const std::vector<Cplx>& roots, Cplx eta) {
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (std::abs(2.0 * roots[i] + eta) < kRootCollision)
            throw domain_error("bethe: root at the singular point -eta/2");
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (std::abs(roots[i] - roots[j]) < kRootCollision)
                throw domain_error("bethe: coincident roots");
            if (std::abs(roots[i] + roots[j] + eta) < kRootCollision)
                throw domain_error("bethe: eta-paired roots mu_i + mu_j + eta = 0");
        }
    }
}

}  // namespace detail

/// One-excitation constant: b_1(mu) = psi+/(2 nu+) (2mu/(2mu+eta) alpha(mu) - delta^(mu)).
inline Cplx bethe_b1(Cplx mu, const ChainConfig& config, const TriangularBoundary& bnd) {
    if (std::abs(bnd.nu_plus) < 1e-12) throw domain_error("bethe_b1: nu+ = 0 is singular");
    const Cplx e = config.eta;
    return bnd.psi_plus / (2.0 * bnd.nu_plus) *
           (2.0 * mu / (2.0 * mu + e) * vacuum_alpha(mu, config, bnd) - vacuum_delta_hat(mu, config, bnd));
}

/// b^(1)_M(mu ; others): the one-root coefficient dressed by the other roots.
inline Cplx bethe_b_one(Cplx mu, const std::vector<Cplx>& others, const ChainConfig& config,
                        const TriangularBoundary& bnd) {
    if (std::abs(bnd.nu_plus) < 1e-12) throw domain_error("bethe_b_one: nu+ = 0 is singular");
    const Cplx e = config.eta;
    Cplx pa = 2.0 * mu / (2.0 * mu + e) * vacuum_alpha(mu, config, bnd);
    Cplx pd = vacuum_delta_hat(mu, config, bnd);
    for (Cplx mj : others) {
        pa *= detail::rat_a(mu, mj, e);
        pd *= detail::rat_d(mu, mj, e);
    }
    return bnd.psi_plus / (2.0 * bnd.nu_plus) * (pa - pd);
}

/// b^(k)_M(removed ; kept): average over orderings of `removed` of the nested
/// chain b^(1)_M b^(1)_{M-1} ... , each factor dropping the roots already
/// consumed. k = removed.size(), M = removed.size() + kept.size().
inline Cplx bethe_b(std::vector<Cplx> removed, const std::vector<Cplx>& kept, const ChainConfig& config,
                    const TriangularBoundary& bnd) {
    const std::size_t k = removed.size();
    if (k == 0) return Cplx{1.0};
    std::sort(removed.begin(), removed.end(),
              [](Cplx a, Cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    Cplx total = 0.0;
    double count = 0.0;
    do {
        Cplx prod = 1.0;
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<Cplx> rest(removed.begin() + static_cast<std::ptrdiff_t>(j) + 1, removed.end());
            rest.insert(rest.end(), kept.begin(), kept.end());
            prod *= bethe_b_one(removed[j], rest, config, bnd);
        }
        total += prod;
        count += 1.0;
    } while (std::next_permutation(removed.begin(), removed.end(), [](Cplx a, Cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    }));
    return total / count;
}

/// All 2^M coefficients of the excitation-M creation polynomial, indexed by the
/// bitmask of kept roots (bit i set = B(mu_i) kept as an operator factor).
struct BetheCoefficients {
    int excitations;
    std::vector<Cplx> by_kept_mask;

    Cplx coefficient(unsigned kept_mask) const { return by_kept_mask[kept_mask]; }
};

inline BetheCoefficients bethe_coefficients(const std::vector<Cplx>& roots, const ChainConfig& config,
                                            const TriangularBoundary& bnd) {
    detail::guard_roots(roots, config.eta);
    const int m = static_cast<int>(roots.size());
    if (m > 10) throw domain_error("bethe_coefficients: excitation count beyond the factorial-sum range");
    BetheCoefficients out{m, std::vector<Cplx>(std::size_t{1} << m)};
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::vector<Cplx> kept, removed;
        for (int i = 0; i < m; ++i)
            ((mask >> i) & 1u ? kept : removed).push_back(roots[static_cast<std::size_t>(i)]);
        out.by_kept_mask[mask] = bethe_b(removed, kept, config, bnd);
    }
    return out;
}

/// Bethe vector: sum over root subsets S of b^(|S^c|)(S^c ; S) prod_{i in S} B(mu_i) applied
/// to the pseudo-vacuum. Symmetric in the roots.
inline Vector bethe_vector(const std::vector<Cplx>& roots, const ChainConfig& config,
                           const TriangularBoundary& bnd) {
    const BetheCoefficients coef = bethe_coefficients(roots, config, bnd);
    const int m = static_cast<int>(roots.size());
    std::vector<Matrix> b_ops;
    b_ops.reserve(roots.size());
    for (Cplx mu : roots) b_ops.push_back(sklyanin_monodromy(mu, config, bnd).b);
    const Vector om = pseudo_vacuum(config);
    Vector out = Vector::Zero(om.size());
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        Vector v = om;
        for (int i = 0; i < m; ++i)
            if ((mask >> i) & 1u) v = b_ops[static_cast<std::size_t>(i)] * v;
        out += coef.coefficient(mask) * v;
    }
    return out;
}

/// Transfer eigenvalue at excitation M:
/// k1 alpha prod (l+mu)(l-mu-eta)/((l-mu)(l+mu+eta)) + k2 delta^ prod (l-mu+eta)(l+mu+2eta)/(...).
inline Cplx bethe_lambda(Cplx lambda, const std::vector<Cplx>& roots, const ChainConfig& config,
                         const TriangularBoundary& bnd) {
    const Cplx e = config.eta;
    for (Cplx mu : roots)
        if (std::abs(lambda - mu) < kRootCollision || std::abs(lambda + mu + e) < kRootCollision)
            throw domain_error("bethe_lambda: evaluation point collides with a root or its reflection");
    const TransferKappas k = transfer_kappas(lambda, e, bnd);
    Cplx pa = k.k1 * vacuum_alpha(lambda, config, bnd);
    Cplx pd = k.k2 * vacuum_delta_hat(lambda, config, bnd);
    for (Cplx mu : roots) {
        pa *= detail::rat_a(lambda, mu, e);
        pd *= detail::rat_d(lambda, mu, e);
    }
    return pa + pd;
}

/// Left side of the Bethe equation for root i; all M equations vanish on shell.
inline Cplx bethe_f(int i, const std::vector<Cplx>& roots, const ChainConfig& config,
                    const TriangularBoundary& bnd) {
    const Cplx e = config.eta;
    const Cplx mi = roots[static_cast<std::size_t>(i)];
    Cplx pa = 2.0 * mi / (2.0 * mi + e) * vacuum_alpha(mi, config, bnd);
    Cplx pd = (bnd.xi_plus - (mi + e) * bnd.nu_plus) / (bnd.xi_plus + mi * bnd.nu_plus) *
              vacuum_delta_hat(mi, config, bnd);
    for (std::size_t j = 0; j < roots.size(); ++j) {
        if (static_cast<int>(j) == i) continue;
        pa *= detail::rat_a(mi, roots[j], e);
        pd *= detail::rat_d(mi, roots[j], e);
    }
    return pa - pd;
}

/// Relative residual of the off-shell transfer-matrix action:
/// t(l) Psi = Lambda Psi + sum_i 2eta(l+eta)(xi+ + mu_i nu+)/((l-mu_i)(l+mu_i+eta)) F_i Psi(l,{mu_j}).
inline double off_shell_residual(Cplx lambda, const std::vector<Cplx>& roots, const ChainConfig& config,
                                 const TriangularBoundary& bnd) {
    const Cplx e = config.eta;
    const Vector psi = bethe_vector(roots, config, bnd);
    const Vector lhs = transfer_matrix(lambda, config, bnd) * psi;
    Vector rhs = bethe_lambda(lambda, roots, config, bnd) * psi;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const Cplx mi = roots[i];
        std::vector<Cplx> swapped{lambda};
        for (std::size_t j = 0; j < roots.size(); ++j)
            if (j != i) swapped.push_back(roots[j]);
        const Cplx pref =
            2.0 * e * (lambda + e) * (bnd.xi_plus + mi * bnd.nu_plus) / ((lambda - mi) * (lambda + mi + e));
        rhs += pref * bethe_f(static_cast<int>(i), roots, config, bnd) * bethe_vector(swapped, config, bnd);
    }
    return rel_residual(lhs, rhs);
}

// ---------------------------------------------------------------------------
// Newton solver for the Bethe equations
// ---------------------------------------------------------------------------

struct NewtonOptions {
    int max_iterations = 200;
    double tolerance = 1e-10;
    double fd_step = 1e-6;
    int backtrack_steps = 40;
};

struct NewtonResult {
    std::vector<Cplx> x;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Damped Newton iteration with central finite-difference Jacobian and a
/// backtracking line search on ||F||.
inline NewtonResult newton_solve(const std::function<std::vector<Cplx>(const std::vector<Cplx>&)>& f,
                                 std::vector<Cplx> x0, const NewtonOptions& opt = {}) {
    NewtonResult res;
    res.x = std::move(x0);
    const auto norm = [](const std::vector<Cplx>& v) {
        double s = 0.0;
        for (Cplx z : v) s += std::norm(z);
        return std::sqrt(s);
    };
    const Eigen::Index n = static_cast<Eigen::Index>(res.x.size());
    for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
        std::vector<Cplx> fx;
        try {
            fx = f(res.x);
        } catch (const domain_error&) {
            res.converged = false;
            res.residual = std::numeric_limits<double>::infinity();
            return res;
        }
        res.residual = norm(fx);
        if (res.residual < opt.tolerance) {
            res.converged = true;
            return res;
        }
        Matrix jac(n, n);
        bool jac_ok = true;
        for (Eigen::Index j = 0; j < n && jac_ok; ++j) {
            const double h = opt.fd_step * std::max(1.0, std::abs(res.x[static_cast<std::size_t>(j)]));
            auto xp = res.x, xm = res.x;
            xp[static_cast<std::size_t>(j)] += h;
            xm[static_cast<std::size_t>(j)] -= h;
            try {
                const auto fp = f(xp), fm = f(xm);
                for (Eigen::Index i = 0; i < n; ++i)
                    jac(i, j) = (fp[static_cast<std::size_t>(i)] - fm[static_cast<std::size_t>(i)]) / (2.0 * h);
            } catch (const domain_error&) {
                jac_ok = false;
            }
        }
        if (!jac_ok) break;
        Vector rhs(n);
        for (Eigen::Index i = 0; i < n; ++i) rhs(i) = fx[static_cast<std::size_t>(i)];
        const Vector dx = jac.fullPivLu().solve(rhs);
        if (!dx.allFinite()) break;
        double step = 1.0;
        std::vector<Cplx> best = res.x;
        double best_norm = res.residual;
        for (int bt = 0; bt < opt.backtrack_steps; ++bt, step *= 0.5) {
            auto xt = res.x;
            for (Eigen::Index i = 0; i < n; ++i) xt[static_cast<std::size_t>(i)] -= step * dx(i);
            double nt;
            try {
                nt = norm(f(xt));
            } catch (const domain_error&) {
                continue;
            }
            if (nt < best_norm) {
                best = xt;
                best_norm = nt;
                break;
            }
        }
        if (best_norm >= res.residual) break;  // stalled
        res.x = best;
    }
    std::vector<Cplx> fx;
    try {
        fx = f(res.x);
        res.residual = norm(fx);
    } catch (const domain_error&) {
        res.residual = std::numeric_limits<double>::infinity();
    }
    res.converged = res.residual < opt.tolerance;
    return res;
}

/// A converged root set with its residuals and realized state vector.
struct BetheState {
    int excitations = 0;
    std::vector<Cplx> roots;
    std::vector<double> f_residuals;
    Vector state;
    bool zero_vector = false;
};

namespace detail {

/// Reflection representative: the lexicographically larger of mu and -mu-eta,
/// with a fuzz on the real-part comparison so nearly self-conjugate pairs
/// canonicalize consistently.
inline Cplx reflect_rep(Cplx mu, Cplx eta) {
    const Cplx r = -mu - eta;
    const double fuzz = 1e-8 * std::max(1.0, std::abs(mu));
    if (std::abs(r.real() - mu.real()) > fuzz ? r.real() > mu.real() : r.imag() > mu.imag()) return r;
    return mu;
}

inline std::vector<Cplx> canonical_roots(std::vector<Cplx> roots, Cplx eta) {
    for (Cplx& mu : roots) mu = reflect_rep(mu, eta);
    std::sort(roots.begin(), roots.end(),
              [](Cplx a, Cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    return roots;
}

inline bool same_root_set(const std::vector<Cplx>& a, const std::vector<Cplx>& b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

}  // namespace detail

struct SolveOptions {
    int random_seeds = 64;
    std::uint64_t rng_seed = 1;
    NewtonOptions newton{};
    double dedup_tolerance = 1e-6;
};

/// Solve the M-root Bethe system F_i = 0 by damped Newton from the supplied
/// seeds plus random seeds drawn in a disk of radius 2 max|alpha_m| + |eta|.
/// Converged sets are deduplicated under permutations and the reflection
/// mu -> -mu - eta, and returned in a deterministic (sorted) order.
inline std::vector<BetheState> solve_bethe(int excitations, const ChainConfig& config,
                                           const TriangularBoundary& bnd,
                                           const std::vector<std::vector<Cplx>>& user_seeds = {},
                                           const SolveOptions& opt = {}) {
    if (std::abs(bnd.nu_plus) < 1e-12) throw domain_error("solve_bethe: nu+ = 0 is excluded");
    const auto system = [&](const std::vector<Cplx>& roots) {
        detail::guard_roots(roots, config.eta);
        for (Cplx mu : roots) {
            config.guard_poles(mu);
            config.guard_poles_reversed(mu);
        }
        std::vector<Cplx> out(roots.size());
        for (std::size_t i = 0; i < roots.size(); ++i)
            out[i] = bethe_f(static_cast<int>(i), roots, config, bnd);
        return out;
    };

    double radius = std::abs(config.eta);
    for (Cplx a : config.alphas) radius = std::max(radius, 2.0 * std::abs(a) + std::abs(config.eta));
    std::mt19937_64 rng(opt.rng_seed);
    std::uniform_real_distribution<double> unif(-radius, radius);

    std::vector<std::vector<Cplx>> seeds = user_seeds;
    for (int k = 0; k < opt.random_seeds; ++k) {
        std::vector<Cplx> s(static_cast<std::size_t>(excitations));
        for (auto& z : s) z = Cplx{unif(rng), unif(rng)};
        seeds.push_back(std::move(s));
    }

    std::vector<BetheState> states;
    for (const auto& seed : seeds) {
        if (static_cast<int>(seed.size()) != excitations)
            throw config_error("solve_bethe: seed size does not match the excitation count");
        bool degenerate = false;
        for (std::size_t i = 0; i < seed.size() && !degenerate; ++i)
            for (std::size_t j = i + 1; j < seed.size(); ++j)
                if (std::abs(seed[i] - seed[j]) < kRootCollision) degenerate = true;
        if (degenerate) continue;
        const NewtonResult nr = newton_solve(system, seed, opt.newton);
        if (!nr.converged) continue;
        std::vector<Cplx> roots = detail::canonical_roots(nr.x, config.eta);
        try {
            detail::guard_roots(roots, config.eta);
        } catch (const domain_error&) {
            continue;
        }
        bool duplicate = false;
        for (const auto& st : states)
            if (detail::same_root_set(st.roots, roots, opt.dedup_tolerance)) duplicate = true;
        if (duplicate) continue;
        BetheState st;
        st.excitations = excitations;
        st.roots = roots;
        for (int i = 0; i < excitations; ++i)
            st.f_residuals.push_back(std::abs(bethe_f(i, roots, config, bnd)));
        st.state = bethe_vector(roots, config, bnd);
        st.zero_vector = max_abs(st.state) < 1e-8;
        states.push_back(std::move(st));
    }
    std::sort(states.begin(), states.end(), [](const BetheState& a, const BetheState& b) {
        for (std::size_t i = 0; i < a.roots.size(); ++i) {
            if (a.roots[i].real() != b.roots[i].real()) return a.roots[i].real() < b.roots[i].real();
            if (a.roots[i].imag() != b.roots[i].imag()) return a.roots[i].imag() < b.roots[i].imag();
        }
        return false;
    });
    return states;
}

}  // namespace openbethe
