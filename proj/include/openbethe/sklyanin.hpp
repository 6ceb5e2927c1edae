#pragma once

#include <array>
#include <string>
#include <vector>

#include "openbethe/boundary.hpp"
#include "openbethe/monodromy.hpp"
#include "openbethe/types.hpp"

namespace openbethe {

/// Entries of the double-row monodromy T(l) K-(l) T~(l) plus the shifted
/// operator D^ = D - eta/(2l+eta) A.
struct SklyaninBlocks {
    Matrix a, b, c, d, d_hat;
    Cplx lambda;
};

namespace detail {

inline void guard_sklyanin_point(Cplx lambda, const ChainConfig& config) {
    config.guard_poles(lambda);
    config.guard_poles_reversed(lambda);
    if (std::abs(2.0 * lambda + config.eta) < kPoleGuard)
        throw domain_error("sklyanin: singular point 2*lambda + eta = 0");
}

}  // namespace detail

/// Double-row monodromy as the literal triple product T K- T~, blocks in the
/// auxiliary space.
inline SklyaninBlocks sklyanin_monodromy(Cplx lambda, const ChainConfig& config, const TriangularBoundary& bnd) {
    detail::guard_sklyanin_point(lambda, config);
    const Matrix t = monodromy_T(lambda, config).full();
    const Matrix tt = monodromy_T_tilde(lambda, config).full();
    const Matrix kf = kron(bnd.k_minus(lambda), Matrix::Identity(config.hilbert_dim(), config.hilbert_dim()));
    const MonodromyBlocks mb = MonodromyBlocks::split(t * kf * tt);
    SklyaninBlocks out{mb.a, mb.b, mb.c, mb.d, Matrix(), lambda};
    out.d_hat = out.d - config.eta / (2.0 * lambda + config.eta) * out.a;
    return out;
}

/// Vacuum eigenvalue of the A-entry: alpha(l) = (xi- - l nu-) a(l) a~(l).
inline Cplx vacuum_alpha(Cplx lambda, const ChainConfig& config, const TriangularBoundary& bnd) {
    return (bnd.xi_minus - lambda * bnd.nu_minus) * vacuum_a(lambda, config) * vacuum_a_tilde(lambda, config);
}

/// Vacuum eigenvalue of D^: ((xi- + l nu-) - eta/(2l+eta)(xi- - l nu-)) d(l) d~(l).
inline Cplx vacuum_delta_hat(Cplx lambda, const ChainConfig& config, const TriangularBoundary& bnd) {
    const Cplx e = config.eta;
    return ((bnd.xi_minus + lambda * bnd.nu_minus) -
            e / (2.0 * lambda + e) * (bnd.xi_minus - lambda * bnd.nu_minus)) *
           vacuum_d(lambda, config) * vacuum_d_tilde(lambda, config);
}

/// Vacuum eigenvalue of the unshifted D-entry.
inline Cplx vacuum_delta(Cplx lambda, const ChainConfig& config, const TriangularBoundary& bnd) {
    return vacuum_delta_hat(lambda, config, bnd) +
           config.eta / (2.0 * lambda + config.eta) * vacuum_alpha(lambda, config, bnd);
}

struct TransferKappas {
    Cplx k1, k2, k12;
};

/// Coefficients of t = k1 A + k2 D^ + k12 C.
inline TransferKappas transfer_kappas(Cplx lambda, Cplx eta, const TriangularBoundary& bnd) {
    TransferKappas k;
    k.k1 = 2.0 * (bnd.xi_plus + lambda * bnd.nu_plus) * (lambda + eta) / (2.0 * lambda + eta);
    k.k2 = bnd.xi_plus - (lambda + eta) * bnd.nu_plus;
    k.k12 = -bnd.psi_plus * (lambda + eta);
    return k;
}

/// Open transfer matrix t(l) = tr_0 ( K+(l) TK-T~(l) ).
inline Matrix transfer_matrix(Cplx lambda, const ChainConfig& config, const TriangularBoundary& bnd) {
    const SklyaninBlocks s = sklyanin_monodromy(lambda, config, bnd);
    const Matrix kp = bnd.k_plus(lambda, config.eta);
    return kp(0, 0) * s.a + kp(0, 1) * s.c + kp(1, 0) * s.b + kp(1, 1) * s.d;
}

/// The same transfer matrix through the kappa-decomposition; equal to
/// transfer_matrix entrywise and kept as a second construction route.
inline Matrix transfer_matrix_kappa(Cplx lambda, const ChainConfig& config, const TriangularBoundary& bnd) {
    const SklyaninBlocks s = sklyanin_monodromy(lambda, config, bnd);
    const TransferKappas k = transfer_kappas(lambda, config.eta, bnd);
    return k.k1 * s.a + k.k2 * s.d_hat + k.k12 * s.c;
}

/// Vacuum transfer eigenvalue Lambda_0 = k1 alpha + k2 delta^.
inline Cplx vacuum_transfer_eigenvalue(Cplx lambda, const ChainConfig& config, const TriangularBoundary& bnd) {
    const TransferKappas k = transfer_kappas(lambda, config.eta, bnd);
    return k.k1 * vacuum_alpha(lambda, config, bnd) + k.k2 * vacuum_delta_hat(lambda, config, bnd);
}

/// Sklyanin determinant, resolved form:
/// 2l D^(l - eta/2) A(l + eta/2) - (2l + eta) B(l - eta/2) C(l + eta/2).
inline Matrix sklyanin_determinant(Cplx lambda, const ChainConfig& config, const TriangularBoundary& bnd) {
    const Cplx e = config.eta;
    const SklyaninBlocks lo = sklyanin_monodromy(lambda - e / 2.0, config, bnd);
    const SklyaninBlocks hi = sklyanin_monodromy(lambda + e / 2.0, config, bnd);
    return 2.0 * lambda * lo.d_hat * hi.a - (2.0 * lambda + e) * lo.b * hi.c;
}

/// Double-row monodromy as a labeled operator on [aux(idx), sites].
inline Operator sklyanin_operator(Cplx lambda, const ChainConfig& config, const TriangularBoundary& bnd,
                                  int aux_index = 0) {
    const SklyaninBlocks s = sklyanin_monodromy(lambda, config, bnd);
    MonodromyBlocks mb{s.a, s.b, s.c, s.d};
    return mb.as_operator(config, aux_index);
}

/// Sklyanin determinant from the antisymmetrizer trace form
/// tr_00' P-_00' T_0(l-eta/2) R_00'(2l) T_0'(l+eta/2); equals the resolved form.
inline Matrix sklyanin_determinant_trace(Cplx lambda, const ChainConfig& config, const TriangularBoundary& bnd) {
    const Cplx e = config.eta;
    const auto spaces = detail::two_aux_spaces(config);
    const Matrix t0 =
        promote(sklyanin_operator(lambda - e / 2.0, config, bnd, 0), spaces).mat;
    const Matrix t0p =
        promote(sklyanin_operator(lambda + e / 2.0, config, bnd, 1), spaces).mat;
    const Matrix p_minus = (Matrix::Identity(4, 4) - permutation_matrix(2)) / 2.0;
    const Matrix pbig = promote(Operator{p_minus, {aux_space(0), aux_space(1)}}, spaces).mat;
    const Matrix rbig = detail::r_on_two_aux(2.0 * lambda, config);
    Operator prod{pbig * t0 * rbig * t0p, spaces};
    return partial_trace(partial_trace(prod, aux_space(0)), aux_space(1)).mat;
}

/// Residual of the exchange relation
/// R_00'(l-m) T_0(l) R_0'0(l+m) T_0'(m) = T_0'(m) R_00'(l+m) T_0(l) R_0'0(l-m)
/// on aux (x) aux' (x) H.
inline double exchange_residual(Cplx lambda, Cplx mu, const ChainConfig& config, const TriangularBoundary& bnd) {
    const auto spaces = detail::two_aux_spaces(config);
    const Matrix t0 = promote(sklyanin_operator(lambda, config, bnd, 0), spaces).mat;
    const Matrix t0p = promote(sklyanin_operator(mu, config, bnd, 1), spaces).mat;
    const auto r = [&](Cplx x) { return detail::r_on_two_aux(x, config); };
    const Matrix lhs = r(lambda - mu) * t0 * r(lambda + mu) * t0p;
    const Matrix rhs = t0p * r(lambda + mu) * t0 * r(lambda - mu);
    return rel_residual(lhs, rhs);
}

/// One named residual per exchange-algebra relation.
struct AppendixBReport {
    struct Entry {
        std::string name;
        double residual;
    };
    std::vector<Entry> entries;

    double max_residual() const {
        double r = 0.0;
        for (const auto& e : entries) r = std::max(r, e.residual);
        return r;
    }
};

/// Verify the ten exchange-algebra consequences used by the Bethe-vector
/// construction: six operator relations at (lambda, mu) and three
/// pseudo-vacuum relations at (lambda; mu1, mu2), plus [C,C]. In the
/// C B B relation the factors mixing the two roots run over mu_{3-i}
/// (the printed form fixed a stray mu_2 index), and the last two-root term
/// carries delta^(mu_i).
inline AppendixBReport verify_appendix_b(Cplx lambda, Cplx mu, Cplx mu1, Cplx mu2, const ChainConfig& config,
                                         const TriangularBoundary& bnd) {
    if (std::abs(mu1 - mu2) < kPoleGuard)
        throw domain_error("verify_appendix_b: mu1 and mu2 must be distinct");
    const Cplx e = config.eta;
    const SklyaninBlocks sl = sklyanin_monodromy(lambda, config, bnd);
    const SklyaninBlocks sm = sklyanin_monodromy(mu, config, bnd);
    AppendixBReport rep;
    const auto add = [&](std::string name, double r) { rep.entries.push_back({std::move(name), r}); };

    add("b-commute", rel_residual(sl.b * sm.b, sm.b * sl.b));
    add("c-commute", rel_residual(sl.c * sm.c, sm.c * sl.c));

    const auto rat_a = [&](Cplx l, Cplx m) {
        return (l + m) * (l - m - e) / ((l - m) * (l + m + e));
    };
    const auto rat_d = [&](Cplx l, Cplx m) {
        return (l - m + e) * (l + m + 2.0 * e) / ((l - m) * (l + m + e));
    };

    add("a-b", rel_residual(sl.a * sm.b,
                            rat_a(lambda, mu) * sm.b * sl.a +
                                (2.0 * e * mu) / ((lambda - mu) * (2.0 * mu + e)) * sl.b * sm.a -
                                e / (lambda + mu + e) * sl.b * sm.d_hat));
    add("dhat-b", rel_residual(sl.d_hat * sm.b,
                               rat_d(lambda, mu) * sm.b * sl.d_hat -
                                   (2.0 * e * (lambda + e)) / ((lambda - mu) * (2.0 * lambda + e)) * sl.b * sm.d_hat +
                                   (4.0 * e * mu * (lambda + e)) /
                                       ((2.0 * lambda + e) * (2.0 * mu + e) * (lambda + mu + e)) *
                                       sl.b * sm.a));
    add("c-b", rel_residual(
                   sl.c * sm.b - sm.b * sl.c,
                   (2.0 * e * lambda * (lambda - mu + e)) /
                           ((lambda - mu) * (lambda + mu + e) * (2.0 * lambda + e)) * sm.a * sl.a -
                       (2.0 * e * e * lambda) / ((lambda - mu) * (2.0 * lambda + e) * (2.0 * mu + e)) * sl.a * sm.a +
                       (e * (lambda + mu)) / ((lambda - mu) * (lambda + mu + e)) * sm.a * sl.d_hat -
                       (2.0 * e * lambda) / ((lambda - mu) * (2.0 * lambda + e)) * sl.a * sm.d_hat -
                       (e * e) / ((lambda + mu + e) * (2.0 * mu + e)) * sl.d_hat * sm.a -
                       e / (lambda + mu + e) * sl.d_hat * sm.d_hat));
    add("a-a", rel_residual(sl.a * sm.a - sm.a * sl.a,
                            e / (lambda + mu + e) * (sm.b * sl.c - sl.b * sm.c)));
    add("a-dhat", rel_residual(sl.a * sm.d_hat - sm.d_hat * sl.a,
                               (2.0 * e * (mu + e)) / ((lambda - mu) * (2.0 * mu + e)) *
                                   (sl.b * sm.c - sm.b * sl.c)));
    add("dhat-dhat", rel_residual(sl.d_hat * sm.d_hat - sm.d_hat * sl.d_hat,
                                  (4.0 * e * (lambda + e) * (mu + e)) /
                                      ((2.0 * lambda + e) * (2.0 * mu + e) * (lambda + mu + e)) *
                                      (sl.b * sm.c - sm.b * sl.c)));

    // Pseudo-vacuum relations at (lambda; mu1, mu2).
    const Vector om = pseudo_vacuum(config);
    const SklyaninBlocks s1 = sklyanin_monodromy(mu1, config, bnd);
    const SklyaninBlocks s2 = sklyanin_monodromy(mu2, config, bnd);
    const std::array<const SklyaninBlocks*, 2> ss{&s1, &s2};
    const std::array<Cplx, 2> mus{mu1, mu2};
    const auto al = [&](Cplx x) { return vacuum_alpha(x, config, bnd); };
    const auto dh = [&](Cplx x) { return vacuum_delta_hat(x, config, bnd); };
    const Vector bb = s1.b * (s2.b * om);

    Vector rhs = rat_a(lambda, mu1) * rat_a(lambda, mu2) * al(lambda) * bb;
    for (int i = 0; i < 2; ++i) {
        const Cplx mi = mus[static_cast<std::size_t>(i)], mo = mus[static_cast<std::size_t>(1 - i)];
        const Vector blbo = sl.b * (ss[static_cast<std::size_t>(1 - i)]->b * om);
        rhs += (2.0 * e * mi) / ((2.0 * mi + e) * (lambda - mi)) * rat_a(mi, mo) * al(mi) * blbo;
        rhs -= e / (lambda + mi + e) * rat_d(mi, mo) * dh(mi) * blbo;
    }
    add("a-bb-vacuum", rel_residual(Vector(sl.a * bb), rhs));

    rhs = rat_d(lambda, mu1) * rat_d(lambda, mu2) * dh(lambda) * bb;
    for (int i = 0; i < 2; ++i) {
        const Cplx mi = mus[static_cast<std::size_t>(i)], mo = mus[static_cast<std::size_t>(1 - i)];
        const Vector blbo = sl.b * (ss[static_cast<std::size_t>(1 - i)]->b * om);
        rhs -= (2.0 * e * (lambda + e)) / ((2.0 * lambda + e) * (lambda - mi)) * rat_d(mi, mo) * dh(mi) * blbo;
        rhs += (4.0 * e * mi * (lambda + e)) / ((2.0 * lambda + e) * (2.0 * mi + e) * (lambda + mi + e)) *
               rat_a(mi, mo) * al(mi) * blbo;
    }
    add("dhat-bb-vacuum", rel_residual(Vector(sl.d_hat * bb), rhs));

    rhs = Vector::Zero(om.size());
    for (int i = 0; i < 2; ++i) {
        const Cplx mi = mus[static_cast<std::size_t>(i)], mo = mus[static_cast<std::size_t>(1 - i)];
        const Vector bo = ss[static_cast<std::size_t>(1 - i)]->b * om;
        const Cplx c1 = (4.0 * mi * lambda * e) / ((2.0 * lambda + e) * (2.0 * mi + e) * (lambda + mi + e)) *
                        rat_a(lambda, mo) * rat_a(mi, mo) * al(lambda) * al(mi);
        const Cplx c2 = (2.0 * lambda * e) / ((lambda - mi) * (2.0 * lambda + e)) * rat_a(lambda, mo) *
                        rat_d(mi, mo) * al(lambda) * dh(mi);
        const Cplx c3 = (2.0 * mi * e) / ((lambda - mi) * (2.0 * mi + e)) * rat_d(lambda, mo) * rat_a(mi, mo) *
                        al(mi) * dh(lambda);
        const Cplx c4 = e / (lambda + mi + e) * rat_d(lambda, mo) * rat_d(mi, mo) * dh(lambda) * dh(mi);
        rhs += (c1 - c2 + c3 - c4) * bo;
    }
    {
        const Vector bl = sl.b * om;
        const Cplx u1 = (8.0 * e * e * mu1 * mu2 * (mu1 + mu2) * (lambda * (lambda + e) - mu1 * mu2)) /
                        ((lambda - mu1) * (lambda - mu2) * (2.0 * mu1 + e) * (2.0 * mu2 + e) * (lambda + mu1 + e) *
                         (lambda + mu2 + e) * (mu1 + mu2 + e)) *
                        al(mu1) * al(mu2);
        const Cplx u2 = (4.0 * e * e * mu1 * (mu2 - mu1 + e) * (lambda * (lambda + e) + mu1 * (mu2 + e))) /
                        ((lambda - mu1) * (lambda - mu2) * (2.0 * mu1 + e) * (mu2 - mu1) * (lambda + mu1 + e) *
                         (lambda + mu2 + e)) *
                        al(mu1) * dh(mu2);
        const Cplx u3 = (4.0 * e * e * mu2 * (mu1 - mu2 + e) * (lambda * (lambda + e) + mu2 * (mu1 + e))) /
                        ((lambda - mu1) * (lambda - mu2) * (2.0 * mu2 + e) * (mu1 - mu2) * (lambda + mu1 + e) *
                         (lambda + mu2 + e)) *
                        al(mu2) * dh(mu1);
        const Cplx u4 = (2.0 * e * e * (mu1 + mu2 + 2.0 * e) *
                         (e * e - lambda * lambda + mu1 * mu2 + e * (mu1 + mu2 - lambda))) /
                        ((lambda - mu1) * (lambda - mu2) * (lambda + mu1 + e) * (lambda + mu2 + e) *
                         (mu1 + mu2 + e)) *
                        dh(mu1) * dh(mu2);
        rhs += (u1 - u2 - u3 - u4) * bl;
    }
    add("c-bb-vacuum", rel_residual(Vector(sl.c * bb), rhs));

    return rep;
}

}  // namespace openbethe
