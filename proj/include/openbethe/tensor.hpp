#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "openbethe/types.hpp"

namespace openbethe {

/// A spin-s representation, dimension 2s+1. s must be a non-negative half-integer.
struct SpinRep {
    double s;

    explicit SpinRep(double spin) : s(spin) {
        const double twos = 2.0 * spin;
        if (spin < 0.0 || std::abs(twos - std::round(twos)) > 1e-12)
            throw domain_error("SpinRep: spin must be a non-negative half-integer");
    }
    Eigen::Index dimension() const { return static_cast<Eigen::Index>(std::lround(2.0 * s)) + 1; }
};

struct SpinTriple {
    Matrix s3, splus, sminus;
};

/// Weight-basis spin matrices, highest S3 eigenvalue first, so S+ is strictly
/// upper triangular and the first basis vector is the highest-weight vector.
inline SpinTriple spin_matrices(const SpinRep& rep) {
    const Eigen::Index d = rep.dimension();
    const double s = rep.s;
    SpinTriple t;
    t.s3 = Matrix::Zero(d, d);
    t.splus = Matrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) t.s3(k, k) = s - static_cast<double>(k);
    for (Eigen::Index k = 1; k < d; ++k) {
        const double m = s - static_cast<double>(k);
        t.splus(k - 1, k) = std::sqrt((s - m) * (s + m + 1.0));
    }
    t.sminus = t.splus.transpose();
    return t;
}

enum class SpaceKind { auxiliary, site };

/// One tensor factor of a composite space. Auxiliary spaces are 2-dimensional,
/// site spaces carry the local spin dimension 2s+1.
struct Space {
    SpaceKind kind;
    int index;
    Eigen::Index dim;

    friend bool operator==(const Space& a, const Space& b) {
        return a.kind == b.kind && a.index == b.index && a.dim == b.dim;
    }
};

inline Space aux_space(int index) { return Space{SpaceKind::auxiliary, index, 2}; }
inline Space site_space(int index, Eigen::Index dim) { return Space{SpaceKind::site, index, dim}; }

/// Dense operator tagged with the ordered list of tensor factors it acts on.
/// The factor order is the row/column multi-index order of `mat`.
struct Operator {
    Matrix mat;
    std::vector<Space> spaces;

    Eigen::Index dim() const { return mat.rows(); }

    Operator() = default;
    Operator(Matrix m, std::vector<Space> sp) : mat(std::move(m)), spaces(std::move(sp)) {
        Eigen::Index d = 1;
        for (const auto& s : spaces) d *= s.dim;
        if (mat.rows() != d || mat.cols() != d)
            throw domain_error("Operator: matrix dimension does not match space list");
    }
};

inline Operator identity_operator(std::vector<Space> spaces) {
    Eigen::Index d = 1;
    for (const auto& s : spaces) d *= s.dim;
    return Operator{Matrix::Identity(d, d), std::move(spaces)};
}

inline constexpr std::int64_t kKronDimensionCap = std::int64_t{1} << 20;

/// Plain Kronecker product of matrices, row-major factor order.
inline Matrix kron(const Matrix& a, const Matrix& b, std::int64_t dimension_cap = kKronDimensionCap) {
    if (static_cast<std::int64_t>(a.rows()) * b.rows() > dimension_cap ||
        static_cast<std::int64_t>(a.cols()) * b.cols() > dimension_cap)
        throw domain_error("kron: total dimension exceeds cap");
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Tensor product; space lists concatenate.
inline Operator kron(const Operator& a, const Operator& b) {
    std::vector<Space> spaces = a.spaces;
    spaces.insert(spaces.end(), b.spaces.begin(), b.spaces.end());
    return Operator{kron(a.mat, b.mat), std::move(spaces)};
}

namespace detail {

inline std::vector<Eigen::Index> strides_of(const std::vector<Space>& spaces) {
    std::vector<Eigen::Index> st(spaces.size(), 1);
    for (std::size_t k = spaces.size(); k-- > 1;) st[k - 1] = st[k] * spaces[k].dim;
    return st;
}

inline std::size_t find_space(const std::vector<Space>& spaces, const Space& s) {
    const auto it = std::find(spaces.begin(), spaces.end(), s);
    if (it == spaces.end()) throw domain_error("unknown space label");
    return static_cast<std::size_t>(it - spaces.begin());
}

}  // namespace detail

/// Reorder tensor factors. `order` must be a permutation of op.spaces.
inline Operator permute_spaces(const Operator& op, const std::vector<Space>& order) {
    if (order.size() != op.spaces.size())
        throw domain_error("permute_spaces: order is not a permutation of the space list");
    std::vector<std::size_t> pos(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) pos[k] = detail::find_space(op.spaces, order[k]);
    {
        auto sorted = pos;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t k = 0; k < sorted.size(); ++k)
            if (sorted[k] != k) throw domain_error("permute_spaces: order is not a permutation");
    }
    const auto old_st = detail::strides_of(op.spaces);
    const auto new_st = detail::strides_of(order);
    const Eigen::Index d = op.dim();
    std::vector<Eigen::Index> map(static_cast<std::size_t>(d));
    const std::size_t nf = order.size();
    for (Eigen::Index idx = 0; idx < d; ++idx) {
        Eigen::Index rest = idx, old_idx = 0;
        for (std::size_t k = 0; k < nf; ++k) {
            const Eigen::Index digit = rest / new_st[k];
            rest %= new_st[k];
            old_idx += digit * old_st[pos[k]];
        }
        map[static_cast<std::size_t>(idx)] = old_idx;
    }
    Matrix out(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c)
            out(r, c) = op.mat(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]);
    return Operator{std::move(out), order};
}

/// Embed op into the larger ordered factor list `full` (identity on the new factors).
inline Operator promote(const Operator& op, const std::vector<Space>& full) {
    std::vector<Space> missing;
    for (const auto& s : full)
        if (std::find(op.spaces.begin(), op.spaces.end(), s) == op.spaces.end()) missing.push_back(s);
    Operator big = op;
    if (!missing.empty()) big = kron(op, identity_operator(missing));
    return permute_spaces(big, full);
}

/// Trace over one named factor; the factor disappears from the space list.
inline Operator partial_trace(const Operator& op, const Space& over) {
    const std::size_t k = detail::find_space(op.spaces, over);
    std::vector<Space> order;
    order.push_back(op.spaces[k]);
    for (std::size_t j = 0; j < op.spaces.size(); ++j)
        if (j != k) order.push_back(op.spaces[j]);
    const Operator forward = permute_spaces(op, order);
    const Eigen::Index dk = over.dim;
    const Eigen::Index rest = op.dim() / dk;
    Matrix out = Matrix::Zero(rest, rest);
    for (Eigen::Index i = 0; i < dk; ++i)
        out += forward.mat.block(i * rest, i * rest, rest, rest);
    order.erase(order.begin());
    return Operator{std::move(out), std::move(order)};
}

/// <i| . |j> contraction of a 2-dimensional auxiliary factor.
inline Operator aux_block(const Operator& op, const Space& aux, int i, int j) {
    if (aux.dim != 2) throw domain_error("aux_block: auxiliary factor must be 2-dimensional");
    const std::size_t k = detail::find_space(op.spaces, aux);
    std::vector<Space> order;
    order.push_back(op.spaces[k]);
    for (std::size_t m = 0; m < op.spaces.size(); ++m)
        if (m != k) order.push_back(op.spaces[m]);
    const Operator forward = permute_spaces(op, order);
    const Eigen::Index rest = op.dim() / 2;
    order.erase(order.begin());
    return Operator{forward.mat.block(i * rest, j * rest, rest, rest), std::move(order)};
}

/// Permutation operator P(x (x) y) = y (x) x on C^d (x) C^d.
inline Matrix permutation_matrix(Eigen::Index d) {
    Matrix p = Matrix::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            p(j * d + i, i * d + j) = 1.0;
    return p;
}

}  // namespace openbethe
