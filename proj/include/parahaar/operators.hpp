// Paraproducts, multiplication operators, Haar multipliers, compositions,
// and the expansion / sign-absorption rewrites.
#pragma once

#include "parahaar/dyadic.hpp"
#include "parahaar/symbols.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace parahaar {

// Dense-operator working depths: 2^L x 2^L matrices up to 4096^2.
inline void check_dense_depth(int depth, const char* what) {
    if (depth > 12)
        throw std::invalid_argument(std::string(what) + ": dense operators limited to depth <= 12, got " +
                                    std::to_string(depth));
}

// Total sign pattern on D_L.
class SignAssignment {
public:
    explicit SignAssignment(int depth)
        : depth_(depth), signs_((std::size_t{1} << depth) - 1, +1) {}

    static SignAssignment all_plus(int depth) { return SignAssignment(depth); }

    int depth() const { return depth_; }
    std::int64_t size() const { return static_cast<std::int64_t>(signs_.size()); }

    int get_index(std::int64_t i) const { return signs_[static_cast<std::size_t>(i)]; }
    void set_index(std::int64_t i, int s) {
        if (s != 1 && s != -1) throw std::invalid_argument("SignAssignment: signs are +1 or -1");
        signs_[static_cast<std::size_t>(i)] = static_cast<signed char>(s);
    }

    int get(const DyadicInterval& I) const {
        return get_index(((std::int64_t{1} << I.level) - 1) + I.pos);
    }
    void set(const DyadicInterval& I, int s) {
        set_index(((std::int64_t{1} << I.level) - 1) + I.pos, s);
    }

    SignAssignment negated() const {
        SignAssignment out(depth_);
        for (std::int64_t i = 0; i < size(); ++i) out.set_index(i, -get_index(i));
        return out;
    }

private:
    int depth_;
    std::vector<signed char> signs_;
};

// Dense real operator on grid value vectors.  The inner-product weight is
// uniform, so the adjoint is the plain transpose.
class LinearOperator {
public:
    LinearOperator(int depth, Eigen::MatrixXd m) : depth_(depth), m_(std::move(m)) {
        check_dense_depth(depth, "LinearOperator");
        const auto n = std::int64_t{1} << depth;
        if (m_.rows() != n || m_.cols() != n)
            throw std::invalid_argument("LinearOperator: matrix must be 2^L x 2^L");
    }

    static LinearOperator zero(const TruncatedGrid& grid) {
        check_dense_depth(grid.depth(), "LinearOperator");
        return LinearOperator(grid.depth(), Eigen::MatrixXd::Zero(grid.cell_count(), grid.cell_count()));
    }
    static LinearOperator identity(const TruncatedGrid& grid) {
        check_dense_depth(grid.depth(), "LinearOperator");
        return LinearOperator(grid.depth(), Eigen::MatrixXd::Identity(grid.cell_count(), grid.cell_count()));
    }

    int depth() const { return depth_; }
    const Eigen::MatrixXd& matrix() const { return m_; }
    Eigen::MatrixXd& matrix() { return m_; }

    GridFunction apply(const GridFunction& f) const {
        if (f.cells() != m_.cols()) throw std::invalid_argument("LinearOperator::apply: resolution mismatch");
        return GridFunction(m_ * f.values);
    }

    LinearOperator adjoint() const { return LinearOperator(depth_, m_.transpose()); }

    friend LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) {
        if (a.depth_ != b.depth_) throw std::invalid_argument("compose: depth mismatch");
        return LinearOperator(a.depth_, a.m_ * b.m_);
    }
    friend LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
        if (a.depth_ != b.depth_) throw std::invalid_argument("operator+: depth mismatch");
        return LinearOperator(a.depth_, a.m_ + b.m_);
    }
    friend LinearOperator operator-(const LinearOperator& a, const LinearOperator& b) {
        if (a.depth_ != b.depth_) throw std::invalid_argument("operator-: depth mismatch");
        return LinearOperator(a.depth_, a.m_ - b.m_);
    }

private:
    int depth_;
    Eigen::MatrixXd m_;
};

// Deterministic part plus sign-indexed pieces: T(sigma) = A0 + sum sigma_J A_J.
// Pieces produced by paraproduct machinery are rank one (u (x) v with the grid
// weight folded in at materialization); arbitrary dense pieces are supported
// for generic randomized operators.
class RandomizedOperator {
public:
    struct Piece {
        DyadicInterval index;
        bool rank_one = true;
        Eigen::VectorXd u, v;  // rank one: A = 2^-L u v^T
        Eigen::MatrixXd dense;
    };

    explicit RandomizedOperator(int depth) : depth_(depth) {
        check_dense_depth(depth, "RandomizedOperator");
    }

    int depth() const { return depth_; }
    std::int64_t cells() const { return std::int64_t{1} << depth_; }
    double weight() const { return std::ldexp(1.0, -depth_); }

    void set_base(LinearOperator a0) {
        if (a0.depth() != depth_) throw std::invalid_argument("RandomizedOperator: base depth mismatch");
        base_ = std::move(a0);
    }
    const std::optional<LinearOperator>& base() const { return base_; }

    void add_rank_one_piece(const DyadicInterval& index, Eigen::VectorXd u, Eigen::VectorXd v) {
        check_new_index(index);
        if (u.size() != cells() || v.size() != cells())
            throw std::invalid_argument("RandomizedOperator: piece vector size mismatch");
        pieces_.push_back(Piece{index, true, std::move(u), std::move(v), {}});
    }

    void add_dense_piece(const DyadicInterval& index, Eigen::MatrixXd m) {
        check_new_index(index);
        if (m.rows() != cells() || m.cols() != cells())
            throw std::invalid_argument("RandomizedOperator: piece matrix size mismatch");
        pieces_.push_back(Piece{index, false, {}, {}, std::move(m)});
    }

    std::size_t piece_count() const { return pieces_.size(); }
    const Piece& piece(std::size_t i) const { return pieces_.at(i); }

    LinearOperator piece_operator(std::size_t i) const {
        const Piece& p = pieces_.at(i);
        if (p.rank_one) return LinearOperator(depth_, weight() * (p.u * p.v.transpose()));
        return LinearOperator(depth_, p.dense);
    }

    LinearOperator realize(const SignAssignment& sigma) const {
        if (sigma.depth() != depth_) throw std::invalid_argument("realize: sign depth mismatch");
        Eigen::MatrixXd m = base_ ? base_->matrix()
                                  : Eigen::MatrixXd::Zero(cells(), cells()).eval();
        for (const Piece& p : pieces_) {
            const double s = sigma.get(p.index);
            if (p.rank_one)
                m.noalias() += (s * weight()) * (p.u * p.v.transpose());
            else
                m += s * p.dense;
        }
        return LinearOperator(depth_, std::move(m));
    }

    RandomizedOperator adjoint() const {
        RandomizedOperator out(depth_);
        if (base_) out.set_base(base_->adjoint());
        for (const Piece& p : pieces_) {
            if (p.rank_one)
                out.add_rank_one_piece(p.index, p.v, p.u);
            else
                out.add_dense_piece(p.index, p.dense.transpose());
        }
        return out;
    }

    // Euclidean Gram sum A0^T A0 + sum_J A_J^T A_J; its top eigenvalue is the
    // squared second-moment norm (the 2^-L norm weights cancel in the
    // Rayleigh quotient).
    Eigen::MatrixXd gram() const {
        const auto n = cells();
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
        if (base_) g.noalias() += base_->matrix().transpose() * base_->matrix();
        std::int64_t m = 0;
        for (const Piece& p : pieces_)
            if (p.rank_one) ++m;
        if (m > 0) {
            Eigen::MatrixXd rows(m, n);
            std::int64_t r = 0;
            const double w = weight();
            for (const Piece& p : pieces_) {
                if (!p.rank_one) continue;
                rows.row(r++) = (w * p.u.norm()) * p.v.transpose();
            }
            g.noalias() += rows.transpose() * rows;
        }
        for (const Piece& p : pieces_)
            if (!p.rank_one) g.noalias() += p.dense.transpose() * p.dense;
        return g;
    }

private:
    void check_new_index(const DyadicInterval& index) {
        for (const Piece& p : pieces_)
            if (p.index == index)
                throw std::invalid_argument("RandomizedOperator: duplicate piece index " + to_string(index));
    }

    int depth_;
    std::optional<LinearOperator> base_;
    std::vector<Piece> pieces_;
};

// P^{eps,delta}_b = sum_I b_I h^eps_I (x) h^delta_I, optionally with fixed or
// i.i.d. random signs on the terms.
struct ParaproductSpec {
    int eps = 0;
    int delta = 0;
    CoefSequence symbol;
    bool randomized = false;
    std::optional<SignAssignment> fixed_signs;

    ParaproductSpec(int e, int d, CoefSequence sym) : eps(e), delta(d), symbol(std::move(sym)) {
        if ((eps != 0 && eps != 1) || (delta != 0 && delta != 1))
            throw std::invalid_argument("ParaproductSpec: exponents must be 0 or 1");
    }

    ParaproductSpec with_random_signs() const {
        ParaproductSpec out = *this;
        out.randomized = true;
        out.fixed_signs.reset();
        return out;
    }
    ParaproductSpec with_fixed_signs(SignAssignment s) const {
        ParaproductSpec out = *this;
        out.randomized = false;
        out.fixed_signs = std::move(s);
        return out;
    }

    void validate() const {
        if (randomized && fixed_signs)
            throw std::invalid_argument("ParaproductSpec: randomized and fixed_signs are mutually exclusive");
    }
};

namespace detail {

inline Eigen::VectorXd leg_vector(const TruncatedGrid& grid, const DyadicInterval& I, int kind) {
    return kind == 1 ? haar_one(grid, I).values : haar(grid, I).values;
}

}  // namespace detail

inline LinearOperator paraproduct(const TruncatedGrid& grid, const ParaproductSpec& spec) {
    spec.validate();
    if (spec.randomized) throw std::invalid_argument("paraproduct: spec is randomized; use randomized_paraproduct");
    if (spec.symbol.depth() != grid.depth())
        throw std::invalid_argument("paraproduct: symbol depth differs from grid depth");
    check_dense_depth(grid.depth(), "paraproduct");
    const auto n = grid.cell_count();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    const double w = grid.cell_width();
    for (std::int64_t i = 0; i < grid.interval_count(); ++i) {
        const double b = spec.symbol.at_index(i);
        if (b == 0.0) continue;
        const DyadicInterval I = grid.interval_at(i);
        const double s = spec.fixed_signs ? spec.fixed_signs->get(I) : 1.0;
        m.noalias() += (s * b * w) * (detail::leg_vector(grid, I, spec.eps) *
                                      detail::leg_vector(grid, I, spec.delta).transpose());
    }
    return LinearOperator(grid.depth(), std::move(m));
}

inline RandomizedOperator randomized_paraproduct(const TruncatedGrid& grid, const ParaproductSpec& spec) {
    spec.validate();
    if (!spec.randomized)
        throw std::invalid_argument("randomized_paraproduct: spec is not randomized");
    if (spec.symbol.depth() != grid.depth())
        throw std::invalid_argument("randomized_paraproduct: symbol depth differs from grid depth");
    RandomizedOperator out(grid.depth());
    for (std::int64_t i = 0; i < grid.interval_count(); ++i) {
        const double b = spec.symbol.at_index(i);
        if (b == 0.0) continue;
        const DyadicInterval I = grid.interval_at(i);
        out.add_rank_one_piece(I, detail::leg_vector(grid, I, spec.eps),
                               b * detail::leg_vector(grid, I, spec.delta));
    }
    return out;
}

inline LinearOperator multiplication(const TruncatedGrid& grid, const GridFunction& b) {
    check_resolution(grid, b, "multiplication");
    check_dense_depth(grid.depth(), "multiplication");
    return LinearOperator(grid.depth(), Eigen::MatrixXd(b.values.asDiagonal()));
}

inline LinearOperator haar_multiplier(const TruncatedGrid& grid, const SignAssignment& sigma) {
    if (sigma.depth() != grid.depth()) throw std::invalid_argument("haar_multiplier: sign depth mismatch");
    check_dense_depth(grid.depth(), "haar_multiplier");
    const auto n = grid.cell_count();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    const double w = grid.cell_width();
    for (std::int64_t i = 0; i < grid.interval_count(); ++i) {
        const Eigen::VectorXd h = haar(grid, grid.interval_at(i)).values;
        m.noalias() += (sigma.get_index(i) * w) * (h * h.transpose());
    }
    return LinearOperator(grid.depth(), std::move(m));
}

inline RandomizedOperator haar_multiplier_randomized(const TruncatedGrid& grid) {
    RandomizedOperator out(grid.depth());
    for (std::int64_t i = 0; i < grid.interval_count(); ++i) {
        const Eigen::VectorXd h = haar(grid, grid.interval_at(i)).values;
        out.add_rank_one_piece(grid.interval_at(i), h, h);
    }
    return out;
}

inline LinearOperator compose(const LinearOperator& outer, const LinearOperator& inner) {
    return outer * inner;
}

inline RandomizedOperator compose(const LinearOperator& outer, const RandomizedOperator& inner) {
    if (outer.depth() != inner.depth()) throw std::invalid_argument("compose: depth mismatch");
    RandomizedOperator out(inner.depth());
    if (inner.base()) out.set_base(outer * *inner.base());
    for (std::size_t i = 0; i < inner.piece_count(); ++i) {
        const auto& p = inner.piece(i);
        if (p.rank_one)
            out.add_rank_one_piece(p.index, outer.matrix() * p.u, p.v);
        else
            out.add_dense_piece(p.index, outer.matrix() * p.dense);
    }
    return out;
}

inline RandomizedOperator compose(const RandomizedOperator& outer, const LinearOperator& inner) {
    if (outer.depth() != inner.depth()) throw std::invalid_argument("compose: depth mismatch");
    RandomizedOperator out(outer.depth());
    if (outer.base()) out.set_base(*outer.base() * inner);
    for (std::size_t i = 0; i < outer.piece_count(); ++i) {
        const auto& p = outer.piece(i);
        if (p.rank_one)
            out.add_rank_one_piece(p.index, p.u, inner.matrix().transpose() * p.v);
        else
            out.add_dense_piece(p.index, p.dense * inner.matrix());
    }
    return out;
}

inline RandomizedOperator compose(const RandomizedOperator&, const RandomizedOperator&) {
    throw std::invalid_argument("compose: composition of two independent randomized factors is unsupported");
}

// P^{eps2,0}_b T_sigma P = P^{sigma,eps2,0}_b P: the multiplier acts
// diagonally on the outer factor's zero input leg, so the signs migrate onto
// the outer paraproduct.  Requires delta_outer = 0.
inline RandomizedOperator absorb_signs(const TruncatedGrid& grid, const ParaproductSpec& outer,
                                       const ParaproductSpec& inner) {
    if (outer.delta != 0)
        throw std::invalid_argument("absorb_signs: rule needs the outer paraproduct's inner leg to be a Haar (delta = 0)");
    ParaproductSpec inner_fixed = inner;
    inner_fixed.randomized = false;
    inner_fixed.fixed_signs.reset();
    return compose(randomized_paraproduct(grid, outer.with_random_signs()),
                   paraproduct(grid, inner_fixed));
}

// M_b phi = P^{0,1}_{b0} phi + P^{1,0}_{b0} phi + P^{0,0}_{b1} phi + <b><phi> 1.
// The scalar correction vanishes for mean-zero b.
struct MultiplicationExpansion {
    std::array<ParaproductSpec, 3> parts;
    double mean_correction;  // <b>
};

inline MultiplicationExpansion expand_multiplication(const TruncatedGrid& grid, const GridFunction& b) {
    check_resolution(grid, b, "expand_multiplication");
    CoefSequence b0 = coeffs_from_function(grid, b, 0);
    CoefSequence b1 = coeffs_from_function(grid, b, 1);
    return MultiplicationExpansion{
        {ParaproductSpec(0, 1, b0), ParaproductSpec(1, 0, b0), ParaproductSpec(0, 0, b1)},
        mean(grid, b)};
}

}  // namespace parahaar
