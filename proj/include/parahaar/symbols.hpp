// Symbol sequences b = {b_I} on D_L and the Carleson-type functionals that
// appear on the right-hand side of every characterization.
#pragma once

#include "parahaar/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace parahaar {

// Real-valued map on D_L, stored densely in canonical (heap) order.  A
// missing entry and a stored zero are the same thing.
class CoefSequence {
public:
    explicit CoefSequence(int depth)
        : depth_(depth), values_((std::size_t{1} << depth) - 1, 0.0) {
        if (depth < 1 || depth > 24) throw std::out_of_range("CoefSequence: bad depth");
    }

    int depth() const { return depth_; }
    std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }

    double get(const DyadicInterval& I) const { return values_[check(I)]; }
    void set(const DyadicInterval& I, double v) { values_[check(I)] = v; }

    double at_index(std::int64_t i) const { return values_[static_cast<std::size_t>(i)]; }
    void set_index(std::int64_t i, double v) { values_[static_cast<std::size_t>(i)] = v; }

    std::int64_t nonzero_count() const {
        return std::count_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; });
    }

    CoefSequence scaled(double t) const {
        CoefSequence out(depth_);
        for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = t * values_[i];
        return out;
    }

    // Entrywise product, used by the product-symbol Carleson conditions.
    friend CoefSequence entrywise_product(const CoefSequence& a, const CoefSequence& b) {
        if (a.depth_ != b.depth_) throw std::invalid_argument("entrywise_product: depth mismatch");
        CoefSequence out(a.depth_);
        for (std::size_t i = 0; i < a.values_.size(); ++i) out.values_[i] = a.values_[i] * b.values_[i];
        return out;
    }

private:
    std::size_t check(const DyadicInterval& I) const {
        if (!I.valid() || I.level >= depth_)
            throw std::out_of_range("CoefSequence: interval " + to_string(I) + " not in D_" + std::to_string(depth_));
        return static_cast<std::size_t>(((std::int64_t{1} << I.level) - 1) + I.pos);
    }

    int depth_;
    std::vector<double> values_;
};

inline void check_same_depth(const CoefSequence& a, const CoefSequence& b, const char* what) {
    if (a.depth() != b.depth())
        throw std::invalid_argument(std::string(what) + ": depth mismatch");
}

namespace detail {

inline double measure_at(int depth, std::int64_t heap_index) {
    int level = 0;
    while ((std::int64_t{2} << level) - 1 <= heap_index) ++level;
    (void)depth;
    return std::ldexp(1.0, -level);
}

}  // namespace detail

// Heap-indexed containment sums S(J) = sum_{I subset J} b_I^2 |I|, one
// bottom-up pass (children of heap slot i are 2i+1, 2i+2).
inline std::vector<double> containment_sums(const CoefSequence& seq) {
    const std::int64_t n = seq.size();
    std::vector<double> s(static_cast<std::size_t>(n), 0.0);
    for (std::int64_t i = n - 1; i >= 0; --i) {
        const double b = seq.at_index(i);
        double acc = b * b * detail::measure_at(seq.depth(), i);
        if (2 * i + 1 < n) acc += s[static_cast<std::size_t>(2 * i + 1)];
        if (2 * i + 2 < n) acc += s[static_cast<std::size_t>(2 * i + 2)];
        s[static_cast<std::size_t>(i)] = acc;
    }
    return s;
}

// sup_J [ |J|^{-1} sum_{I subset J} b_I^2 |I| ]^{1/2}, containment non-strict.
inline double carleson_norm(const CoefSequence& seq) {
    const auto s = containment_sums(seq);
    double best = 0.0;
    for (std::int64_t i = 0; i < seq.size(); ++i)
        best = std::max(best, s[static_cast<std::size_t>(i)] / detail::measure_at(seq.depth(), i));
    return std::sqrt(best);
}

// J -> sum_{I strictly inside J} b_I^2 |I|  (containment sum minus diagonal).
inline std::vector<double> strict_below_sums(const CoefSequence& seq) {
    auto s = containment_sums(seq);
    for (std::int64_t i = 0; i < seq.size(); ++i) {
        const double b = seq.at_index(i);
        s[static_cast<std::size_t>(i)] -= b * b * detail::measure_at(seq.depth(), i);
    }
    return s;
}

enum class AncestorWeighting { times_measure, over_measure };

// J -> sum_{I strictly containing J} b_I^2 w(I) with w(I) = |I| or 1/|I|,
// one top-down pass U(child) = U(J) + b_J^2 w(J).
inline std::vector<double> strict_above_sums(const CoefSequence& seq, AncestorWeighting w) {
    const std::int64_t n = seq.size();
    std::vector<double> u(static_cast<std::size_t>(n), 0.0);
    for (std::int64_t i = 0; i < n; ++i) {
        const double m = detail::measure_at(seq.depth(), i);
        const double b = seq.at_index(i);
        const double step = b * b * (w == AncestorWeighting::times_measure ? m : 1.0 / m);
        const double val = u[static_cast<std::size_t>(i)] + step;
        if (2 * i + 1 < n) u[static_cast<std::size_t>(2 * i + 1)] = val;
        if (2 * i + 2 < n) u[static_cast<std::size_t>(2 * i + 2)] = val;
    }
    return u;
}

// RHS of the local composition case: Carleson norm of the product symbol.
inline double rhs_10_01(const CoefSequence& b, const CoefSequence& beta) {
    check_same_depth(b, beta, "rhs_10_01");
    return carleson_norm(entrywise_product(b, beta));
}

// sup_J [ (beta_J^2 / |J|) sum_{I strictly inside J} b_I^2 |I| ]^{1/2}
inline double rhs_01_00(const CoefSequence& b, const CoefSequence& beta) {
    check_same_depth(b, beta, "rhs_01_00");
    const auto below = strict_below_sums(b);
    double best = 0.0;
    for (std::int64_t i = 0; i < beta.size(); ++i) {
        const double bj = beta.at_index(i);
        best = std::max(best, bj * bj * below[static_cast<std::size_t>(i)] / detail::measure_at(b.depth(), i));
    }
    return std::sqrt(best);
}

// sup_J [ beta_J^2 |J| sum_{I strictly containing J} b_I^2 / |I| ]^{1/2}.
// This is the exact second-moment value of the composition with the Haar leg
// on the coarse side (the /|I| ancestor weight also appears as the third
// bracket term of rhs_01_10).
inline double rhs_01_00p(const CoefSequence& b, const CoefSequence& beta) {
    check_same_depth(b, beta, "rhs_01_00p");
    const auto above = strict_above_sums(b, AncestorWeighting::over_measure);
    double best = 0.0;
    for (std::int64_t i = 0; i < beta.size(); ++i) {
        const double bj = beta.at_index(i);
        best = std::max(best, bj * bj * detail::measure_at(b.depth(), i) * above[static_cast<std::size_t>(i)]);
    }
    return std::sqrt(best);
}

// Carleson norm of c_J = [ (beta_J^2/|J|) sum_{I strictly inside J} b_I^2 |I| ]^{1/2}.
inline double rhs_01_01(const CoefSequence& b, const CoefSequence& beta) {
    check_same_depth(b, beta, "rhs_01_01");
    const auto below = strict_below_sums(b);
    CoefSequence c(b.depth());
    for (std::int64_t i = 0; i < b.size(); ++i) {
        const double bj = beta.at_index(i);
        c.set_index(i, std::sqrt(bj * bj * below[static_cast<std::size_t>(i)] / detail::measure_at(b.depth(), i)));
    }
    return carleson_norm(c);
}

// sup_J [ beta_J^2 ( |J|^{-1} sum_{I strict below} b_I^2 |I|  +  b_J^2
//                    + |J| sum_{I strict above} b_I^2 / |I| ) ]^{1/2}
inline double rhs_01_10(const CoefSequence& b, const CoefSequence& beta) {
    check_same_depth(b, beta, "rhs_01_10");
    const auto below = strict_below_sums(b);
    const auto above = strict_above_sums(b, AncestorWeighting::over_measure);
    double best = 0.0;
    for (std::int64_t i = 0; i < beta.size(); ++i) {
        const double m = detail::measure_at(b.depth(), i);
        const double bj = beta.at_index(i);
        const double bi = b.at_index(i);
        const double bracket = below[static_cast<std::size_t>(i)] / m + bi * bi +
                               m * above[static_cast<std::size_t>(i)];
        best = std::max(best, bj * bj * bracket);
    }
    return std::sqrt(best);
}

// O(1) cell-range sums for a grid function: Haar coefficients and local
// integrals without rescanning cells.
class FunctionTreeData {
public:
    FunctionTreeData(const TruncatedGrid& grid, const GridFunction& f) : grid_(grid) {
        check_resolution(grid, f, "FunctionTreeData");
        const auto n = grid.cell_count();
        sum_.assign(static_cast<std::size_t>(n) + 1, 0.0);
        sum_sq_.assign(static_cast<std::size_t>(n) + 1, 0.0);
        for (std::int64_t c = 0; c < n; ++c) {
            sum_[static_cast<std::size_t>(c) + 1] = sum_[static_cast<std::size_t>(c)] + f.values[c];
            sum_sq_[static_cast<std::size_t>(c) + 1] =
                sum_sq_[static_cast<std::size_t>(c)] + f.values[c] * f.values[c];
        }
    }

    // integral of f over I
    double integral(const DyadicInterval& I) const {
        const auto [first, count] = grid_.cell_range(I);
        return (sum_[static_cast<std::size_t>(first + count)] - sum_[static_cast<std::size_t>(first)]) *
               grid_.cell_width();
    }

    // integral of f^2 over I
    double integral_sq(const DyadicInterval& I) const {
        const auto [first, count] = grid_.cell_range(I);
        return (sum_sq_[static_cast<std::size_t>(first + count)] - sum_sq_[static_cast<std::size_t>(first)]) *
               grid_.cell_width();
    }

    // <f, h_I>
    double haar_coeff(const DyadicInterval& I) const {
        return (integral(I.right_child()) - integral(I.left_child())) / std::sqrt(I.measure());
    }

    // <f, h^1_I>
    double haar_one_coeff(const DyadicInterval& I) const {
        return integral(I) / std::sqrt(I.measure());
    }

private:
    TruncatedGrid grid_;
    std::vector<double> sum_;
    std::vector<double> sum_sq_;
};

// Symbol of kind 0 or 1 derived from a function: <b, h^kind_I> / sqrt|I|.
inline CoefSequence coeffs_from_function(const TruncatedGrid& grid, const GridFunction& b, int kind) {
    if (kind != 0 && kind != 1) throw std::invalid_argument("coeffs_from_function: kind must be 0 or 1");
    FunctionTreeData data(grid, b);
    CoefSequence out(grid.depth());
    for (std::int64_t i = 0; i < out.size(); ++i) {
        const DyadicInterval I = grid.interval_at(i);
        const double c = (kind == 1) ? data.haar_one_coeff(I) : data.haar_coeff(I);
        out.set_index(i, c / std::sqrt(I.measure()));
    }
    return out;
}

inline void require_mean_zero(const TruncatedGrid& grid, const GridFunction& f, const char* what) {
    const double m = mean(grid, f);
    const double scale = 1.0 + f.values.cwiseAbs().maxCoeff();
    if (std::abs(m) > 1e-10 * scale)
        throw std::invalid_argument(std::string(what) + ": function must have mean zero");
}

// The four displayed terms of the two-weight characterization.
struct TwoWeightRhs {
    double sup_b = 0.0, sup_beta = 0.0;
    double carleson_b = 0.0, carleson_beta = 0.0;
    double total() const { return sup_b + sup_beta + carleson_b + carleson_beta; }
};

inline TwoWeightRhs two_weight_rhs(const TruncatedGrid& grid, const GridFunction& b,
                                   const GridFunction& beta) {
    require_mean_zero(grid, b, "two_weight_rhs(b)");
    require_mean_zero(grid, beta, "two_weight_rhs(beta)");
    FunctionTreeData db(grid, b), dbeta(grid, beta);

    TwoWeightRhs out;
    CoefSequence cb(grid.depth()), cbeta(grid.depth());
    for (std::int64_t i = 0; i < grid.interval_count(); ++i) {
        const DyadicInterval I = grid.interval_at(i);
        const double m = I.measure();
        out.sup_b = std::max(out.sup_b, std::abs(db.haar_one_coeff(I)) / m * std::sqrt(dbeta.integral_sq(I)));
        out.sup_beta = std::max(out.sup_beta, std::abs(dbeta.haar_one_coeff(I)) / m * std::sqrt(db.integral_sq(I)));
        cb.set_index(i, db.haar_coeff(I) / m * std::sqrt(dbeta.integral_sq(I)));
        cbeta.set_index(i, dbeta.haar_coeff(I) / m * std::sqrt(db.integral_sq(I)));
    }
    out.carleson_b = carleson_norm(cb);
    out.carleson_beta = carleson_norm(cbeta);
    return out;
}

}  // namespace parahaar
