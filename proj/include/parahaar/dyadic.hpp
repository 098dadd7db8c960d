// Dyadic grid on [0,1): intervals, the truncated Haar system, and the
// interval combinatorics everything else is built on.
#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace parahaar {

// I = [pos * 2^-level, (pos+1) * 2^-level), so |I| = 2^-level.
struct DyadicInterval {
    int level = 0;
    std::int64_t pos = 0;

    double measure() const { return std::ldexp(1.0, -level); }

    DyadicInterval parent() const {
        if (level < 1) throw std::domain_error("dyadic: root has no parent");
        return {level - 1, pos >> 1};
    }
    DyadicInterval left_child() const { return {level + 1, 2 * pos}; }
    DyadicInterval right_child() const { return {level + 1, 2 * pos + 1}; }

    bool valid() const {
        return level >= 0 && pos >= 0 && pos < (std::int64_t{1} << level);
    }

    friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

inline std::string to_string(const DyadicInterval& I) {
    return "(" + std::to_string(I.level) + "," + std::to_string(I.pos) + ")";
}

// Is I contained in J?  Dyadic intervals are nested or disjoint, so this is
// a shift-and-compare on positions.
inline bool contains(const DyadicInterval& J, const DyadicInterval& I) {
    return I.level >= J.level && (I.pos >> (I.level - J.level)) == J.pos;
}

inline bool strictly_contains(const DyadicInterval& J, const DyadicInterval& I) {
    return contains(J, I) && !(I == J);
}

enum class IntervalRelation { equal, first_inside_second, second_inside_first, disjoint };

inline IntervalRelation relation(const DyadicInterval& I, const DyadicInterval& J) {
    if (I == J) return IntervalRelation::equal;
    if (contains(J, I)) return IntervalRelation::first_inside_second;
    if (contains(I, J)) return IntervalRelation::second_inside_first;
    return IntervalRelation::disjoint;
}

// Sign of h_J on I, for I strictly inside J: -1 on the left half, +1 on the
// right half.
inline int tau(const DyadicInterval& I, const DyadicInterval& J) {
    if (!strictly_contains(J, I))
        throw std::domain_error("tau: " + to_string(I) + " is not strictly inside " + to_string(J));
    const int d = I.level - J.level;
    return ((I.pos >> (d - 1)) & 1) ? +1 : -1;
}

// Resolution-2^-L model of [0,1).  D_L holds the 2^L - 1 intervals of levels
// 0..L-1 in canonical order (level-major, position-minor); that order fixes
// every vector, matrix and report layout.
class TruncatedGrid {
public:
    explicit TruncatedGrid(int depth) : depth_(depth) {
        if (depth < 1 || depth > 24)
            throw std::out_of_range("make_grid: depth must lie in [1,24], got " + std::to_string(depth));
    }

    int depth() const { return depth_; }
    std::int64_t cell_count() const { return std::int64_t{1} << depth_; }
    std::int64_t interval_count() const { return (std::int64_t{1} << depth_) - 1; }
    double cell_width() const { return std::ldexp(1.0, -depth_); }

    bool admits(const DyadicInterval& I) const { return I.valid() && I.level < depth_; }

    // Canonical order is heap order: (0,0) -> 0, (1,0) -> 1, (1,1) -> 2, ...
    std::int64_t index_of(const DyadicInterval& I) const {
        if (!admits(I))
            throw std::out_of_range("grid: interval " + to_string(I) + " not in D_" + std::to_string(depth_));
        return (std::int64_t{1} << I.level) - 1 + I.pos;
    }

    DyadicInterval interval_at(std::int64_t idx) const {
        if (idx < 0 || idx >= interval_count())
            throw std::out_of_range("grid: interval index out of range");
        int level = 0;
        while ((std::int64_t{2} << level) - 1 <= idx) ++level;
        return {level, idx - ((std::int64_t{1} << level) - 1)};
    }

    std::vector<DyadicInterval> intervals() const {
        std::vector<DyadicInterval> out;
        out.reserve(static_cast<std::size_t>(interval_count()));
        for (std::int64_t i = 0; i < interval_count(); ++i) out.push_back(interval_at(i));
        return out;
    }

    // Cells covered by I (levels 0..depth admitted): [first, first+count).
    std::pair<std::int64_t, std::int64_t> cell_range(const DyadicInterval& I) const {
        if (!I.valid() || I.level > depth_)
            throw std::out_of_range("grid: interval " + to_string(I) + " below resolution 2^-" + std::to_string(depth_));
        const std::int64_t span = std::int64_t{1} << (depth_ - I.level);
        return {I.pos * span, span};
    }

    friend bool operator==(const TruncatedGrid&, const TruncatedGrid&) = default;

private:
    int depth_;
};

inline TruncatedGrid make_grid(int depth) { return TruncatedGrid(depth); }

// Step function at resolution 2^-L; entry c is the value on
// [c*2^-L, (c+1)*2^-L).
struct GridFunction {
    Eigen::VectorXd values;

    GridFunction() = default;
    explicit GridFunction(Eigen::VectorXd v) : values(std::move(v)) {}
    explicit GridFunction(std::int64_t cells) : values(Eigen::VectorXd::Zero(cells)) {}

    std::int64_t cells() const { return values.size(); }
};

inline GridFunction constant_one(const TruncatedGrid& grid) {
    return GridFunction(Eigen::VectorXd::Ones(grid.cell_count()));
}

inline void check_resolution(const TruncatedGrid& grid, const GridFunction& f, const char* what) {
    if (f.cells() != grid.cell_count())
        throw std::invalid_argument(std::string(what) + ": resolution mismatch (" +
                                    std::to_string(f.cells()) + " cells vs grid " +
                                    std::to_string(grid.cell_count()) + ")");
}

// <f,g> = 2^-L sum of cellwise products: grid quantities equal continuum
// integrals of step functions with no rescaling.
inline double inner(const TruncatedGrid& grid, const GridFunction& f, const GridFunction& g) {
    check_resolution(grid, f, "inner");
    if (f.cells() != g.cells())
        throw std::invalid_argument("inner: length mismatch");
    return f.values.dot(g.values) * grid.cell_width();
}

inline double norm2(const TruncatedGrid& grid, const GridFunction& f) {
    return std::sqrt(inner(grid, f, f));
}

inline double mean(const TruncatedGrid& grid, const GridFunction& f) {
    check_resolution(grid, f, "mean");
    return f.values.mean();
}

// h_I = h^0_I: -|I|^{-1/2} on the left half of I, +|I|^{-1/2} on the right,
// 0 off I.  Needs level(I) < L so the halves are resolvable.
inline GridFunction haar(const TruncatedGrid& grid, const DyadicInterval& I) {
    if (!I.valid()) throw std::invalid_argument("haar: invalid interval " + to_string(I));
    if (I.level >= grid.depth())
        throw std::out_of_range("haar: level " + std::to_string(I.level) +
                                " not resolvable at depth " + std::to_string(grid.depth()));
    GridFunction h(grid.cell_count());
    const auto [first, count] = grid.cell_range(I);
    const double amp = std::sqrt(1.0 / I.measure());
    h.values.segment(first, count / 2).setConstant(-amp);
    h.values.segment(first + count / 2, count / 2).setConstant(amp);
    return h;
}

// h^1_I = |h_I|: |I|^{-1/2} on I, 0 elsewhere.  No half-splitting is needed,
// so level L is admitted as well.
inline GridFunction haar_one(const TruncatedGrid& grid, const DyadicInterval& I) {
    if (!I.valid()) throw std::invalid_argument("haar_one: invalid interval " + to_string(I));
    if (I.level > grid.depth())
        throw std::out_of_range("haar_one: level " + std::to_string(I.level) +
                                " below resolution at depth " + std::to_string(grid.depth()));
    GridFunction h(grid.cell_count());
    const auto [first, count] = grid.cell_range(I);
    h.values.segment(first, count).setConstant(std::sqrt(1.0 / I.measure()));
    return h;
}

}  // namespace parahaar
