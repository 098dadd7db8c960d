// Test-only oracles, independent of the implementation paths they check.
#pragma once

#include "parahaar/operators.hpp"

#include <stdexcept>

namespace parahaar::test {

// Average of ||T(sigma) f||^2 over ALL 2^m sign patterns, by direct
// enumeration.  Independent oracle for the Gram-form second moment.
inline double exhaustive_mean_square(const RandomizedOperator& r, const GridFunction& f) {
    const std::size_t m = r.piece_count();
    if (m > 20) throw std::invalid_argument("exhaustive_mean_square: too many pieces to enumerate");
    const double w = r.weight();

    Eigen::VectorXd y0 = Eigen::VectorXd::Zero(r.cells());
    if (r.base()) y0 = r.base()->matrix() * f.values;
    std::vector<Eigen::VectorXd> y;
    y.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        const auto& p = r.piece(j);
        if (p.rank_one)
            y.push_back((w * p.v.dot(f.values)) * p.u);
        else
            y.push_back(p.dense * f.values);
    }

    double total = 0.0;
    const std::size_t patterns = std::size_t{1} << m;
    Eigen::VectorXd acc(r.cells());
    for (std::size_t bits = 0; bits < patterns; ++bits) {
        acc = y0;
        for (std::size_t j = 0; j < m; ++j) acc += ((bits >> j) & 1 ? 1.0 : -1.0) * y[j];
        total += w * acc.squaredNorm();
    }
    return total / static_cast<double>(patterns);
}

// Gram-form value E||T f||^2 = ||A0 f||^2 + sum ||A_J f||^2, assembled from
// the pieces directly (not via the Gram matrix).
inline double gram_form_value(const RandomizedOperator& r, const GridFunction& f) {
    const double w = r.weight();
    double total = 0.0;
    if (r.base()) total += w * (r.base()->matrix() * f.values).squaredNorm();
    for (std::size_t j = 0; j < r.piece_count(); ++j) {
        const auto& p = r.piece(j);
        if (p.rank_one) {
            const double c = w * p.v.dot(f.values);
            total += w * c * c * p.u.squaredNorm();
        } else {
            total += w * (p.dense * f.values).squaredNorm();
        }
    }
    return total;
}

}  // namespace parahaar::test
