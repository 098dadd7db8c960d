// Norm computations: deterministic spectral norm, the exact second-moment
// norm of a randomized operator via its Gram sum, and a seeded Monte Carlo
// estimator of the first-moment norm.
#pragma once

#include "parahaar/operators.hpp"
#include "parahaar/rng.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace parahaar {

// Largest singular value, via the symmetric eigensolve on A^T A.  (BDCSVD is
// not used: it returns a wrong top singular value on some sparse paraproduct
// matrices in this Eigen release; the top eigenvalue route is backward stable
// for the norm.)
inline double operator_norm(const LinearOperator& a) {
    if (!a.matrix().allFinite())
        throw std::domain_error("operator_norm: operator has non-finite entries");
    if (a.matrix().rows() <= 1) return std::abs(a.matrix()(0, 0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.matrix().transpose() * a.matrix(),
                                                      Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

// sup_f (E||T(sigma) f||^2)^{1/2} / ||f||.  E||T f||^2 = ||A0 f||^2 +
// sum_J ||A_J f||^2 by independence of the signs, so this is the top
// eigenvalue of the Gram sum; no sampling is involved.
inline double second_moment_norm(const RandomizedOperator& r) {
    if (r.piece_count() == 0 && !r.base()) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.gram(), Eigen::EigenvaluesOnly);
    const double lam = es.eigenvalues().maxCoeff();
    return std::sqrt(std::max(lam, 0.0));
}

// Top eigenvector of the Gram sum: the f that attains the second-moment norm.
inline Eigen::VectorXd second_moment_maximizer(const RandomizedOperator& r) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.gram());
    return es.eigenvectors().col(es.eigenvalues().size() - 1);
}

struct McEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    int trials = 0;
};

// Lower estimate of sup_f E||T(sigma) f||: fixes f* at the Gram maximizer and
// averages ||T(sigma) f*|| over sampled sign patterns.  By the moment
// inequality this is <= second_moment_norm.
inline McEstimate mc_first_moment_norm(const RandomizedOperator& r, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("mc_first_moment_norm: trials must be >= 1");
    if (r.piece_count() == 0 && !r.base()) return {0.0, 0.0, trials};

    // Unit-norm maximizer; the 2^-L norm weights cancel in ||Tf||/||f||, so
    // everything below is plain Euclidean.
    const Eigen::VectorXd f = second_moment_maximizer(r);

    // Precompute per-piece images of f*.
    Eigen::VectorXd y0 = Eigen::VectorXd::Zero(r.cells());
    if (r.base()) y0 = r.base()->matrix() * f;
    std::vector<Eigen::VectorXd> y;
    y.reserve(r.piece_count());
    for (std::size_t j = 0; j < r.piece_count(); ++j) {
        const auto& p = r.piece(j);
        if (p.rank_one)
            y.push_back((r.weight() * p.v.dot(f)) * p.u);
        else
            y.push_back(p.dense * f);
    }

    double sum = 0.0, sum_sq = 0.0;
    Eigen::VectorXd acc(r.cells());
    for (int t = 0; t < trials; ++t) {
        SplitMix64 g(derive_seed(seed, static_cast<std::uint64_t>(t)));
        acc = y0;
        for (const auto& yj : y) acc += g.next_sign() * yj;
        const double v = acc.norm();
        sum += v;
        sum_sq += v * v;
    }
    McEstimate out;
    out.trials = trials;
    out.value = sum / trials;
    if (trials > 1) {
        const double var = std::max(0.0, (sum_sq - sum * sum / trials) / (trials - 1));
        out.stderr_ = std::sqrt(var / trials);
    }
    return out;
}

}  // namespace parahaar
