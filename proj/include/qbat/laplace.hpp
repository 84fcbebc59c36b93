// laplace.hpp — Inverse Laplace transform of proper rational functions with known poles
//
// f(s) = N(s) / prod_j (s - s_j)  ->  f(t) = (N(s) e^{st})[s_1, ..., s_n],
//
// the divided difference of N e^{st} over the poles. Well separated poles use
// the ordinary residue sum. Poles closer than a tolerance form a block whose
// divided difference is read off the exponential of the bidiagonal matrix
// carrying the block's nodes, which stays exact for repeated and nearly
// repeated poles where the residue sum would cancel catastrophically.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace qbat {

using cplx = std::complex<double>;

/// Partition of root indices into groups whose members are chained by
/// separations below `tol`.
std::vector<std::vector<std::size_t>> cluster_roots(std::span<const cplx> roots, double tol);

class ExponentialSum {
public:
    struct Simple {
        cplx rate;
        cplx residue;
    };
    /// Contribution weights * exp(t * nodes) * e_last, nodes upper bidiagonal.
    struct Block {
        Eigen::MatrixXcd nodes;
        Eigen::RowVectorXcd weights;
    };

    ExponentialSum() = default;

    /// `numerator` holds ascending coefficients and must have degree below the
    /// number of poles. Poles chained within `cluster_tol` go into one block.
    static ExponentialSum invert(std::span<const cplx> numerator, std::span<const cplx> poles,
                                 double cluster_tol);

    cplx operator()(double t) const;
    cplx derivative(double t) const;

    const std::vector<Simple>& simple_terms() const noexcept { return simple_; }
    const std::vector<Block>& blocks() const noexcept { return blocks_; }

private:
    std::vector<Simple> simple_;
    std::vector<Block> blocks_;
};

}  // namespace qbat
