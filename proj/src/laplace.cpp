#include "qbat/laplace.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace qbat {

std::vector<std::vector<std::size_t>> cluster_roots(std::span<const cplx> roots, double tol) {
    const std::size_t n = roots.size();
    std::vector<bool> taken(n, false);
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) {
        if (taken[i]) continue;
        taken[i] = true;
        std::vector<std::size_t> group{i};
        for (std::size_t k = 0; k < group.size(); ++k)
            for (std::size_t j = 0; j < n; ++j)
                if (!taken[j] && std::abs(roots[j] - roots[group[k]]) < tol) {
                    taken[j] = true;
                    group.push_back(j);
                }
        groups.push_back(std::move(group));
    }
    return groups;
}

ExponentialSum ExponentialSum::invert(std::span<const cplx> numerator, std::span<const cplx> poles,
                                      double cluster_tol) {
    if (numerator.size() > poles.size())
        throw std::invalid_argument("inverse Laplace needs a strictly proper rational function");

    ExponentialSum out;
    for (const auto& group : cluster_roots(poles, cluster_tol)) {
        std::vector<bool> inside(poles.size(), false);
        for (auto j : group) inside[j] = true;

        if (group.size() == 1) {
            const cplx s = poles[group[0]];
            cplx num{};
            for (auto it = numerator.rbegin(); it != numerator.rend(); ++it) num = num * s + *it;
            cplx den{1.0, 0.0};
            for (std::size_t k = 0; k < poles.size(); ++k)
                if (!inside[k]) den *= s - poles[k];
            out.simple_.push_back({s, num / den});
            continue;
        }

        // g(s) = N(s) / prod_{outside} (s - s_k), evaluated on the bidiagonal node matrix
        const auto m = static_cast<Eigen::Index>(group.size());
        Eigen::MatrixXcd nodes = Eigen::MatrixXcd::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            nodes(i, i) = poles[group[static_cast<std::size_t>(i)]];
            if (i + 1 < m) nodes(i, i + 1) = 1.0;
        }
        const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(m, m);
        Eigen::MatrixXcd num = Eigen::MatrixXcd::Zero(m, m);
        for (auto it = numerator.rbegin(); it != numerator.rend(); ++it) num = num * nodes + *it * id;
        Eigen::MatrixXcd den = id;
        for (std::size_t k = 0; k < poles.size(); ++k)
            if (!inside[k]) den = den * (nodes - poles[k] * id);
        const Eigen::MatrixXcd g =
            den.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(num);
        out.blocks_.push_back({nodes, g.row(0)});
    }
    return out;
}

cplx ExponentialSum::operator()(double t) const {
    cplx sum{};
    for (const auto& s : simple_) sum += s.residue * std::exp(s.rate * t);
    for (const auto& b : blocks_) {
        const Eigen::MatrixXcd e = (t * b.nodes).exp();
        sum += (b.weights * e.col(e.cols() - 1))(0);
    }
    return sum;
}

cplx ExponentialSum::derivative(double t) const {
    cplx sum{};
    for (const auto& s : simple_) sum += s.rate * s.residue * std::exp(s.rate * t);
    for (const auto& b : blocks_) {
        const Eigen::MatrixXcd e = b.nodes * (t * b.nodes).exp();
        sum += (b.weights * e.col(e.cols() - 1))(0);
    }
    return sum;
}

}  // namespace qbat
