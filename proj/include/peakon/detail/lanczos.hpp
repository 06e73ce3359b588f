#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

namespace peakon {

template <class Solve, class SolveAdj>
LanczosResult inverse_lanczos(Eigen::Index n, Solve&& solve, SolveAdj&& solve_adj, int max_iter, double tol) {
    LanczosResult res;
    const int m_max = static_cast<int>(std::min<Eigen::Index>(max_iter, n));
    std::vector<Eigen::VectorXcd> q;
    q.reserve(static_cast<std::size_t>(m_max) + 1);

    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i));
    v.normalize();
    q.push_back(v);

    std::vector<double> alpha, beta;
    double theta_prev = 0.0;
    for (int j = 0; j < m_max; ++j) {
        Eigen::VectorXcd w = solve_adj(solve(q.back()));
        const double a = q.back().dot(w).real();
        alpha.push_back(a);
        w -= a * q.back();
        if (j > 0) w -= beta.back() * q[q.size() - 2];
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& qi : q) w -= qi.dot(w) * qi;
        const double bnext = w.norm();

        const auto k = static_cast<Eigen::Index>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
        for (Eigen::Index i = 0; i < k; ++i) {
            t(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        const double theta = es.eigenvalues()[k - 1];
        const double tail = std::abs(bnext * es.eigenvectors()(k - 1, k - 1));
        res.iterations = j + 1;
        res.sigma_min = theta > 0.0 ? 1.0 / std::sqrt(theta) : 0.0;
        if ((tail <= 1e-5 * theta && std::abs(theta - theta_prev) <= tol * theta) ||
            bnext <= 1e-300 * std::max(1.0, theta)) {
            res.converged = true;
            return res;
        }
        theta_prev = theta;
        beta.push_back(bnext);
        q.push_back(w / bnext);
    }
    return res;
}

}  // namespace peakon
