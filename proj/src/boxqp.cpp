// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#include "paim/boxqp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace paim {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class VarState { Free, AtLo, AtHi, Pinned };

// Min-norm least-squares solution; rank-revealing so flat directions of a
// semidefinite subproblem stay bounded.
VectorXd min_norm_ls(const MatrixXd& a, const VectorXd& b) {
    return a.completeOrthogonalDecomposition().solve(b);
}

} // namespace

VectorXd bounded_least_squares(const MatrixXd& a, const VectorXd& b,
                               const VectorXd& lo, const VectorXd& hi,
                               const BoxQpOptions& opts, int* iterations) {
    const int n = static_cast<int>(a.cols());
    const double tol = opts.tol_scale * (1.0 + b.norm());

    std::vector<VarState> state(n);
    VectorXd x(n);
    {
        const VectorXd x0 = min_norm_ls(a, b);
        for (int i = 0; i < n; ++i) {
            if (lo(i) == hi(i)) {
                x(i) = lo(i);
                state[i] = VarState::Pinned;
            } else if (x0(i) <= lo(i)) {
                x(i) = lo(i);
                state[i] = VarState::AtLo;
            } else if (x0(i) >= hi(i)) {
                x(i) = hi(i);
                state[i] = VarState::AtHi;
            } else {
                x(i) = x0(i);
                state[i] = VarState::Free;
            }
        }
    }

    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        // Minimize over the free variables with the bound ones held fixed.
        std::vector<int> free_idx;
        for (int i = 0; i < n; ++i)
            if (state[i] == VarState::Free) free_idx.push_back(i);

        if (!free_idx.empty()) {
            const int nf = static_cast<int>(free_idx.size());
            MatrixXd af(a.rows(), nf);
            for (int c = 0; c < nf; ++c) af.col(c) = a.col(free_idx[c]);
            VectorXd rhs = b;
            for (int i = 0; i < n; ++i)
                if (state[i] != VarState::Free && x(i) != 0.0)
                    rhs -= a.col(i) * x(i);

            const VectorXd z = min_norm_ls(af, rhs);

            // Step toward z, stopping at the first bound crossing.
            double alpha = 1.0;
            int limit = -1;
            bool limit_at_hi = false;
            for (int c = 0; c < nf; ++c) {
                const int i = free_idx[c];
                if (z(c) < lo(i)) {
                    const double denom = x(i) - z(c);
                    const double step = denom > 0.0 ? (x(i) - lo(i)) / denom : 0.0;
                    if (step < alpha) { alpha = step; limit = c; limit_at_hi = false; }
                } else if (z(c) > hi(i)) {
                    const double denom = z(c) - x(i);
                    const double step = denom > 0.0 ? (hi(i) - x(i)) / denom : 0.0;
                    if (step < alpha) { alpha = step; limit = c; limit_at_hi = true; }
                }
            }

            if (limit < 0) {
                for (int c = 0; c < nf; ++c) x(free_idx[c]) = z(c);
            } else {
                for (int c = 0; c < nf; ++c) {
                    const int i = free_idx[c];
                    x(i) += alpha * (z(c) - x(i));
                    x(i) = std::min(std::max(x(i), lo(i)), hi(i));
                }
                const int i = free_idx[limit];
                x(i) = limit_at_hi ? hi(i) : lo(i);
                state[i] = limit_at_hi ? VarState::AtHi : VarState::AtLo;
                continue; // re-solve with the reduced free set
            }
        }

        // KKT: release the worst bound variable whose gradient points inward.
        const VectorXd g = a.transpose() * (a * x - b);
        double worst = tol;
        int worst_i = -1;
        for (int i = 0; i < n; ++i) {
            double v = 0.0;
            if (state[i] == VarState::AtLo) v = -g(i);
            else if (state[i] == VarState::AtHi) v = g(i);
            if (v > worst) { worst = v; worst_i = i; }
        }
        if (worst_i < 0) {
            if (iterations) *iterations = iter + 1;
            return x;
        }
        state[worst_i] = VarState::Free;
    }

    std::ostringstream oss;
    oss << "bounded_least_squares: iteration cap " << opts.max_iterations
        << " exceeded, residual " << (a * x - b).norm();
    throw std::runtime_error(oss.str());
}

BoxQpResult solve_box_qp(const BoxQpProblem& prob, const BoxQpOptions& opts) {
    const int m = static_cast<int>(prob.r_mat.rows());
    const int n = static_cast<int>(prob.r_mat.cols());
    if (prob.target.size() != m)
        throw std::invalid_argument("solve_box_qp: target size mismatch");
    if (prob.lo_re > prob.hi_re || prob.lo_im > prob.hi_im)
        throw std::invalid_argument("solve_box_qp: empty box");

    // Real embedding: variables [Re(s); Im(s)], rows [Re; Im].
    MatrixXd a(2 * m, 2 * n);
    a.topLeftCorner(m, n) = prob.r_mat.real();
    a.topRightCorner(m, n) = -prob.r_mat.imag();
    a.bottomLeftCorner(m, n) = prob.r_mat.imag();
    a.bottomRightCorner(m, n) = prob.r_mat.real();
    VectorXd b(2 * m);
    b.head(m) = prob.target.real();
    b.tail(m) = prob.target.imag();

    VectorXd lo(2 * n), hi(2 * n);
    lo.head(n).setConstant(prob.lo_re);
    hi.head(n).setConstant(prob.hi_re);
    lo.tail(n).setConstant(prob.lo_im);
    hi.tail(n).setConstant(prob.hi_im);

    BoxQpResult res;
    const VectorXd x = bounded_least_squares(a, b, lo, hi, opts, &res.iterations);
    res.s.resize(n);
    for (int i = 0; i < n; ++i) res.s(i) = {x(i), x(n + i)};
    res.objective = (prob.r_mat * res.s - prob.target).squaredNorm();
    return res;
}

} // namespace paim
