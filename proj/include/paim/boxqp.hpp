// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#ifndef PAIM_BOXQP_HPP
#define PAIM_BOXQP_HPP

#include <Eigen/Dense>

namespace paim {

/// Complex box-constrained least squares
///   min ||r_mat s - target||^2  s.t.  Re(s), Im(s) inside the per-axis box.
/// Solved in a dimension-doubled real embedding by an active-set method
/// (bounded-variable least squares) warm-started from the clamped
/// unconstrained solution.
struct BoxQpProblem {
    Eigen::MatrixXcd r_mat;
    Eigen::VectorXcd target;
    double lo_re = 0.0, hi_re = 0.0;
    double lo_im = 0.0, hi_im = 0.0;
};

struct BoxQpResult {
    Eigen::VectorXcd s;
    double objective = 0.0; // ||r_mat s - target||^2 at s
    int iterations = 0;
};

struct BoxQpOptions {
    int max_iterations = 10000;
    // KKT tolerance is tol_scale * (1 + ||target||).
    double tol_scale = 1e-8;
};

// Throws std::runtime_error carrying the best iterate's residual when the
// iteration cap is exceeded.
BoxQpResult solve_box_qp(const BoxQpProblem& prob, const BoxQpOptions& opts = {});

// Real-valued core, exposed for testing:
//   min ||a x - b||^2 s.t. lo <= x <= hi elementwise.
Eigen::VectorXd bounded_least_squares(const Eigen::MatrixXd& a,
                                      const Eigen::VectorXd& b,
                                      const Eigen::VectorXd& lo,
                                      const Eigen::VectorXd& hi,
                                      const BoxQpOptions& opts, int* iterations);

} // namespace paim

#endif
