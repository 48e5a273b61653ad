// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#ifndef PAIM_PRECODER_HPP
#define PAIM_PRECODER_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "paim/modem.hpp"

namespace paim {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// Per-pair cached quadratics: with Delta partitioned into per-waveguide
/// chunks d_k and D = blkdiag-column(d_1..d_K), H W Delta = H D w, so each
/// pair contributes q(w) = w^H G w with G = (H D)^H (H D).
class PairDifferenceBlocks {
  public:
    struct Pair {
        MatrixXcd g;    // n_wg x n_wg, Hermitian PSD
        double weight;  // 2 n_ij / (eta 2^eta), ordered pair folded
    };

    static PairDifferenceBlocks build(const MatrixXcd& h, const Modem& modem,
                                      const std::vector<TransmitFrame>& signal_set);

    // D_{i,j} from a partitioned error vector: (n_t n_wg) x n_wg with
    // column k carrying chunk k.
    static MatrixXcd d_matrix(const VectorXcd& delta, int n_t, int n_wg);

    const std::vector<Pair>& pairs() const { return pairs_; }
    int n_wg() const { return n_wg_; }

    // Copy keeping only pairs within `nats` of the dominant exponent at w;
    // dropped pairs contribute less than e^-nats relative to the largest term.
    PairDifferenceBlocks screened(const VectorXcd& w, double rho, double n0,
                                  double nats) const;

  private:
    std::vector<Pair> pairs_;
    int n_wg_ = 0;
};

// Conditional BER upper bound as a function of the precoding weights.
double objective_f(const VectorXcd& w, const PairDifferenceBlocks& blocks,
                   double rho, double n0);

// Conjugate-coordinate gradient, convention f(w + d) ~ f(w) + 2 Re{g^H d}.
VectorXcd euclidean_gradient(const VectorXcd& w,
                             const PairDifferenceBlocks& blocks, double rho,
                             double n0);

// Projection onto the tangent space of the radius-sqrt(n_wg) sphere.
VectorXcd riemannian_gradient(const VectorXcd& w, const VectorXcd& egrad);

// sqrt(n_wg) (w + step) / ||w + step||; throws when w + step vanishes.
VectorXcd retract(const VectorXcd& w, const VectorXcd& step);

struct PrecoderOptions {
    double decrease_tol = 1e-10; // relative objective decrease stop
    double grad_tol = 1e-8;      // Riemannian gradient norm stop
    int max_iterations = 500;
    int max_halvings = 50;
    double armijo_c = 1e-4;
    bool screen_pairs = false;   // drop pairs > screen_nats above the
    double screen_nats = 40.0;   // dominant exponent, evaluated at w0
};

struct PrecodingVector {
    VectorXcd w;
    double objective = 0.0;
    int iterations = 0;
    bool stalled = false;              // line search found no admissible step
    std::vector<double> objective_trace; // f after every accepted step
};

// Riemannian gradient descent with Armijo backtracking from w0 = all-ones.
PrecodingVector optimize_precoder(const MatrixXcd& h, const Modem& modem,
                                  const std::vector<TransmitFrame>& signal_set,
                                  double rho, double n0,
                                  const PrecoderOptions& opts = {});

// W = diag(w) (x) I_{n_t}; ||W||_F^2 = n_t n_wg on the manifold.
MatrixXcd expand_precoder(const VectorXcd& w, int n_t);

// CSV export: waveguide, re, im.
void write_weights_csv(const std::string& path, const VectorXcd& w);

} // namespace paim

#endif
