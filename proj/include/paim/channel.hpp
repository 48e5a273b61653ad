// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#ifndef PAIM_CHANNEL_HPP
#define PAIM_CHANNEL_HPP

#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "paim/config.hpp"

namespace paim {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// Large-scale factors for every (receive antenna, candidate position) link,
/// shaped n_r x (n_t * n_wg) with columns grouped per waveguide.
struct LargeScaleMap {
    MatrixXd beta;      // linear-scale gain, path loss + shadow combined
    MatrixXd k_factor;  // Rician factor, linear; 0 where no LoS
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> has_los;
    MatrixXd shadow_db; // correlated shadow values F (dB)
};

/// One small-scale realization plus the factors it was composed from.
struct ChannelRealization {
    MatrixXcd h; // n_r x (n_t * n_wg)
    // Per-waveguide factor matrices, each n_r x n_t.
    std::vector<MatrixXd> b;        // sqrt(beta)
    std::vector<MatrixXd> k_los;    // sqrt(K / (K + 1))
    std::vector<MatrixXd> k_nlos;   // sqrt(1 / (K + 1))
    std::vector<MatrixXcd> h_bar;   // deterministic LoS component (all ones)
    std::vector<MatrixXcd> h_tilde; // scattered component, CN(0, 1) entries
    std::vector<MatrixXcd> gamma;   // in-waveguide phase shifts, unit modulus

    // Recompose h from the stored factors (Hadamard composition per
    // waveguide, blocks concatenated).
    MatrixXcd recompose() const;
};

/// Mean and covariance of vec(H^H) conditioned on the large-scale factors.
struct ChannelStatistics {
    VectorXcd u_bar;
    MatrixXcd c_u;
    Eigen::PermutationMatrix<Eigen::Dynamic> k_commutation;
};

// LoS probability 1 - d/300 for d < 300 m, else 0.
double los_probability(double d);

// 10^(1.3 - 0.003 d) under LoS, 0 otherwise.
double rician_factor(double d, bool has_los);

// COST-231 Walfisch-Ikegami gain in dB, excluding shadow.
double path_loss_db(double d, bool has_los);

// exp(-i 2 pi ||feed - pa|| / lambda_g)
std::complex<double> waveguide_phase(const Vec3& feed, const Vec3& pa,
                                     double lambda_g);

// Permutation K with K * vec(A) = vec(A^T) for A of size rows x cols.
Eigen::PermutationMatrix<Eigen::Dynamic> commutation_matrix(int rows, int cols);

/// Correlated shadow-fading sampler. The per-PA field {a} and the per-receive
/// antenna field {b} are zero-mean Gaussians with variance sigma_sf^2 and
/// cross-correlation 2^(-d/d_decorr) within each family; the link value is
/// F = sqrt(delta) a + sqrt(1 - delta) b.
class ShadowSampler {
  public:
    ShadowSampler(const DeploymentGeometry& geom, const SystemConfig& cfg);

    // n_r x (n_t * n_wg) matrix of F values in dB.
    MatrixXd sample(std::mt19937_64& rng) const;

    // Correlation coefficient between two points of the same family.
    static double correlation(double d, double d_decorr);

  private:
    int n_wg_, n_t_, n_r_;
    double delta_, sigma_;
    MatrixXd factor_a_; // symmetric factor, Cov_a = sigma^2 factor factor^T
    MatrixXd factor_b_;

    static MatrixXd factor_correlation(const MatrixXd& corr);
};

// Draws LoS flags per link, the correlated shadow field, and combines them
// with path loss into linear beta and Rician K. One call per coherence block.
LargeScaleMap draw_large_scale(const DeploymentGeometry& geom,
                               const SystemConfig& cfg, std::mt19937_64& rng);

// Small-scale realization on top of a fixed large-scale map.
ChannelRealization realize_channel(const DeploymentGeometry& geom,
                                   const LargeScaleMap& large_scale,
                                   std::mt19937_64& rng);

// Exact conditional mean and covariance of vec(H^H) given the map.
ChannelStatistics channel_statistics(const DeploymentGeometry& geom,
                                     const LargeScaleMap& large_scale);

// Text dump of a complex matrix (row-major re/im pairs) for
// cross-implementation regression.
void write_matrix_txt(const std::string& path, const MatrixXcd& m);
MatrixXcd read_matrix_txt(const std::string& path);

} // namespace paim

#endif
