// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#include "paim/channel.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "paim/rng.hpp"

namespace paim {

double los_probability(double d) {
    if (d >= 300.0) return 0.0;
    return 1.0 - d / 300.0;
}

double rician_factor(double d, bool has_los) {
    if (!has_los) return 0.0;
    return std::pow(10.0, 1.3 - 0.003 * d);
}

double path_loss_db(double d, bool has_los) {
    if (has_los) return -30.18 - 26.0 * std::log10(d);
    return -34.53 - 38.0 * std::log10(d);
}

std::complex<double> waveguide_phase(const Vec3& feed, const Vec3& pa,
                                     double lambda_g) {
    const double dist = distance(feed, pa);
    const double phase = -2.0 * std::numbers::pi * dist / lambda_g;
    return std::polar(1.0, phase);
}

Eigen::PermutationMatrix<Eigen::Dynamic> commutation_matrix(int rows, int cols) {
    Eigen::PermutationMatrix<Eigen::Dynamic> p(rows * cols);
    // vec(A)[c * rows + r] must land at vec(A^T)[r * cols + c].
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
            p.indices()[c * rows + r] = r * cols + c;
    return p;
}

// --------------------------------------------------------------------------
// Shadow fading

double ShadowSampler::correlation(double d, double d_decorr) {
    return std::pow(2.0, -d / d_decorr);
}

MatrixXd ShadowSampler::factor_correlation(const MatrixXd& corr) {
    MatrixXd m = corr;
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m);
    double min_ev = eig.eigenvalues().minCoeff();
    if (min_ev < 0.0) {
        m.diagonal().array() += 1e-12;
        eig.compute(m);
        min_ev = eig.eigenvalues().minCoeff();
        if (min_ev < -1e-8) {
            std::ostringstream oss;
            oss << "shadow correlation matrix not PSD after regularization, "
                   "eigenvalue "
                << min_ev;
            throw std::runtime_error(oss.str());
        }
    }
    const VectorXd sqrt_ev = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * sqrt_ev.asDiagonal();
}

ShadowSampler::ShadowSampler(const DeploymentGeometry& geom,
                             const SystemConfig& cfg)
    : n_wg_(cfg.n_wg), n_t_(cfg.n_t), n_r_(cfg.n_r), delta_(cfg.delta_sf),
      sigma_(cfg.sigma_sf_db) {
    const int np = n_wg_ * n_t_;
    MatrixXd corr_a(np, np);
    for (int p = 0; p < np; ++p) {
        const Vec3& pp = geom.candidate_pa_positions[p / n_t_][p % n_t_];
        for (int q = 0; q < np; ++q) {
            const Vec3& pq = geom.candidate_pa_positions[q / n_t_][q % n_t_];
            corr_a(p, q) = correlation(distance(pp, pq), cfg.d_decorr_m);
        }
    }
    MatrixXd corr_b(n_r_, n_r_);
    for (int p = 0; p < n_r_; ++p)
        for (int q = 0; q < n_r_; ++q)
            corr_b(p, q) = correlation(
                distance(geom.rx_elements[p], geom.rx_elements[q]), cfg.d_decorr_m);
    factor_a_ = factor_correlation(corr_a);
    factor_b_ = factor_correlation(corr_b);
}

MatrixXd ShadowSampler::sample(std::mt19937_64& rng) const {
    const int np = n_wg_ * n_t_;
    VectorXd ga(np), gb(n_r_);
    for (int i = 0; i < np; ++i) ga(i) = randn(rng);
    for (int i = 0; i < n_r_; ++i) gb(i) = randn(rng);
    const VectorXd a = sigma_ * (factor_a_ * ga);
    const VectorXd b = sigma_ * (factor_b_ * gb);

    const double wa = std::sqrt(delta_);
    const double wb = std::sqrt(1.0 - delta_);
    MatrixXd f(n_r_, np);
    for (int col = 0; col < np; ++col)
        for (int i = 0; i < n_r_; ++i)
            f(i, col) = wa * a(col) + wb * b(i);
    return f;
}

// --------------------------------------------------------------------------
// Large-scale map and realizations

LargeScaleMap draw_large_scale(const DeploymentGeometry& geom,
                               const SystemConfig& cfg, std::mt19937_64& rng) {
    const int np = cfg.n_t * cfg.n_wg;
    LargeScaleMap map;
    map.beta.resize(cfg.n_r, np);
    map.k_factor.resize(cfg.n_r, np);
    map.has_los.resize(cfg.n_r, np);
    map.shadow_db.resize(cfg.n_r, np);

    // LoS flags first, then the shadow field; fixed draw order keeps the map
    // a pure function of the rng substream.
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int col = 0; col < np; ++col) {
        const Vec3& pa = geom.candidate_pa_positions[col / cfg.n_t][col % cfg.n_t];
        for (int i = 0; i < cfg.n_r; ++i) {
            const double d = distance(pa, geom.rx_elements[i]);
            map.has_los(i, col) = unif(rng) < los_probability(d);
        }
    }

    ShadowSampler shadow(geom, cfg);
    map.shadow_db = shadow.sample(rng);

    for (int col = 0; col < np; ++col) {
        const Vec3& pa = geom.candidate_pa_positions[col / cfg.n_t][col % cfg.n_t];
        for (int i = 0; i < cfg.n_r; ++i) {
            const double d = distance(pa, geom.rx_elements[i]);
            const bool los = map.has_los(i, col);
            map.k_factor(i, col) = rician_factor(d, los);
            const double beta_db = path_loss_db(d, los) + map.shadow_db(i, col);
            map.beta(i, col) = std::pow(10.0, beta_db / 10.0);
        }
    }
    return map;
}

ChannelRealization realize_channel(const DeploymentGeometry& geom,
                                   const LargeScaleMap& large_scale,
                                   std::mt19937_64& rng) {
    const int n_wg = static_cast<int>(geom.feed_points.size());
    const int n_t = static_cast<int>(geom.candidate_pa_positions[0].size());
    const int n_r = static_cast<int>(geom.rx_elements.size());
    if (large_scale.beta.rows() != n_r || large_scale.beta.cols() != n_t * n_wg)
        throw std::invalid_argument("realize_channel: large-scale shape mismatch");

    ChannelRealization cr;
    cr.h.resize(n_r, n_t * n_wg);
    cr.b.resize(n_wg);
    cr.k_los.resize(n_wg);
    cr.k_nlos.resize(n_wg);
    cr.h_bar.resize(n_wg);
    cr.h_tilde.resize(n_wg);
    cr.gamma.resize(n_wg);

    for (int n = 0; n < n_wg; ++n) {
        MatrixXd b(n_r, n_t), klos(n_r, n_t), knlos(n_r, n_t);
        MatrixXcd hbar = MatrixXcd::Ones(n_r, n_t);
        MatrixXcd htilde(n_r, n_t), gamma(n_r, n_t);
        for (int j = 0; j < n_t; ++j) {
            const int col = n * n_t + j;
            const std::complex<double> g = waveguide_phase(
                geom.feed_points[n], geom.candidate_pa_positions[n][j],
                geom.lambda_g_m);
            for (int i = 0; i < n_r; ++i) {
                const double k = large_scale.k_factor(i, col);
                b(i, j) = std::sqrt(large_scale.beta(i, col));
                klos(i, j) = std::sqrt(k / (k + 1.0));
                knlos(i, j) = std::sqrt(1.0 / (k + 1.0));
                htilde(i, j) = crandn(rng);
                gamma(i, j) = g;
            }
        }
        cr.b[n] = std::move(b);
        cr.k_los[n] = std::move(klos);
        cr.k_nlos[n] = std::move(knlos);
        cr.h_bar[n] = std::move(hbar);
        cr.h_tilde[n] = std::move(htilde);
        cr.gamma[n] = std::move(gamma);

        cr.h.middleCols(n * n_t, n_t) =
            cr.b[n].cwiseProduct(cr.k_los[n]).cast<std::complex<double>>()
                .cwiseProduct(cr.h_bar[n])
                .cwiseProduct(cr.gamma[n]) +
            cr.b[n].cwiseProduct(cr.k_nlos[n]).cast<std::complex<double>>()
                .cwiseProduct(cr.h_tilde[n])
                .cwiseProduct(cr.gamma[n]);
    }
    return cr;
}

MatrixXcd ChannelRealization::recompose() const {
    const int n_wg = static_cast<int>(b.size());
    const int n_r = static_cast<int>(b[0].rows());
    const int n_t = static_cast<int>(b[0].cols());
    MatrixXcd out(n_r, n_t * n_wg);
    for (int n = 0; n < n_wg; ++n) {
        const MatrixXcd small =
            k_los[n].cast<std::complex<double>>().cwiseProduct(h_bar[n]) +
            k_nlos[n].cast<std::complex<double>>().cwiseProduct(h_tilde[n]);
        out.middleCols(n * n_t, n_t) =
            b[n].cast<std::complex<double>>().cwiseProduct(small).cwiseProduct(gamma[n]);
    }
    return out;
}

ChannelStatistics channel_statistics(const DeploymentGeometry& geom,
                                     const LargeScaleMap& large_scale) {
    const int n_wg = static_cast<int>(geom.feed_points.size());
    const int n_t = static_cast<int>(geom.candidate_pa_positions[0].size());
    const int n_r = static_cast<int>(geom.rx_elements.size());
    const int np = n_t * n_wg;
    if (large_scale.beta.rows() != n_r || large_scale.beta.cols() != np)
        throw std::invalid_argument("channel_statistics: large-scale shape mismatch");

    // Conditional on the map, only the scattered component is random:
    //   E{h} = sqrt(beta) sqrt(K/(K+1)) gamma,  Var{h} = beta / (K+1).
    // In the vec(H^*) ordering (columns grouped per waveguide), the mean is
    // the stacked conjugated per-waveguide blocks and the covariance is block
    // (in fact entrywise) diagonal; the commutation matrix permutes both into
    // the vec(H^H) ordering.
    VectorXcd mean_blocks(n_r * np);
    VectorXd var_blocks(n_r * np);
    for (int col = 0; col < np; ++col) {
        const std::complex<double> g = waveguide_phase(
            geom.feed_points[col / n_t],
            geom.candidate_pa_positions[col / n_t][col % n_t], geom.lambda_g_m);
        for (int i = 0; i < n_r; ++i) {
            const double beta = large_scale.beta(i, col);
            const double k = large_scale.k_factor(i, col);
            mean_blocks(col * n_r + i) =
                std::sqrt(beta) * std::sqrt(k / (k + 1.0)) * std::conj(g);
            var_blocks(col * n_r + i) = beta / (k + 1.0);
        }
    }

    ChannelStatistics stats;
    stats.k_commutation = commutation_matrix(n_r, np);
    stats.u_bar = stats.k_commutation * mean_blocks;
    const MatrixXcd diag_cov =
        var_blocks.cast<std::complex<double>>().asDiagonal();
    stats.c_u = stats.k_commutation * diag_cov *
                stats.k_commutation.transpose();
    return stats;
}

// --------------------------------------------------------------------------
// Matrix dump

void write_matrix_txt(const std::string& path, const MatrixXcd& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.precision(17);
    out << m.rows() << " " << m.cols() << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << " ";
            out << m(i, j).real() << " " << m(i, j).imag();
        }
        out << "\n";
    }
}

MatrixXcd read_matrix_txt(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    Eigen::Index rows = 0, cols = 0;
    in >> rows >> cols;
    if (!in || rows <= 0 || cols <= 0)
        throw std::runtime_error("bad matrix header in " + path);
    MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            double re = 0.0, im = 0.0;
            in >> re >> im;
            if (!in) throw std::runtime_error("truncated matrix in " + path);
            m(i, j) = {re, im};
        }
    }
    return m;
}

} // namespace paim
