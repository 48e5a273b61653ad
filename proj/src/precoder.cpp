// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#include "paim/precoder.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace paim {

MatrixXcd PairDifferenceBlocks::d_matrix(const VectorXcd& delta, int n_t,
                                         int n_wg) {
    MatrixXcd d = MatrixXcd::Zero(n_t * n_wg, n_wg);
    for (int k = 0; k < n_wg; ++k)
        d.block(k * n_t, k, n_t, 1) = delta.segment(k * n_t, n_t);
    return d;
}

PairDifferenceBlocks PairDifferenceBlocks::build(
    const MatrixXcd& h, const Modem& modem,
    const std::vector<TransmitFrame>& signal_set) {
    const int n_t = modem.n_t();
    const int n_wg = modem.n_wg();
    const int eta = modem.spectral_efficiency();
    const double norm = static_cast<double>(eta) * std::pow(2.0, eta);

    PairDifferenceBlocks blocks;
    blocks.n_wg_ = n_wg;
    const std::size_t count = signal_set.size();
    blocks.pairs_.reserve(count * (count - 1) / 2);

    VectorXcd delta(static_cast<Eigen::Index>(n_t) * n_wg);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            for (Eigen::Index k = 0; k < delta.size(); ++k)
                delta(k) = signal_set[i].x[k] - signal_set[j].x[k];
            const int n_bits =
                hamming_distance(signal_set[i].bits, signal_set[j].bits);
            const MatrixXcd hd = h * d_matrix(delta, n_t, n_wg);
            Pair p;
            p.g = hd.adjoint() * hd;
            p.weight = 2.0 * n_bits / norm;
            blocks.pairs_.push_back(std::move(p));
        }
    }
    return blocks;
}

PairDifferenceBlocks PairDifferenceBlocks::screened(const VectorXcd& w,
                                                    double rho, double n0,
                                                    double nats) const {
    const double c4 = rho / (4.0 * n0);
    double emin = std::numeric_limits<double>::infinity();
    std::vector<double> expo;
    expo.reserve(pairs_.size());
    for (const auto& p : pairs_) {
        const double q = (w.adjoint() * p.g * w)(0).real();
        expo.push_back(c4 * q);
        emin = std::min(emin, c4 * q);
    }
    PairDifferenceBlocks out;
    out.n_wg_ = n_wg_;
    for (std::size_t i = 0; i < pairs_.size(); ++i)
        if (expo[i] <= emin + nats) out.pairs_.push_back(pairs_[i]);
    return out;
}

double objective_f(const VectorXcd& w, const PairDifferenceBlocks& blocks,
                   double rho, double n0) {
    const double c4 = rho / (4.0 * n0);
    const double c3 = rho / (3.0 * n0);
    double f = 0.0;
    for (const auto& p : blocks.pairs()) {
        const double q = (w.adjoint() * p.g * w)(0).real();
        f += p.weight * (std::exp(-c4 * q) / 12.0 + std::exp(-c3 * q) / 4.0);
    }
    return f;
}

VectorXcd euclidean_gradient(const VectorXcd& w,
                             const PairDifferenceBlocks& blocks, double rho,
                             double n0) {
    const double c4 = rho / (4.0 * n0);
    const double c3 = rho / (3.0 * n0);
    VectorXcd g = VectorXcd::Zero(w.size());
    for (const auto& p : blocks.pairs()) {
        const VectorXcd gw = p.g * w;
        const double q = w.dot(gw).real();
        const double coeff =
            -p.weight * (c4 * std::exp(-c4 * q) / 12.0 +
                         c3 * std::exp(-c3 * q) / 4.0);
        g += coeff * gw;
    }
    return g;
}

VectorXcd riemannian_gradient(const VectorXcd& w, const VectorXcd& egrad) {
    const double inner = egrad.dot(w).real(); // Re{egrad^H w}
    return egrad - (inner / w.squaredNorm()) * w;
}

VectorXcd retract(const VectorXcd& w, const VectorXcd& step) {
    const VectorXcd moved = w + step;
    const double norm = moved.norm();
    if (!(norm > 0.0))
        throw std::runtime_error("retract: w + step vanished, retraction undefined");
    return std::sqrt(static_cast<double>(w.size())) * moved / norm;
}

PrecodingVector optimize_precoder(const MatrixXcd& h, const Modem& modem,
                                  const std::vector<TransmitFrame>& signal_set,
                                  double rho, double n0,
                                  const PrecoderOptions& opts) {
    PairDifferenceBlocks blocks =
        PairDifferenceBlocks::build(h, modem, signal_set);
    const int n_wg = modem.n_wg();
    VectorXcd w = VectorXcd::Ones(n_wg); // the unprecoded system

    if (opts.screen_pairs && !blocks.pairs().empty())
        blocks = blocks.screened(w, rho, n0, opts.screen_nats);

    PrecodingVector out;
    double f = objective_f(w, blocks, rho, n0);
    out.objective_trace.push_back(f);

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        const VectorXcd egrad = euclidean_gradient(w, blocks, rho, n0);
        const VectorXcd grad = riemannian_gradient(w, egrad);
        const double grad_norm2 = grad.squaredNorm();
        if (std::sqrt(grad_norm2) < opts.grad_tol) break;

        double beta = 1.0;
        bool accepted = false;
        VectorXcd w_next;
        double f_next = f;
        for (int halvings = 0; halvings < opts.max_halvings; ++halvings) {
            w_next = retract(w, -beta * grad);
            f_next = objective_f(w_next, blocks, rho, n0);
            if (f_next <= f - opts.armijo_c * beta * grad_norm2) {
                accepted = true;
                break;
            }
            beta *= 0.5;
        }
        if (!accepted) {
            out.stalled = true;
            break;
        }

        const double decrease = f - f_next;
        w = w_next;
        f = f_next;
        out.iterations = iter + 1;
        out.objective_trace.push_back(f);
        if (decrease < opts.decrease_tol * std::max(1.0, std::abs(f))) break;
    }

    out.w = w;
    out.objective = f;
    return out;
}

MatrixXcd expand_precoder(const VectorXcd& w, int n_t) {
    const int n_wg = static_cast<int>(w.size());
    MatrixXcd big = MatrixXcd::Zero(n_t * n_wg, n_t * n_wg);
    for (int k = 0; k < n_wg; ++k)
        big.block(k * n_t, k * n_t, n_t, n_t) =
            w(k) * MatrixXcd::Identity(n_t, n_t);
    return big;
}

void write_weights_csv(const std::string& path, const VectorXcd& w) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.precision(17);
    out << "waveguide,re,im\n";
    for (Eigen::Index k = 0; k < w.size(); ++k)
        out << k + 1 << "," << w(k).real() << "," << w(k).imag() << "\n";
}

} // namespace paim
