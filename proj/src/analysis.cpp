// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#include "paim/analysis.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

namespace paim {

namespace {

// exp(s q_res) / det via log-determinant; resolvent passed as (I - s C Q).
double mgf_from_resolvent(const MatrixXcd& resolvent, const VectorXcd& lhs,
                          const VectorXcd& rhs, double s) {
    const Eigen::PartialPivLU<MatrixXcd> lu(resolvent);
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < resolvent.rows(); ++i) {
        const double mag = std::abs(lu.matrixLU()(i, i));
        if (!(mag > 0.0) || !std::isfinite(mag)) {
            std::ostringstream oss;
            oss << "pep_mgf: singular resolvent at s = " << s;
            throw std::runtime_error(oss.str());
        }
        log_det += std::log(mag);
    }
    const cplx quad = lhs.dot(lu.solve(rhs)); // lhs^H (I - s C Q)^{-1} rhs
    return std::exp(s * quad.real() - log_det);
}

double clip_pep(double p) { return std::min(std::max(p, 0.0), 0.5); }

template <unsigned Order>
double gauss_pep(const PairStatistics& pair, double c) {
    const auto f = [&](double theta) {
        const double st = std::sin(theta);
        return pair.mgf(-c / (st * st));
    };
    return boost::math::quadrature::gauss<double, Order>::integrate(
               f, 0.0, std::numbers::pi / 2.0) /
           std::numbers::pi;
}

} // namespace

MatrixXcd PairwiseContext::q_form(int n_r) const {
    const auto np = delta.size();
    const MatrixXcd outer = delta * delta.adjoint();
    MatrixXcd q = MatrixXcd::Zero(n_r * np, n_r * np);
    for (int m = 0; m < n_r; ++m)
        q.block(m * np, m * np, np, np) = outer;
    return q;
}

double q_function(double x) {
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double conditional_pep(const MatrixXcd& h, const VectorXcd& delta, double rho,
                       double n0) {
    if (!(n0 > 0.0)) throw std::invalid_argument("conditional_pep: n0 must be > 0");
    const double gamma = (h * delta).squaredNorm();
    return q_function(std::sqrt(rho * gamma / (2.0 * n0)));
}

double quadratic_form_value(const MatrixXcd& h, const VectorXcd& delta) {
    const Eigen::Index n_r = h.rows();
    const Eigen::Index np = h.cols();
    // u = vec(H^H): block m holds the conjugated m-th row of H.
    VectorXcd u(n_r * np);
    for (Eigen::Index m = 0; m < n_r; ++m)
        u.segment(m * np, np) = h.row(m).conjugate().transpose();
    const MatrixXcd outer = delta * delta.adjoint();
    double total = 0.0;
    for (Eigen::Index m = 0; m < n_r; ++m) {
        const VectorXcd block = u.segment(m * np, np);
        total += (block.adjoint() * outer * block)(0).real();
    }
    return total;
}

double pep_mgf(const ChannelStatistics& stats, const MatrixXcd& q, double s) {
    const Eigen::Index dim = stats.u_bar.size();
    if (q.rows() != dim || q.cols() != dim)
        throw std::invalid_argument("pep_mgf: dimension mismatch");
    const MatrixXcd resolvent =
        MatrixXcd::Identity(dim, dim) - s * (stats.c_u * q);
    const VectorXcd rhs = stats.u_bar;
    // exponent is s u_bar^H Q (I - s C Q)^{-1} u_bar
    const Eigen::PartialPivLU<MatrixXcd> lu(resolvent);
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double mag = std::abs(lu.matrixLU()(i, i));
        if (!(mag > 0.0) || !std::isfinite(mag)) {
            std::ostringstream oss;
            oss << "pep_mgf: singular resolvent at s = " << s;
            throw std::runtime_error(oss.str());
        }
        log_det += std::log(mag);
    }
    const VectorXcd solved = lu.solve(rhs);
    const cplx quad = (stats.u_bar.adjoint() * q * solved)(0);
    return std::exp(s * quad.real() - log_det);
}

PairStatistics::PairStatistics(const ChannelStatistics& stats,
                               const VectorXcd& delta, int n_r) {
    const Eigen::Index np = delta.size();
    if (stats.u_bar.size() != n_r * np)
        throw std::invalid_argument("PairStatistics: dimension mismatch");
    a_.resize(n_r);
    g_.resize(n_r, n_r);
    for (int m1 = 0; m1 < n_r; ++m1) {
        a_(m1) = delta.dot(stats.u_bar.segment(m1 * np, np));
        for (int m2 = 0; m2 < n_r; ++m2) {
            g_(m1, m2) =
                (delta.adjoint() * stats.c_u.block(m1 * np, m2 * np, np, np) *
                 delta)(0);
        }
    }
}

double PairStatistics::mgf(double s) const {
    const Eigen::Index n_r = a_.size();
    const MatrixXcd resolvent = MatrixXcd::Identity(n_r, n_r) - s * g_;
    return mgf_from_resolvent(resolvent, a_, a_, s);
}

double pep_quadrature(const PairStatistics& pair, double rho, double n0,
                      int order) {
    const double c = rho / (4.0 * n0);
    switch (order) {
        case 16: return gauss_pep<16>(pair, c);
        case 32: return gauss_pep<32>(pair, c);
        case 64: return gauss_pep<64>(pair, c);
        case 128: return gauss_pep<128>(pair, c);
        case 256: return gauss_pep<256>(pair, c);
        default:
            throw std::invalid_argument(
                "pep_quadrature: order must be one of 16, 32, 64, 128, 256");
    }
}

double pep_quadrature(const ChannelStatistics& stats, const MatrixXcd& q,
                      double rho, double n0, int order) {
    // Recover delta-free dense route by integrating the dense MGF directly.
    const double c = rho / (4.0 * n0);
    const auto f = [&](double theta) {
        const double st = std::sin(theta);
        return pep_mgf(stats, q, -c / (st * st));
    };
    switch (order) {
        case 16:
            return boost::math::quadrature::gauss<double, 16>::integrate(
                       f, 0.0, std::numbers::pi / 2.0) / std::numbers::pi;
        case 32:
            return boost::math::quadrature::gauss<double, 32>::integrate(
                       f, 0.0, std::numbers::pi / 2.0) / std::numbers::pi;
        case 64:
            return boost::math::quadrature::gauss<double, 64>::integrate(
                       f, 0.0, std::numbers::pi / 2.0) / std::numbers::pi;
        case 128:
            return boost::math::quadrature::gauss<double, 128>::integrate(
                       f, 0.0, std::numbers::pi / 2.0) / std::numbers::pi;
        case 256:
            return boost::math::quadrature::gauss<double, 256>::integrate(
                       f, 0.0, std::numbers::pi / 2.0) / std::numbers::pi;
        default:
            throw std::invalid_argument(
                "pep_quadrature: order must be one of 16, 32, 64, 128, 256");
    }
}

double pep_closed_form(const PairStatistics& pair, double rho, double n0) {
    return pair.mgf(-rho / (4.0 * n0)) / 12.0 +
           pair.mgf(-rho / (3.0 * n0)) / 4.0;
}

double pep_closed_form(const ChannelStatistics& stats, const MatrixXcd& q,
                       double rho, double n0) {
    return pep_mgf(stats, q, -rho / (4.0 * n0)) / 12.0 +
           pep_mgf(stats, q, -rho / (3.0 * n0)) / 4.0;
}

BerBound union_bound(const Modem& modem, const ChannelStatistics& stats,
                     const std::vector<TransmitFrame>& signal_set, double rho,
                     double n0, PepVariant variant, bool keep_per_pair_terms) {
    const int eta = modem.spectral_efficiency();
    if (eta < 1) throw std::invalid_argument("union_bound: eta must be >= 1");
    if (variant == PepVariant::Conditional)
        throw std::invalid_argument(
            "union_bound: conditional variant needs a realization, use "
            "conditional_union_bound");
    const std::size_t count = signal_set.size();
    if (count != (1ull << eta))
        throw std::invalid_argument("union_bound: signal set size mismatch");
    const int n_r = static_cast<int>(stats.u_bar.size() /
                                     signal_set[0].x.size());

    BerBound bound;
    bound.variant = variant;
    double sum = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            VectorXcd delta(signal_set[i].x.size());
            for (Eigen::Index k = 0; k < delta.size(); ++k)
                delta(k) = signal_set[i].x[k] - signal_set[j].x[k];
            const int n_bits =
                hamming_distance(signal_set[i].bits, signal_set[j].bits);
            const PairStatistics pair(stats, delta, n_r);
            const double pep =
                clip_pep(variant == PepVariant::ClosedForm
                             ? pep_closed_form(pair, rho, n0)
                             : pep_quadrature(pair, rho, n0));
            // PEP(i->j) = PEP(j->i): fold the ordered pair.
            const double term = 2.0 * n_bits * pep;
            sum += term;
            if (keep_per_pair_terms) bound.per_pair_terms.push_back(term);
        }
    }
    bound.value = sum / (static_cast<double>(eta) * std::pow(2.0, eta));
    bound.value_clamped = std::min(bound.value, 1.0);
    return bound;
}

double conditional_union_bound(const MatrixXcd& h, const Modem& modem,
                               const std::vector<TransmitFrame>& signal_set,
                               double rho, double n0) {
    const int eta = modem.spectral_efficiency();
    if (eta < 1)
        throw std::invalid_argument("conditional_union_bound: eta must be >= 1");
    const std::size_t count = signal_set.size();
    double sum = 0.0;
    VectorXcd delta(signal_set.empty() ? 0 : signal_set[0].x.size());
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            for (Eigen::Index k = 0; k < delta.size(); ++k)
                delta(k) = signal_set[i].x[k] - signal_set[j].x[k];
            const int n_bits =
                hamming_distance(signal_set[i].bits, signal_set[j].bits);
            const double gamma = (h * delta).squaredNorm();
            const double approx =
                std::exp(-rho * gamma / (4.0 * n0)) / 12.0 +
                std::exp(-rho * gamma / (3.0 * n0)) / 4.0;
            sum += 2.0 * n_bits * approx;
        }
    }
    return sum / (static_cast<double>(eta) * std::pow(2.0, eta));
}

const char* pep_variant_name(PepVariant v) {
    switch (v) {
        case PepVariant::ClosedForm: return "closed_form";
        case PepVariant::Quadrature: return "quadrature";
        case PepVariant::Conditional: return "conditional";
    }
    return "unknown";
}

} // namespace paim
