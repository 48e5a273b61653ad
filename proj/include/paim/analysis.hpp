// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#ifndef PAIM_ANALYSIS_HPP
#define PAIM_ANALYSIS_HPP

#include <vector>

#include <Eigen/Dense>

#include "paim/channel.hpp"
#include "paim/modem.hpp"

namespace paim {

/// One ordered signal pair: error vector, bit distance, quadratic form.
struct PairwiseContext {
    VectorXcd delta; // x_i - x_j
    int n_bits = 0;  // Hamming distance between the bit blocks

    // Q = I_{n_r} (x) delta delta^H, materialized on demand.
    MatrixXcd q_form(int n_r) const;
};

double q_function(double x);

// Q(sqrt(rho ||H delta||^2 / (2 N0))), exact via erfc.
double conditional_pep(const MatrixXcd& h, const VectorXcd& delta, double rho,
                       double n0);

// u^H Q u with u = vec(H^H); equals ||H delta||^2.
double quadratic_form_value(const MatrixXcd& h, const VectorXcd& delta);

// MGF of gamma = u^H Q u for u ~ CN(u_bar, C_u), dense resolvent route:
//   exp(s u_bar^H Q (I - s C_u Q)^{-1} u_bar) / det(I - s C_u Q).
// Throws when the resolvent is singular, naming s.
double pep_mgf(const ChannelStatistics& stats, const MatrixXcd& q, double s);

/// Rank-n_r core of the same MGF: with V = I (x) delta, the resolvent
/// collapses to a = V^H u_bar and G = V^H C_u V.
class PairStatistics {
  public:
    PairStatistics(const ChannelStatistics& stats, const VectorXcd& delta,
                   int n_r);
    double mgf(double s) const;

  private:
    VectorXcd a_;
    MatrixXcd g_;
};

enum class PepVariant { ClosedForm, Quadrature, Conditional };

// (1/pi) Int_0^{pi/2} MGF(-rho / (4 N0 sin^2 theta)) d theta,
// fixed-order Gauss-Legendre (order 64 unless overridden).
double pep_quadrature(const PairStatistics& pair, double rho, double n0,
                      int order = 64);
double pep_quadrature(const ChannelStatistics& stats, const MatrixXcd& q,
                      double rho, double n0, int order = 64);

// (1/12) MGF(-rho/(4 N0)) + (1/4) MGF(-rho/(3 N0)).
double pep_closed_form(const PairStatistics& pair, double rho, double n0);
double pep_closed_form(const ChannelStatistics& stats, const MatrixXcd& q,
                       double rho, double n0);

struct BerBound {
    double value = 0.0;         // union bound, may exceed 1 at low SNR
    double value_clamped = 0.0; // min(value, 1), for reporting
    PepVariant variant = PepVariant::ClosedForm;
    std::vector<double> per_pair_terms; // filled on request
};

// (1 / (eta 2^eta)) sum_{i != j} n_ij PEP(i -> j) over the signal set.
// PEP(i -> j) = PEP(j -> i), so ordered pairs are folded; individual PEPs
// are clipped to [0, 1/2] before summation.
BerBound union_bound(const Modem& modem, const ChannelStatistics& stats,
                     const std::vector<TransmitFrame>& signal_set, double rho,
                     double n0, PepVariant variant,
                     bool keep_per_pair_terms = false);

// Conditional bound for a given realization, using the two-exponential
// Q-function approximation (the precoder objective at unit weights).
double conditional_union_bound(const MatrixXcd& h, const Modem& modem,
                               const std::vector<TransmitFrame>& signal_set,
                               double rho, double n0);

const char* pep_variant_name(PepVariant v);

} // namespace paim

#endif
