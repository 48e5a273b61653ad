// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#ifndef PAIM_DETECTOR_HPP
#define PAIM_DETECTOR_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "paim/boxqp.hpp"
#include "paim/modem.hpp"

namespace paim {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// Per-pattern reduction: equivalent channel, its thin QR and the transformed
/// received vector z = Q^H y'.
struct EquivalentChannel {
    MatrixXcd h_eq; // n_r x n_wg
    MatrixXcd q;    // n_r x n_wg, orthonormal columns
    MatrixXcd r;    // n_wg x n_wg upper triangular, real non-negative diagonal
    VectorXcd z;
};

struct SearchCounters {
    long long nodes_visited = 0;
    long long qp_solves = 0;
    long long metric_evals = 0;

    SearchCounters& operator+=(const SearchCounters& o) {
        nodes_visited += o.nodes_visited;
        qp_solves += o.qp_solves;
        metric_evals += o.metric_evals;
        return *this;
    }
};

struct DetectionResult {
    ActivationPattern pattern;
    std::vector<cplx> symbols;
    BitVec bits;
    double metric = 0.0; // ||y' - H_eq s||^2 of the decision
    SearchCounters counters;
};

/// Counters normalized per activation pattern.
struct ComplexityRecord {
    long long patterns = 0;
    double metric_evals_per_pattern = 0.0;
    double qp_solves_per_pattern = 0.0;
    double nodes_per_pattern = 0.0;
};

/// One pruning decision of the layered search, for property tests.
struct PruneEvent {
    int layer = 0;       // 1-based, layer n_wg is searched first
    double t = 0.0;      // candidate's own residual term
    double c1 = 0.0;     // box-QP lower bound on the undetermined layers
    double c2 = 0.0;     // accumulated cost of the fixed layers
    double d2 = 0.0;     // squared radius at test time
    bool admitted = false;
};

/// Joint detector for the activation pattern and the symbol vector.
///
/// Both detectors return identical bits on every input; ties resolve to the
/// lowest lexicographic bit string.
class Detector {
  public:
    explicit Detector(const SystemConfig& cfg, int enumeration_cap_bits = 20);

    const Modem& modem() const { return modem_; }

    // Number of legitimate activation patterns across all waveguides.
    long long pattern_count() const;

    // Exhaustive joint minimization of ||y - sqrt(rho) H x||^2 over the
    // legitimate signal set.
    DetectionResult ml_detect(const VectorXcd& y, const MatrixXcd& h,
                              double rho) const;

    // Box-optimized sphere decoder: per pattern, a box-QP relaxation sets the
    // initial radius (quantized to the nearest constellation vector) and
    // bounds the undetermined layers during a depth-first layered search.
    DetectionResult bo_sd_detect(const VectorXcd& y, const MatrixXcd& h,
                                 double rho,
                                 std::vector<PruneEvent>* trace = nullptr) const;

    EquivalentChannel reduce_pattern(const MatrixXcd& h,
                                     const std::vector<std::uint32_t>& ranks,
                                     const VectorXcd& y_norm) const;

  private:
    Modem modem_;
    int cap_bits_;

    void pattern_ranks(long long index, std::vector<std::uint32_t>& ranks) const;
};

ComplexityRecord search_effort(const DetectionResult& result,
                               long long pattern_count);

} // namespace paim

#endif
