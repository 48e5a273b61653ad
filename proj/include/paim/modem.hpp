// SPDX-License-Identifier: Apache-2.0
//
// pinchsim: link-level simulation toolkit for pinching-antenna index modulation

#ifndef PAIM_MODEM_HPP
#define PAIM_MODEM_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "paim/config.hpp"

namespace paim {

using cplx = std::complex<double>;
using BitVec = std::vector<std::uint8_t>; // one bit per entry, MSB first

std::uint64_t binomial(int n, int k);

/// Rectangular Gray-labeled QAM with unit average symbol energy.
///
/// For M = 2^q the in-phase axis carries ceil(q/2) bits and the quadrature
/// axis floor(q/2). Per axis, label 0 maps to the most positive amplitude and
/// adjacent amplitudes differ in exactly one bit. BPSK (M = 2) degenerates to
/// {+1, -1} on the real axis.
class Constellation {
  public:
    explicit Constellation(int order);

    int order() const { return order_; }
    int bits_per_symbol() const { return bits_; }
    const std::vector<cplx>& points() const { return points_; }

    // label is the bit block read MSB-first as an integer.
    cplx map(std::uint32_t label) const { return points_[label]; }
    cplx map_bits(const std::uint8_t* bits) const;

    // Nearest-point inverse; equidistant ties resolve to the lower label.
    std::uint32_t demap(cplx s) const;

    // Per-axis clamp of an arbitrary complex value to the nearest
    // constellation point (ties to the lower per-axis label).
    cplx quantize(cplx s) const;

    // Box hull of the constellation, per axis.
    double min_re() const { return min_re_; }
    double max_re() const { return max_re_; }
    double min_im() const { return min_im_; }
    double max_im() const { return max_im_; }

  private:
    int order_;
    int bits_;
    int bits_i_, bits_q_;
    double scale_;
    std::vector<cplx> points_;            // indexed by label
    std::vector<double> levels_i_, levels_q_; // ascending amplitudes
    std::vector<std::uint32_t> level_label_i_, level_label_q_;
    double min_re_, max_re_, min_im_, max_im_;

    std::uint32_t quantize_axis(double v, const std::vector<double>& levels,
                                const std::vector<std::uint32_t>& labels) const;
};

/// Per-waveguide activation index sets plus their ranks in the legitimate set.
struct ActivationPattern {
    std::vector<std::vector<int>> index_sets; // n_wg sorted 0-based index sets
    std::vector<std::uint32_t> ranks;         // one rank per waveguide
};

/// Everything derived from one eta-bit information block.
struct TransmitFrame {
    BitVec bits;
    ActivationPattern pattern;
    std::vector<cplx> symbols;  // one per waveguide
    std::vector<cplx> x;        // sparse length n_t * n_wg transmit vector
};

/// Bit-to-signal mapping tables for a fixed configuration.
///
/// Bit layout: for each waveguide in order, its index-selection block
/// (im_bits wide) followed by its symbol block (log2 M wide).
class Modem {
  public:
    explicit Modem(const SystemConfig& cfg);

    int n_t() const { return n_t_; }
    int n_wg() const { return n_wg_; }
    int n_a() const { return n_a_; }
    int im_bits_per_wg() const { return im_bits_; }
    int apm_bits_per_wg() const { return constellation_.bits_per_symbol(); }
    int spectral_efficiency() const { return eta_; }
    std::uint32_t pattern_count_per_wg() const { return 1u << im_bits_; }

    const Constellation& constellation() const { return constellation_; }

    // rank <-> index set, lexicographic (combinadic) order over the first
    // 2^im_bits subsets of size n_a.
    std::vector<int> pattern_from_rank(std::uint32_t rank) const;
    std::uint32_t pattern_to_rank(const std::vector<int>& index_set) const;

    ActivationPattern pattern_from_bits(const BitVec& bits) const;
    BitVec pattern_to_bits(const ActivationPattern& pattern) const;

    TransmitFrame build_transmit(const BitVec& bits) const;
    BitVec frame_to_bits(const ActivationPattern& pattern,
                         const std::vector<std::uint32_t>& symbol_labels) const;

    // All 2^eta frames in lexicographic bit order. Throws when eta exceeds
    // the cap (default 20 bits).
    std::vector<TransmitFrame> enumerate_signal_set(int cap_bits = 20) const;

    // Selection matrix E_I as a dense 0/1 matrix, (n_t n_wg) x (n_a n_wg),
    // block diagonal with basis-vector columns.
    std::vector<std::vector<double>> selection_matrix(const ActivationPattern& pattern) const;

  private:
    int n_t_, n_wg_, n_a_;
    int im_bits_;
    int eta_;
    Constellation constellation_;
    std::vector<std::vector<int>> pattern_table_; // rank -> index set
};

int spectral_efficiency(const SystemConfig& cfg);

std::uint64_t bits_to_uint(const std::uint8_t* bits, int count);
void uint_to_bits(std::uint64_t value, std::uint8_t* bits, int count);
int hamming_distance(const BitVec& a, const BitVec& b);

} // namespace paim

#endif
