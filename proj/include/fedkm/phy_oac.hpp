#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fedkm/balanced_codec.hpp"
#include "fedkm/rng.hpp"

namespace fedkm {

enum class ChannelKind { Awgn, FlatFading, FreqSelective };

/// Physical-layer parameters for one aggregation round.
///
/// Each of the K devices transmits Q encoded values; every numeral occupies
/// a block of beta resources of which exactly one is activated, so the grid
/// spans Q * beta * digits complex-valued resources.
struct PhyConfig {
    CodecConfig codec;
    int num_values = 1;   // Q, values per device per round
    double snr_db = 0.0;  // SNR = 1/sigma_n^2; +inf means noiseless
    ChannelKind channel_kind = ChannelKind::Awgn;
    int num_eds = 1;      // K

    std::size_t grid_size() const {
        return static_cast<std::size_t>(num_values) *
               static_cast<std::size_t>(codec.beta) *
               static_cast<std::size_t>(codec.digits);
    }

    /// sigma_n^2 = 10^(-snr_db/10).
    double noise_variance() const;

    /// E_s = sqrt(beta).
    double symbol_energy() const;

    void validate() const;
};

using TransmitGrid = std::vector<std::complex<double>>;
using ReceivedGrid = std::vector<std::complex<double>>;

/// Per-round channel realization: one coefficient per (device, resource).
/// Awgn stores nothing (all-ones), FlatFading one coefficient per device,
/// FreqSelective a full K x grid matrix.
class ChannelDraw {
public:
    static ChannelDraw awgn(int num_eds, std::size_t grid_size);
    static ChannelDraw flat(std::vector<std::complex<double>> per_ed, std::size_t grid_size);
    static ChannelDraw selective(std::vector<std::complex<double>> per_ed_per_resource,
                                 int num_eds, std::size_t grid_size);

    std::complex<double> coefficient(int ed, std::size_t l) const {
        switch (kind_) {
            case ChannelKind::Awgn: return {1.0, 0.0};
            case ChannelKind::FlatFading: return coeffs_[static_cast<std::size_t>(ed)];
            default: return coeffs_[static_cast<std::size_t>(ed) * grid_size_ + l];
        }
    }

    ChannelKind kind() const { return kind_; }
    int num_eds() const { return num_eds_; }
    std::size_t grid_size() const { return grid_size_; }

private:
    ChannelDraw(ChannelKind kind, int num_eds, std::size_t grid_size,
                std::vector<std::complex<double>> coeffs)
        : kind_(kind), num_eds_(num_eds), grid_size_(grid_size), coeffs_(std::move(coeffs)) {}

    ChannelKind kind_;
    int num_eds_;
    std::size_t grid_size_;
    std::vector<std::complex<double>> coeffs_;
};

/// Draw this round's coefficients: unit-variance circularly-symmetric
/// Gaussian per device (flat) or per device and resource (selective).
ChannelDraw draw_channel(const PhyConfig& cfg, Rng& rng);

/// l = beta*D*q + beta*d + j.
std::size_t resource_index(int q, int d, int j, const PhyConfig& cfg);

struct ResourceTriple {
    int q;  // value index
    int d;  // digit index
    int j;  // alphabet slot
    bool operator==(const ResourceTriple&) const = default;
};

/// q = l/(D*beta), d = (l/beta) mod D, j = l mod beta.
ResourceTriple inverse_resource_index(std::size_t l, const PhyConfig& cfg);

/// Encode each value and activate one resource per numeral: the slot of the
/// numeral's alphabet position carries sqrt(E_s) times a random QPSK symbol,
/// all other resources are zero. QPSK symbols are drawn per numeral in
/// ascending (q, d) order from `rng`.
TransmitGrid modulate(std::span<const double> values, const PhyConfig& cfg, Rng& rng);

/// y_l = sum_k g_{k,l} x_{k,l} + w_l with w_l complex Gaussian of total
/// variance sigma_n^2. Devices are summed in index order so a fixed seed
/// reproduces the grid bit-for-bit.
ReceivedGrid superpose(std::span<const TransmitGrid> grids, const ChannelDraw& channel,
                       const PhyConfig& cfg, Rng& noise_rng);

/// Non-coherent count estimate per resource: (|y_l|^2 - sigma_n^2) / E_s.
/// Unbiased for the number of devices that activated the resource; may be
/// negative and is deliberately not clipped.
std::vector<double> estimate_counts(const ReceivedGrid& received, const PhyConfig& cfg);

/// Estimate of sum_k v_{k,q} for each of the Q values: per digit the counts
/// are combined into an aggregate numeral sum_j s_j * count(q,d,j), then the
/// aggregate digit vector is decoded.
std::vector<double> estimate_sums(const ReceivedGrid& received, const PhyConfig& cfg);

}  // namespace fedkm
