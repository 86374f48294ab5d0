#include "fedkm/phy_oac.hpp"

#include <cmath>
#include <stdexcept>

namespace fedkm {

double PhyConfig::noise_variance() const {
    return std::pow(10.0, -snr_db / 10.0);
}

double PhyConfig::symbol_energy() const {
    return std::sqrt(static_cast<double>(codec.beta));
}

void PhyConfig::validate() const {
    codec.validate();
    if (num_values < 1) {
        throw std::invalid_argument("PhyConfig: num_values must be >= 1");
    }
    if (num_eds < 0) {
        throw std::invalid_argument("PhyConfig: num_eds must be >= 0");
    }
    if (std::isnan(snr_db)) {
        throw std::invalid_argument("PhyConfig: snr_db must not be NaN");
    }
}

ChannelDraw ChannelDraw::awgn(int num_eds, std::size_t grid_size) {
    return {ChannelKind::Awgn, num_eds, grid_size, {}};
}

ChannelDraw ChannelDraw::flat(std::vector<std::complex<double>> per_ed, std::size_t grid_size) {
    const int k = static_cast<int>(per_ed.size());
    return {ChannelKind::FlatFading, k, grid_size, std::move(per_ed)};
}

ChannelDraw ChannelDraw::selective(std::vector<std::complex<double>> per_ed_per_resource,
                                   int num_eds, std::size_t grid_size) {
    if (per_ed_per_resource.size() != static_cast<std::size_t>(num_eds) * grid_size) {
        throw std::invalid_argument("ChannelDraw: coefficient count mismatch");
    }
    return {ChannelKind::FreqSelective, num_eds, grid_size, std::move(per_ed_per_resource)};
}

ChannelDraw draw_channel(const PhyConfig& cfg, Rng& rng) {
    const std::size_t grid = cfg.grid_size();
    switch (cfg.channel_kind) {
        case ChannelKind::Awgn:
            return ChannelDraw::awgn(cfg.num_eds, grid);
        case ChannelKind::FlatFading: {
            std::vector<std::complex<double>> coeffs(static_cast<std::size_t>(cfg.num_eds));
            for (auto& g : coeffs) g = rng.complex_gaussian();
            return ChannelDraw::flat(std::move(coeffs), grid);
        }
        default: {
            std::vector<std::complex<double>> coeffs(static_cast<std::size_t>(cfg.num_eds) * grid);
            for (auto& g : coeffs) g = rng.complex_gaussian();
            return ChannelDraw::selective(std::move(coeffs), cfg.num_eds, grid);
        }
    }
}

std::size_t resource_index(int q, int d, int j, const PhyConfig& cfg) {
    if (q < 0 || q >= cfg.num_values || d < 0 || d >= cfg.codec.digits || j < 0 ||
        j >= cfg.codec.beta) {
        throw std::out_of_range("resource_index: (q,d,j) out of range");
    }
    const std::size_t beta = static_cast<std::size_t>(cfg.codec.beta);
    const std::size_t digits = static_cast<std::size_t>(cfg.codec.digits);
    return beta * digits * static_cast<std::size_t>(q) + beta * static_cast<std::size_t>(d) +
           static_cast<std::size_t>(j);
}

ResourceTriple inverse_resource_index(std::size_t l, const PhyConfig& cfg) {
    if (l >= cfg.grid_size()) {
        throw std::out_of_range("inverse_resource_index: resource index out of range");
    }
    const std::size_t beta = static_cast<std::size_t>(cfg.codec.beta);
    const std::size_t digits = static_cast<std::size_t>(cfg.codec.digits);
    return {static_cast<int>(l / (digits * beta)),
            static_cast<int>((l / beta) % digits),
            static_cast<int>(l % beta)};
}

TransmitGrid modulate(std::span<const double> values, const PhyConfig& cfg, Rng& rng) {
    cfg.validate();
    if (values.size() != static_cast<std::size_t>(cfg.num_values)) {
        throw std::invalid_argument("modulate: expected Q values");
    }
    const double amplitude = std::sqrt(cfg.symbol_energy());  // beta^(1/4)
    const int half = (cfg.codec.beta - 1) / 2;
    TransmitGrid grid(cfg.grid_size(), {0.0, 0.0});
    for (int q = 0; q < cfg.num_values; ++q) {
        const DigitVector numerals = encode(values[static_cast<std::size_t>(q)], cfg.codec);
        for (int d = 0; d < cfg.codec.digits; ++d) {
            const int j = numerals[static_cast<std::size_t>(d)] + half;
            grid[resource_index(q, d, j, cfg)] = amplitude * rng.qpsk();
        }
    }
    return grid;
}

ReceivedGrid superpose(std::span<const TransmitGrid> grids, const ChannelDraw& channel,
                       const PhyConfig& cfg, Rng& noise_rng) {
    const std::size_t size = cfg.grid_size();
    if (grids.size() != static_cast<std::size_t>(cfg.num_eds)) {
        throw std::invalid_argument("superpose: expected one transmit grid per device");
    }
    for (const TransmitGrid& g : grids) {
        if (g.size() != size) {
            throw std::invalid_argument("superpose: transmit grid size mismatch");
        }
    }
    const double sigma_n = std::sqrt(cfg.noise_variance());
    ReceivedGrid received(size, {0.0, 0.0});
    for (std::size_t k = 0; k < grids.size(); ++k) {
        const TransmitGrid& x = grids[k];
        for (std::size_t l = 0; l < size; ++l) {
            received[l] += channel.coefficient(static_cast<int>(k), l) * x[l];
        }
    }
    for (std::size_t l = 0; l < size; ++l) {
        received[l] += sigma_n * noise_rng.complex_gaussian();
    }
    return received;
}

std::vector<double> estimate_counts(const ReceivedGrid& received, const PhyConfig& cfg) {
    const double sigma2 = cfg.noise_variance();
    const double es = cfg.symbol_energy();
    std::vector<double> counts(received.size());
    for (std::size_t l = 0; l < received.size(); ++l) {
        counts[l] = (std::norm(received[l]) - sigma2) / es;
    }
    return counts;
}

std::vector<double> estimate_sums(const ReceivedGrid& received, const PhyConfig& cfg) {
    cfg.validate();
    if (received.size() != cfg.grid_size()) {
        throw std::invalid_argument("estimate_sums: received grid size mismatch");
    }
    const std::vector<double> counts = estimate_counts(received, cfg);
    const int half = (cfg.codec.beta - 1) / 2;
    std::vector<double> sums(static_cast<std::size_t>(cfg.num_values));
    AggregateDigitVector aggregate(static_cast<std::size_t>(cfg.codec.digits));
    for (int q = 0; q < cfg.num_values; ++q) {
        for (int d = 0; d < cfg.codec.digits; ++d) {
            double digit_sum = 0.0;
            for (int j = 0; j < cfg.codec.beta; ++j) {
                digit_sum += static_cast<double>(j - half) * counts[resource_index(q, d, j, cfg)];
            }
            aggregate[static_cast<std::size_t>(d)] = digit_sum;
        }
        sums[static_cast<std::size_t>(q)] = decode(std::span<const double>(aggregate), cfg.codec);
    }
    return sums;
}

}  // namespace fedkm
