#include "fedkm/balanced_codec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fedkm {

std::int64_t CodecConfig::xi() const {
    std::int64_t pow = 1;
    for (int d = 0; d < digits; ++d) {
        if (pow > std::numeric_limits<std::int64_t>::max() / beta) {
            throw std::invalid_argument("CodecConfig: beta^digits overflows 64-bit range");
        }
        pow *= beta;
    }
    return (pow - 1) / 2;
}

void CodecConfig::validate() const {
    if (beta < 3 || beta % 2 == 0) {
        throw std::invalid_argument("CodecConfig: beta must be an odd integer >= 3");
    }
    if (digits < 1) {
        throw std::invalid_argument("CodecConfig: digits must be >= 1");
    }
    if (!(v_max > 0.0) || !std::isfinite(v_max)) {
        throw std::invalid_argument("CodecConfig: v_max must be positive and finite");
    }
    xi();
}

DigitVector encode(double value, const CodecConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(value)) {
        throw std::invalid_argument("encode: value must be finite");
    }
    const std::int64_t xi = cfg.xi();
    const double clamped = std::max(-cfg.v_max, std::min(value, cfg.v_max));
    const double scaled = (static_cast<double>(xi) / cfg.v_max) * clamped
                          + static_cast<double>(xi) + 0.5;
    // Guard against floating-point spill at the clamp edges; the exact-math
    // range of the floor is [0, 2*xi].
    std::int64_t level = static_cast<std::int64_t>(std::floor(scaled));
    level = std::clamp<std::int64_t>(level, 0, 2 * xi);

    const int half = (cfg.beta - 1) / 2;
    DigitVector numerals(static_cast<std::size_t>(cfg.digits));
    for (int d = 0; d < cfg.digits; ++d) {
        numerals[static_cast<std::size_t>(d)] = static_cast<int>(level % cfg.beta) - half;
        level /= cfg.beta;
    }
    return numerals;
}

namespace {

template <typename T>
double decode_impl(std::span<const T> numerals, const CodecConfig& cfg) {
    cfg.validate();
    if (numerals.size() != static_cast<std::size_t>(cfg.digits)) {
        throw std::invalid_argument("decode: expected " + std::to_string(cfg.digits) +
                                    " numerals, got " + std::to_string(numerals.size()));
    }
    double acc = 0.0;
    double scale = 1.0;
    for (const T n : numerals) {
        acc += static_cast<double>(n) * scale;
        scale *= static_cast<double>(cfg.beta);
    }
    return (cfg.v_max / static_cast<double>(cfg.xi())) * acc;
}

}  // namespace

double decode(std::span<const double> numerals, const CodecConfig& cfg) {
    return decode_impl(numerals, cfg);
}

double decode(std::span<const int> numerals, const CodecConfig& cfg) {
    return decode_impl(numerals, cfg);
}

double quantize(double value, const CodecConfig& cfg) {
    return decode(std::span<const int>(encode(value, cfg)), cfg);
}

}  // namespace fedkm
