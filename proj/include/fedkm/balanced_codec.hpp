#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fedkm {

/// Parameters of the balanced base-beta fixed-point codec.
///
/// A real value is clamped to [-v_max, v_max] and quantized onto the
/// 2*xi + 1 levels spanned by `digits` numerals of odd base `beta`, where
/// xi = (beta^digits - 1) / 2. Numerals live in the symmetric alphabet
/// {-(beta-1)/2, ..., (beta-1)/2}.
struct CodecConfig {
    int beta = 3;
    int digits = 1;
    double v_max = 1.0;

    /// (beta^digits - 1) / 2. Throws if beta^digits overflows 64 bits.
    std::int64_t xi() const;

    /// Quantizer step v_max / xi.
    double step() const { return v_max / static_cast<double>(xi()); }

    /// Throws std::invalid_argument if beta is not an odd integer >= 3,
    /// digits < 1, or v_max is not a positive finite real.
    void validate() const;
};

/// Balanced numerals, least-significant digit first.
using DigitVector = std::vector<int>;

/// Real-valued numerals (sums or noisy estimates across devices), LSD first.
using AggregateDigitVector = std::vector<double>;

/// Encode one real scalar: clamp to [-v_max, v_max], scale by xi/v_max,
/// shift by xi + 1/2, floor, guard into [0, 2*xi], expand in base beta with
/// `digits` digits, and recenter each digit by (beta-1)/2.
DigitVector encode(double value, const CodecConfig& cfg);

/// (v_max/xi) * sum_d numerals[d] * beta^d. Linear in the numerals; accepts
/// real-valued aggregates as well as exact integer digit vectors.
double decode(std::span<const double> numerals, const CodecConfig& cfg);
double decode(std::span<const int> numerals, const CodecConfig& cfg);

/// decode(encode(value)): the value the codec reproduces for this input.
double quantize(double value, const CodecConfig& cfg);

}  // namespace fedkm
