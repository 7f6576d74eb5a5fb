#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "bess/bignum.hpp"

namespace bess {

/// Raised when a value's exponent does not fit the configured exponent width.
/// Usually means the mantissa/exponent budget is too small for the trellis
/// input length; see exponent_length() for the sizing rule.
class ExponentOverflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Width budget of the bounded-precision format: an n_alpha-bit mantissa and
/// an n_beta-bit exponent.
struct Precision {
    int mantissa_bits = 0;  // n_alpha, >= 2
    int exponent_bits = 0;  // n_beta,  >= 1

    Precision() = default;
    Precision(int n_alpha, int n_beta);

    int total_bits() const { return mantissa_bits + exponent_bits; }
    bool operator==(const Precision&) const = default;
};

/// Bounded-precision nonnegative integer: value = alpha * 2^beta.
///
/// Normalization: beta is zero, or the leading mantissa bit is set. This
/// makes the (alpha, beta) pair unique per value, so equality is field-wise.
/// Every representable value is an exact integer; the format supports no
/// fractions and no negatives.
class BPNum {
public:
    BPNum() = default;
    BPNum(std::uint64_t alpha, std::uint32_t beta) : alpha_(alpha), beta_(beta) {}

    std::uint64_t alpha() const { return alpha_; }
    std::uint32_t beta() const { return beta_; }
    bool is_zero() const { return alpha_ == 0; }

    /// The exact represented integer, alpha * 2^beta.
    BigUint value() const { return BigUint(alpha_) << beta_; }

    std::size_t value_bit_length() const;

    bool operator==(const BPNum&) const = default;

private:
    std::uint64_t alpha_ = 0;
    std::uint32_t beta_ = 0;
};

/// Largest bounded-precision value <= x: keeps the most significant
/// mantissa_bits binary digits of x and zeroes the rest.
BPNum round_down(const BigUint& x, Precision prec);

/// Exact integer sum of the terms, then one round_down. The result never
/// exceeds the exact sum, which is what keeps rounded trellises invertible.
BPNum bp_sum(std::span<const BPNum> terms, Precision prec);

/// Multiply by 2^t. Exact: only the exponent (and, for denormal small
/// values, the mantissa's position) changes.
BPNum bp_shift(BPNum x, std::uint32_t t, Precision prec);

/// Exponent width needed so that every count of a trellis with input length
/// k bits fits: ceil(log2(k + 1 - n_alpha)).
int exponent_length(int k, int n_alpha);

/// Total order consistent with the represented values.
std::strong_ordering bp_compare(BPNum a, BPNum b);

}  // namespace bess
