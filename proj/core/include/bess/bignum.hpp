#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bess {

/// Arbitrary-precision unsigned integer.
///
/// Path counts in shaping trellises routinely exceed 2^900, so a fixed word
/// size is not an option. The operation set is deliberately narrow: exactly
/// what trellis construction and enumerative indexing need (add, subtract
/// with a nonnegative result, compare, shifts, scaling by a machine word).
/// There is no general multiplication or division.
class BigUint {
public:
    BigUint() = default;
    BigUint(std::uint64_t v);

    static BigUint pow2(std::size_t e);
    static BigUint from_be_bytes(std::span<const std::uint8_t> bytes);

    bool is_zero() const { return limbs_.empty(); }

    /// Number of binary digits; 0 for the value 0.
    std::size_t bit_length() const;
    bool bit(std::size_t i) const;

    /// floor(log2(x)). Requires a nonzero value.
    std::size_t floor_log2() const;

    BigUint& operator+=(const BigUint& rhs);
    /// Requires *this >= rhs; throws std::underflow_error otherwise.
    BigUint& operator-=(const BigUint& rhs);
    BigUint& operator<<=(std::size_t n);
    BigUint& operator>>=(std::size_t n);

    friend BigUint operator+(BigUint a, const BigUint& b) { return a += b; }
    friend BigUint operator-(BigUint a, const BigUint& b) { return a -= b; }
    friend BigUint operator<<(BigUint a, std::size_t n) { return a <<= n; }
    friend BigUint operator>>(BigUint a, std::size_t n) { return a >>= n; }

    /// Exact product with a machine word.
    BigUint mul_u64(std::uint64_t m) const;

    /// In-place division by a machine word; returns the remainder.
    std::uint64_t divmod_u64(std::uint64_t d);

    std::strong_ordering operator<=>(const BigUint& rhs) const;
    bool operator==(const BigUint& rhs) const = default;

    /// Requires bit_length() <= 64.
    std::uint64_t to_u64() const;

    /// Nearest long double; relative error below 2^-63.
    long double to_long_double() const;

    /// Minimal big-endian magnitude; empty for the value 0.
    std::vector<std::uint8_t> to_be_bytes() const;

    std::string to_decimal() const;

private:
    void trim();

    // Little-endian 64-bit limbs; no trailing zero limb. Empty means 0.
    std::vector<std::uint64_t> limbs_;
};

}  // namespace bess
