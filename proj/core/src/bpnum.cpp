#include "bess/bpnum.hpp"

#include <bit>
#include <cassert>

namespace bess {

Precision::Precision(int n_alpha, int n_beta)
    : mantissa_bits(n_alpha), exponent_bits(n_beta) {
    if (n_alpha < 2 || n_alpha > 63)
        throw std::invalid_argument("mantissa width must be in [2, 63]");
    if (n_beta < 1 || n_beta > 31)
        throw std::invalid_argument("exponent width must be in [1, 31]");
}

std::size_t BPNum::value_bit_length() const {
    if (alpha_ == 0) return 0;
    return std::bit_width(alpha_) + beta_;
}

BPNum round_down(const BigUint& x, Precision prec) {
    std::size_t bl = x.bit_length();
    std::size_t na = std::size_t(prec.mantissa_bits);
    if (bl <= na) return BPNum(x.is_zero() ? 0 : x.to_u64(), 0);
    std::size_t beta = bl - na;
    if (beta >= (std::size_t(1) << prec.exponent_bits))
        throw ExponentOverflow("value needs a " + std::to_string(beta) +
                               "-bit exponent, width is " +
                               std::to_string(prec.exponent_bits) + " bits");
    std::uint64_t alpha = (x >> beta).to_u64();
    return BPNum(alpha, std::uint32_t(beta));
}

BPNum bp_sum(std::span<const BPNum> terms, Precision prec) {
    if (terms.empty()) throw std::invalid_argument("bp_sum of no terms");
    BigUint exact;
    for (const BPNum& t : terms) exact += t.value();
    return round_down(exact, prec);
}

BPNum bp_shift(BPNum x, std::uint32_t t, Precision prec) {
    if (x.is_zero()) return x;
    std::size_t bl = x.value_bit_length() + t;
    if (bl > std::size_t(prec.mantissa_bits) &&
        bl - prec.mantissa_bits >= (std::size_t(1) << prec.exponent_bits))
        throw ExponentOverflow("shift by " + std::to_string(t) +
                               " exceeds the exponent width");
    // A left shift never moves set bits out of the mantissa window, so this
    // is exact: the result's value is value(x) * 2^t.
    BPNum r = round_down(x.value() << t, prec);
    assert(r.value() == x.value() << t);
    return r;
}

int exponent_length(int k, int n_alpha) {
    if (k + 1 <= n_alpha)
        throw std::invalid_argument("input length too small for mantissa width");
    unsigned v = unsigned(k + 1 - n_alpha);
    return v == 1 ? 0 : int(std::bit_width(v - 1));
}

std::strong_ordering bp_compare(BPNum a, BPNum b) {
    std::size_t bla = a.value_bit_length();
    std::size_t blb = b.value_bit_length();
    if (bla != blb) return bla <=> blb;
    if (bla == 0) return std::strong_ordering::equal;
    // Equal bit lengths: align the smaller exponent up. The exponent gap is
    // at most 63 here, so both sides fit in 128 bits.
    unsigned __int128 va = a.alpha(), vb = b.alpha();
    if (a.beta() >= b.beta())
        va <<= (a.beta() - b.beta());
    else
        vb <<= (b.beta() - a.beta());
    if (va != vb) return va < vb ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace bess
