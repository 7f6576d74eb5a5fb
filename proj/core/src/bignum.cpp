#include "bess/bignum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace bess {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

BigUint::BigUint(u64 v) {
    if (v != 0) limbs_.push_back(v);
}

void BigUint::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BigUint BigUint::pow2(std::size_t e) {
    BigUint r;
    r.limbs_.assign(e / 64 + 1, 0);
    r.limbs_.back() = u64{1} << (e % 64);
    return r;
}

std::size_t BigUint::bit_length() const {
    if (limbs_.empty()) return 0;
    return 64 * (limbs_.size() - 1) + std::bit_width(limbs_.back());
}

bool BigUint::bit(std::size_t i) const {
    std::size_t limb = i / 64;
    if (limb >= limbs_.size()) return false;
    return (limbs_[limb] >> (i % 64)) & 1;
}

std::size_t BigUint::floor_log2() const {
    if (limbs_.empty()) throw std::domain_error("floor_log2 of zero");
    return bit_length() - 1;
}

BigUint& BigUint::operator+=(const BigUint& rhs) {
    if (limbs_.size() < rhs.limbs_.size()) limbs_.resize(rhs.limbs_.size(), 0);
    u64 carry = 0;
    std::size_t i = 0;
    for (; i < rhs.limbs_.size(); ++i) {
        u128 s = u128(limbs_[i]) + rhs.limbs_[i] + carry;
        limbs_[i] = u64(s);
        carry = u64(s >> 64);
    }
    for (; carry && i < limbs_.size(); ++i) {
        u128 s = u128(limbs_[i]) + carry;
        limbs_[i] = u64(s);
        carry = u64(s >> 64);
    }
    if (carry) limbs_.push_back(carry);
    return *this;
}

BigUint& BigUint::operator-=(const BigUint& rhs) {
    if (*this < rhs) throw std::underflow_error("BigUint subtraction underflow");
    u64 borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        u64 sub = (i < rhs.limbs_.size()) ? rhs.limbs_[i] : 0;
        u128 d = u128(limbs_[i]) - sub - borrow;
        limbs_[i] = u64(d);
        borrow = (d >> 64) ? 1 : 0;  // wrapped around
        if (i >= rhs.limbs_.size() && borrow == 0) break;
    }
    trim();
    return *this;
}

BigUint& BigUint::operator<<=(std::size_t n) {
    if (limbs_.empty() || n == 0) return *this;
    std::size_t limb_shift = n / 64;
    std::size_t bit_shift = n % 64;
    std::size_t old = limbs_.size();
    limbs_.resize(old + limb_shift + (bit_shift ? 1 : 0), 0);
    for (std::size_t i = old; i-- > 0;) {
        u64 v = limbs_[i];
        limbs_[i] = 0;
        if (bit_shift) {
            limbs_[i + limb_shift + 1] |= v >> (64 - bit_shift);
            limbs_[i + limb_shift] |= v << bit_shift;
        } else {
            limbs_[i + limb_shift] = v;
        }
    }
    trim();
    return *this;
}

BigUint& BigUint::operator>>=(std::size_t n) {
    std::size_t limb_shift = n / 64;
    std::size_t bit_shift = n % 64;
    if (limb_shift >= limbs_.size()) {
        limbs_.clear();
        return *this;
    }
    limbs_.erase(limbs_.begin(), limbs_.begin() + limb_shift);
    if (bit_shift) {
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            limbs_[i] >>= bit_shift;
            if (i + 1 < limbs_.size()) limbs_[i] |= limbs_[i + 1] << (64 - bit_shift);
        }
    }
    trim();
    return *this;
}

BigUint BigUint::mul_u64(u64 m) const {
    BigUint r;
    if (m == 0 || limbs_.empty()) return r;
    r.limbs_.resize(limbs_.size() + 1, 0);
    u64 carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        u128 p = u128(limbs_[i]) * m + carry;
        r.limbs_[i] = u64(p);
        carry = u64(p >> 64);
    }
    r.limbs_[limbs_.size()] = carry;
    r.trim();
    return r;
}

u64 BigUint::divmod_u64(u64 d) {
    if (d == 0) throw std::domain_error("BigUint division by zero");
    u128 rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        u128 cur = (rem << 64) | limbs_[i];
        limbs_[i] = u64(cur / d);
        rem = cur % d;
    }
    trim();
    return u64(rem);
}

std::strong_ordering BigUint::operator<=>(const BigUint& rhs) const {
    if (limbs_.size() != rhs.limbs_.size())
        return limbs_.size() <=> rhs.limbs_.size();
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        if (limbs_[i] != rhs.limbs_[i]) return limbs_[i] <=> rhs.limbs_[i];
    }
    return std::strong_ordering::equal;
}

u64 BigUint::to_u64() const {
    if (limbs_.size() > 1) throw std::overflow_error("BigUint does not fit in 64 bits");
    return limbs_.empty() ? 0 : limbs_[0];
}

long double BigUint::to_long_double() const {
    std::size_t bl = bit_length();
    if (bl <= 64) return static_cast<long double>(limbs_.empty() ? 0 : limbs_[0]);
    BigUint top = *this >> (bl - 64);
    return std::ldexp(static_cast<long double>(top.to_u64()),
                      static_cast<int>(bl - 64));
}

BigUint BigUint::from_be_bytes(std::span<const std::uint8_t> bytes) {
    BigUint r;
    for (std::uint8_t b : bytes) {
        r <<= 8;
        if (b) {
            if (r.limbs_.empty()) r.limbs_.push_back(0);
            r.limbs_[0] |= b;
        }
    }
    return r;
}

std::vector<std::uint8_t> BigUint::to_be_bytes() const {
    std::vector<std::uint8_t> out;
    std::size_t nbytes = (bit_length() + 7) / 8;
    out.reserve(nbytes);
    for (std::size_t i = nbytes; i-- > 0;) {
        out.push_back(std::uint8_t(limbs_[i / 8] >> (8 * (i % 8))));
    }
    return out;
}

std::string BigUint::to_decimal() const {
    if (limbs_.empty()) return "0";
    BigUint tmp = *this;
    std::vector<u64> chunks;  // base 10^19, little-endian
    while (!tmp.is_zero()) {
        chunks.push_back(tmp.divmod_u64(10'000'000'000'000'000'000ULL));
    }
    std::string s = std::to_string(chunks.back());
    for (std::size_t i = chunks.size() - 1; i-- > 0;) {
        std::string part = std::to_string(chunks[i]);
        s += std::string(19 - part.size(), '0') + part;
    }
    return s;
}

}  // namespace bess
