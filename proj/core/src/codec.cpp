#include "bess/codec.hpp"

#include <cassert>
#include <stdexcept>

namespace bess {

Shaper::Shaper(std::shared_ptr<const CountSource> trellis, bool validate)
    : trellis_(std::move(trellis)) {
    if (!trellis_) throw std::invalid_argument("shaper needs a trellis");
    if (validate) {
        if (auto rep = validate_invertibility(*trellis_); !rep)
            throw std::invalid_argument("trellis violates the invertibility condition at column " +
                                        std::to_string(rep.column) + ", level " +
                                        std::to_string(rep.level));
    }
}

std::vector<int> Shaper::encode(const BigUint& index) const {
    const CountSource& t = *trellis_;
    if (index.bit_length() > std::size_t(t.input_bits()))
        throw std::out_of_range("index needs more than k bits");
    const auto& amps = t.alphabet().amplitudes();

    BigUint residual = index;
    int level = 1;
    std::vector<int> out;
    out.reserve(std::size_t(t.seq_length()));
    for (int n = 0; n < t.seq_length(); ++n) {
        Window wn = t.window(n + 1);
        bool stepped = false;
        for (int a : amps) {
            int l2 = level + Alphabet::level_offset(a);
            if (!wn.contains(l2)) continue;
            BigUint c = t.count(n + 1, l2);
            if (c.is_zero()) continue;
            if (residual < c) {
                out.push_back(a);
                level = l2;
                stepped = true;
                break;
            }
            residual -= c;
        }
        if (!stepped)
            throw std::logic_error("encode walk dead-ends at column " + std::to_string(n) +
                                   "; trellis is corrupt");
    }
    if (!residual.is_zero())
        throw std::logic_error("encode leaves a nonzero residual; trellis is corrupt");
    return out;
}

Shaper::DecodeResult Shaper::decode(std::span<const int> amplitudes) const {
    const CountSource& t = *trellis_;
    if (int(amplitudes.size()) != t.seq_length())
        throw std::invalid_argument("sequence length does not match the trellis");
    const auto& amps = t.alphabet().amplitudes();

    BigUint rank;
    int level = 1;
    // Count of completions from the node entered at each step; used for the
    // image test below.
    std::vector<BigUint> node_count(std::size_t(t.seq_length()));
    std::vector<BigUint> rank_before(std::size_t(t.seq_length()));
    for (int n = 0; n < t.seq_length(); ++n) {
        int a = amplitudes[std::size_t(n)];
        if (!t.alphabet().contains(a))
            throw SequenceRejected("amplitude " + std::to_string(a) +
                                       " is not in the alphabet (column " +
                                       std::to_string(n) + ")",
                                   n);
        Window wn = t.window(n + 1);
        int target = level + Alphabet::level_offset(a);
        if (!wn.contains(target))
            throw SequenceRejected("sequence leaves the active window at column " +
                                       std::to_string(n),
                                   n);
        BigUint target_count = t.count(n + 1, target);
        if (target_count.is_zero())
            throw SequenceRejected("sequence passes a dead node at column " +
                                       std::to_string(n),
                                   n);
        rank_before[std::size_t(n)] = rank;
        node_count[std::size_t(n)] = std::move(target_count);
        for (int smaller : amps) {
            if (smaller >= a) break;
            int l2 = level + Alphabet::level_offset(smaller);
            if (!wn.contains(l2)) continue;
            rank += t.count(n + 1, l2);
        }
        level = target;
    }

    // The sequence is in the encoder's image iff the rank fits in k bits and
    // every suffix rank stays below the count of the node it starts from:
    // rank - rank_before[j] < count(v_j) for the node v_j entered at step
    // j-1. With rounded-down counts a representable sequence can fail either
    // test.
    bool in_image = rank.bit_length() <= std::size_t(t.input_bits());
    for (int j = 1; in_image && j < t.seq_length(); ++j) {
        BigUint suffix = rank;
        suffix -= rank_before[std::size_t(j)];
        if (suffix >= node_count[std::size_t(j - 1)]) in_image = false;
    }
    return DecodeResult{std::move(rank), in_image};
}

StreamEncoder::StreamEncoder(std::shared_ptr<const CountSource> trellis)
    : trellis_(std::move(trellis)) {
    if (!trellis_) throw std::invalid_argument("encoder needs a trellis");
    bits_remaining_ = trellis_->input_bits();
    out_.reserve(std::size_t(trellis_->seq_length()));
    advance();
}

void StreamEncoder::feed_bit(int bit) {
    if (bits_fed_ >= trellis_->input_bits())
        throw std::out_of_range("more than k bits fed to the stream encoder");
    ++bits_fed_;
    --bits_remaining_;
    if (bit) low_ += BigUint::pow2(std::size_t(bits_remaining_));
    advance();
}

void StreamEncoder::feed_bits(std::span<const int> bits) {
    for (int b : bits) feed_bit(b);
}

void StreamEncoder::advance() {
    const CountSource& t = *trellis_;
    const auto& amps = t.alphabet().amplitudes();
    while (int(out_.size()) < t.seq_length()) {
        int n = int(out_.size());
        Window wn = t.window(n + 1);
        BigUint width = BigUint::pow2(std::size_t(bits_remaining_));
        BigUint skipped;  // counts of branches below the current candidate
        bool emitted = false;
        for (int a : amps) {
            int l2 = node_level_ + Alphabet::level_offset(a);
            if (!wn.contains(l2)) continue;
            BigUint c = t.count(n + 1, l2);
            if (c.is_zero()) continue;
            // Invariant: low_ >= skipped. The whole residual interval
            // [low_, low_ + width) must fall inside this branch's bucket
            // [skipped, skipped + c) for the amplitude to be settled.
            BigUint bucket_end = skipped + c;
            if (low_ + width <= bucket_end) {
                out_.push_back(a);
                node_level_ = l2;
                low_ -= skipped;
                emitted = true;
                break;
            }
            if (low_ >= bucket_end) {
                skipped = std::move(bucket_end);
                continue;
            }
            return;  // interval straddles a branch boundary: undecided
        }
        if (!emitted)
            throw std::logic_error("stream encoder dead-ends at column " + std::to_string(n) +
                                   "; trellis is corrupt");
    }
}

StreamDecoder::StreamDecoder(std::shared_ptr<const CountSource> trellis)
    : trellis_(std::move(trellis)) {
    if (!trellis_) throw std::invalid_argument("decoder needs a trellis");
    bits_out_ = 0;
    high_ = BigUint::pow2(std::size_t(trellis_->input_bits()));
    high_ -= BigUint(1);
    emit_settled_bits();
}

void StreamDecoder::feed_amplitude(int amplitude) {
    const CountSource& t = *trellis_;
    if (fed_ >= t.seq_length())
        throw std::out_of_range("more than N amplitudes fed to the stream decoder");
    if (!t.alphabet().contains(amplitude))
        throw SequenceRejected("amplitude " + std::to_string(amplitude) +
                                   " is not in the alphabet (column " + std::to_string(fed_) +
                                   ")",
                               fed_);
    int n = fed_;
    Window wn = t.window(n + 1);
    int target = node_level_ + Alphabet::level_offset(amplitude);
    if (!wn.contains(target))
        throw SequenceRejected("sequence leaves the active window at column " +
                                   std::to_string(n),
                               n);
    BigUint target_count = t.count(n + 1, target);
    if (target_count.is_zero())
        throw SequenceRejected("sequence passes a dead node at column " + std::to_string(n),
                               n);
    for (int smaller : t.alphabet().amplitudes()) {
        if (smaller >= amplitude) break;
        int l2 = node_level_ + Alphabet::level_offset(smaller);
        if (!wn.contains(l2)) continue;
        low_ += t.count(n + 1, l2);
    }
    node_level_ = target;
    ++fed_;
    // Any remaining rank contribution is below the entered node's count, and
    // below the unemitted bit budget for sequences the encoder can produce.
    high_ = low_ + target_count;
    high_ -= BigUint(1);
    int remaining = trellis_->input_bits() - bits_out_;
    BigUint cap = BigUint::pow2(std::size_t(remaining));
    cap -= BigUint(1);
    if (low_ > cap)
        throw SequenceRejected("sequence is outside the encoder image (column " +
                                   std::to_string(n) + ")",
                               n);
    if (high_ > cap) high_ = std::move(cap);
    emit_settled_bits();
}

void StreamDecoder::feed_amplitudes(std::span<const int> amplitudes) {
    for (int a : amplitudes) feed_amplitude(a);
}

void StreamDecoder::emit_settled_bits() {
    int remaining = trellis_->input_bits() - bits_out_;
    while (remaining > 0) {
        BigUint half = BigUint::pow2(std::size_t(remaining - 1));
        int lo_bit = low_ >= half ? 1 : 0;
        int hi_bit = high_ >= half ? 1 : 0;
        if (lo_bit != hi_bit) break;
        if (lo_bit) {
            low_ -= half;
            high_ -= half;
        }
        out_.push_back(lo_bit);
        ++bits_out_;
        --remaining;
    }
}

}  // namespace bess
