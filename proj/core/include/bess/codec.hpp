#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "bess/bignum.hpp"
#include "bess/trellis.hpp"

namespace bess {

/// Decode input that leaves the sphere or the band: not representable by
/// the trellis at all. Carries the first offending column.
class SequenceRejected : public std::runtime_error {
public:
    SequenceRejected(std::string msg, int column)
        : std::runtime_error(std::move(msg)), column_(column) {}
    int column() const { return column_; }

private:
    int column_;
};

/// Invertible mapping between k-bit indices and amplitude sequences over a
/// validated trellis. Amplitudes are scanned in ascending value, so index 0
/// is the lexicographically smallest representable sequence and the mapping
/// is order-preserving on exact trellises.
class Shaper {
public:
    /// Takes shared ownership of the trellis. When `validate` is set the
    /// invertibility condition is checked up front (skip it for trellises
    /// fresh out of a builder; they were checked there).
    explicit Shaper(std::shared_ptr<const CountSource> trellis, bool validate = false);

    const CountSource& trellis() const { return *trellis_; }
    std::shared_ptr<const CountSource> trellis_ptr() const { return trellis_; }
    int input_bits() const { return trellis_->input_bits(); }
    int seq_length() const { return trellis_->seq_length(); }

    /// Maps an index in [0, 2^k) to its amplitude sequence.
    std::vector<int> encode(const BigUint& index) const;

    struct DecodeResult {
        BigUint index;
        /// True iff encode(index) reproduces the input exactly, i.e. the
        /// sequence is one the shaper can emit. Representable sequences can
        /// fall outside the image when counts were rounded down.
        bool in_image = true;
    };

    /// Maps a representable sequence back to its index. Throws
    /// SequenceRejected if the sequence leaves the active windows (out of
    /// sphere or band) or uses a foreign amplitude.
    DecodeResult decode(std::span<const int> amplitudes) const;

private:
    std::shared_ptr<const CountSource> trellis_;
};

/// Incremental encoder: bits go in (most significant first), amplitudes come
/// out as soon as they are pinned down. An amplitude is emitted once every
/// index still compatible with the fed bits walks the same trellis branch.
/// After all k bits the full sequence has been emitted and equals the block
/// encoder's output. Single-owner, not thread-safe.
class StreamEncoder {
public:
    explicit StreamEncoder(std::shared_ptr<const CountSource> trellis);

    void feed_bit(int bit);
    void feed_bits(std::span<const int> bits);

    int bits_fed() const { return bits_fed_; }
    bool finished() const { return int(out_.size()) == trellis_->seq_length(); }
    /// Amplitudes determined so far.
    const std::vector<int>& amplitudes() const { return out_; }

private:
    void advance();

    std::shared_ptr<const CountSource> trellis_;
    int bits_fed_ = 0;
    int bits_remaining_;  // unfed bits; the residual interval has width 2^this
    BigUint low_;         // smallest residual still possible at the current node
    int node_level_ = 1;
    std::vector<int> out_;
};

/// Incremental decoder: amplitudes go in, index bits come out (most
/// significant first) as soon as they are common to every index whose
/// sequence starts with the consumed prefix. Assumes its input came from the
/// matching encoder. Single-owner, not thread-safe.
class StreamDecoder {
public:
    explicit StreamDecoder(std::shared_ptr<const CountSource> trellis);

    void feed_amplitude(int amplitude);
    void feed_amplitudes(std::span<const int> amplitudes);

    int amplitudes_fed() const { return fed_; }
    bool finished() const { return fed_ == trellis_->seq_length(); }
    /// Bits determined so far.
    const std::vector<int>& bits() const { return out_; }

private:
    void emit_settled_bits();

    std::shared_ptr<const CountSource> trellis_;
    int fed_ = 0;
    int bits_out_ = 0;
    BigUint low_;   // accumulated rank, minus bits already emitted
    BigUint high_;  // largest rank still possible, same offset
    int node_level_ = 1;
    std::vector<int> out_;
};

}  // namespace bess
