#pragma once

#include <stdexcept>
#include <vector>

namespace bess {

/// Amplitude alphabet of M-ASK: the odd values {1, 3, ..., M-1}.
///
/// The trellis level reached by amplitude a = 2t+1 sits (a^2-1)/8 = t(t+1)/2
/// levels above the current one; those offsets drive all connectivity.
class Alphabet {
public:
    explicit Alphabet(int m) : m_(m) {
        if (m < 2 || m % 2 != 0) throw std::invalid_argument("ASK order must be even and positive");
        for (int a = 1; a < m; a += 2) amplitudes_.push_back(a);
    }

    int order() const { return m_; }
    const std::vector<int>& amplitudes() const { return amplitudes_; }
    int size() const { return int(amplitudes_.size()); }  // M/2

    /// Level offsets t(t+1)/2 for t = 0..M/2-1, ascending.
    std::vector<int> level_offsets() const {
        std::vector<int> off;
        for (int t = 0; t < size(); ++t) off.push_back(t * (t + 1) / 2);
        return off;
    }

    static int level_offset(int amplitude) {
        int t = (amplitude - 1) / 2;
        return t * (t + 1) / 2;
    }

    bool contains(int amplitude) const {
        return amplitude >= 1 && amplitude < m_ && amplitude % 2 == 1;
    }

    bool operator==(const Alphabet&) const = default;

private:
    int m_;
    std::vector<int> amplitudes_;
};

}  // namespace bess
