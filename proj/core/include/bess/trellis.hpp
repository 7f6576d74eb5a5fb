#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "bess/alphabet.hpp"
#include "bess/bignum.hpp"
#include "bess/bpnum.hpp"

namespace bess {

/// Inclusive range of active levels in one trellis column; empty if hi < lo.
struct Window {
    int lo = 1;
    int hi = 0;

    int height() const { return hi >= lo ? hi - lo + 1 : 0; }
    bool contains(int l) const { return l >= lo && l <= hi; }
    bool operator==(const Window&) const = default;
};

struct FullTrellisParams {
    int N = 0;  // sequence length (amplitudes)
    int L = 0;  // trellis height (levels)
    Alphabet alphabet{2};

    int emax() const { return 8 * (L - 1) + N; }
    void validate() const;
    bool operator==(const FullTrellisParams&) const = default;
};

/// Accumulated-energy label of node (n, l).
inline int node_energy(int n, int l) { return 8 * (l - 1) + n; }

/// 0/1 connectivity between levels of adjacent columns, kept as the set of
/// level offsets rather than an explicit matrix. a_{ij} = 1 iff j - i is an
/// offset and 1 <= j <= size. The dense forms exist for display and tests.
class AdjacencyMatrix {
public:
    static AdjacencyMatrix full(const Alphabet& alphabet, int levels);
    static AdjacencyMatrix band(const Alphabet& alphabet, int slope, int height);

    int size() const { return size_; }
    const std::vector<int>& offsets() const { return offsets_; }

    bool connected(int i, int j) const;

    /// Dense a_{ij}, 1-based semantics in [i-1][j-1].
    std::vector<std::vector<int>> dense() const;
    /// Dense matrix with both indices reversed (row 0 = highest level), the
    /// layout used when printing trellis matrices.
    std::vector<std::vector<int>> dense_display() const;

private:
    AdjacencyMatrix(int size, std::vector<int> offsets);
    int size_;
    std::vector<int> offsets_;  // sorted j - i values
};

enum class CountMode { exact, bounded };
enum class TrellisKind { full, band, band_scalar, band_shift };

/// Read-only view of a computed trellis: per-column windows and the path
/// count of every active node. Implemented by the materialized CountTrellis
/// and by the shift-backed trellis that synthesizes most columns on the fly.
class CountSource {
public:
    virtual ~CountSource() = default;

    const FullTrellisParams& params() const { return params_; }
    int seq_length() const { return params_.N; }
    int levels() const { return params_.L; }
    const Alphabet& alphabet() const { return params_.alphabet; }

    virtual TrellisKind kind() const = 0;
    virtual CountMode mode() const = 0;
    virtual Window window(int n) const = 0;

    /// Path count of node (n, l); zero outside the active window.
    virtual BigUint count(int n, int l) const = 0;

    /// c at the origin node (0, 1): the number of addressable sequences.
    const BigUint& root_count() const { return root_; }

    /// Input length k = floor(log2 c_{1,0}), in bits.
    int input_bits() const { return k_; }
    /// Shaping rate R_s = k/N, bits per amplitude.
    double shaping_rate() const { return double(k_) / params_.N; }

protected:
    explicit CountSource(FullTrellisParams p) : params_(std::move(p)) {}
    void set_root(BigUint root);

    FullTrellisParams params_;
    BigUint root_;
    int k_ = 0;
};

/// Fully materialized trellis (full, band, or scalar-grown band).
class CountTrellis final : public CountSource {
public:
    struct Column {
        Window window;
        std::vector<BigUint> values;  // values[l - window.lo]
    };

    struct ScalarInfo {
        double rho = 0.0;      // spectral radius of the band adjacency
        double rho_bar = 0.0;  // applied growth factor
        int y = 0;             // extra exactly-kept band columns
    };

    TrellisKind kind() const override { return kind_; }
    CountMode mode() const override { return mode_; }
    Window window(int n) const override;
    BigUint count(int n, int l) const override;

    /// Reference access without the copy made by count().
    const BigUint& at(int n, int l) const;

    std::optional<Precision> precision() const { return precision_; }
    const std::optional<ScalarInfo>& scalar_info() const { return scalar_; }
    const std::vector<Column>& columns() const { return cols_; }

    /// Overwrite one node value and refresh k. Exists so tests and
    /// diagnostics can construct invertibility violations; the builders are
    /// the only sanctioned way to produce real trellises.
    void set_count(int n, int l, BigUint v);

    /// Count matrix in the conventional reverse-indexed layout (row 0 is
    /// level L, column n left to right), zeros outside windows.
    std::vector<std::vector<BigUint>> dense_matrix() const;

    bool operator==(const CountTrellis& rhs) const;

private:
    friend class TrellisBuilder;
    using CountSource::CountSource;

    TrellisKind kind_ = TrellisKind::full;
    CountMode mode_ = CountMode::exact;
    std::optional<Precision> precision_;
    std::optional<ScalarInfo> scalar_;
    std::vector<Column> cols_;  // cols_[n], n = 0..N
};

/// Connectivity of the full trellis: level offsets t(t+1)/2 clipped to L.
AdjacencyMatrix build_full_adjacency(const Alphabet& alphabet, int levels);

/// Count recursion c_n = A~ c_{n+1} from the all-ones final column.
CountTrellis build_full_trellis(const FullTrellisParams& params, CountMode mode,
                                std::optional<Precision> precision = {});

struct InvertibilityReport {
    bool ok = true;
    int column = -1;  // first violating node, if any
    int level = -1;

    explicit operator bool() const { return ok; }
};

/// Checks c_{i,n} <= sum_j a_{ij} c_{j,n+1} for every active node with
/// column in [n_begin, n_end). This is the condition under which the
/// index<->sequence mapping is invertible.
InvertibilityReport validate_invertibility(const CountSource& trellis, int n_begin,
                                           int n_end);
InvertibilityReport validate_invertibility(const CountSource& trellis);

}  // namespace bess
