#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bess/trellis.hpp"

namespace bess {

/// Band-trellis design: a sloped window of height h over the full trellis.
///
/// The window top is anchored at level L in the rightmost column and drops
/// by `slope` levels per column moving left, clipping at the trellis
/// boundaries. Sequences whose accumulated-energy path leaves the window are
/// pruned, which caps the per-sequence energy variation.
struct BandParams {
    FullTrellisParams base;
    int initial_height = 0;  // h_i, active nodes of the final column
    int initial_width = 0;   // w_i, columns of the right-hand trapezoid
    int slope = 1;           // s, nodes per column

    /// h = h_i + s(w_i - 1), the uniform height of the band portion.
    int band_height() const { return initial_height + slope * (initial_width - 1); }
    /// w_f = N + 1 - (L - h_i)/s, the width of the left-hand triangle.
    int final_width() const;

    /// First and last band-portion columns: [w_f - 1, N - w_i + 1].
    int band_first_column() const { return final_width() - 1; }
    int band_last_column() const { return base.N - initial_width + 1; }

    void validate() const;
    bool operator==(const BandParams&) const = default;
};

/// Per-column active windows derived from BandParams.
class BandGeometry {
public:
    explicit BandGeometry(BandParams params);

    const BandParams& params() const { return params_; }

    /// Unclipped window floor of column n; may lie outside [1, L].
    int unclipped_floor(int n) const;
    Window window(int n) const;

    enum class Portion { initial, band, final };
    Portion portion(int n) const;

private:
    BandParams params_;
};

/// Band connectivity in window-relative coordinates: offsets t(t+1)/2 - s.
AdjacencyMatrix build_band_adjacency(const Alphabet& alphabet, int slope, int height);

struct BandBuildOptions {
    /// Zero final-portion nodes that cannot be reached from (0, 1). Matches
    /// the convention of displaying only usable counts; the codec never
    /// reads those nodes either way.
    bool zero_unreachable_final = true;
};

/// Windowed count recursion, exact or bounded-precision.
CountTrellis build_band_trellis(const BandParams& params, CountMode mode,
                                std::optional<Precision> precision = {},
                                const BandBuildOptions& opts = {});

/// Band-portion column n as a window-relative vector, index 0 = window floor.
std::vector<BigUint> band_column(const CountTrellis& trellis, int n);

/// Element-wise ratios b_{i,n} / b_{i,n+1} of adjacent band columns.
std::vector<long double> ratio_vector(const CountTrellis& trellis, int n);

struct SpectralInfo {
    double rho = 0.0;     // spectral radius
    int iterations = 0;   // power-iteration steps used
    double residual = 0;  // max-norm of A v - rho v at exit
};

/// Dominant eigenvalue of a nonnegative adjacency matrix by power iteration.
/// For a band adjacency this is the asymptotic per-column growth factor of
/// the counts.
SpectralInfo spectral_radius(const AdjacencyMatrix& a, double tolerance = 1e-13,
                             int max_iterations = 1'000'000);

/// Largest growth factor rho_bar such that replacing the band recursion by
/// b_n = floor(rho_bar * b_{n+1}) left of the y exactly-kept extra columns
/// still yields an invertible trellis. Found by bisection to `resolution`.
double max_backoff(const BandParams& params, int y, double resolution = 1e-6);

/// Band trellis whose deep band columns grow by the scalar rho_bar instead
/// of the full matrix recursion; the initial portion and y extra columns are
/// kept exact. Throws if the result fails the invertibility condition.
CountTrellis build_scalar_trellis(const BandParams& params, double rho_bar, int y,
                                  const BandBuildOptions& opts = {});

/// Pick the period p <= p_max whose growth rho^p overshoots a power of two
/// 2^t by the smallest factor, with t = floor(p log2 rho) >= 1. Returns
/// (p, t). The overshoot keeps rounded counts on the invertible side.
std::pair<int, int> select_shift_plan(double rho, int p_max = 8);

/// Streaming-growth configuration of a shift-backed band trellis.
struct ShiftPlan {
    double rho = 0.0;      // spectral radius of the band adjacency
    double rho_bar = 0.0;  // effective per-column growth 2^(t/p)
    int p = 0;             // period, columns
    int t = 0;             // shift, bits
    int y = 0;             // extra stored band columns; y + 1 >= p
    Precision precision;
};

/// Computes rho for the band adjacency of `params`, selects (p, t), and
/// assembles a plan with the given storage budget.
ShiftPlan make_shift_plan(const BandParams& params, Precision precision, int y,
                          int p_max = 8);

/// Band trellis holding only the initial portion plus y + 1 band columns.
/// Every deeper band column is synthesized by exponent shifts: column n
/// equals the stored column n + q p with q t appended zero bits. The final
/// portion lives in a small transient buffer rebuilt from the leftmost
/// virtual column. Static storage is therefore independent of N.
class ShiftTrellis final : public CountSource {
public:
    TrellisKind kind() const override { return TrellisKind::band_shift; }
    CountMode mode() const override { return CountMode::bounded; }
    Window window(int n) const override;
    BigUint count(int n, int l) const override;

    const BandParams& band_params() const { return band_; }
    const ShiftPlan& plan() const { return plan_; }
    const BandGeometry& geometry() const { return geometry_; }

    /// Leftmost stored column; columns >= this index are held verbatim.
    int first_stored_column() const { return n_stored_min_; }

    /// Stored columns n_stored_min .. N (window-relative value vectors).
    const std::vector<std::vector<BPNum>>& stored_columns() const { return stored_; }

    /// For a virtual band column, the stored source column and the shift
    /// applied to it: (source n, q). Returns (n, 0) for stored columns.
    std::pair<int, int> virtual_source(int n) const;

    bool operator==(const ShiftTrellis& rhs) const;

private:
    friend ShiftTrellis build_shift_trellis(const BandParams&, const ShiftPlan&,
                                            const BandBuildOptions&);
    ShiftTrellis(BandParams band, ShiftPlan plan);

    BandParams band_;
    ShiftPlan plan_;
    BandGeometry geometry_;
    int n_stored_min_ = 0;
    std::vector<std::vector<BPNum>> stored_;                // [n - n_stored_min]
    std::vector<CountTrellis::Column> final_portion_;       // columns 0 .. w_f - 2
};

/// Builds the stored columns exactly (bounded precision), materializes the
/// final portion, and validates invertibility over the stored region plus
/// one shift period; by periodicity that covers the whole trellis.
ShiftTrellis build_shift_trellis(const BandParams& params, const ShiftPlan& plan,
                                 const BandBuildOptions& opts = {});

}  // namespace bess
