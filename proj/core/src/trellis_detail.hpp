#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "bess/trellis.hpp"

namespace bess {

// Internal assembly access shared by the full, band, scalar, and shift
// builders. Not installed.
class TrellisBuilder {
public:
    static CountTrellis make(FullTrellisParams params, TrellisKind kind, CountMode mode,
                             std::optional<Precision> precision,
                             std::optional<CountTrellis::ScalarInfo> scalar,
                             std::vector<CountTrellis::Column> cols);
};

namespace detail {

using WindowFn = std::function<Window(int)>;

// Right-to-left count recursion over arbitrary per-column windows, starting
// from an all-ones final column. In bounded mode every node value is rounded
// down to the precision's mantissa width after its exact computation.
std::vector<CountTrellis::Column> recurse_counts(const FullTrellisParams& params,
                                                 const WindowFn& win, CountMode mode,
                                                 std::optional<Precision> precision);

// Zeroes nodes of columns [0, n_last] that cannot be reached from (0, 1)
// walking forward through the windows.
void zero_unreachable(const FullTrellisParams& params,
                      std::vector<CountTrellis::Column>& cols, int n_last);

}  // namespace detail
}  // namespace bess
