#include "bess/trellis.hpp"

#include <algorithm>
#include <stdexcept>

#include "trellis_detail.hpp"

namespace bess {

void FullTrellisParams::validate() const {
    if (N < 1) throw std::invalid_argument("sequence length must be positive");
    if (L < 1) throw std::invalid_argument("trellis height must be positive");
}

AdjacencyMatrix::AdjacencyMatrix(int size, std::vector<int> offsets)
    : size_(size), offsets_(std::move(offsets)) {}

AdjacencyMatrix AdjacencyMatrix::full(const Alphabet& alphabet, int levels) {
    return AdjacencyMatrix(levels, alphabet.level_offsets());
}

AdjacencyMatrix AdjacencyMatrix::band(const Alphabet& alphabet, int slope, int height) {
    std::vector<int> off = alphabet.level_offsets();
    for (int& o : off) o -= slope;
    return AdjacencyMatrix(height, std::move(off));
}

bool AdjacencyMatrix::connected(int i, int j) const {
    if (i < 1 || i > size_ || j < 1 || j > size_) return false;
    return std::binary_search(offsets_.begin(), offsets_.end(), j - i);
}

std::vector<std::vector<int>> AdjacencyMatrix::dense() const {
    std::vector<std::vector<int>> m(size_, std::vector<int>(size_, 0));
    for (int i = 1; i <= size_; ++i)
        for (int o : offsets_) {
            int j = i + o;
            if (j >= 1 && j <= size_) m[i - 1][j - 1] = 1;
        }
    return m;
}

std::vector<std::vector<int>> AdjacencyMatrix::dense_display() const {
    auto m = dense();
    std::vector<std::vector<int>> d(size_, std::vector<int>(size_, 0));
    for (int i = 0; i < size_; ++i)
        for (int j = 0; j < size_; ++j) d[size_ - 1 - i][size_ - 1 - j] = m[i][j];
    return d;
}

AdjacencyMatrix build_full_adjacency(const Alphabet& alphabet, int levels) {
    return AdjacencyMatrix::full(alphabet, levels);
}

void CountSource::set_root(BigUint root) {
    if (root.is_zero())
        throw std::invalid_argument("trellis addresses no sequences (c at origin is 0)");
    k_ = int(root.floor_log2());
    root_ = std::move(root);
}

Window CountTrellis::window(int n) const { return cols_.at(std::size_t(n)).window; }

const BigUint& CountTrellis::at(int n, int l) const {
    static const BigUint zero;
    const Column& c = cols_.at(std::size_t(n));
    if (!c.window.contains(l)) return zero;
    return c.values[std::size_t(l - c.window.lo)];
}

BigUint CountTrellis::count(int n, int l) const { return at(n, l); }

void CountTrellis::set_count(int n, int l, BigUint v) {
    Column& c = cols_.at(std::size_t(n));
    if (!c.window.contains(l)) throw std::out_of_range("node outside active window");
    c.values[std::size_t(l - c.window.lo)] = std::move(v);
    set_root(at(0, 1));
}

std::vector<std::vector<BigUint>> CountTrellis::dense_matrix() const {
    int L = params_.L, N = params_.N;
    std::vector<std::vector<BigUint>> m(std::size_t(L));
    for (auto& row : m) row.resize(std::size_t(N + 1));
    for (int n = 0; n <= N; ++n)
        for (int l = window(n).lo; l <= window(n).hi; ++l)
            m[std::size_t(L - l)][std::size_t(n)] = at(n, l);
    return m;
}

bool CountTrellis::operator==(const CountTrellis& rhs) const {
    if (params_ != rhs.params_ || kind_ != rhs.kind_ || mode_ != rhs.mode_ ||
        precision_ != rhs.precision_)
        return false;
    if (scalar_.has_value() != rhs.scalar_.has_value()) return false;
    if (scalar_ && (scalar_->rho != rhs.scalar_->rho || scalar_->rho_bar != rhs.scalar_->rho_bar ||
                    scalar_->y != rhs.scalar_->y))
        return false;
    for (std::size_t n = 0; n < cols_.size(); ++n) {
        if (cols_[n].window != rhs.cols_[n].window || cols_[n].values != rhs.cols_[n].values)
            return false;
    }
    return true;
}

CountTrellis TrellisBuilder::make(FullTrellisParams params, TrellisKind kind, CountMode mode,
                                  std::optional<Precision> precision,
                                  std::optional<CountTrellis::ScalarInfo> scalar,
                                  std::vector<CountTrellis::Column> cols) {
    CountTrellis t(std::move(params));
    t.kind_ = kind;
    t.mode_ = mode;
    t.precision_ = precision;
    t.scalar_ = std::move(scalar);
    t.cols_ = std::move(cols);
    if (!t.cols_[0].window.contains(1))
        throw std::invalid_argument("origin node (0, 1) is outside the column-0 window");
    t.set_root(t.at(0, 1));
    return t;
}

namespace detail {

std::vector<CountTrellis::Column> recurse_counts(const FullTrellisParams& params,
                                                 const WindowFn& win, CountMode mode,
                                                 std::optional<Precision> precision) {
    if (mode == CountMode::bounded && !precision)
        throw std::invalid_argument("bounded mode requires a precision");
    const std::vector<int> offsets = params.alphabet.level_offsets();
    std::vector<CountTrellis::Column> cols(std::size_t(params.N + 1));

    cols[std::size_t(params.N)].window = win(params.N);
    cols[std::size_t(params.N)].values.assign(
        std::size_t(cols[std::size_t(params.N)].window.height()), BigUint(1));

    for (int n = params.N - 1; n >= 0; --n) {
        CountTrellis::Column& col = cols[std::size_t(n)];
        const CountTrellis::Column& next = cols[std::size_t(n + 1)];
        col.window = win(n);
        col.values.resize(std::size_t(col.window.height()));
        for (int l = col.window.lo; l <= col.window.hi; ++l) {
            BigUint sum;
            for (int off : offsets) {
                int l2 = l + off;
                if (next.window.contains(l2))
                    sum += next.values[std::size_t(l2 - next.window.lo)];
            }
            if (mode == CountMode::bounded) sum = round_down(sum, *precision).value();
            col.values[std::size_t(l - col.window.lo)] = std::move(sum);
        }
    }
    return cols;
}

void zero_unreachable(const FullTrellisParams& params,
                      std::vector<CountTrellis::Column>& cols, int n_last) {
    const std::vector<int> offsets = params.alphabet.level_offsets();
    // Forward reachability from (0, 1) through the windows.
    std::vector<std::vector<char>> reach(cols.size());
    for (std::size_t n = 0; n < cols.size(); ++n)
        reach[n].assign(std::size_t(cols[n].window.height()), 0);
    if (!cols[0].window.contains(1)) return;
    reach[0][std::size_t(1 - cols[0].window.lo)] = 1;
    for (std::size_t n = 0; n + 1 < cols.size(); ++n) {
        const Window& w = cols[n].window;
        const Window& wn = cols[n + 1].window;
        for (int l = w.lo; l <= w.hi; ++l) {
            if (!reach[n][std::size_t(l - w.lo)]) continue;
            for (int off : offsets) {
                int l2 = l + off;
                if (wn.contains(l2)) reach[n + 1][std::size_t(l2 - wn.lo)] = 1;
            }
        }
    }
    for (int n = 0; n <= n_last && n < int(cols.size()); ++n) {
        const Window& w = cols[std::size_t(n)].window;
        for (int l = w.lo; l <= w.hi; ++l)
            if (!reach[std::size_t(n)][std::size_t(l - w.lo)])
                cols[std::size_t(n)].values[std::size_t(l - w.lo)] = BigUint();
    }
}

}  // namespace detail

CountTrellis build_full_trellis(const FullTrellisParams& params, CountMode mode,
                                std::optional<Precision> precision) {
    params.validate();
    auto cols = detail::recurse_counts(
        params, [&](int) { return Window{1, params.L}; }, mode, precision);
    return TrellisBuilder::make(params, TrellisKind::full, mode, precision, {},
                                std::move(cols));
}

InvertibilityReport validate_invertibility(const CountSource& trellis, int n_begin,
                                           int n_end) {
    const std::vector<int> offsets = trellis.alphabet().level_offsets();
    for (int n = std::max(0, n_begin); n < std::min(n_end, trellis.seq_length()); ++n) {
        Window w = trellis.window(n);
        Window wn = trellis.window(n + 1);
        for (int l = w.lo; l <= w.hi; ++l) {
            BigUint lhs = trellis.count(n, l);
            if (lhs.is_zero()) continue;
            BigUint rhs;
            for (int off : offsets) {
                int l2 = l + off;
                if (wn.contains(l2)) rhs += trellis.count(n + 1, l2);
            }
            if (lhs > rhs) return InvertibilityReport{false, n, l};
        }
    }
    return InvertibilityReport{};
}

InvertibilityReport validate_invertibility(const CountSource& trellis) {
    return validate_invertibility(trellis, 0, trellis.seq_length());
}

}  // namespace bess
