#include "bess/band.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "trellis_detail.hpp"

namespace bess {

int BandParams::final_width() const {
    if (slope == 0) return base.N + 1;  // valid only with h_i = L
    return base.N + 1 - (base.L - initial_height) / slope;
}

void BandParams::validate() const {
    base.validate();
    if (initial_height < 1 || initial_height > base.L)
        throw std::invalid_argument("initial height must be in [1, L]");
    if (initial_width < 1 || initial_width > base.N + 1)
        throw std::invalid_argument("initial width must be in [1, N + 1]");
    if (slope < 0) throw std::invalid_argument("slope must be nonnegative");
    if (slope == 0) {
        if (initial_height != base.L)
            throw std::invalid_argument("slope 0 requires the initial height to equal L");
    } else if ((base.L - initial_height) % slope != 0) {
        throw std::invalid_argument("(L - h_i) must be divisible by the slope");
    }
    if (final_width() < 1)
        throw std::invalid_argument("final width comes out below 1; band never reaches column 0");
    // The origin node (0, 1) must sit inside the column-0 window, or the
    // trellis carries no sequences at all.
    int top0 = base.L - initial_height + 1 - slope * base.N + band_height() - 1;
    if (top0 < 1)
        throw std::invalid_argument("band passes below level 1 before column 0");
}

BandGeometry::BandGeometry(BandParams params) : params_(std::move(params)) {
    params_.validate();
}

int BandGeometry::unclipped_floor(int n) const {
    const BandParams& p = params_;
    return p.base.L - p.initial_height + 1 - p.slope * (p.base.N - n);
}

Window BandGeometry::window(int n) const {
    int floor = unclipped_floor(n);
    return Window{std::max(1, floor),
                  std::min(params_.base.L, floor + params_.band_height() - 1)};
}

BandGeometry::Portion BandGeometry::portion(int n) const {
    if (n >= params_.base.N - params_.initial_width + 2) return Portion::initial;
    if (n <= params_.final_width() - 2) return Portion::final;
    return Portion::band;
}

AdjacencyMatrix build_band_adjacency(const Alphabet& alphabet, int slope, int height) {
    if (height < 1) throw std::invalid_argument("band height must be positive");
    if (slope < 0) throw std::invalid_argument("slope must be nonnegative");
    return AdjacencyMatrix::band(alphabet, slope, height);
}

CountTrellis build_band_trellis(const BandParams& params, CountMode mode,
                                std::optional<Precision> precision,
                                const BandBuildOptions& opts) {
    BandGeometry geo(params);
    auto cols = detail::recurse_counts(
        params.base, [&](int n) { return geo.window(n); }, mode, precision);
    if (opts.zero_unreachable_final) {
        // Purely-final columns only; in degenerate designs the final portion
        // overlaps the initial one and zeroing stops being meaningful.
        int n_last = std::min(params.final_width() - 2, params.band_last_column());
        if (n_last >= 0) detail::zero_unreachable(params.base, cols, n_last);
    }
    return TrellisBuilder::make(params.base, TrellisKind::band, mode, precision, {},
                                std::move(cols));
}

std::vector<BigUint> band_column(const CountTrellis& trellis, int n) {
    const auto& cols = trellis.columns();
    return cols.at(std::size_t(n)).values;
}

std::vector<long double> ratio_vector(const CountTrellis& trellis, int n) {
    const auto& num = trellis.columns().at(std::size_t(n)).values;
    const auto& den = trellis.columns().at(std::size_t(n + 1)).values;
    if (num.size() != den.size())
        throw std::invalid_argument("adjacent columns have different band heights");
    std::vector<long double> r(num.size());
    for (std::size_t i = 0; i < num.size(); ++i) {
        if (den[i].is_zero()) throw std::domain_error("zero count in band column");
        r[i] = num[i].to_long_double() / den[i].to_long_double();
    }
    return r;
}

SpectralInfo spectral_radius(const AdjacencyMatrix& a, double tolerance,
                             int max_iterations) {
    const int h = a.size();
    const auto& offsets = a.offsets();
    std::vector<double> v(std::size_t(h), 1.0), w(std::size_t(h));
    double lambda = 0.0;
    for (int iter = 1; iter <= max_iterations; ++iter) {
        double norm = 0.0;
        for (int i = 1; i <= h; ++i) {
            double s = 0.0;
            for (int off : offsets) {
                int j = i + off;
                if (j >= 1 && j <= h) s += v[std::size_t(j - 1)];
            }
            w[std::size_t(i - 1)] = s;
            norm = std::max(norm, s);
        }
        if (norm == 0.0) return SpectralInfo{0.0, iter, 0.0};
        for (double& x : w) x /= norm;
        double residual = 0.0;
        for (int i = 0; i < h; ++i) residual = std::max(residual, std::abs(w[i] - v[i]));
        v.swap(w);
        bool settled = std::abs(norm - lambda) <= tolerance * std::max(1.0, norm) &&
                       residual <= tolerance;
        lambda = norm;
        if (settled) return SpectralInfo{lambda, iter, residual};
    }
    throw std::runtime_error("power iteration did not converge");
}

namespace {

// floor(factor * x), computed exactly from the dyadic expansion of factor.
BigUint scale_floor(const BigUint& x, double factor) {
    if (factor < 0) throw std::domain_error("negative growth factor");
    if (factor == 0.0 || x.is_zero()) return BigUint();
    int exp = 0;
    double m = std::frexp(factor, &exp);       // factor = m * 2^exp, m in [0.5, 1)
    auto mant = std::uint64_t(std::ldexp(m, 53));  // exact: doubles carry 53 bits
    BigUint r = x.mul_u64(mant);
    int shift = 53 - exp;
    if (shift > 0)
        r >>= std::size_t(shift);
    else
        r <<= std::size_t(-shift);
    return r;
}

// Columns of a scalar-growth band trellis: exact down to column
// n_keep = N - w_i - y + 1, then b_n = floor(rho_bar b_{n+1}) through the
// band, then the usual windowed recursion across the final portion.
std::vector<CountTrellis::Column> scalar_columns(const BandGeometry& geo, double rho_bar,
                                                 int y) {
    const BandParams& p = geo.params();
    const int N = p.base.N;
    const int n_keep = N - p.initial_width - y + 1;
    const int band_first = p.band_first_column();
    if (y < 0 || n_keep < band_first)
        throw std::invalid_argument("extra stored columns exceed the band portion");

    const std::vector<int> offsets = p.base.alphabet.level_offsets();
    std::vector<CountTrellis::Column> cols(std::size_t(N + 1));
    for (int n = 0; n <= N; ++n) cols[std::size_t(n)].window = geo.window(n);
    cols[std::size_t(N)].values.assign(std::size_t(cols[std::size_t(N)].window.height()),
                                       BigUint(1));

    auto recurse_one = [&](int n) {
        CountTrellis::Column& col = cols[std::size_t(n)];
        const CountTrellis::Column& next = cols[std::size_t(n + 1)];
        col.values.resize(std::size_t(col.window.height()));
        for (int l = col.window.lo; l <= col.window.hi; ++l) {
            BigUint sum;
            for (int off : offsets) {
                int l2 = l + off;
                if (next.window.contains(l2))
                    sum += next.values[std::size_t(l2 - next.window.lo)];
            }
            col.values[std::size_t(l - col.window.lo)] = std::move(sum);
        }
    };

    for (int n = N - 1; n >= n_keep; --n) recurse_one(n);
    for (int n = n_keep - 1; n >= band_first; --n) {
        const auto& prev = cols[std::size_t(n + 1)].values;
        auto& cur = cols[std::size_t(n)].values;
        cur.resize(prev.size());
        for (std::size_t i = 0; i < prev.size(); ++i) cur[i] = scale_floor(prev[i], rho_bar);
    }
    for (int n = band_first - 1; n >= 0; --n) recurse_one(n);
    return cols;
}

}  // namespace

double max_backoff(const BandParams& params, int y, double resolution) {
    BandGeometry geo(params);
    SpectralInfo spec = spectral_radius(build_band_adjacency(
        params.base.alphabet, params.slope, params.band_height()));

    auto feasible = [&](double rho_bar) {
        auto cols = scalar_columns(geo, rho_bar, y);
        auto t = TrellisBuilder::make(params.base, TrellisKind::band_scalar,
                                      CountMode::exact, {}, {}, std::move(cols));
        return bool(validate_invertibility(t));
    };

    double lo = 0.0, hi = spec.rho;
    if (feasible(hi)) return hi;
    while (hi - lo > resolution) {
        double mid = lo + (hi - lo) / 2;
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

CountTrellis build_scalar_trellis(const BandParams& params, double rho_bar, int y,
                                  const BandBuildOptions& opts) {
    BandGeometry geo(params);
    SpectralInfo spec = spectral_radius(build_band_adjacency(
        params.base.alphabet, params.slope, params.band_height()));
    auto cols = scalar_columns(geo, rho_bar, y);
    if (opts.zero_unreachable_final) {
        int n_last = std::min(params.final_width() - 2, params.band_last_column());
        if (n_last >= 0) detail::zero_unreachable(params.base, cols, n_last);
    }
    auto t = TrellisBuilder::make(params.base, TrellisKind::band_scalar, CountMode::exact,
                                  {}, CountTrellis::ScalarInfo{spec.rho, rho_bar, y},
                                  std::move(cols));
    if (auto rep = validate_invertibility(t); !rep)
        throw std::invalid_argument("scalar growth " + std::to_string(rho_bar) +
                                    " breaks invertibility at column " +
                                    std::to_string(rep.column) + ", level " +
                                    std::to_string(rep.level));
    return t;
}

std::pair<int, int> select_shift_plan(double rho, int p_max) {
    if (!(rho > 1.0)) throw std::invalid_argument("growth factor must exceed 1");
    const double log2_rho = std::log2(rho);
    int best_p = 0, best_t = 0;
    double best_ratio = 0.0;
    for (int p = 1; p <= p_max; ++p) {
        int t = int(std::floor(p * log2_rho));
        if (t < 1) continue;
        double ratio = std::exp2(p * log2_rho - t);  // rho^p / 2^t, >= 1
        if (best_p == 0 || ratio < best_ratio) {
            best_p = p;
            best_t = t;
            best_ratio = ratio;
        }
    }
    if (best_p == 0) throw std::invalid_argument("no usable period up to p_max");
    return {best_p, best_t};
}

ShiftPlan make_shift_plan(const BandParams& params, Precision precision, int y,
                          int p_max) {
    params.validate();
    SpectralInfo spec = spectral_radius(build_band_adjacency(
        params.base.alphabet, params.slope, params.band_height()));
    auto [p, t] = select_shift_plan(spec.rho, p_max);
    if (y + 1 < p)
        throw std::invalid_argument("need at least p stored band columns: y + 1 >= p");
    return ShiftPlan{spec.rho, std::exp2(double(t) / p), p, t, y, precision};
}

ShiftTrellis::ShiftTrellis(BandParams band, ShiftPlan plan)
    : CountSource(band.base), band_(std::move(band)), plan_(plan), geometry_(band_) {}

Window ShiftTrellis::window(int n) const { return geometry_.window(n); }

std::pair<int, int> ShiftTrellis::virtual_source(int n) const {
    if (n >= n_stored_min_) return {n, 0};
    int q = (n_stored_min_ - n + plan_.p - 1) / plan_.p;
    return {n + q * plan_.p, q};
}

BigUint ShiftTrellis::count(int n, int l) const {
    Window w = window(n);
    if (!w.contains(l)) return BigUint();
    if (n >= n_stored_min_)
        return stored_[std::size_t(n - n_stored_min_)][std::size_t(l - w.lo)].value();
    if (n <= band_.final_width() - 2) {
        const auto& col = final_portion_[std::size_t(n)];
        return col.values[std::size_t(l - col.window.lo)];
    }
    auto [src, q] = virtual_source(n);
    const BPNum& base = stored_[std::size_t(src - n_stored_min_)][std::size_t(l - w.lo)];
    return base.value() << std::size_t(q) * std::size_t(plan_.t);
}

bool ShiftTrellis::operator==(const ShiftTrellis& rhs) const {
    return band_ == rhs.band_ && plan_.rho == rhs.plan_.rho &&
           plan_.rho_bar == rhs.plan_.rho_bar && plan_.p == rhs.plan_.p &&
           plan_.t == rhs.plan_.t && plan_.y == rhs.plan_.y &&
           plan_.precision == rhs.plan_.precision && n_stored_min_ == rhs.n_stored_min_ &&
           stored_ == rhs.stored_;
}

ShiftTrellis build_shift_trellis(const BandParams& params, const ShiftPlan& plan,
                                 const BandBuildOptions& opts) {
    params.validate();
    if (plan.p < 1 || plan.t < 1) throw std::invalid_argument("shift plan needs p, t >= 1");
    if (plan.y + 1 < plan.p)
        throw std::invalid_argument("need at least p stored band columns: y + 1 >= p");

    ShiftTrellis t(params, plan);
    const int N = params.base.N;
    const int n_min = N - params.initial_width - plan.y + 1;
    if (n_min < params.band_first_column())
        throw std::invalid_argument("extra stored columns exceed the band portion");
    t.n_stored_min_ = n_min;

    // Stored region: bounded-precision recursion from the all-ones column.
    const std::vector<int> offsets = params.base.alphabet.level_offsets();
    const Precision prec = plan.precision;
    t.stored_.resize(std::size_t(N - n_min + 1));
    {
        Window w = t.window(N);
        t.stored_.back().assign(std::size_t(w.height()), BPNum(1, 0));
    }
    for (int n = N - 1; n >= n_min; --n) {
        Window w = t.window(n);
        Window wn = t.window(n + 1);
        const auto& next = t.stored_[std::size_t(n + 1 - n_min)];
        auto& cur = t.stored_[std::size_t(n - n_min)];
        cur.resize(std::size_t(w.height()));
        for (int l = w.lo; l <= w.hi; ++l) {
            BigUint sum;
            for (int off : offsets) {
                int l2 = l + off;
                if (wn.contains(l2)) sum += next[std::size_t(l2 - wn.lo)].value();
            }
            cur[std::size_t(l - w.lo)] = round_down(sum, prec);
        }
    }

    // Transient final portion, fed by the leftmost virtual band column.
    const int wf = params.final_width();
    t.final_portion_.resize(std::size_t(std::max(0, wf - 1)));
    if (wf >= 2) {
        int band_first = wf - 1;
        CountTrellis::Column feed;
        feed.window = t.window(band_first);
        feed.values.resize(std::size_t(feed.window.height()));
        for (int l = feed.window.lo; l <= feed.window.hi; ++l)
            feed.values[std::size_t(l - feed.window.lo)] = t.count(band_first, l);
        const CountTrellis::Column* next = &feed;
        for (int n = wf - 2; n >= 0; --n) {
            CountTrellis::Column& col = t.final_portion_[std::size_t(n)];
            col.window = t.window(n);
            col.values.resize(std::size_t(col.window.height()));
            for (int l = col.window.lo; l <= col.window.hi; ++l) {
                BigUint sum;
                for (int off : offsets) {
                    int l2 = l + off;
                    if (next->window.contains(l2))
                        sum += next->values[std::size_t(l2 - next->window.lo)];
                }
                col.values[std::size_t(l - col.window.lo)] =
                    round_down(sum, prec).value();
            }
            next = &col;
        }
        if (opts.zero_unreachable_final) {
            // Forward reachability from (0, 1) across the final buffer.
            std::vector<std::vector<char>> reach(std::size_t(wf - 1));
            for (int n = 0; n <= wf - 2; ++n)
                reach[std::size_t(n)].assign(
                    std::size_t(t.final_portion_[std::size_t(n)].window.height()), 0);
            if (t.window(0).contains(1)) {
                reach[0][std::size_t(1 - t.window(0).lo)] = 1;
                for (int n = 0; n + 1 <= wf - 2; ++n) {
                    Window w = t.window(n), wn = t.window(n + 1);
                    for (int l = w.lo; l <= w.hi; ++l) {
                        if (!reach[std::size_t(n)][std::size_t(l - w.lo)]) continue;
                        for (int off : offsets) {
                            int l2 = l + off;
                            if (wn.contains(l2))
                                reach[std::size_t(n + 1)][std::size_t(l2 - wn.lo)] = 1;
                        }
                    }
                }
                for (int n = 0; n <= wf - 2; ++n) {
                    Window w = t.window(n);
                    for (int l = w.lo; l <= w.hi; ++l)
                        if (!reach[std::size_t(n)][std::size_t(l - w.lo)])
                            t.final_portion_[std::size_t(n)]
                                .values[std::size_t(l - w.lo)] = BigUint();
                }
            }
        }
    }

    t.set_root(t.count(0, 1));

    // Invertibility: the final buffer, plus the stored region and one full
    // shift period across the boundary. Deeper virtual columns repeat the
    // checked ones with both sides scaled by 2^t, so this covers everything.
    if (auto rep = validate_invertibility(t, 0, std::max(0, wf - 1)); !rep)
        throw std::invalid_argument("shift trellis breaks invertibility at column " +
                                    std::to_string(rep.column) + ", level " +
                                    std::to_string(rep.level));
    if (auto rep = validate_invertibility(t, std::max(wf - 1, n_min - plan.p), N); !rep)
        throw std::invalid_argument(
            "shift trellis breaks invertibility at column " + std::to_string(rep.column) +
            ", level " + std::to_string(rep.level) +
            "; store more band columns or enlarge the backoff");
    return t;
}

}  // namespace bess
