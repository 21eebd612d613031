#pragma once

// Brute-force reference implementations used to check the library. They share
// no code with it beyond the plain data types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <vector>

#include "prefpareto/core_mo.hpp"
#include "prefpareto/random.hpp"
#include "prefpareto/ranking_eval.hpp"

namespace oracle_ref {

using Point = std::vector<double>;

inline std::vector<Point> losses_of(const prefpareto::core::ParetoFront& f) {
    std::vector<Point> out;
    for (const auto& p : f.points()) out.push_back(p.losses);
    return out;
}

/// Dominated area inside the unit square, by counting cell centres of a
/// grid x grid lattice column by column.
inline double hv_grid(const std::vector<Point>& pts, int grid = 2000) {
    double area = 0.0;
    for (int ix = 0; ix < grid; ++ix) {
        const double x = (ix + 0.5) / grid;
        double low = 2.0;
        for (const auto& p : pts) {
            if (p[0] <= x) low = std::min(low, p[1]);
        }
        if (low > 1.0) continue;
        int count = 0;
        for (int iy = 0; iy < grid; ++iy) {
            if ((iy + 0.5) / grid >= low) ++count;
        }
        area += static_cast<double>(count) / grid;
    }
    return area / grid;
}

inline double sp_naive(const std::vector<Point>& pts) {
    const std::size_t n = pts.size();
    if (n <= 1) return 0.0;
    std::vector<double> d(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double l1 = 0.0;
            for (std::size_t m = 0; m < pts[i].size(); ++m) l1 += std::abs(pts[i][m] - pts[j][m]);
            d[i] = std::min(d[i], l1);
        }
    }
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : d) ss += (mean - v) * (mean - v);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

inline double ms_naive(const std::vector<Point>& pts) {
    double total = 0.0;
    for (std::size_t m = 0; m < pts.front().size(); ++m) {
        double extent = 0.0;
        for (const auto& a : pts) {
            for (const auto& b : pts) extent = std::max(extent, a[m] - b[m]);
        }
        total += extent * extent;
    }
    return std::sqrt(total);
}

inline double r2_naive(const std::vector<Point>& pts) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
        double cheb = 0.0;
        for (double v : p) cheb = std::max(cheb, std::abs(v - 0.0));
        best = std::min(best, cheb);
    }
    return best;
}

inline bool dominates_naive(const Point& a, const Point& b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

/// Distinct loss vectors not dominated by any other input.
inline std::vector<Point> nondominated_naive(const std::vector<Point>& pts) {
    std::vector<Point> out;
    for (const auto& p : pts) {
        bool dominated = false;
        for (const auto& q : pts) dominated = dominated || dominates_naive(q, p);
        if (!dominated && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// O(n^2) tau-b by direct pair counting.
inline double tau_b_naive(const prefpareto::eval::TiedRanking& a, const prefpareto::eval::TiedRanking& b) {
    std::map<prefpareto::eval::FrontId, int> rb;
    for (const auto& it : b.items) rb[it.id] = it.rank;
    std::vector<std::pair<int, int>> r;
    for (const auto& it : a.items) r.emplace_back(it.rank, rb.at(it.id));
    long long conc = 0, disc = 0, tie_a = 0, tie_b = 0, pairs = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        for (std::size_t j = i + 1; j < r.size(); ++j) {
            ++pairs;
            const int sa = (r[i].first > r[j].first) - (r[i].first < r[j].first);
            const int sb = (r[i].second > r[j].second) - (r[i].second < r[j].second);
            if (sa == 0) ++tie_a;
            if (sb == 0) ++tie_b;
            if (sa * sb > 0) ++conc;
            if (sa * sb < 0) ++disc;
        }
    }
    const double denom = std::sqrt(static_cast<double>(pairs - tie_a) * static_cast<double>(pairs - tie_b));
    return denom == 0.0 ? 0.0 : static_cast<double>(conc - disc) / denom;
}

inline double ssd_naive(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    double mean = 0.0;
    for (std::size_t i = lo; i < hi; ++i) mean += v[i];
    mean /= static_cast<double>(hi - lo);
    double ss = 0.0;
    for (std::size_t i = lo; i < hi; ++i) ss += (v[i] - mean) * (v[i] - mean);
    return ss;
}

struct Partition {
    std::vector<std::size_t> breaks;  // first index of buckets 2..k
    double cost = 0.0;
};

/// Every contiguous k-partition in lexicographic order of its break positions;
/// returns the first whose cost is within a relative 1e-12 of the minimum.
inline Partition jenks_exhaustive(const std::vector<double>& v, std::size_t k) {
    const std::size_t n = v.size();
    std::vector<Partition> all;
    std::vector<std::size_t> br(k - 1);
    auto rec = [&](auto&& self, std::size_t pos, std::size_t from) -> void {
        if (pos == k - 1) {
            Partition p{br, 0.0};
            std::size_t lo = 0;
            for (std::size_t b = 0; b < k; ++b) {
                const std::size_t hi = b + 1 < k ? br[b] : n;
                p.cost += ssd_naive(v, lo, hi);
                lo = hi;
            }
            all.push_back(p);
            return;
        }
        for (std::size_t j = from; j + (k - 1 - pos) <= n; ++j) {
            br[pos] = j;
            self(self, pos + 1, j + 1);
        }
    };
    rec(rec, 0, 1);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : all) best = std::min(best, p.cost);
    for (const auto& p : all) {
        if (p.cost <= best + 1e-12 * std::max(best, 1e-300)) return p;
    }
    return all.front();
}

/// A random set of `n` two-loss vectors in [0, 1].
inline std::vector<prefpareto::core::ModelPoint> random_models(prefpareto::Rng& rng, std::size_t n,
                                                               double grain = 0.0) {
    std::vector<prefpareto::core::ModelPoint> out;
    for (std::size_t i = 0; i < n; ++i) {
        double a = rng.uniform(), b = rng.uniform();
        if (grain > 0.0) {
            a = std::round(a / grain) * grain;
            b = std::round(b / grain) * grain;
        }
        out.push_back({static_cast<prefpareto::core::ModelId>(i), {a, b}, {}});
    }
    return out;
}

/// Random tied ranking over ids 0..n-1 with ranks drawn from 1..levels, made contiguous.
inline prefpareto::eval::TiedRanking random_ranking(prefpareto::Rng& rng, std::size_t n, int levels) {
    std::vector<int> raw(n);
    for (auto& r : raw) r = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(levels)));
    std::vector<int> used = raw;
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    prefpareto::eval::TiedRanking out;
    for (std::size_t i = 0; i < n; ++i) {
        const int dense = static_cast<int>(std::lower_bound(used.begin(), used.end(), raw[i]) - used.begin()) + 1;
        out.items.push_back({static_cast<prefpareto::eval::FrontId>(i), dense});
    }
    return out;
}

}  // namespace oracle_ref
