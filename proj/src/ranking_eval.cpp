#include "prefpareto/ranking_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <map>
#include <set>

#include "prefpareto/error.hpp"
#include "prefpareto/oracle_user.hpp"
#include "prefpareto/random.hpp"

namespace prefpareto::eval {

void TiedRanking::validate() const {
    std::set<FrontId> seen;
    int max_rank = 0;
    std::set<int> ranks;
    for (const auto& it : items) {
        if (!seen.insert(it.id).second) fail(ErrorCode::parameter, "ranking lists an item twice");
        if (it.rank < 1) fail(ErrorCode::parameter, "ranks start at 1");
        ranks.insert(it.rank);
        max_rank = std::max(max_rank, it.rank);
    }
    if (static_cast<int>(ranks.size()) != max_rank) fail(ErrorCode::parameter, "ranks are not contiguous");
}

double sum_squared_deviations(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return ss;
}

namespace {

bool within_tie_tolerance(double candidate, double best) {
    return candidate <= best + 1e-12 * std::max(1.0, std::abs(best));
}

double gvf_from(double cost, double total) { return total > 0.0 ? 1.0 - cost / total : 1.0; }

}  // namespace

BreaksResult fisher_jenks(std::span<const double> values, std::size_t k) {
    const std::size_t n = values.size();
    if (k < 1 || k > n) {
        fail(ErrorCode::parameter, "bucket count " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    }
    if (!std::is_sorted(values.begin(), values.end())) fail(ErrorCode::parameter, "values must be sorted");

    // cost[i][j]: SSD of values[i, j)
    std::vector<std::vector<double>> cost(n + 1, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j <= n; ++j) cost[i][j] = sum_squared_deviations(values.subspan(i, j - i));
    }

    // best[m][i]: minimal cost of splitting the suffix values[i, n) into m buckets
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> best(k + 1, std::vector<double>(n + 1, kInf));
    for (std::size_t i = 0; i < n; ++i) best[1][i] = cost[i][n];
    for (std::size_t m = 2; m <= k; ++m) {
        for (std::size_t i = 0; i + m <= n; ++i) {
            for (std::size_t j = i + 1; j + (m - 1) <= n; ++j) {
                best[m][i] = std::min(best[m][i], cost[i][j] + best[m - 1][j]);
            }
        }
    }

    // Walk forward taking the earliest break that stays optimal.
    BreaksResult out;
    out.k = k;
    std::size_t start = 0;
    for (std::size_t m = k; m >= 2; --m) {
        std::size_t chosen = n;
        for (std::size_t j = start + 1; j + (m - 1) <= n; ++j) {
            if (within_tie_tolerance(cost[start][j] + best[m - 1][j], best[m][start])) {
                chosen = j;
                break;
            }
        }
        out.break_index.push_back(chosen);
        start = chosen;
    }

    out.assignment.assign(n, 0);
    std::size_t lo = 0;
    for (std::size_t b = 0; b < k; ++b) {
        const std::size_t hi = b + 1 < k ? out.break_index[b] : n;
        for (std::size_t i = lo; i < hi; ++i) out.assignment[i] = b;
        out.cost += cost[lo][hi];
        if (b + 1 < k) out.boundaries.push_back(values[hi - 1]);
        lo = hi;
    }
    out.gvf = gvf_from(out.cost, cost[0][n]);
    return out;
}

std::vector<double> gvf_curve(std::span<const double> values, std::size_t k_max) {
    std::vector<double> curve;
    curve.reserve(k_max);
    for (std::size_t k = 1; k <= k_max; ++k) curve.push_back(fisher_jenks(values, k).gvf);
    return curve;
}

ElbowResult select_k_elbow_detail(std::span<const double> values, std::size_t k_max) {
    const std::size_t n = values.size();
    if (n == 0) fail(ErrorCode::empty_input, "elbow selection on no values");
    if (k_max < 1 || k_max > n) fail(ErrorCode::parameter, "k_max outside [1, n]");
    if (!std::is_sorted(values.begin(), values.end())) fail(ErrorCode::parameter, "values must be sorted");

    std::size_t distinct = 1;
    for (std::size_t i = 1; i < n; ++i) distinct += values[i] != values[i - 1] ? 1 : 0;

    ElbowResult out;
    if (distinct == 1) {
        out.k = 1;
        out.gvf = {1.0};
        return out;
    }
    const std::size_t k_cap = std::min(k_max, distinct);
    if (n <= 2) {
        out.k = k_cap;
        out.gvf = gvf_curve(values, k_cap);
        return out;
    }

    // One point past the cap so the last candidate has a successor gain.
    const std::size_t k_eval = std::min(k_cap + 1, distinct);
    const auto curve = gvf_curve(values, k_eval);
    auto g = [&](std::size_t k) { return k == 0 ? 0.0 : curve[std::min(k, k_eval) - 1]; };

    std::size_t knee = 1;
    double best_drop = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= k_cap; ++k) {
        const double gain = g(k) - g(k - 1);
        const double next_gain = k + 1 <= k_eval ? g(k + 1) - g(k) : 0.0;
        const double drop = gain - next_gain;
        if (drop > best_drop) {
            best_drop = drop;
            knee = k;
        }
    }
    out.gvf.assign(curve.begin(), curve.begin() + static_cast<std::ptrdiff_t>(k_cap));
    out.k = knee;
    if (g(knee) < kKneeMinGvf) {
        out.fallback = true;
        out.k = k_cap;
        for (std::size_t k = 1; k <= k_cap; ++k) {
            if (g(k) >= kFlatCurveGvf) {
                out.k = k;
                break;
            }
        }
    }
    return out;
}

std::size_t select_k_elbow(std::span<const double> values, std::size_t k_max) {
    return select_k_elbow_detail(values, k_max).k;
}

TiedRanking tied_ranking_from_values(std::span<const FrontId> ids, std::span<const double> values,
                                     Direction direction) {
    if (ids.size() != values.size()) fail(ErrorCode::dimension, "ids and values differ in length");
    if (ids.empty()) fail(ErrorCode::empty_input, "ranking of no items");
    for (double v : values) {
        if (!std::isfinite(v)) fail(ErrorCode::numeric, "non-finite indicator value");
    }

    std::vector<std::size_t> order(ids.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> sorted(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = values[order[i]];

    const std::size_t k = select_k_elbow(sorted, sorted.size());
    const auto breaks = fisher_jenks(sorted, k);

    TiedRanking out;
    out.items.resize(ids.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const std::size_t bucket = breaks.assignment[pos];
        const int rank = direction == Direction::maximize ? static_cast<int>(k - bucket) : static_cast<int>(bucket + 1);
        out.items[order[pos]] = {ids[order[pos]], rank};
    }
    return out;
}

TiedRanking tied_ranking(std::span<const core::ParetoFront> fronts, core::IndicatorKind kind,
                         Direction direction, std::span<const FrontId> ids) {
    if (fronts.empty()) fail(ErrorCode::empty_input, "ranking of no fronts");
    std::vector<FrontId> own_ids;
    if (ids.empty()) {
        own_ids.resize(fronts.size());
        std::iota(own_ids.begin(), own_ids.end(), FrontId{0});
        ids = own_ids;
    }
    std::vector<double> values;
    values.reserve(fronts.size());
    for (const auto& f : fronts) values.push_back(core::indicator_value(kind, f));
    return tied_ranking_from_values(ids, values, direction);
}

TiedRanking ranking_from_scores(std::span<const FrontId> ids, std::span<const double> scores) {
    if (ids.size() != scores.size()) fail(ErrorCode::dimension, "ids and scores differ in length");
    std::vector<std::size_t> order(ids.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    TiedRanking out;
    out.items.resize(ids.size());
    int rank = 0;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        if (pos == 0 || scores[order[pos]] != scores[order[pos - 1]]) ++rank;
        out.items[order[pos]] = {ids[order[pos]], rank};
    }
    return out;
}

namespace {

// Counts inversions of `v` while merge-sorting it.
std::int64_t count_swaps(std::vector<int>& v, std::vector<int>& buf, std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::int64_t swaps = count_swaps(v, buf, lo, mid) + count_swaps(v, buf, mid, hi);
    std::size_t i = lo, j = mid, out = lo;
    while (i < mid && j < hi) {
        if (v[j] < v[i]) {
            swaps += static_cast<std::int64_t>(mid - i);
            buf[out++] = v[j++];
        } else {
            buf[out++] = v[i++];
        }
    }
    while (i < mid) buf[out++] = v[i++];
    while (j < hi) buf[out++] = v[j++];
    std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
              v.begin() + static_cast<std::ptrdiff_t>(lo));
    return swaps;
}

template <typename Key>
std::int64_t tied_pairs(const std::vector<Key>& sorted_keys) {
    std::int64_t total = 0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= sorted_keys.size(); ++i) {
        if (i < sorted_keys.size() && sorted_keys[i] == sorted_keys[i - 1]) {
            ++run;
        } else {
            total += static_cast<std::int64_t>(run * (run - 1) / 2);
            run = 1;
        }
    }
    return total;
}

}  // namespace

// Knight's O(n log n) algorithm.
double kendall_tau_b(const TiedRanking& a, const TiedRanking& b) {
    if (a.items.size() != b.items.size()) fail(ErrorCode::parameter, "rankings cover different items");
    std::map<FrontId, int> rank_b;
    for (const auto& it : b.items) rank_b[it.id] = it.rank;
    std::vector<std::pair<int, int>> joint;
    joint.reserve(a.items.size());
    for (const auto& it : a.items) {
        auto found = rank_b.find(it.id);
        if (found == rank_b.end()) fail(ErrorCode::parameter, "rankings cover different items");
        joint.emplace_back(it.rank, found->second);
    }
    if (rank_b.size() != joint.size()) fail(ErrorCode::parameter, "rankings cover different items");

    const auto n = static_cast<std::int64_t>(joint.size());
    const std::int64_t n0 = n * (n - 1) / 2;
    std::sort(joint.begin(), joint.end());

    std::vector<int> first(joint.size());
    for (std::size_t i = 0; i < joint.size(); ++i) first[i] = joint[i].first;
    const std::int64_t ties_a = tied_pairs(first);
    const std::int64_t ties_joint = tied_pairs(joint);

    std::vector<int> second(joint.size());
    for (std::size_t i = 0; i < joint.size(); ++i) second[i] = joint[i].second;
    std::vector<int> buf(second.size());
    const std::int64_t swaps = count_swaps(second, buf, 0, second.size());
    const std::int64_t ties_b = tied_pairs(second);

    const double denom = std::sqrt(static_cast<double>(n0 - ties_a) * static_cast<double>(n0 - ties_b));
    if (denom == 0.0) return 0.0;
    const std::int64_t numer = n0 - ties_a - ties_b + ties_joint - 2 * swaps;
    return static_cast<double>(numer) / denom;
}

CvResult cross_validate_ranker(std::span<const core::ParetoFront> fronts, core::IndicatorKind kind,
                               const CvConfig& cfg) {
    const std::size_t n = fronts.size();
    if (cfg.folds < 2) fail(ErrorCode::parameter, "cross-validation needs at least two folds");
    if (n < 2 * cfg.folds || n % cfg.folds != 0) {
        fail(ErrorCode::parameter, std::to_string(n) + " fronts cannot be split into " +
                                       std::to_string(cfg.folds) + " equal folds of at least 2");
    }
    const std::size_t fold_size = n / cfg.folds;
    const std::size_t within_fold = fold_size * (fold_size - 1) / 2;
    if (cfg.n_pairs > cfg.folds * within_fold) {
        fail(ErrorCode::parameter, "n_pairs exceeds " + std::to_string(cfg.folds * within_fold));
    }

    const feat::EncodingConfig enc;
    const auto matrices = feat::front_matrices(fronts, enc);
    const auto stats = feat::fit_stats(matrices);
    rank::FeatureMap features;
    for (std::size_t i = 0; i < n; ++i) features[static_cast<FrontId>(i)] = feat::encode(matrices[i], stats);

    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = core::indicator_value(kind, fronts[i]);
    const oracle::OracleConfig oracle_cfg{kind, oracle::TieMode::strict};
    auto fold_of = [fold_size](std::size_t front) { return front / fold_size; };

    CvResult out;
    for (std::size_t test = 0; test < cfg.folds; ++test) {
        std::vector<oracle::FrontPair> pool;
        for (std::size_t step = 1; step < cfg.folds; ++step) {
            const std::size_t f = (test + step) % cfg.folds;
            for (std::size_t i = f * fold_size; i < (f + 1) * fold_size; ++i) {
                for (std::size_t j = i + 1; j < (f + 1) * fold_size; ++j) {
                    pool.emplace_back(static_cast<FrontId>(i), static_cast<FrontId>(j));
                }
            }
        }
        if (cfg.n_pairs > pool.size()) {
            std::vector<oracle::FrontPair> cross;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    if (fold_of(i) != test && fold_of(j) != test && fold_of(i) != fold_of(j)) {
                        cross.emplace_back(static_cast<FrontId>(i), static_cast<FrontId>(j));
                    }
                }
            }
            Rng rng(derive_seed(cfg.seed, test));
            rng.shuffle(std::span<oracle::FrontPair>(cross));
            pool.insert(pool.end(), cross.begin(), cross.end());
        }
        pool.resize(cfg.n_pairs);

        const auto prefs = oracle::label_pairs_by_value(pool, values, oracle_cfg);
        const auto data = rank::build_svm_dataset(prefs, features);
        const auto model = rank::train_linear_ranksvm(data, cfg.train, stats.fingerprint());

        std::vector<FrontId> test_ids;
        std::vector<double> test_values, scores;
        for (std::size_t i = test * fold_size; i < (test + 1) * fold_size; ++i) {
            test_ids.push_back(static_cast<FrontId>(i));
            test_values.push_back(values[i]);
            scores.push_back(rank::utility(model, features.at(static_cast<FrontId>(i))));
        }
        const auto truth = tied_ranking_from_values(test_ids, test_values, direction_of(kind));
        const auto predicted = ranking_from_scores(test_ids, scores);
        out.per_fold.push_back(kendall_tau_b(truth, predicted));
        out.train_pairs_per_fold.push_back(prefs.size());
    }

    const auto folds = static_cast<double>(out.per_fold.size());
    out.tau_mean = std::accumulate(out.per_fold.begin(), out.per_fold.end(), 0.0) / folds;
    double ss = 0.0;
    for (double t : out.per_fold) ss += (t - out.tau_mean) * (t - out.tau_mean);
    out.tau_std = std::sqrt(ss / folds);
    return out;
}

}  // namespace prefpareto::eval
