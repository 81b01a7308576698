#pragma once

// One-dimensional slope clustering for rows of the mex matrix: complete
// linkage, mean silhouette, and Lloyd k-means.
//
// Sorted 1-D data makes every cluster of both methods a contiguous interval,
// so merges, distance sums and assignments all work on prefix sums.

#include "fibpart/mex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

namespace fibpart {

struct SlopeSample {
    std::size_t row = 0;
    std::size_t window = 0;
    std::size_t first_col = 0;  // column of values[0]
    std::vector<double> values;  // q[row][j] / j
};

/// Slopes q[row][j] / j over the last `window` generated columns.
inline SlopeSample extract_slopes(const MexMatrix& matrix, std::size_t row, std::size_t window) {
    if (row >= matrix.rows()) throw std::invalid_argument("row " + std::to_string(row) + " not generated");
    const std::size_t cols = matrix.cols();
    if (window == 0 || cols < window + 1) {
        throw std::invalid_argument("insufficient columns: need more than " + std::to_string(window) + ", have " +
                                    std::to_string(cols));
    }
    SlopeSample s;
    s.row = row;
    s.window = window;
    s.first_col = cols - window;
    s.values.reserve(window);
    const auto q = matrix.row(row);
    for (std::size_t j = s.first_col; j < cols; ++j) s.values.push_back(static_cast<double>(q[j]) / static_cast<double>(j));
    return s;
}

namespace detail {

// Indices of data in ascending order, ties by index.
inline std::vector<std::size_t> sorted_order(const std::vector<double>& data) {
    std::vector<std::size_t> idx(data.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return data[a] < data[b]; });
    return idx;
}

}  // namespace detail

/// Complete-linkage dendrogram over 1-D data, recorded as the merge step at
/// which each gap between sorted neighbours disappears.
class CompleteLinkage {
public:
    explicit CompleteLinkage(const std::vector<double>& data) : order_(detail::sorted_order(data)) {
        if (data.empty()) throw std::invalid_argument("complete linkage needs data");
        const std::size_t n = data.size();
        sorted_.reserve(n);
        for (auto i : order_) sorted_.push_back(data[i]);
        gap_step_.assign(n > 0 ? n - 1 : 0, 0);

        // Clusters are runs [start, end] of sorted positions; linked by start.
        std::vector<std::size_t> end(n), prev(n), next(n);
        for (std::size_t p = 0; p < n; ++p) {
            end[p] = p;
            prev[p] = p == 0 ? kNone : p - 1;
            next[p] = p + 1 == n ? kNone : p + 1;
        }
        // The linkage of adjacent runs A < B is max(B) - min(A); non-adjacent
        // runs are always farther apart, so only neighbours compete.
        std::set<std::pair<double, std::size_t>> heap;  // (distance, start of left run)
        const auto dist = [&](std::size_t a) { return sorted_[end[next[a]]] - sorted_[a]; };
        for (std::size_t p = 0; p + 1 < n; ++p) heap.emplace(dist(p), p);
        for (std::size_t step = 1; step < n; ++step) {
            const auto [d, a] = *heap.begin();
            heap.erase(heap.begin());
            const std::size_t b = next[a];
            if (prev[a] != kNone) heap.erase({dist(prev[a]), prev[a]});
            if (next[b] != kNone) heap.erase({dist(b), b});
            gap_step_[end[a]] = step;
            end[a] = end[b];
            next[a] = next[b];
            if (next[b] != kNone) prev[next[b]] = a;
            if (prev[a] != kNone) heap.emplace(dist(prev[a]), prev[a]);
            if (next[a] != kNone) heap.emplace(dist(a), a);
        }
    }

    std::size_t size() const { return sorted_.size(); }
    const std::vector<double>& sorted() const { return sorted_; }

    /// Labels 0..k-1 numbered by ascending value, in the original data order.
    std::vector<int> labels(std::size_t k) const {
        const std::size_t n = size();
        if (k < 1 || k > n) throw std::invalid_argument("k must be in 1..|data|");
        const std::size_t merges = n - k;  // gaps removed at steps 1..merges are gone
        std::vector<int> out(n);
        int label = 0;
        for (std::size_t p = 0; p < n; ++p) {
            out[order_[p]] = label;
            if (p + 1 < n && gap_step_[p] > merges) ++label;
        }
        return out;
    }

private:
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> order_;
    std::vector<double> sorted_;
    std::vector<std::size_t> gap_step_;
};

inline std::vector<int> hier_complete_linkage(const std::vector<double>& data, std::size_t k) {
    return CompleteLinkage(data).labels(k);
}

/// Mean silhouette. Singleton clusters score 0.
inline double silhouette(const std::vector<double>& data, const std::vector<int>& labels, unsigned threads = 1) {
    if (data.size() != labels.size()) throw std::invalid_argument("silhouette: data and labels differ in length");
    std::map<int, std::vector<double>> groups;
    for (std::size_t p = 0; p < data.size(); ++p) groups[labels[p]].push_back(data[p]);
    if (groups.size() < 2) throw std::invalid_argument("silhouette needs at least two clusters");
    struct Group {
        std::vector<double> v;
        std::vector<double> prefix;  // prefix[i] = v[0] + ... + v[i-1]
    };
    std::map<int, Group> g;
    for (auto& [label, v] : groups) {
        std::sort(v.begin(), v.end());
        Group grp{v, std::vector<double>(v.size() + 1, 0.0)};
        for (std::size_t i = 0; i < v.size(); ++i) grp.prefix[i + 1] = grp.prefix[i] + v[i];
        g.emplace(label, std::move(grp));
    }
    // sum over y in G of |x - y|
    const auto abs_sum = [](const Group& grp, double x) {
        const std::size_t below = static_cast<std::size_t>(std::lower_bound(grp.v.begin(), grp.v.end(), x) - grp.v.begin());
        const double lo = grp.prefix[below];
        const double hi = grp.prefix.back() - lo;
        const auto above = grp.v.size() - below;
        return (x * static_cast<double>(below) - lo) + (hi - x * static_cast<double>(above));
    };
    const auto score_range = [&](std::size_t from, std::size_t to) {
        double total = 0;
        for (std::size_t p = from; p < to; ++p) {
            const auto& own = g.at(labels[p]);
            if (own.v.size() == 1) continue;
            const double a = abs_sum(own, data[p]) / static_cast<double>(own.v.size() - 1);
            double b = std::numeric_limits<double>::infinity();
            for (const auto& [label, other] : g) {
                if (label != labels[p]) b = std::min(b, abs_sum(other, data[p]) / static_cast<double>(other.v.size()));
            }
            const double m = std::max(a, b);
            if (m > 0) total += (b - a) / m;
        }
        return total;
    };
    const std::size_t n = data.size();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    double total = 0;
    if (threads == 1) {
        total = score_range(0, n);
    } else {
        std::vector<double> parts(threads);
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                const std::size_t lo = std::min(n, w * chunk);
                parts[w] = score_range(lo, std::min(n, lo + chunk));
            });
        }
        for (auto& th : pool) th.join();
        for (double p : parts) total += p;
    }
    return total / static_cast<double>(n);
}

struct KMeansResult {
    std::vector<double> centers;   // ascending
    std::vector<std::size_t> counts;
    double wss = 0;                // within-cluster sum of squares
    std::vector<double> wss_trace; // objective after each Lloyd iteration of the kept run
};

namespace detail {

struct SortedData {
    std::vector<double> v;
    std::vector<double> s1, s2;  // prefix sums of v and v^2

    explicit SortedData(std::vector<double> data) : v(std::move(data)) {
        std::sort(v.begin(), v.end());
        s1.assign(v.size() + 1, 0.0);
        s2.assign(v.size() + 1, 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            s1[i + 1] = s1[i] + v[i];
            s2[i + 1] = s2[i] + v[i] * v[i];
        }
    }

    // Cuts such that points [cut[c], cut[c+1]) go to center c (centers ascending).
    std::vector<std::size_t> assign(const std::vector<double>& centers) const {
        std::vector<std::size_t> cut{0};
        for (std::size_t c = 0; c + 1 < centers.size(); ++c) {
            const double mid = (centers[c] + centers[c + 1]) / 2;
            cut.push_back(static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), mid) - v.begin()));
        }
        cut.push_back(v.size());
        return cut;
    }

    double cost(std::size_t lo, std::size_t hi, double c) const {
        const double n = static_cast<double>(hi - lo);
        return (s2[hi] - s2[lo]) - 2 * c * (s1[hi] - s1[lo]) + n * c * c;
    }
};

inline KMeansResult lloyd(const SortedData& d, std::vector<double> centers, int max_iter = 1000) {
    KMeansResult r;
    std::sort(centers.begin(), centers.end());
    std::vector<std::size_t> cut = d.assign(centers);
    for (int it = 0; it < max_iter; ++it) {
        for (std::size_t c = 0; c < centers.size(); ++c) {
            if (cut[c + 1] > cut[c]) centers[c] = (d.s1[cut[c + 1]] - d.s1[cut[c]]) / static_cast<double>(cut[c + 1] - cut[c]);
        }
        std::sort(centers.begin(), centers.end());
        double wss = 0;
        for (std::size_t c = 0; c < centers.size(); ++c) wss += d.cost(cut[c], cut[c + 1], centers[c]);
        r.wss_trace.push_back(wss);
        auto next = d.assign(centers);
        if (next == cut) break;
        cut = std::move(next);
    }
    r.centers = centers;
    r.wss = 0;
    for (std::size_t c = 0; c < centers.size(); ++c) {
        r.counts.push_back(cut[c + 1] - cut[c]);
        r.wss += d.cost(cut[c], cut[c + 1], centers[c]);
    }
    return r;
}

}  // namespace detail

/// Lloyd's algorithm from quantile seeds, then `restarts` runs from random
/// data points drawn with `seed`; the run with the smallest objective wins.
inline KMeansResult kmeans(const std::vector<double>& data, std::size_t k, std::uint64_t seed = 1, int restarts = 8) {
    if (k < 1 || k > data.size()) throw std::invalid_argument("kmeans needs 1 <= k <= |data|");
    const detail::SortedData d(data);
    const std::size_t n = d.v.size();
    std::vector<double> init(k);
    for (std::size_t c = 0; c < k; ++c) {
        init[c] = d.v[std::min(n - 1, static_cast<std::size_t>((static_cast<double>(c) + 0.5) * static_cast<double>(n) / static_cast<double>(k)))];
    }
    KMeansResult best = detail::lloyd(d, init);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int r = 0; r < restarts; ++r) {
        for (auto& c : init) c = d.v[pick(rng)];
        auto cand = detail::lloyd(d, init);
        if (cand.wss < best.wss) best = std::move(cand);
    }
    return best;
}

/// Index of the nearest center (centers ascending; ties go to the lower one).
inline int nearest_center(const std::vector<double>& centers, double x) {
    int best = 0;
    for (std::size_t c = 1; c < centers.size(); ++c) {
        if (std::abs(x - centers[c]) < std::abs(x - centers[static_cast<std::size_t>(best)])) best = static_cast<int>(c);
    }
    return best;
}

struct ClusterReport {
    std::size_t row = 0;
    std::size_t window = 0;
    std::size_t cols = 0;
    std::map<std::size_t, double> silhouette;  // k -> mean silhouette of complete-linkage labels
    std::size_t k_star = 1;
    std::vector<double> centers;
    std::vector<std::size_t> counts;
    std::vector<double> spreads;  // per cluster: max |slope - center|
};

/// Silhouette curve for k = 2..k_max, k* = argmax (ties: smaller k), and
/// k-means centers for k*. Constant data gives k* = 1.
inline ClusterReport analyze_sample(const SlopeSample& sample, std::size_t cols, std::size_t k_max, std::uint64_t seed = 1,
                                    unsigned threads = 1) {
    ClusterReport rep;
    rep.row = sample.row;
    rep.window = sample.window;
    rep.cols = cols;
    const auto& data = sample.values;
    std::set<double> distinct(data.begin(), data.end());
    const std::size_t top = std::min(k_max, distinct.size());
    if (top >= 2) {
        const CompleteLinkage tree(data);
        double best = -2;
        for (std::size_t k = 2; k <= top; ++k) {
            const double s = silhouette(data, tree.labels(k), threads);
            rep.silhouette[k] = s;
            if (s > best) {
                best = s;
                rep.k_star = k;
            }
        }
    }
    const auto km = kmeans(data, rep.k_star, seed);
    rep.centers = km.centers;
    rep.counts = km.counts;
    rep.spreads.assign(km.centers.size(), 0.0);
    for (double x : data) {
        const auto c = static_cast<std::size_t>(nearest_center(km.centers, x));
        rep.spreads[c] = std::max(rep.spreads[c], std::abs(x - km.centers[c]));
    }
    return rep;
}

inline ClusterReport analyze_row(const MexMatrix& matrix, std::size_t row, std::size_t window, std::size_t k_max,
                                 std::uint64_t seed = 1, unsigned threads = 1) {
    return analyze_sample(extract_slopes(matrix, row, window), matrix.cols(), k_max, seed, threads);
}

inline nlohmann::json to_json(const ClusterReport& r) {
    nlohmann::json j{{"row", r.row},     {"window", r.window},   {"cols", r.cols},      {"k_star", r.k_star},
                     {"centers", r.centers}, {"counts", r.counts}, {"spreads", r.spreads}};
    auto& s = j["silhouette"] = nlohmann::json::object();
    for (const auto& [k, v] : r.silhouette) s[std::to_string(k)] = v;
    return j;
}

/// Per-point "j,slope,cluster" rows, clusters numbered by ascending center.
inline void write_cluster_csv(const SlopeSample& sample, const std::vector<double>& centers, std::ostream& out) {
    out << "j,slope,cluster\n";
    out.precision(17);
    for (std::size_t p = 0; p < sample.values.size(); ++p) {
        out << sample.first_col + p << ',' << sample.values[p] << ',' << nearest_center(centers, sample.values[p]) << '\n';
    }
}

}  // namespace fibpart
