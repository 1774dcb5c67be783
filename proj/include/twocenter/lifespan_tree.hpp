#pragma once

#include "arrangement.hpp"

#include <functional>
#include <vector>

namespace twocenter {

// Half-open interval of tour positions during which an item stays on one
// side of the separation.
struct LifeSpan {
    int item = 0;
    int lo = 0;
    int hi = 0; // exclusive
};

struct SpanFamilies {
    std::vector<LifeSpan> plus;
    std::vector<LifeSpan> minus;
};

// Reconstructs, for every item, the maximal intervals it spends in P+ and
// P- along the tour.  initially_plus gives the membership at position 0;
// each later step toggles exactly the plane recorded in the tour.
inline SpanFamilies compute_spans(const CellTour& tour, const std::vector<bool>& initially_plus) {
    SpanFamilies out;
    int n = static_cast<int>(initially_plus.size());
    int len = static_cast<int>(tour.steps.size());
    if (len == 0) return out;
    std::vector<bool> cur = initially_plus;
    std::vector<int> open_since(n, 0);
    auto close = [&](int item, int pos) {
        auto& list = cur[item] ? out.plus : out.minus;
        list.push_back({item, open_since[item], pos});
    };
    for (int pos = 1; pos < len; ++pos) {
        int item = tour.steps[pos].toggled;
        if (item < 0 || item >= n) throw SpanOutOfRange("tour toggles unknown item");
        close(item, pos);
        cur[item] = !cur[item];
        open_since[item] = pos;
    }
    for (int item = 0; item < n; ++item) close(item, len);
    return out;
}

// Canonical segment-tree node cover of [lo, hi) inside [0, size).
inline void segment_cover(int size, int lo, int hi, std::vector<int>& nodes) {
    int l = lo + size, r = hi + size;
    while (l < r) {
        if (l & 1) nodes.push_back(l++);
        if (r & 1) nodes.push_back(--r);
        l >>= 1;
        r >>= 1;
    }
}

struct SpanTree {
    int leaf_count = 0;
    int size = 1; // power of two >= leaf_count
    std::vector<std::vector<int>> node_items; // indexed by tree node, 1-based
};

inline SpanTree build_span_tree(const std::vector<LifeSpan>& spans, int leaf_count) {
    SpanTree t;
    t.leaf_count = leaf_count;
    while (t.size < std::max(1, leaf_count)) t.size <<= 1;
    t.node_items.assign(2 * t.size, {});
    std::vector<int> nodes;
    for (auto& s : spans) {
        if (s.lo < 0 || s.hi > leaf_count || s.lo >= s.hi)
            throw SpanOutOfRange("span outside [0, leafCount)");
        nodes.clear();
        segment_cover(t.size, s.lo, s.hi, nodes);
        for (int nd : nodes) t.node_items[nd].push_back(s.item);
    }
    return t;
}

// DFS over the tree maintaining the insertion stack of items; fn is called
// once per leaf position with the exact membership set at that position.
// Node ids on the root path are also provided so callers can attach
// per-node precomputations (such as spherical polytopes).
template <class Fn>
inline void walk_leaves(const SpanTree& t, Fn&& fn) {
    std::vector<int> items;
    std::vector<int> path;
    auto rec = [&](auto&& self, int node, int lo, int hi) -> void {
        if (lo >= t.leaf_count) return;
        for (int it : t.node_items[node]) items.push_back(it);
        path.push_back(node);
        if (node >= t.size) {
            fn(lo, static_cast<const std::vector<int>&>(items),
               static_cast<const std::vector<int>&>(path));
        } else {
            int mid = (lo + hi) / 2;
            self(self, 2 * node, lo, mid);
            self(self, 2 * node + 1, mid, hi);
        }
        path.pop_back();
        items.resize(items.size() - t.node_items[node].size());
    };
    if (t.leaf_count > 0) rec(rec, 1, 0, t.size);
}

template <class Pred>
inline auto evaluate_leaves(const SpanTree& t, Pred&& pred) {
    using R = decltype(pred(0, std::declval<const std::vector<int>&>()));
    std::vector<R> out(t.leaf_count);
    walk_leaves(t, [&](int leaf, const std::vector<int>& items, const std::vector<int>&) {
        out[leaf] = pred(leaf, items);
    });
    return out;
}

} // namespace twocenter
