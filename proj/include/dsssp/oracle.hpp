#pragma once

#include <algorithm>
#include <deque>
#include <queue>
#include <vector>

#include "common.hpp"
#include "graph.hpp"

namespace dsssp {

// Textbook Dijkstra over the current snapshot of a view. Distances are
// INF_DIST when unreachable. If reversed is set, edges are traversed
// against their direction (single-target distances).
inline std::vector<i64> dijkstra_view(const GraphView& view, u32 source, bool reversed = false) {
    const DecrementalGraph& g = view.graph();
    std::vector<i64> dist(g.vertex_count(), INF_DIST);
    if (!view.contains(source)) return dist;
    using Item = std::pair<i64, u32>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[source] = 0;
    pq.push({0, source});
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d != dist[v]) continue;
        const auto& edges = reversed ? g.in_edges(v) : g.out_edges(v);
        for (u32 e : edges) {
            if (!view.edge_in_view(e)) continue;
            const GraphEdge& ed = g.edge(e);
            u32 w = reversed ? ed.from : ed.to;
            i64 nd = d + ed.weight;
            if (nd < dist[w]) {
                dist[w] = nd;
                pq.push({nd, w});
            }
        }
    }
    return dist;
}

// Independent second implementation for the oracle cross-check:
// Bellman-Ford-style label correcting with a deque (SPFA). Used only to
// validate dijkstra_view on fuzz instances.
inline std::vector<i64> label_correcting_view(const GraphView& view, u32 source,
                                              bool reversed = false) {
    const DecrementalGraph& g = view.graph();
    std::vector<i64> dist(g.vertex_count(), INF_DIST);
    if (!view.contains(source)) return dist;
    std::deque<u32> q;
    std::vector<char> in_q(g.vertex_count(), 0);
    dist[source] = 0;
    q.push_back(source);
    in_q[source] = 1;
    while (!q.empty()) {
        u32 v = q.front();
        q.pop_front();
        in_q[v] = 0;
        const auto& edges = reversed ? g.in_edges(v) : g.out_edges(v);
        for (u32 e : edges) {
            if (!view.edge_in_view(e)) continue;
            const GraphEdge& ed = g.edge(e);
            u32 w = reversed ? ed.from : ed.to;
            i64 nd = dist[v] + ed.weight;
            if (nd < dist[w]) {
                dist[w] = nd;
                if (!in_q[w]) {
                    q.push_back(w);
                    in_q[w] = 1;
                }
            }
        }
    }
    return dist;
}

// Ground-truth oracle bound to one graph; recomputes on demand.
class ExactOracle {
public:
    explicit ExactOracle(const DecrementalGraph& g) : g_(&g) {}

    std::vector<i64> distances_from(u32 s) const {
        return dijkstra_view(GraphView::whole(*g_), s);
    }

    i64 distance(u32 s, u32 u) const { return distances_from(s)[u]; }

    // Cross-check the two engines; returns true when they agree.
    bool self_check(u32 s) const {
        GraphView v = GraphView::whole(*g_);
        return dijkstra_view(v, s) == label_correcting_view(v, s);
    }

private:
    const DecrementalGraph* g_;
};

// Exact diameter of a vertex set inside a view: max over u of the
// eccentricity restricted to the set; INF_DIST if the set is not
// strongly connected within the view.
inline i64 exact_diameter(const GraphView& view, const std::vector<u32>& comp) {
    i64 diam = 0;
    GraphView sub = view.restricted(comp);
    for (u32 u : comp) {
        std::vector<i64> dist = dijkstra_view(sub, u);
        for (u32 v : comp) {
            diam = std::max(diam, dist[v]);
            if (diam >= INF_DIST) return INF_DIST;
        }
    }
    return diam;
}

// Diameter estimate with a size cap: exact for small components, and a
// sampled lower bound (max eccentricity over `cap` random sources,
// flagged as sampled) for large ones, where the all-pairs sweep would
// dominate the test budget.
struct DiameterEstimate {
    i64 value = 0;
    bool sampled = false;
};

inline DiameterEstimate diameter_estimate(const GraphView& view, const std::vector<u32>& comp,
                                          Rng* rng = nullptr, std::size_t cap = 200) {
    DiameterEstimate de;
    if (comp.size() <= cap || rng == nullptr) {
        de.value = exact_diameter(view, comp);
        return de;
    }
    de.sampled = true;
    GraphView sub = view.restricted(comp);
    for (std::size_t t = 0; t < cap; ++t) {
        u32 u = comp[rng->next_below(comp.size())];
        std::vector<i64> dist = dijkstra_view(sub, u);
        for (u32 v : comp) {
            de.value = std::max(de.value, dist[v]);
            if (de.value >= INF_DIST) return de;
        }
    }
    return de;
}

}  // namespace dsssp
