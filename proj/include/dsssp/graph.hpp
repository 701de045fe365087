#pragma once

#include <algorithm>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "common.hpp"

namespace dsssp {

// A directed edge of a decremental graph. Dead edges are tombstoned so
// that edge ids stay stable across the whole deletion sequence.
struct GraphEdge {
    u32 from = 0;
    u32 to = 0;
    i64 weight = 1;
    bool alive = true;
};

// Directed graph supporting only edge deletions. Self-loops are dropped
// at load time and parallel input edges are collapsed keeping the
// minimum weight; edge ids are assigned in input order among survivors.
class DecrementalGraph {
public:
    DecrementalGraph() = default;

    static DecrementalGraph load(u32 n, const std::vector<std::tuple<u32, u32, i64>>& edges) {
        DecrementalGraph g;
        g.n_ = n;
        g.out_.assign(n, {});
        g.in_.assign(n, {});
        // Collapse parallel edges to the minimum weight while remembering
        // the first input position of each surviving pair.
        std::map<std::pair<u32, u32>, std::pair<i64, std::size_t>> best;
        std::size_t pos = 0;
        for (const auto& [u, v, w] : edges) {
            if (u >= n || v >= n) throw ContractError("edge endpoint out of range");
            if (w <= 0) throw ContractError("edge weight must be positive");
            if (u == v) { ++pos; continue; }
            auto it = best.find({u, v});
            if (it == best.end()) {
                best[{u, v}] = {w, pos};
            } else if (w < it->second.first) {
                it->second.first = w;
            }
            ++pos;
        }
        std::vector<std::tuple<std::size_t, u32, u32, i64>> ordered;
        ordered.reserve(best.size());
        for (const auto& [uv, wp] : best) {
            ordered.emplace_back(wp.second, uv.first, uv.second, wp.first);
        }
        std::sort(ordered.begin(), ordered.end());
        for (const auto& [p, u, v, w] : ordered) {
            (void)p;
            u32 id = static_cast<u32>(g.edges_.size());
            g.edges_.push_back(GraphEdge{u, v, w, true});
            g.out_[u].push_back(id);
            g.in_[v].push_back(id);
        }
        g.alive_count_ = g.edges_.size();
        return g;
    }

    u32 vertex_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t alive_edge_count() const { return alive_count_; }

    const GraphEdge& edge(u32 e) const { return edges_[e]; }
    bool alive(u32 e) const { return edges_[e].alive; }

    // Edge ids leaving / entering v (dead edges included; callers filter).
    const std::vector<u32>& out_edges(u32 v) const { return out_[v]; }
    const std::vector<u32>& in_edges(u32 v) const { return in_[v]; }

    const std::vector<u32>& deletion_log() const { return deletion_log_; }

    void delete_edge(u32 e) {
        if (e >= edges_.size()) throw ContractError("delete_edge: bad edge id");
        if (!edges_[e].alive) throw ContractError("delete_edge: edge already deleted");
        edges_[e].alive = false;
        deletion_log_.push_back(e);
        --alive_count_;
    }

    // Adds a vertex with no edges; used by augmentation wrappers (shadow
    // sources and sampling sources) before any deletion happens.
    u32 add_vertex() {
        out_.emplace_back();
        in_.emplace_back();
        return n_++;
    }

    // Adds an edge; only legal before the first deletion (augmentation is
    // part of structure initialization, the graph stays decremental
    // afterwards).
    u32 add_edge(u32 u, u32 v, i64 w) {
        if (!deletion_log_.empty()) throw ContractError("add_edge after deletions");
        if (u >= n_ || v >= n_ || u == v || w <= 0) throw ContractError("add_edge: bad edge");
        u32 id = static_cast<u32>(edges_.size());
        edges_.push_back(GraphEdge{u, v, w, true});
        out_[u].push_back(id);
        in_[v].push_back(id);
        ++alive_count_;
        return id;
    }

private:
    u32 n_ = 0;
    std::vector<GraphEdge> edges_;
    std::vector<std::vector<u32>> out_;
    std::vector<std::vector<u32>> in_;
    std::vector<u32> deletion_log_;
    std::size_t alive_count_ = 0;
};

// Restriction of a DecrementalGraph to a vertex subset, optionally minus
// an extra excluded-edge predicate (separator-incident edges). Views are
// cheap to copy conceptually but own their membership bitmap.
class GraphView {
public:
    GraphView() = default;

    GraphView(const DecrementalGraph* g, std::vector<u32> verts,
              const std::vector<char>* edge_excluded = nullptr)
        : g_(g), verts_(std::move(verts)), edge_excluded_(edge_excluded) {
        in_view_.assign(g_->vertex_count(), 0);
        for (u32 v : verts_) in_view_[v] = 1;
    }

    static GraphView whole(const DecrementalGraph& g) {
        std::vector<u32> verts(g.vertex_count());
        for (u32 v = 0; v < g.vertex_count(); ++v) verts[v] = v;
        return GraphView(&g, std::move(verts));
    }

    const DecrementalGraph& graph() const { return *g_; }
    const std::vector<u32>& vertices() const { return verts_; }
    std::size_t size() const { return verts_.size(); }
    bool contains(u32 v) const { return v < in_view_.size() && in_view_[v]; }

    bool edge_in_view(u32 e) const {
        const GraphEdge& ed = g_->edge(e);
        if (!ed.alive) return false;
        if (!contains(ed.from) || !contains(ed.to)) return false;
        if (edge_excluded_ && (*edge_excluded_)[e]) return false;
        return true;
    }

    // Sub-view over a subset of this view's vertices (same exclusions).
    GraphView restricted(std::vector<u32> verts) const {
        return GraphView(g_, std::move(verts), edge_excluded_);
    }

private:
    const DecrementalGraph* g_ = nullptr;
    std::vector<u32> verts_;
    std::vector<char> in_view_;
    const std::vector<char>* edge_excluded_ = nullptr;
};

// Tarjan SCC over a view. Returns components in reverse topological
// order of the condensation (standard Tarjan output order).
inline std::vector<std::vector<u32>> strongly_connected_components(const GraphView& view) {
    const DecrementalGraph& g = view.graph();
    u32 n = g.vertex_count();
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<u32> stack;
    std::vector<std::vector<u32>> sccs;
    int next_index = 0;

    // Iterative Tarjan to avoid recursion depth limits.
    struct Frame { u32 v; std::size_t ei; };
    for (u32 root : view.vertices()) {
        if (index[root] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto& outs = g.out_edges(f.v);
            bool descended = false;
            while (f.ei < outs.size()) {
                u32 e = outs[f.ei++];
                if (!view.edge_in_view(e)) continue;
                u32 w = g.edge(e).to;
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w, 0});
                    descended = true;
                    break;
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            }
            if (descended) continue;
            if (low[f.v] == index[f.v]) {
                std::vector<u32> comp;
                while (true) {
                    u32 w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp.push_back(w);
                    if (w == f.v) break;
                }
                sccs.push_back(std::move(comp));
            }
            u32 child = f.v;
            frames.pop_back();
            if (!frames.empty()) {
                low[frames.back().v] = std::min(low[frames.back().v], low[child]);
            }
        }
    }
    return sccs;
}

// Record of the bounded-weight-range reduction applied at one scale.
struct ScaleReduction {
    double epsilon = 0;
    i64 d_prime = 0;        // the scale D'
    double w_min = 0;       // epsilon * D' / (n - 1)
    double w_max = 0;       // 2 * D'
    double scale_factor = 0; // divisor epsilon * w_min
    double ratio_inflation = 0; // <= (1+eps)^2
    i64 d_max = 0;          // upper bound on relevant reduced distances

    // Maps a distance in the reduced graph back to the original scale.
    double unreduce(i64 reduced) const {
        return static_cast<double>(reduced) * scale_factor;
    }
};

// Bounded-weight-range reduction for one scale D': removes edges of
// weight >= 2D', raises small weights to w_min = eps*D'/(n-1), divides by
// eps*w_min and rounds up. Edge ids in the returned graph are fresh; the
// mapping old-id -> new-id (or -1 for removed) is returned alongside.
inline std::tuple<DecrementalGraph, ScaleReduction, std::vector<int>>
reduce_weight_range(const DecrementalGraph& g, i64 d_prime, double eps) {
    if (d_prime < 1 || (d_prime & (d_prime - 1)) != 0) {
        throw ContractError("reduce_weight_range: D' must be a positive power of 2");
    }
    if (!(eps > 0.0) || eps > 1.0) throw ContractError("reduce_weight_range: eps not in (0,1]");
    u32 n = g.vertex_count();
    ScaleReduction red;
    red.epsilon = eps;
    red.d_prime = d_prime;
    red.w_min = n > 1 ? eps * static_cast<double>(d_prime) / (n - 1) : 1.0;
    red.w_max = 2.0 * static_cast<double>(d_prime);
    red.scale_factor = eps * red.w_min;
    red.ratio_inflation = (1.0 + eps) * (1.0 + eps);
    red.d_max = static_cast<i64>(std::ceil(red.ratio_inflation * 2.0 * d_prime / red.scale_factor)) + 1;

    std::vector<std::tuple<u32, u32, i64>> edges;
    std::vector<int> id_map(g.edge_count(), -1);
    std::vector<u32> kept;
    for (u32 e = 0; e < g.edge_count(); ++e) {
        if (!g.alive(e)) continue;
        const GraphEdge& ed = g.edge(e);
        double w = static_cast<double>(ed.weight);
        if (w >= red.w_max) continue;  // too heavy to matter at this scale
        if (w < red.w_min) w = red.w_min;
        i64 rw = static_cast<i64>(std::ceil(w / red.scale_factor - 1e-12));
        edges.emplace_back(ed.from, ed.to, rw);
        kept.push_back(e);
    }
    DecrementalGraph rg = DecrementalGraph::load(n, edges);
    // load() preserves input order for surviving pairs and the input here
    // is already duplicate-free, so kept[i] corresponds to new edge i.
    for (u32 i = 0; i < kept.size(); ++i) id_map[kept[i]] = static_cast<int>(i);
    return {std::move(rg), red, std::move(id_map)};
}

}  // namespace dsssp
