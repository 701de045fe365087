#pragma once

#include <queue>
#include <unordered_map>
#include <vector>

#include "graph.hpp"

namespace dsssp {

// Even-Shiloach shortest-path trees (out-tree from the root and in-tree
// on the reversed graph) maintained under edge removals up to a distance
// threshold d. Weighted maintenance uses the level-increase discipline:
// when a vertex's support edge breaks, its candidate heap is refreshed
// until a minimum candidate is confirmed and the level rises to it.
//
// The structure snapshots the usable edges of its view at construction
// and stores everything in compact local indices, so memory is
// proportional to the view, not to the whole graph. Underlying graph
// deletions must be mirrored with remove_edge; edges can also be removed
// structure-locally without touching the graph (decomposition pruning).
class EsStructure {
public:
    EsStructure(const GraphView& view, u32 root, i64 d) : root_(root), d_(d), cap_(d + 1) {
        if (!view.contains(root)) throw ContractError("EsStructure: root not in view");
        const DecrementalGraph& g = view.graph();
        verts_ = view.vertices();
        nv_ = static_cast<u32>(verts_.size());
        local_of_.reserve(nv_ * 2);
        for (u32 i = 0; i < nv_; ++i) local_of_[verts_[i]] = i;
        // Snapshot usable edges.
        for (u32 i = 0; i < nv_; ++i) {
            for (u32 e : g.out_edges(verts_[i])) {
                if (!view.edge_in_view(e)) continue;
                const GraphEdge& ed = g.edge(e);
                auto it = local_of_.find(ed.to);
                if (it == local_of_.end()) continue;
                u32 idx = static_cast<u32>(edges_.size());
                edges_.push_back(LocalEdge{i, it->second, ed.weight, e});
                eidx_of_[e] = idx;
            }
        }
        out_adj_.assign(nv_, {});
        in_adj_.assign(nv_, {});
        for (u32 idx = 0; idx < edges_.size(); ++idx) {
            out_adj_[edges_[idx].tail].push_back(idx);
            in_adj_[edges_[idx].head].push_back(idx);
        }
        removed_.assign(edges_.size(), 0);
        scans_.assign(edges_.size(), 0);
        root_local_ = local_of_[root];
        out_ = DirTree(this, false);
        in_ = DirTree(this, true);
        out_.build();
        in_.build();
    }

    u32 root() const { return root_; }
    i64 threshold() const { return d_; }
    const std::vector<u32>& view_vertices() const { return verts_; }
    u32 view_size() const { return nv_; }
    bool in_view(u32 v) const { return local_of_.count(v) > 0; }

    // Levels: value in [0, d] or d+1 when unreachable within threshold.
    i64 out_level(u32 v) const { return level_of(out_, v); }
    i64 in_level(u32 v) const { return level_of(in_, v); }
    bool out_reachable(u32 v) const { return out_level(v) <= d_; }
    bool in_reachable(u32 v) const { return in_level(v) <= d_; }
    i64 unreachable_value() const { return cap_; }

    // Constant-time unreachable counts.
    u32 missing_out() const { return out_.missing; }
    u32 missing_in() const { return in_.missing; }

    // Parent pointers as global edge ids (-1 when none). The out-tree
    // parent edge of v enters v; the in-tree parent edge of v leaves v.
    int out_parent(u32 v) const { return parent_of(out_, v); }
    int in_parent(u32 v) const { return parent_of(in_, v); }

    u64 scan_count(u32 e) const {
        auto it = eidx_of_.find(e);
        return it == eidx_of_.end() ? 0 : scans_[it->second];
    }
    u64 total_scans() const { return total_scans_; }

    bool edge_usable(u32 e) const {
        auto it = eidx_of_.find(e);
        return it != eidx_of_.end() && !removed_[it->second];
    }

    // Removes e (global id) from the structure; no-op if e was never
    // snapshotted or was already removed.
    void remove_edge(u32 e) {
        auto it = eidx_of_.find(e);
        if (it == eidx_of_.end() || removed_[it->second]) return;
        remove_local(it->second);
        out_.settle();
        in_.settle();
    }

    // Removes every structure-edge incident to v, batched.
    void remove_vertex_edges(u32 v) {
        auto it = local_of_.find(v);
        if (it == local_of_.end()) return;
        u32 lv = it->second;
        for (u32 idx : out_adj_[lv]) {
            if (!removed_[idx]) remove_local(idx);
        }
        for (u32 idx : in_adj_[lv]) {
            if (!removed_[idx]) remove_local(idx);
        }
        out_.settle();
        in_.settle();
    }

    // Current usable snapshot edges as (global edge id, tail, head,
    // weight); used by decomposition pruning and separator calls on H_r.
    template <typename F>
    void for_each_usable_edge(F&& f) const {
        for (u32 idx = 0; idx < edges_.size(); ++idx) {
            if (removed_[idx]) continue;
            f(edges_[idx].gid, verts_[edges_[idx].tail], verts_[edges_[idx].head],
              edges_[idx].weight);
        }
    }

private:
    struct LocalEdge {
        u32 tail;
        u32 head;
        i64 weight;
        u32 gid;
    };

    struct DirTree {
        EsStructure* o = nullptr;
        bool reversed = false;
        std::vector<i64> dist;   // by local vertex
        std::vector<int> parent; // local edge idx or -1
        std::vector<i64> cand;   // last computed candidate per local edge
        using HeapItem = std::pair<i64, u32>;
        std::vector<std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>>>
            heaps;
        std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>> qv;
        u32 missing = 0;

        DirTree() = default;
        DirTree(EsStructure* owner, bool rev) : o(owner), reversed(rev) {}

        u32 head_of(const LocalEdge& ed) const { return reversed ? ed.tail : ed.head; }
        u32 tail_of(const LocalEdge& ed) const { return reversed ? ed.head : ed.tail; }
        const std::vector<u32>& fwd(u32 v) const { return reversed ? o->in_adj_[v] : o->out_adj_[v]; }
        const std::vector<u32>& bwd(u32 v) const { return reversed ? o->out_adj_[v] : o->in_adj_[v]; }

        void build() {
            i64 cap = o->cap_;
            dist.assign(o->nv_, cap);
            parent.assign(o->nv_, -1);
            cand.assign(o->edges_.size(), cap);
            heaps.assign(o->nv_, {});
            std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>> pq;
            dist[o->root_local_] = 0;
            pq.push({0, o->root_local_});
            while (!pq.empty()) {
                auto [dv, v] = pq.top();
                pq.pop();
                if (dv != dist[v]) continue;
                for (u32 idx : fwd(v)) {
                    if (o->removed_[idx]) continue;
                    const LocalEdge& ed = o->edges_[idx];
                    u32 w = head_of(ed);
                    i64 nd = dv + ed.weight;
                    o->count_scan(idx);
                    if (nd <= o->d_ && nd < dist[w]) {
                        dist[w] = nd;
                        parent[w] = static_cast<int>(idx);
                        pq.push({nd, w});
                    }
                }
            }
            for (u32 v = 0; v < o->nv_; ++v) {
                for (u32 idx : bwd(v)) {
                    if (o->removed_[idx]) continue;
                    const LocalEdge& ed = o->edges_[idx];
                    u32 t = tail_of(ed);
                    i64 c = dist[t] >= cap ? cap : std::min(dist[t] + ed.weight, cap);
                    cand[idx] = c;
                    if (c < cap) heaps[v].push({c, idx});
                }
                if (v != o->root_local_ && dist[v] >= cap) ++missing;
            }
        }

        void on_edge_removed(u32 idx) {
            u32 h = head_of(o->edges_[idx]);
            if (parent[h] == static_cast<int>(idx)) qv.push({dist[h], h});
        }

        void settle() {
            i64 cap = o->cap_;
            while (!qv.empty()) {
                auto [k, v] = qv.top();
                qv.pop();
                if (v == o->root_local_ || k != dist[v]) continue;
                // Re-validate the current support cheaply first.
                if (parent[v] >= 0) {
                    u32 pidx = static_cast<u32>(parent[v]);
                    if (!o->removed_[pidx]) {
                        const LocalEdge& ped = o->edges_[pidx];
                        u32 t = tail_of(ped);
                        if (dist[t] < cap && dist[t] + ped.weight == dist[v]) continue;
                    }
                }
                // Refresh the candidate heap until a confirmed minimum.
                i64 best = cap;
                int best_e = -1;
                auto& h = heaps[v];
                while (!h.empty()) {
                    auto [c, idx] = h.top();
                    if (o->removed_[idx] || cand[idx] != c) {
                        h.pop();
                        continue;
                    }
                    const LocalEdge& ed = o->edges_[idx];
                    u32 t = tail_of(ed);
                    i64 real = dist[t] >= cap ? cap : std::min(dist[t] + ed.weight, cap);
                    o->count_scan(idx);
                    if (real == c) {
                        best = c;
                        best_e = static_cast<int>(idx);
                        break;
                    }
                    h.pop();
                    cand[idx] = real;
                    if (real < cap) h.push({real, idx});
                }
                i64 nd = std::min(best, cap);
                if (nd == dist[v]) {
                    parent[v] = best_e;
                    continue;
                }
                if (dist[v] < cap && nd >= cap) ++missing;
                dist[v] = nd;
                parent[v] = nd < cap ? best_e : -1;
                // Children supported through v must re-validate.
                for (u32 idx : fwd(v)) {
                    if (o->removed_[idx]) continue;
                    u32 w = head_of(o->edges_[idx]);
                    if (parent[w] == static_cast<int>(idx)) qv.push({dist[w], w});
                }
            }
        }
    };

    i64 level_of(const DirTree& t, u32 v) const {
        auto it = local_of_.find(v);
        return it == local_of_.end() ? cap_ : t.dist[it->second];
    }

    int parent_of(const DirTree& t, u32 v) const {
        auto it = local_of_.find(v);
        if (it == local_of_.end()) return -1;
        int idx = t.parent[it->second];
        return idx < 0 ? -1 : static_cast<int>(edges_[static_cast<u32>(idx)].gid);
    }

    void remove_local(u32 idx) {
        removed_[idx] = 1;
        out_.on_edge_removed(idx);
        in_.on_edge_removed(idx);
    }

    void count_scan(u32 idx) {
        ++scans_[idx];
        ++total_scans_;
    }

    u32 root_;
    i64 d_;
    i64 cap_;
    std::vector<u32> verts_;
    u32 nv_ = 0;
    u32 root_local_ = 0;
    std::unordered_map<u32, u32> local_of_;
    std::vector<LocalEdge> edges_;
    std::unordered_map<u32, u32> eidx_of_;
    std::vector<std::vector<u32>> out_adj_;
    std::vector<std::vector<u32>> in_adj_;
    std::vector<char> removed_;
    std::vector<u64> scans_;
    u64 total_scans_ = 0;
    DirTree out_;
    DirTree in_;

    friend struct DirTree;
};

}  // namespace dsssp
