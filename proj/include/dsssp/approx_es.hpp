#pragma once

#include <functional>
#include <set>
#include <unordered_map>
#include <vector>

#include "multigraph.hpp"

namespace dsssp {

// Level-indexed rounding scheme: ceil_level(x, i) is the smallest integer
// of value at least x + w_M(i) divisible by 1 + W_M(i) - w_M(i). The
// induced increment f_i(x) = ceil_level(x, i) - x always lies in
// [w_M(i), W_M(i)].
struct RoundingScheme {
    std::vector<i64> wM, WM;

    void validate(int k) const {
        if (wM.size() != static_cast<std::size_t>(k) + 1 || WM.size() != wM.size()) {
            throw ContractError("rounding scheme: need k+1 weight entries");
        }
        for (std::size_t i = 0; i < wM.size(); ++i) {
            if (wM[i] < 1 || wM[i] > WM[i]) {
                throw ContractError("rounding scheme: need 1 <= wM <= WM");
            }
        }
    }

    i64 divisor(int i) const { return 1 + WM[static_cast<std::size_t>(i)] - wM[static_cast<std::size_t>(i)]; }

    i64 ceil_level(i64 x, int i) const {
        i64 div = divisor(i);
        i64 t = x + wM[static_cast<std::size_t>(i)];
        return ((t + div - 1) / div) * div;
    }

    static RoundingScheme unit(int k) {
        RoundingScheme rs;
        rs.wM.assign(static_cast<std::size_t>(k) + 1, 1);
        rs.WM.assign(static_cast<std::size_t>(k) + 1, 1);
        return rs;
    }
};

// Identity of a P-set member: the representative edge from `tail`, or the
// super-edge with handle `sid`.
struct PEdge {
    bool is_super;
    u32 tail;
    u32 sid;

    bool operator<(const PEdge& o) const {
        if (is_super != o.is_super) return !is_super;
        return is_super ? sid < o.sid : tail < o.tail;
    }
    bool operator==(const PEdge& o) const {
        return is_super == o.is_super && (is_super ? sid == o.sid : tail == o.tail);
    }
};

// SSSP tree from s in the contracted multigraph under the implicit edge
// weight w(u,v) = ceil_level(d(u), level) - d(u), maintained up to the
// threshold D. Estimates beyond D are frozen at D+1 ("beyond threshold").
// The optional window predicate turns this into the filtered variant:
// vertices extracted outside the window (or beyond D) get an infinite
// estimate and leave the tree.
class ApproxEsTree {
public:
    static constexpr i64 FAR = INF_DIST;

    ApproxEsTree(const Multigraph& mg, u32 s, i64 D, RoundingScheme rs,
                 std::function<bool(u32)> window = {},
                 std::function<bool(const MgEnt&)> edge_ok = {})
        : mg_(&mg), s_(s), D_(D), rs_(std::move(rs)), window_(std::move(window)),
          edge_ok_(std::move(edge_ok)) {
        rs_.validate(mg.k());
        if (D_ < 0) throw ContractError("approx es tree: D must be >= 0");
        build();
    }

    i64 estimate(u32 id) const { return id < d_.size() ? d_[id] : D_ + 1; }
    bool beyond(u32 id) const { return estimate(id) > D_; }
    const std::set<PEdge>& p_set(u32 id) const { return P_.at(id); }
    // Parent edge tail in the tree, or NO_ID for s / unreachable vertices.
    u32 parent(u32 id) const {
        if (id >= par_.size() || !has_par_[id]) return Multigraph::NO_ID;
        return par_[id].tail;
    }
    PEdge parent_edge(u32 id) const {
        if (id >= par_.size() || !has_par_[id]) throw ContractError("approx es tree: no parent");
        return par_[id];
    }
    bool queue_empty() const { return q_.empty(); }
    u64 total_scans() const { return total_scans_; }
    u64 edge_scans(const PEdge& pe, u32 head) const {
        auto it = scans_.find(scan_key(pe, head));
        return it == scans_.end() ? 0 : it->second;
    }

    // P-set maintenance after one multigraph operation.
    void update_p(const MgChangeSet& cs) {
        for (const MgEnt& e : cs.e_old) {
            ensure(e.head);
            if (P_[e.head].erase(pkey(e)) > 0) push(e.head);
        }
        for (const MgEnt& e : cs.e_new) {
            if (!edge_allowed(e)) continue;
            ensure(e.tail);
            ensure(e.head);
            if (rs_.ceil_level(d_[e.tail], e.level) == d_[e.head]) {
                if (P_[e.head].insert(pkey(e)).second) push(e.head);
            }
        }
    }

    // P-set maintenance after a split of vprime: the new pieces start at
    // the estimate of the vertex they came from.
    void update_p_split(u32 vprime, const std::vector<u32>& new_ids, const MgChangeSet& cs) {
        ensure(vprime);
        for (u32 id : new_ids) {
            ensure(id);
            d_[id] = d_[vprime];
            push(id);
        }
        push(vprime);
        update_p(cs);
    }

    // Drains the queue; returns the (vertex, final estimate) pairs whose
    // estimates changed during this call.
    std::vector<std::pair<u32, i64>> update_distances() {
        std::set<u32> changed;
        while (!q_.empty()) {
            u32 v = q_.begin()->second;
            q_.erase(q_.begin());
            inq_[v] = 0;
            if (window_ && (d_[v] > D_ || !window_(v))) {
                if (d_[v] != FAR) {
                    d_[v] = FAR;
                    has_par_[v] = 0;
                    changed.insert(v);
                    // The vertex leaves the filtered subgraph together
                    // with its edges, so evict them from the P-sets.
                    for (int i = 0; i <= mg_->k(); ++i) {
                        for (const MgEnt& e : mg_->e_out(v, i)) {
                            if (!edge_allowed(e)) continue;
                            ensure(e.head);
                            if (P_[e.head].erase(pkey(e)) > 0) push(e.head);
                        }
                    }
                    P_[v].clear();
                }
                continue;
            }
            if (d_[v] > D_) continue;
            if (!P_[v].empty()) {
                // Deterministic choice: the smallest member.
                par_[v] = *P_[v].begin();
                has_par_[v] = 1;
                continue;
            }
            if (v == s_) continue;  // the source needs no support
            ++d_[v];
            changed.insert(v);
            i64 dv = d_[v];
            for (int i = 0; i <= mg_->k(); ++i) {
                i64 div = rs_.divisor(i);
                // Out-edges can leave P-sets only when the old estimate
                // sat exactly w_M below a multiple of the divisor.
                if ((dv - 1 + rs_.wM[static_cast<std::size_t>(i)]) % div == 0) {
                    for (const MgEnt& e : mg_->e_out(v, i)) {
                        if (!edge_allowed(e)) continue;
                        count_scan(pkey(e), e.head);
                        ensure(e.head);
                        if (rs_.ceil_level(dv, i) != d_[e.head]) {
                            if (P_[e.head].erase(pkey(e)) > 0) push(e.head);
                        }
                    }
                }
                // In-edges can enter P(v) only when the new estimate is a
                // multiple of the divisor (the attainable rounded values).
                if (dv % div == 0) {
                    for (const MgEnt& e : mg_->e_in(v, i)) {
                        if (!edge_allowed(e)) continue;
                        count_scan(pkey(e), e.head);
                        ensure(e.tail);
                        if (rs_.ceil_level(d_[e.tail], i) == dv) P_[v].insert(pkey(e));
                    }
                }
            }
            push(v);
        }
        std::vector<std::pair<u32, i64>> out;
        for (u32 v : changed) out.emplace_back(v, d_[v]);
        return out;
    }

private:
    static PEdge pkey(const MgEnt& e) { return PEdge{e.is_super, e.tail, e.sid}; }

    static u64 scan_key(const PEdge& pe, u32 head) {
        u64 base = pe.is_super ? (1ull << 63) | pe.sid
                               : (static_cast<u64>(pe.tail) << 32) | head;
        return base ^ (pe.is_super ? 0 : (1ull << 62));
    }

    bool edge_allowed(const MgEnt& e) const { return !edge_ok_ || edge_ok_(e); }

    void ensure(u32 id) {
        if (id < d_.size()) return;
        std::size_t n = id + 1;
        d_.resize(n, D_ + 1);
        P_.resize(n);
        par_.resize(n, PEdge{false, Multigraph::NO_ID, 0});
        has_par_.resize(n, 0);
        inq_.resize(n, 0);
    }

    void push(u32 v) {
        if (inq_[v]) return;
        inq_[v] = 1;
        q_.insert({d_[v], v});
    }

    void count_scan(const PEdge& pe, u32 head) {
        ++total_scans_;
        ++scans_[scan_key(pe, head)];
    }

    void build() {
        u32 max_id = 0;
        for (u32 id : mg_->vm_ids()) max_id = std::max(max_id, id);
        ensure(max_id);
        ensure(s_);
        // Modified Dijkstra: the weight of (u,v) materializes as
        // ceil_level(d(u), level) - d(u) when u is extracted.
        std::set<std::pair<i64, u32>> pq;
        std::vector<i64> dist(d_.size(), D_ + 1);
        if (!window_ || window_(s_)) {
            dist[s_] = 0;
            pq.insert({0, s_});
        }
        std::vector<char> done(d_.size(), 0);
        while (!pq.empty()) {
            auto [du, u] = *pq.begin();
            pq.erase(pq.begin());
            if (done[u]) continue;
            done[u] = 1;
            for (int i = 0; i <= mg_->k(); ++i) {
                for (const MgEnt& e : mg_->e_out(u, i)) {
                    if (!edge_allowed(e)) continue;
                    if (window_ && !window_(e.head)) continue;
                    i64 nd = rs_.ceil_level(du, i);
                    if (nd <= D_ && nd < dist[e.head]) {
                        pq.erase({dist[e.head], e.head});
                        dist[e.head] = nd;
                        pq.insert({nd, e.head});
                    }
                }
            }
        }
        for (u32 id = 0; id < d_.size(); ++id) d_[id] = dist[id];
        if (window_) {
            for (u32 id = 0; id < d_.size(); ++id) {
                if (d_[id] > D_) d_[id] = FAR;
            }
            if (!window_(s_)) d_[s_] = FAR;
        }
        // P-sets and parents, definitionally.
        for (u32 id : mg_->vm_ids()) {
            for (int i = 0; i <= mg_->k(); ++i) {
                for (const MgEnt& e : mg_->e_in(id, i)) {
                    if (!edge_allowed(e)) continue;
                    if (d_[id] > D_) continue;
                    if (rs_.ceil_level(d_[e.tail], i) == d_[id]) P_[id].insert(pkey(e));
                }
            }
            if (id != s_ && d_[id] <= D_ && !P_[id].empty()) {
                par_[id] = *P_[id].begin();
                has_par_[id] = 1;
            }
        }
    }

    const Multigraph* mg_;
    u32 s_;
    i64 D_;
    RoundingScheme rs_;
    std::function<bool(u32)> window_;
    std::function<bool(const MgEnt&)> edge_ok_;
    std::vector<i64> d_;
    std::vector<std::set<PEdge>> P_;
    std::vector<PEdge> par_;
    std::vector<char> has_par_;
    std::vector<char> inq_;
    std::set<std::pair<i64, u32>> q_;
    std::unordered_map<u64, u64> scans_;
    u64 total_scans_ = 0;
};

}  // namespace dsssp
