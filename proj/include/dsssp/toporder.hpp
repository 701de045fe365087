#pragma once

#include <functional>
#include <string>
#include <vector>

#include "decomp.hpp"
#include "multigraph.hpp"

namespace dsssp {

// The ordered list C of multigraph vertices with prefix masses r(C).
// Masses count only "real" vertices (augmentation vertices such as shadow
// and sampling sources weigh zero), so r stays within [0, n].
class TopOrder {
public:
    void assign(const std::vector<u32>& seq, const std::function<i64(u32)>& mass_of) {
        seq_ = seq;
        u32 max_id = 0;
        for (u32 id : seq_) max_id = std::max(max_id, id);
        ensure(max_id);
        for (u32 id : seq_) mass_[id] = mass_of(id);
        recompute();
    }

    // Replaces vprime's slot by the ordered sublist (which must contain
    // vprime); masses of the sublist ids are re-read.
    void replace(u32 vprime, const std::vector<u32>& sublist,
                 const std::function<i64(u32)>& mass_of) {
        std::size_t at = pos_.at(vprime);
        std::vector<u32> next;
        next.reserve(seq_.size() + sublist.size());
        for (std::size_t i = 0; i < seq_.size(); ++i) {
            if (i == at) {
                for (u32 id : sublist) next.push_back(id);
            } else {
                next.push_back(seq_[i]);
            }
        }
        seq_ = std::move(next);
        u32 max_id = 0;
        for (u32 id : sublist) max_id = std::max(max_id, id);
        ensure(max_id);
        for (u32 id : sublist) mass_[id] = mass_of(id);
        recompute();
    }

    const std::vector<u32>& sequence() const { return seq_; }
    std::size_t position(u32 id) const { return pos_.at(id); }
    bool contains(u32 id) const { return id < pos_.size() && pos_[id] != NPOS; }
    i64 prefix_mass(u32 id) const { return r_.at(id); }
    i64 mass(u32 id) const { return mass_.at(id); }
    bool precedes(u32 a, u32 b) const { return pos_.at(a) < pos_.at(b); }

    // r(C, C'): total mass strictly between the two sets (symmetric).
    i64 r_between(u32 a, u32 b) const {
        if (pos_.at(a) > pos_.at(b)) std::swap(a, b);
        return r_[b] - r_[a] - mass_[a];
    }

    static constexpr std::size_t NPOS = static_cast<std::size_t>(-1);

private:
    void ensure(u32 max_id) {
        if (max_id >= pos_.size()) {
            pos_.resize(max_id + 1, NPOS);
            r_.resize(max_id + 1, 0);
            mass_.resize(max_id + 1, 0);
        }
    }

    void recompute() {
        for (std::size_t i = 0; i < pos_.size(); ++i) pos_[i] = NPOS;
        i64 acc = 0;
        for (std::size_t i = 0; i < seq_.size(); ++i) {
            u32 id = seq_[i];
            pos_[id] = i;
            r_[id] = acc;
            acc += mass_[id];
        }
    }

    std::vector<u32> seq_;
    std::vector<std::size_t> pos_;
    std::vector<i64> r_;
    std::vector<i64> mass_;
};

// Orders the hierarchy leaves covering `verts` so that, for every level
// i, the leaves of each SCC of G_i are consecutive and all surviving
// level-i edges between different SCCs point forward. Built by nested
// topological sorting: Tarjan per level (its output is reverse
// topological), recursing into each SCC with the next level's mask.
inline std::vector<u64> nested_leaf_order(const DecrementalGraph& g, const Hierarchy& hier,
                                          const std::vector<u32>& verts) {
    int L = hier.levels();
    const std::vector<int>& excl = hier.edge_excl_level();
    std::vector<std::vector<char>> masks(static_cast<std::size_t>(L) + 1,
                                         std::vector<char>(g.edge_count(), 0));
    for (u32 e = 0; e < g.edge_count(); ++e) {
        for (int i = 0; i <= L; ++i) {
            masks[static_cast<std::size_t>(i)][e] = excl[e] <= i;
        }
    }
    std::vector<u64> out;
    std::function<void(const std::vector<u32>&, int)> rec = [&](const std::vector<u32>& set,
                                                                int i) {
        if (i > L) {
            out.push_back(static_cast<u64>(hier.leaf_of(set.front())));
            return;
        }
        auto sccs = strongly_connected_components(
            GraphView(&g, set, &masks[static_cast<std::size_t>(i)]));
        for (auto it = sccs.rbegin(); it != sccs.rend(); ++it) rec(*it, i + 1);
    };
    if (!verts.empty()) rec(verts, 0);
    return out;
}

inline std::vector<u64> nested_leaf_order(const DecrementalGraph& g, const Hierarchy& hier) {
    std::vector<u32> all(g.vertex_count());
    for (u32 v = 0; v < g.vertex_count(); ++v) all[v] = v;
    return nested_leaf_order(g, hier, all);
}

// Exact desk-scale verifier for the two ordering properties: (1) every
// surviving leaf-level edge points forward in the order, and (2) for
// every level i, the multigraph vertices inside one SCC of G_i occupy
// consecutive positions. Edges whose tail is flagged in skip_tail (the
// sampling sources, which are pinned to the back of the order) are
// exempt from (1).
struct OrderCheck {
    bool forward_ok = true;
    bool consecutive_ok = true;
    std::string detail;
};

inline OrderCheck verify_top_order(const DecrementalGraph& g, const Hierarchy& hier,
                                   const TopOrder& top, const Multigraph& mg,
                                   const std::vector<char>* skip_tail = nullptr) {
    OrderCheck rep;
    const std::vector<char>& lex = hier.leaf_excluded();
    for (u32 e = 0; e < g.edge_count(); ++e) {
        if (!g.alive(e) || lex[e]) continue;
        const GraphEdge& ed = g.edge(e);
        if (skip_tail && (*skip_tail)[ed.from]) continue;
        u32 a = mg.vertex_of(ed.from);
        u32 b = mg.vertex_of(ed.to);
        if (a == b) continue;
        if (!(top.position(a) < top.position(b))) {
            rep.forward_ok = false;
            rep.detail = "backward leaf-level edge " + std::to_string(e);
            return rep;
        }
    }
    int L = hier.levels();
    const std::vector<int>& excl = hier.edge_excl_level();
    std::vector<u32> all(g.vertex_count());
    for (u32 v = 0; v < g.vertex_count(); ++v) all[v] = v;
    for (int i = 0; i <= L; ++i) {
        std::vector<char> mask(g.edge_count(), 0);
        for (u32 e = 0; e < g.edge_count(); ++e) mask[e] = excl[e] <= i;
        for (const auto& comp : strongly_connected_components(GraphView(&g, all, &mask))) {
            std::size_t lo = static_cast<std::size_t>(-1), hi = 0;
            std::vector<u32> ids;
            for (u32 v : comp) {
                u32 id = mg.vertex_of(v);
                std::size_t p = top.position(id);
                lo = std::min(lo, p);
                hi = std::max(hi, p);
                ids.push_back(id);
            }
            std::sort(ids.begin(), ids.end());
            ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
            if (hi - lo + 1 != ids.size()) {
                rep.consecutive_ok = false;
                rep.detail = "level " + std::to_string(i) + " component of size " +
                             std::to_string(comp.size()) + " spans " +
                             std::to_string(hi - lo + 1) + " slots for " +
                             std::to_string(ids.size()) + " sets";
                return rep;
            }
        }
    }
    return rep;
}

}  // namespace dsssp
