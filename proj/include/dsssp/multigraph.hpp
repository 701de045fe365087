#pragma once

#include <list>
#include <map>
#include <queue>
#include <set>
#include <tuple>
#include <vector>

#include "graph.hpp"

namespace dsssp {

// One entry of an E_in/E_out list: a representative edge between two
// multigraph vertices, or a super-edge (then sid is its handle).
struct MgEnt {
    u32 tail;
    u32 head;
    int level;
    bool is_super;
    u32 sid;

    bool operator==(const MgEnt& o) const {
        return tail == o.tail && head == o.head && level == o.level &&
               is_super == o.is_super && sid == o.sid;
    }
};

// Representative/super edges that disappear (e_old, with their old level)
// and appear (e_new, with their new level) due to one operation.
struct MgChangeSet {
    std::vector<MgEnt> e_old;
    std::vector<MgEnt> e_new;
};

// Contracted multigraph over a snapshot of a decremental simple digraph:
// vertices are disjoint groups of underlying vertices, parallel edges
// between two groups are represented by a single edge at their minimum
// level, self-loops carry no representative. Supports edge deletion,
// level increases, group splits (the remainder keeps the old id), and
// super-edges that live directly between multigraph vertices.
class Multigraph {
public:
    using List = std::list<MgEnt>;

    // deltas empty = thresholds disabled (no V_in/V_out tracking);
    // otherwise deltas must have k+1 entries.
    Multigraph(const DecrementalGraph& g, const std::vector<std::vector<u32>>& parts,
               const std::vector<int>& levels, int k, std::vector<i64> deltas = {})
        : k_(k), deltas_(std::move(deltas)) {
        if (k_ < 0) throw ContractError("multigraph: k must be >= 0");
        if (!deltas_.empty() && deltas_.size() != static_cast<std::size_t>(k_) + 1) {
            throw ContractError("multigraph: need k+1 thresholds");
        }
        u32 n = g.vertex_count();
        vertex_of_.assign(n, NO_ID);
        for (const auto& part : parts) {
            u32 id = new_vertex();
            for (u32 v : part) {
                if (v >= n || vertex_of_[v] != NO_ID) {
                    throw ContractError("multigraph: malformed vertex partition");
                }
                vertex_of_[v] = id;
                members_[id].push_back(v);
            }
            if (part.empty()) throw ContractError("multigraph: empty partition class");
        }
        for (u32 v = 0; v < n; ++v) {
            if (vertex_of_[v] == NO_ID) {
                throw ContractError("multigraph: vertex partition does not cover V");
            }
        }
        if (levels.size() != g.edge_count()) {
            throw ContractError("multigraph: need one level per edge");
        }
        u32 m = g.edge_count();
        efrom_.resize(m);
        eto_.resize(m);
        lvl_.resize(m);
        alive_.assign(m, 0);
        in_pair_.assign(m, 0);
        for (u32 e = 0; e < m; ++e) {
            const GraphEdge& ed = g.edge(e);
            efrom_[e] = ed.from;
            eto_[e] = ed.to;
            lvl_[e] = levels[e];
            if (lvl_[e] < 0 || lvl_[e] > k_) throw ContractError("multigraph: level out of range");
            if (!ed.alive) continue;
            alive_[e] = 1;
            pair_insert(e, init_cs_);
        }
        init_cs_ = MgChangeSet{};  // initialization emits no changes
    }

    // ---- queries --------------------------------------------------------

    int k() const { return k_; }
    bool thresholds_enabled() const { return !deltas_.empty(); }
    u32 vertex_of(u32 v) const { return vertex_of_[v]; }
    bool edge_alive(u32 e) const { return alive_[e] != 0; }
    int level(u32 e) const { return lvl_[e]; }
    u64 touched_cost() const { return cost_; }

    std::vector<u32> vm_ids() const {
        std::vector<u32> out;
        for (u32 id = 0; id < vdata_.size(); ++id) {
            if (!members_[id].empty()) out.push_back(id);
        }
        return out;
    }
    const std::vector<u32>& members(u32 id) const { return members_.at(id); }

    // Representative level of the pair (t, h), or -1 if no representative.
    int rep_level(u32 t, u32 h) const {
        auto it = pairs_.find({t, h});
        return (it != pairs_.end() && it->second.has_rep) ? it->second.rep_level : -1;
    }

    // Underlying edge id carrying the pair's current representative, or
    // NO_ID when the pair has none. Pops stale lazy-heap entries, which
    // never changes the represented state.
    u32 rep_edge(u32 t, u32 h) {
        auto it = pairs_.find({t, h});
        if (it == pairs_.end() || !it->second.has_rep) return NO_ID;
        auto& q = it->second.q;
        while (!q.empty() && !entry_valid({t, h}, q.top().first, q.top().second)) {
            q.pop();
            ++cost_;
        }
        return q.empty() ? NO_ID : q.top().second;
    }

    const List& e_in(u32 id, int i) const { return vdata_.at(id).ein.at(static_cast<std::size_t>(i)); }
    const List& e_out(u32 id, int i) const { return vdata_.at(id).eout.at(static_cast<std::size_t>(i)); }
    std::size_t rep_in_count(u32 id, int i) const {
        return vdata_.at(id).rep_in.at(static_cast<std::size_t>(i));
    }
    std::size_t rep_out_count(u32 id, int i) const {
        return vdata_.at(id).rep_out.at(static_cast<std::size_t>(i));
    }
    const std::set<u32>& v_in(int i) const { return vin_.at(static_cast<std::size_t>(i)); }
    const std::set<u32>& v_out(int i) const { return vout_.at(static_cast<std::size_t>(i)); }

    // ---- operations ------------------------------------------------------

    MgChangeSet delete_edge(u32 e) {
        if (e >= alive_.size() || !alive_[e]) throw ContractError("multigraph: double delete");
        MgChangeSet cs;
        alive_[e] = 0;
        pair_remove(e, cs);
        return cs;
    }

    MgChangeSet increase(u32 e, int i) {
        if (e >= alive_.size() || !alive_[e]) throw ContractError("multigraph: edge not alive");
        if (i <= lvl_[e] || i > k_) throw ContractError("multigraph: level must strictly increase");
        MgChangeSet cs;
        lvl_[e] = i;  // the old heap entry goes stale via the level mismatch
        PairKey pk = pair_key(e);
        auto it = pairs_.find(pk);
        it->second.q.push({i, e});
        ++cost_;
        refresh_rep(it, cs);
        return cs;
    }

    MgChangeSet split(u32 vprime, const std::vector<std::vector<u32>>& ws) {
        if (vprime >= members_.size() || members_[vprime].empty()) {
            throw ContractError("multigraph: split of unknown vertex");
        }
        // Copy: new_vertex() below may reallocate the members vector.
        const std::vector<u32> base = members_[vprime];
        std::vector<char> moved(vertex_of_.size(), 0);
        std::size_t moved_total = 0;
        for (const auto& w : ws) {
            if (2 * w.size() > base.size()) throw ContractError("multigraph: split balance violated");
            for (u32 v : w) {
                if (v >= vertex_of_.size() || vertex_of_[v] != vprime || moved[v]) {
                    throw ContractError("multigraph: split piece not inside the set");
                }
                moved[v] = 1;
                ++moved_total;
            }
        }
        if (moved_total >= base.size()) {
            throw ContractError("multigraph: the remainder piece must be nonempty");
        }
        MgChangeSet cs;
        // Collect the underlying edges incident to the moved vertices.
        std::vector<u32> inc;
        for (u32 e = 0; e < alive_.size(); ++e) {
            if (alive_[e] && (moved[efrom_[e]] || moved[eto_[e]])) inc.push_back(e);
        }
        for (u32 e : inc) pair_remove(e, cs);
        last_new_ids_.clear();
        for (const auto& w : ws) {
            u32 id = new_vertex();
            last_new_ids_.push_back(id);
            for (u32 v : w) {
                vertex_of_[v] = id;
                members_[id].push_back(v);
            }
        }
        std::vector<u32> rest;
        for (u32 v : base) {
            if (!moved[v]) rest.push_back(v);
        }
        members_[vprime] = std::move(rest);
        for (u32 e : inc) pair_insert(e, cs);
        cost_ += inc.size();
        // Super-edges stay attached to the remainder, which keeps the id.
        normalize(cs);
        return cs;
    }

    u32 s_insert(u32 u, u32 v, int i, MgChangeSet* cs = nullptr) {
        if (u >= members_.size() || members_[u].empty() || v >= members_.size() ||
            members_[v].empty()) {
            throw ContractError("multigraph: super-edge endpoint not a current vertex");
        }
        if (i < 0 || i > k_) throw ContractError("multigraph: level out of range");
        u32 sid = static_cast<u32>(supers_.size());
        supers_.push_back(Super{u, v, i, true, {}, {}});
        senlist(sid);
        if (cs) cs->e_new.push_back(MgEnt{u, v, i, true, sid});
        return sid;
    }

    MgChangeSet s_delete(u32 sid) {
        Super& s = super_ref(sid);
        MgChangeSet cs;
        cs.e_old.push_back(MgEnt{s.tail, s.head, s.level, true, sid});
        sdelist(sid);
        s.alive = false;
        return cs;
    }

    MgChangeSet s_increase(u32 sid, int i) {
        Super& s = super_ref(sid);
        if (i <= s.level || i > k_) throw ContractError("multigraph: level must strictly increase");
        MgChangeSet cs;
        cs.e_old.push_back(MgEnt{s.tail, s.head, s.level, true, sid});
        sdelist(sid);
        s.level = i;
        senlist(sid);
        cs.e_new.push_back(MgEnt{s.tail, s.head, s.level, true, sid});
        return cs;
    }

    bool super_alive(u32 sid) const {
        return sid < supers_.size() && supers_[sid].alive;
    }
    int super_level(u32 sid) const {
        if (!super_alive(sid)) throw ContractError("multigraph: dangling super-edge handle");
        return supers_[sid].level;
    }
    u32 super_tail(u32 sid) const {
        if (!super_alive(sid)) throw ContractError("multigraph: dangling super-edge handle");
        return supers_[sid].tail;
    }
    u32 super_head(u32 sid) const {
        if (!super_alive(sid)) throw ContractError("multigraph: dangling super-edge handle");
        return supers_[sid].head;
    }

    // The ids created by the most recent split, one per moved piece.
    const std::vector<u32>& last_new_ids() const { return last_new_ids_; }

    static constexpr u32 NO_ID = 0xffffffffu;

private:
    using PairKey = std::pair<u32, u32>;

    struct VertexData {
        std::vector<List> ein, eout;            // indexed by level
        std::vector<std::size_t> rep_in, rep_out;  // representative counts only
    };

    struct PairNode {
        using Item = std::pair<int, u32>;  // (level, underlying edge)
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> q;
        u32 live = 0;
        bool has_rep = false;
        int rep_level = -1;
        List::iterator in_it{}, out_it{};
    };

    struct Super {
        u32 tail, head;
        int level;
        bool alive;
        List::iterator in_it, out_it;
    };

    u32 new_vertex() {
        u32 id = static_cast<u32>(vdata_.size());
        VertexData vd;
        vd.ein.assign(static_cast<std::size_t>(k_) + 1, {});
        vd.eout.assign(static_cast<std::size_t>(k_) + 1, {});
        vd.rep_in.assign(static_cast<std::size_t>(k_) + 1, 0);
        vd.rep_out.assign(static_cast<std::size_t>(k_) + 1, 0);
        vdata_.push_back(std::move(vd));
        members_.emplace_back();
        if (!deltas_.empty() && vin_.empty()) {
            vin_.assign(static_cast<std::size_t>(k_) + 1, {});
            vout_.assign(static_cast<std::size_t>(k_) + 1, {});
        }
        return id;
    }

    PairKey pair_key(u32 e) const { return {vertex_of_[efrom_[e]], vertex_of_[eto_[e]]}; }

    bool entry_valid(const PairKey& pk, int lvl, u32 e) const {
        return alive_[e] && in_pair_[e] && lvl_[e] == lvl && pair_key(e) == pk;
    }

    void pair_insert(u32 e, MgChangeSet& cs) {
        PairKey pk = pair_key(e);
        auto it = pairs_.try_emplace(pk).first;
        it->second.q.push({lvl_[e], e});
        ++it->second.live;
        in_pair_[e] = 1;
        ++cost_;
        refresh_rep(it, cs);
    }

    void pair_remove(u32 e, MgChangeSet& cs) {
        PairKey pk = pair_key(e);
        auto it = pairs_.find(pk);
        in_pair_[e] = 0;  // stale heap entries fail validation from now on
        --it->second.live;
        ++cost_;
        refresh_rep(it, cs);
    }

    void refresh_rep(std::map<PairKey, PairNode>::iterator it, MgChangeSet& cs) {
        const PairKey pk = it->first;
        PairNode& pn = it->second;
        while (!pn.q.empty()) {
            auto [lvl, e] = pn.q.top();
            if (entry_valid(pk, lvl, e)) break;
            pn.q.pop();
            ++cost_;
        }
        bool want = pk.first != pk.second && pn.live > 0;
        int new_level = want ? pn.q.top().first : -1;
        if (pn.has_rep && (!want || new_level != pn.rep_level)) {
            cs.e_old.push_back(MgEnt{pk.first, pk.second, pn.rep_level, false, 0});
            delist_rep(pk, pn);
        }
        if (want && !pn.has_rep) {
            enlist_rep(pk, pn, new_level);
            cs.e_new.push_back(MgEnt{pk.first, pk.second, new_level, false, 0});
        }
        if (pn.live == 0) pairs_.erase(it);
    }

    void enlist_rep(const PairKey& pk, PairNode& pn, int level) {
        auto li = static_cast<std::size_t>(level);
        VertexData& vt = vdata_[pk.first];
        VertexData& vh = vdata_[pk.second];
        MgEnt ent{pk.first, pk.second, level, false, 0};
        pn.out_it = vt.eout[li].insert(vt.eout[li].end(), ent);
        pn.in_it = vh.ein[li].insert(vh.ein[li].end(), ent);
        pn.has_rep = true;
        pn.rep_level = level;
        ++vt.rep_out[li];
        ++vh.rep_in[li];
        cost_ += 2;
        if (!deltas_.empty()) {
            if (static_cast<i64>(vt.rep_out[li]) > deltas_[li]) vout_[li].insert(pk.first);
            if (static_cast<i64>(vh.rep_in[li]) > deltas_[li]) vin_[li].insert(pk.second);
        }
    }

    void delist_rep(const PairKey& pk, PairNode& pn) {
        auto li = static_cast<std::size_t>(pn.rep_level);
        VertexData& vt = vdata_[pk.first];
        VertexData& vh = vdata_[pk.second];
        vt.eout[li].erase(pn.out_it);
        vh.ein[li].erase(pn.in_it);
        --vt.rep_out[li];
        --vh.rep_in[li];
        cost_ += 2;
        if (!deltas_.empty()) {
            if (static_cast<i64>(vt.rep_out[li]) <= deltas_[li]) vout_[li].erase(pk.first);
            if (static_cast<i64>(vh.rep_in[li]) <= deltas_[li]) vin_[li].erase(pk.second);
        }
        pn.has_rep = false;
        pn.rep_level = -1;
    }

    // Reduces a ChangeSet to its net effect: a representative that
    // transiently disappeared and reappeared at the same level (or vice
    // versa) within one operation cancels out, so each edge appears at
    // most once per set.
    static void normalize(MgChangeSet& cs) {
        auto key = [](const MgEnt& e) { return std::tuple<u32, u32, int>{e.tail, e.head, e.level}; };
        std::map<std::tuple<u32, u32, int>, int> bal;
        for (const MgEnt& e : cs.e_old) ++bal[key(e)];
        for (const MgEnt& e : cs.e_new) --bal[key(e)];
        MgChangeSet out;
        std::map<std::tuple<u32, u32, int>, int> left = bal;
        for (const MgEnt& e : cs.e_old) {
            if (left[key(e)] > 0) {
                out.e_old.push_back(e);
                --left[key(e)];
            }
        }
        for (auto& [k2, v] : left) v = -v;
        for (const MgEnt& e : cs.e_new) {
            if (left[key(e)] > 0) {
                out.e_new.push_back(e);
                --left[key(e)];
            }
        }
        cs = std::move(out);
    }

    Super& super_ref(u32 sid) {
        if (!super_alive(sid)) throw ContractError("multigraph: dangling super-edge handle");
        return supers_[sid];
    }

    void senlist(u32 sid) {
        Super& s = supers_[sid];
        auto li = static_cast<std::size_t>(s.level);
        MgEnt ent{s.tail, s.head, s.level, true, sid};
        List& lo = vdata_[s.tail].eout[li];
        List& liin = vdata_[s.head].ein[li];
        s.out_it = lo.insert(lo.end(), ent);
        s.in_it = liin.insert(liin.end(), ent);
        cost_ += 2;
    }

    void sdelist(u32 sid) {
        Super& s = supers_[sid];
        auto li = static_cast<std::size_t>(s.level);
        vdata_[s.tail].eout[li].erase(s.out_it);
        vdata_[s.head].ein[li].erase(s.in_it);
        cost_ += 2;
    }

    int k_;
    std::vector<i64> deltas_;
    std::vector<u32> vertex_of_;
    std::vector<std::vector<u32>> members_;
    std::vector<VertexData> vdata_;
    std::vector<u32> efrom_, eto_;
    std::vector<int> lvl_;
    std::vector<char> alive_;
    std::vector<char> in_pair_;
    std::map<PairKey, PairNode> pairs_;
    std::vector<Super> supers_;
    std::vector<std::set<u32>> vin_, vout_;
    std::vector<u32> last_new_ids_;
    u64 cost_ = 0;
    MgChangeSet init_cs_;
};

}  // namespace dsssp
