#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <tuple>
#include <vector>

#include "approx_es.hpp"
#include "decomp.hpp"
#include "estree.hpp"
#include "multigraph.hpp"
#include "sssp_params.hpp"
#include "toporder.hpp"

namespace dsssp {

struct BandCounters {
    u64 deletions = 0;
    u64 splits = 0;
    u64 drain_scans = 0;
    u64 drain_increases = 0;
    u64 drain_stalls = 0;
};

// One distance scale of the adaptive or dense variant: hierarchy of
// low-diameter SCC decompositions, contracted multigraph kept in
// topological order, level thresholds drained after every deletion, and
// an approximate tree rooted at a shadow source s* with a single edge to
// s (so the root set never gains in-edges). Estimates are differences
// against the set containing s plus the additive detour budget.
//
// base = 2 runs the unit-weight scheme; base = 1 + eps with omega > 1
// runs the weighted scheme where heavy edges (weight >= omega) bypass
// the decomposition and enter the multigraph at their weight level.
class Band {
public:
    // base = 0 selects automatically: 2 for unweighted parameter sets,
    // 1 + eps when omega > 1 marks a weighted scale.
    Band(const DecrementalGraph& input, u32 source, const ParamSet& ps, Rng rng,
         double base = 0.0)
        : ps_(ps), base_(base) {
        if (base_ == 0.0) base_ = ps.omega > 1 ? 1.0 + ps.epsilon : 2.0;
        if (ps.fallback) throw ContractError("band: fallback parameters; use a classic scale");
        if (ps.variant != Variant::Adaptive && ps.variant != Variant::Dense) {
            throw ContractError("band: variant must be adaptive or dense");
        }
        if (!input.deletion_log().empty()) throw ContractError("band: graph must be pristine");
        if (source >= input.vertex_count()) throw ContractError("band: source out of range");
        if (!(base_ > 1.0)) throw ContractError("band: base must exceed 1");
        n_real_ = input.vertex_count();
        m_real_ = static_cast<u32>(input.edge_count());
        s_ = source;
        weighted_ = ps.omega > 1;
        tau_ = std::max<i64>(1, ps.tau);

        std::vector<std::tuple<u32, u32, i64>> edges;
        for (u32 e = 0; e < m_real_; ++e) {
            const GraphEdge& ed = input.edge(e);
            edges.emplace_back(ed.from, ed.to, ed.weight);
        }
        g_ = DecrementalGraph::load(n_real_, edges);
        if (g_.edge_count() != m_real_) {
            throw ContractError("band: input must be simple (no self-loops / parallels)");
        }
        sstar_ = g_.add_vertex();
        shadow_edge_ = g_.add_edge(sstar_, s_, 1);

        heavy_.assign(g_.edge_count(), 0);
        bool any_heavy = false;
        if (weighted_) {
            for (u32 e = 0; e < m_real_; ++e) {
                if (g_.edge(e).weight >= ps.omega) {
                    heavy_[e] = 1;
                    any_heavy = true;
                }
            }
        }

        DecompParams dp;
        dp.omega = ps.omega;
        DecompMode mode;
        if (ps.variant == Variant::Adaptive) {
            mode = DecompMode::Adaptive;
            dp.d1 = ps.d1;
            dp.d2 = ps.d2;
            additive_ = 2 * ps.d2;
        } else {
            mode = DecompMode::Oblivious;
            dp.d = std::max<i64>(1, ps.d / 2);  // detour sum <= 2 * (d/2) = d
            additive_ = 2 * dp.d;
        }
        hier_ = std::make_unique<Hierarchy>(g_, mode, dp, rng, any_heavy ? &heavy_ : nullptr);

        k_ = eta(static_cast<i64>(n_real_));
        if (weighted_) {
            for (u32 e = 0; e < g_.edge_count(); ++e) {
                if (g_.alive(e)) k_ = std::max(k_, ceil_log_base(g_.edge(e).weight, base_));
            }
        }

        std::vector<u64> leafseq = nested_leaf_order(g_, *hier_);
        std::vector<std::vector<u32>> parts;
        parts.reserve(leafseq.size());
        for (u64 lid : leafseq) {
            leaf2mg_[lid] = static_cast<u32>(parts.size());
            parts.push_back(hier_->leaves().at(lid));
        }
        std::vector<u32> ids(parts.size());
        for (u32 i = 0; i < parts.size(); ++i) ids[i] = i;
        top_.assign(ids, [&](u32 id) {
            i64 c = 0;
            for (u32 v : parts[id]) c += v < n_real_;
            return c;
        });

        std::vector<int> levels(g_.edge_count(), 0);
        for (u32 e = 0; e < g_.edge_count(); ++e) {
            const GraphEdge& ed = g_.edge(e);
            u32 a = leaf2mg_.at(static_cast<u64>(hier_->leaf_of(ed.from)));
            u32 b = leaf2mg_.at(static_cast<u64>(hier_->leaf_of(ed.to)));
            int lv = weighted_ ? ceil_log_base(ed.weight, base_) : 0;
            if (a != b) lv = std::max(lv, eta(top_.r_between(a, b)));
            levels[e] = std::min(lv, k_);
        }

        std::vector<i64> deltas(static_cast<std::size_t>(k_) + 1);
        for (int i = 0; i <= k_; ++i) {
            double v = std::ceil(std::pow(base_, i + 2)) * static_cast<double>(tau_);
            deltas[static_cast<std::size_t>(i)] =
                v > 4.0e15 ? static_cast<i64>(4e15) : static_cast<i64>(v);
        }
        mg_ = std::make_unique<Multigraph>(g_, parts, levels, k_, deltas);

        rs_.wM.resize(static_cast<std::size_t>(k_) + 1);
        rs_.WM.resize(static_cast<std::size_t>(k_) + 1);
        for (int i = 0; i <= k_; ++i) {
            auto li = static_cast<std::size_t>(i);
            if (!weighted_) {
                rs_.wM[li] = 1;
                rs_.WM[li] = i < 62 ? (i64{1} << i) : (i64{1} << 62);
            } else {
                rs_.wM[li] = std::max<i64>(1, static_cast<i64>(std::floor(std::pow(base_, i))));
                rs_.WM[li] = std::max(rs_.wM[li],
                                      static_cast<i64>(std::floor(std::pow(base_, i + 1))));
            }
        }

        drain();

        thr_ = static_cast<i64>(std::floor(2.0 * static_cast<double>(ps.D) *
                                           (1.0 + ps.epsilon))) +
               2 * rs_.WM[static_cast<std::size_t>(k_)];
        es_ = std::make_unique<ApproxEsTree>(*mg_, mg_->vertex_of(sstar_), thr_, rs_);
        prev_ds_ = es_->estimate(mg_->vertex_of(s_));
    }

    i64 query(u32 u) const {
        if (u >= n_real_) throw ContractError("band: query vertex out of range");
        if (u == s_) return 0;
        u32 vu = mg_->vertex_of(u);
        u32 vs = mg_->vertex_of(s_);
        if (es_->beyond(vu) || es_->beyond(vs)) return INF_DIST;
        return es_->estimate(vu) - es_->estimate(vs) + additive_;
    }

    // Returns the real vertices whose query value may have changed.
    std::vector<u32> on_delete(u32 e) {
        if (e >= m_real_) throw ContractError("band: can only delete original edges");
        ++ctr_.deletions;
        g_.delete_edge(e);
        es_->update_p(mg_->delete_edge(e));
        HierarchyEvent hev = hier_->on_delete(e);
        std::set<u32> changed_ids;
        apply_splits(hev, changed_ids);
        drain();
        for (const auto& [id, est] : es_->update_distances()) {
            (void)est;
            changed_ids.insert(id);
        }
        return expand_changed(changed_ids);
    }

    // ---- path reporting ---------------------------------------------------

    // The tree path in the contracted multigraph from the shadow set to
    // the set containing u, as (tail set, head set) pairs; the first pair
    // is the shadow edge. hops / slack_sum feed the weight-vs-length
    // sanity checks (slack_sum sums r(tail,head)/tau over non-shadow
    // hops).
    struct MPathInfo {
        bool ok = false;
        i64 weight = 0;
        i64 hops = 0;
        double slack_sum = 0.0;
        std::vector<std::pair<u32, u32>> edges;
    };

    MPathInfo m_path(u32 u) const {
        MPathInfo info;
        u32 vss = mg_->vertex_of(sstar_);
        u32 vu = mg_->vertex_of(u);
        u32 vs = mg_->vertex_of(s_);
        if (es_->beyond(vu) || es_->beyond(vs)) return info;
        std::vector<std::pair<u32, u32>> rev;
        u32 cur = vu;
        std::size_t guard = 0;
        while (cur != vss) {
            if (++guard > 4 * top_.sequence().size() + 16) return info;
            if (es_->parent(cur) == Multigraph::NO_ID) return info;
            PEdge pe = es_->parent_edge(cur);
            if (pe.is_super) return info;
            rev.emplace_back(pe.tail, cur);
            cur = pe.tail;
        }
        info.edges.assign(rev.rbegin(), rev.rend());
        info.weight = es_->estimate(vu) - es_->estimate(vs);
        info.hops = static_cast<i64>(info.edges.size()) - 1;
        for (std::size_t i = 1; i < info.edges.size(); ++i) {
            info.slack_sum += static_cast<double>(top_.r_between(info.edges[i].first,
                                                                 info.edges[i].second)) /
                              static_cast<double>(tau_);
        }
        info.ok = true;
        return info;
    }

    // A live s -> u path whose length is bounded by the estimate: the
    // multigraph tree path expanded edge by edge, with within-set detours
    // routed entry -> root -> exit through the decomposition in/out
    // trees. Empty on failure (u unreachable / beyond threshold).
    std::vector<u32> report_path(u32 u) const {
        if (u >= n_real_) throw ContractError("band: path vertex out of range");
        if (u == s_) return {s_};
        MPathInfo info = m_path(u);
        if (!info.ok || info.edges.empty()) return {};
        std::vector<u32> path{s_};
        u32 entry = s_;
        for (std::size_t idx = 1; idx < info.edges.size(); ++idx) {
            auto [t, h] = info.edges[idx];
            u32 from = Multigraph::NO_ID, to = Multigraph::NO_ID;
            for (u32 hv : mg_->members(h)) {
                for (u32 ein : g_.in_edges(hv)) {
                    if (g_.alive(ein) && mg_->vertex_of(g_.edge(ein).from) == t) {
                        from = g_.edge(ein).from;
                        to = hv;
                        break;
                    }
                }
                if (from != Multigraph::NO_ID) break;
            }
            if (from == Multigraph::NO_ID) return {};
            if (!append_leaf_walk(entry, from, path)) return {};
            path.push_back(to);
            entry = to;
        }
        if (!append_leaf_walk(entry, u, path)) return {};
        return path;
    }

    // ---- introspection ----------------------------------------------------

    const DecrementalGraph& graph() const { return g_; }
    const Hierarchy& hierarchy() const { return *hier_; }
    const TopOrder& top_order() const { return top_; }
    const Multigraph& multigraph() const { return *mg_; }
    const ApproxEsTree& tree() const { return *es_; }
    const RoundingScheme& scheme() const { return rs_; }
    const ParamSet& params() const { return ps_; }
    const BandCounters& counters() const { return ctr_; }
    int k() const { return k_; }
    i64 threshold() const { return thr_; }
    i64 additive() const { return additive_; }
    u32 shadow_vertex() const { return sstar_; }
    u32 shadow_edge() const { return shadow_edge_; }
    int eta(i64 x) const { return base_ == 2.0 ? eta2(x, tau_) : eta_base(x, tau_, base_); }

    OrderCheck verify_order() const { return verify_top_order(g_, *hier_, top_, *mg_); }

private:
    bool append_leaf_walk(u32 from, u32 to, std::vector<u32>& path) const {
        if (from == to) return true;
        i64 lid = hier_->leaf_of(from);
        if (lid < 0 || lid != hier_->leaf_of(to)) return false;
        const EsStructure* est = hier_->leaf_structure(static_cast<u64>(lid));
        u32 root = hier_->leaf_root(static_cast<u64>(lid));
        if (!est || root == LowDiamDecomp::NO_VERTEX) return false;
        std::size_t guard = 0;
        u32 cur = from;
        while (cur != root) {
            if (++guard > g_.vertex_count() + 2) return false;
            int pe = est->in_parent(cur);
            if (pe < 0) return false;
            cur = g_.edge(static_cast<u32>(pe)).to;
            path.push_back(cur);
        }
        std::vector<u32> down;
        cur = to;
        while (cur != root) {
            if (++guard > 2 * (g_.vertex_count() + 2)) return false;
            down.push_back(cur);
            int pe = est->out_parent(cur);
            if (pe < 0) return false;
            cur = g_.edge(static_cast<u32>(pe)).from;
        }
        path.insert(path.end(), down.rbegin(), down.rend());
        return true;
    }

    void apply_splits(const HierarchyEvent& hev, std::set<u32>& changed_ids) {
        if (hev.leaf_splits.empty()) return;
        // A deletion may cascade several refinements; regroup each
        // affected set by the final leaf of its members and split once.
        std::set<u32> affected;
        for (const LeafSplit& ls : hev.leaf_splits) {
            auto it = leaf2mg_.find(ls.old_leaf);
            if (it != leaf2mg_.end()) affected.insert(it->second);
        }
        for (u32 vp : affected) {
            const std::vector<u32> base = mg_->members(vp);
            std::map<u64, std::vector<u32>> groups;
            for (u32 v : base) groups[static_cast<u64>(hier_->leaf_of(v))].push_back(v);
            if (groups.size() < 2) continue;
            u64 rem_leaf = 0;
            std::size_t rem_sz = 0;
            for (const auto& [lid, vs] : groups) {
                if (vs.size() > rem_sz) {
                    rem_sz = vs.size();
                    rem_leaf = lid;
                }
            }
            std::vector<u64> moved;
            std::vector<std::vector<u32>> ws;
            for (auto& [lid, vs] : groups) {
                if (lid == rem_leaf) continue;
                moved.push_back(lid);
                ws.push_back(vs);
            }
            ++ctr_.splits;
            MgChangeSet cs = mg_->split(vp, ws);
            const std::vector<u32>& nids = mg_->last_new_ids();
            leaf2mg_[rem_leaf] = vp;
            for (std::size_t j = 0; j < moved.size(); ++j) leaf2mg_[moved[j]] = nids[j];
            es_->update_p_split(vp, nids, cs);
            std::vector<u64> lseq = nested_leaf_order(g_, *hier_, base);
            std::vector<u32> sub;
            sub.reserve(lseq.size());
            for (u64 lid : lseq) sub.push_back(leaf2mg_.at(lid));
            top_.replace(vp, sub, [this](u32 id) {
                i64 c = 0;
                for (u32 v : mg_->members(id)) c += v < n_real_;
                return c;
            });
            changed_ids.insert(vp);
            for (u32 id : nids) changed_ids.insert(id);
        }
    }

    // Raises representatives that breached a level threshold to their
    // current mass level; level increases can cascade, so keep passing
    // over the threshold lists until they empty or a full pass makes no
    // progress (possible for bases < 2, where the threshold may sit above
    // the number of lower-level edges; correctness does not depend on the
    // lists emptying).
    void drain() {
        if (!mg_->thresholds_enabled()) return;
        while (true) {
            std::vector<std::tuple<u32, int, bool>> work;
            for (int i = 0; i <= k_; ++i) {
                for (u32 v : mg_->v_in(i)) work.emplace_back(v, i, true);
                for (u32 v : mg_->v_out(i)) work.emplace_back(v, i, false);
            }
            if (work.empty()) return;
            u64 raised = 0;
            for (const auto& [v, lvl, in_side] : work) {
                std::vector<std::pair<u32, u32>> pairs;
                for (const MgEnt& ent : in_side ? mg_->e_in(v, lvl) : mg_->e_out(v, lvl)) {
                    if (!ent.is_super && ent.level == lvl) pairs.emplace_back(ent.tail, ent.head);
                }
                for (const auto& [t, h] : pairs) {
                    ++ctr_.drain_scans;
                    int j = std::min(eta(top_.r_between(t, h)), k_);
                    while (true) {
                        int cur = mg_->rep_level(t, h);
                        if (cur < 0 || cur >= j) break;
                        u32 ue = mg_->rep_edge(t, h);
                        if (ue == Multigraph::NO_ID) break;
                        es_apply(mg_->increase(ue, j));
                        ++ctr_.drain_increases;
                        ++raised;
                    }
                }
            }
            if (raised == 0) {
                ++ctr_.drain_stalls;
                return;
            }
        }
    }

    void es_apply(const MgChangeSet& cs) {
        if (es_) es_->update_p(cs);
    }

    std::vector<u32> expand_changed(const std::set<u32>& changed_ids) {
        u32 vs = mg_->vertex_of(s_);
        i64 ds = es_->estimate(vs);
        std::vector<u32> out;
        if (ds != prev_ds_) {
            prev_ds_ = ds;
            out.resize(n_real_);
            for (u32 v = 0; v < n_real_; ++v) out[v] = v;
            return out;
        }
        for (u32 id : changed_ids) {
            for (u32 v : mg_->members(id)) {
                if (v < n_real_) out.push_back(v);
            }
        }
        return out;
    }

    ParamSet ps_;
    double base_;
    bool weighted_ = false;
    u32 n_real_ = 0, m_real_ = 0;
    u32 s_ = 0, sstar_ = 0, shadow_edge_ = 0;
    i64 tau_ = 1, thr_ = 0, additive_ = 0, prev_ds_ = 0;
    int k_ = 0;
    DecrementalGraph g_;
    std::vector<char> heavy_;
    std::unique_ptr<Hierarchy> hier_;
    TopOrder top_;
    std::map<u64, u32> leaf2mg_;
    std::unique_ptr<Multigraph> mg_;
    RoundingScheme rs_;
    std::unique_ptr<ApproxEsTree> es_;
    BandCounters ctr_;
};

// Exact scale: a plain weighted decremental tree with threshold 2D on an
// own copy of the graph. Used wherever the approximate machinery is
// infeasible for a scale; its answers are exact up to the threshold.
class ClassicScale {
public:
    ClassicScale(const DecrementalGraph& input, u32 source, i64 D) : D_(D) {
        if (D < 1) throw ContractError("classic scale: D must be >= 1");
        if (!input.deletion_log().empty()) {
            throw ContractError("classic scale: graph must be pristine");
        }
        std::vector<std::tuple<u32, u32, i64>> edges;
        for (u32 e = 0; e < input.edge_count(); ++e) {
            const GraphEdge& ed = input.edge(e);
            edges.emplace_back(ed.from, ed.to, ed.weight);
        }
        g_ = DecrementalGraph::load(input.vertex_count(), edges);
        es_ = std::make_unique<EsStructure>(GraphView::whole(g_), source, 2 * D);
    }

    i64 query(u32 u) const {
        i64 l = es_->out_level(u);
        return l <= 2 * D_ ? l : INF_DIST;
    }

    void on_delete(u32 e) {
        g_.delete_edge(e);
        es_->remove_edge(e);
    }

    i64 scale() const { return D_; }
    u64 total_scans() const { return es_->total_scans(); }

private:
    i64 D_;
    DecrementalGraph g_;
    std::unique_ptr<EsStructure> es_;
};

}  // namespace dsssp
