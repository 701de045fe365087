#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <tuple>
#include <vector>

#include "approx_es.hpp"
#include "decomp.hpp"
#include "multigraph.hpp"
#include "sssp_params.hpp"
#include "toporder.hpp"

namespace dsssp {

struct SparseCounters {
    u64 deletions = 0;
    u64 splits = 0;
    u64 activations = 0;
    u64 s_inserts = 0;
    u64 s_deletes = 0;
    u64 s_increases = 0;
};

// One distance scale of the sparse variant: each vertex is sampled with
// probability ~ c ln n / D' and gains a private super-source; active
// super-sources run small filtered trees (window delta around their
// target in the order) whose distances materialize as super-edges in a
// second copy of the multigraph, where the global tree runs with
// geometric weights (real edges pinned at the rho level). Queries
// difference the global tree against the set containing s plus the
// detour budget.
class SparseBand {
public:
    SparseBand(const DecrementalGraph& input, u32 source, const ParamSet& ps, Rng rng)
        : ps_(ps), eps_(ps.epsilon) {
        if (ps.fallback) throw ContractError("sparse band: fallback parameters");
        if (ps.variant != Variant::Sparse) throw ContractError("sparse band: wrong variant");
        if (!input.deletion_log().empty()) {
            throw ContractError("sparse band: graph must be pristine");
        }
        if (source >= input.vertex_count()) throw ContractError("sparse band: bad source");
        if (ps.d_prime < 1) throw ContractError("sparse band: D' must be >= 1");
        n_real_ = input.vertex_count();
        m_real_ = static_cast<u32>(input.edge_count());
        s_ = source;
        dp_ = ps.d_prime;
        delta_ = std::max<i64>(1, std::llround(ps.delta));

        std::vector<std::tuple<u32, u32, i64>> edges;
        for (u32 e = 0; e < m_real_; ++e) {
            const GraphEdge& ed = input.edge(e);
            edges.emplace_back(ed.from, ed.to, ed.weight);
        }
        g_ = DecrementalGraph::load(n_real_, edges);
        if (g_.edge_count() != m_real_) {
            throw ContractError("sparse band: input must be simple");
        }
        sstar_ = g_.add_vertex();
        shadow_edge_ = g_.add_edge(sstar_, s_, 1);

        double p = std::min(1.0, ps.sample_c * std::log(std::max<double>(n_real_, 2.0)) /
                                     ((1.0 + eps_) * static_cast<double>(dp_)));
        samp_src_.assign(n_real_, Multigraph::NO_ID);
        for (u32 v = 0; v < n_real_; ++v) {
            if (rng.next_unit() < p) {
                u32 sv = g_.add_vertex();
                g_.add_edge(sv, v, 1);
                samp_src_[v] = sv;
                src_target_[sv] = v;
                sampled_.push_back(v);
                priority_[sv] = rng.next_u64();
            }
        }
        samp_tail_.assign(g_.vertex_count(), 0);
        for (const auto& [sv, tgt] : src_target_) {
            (void)tgt;
            samp_tail_[sv] = 1;
        }

        DecompParams dpar;
        dpar.d = std::max<i64>(1, ps.d / 2);
        dpar.omega = 1;
        additive_ = 2 * dpar.d;
        hier_ = std::make_unique<Hierarchy>(g_, DecompMode::Oblivious, dpar, rng.split());

        // Order: the shadow singleton first, sampling singletons last.
        std::vector<u64> leafseq = nested_leaf_order(g_, *hier_);
        u64 star_leaf = static_cast<u64>(hier_->leaf_of(sstar_));
        std::vector<u64> order{star_leaf}, back;
        for (u64 lid : leafseq) {
            if (lid == star_leaf) continue;
            const std::vector<u32>& vs = hier_->leaves().at(lid);
            if (vs.size() == 1 && vs[0] > sstar_) {
                back.push_back(lid);
            } else {
                order.push_back(lid);
            }
        }
        order.insert(order.end(), back.begin(), back.end());

        std::vector<std::vector<u32>> parts;
        parts.reserve(order.size());
        for (u64 lid : order) {
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

        k_ = std::max({ceil_log_base(static_cast<i64>(std::max<u32>(n_real_, 2)), 1.0 + eps_),
                       ps.rho_level,
                       ceil_log_base(static_cast<i64>(std::ceil(
                                         2.0 * static_cast<double>(dp_) * (1.0 + eps_))) +
                                         2,
                                     1.0 + eps_)});
        rho_lvl_ = std::min(ps.rho_level, k_);

        std::vector<int> levels(g_.edge_count(), 0);
        for (u32 e = 0; e < g_.edge_count(); ++e) {
            levels[e] = samp_tail_[g_.edge(e).from] ? 0 : rho_lvl_;
        }
        mg_ = std::make_unique<Multigraph>(g_, parts, levels, k_);
        mgp_ = std::make_unique<Multigraph>(g_, parts, levels, k_);

        grs_.wM.resize(static_cast<std::size_t>(k_) + 1);
        grs_.WM.resize(static_cast<std::size_t>(k_) + 1);
        for (int i = 0; i <= k_; ++i) {
            auto li = static_cast<std::size_t>(i);
            grs_.wM[li] = std::max<i64>(
                1, static_cast<i64>(std::floor(std::pow(1.0 + eps_, i))));
            grs_.WM[li] = std::max(grs_.wM[li], static_cast<i64>(std::floor(
                                                    std::pow(1.0 + eps_, i + 1))));
        }
        lo_loc_ = static_cast<double>(dp_) * (1.0 + eps_);
        hi_loc_ = 2.0 * lo_loc_;
        thr_loc_ = static_cast<i64>(std::floor(hi_loc_)) + 1;

        for (u32 x : sampled_set_ids()) {
            if (!active_targeting(x)) activate_for(x);
        }
        for (const auto& [src, loc] : locals_) {
            (void)loc;
            reconcile(src);
        }

        gthr_ = static_cast<i64>(std::floor(2.0 * static_cast<double>(ps.D) * (1.0 + eps_))) +
                2 * grs_.WM[static_cast<std::size_t>(k_)];
        ges_ = std::make_unique<ApproxEsTree>(*mgp_, mgp_->vertex_of(sstar_), gthr_, grs_);
        prev_ds_ = ges_->estimate(mgp_->vertex_of(s_));
    }

    i64 query(u32 u) const {
        if (u >= n_real_) throw ContractError("sparse band: query vertex out of range");
        if (u == s_) return 0;
        u32 vu = mgp_->vertex_of(u);
        u32 vs = mgp_->vertex_of(s_);
        if (ges_->beyond(vu) || ges_->beyond(vs)) return INF_DIST;
        return ges_->estimate(vu) - ges_->estimate(vs) + additive_;
    }

    std::vector<u32> on_delete(u32 e) {
        if (e >= m_real_) throw ContractError("sparse band: can only delete original edges");
        ++ctr_.deletions;
        g_.delete_edge(e);
        MgChangeSet cs = mg_->delete_edge(e);
        MgChangeSet csp = mgp_->delete_edge(e);
        for (auto& [src, loc] : locals_) {
            (void)src;
            loc.tree->update_p(cs);
        }
        ges_->update_p(csp);
        HierarchyEvent hev = hier_->on_delete(e);
        std::set<u32> changed_ids;
        apply_splits(hev, changed_ids);
        for (auto& [src, loc] : locals_) {
            bool moved = !loc.tree->update_distances().empty();
            if (moved || !hev.leaf_splits.empty()) reconcile(src);
        }
        for (const auto& [id, est] : ges_->update_distances()) {
            (void)est;
            changed_ids.insert(id);
        }
        return expand_changed(changed_ids);
    }

    // ---- introspection ----------------------------------------------------

    struct SuperInfo {
        u32 src;   // sampling source vertex in the augmented graph
        u32 head;  // multigraph vertex id
        int level;

        bool operator<(const SuperInfo& o) const {
            return std::tie(src, head, level) < std::tie(o.src, o.head, o.level);
        }
        bool operator==(const SuperInfo& o) const {
            return src == o.src && head == o.head && level == o.level;
        }
    };

    std::vector<SuperInfo> current_supers() const {
        std::vector<SuperInfo> out;
        for (const auto& [key, sid] : super_reg_) {
            out.push_back(SuperInfo{key.first, key.second, mgp_->super_level(sid)});
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // The super-edge set demanded by the definition: one edge per active
    // source and sampled head whose tree distance sits in the insertion
    // window, at the level of that distance.
    std::vector<SuperInfo> definitional_supers() const {
        std::vector<SuperInfo> out;
        std::set<u32> targets = sampled_set_ids();
        for (const auto& [src, loc] : locals_) {
            for (u32 x : targets) {
                i64 est = loc.tree->estimate(x);
                if (est > thr_loc_) continue;
                i64 d_loc = est - 1;
                if (static_cast<double>(d_loc) + 1e-9 < lo_loc_ ||
                    static_cast<double>(d_loc) > hi_loc_ + 1e-9) {
                    continue;
                }
                int lv = std::clamp(ceil_log_base(std::max<i64>(d_loc, 1), 1.0 + eps_), 0, k_);
                out.push_back(SuperInfo{src, x, lv});
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    const DecrementalGraph& graph() const { return g_; }
    const Hierarchy& hierarchy() const { return *hier_; }
    const TopOrder& top_order() const { return top_; }
    const Multigraph& base_multigraph() const { return *mg_; }
    const Multigraph& super_multigraph() const { return *mgp_; }
    const ApproxEsTree& global_tree() const { return *ges_; }
    const ApproxEsTree* local_tree(u32 src) const {
        auto it = locals_.find(src);
        return it == locals_.end() ? nullptr : it->second.tree.get();
    }
    std::vector<u32> active_sources() const {
        std::vector<u32> out;
        for (const auto& [src, loc] : locals_) {
            (void)loc;
            out.push_back(src);
        }
        return out;
    }
    const std::vector<u32>& sampled_vertices() const { return sampled_; }
    u32 sampling_source(u32 v) const { return samp_src_.at(v); }
    const SparseCounters& counters() const { return ctr_; }
    const ParamSet& params() const { return ps_; }
    int k() const { return k_; }
    i64 additive() const { return additive_; }
    i64 local_threshold() const { return thr_loc_; }
    u32 shadow_vertex() const { return sstar_; }

    OrderCheck verify_order() const {
        return verify_top_order(g_, *hier_, top_, *mg_, &samp_tail_);
    }

private:
    struct Local {
        u32 target = 0;
        std::unique_ptr<ApproxEsTree> tree;
    };

    i64 r_near(u32 nid, u32 x) const {
        if (x == nid) return -top_.mass(x);
        return top_.r_between(nid, x);
    }

    std::set<u32> sampled_set_ids() const {
        std::set<u32> out;
        for (u32 v : sampled_) out.insert(mg_->vertex_of(v));
        return out;
    }

    bool active_targeting(u32 set_id) const {
        for (const auto& [src, loc] : locals_) {
            (void)src;
            if (mg_->vertex_of(loc.target) == set_id) return true;
        }
        return false;
    }

    void activate_for(u32 set_id) {
        u32 best = Multigraph::NO_ID;
        u64 best_pri = 0;
        for (u32 v : mg_->members(set_id)) {
            if (v >= n_real_ || samp_src_[v] == Multigraph::NO_ID) continue;
            u32 sv = samp_src_[v];
            u64 pri = priority_.at(sv);
            if (best == Multigraph::NO_ID || pri > best_pri ||
                (pri == best_pri && sv < best)) {
                best = sv;
                best_pri = pri;
            }
        }
        if (best == Multigraph::NO_ID) return;
        u32 tgt = src_target_.at(best);
        Local loc;
        loc.target = tgt;
        auto window = [this, tgt](u32 x) {
            if (x == mg_->vertex_of(samp_src_[tgt])) return true;
            u32 nid = mg_->vertex_of(tgt);
            if (!top_.contains(x) || !top_.contains(nid)) return false;
            return r_near(nid, x) <= delta_;
        };
        auto edge_ok = [this, tgt](const MgEnt& ent) {
            if (ent.is_super) return false;
            if (ent.tail == mg_->vertex_of(samp_src_[tgt])) return true;
            u32 nid = mg_->vertex_of(tgt);
            return r_near(nid, ent.tail) + top_.mass(ent.tail) <= delta_ ||
                   r_near(nid, ent.head) + top_.mass(ent.head) <= delta_;
        };
        loc.tree = std::make_unique<ApproxEsTree>(*mg_, mg_->vertex_of(best), thr_loc_,
                                                  RoundingScheme::unit(k_), window, edge_ok);
        locals_.emplace(best, std::move(loc));
        ++ctr_.activations;
    }

    void sdel_sid(u32 sid) {
        auto kit = super_key_.find(sid);
        MgChangeSet cs = mgp_->s_delete(sid);
        if (ges_) ges_->update_p(cs);
        if (kit != super_key_.end()) {
            super_reg_.erase(kit->second);
            super_key_.erase(kit);
        }
        ++ctr_.s_deletes;
    }

    // Aligns the super-edges of one active source with its tree: delete
    // the ones that fell out of the window, raise levels that grew, and
    // insert newly qualifying heads.
    void reconcile(u32 src) {
        const Local& loc = locals_.at(src);
        u32 nid = mg_->vertex_of(loc.target);
        std::set<u32> heads = sampled_set_ids();
        for (auto it = super_reg_.lower_bound({src, 0});
             it != super_reg_.end() && it->first.first == src; ++it) {
            heads.insert(it->first.second);
        }
        for (u32 x : heads) {
            auto key = std::make_pair(src, x);
            auto it = super_reg_.find(key);
            bool have = it != super_reg_.end();
            i64 est = loc.tree->estimate(x);
            bool in_window = est <= thr_loc_;
            i64 d_loc = est - 1;
            if (in_window && (static_cast<double>(d_loc) + 1e-9 < lo_loc_ ||
                              static_cast<double>(d_loc) > hi_loc_ + 1e-9)) {
                in_window = false;
            }
            if (!in_window) {
                if (have) sdel_sid(it->second);
                continue;
            }
            int lv = std::clamp(ceil_log_base(std::max<i64>(d_loc, 1), 1.0 + eps_), 0, k_);
            if (have) {
                u32 sid = it->second;
                // The super-edge tail follows the remainder on splits;
                // refresh it if the target moved to another piece.
                if (mgp_->super_tail(sid) != nid || mgp_->super_level(sid) > lv) {
                    sdel_sid(sid);
                    have = false;
                } else if (lv > mgp_->super_level(sid)) {
                    MgChangeSet cs = mgp_->s_increase(sid, lv);
                    if (ges_) ges_->update_p(cs);
                    ++ctr_.s_increases;
                }
            }
            if (!have) {
                MgChangeSet cs;
                u32 sid = mgp_->s_insert(nid, x, lv, &cs);
                super_reg_[key] = sid;
                super_key_[sid] = key;
                if (ges_) ges_->update_p(cs);
                ++ctr_.s_inserts;
            }
        }
    }

    void apply_splits(const HierarchyEvent& hev, std::set<u32>& changed_ids) {
        if (hev.leaf_splits.empty()) return;
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
            ++ctr_.splits;
            // Drop the super-edges incident to the splitting set first.
            std::vector<u32> sids;
            for (int i = 0; i <= k_; ++i) {
                for (const MgEnt& ent : mgp_->e_in(vp, i)) {
                    if (ent.is_super) sids.push_back(ent.sid);
                }
                for (const MgEnt& ent : mgp_->e_out(vp, i)) {
                    if (ent.is_super) sids.push_back(ent.sid);
                }
            }
            for (u32 sid : sids) sdel_sid(sid);
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
            MgChangeSet c1 = mg_->split(vp, ws);
            std::vector<u32> nids = mg_->last_new_ids();
            MgChangeSet c2 = mgp_->split(vp, ws);
            if (mgp_->last_new_ids() != nids) {
                throw ContractError("sparse band: multigraph ids diverged");
            }
            leaf2mg_[rem_leaf] = vp;
            for (std::size_t j = 0; j < moved.size(); ++j) leaf2mg_[moved[j]] = nids[j];
            for (auto& [src, loc] : locals_) {
                (void)src;
                loc.tree->update_p_split(vp, nids, c1);
            }
            ges_->update_p_split(vp, nids, c2);
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
            // Every sampled piece needs an active ingoing source.
            std::vector<u32> pieces = nids;
            pieces.push_back(vp);
            for (u32 x : pieces) {
                bool sampled_piece = false;
                for (u32 v : mg_->members(x)) {
                    if (v < n_real_ && samp_src_[v] != Multigraph::NO_ID) {
                        sampled_piece = true;
                        break;
                    }
                }
                if (sampled_piece && !active_targeting(x)) activate_for(x);
            }
        }
    }

    std::vector<u32> expand_changed(const std::set<u32>& changed_ids) {
        u32 vs = mgp_->vertex_of(s_);
        i64 ds = ges_->estimate(vs);
        std::vector<u32> out;
        if (ds != prev_ds_) {
            prev_ds_ = ds;
            out.resize(n_real_);
            for (u32 v = 0; v < n_real_; ++v) out[v] = v;
            return out;
        }
        for (u32 id : changed_ids) {
            for (u32 v : mgp_->members(id)) {
                if (v < n_real_) out.push_back(v);
            }
        }
        return out;
    }

    ParamSet ps_;
    double eps_;
    u32 n_real_ = 0, m_real_ = 0;
    u32 s_ = 0, sstar_ = 0, shadow_edge_ = 0;
    i64 dp_ = 1, delta_ = 1, additive_ = 0;
    int k_ = 0, rho_lvl_ = 0;
    i64 thr_loc_ = 0, gthr_ = 0, prev_ds_ = 0;
    double lo_loc_ = 0.0, hi_loc_ = 0.0;
    DecrementalGraph g_;
    std::vector<u32> samp_src_;
    std::map<u32, u32> src_target_;
    std::map<u32, u64> priority_;
    std::vector<u32> sampled_;
    std::vector<char> samp_tail_;
    std::unique_ptr<Hierarchy> hier_;
    TopOrder top_;
    std::map<u64, u32> leaf2mg_;
    std::unique_ptr<Multigraph> mg_, mgp_;
    RoundingScheme grs_;
    std::unique_ptr<ApproxEsTree> ges_;
    std::map<u32, Local> locals_;
    std::map<std::pair<u32, u32>, u32> super_reg_;
    std::map<u32, std::pair<u32, u32>> super_key_;
    SparseCounters ctr_;
};

}  // namespace dsssp
