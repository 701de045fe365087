#pragma once

#include <deque>
#include <map>
#include <memory>
#include <unordered_set>
#include <vector>

#include "estree.hpp"
#include "graph.hpp"
#include "oracle.hpp"
#include "separators.hpp"

namespace dsssp {

enum class DecompMode { Adaptive, Oblivious };

struct DecompParams {
    i64 d1 = 0;     // adaptive lower diameter bound
    i64 d2 = 0;     // adaptive upper diameter bound
    i64 d = 0;      // oblivious diameter bound
    i64 omega = 1;  // weight bound (weights in [1, omega)); 1 = unweighted
};

// Per-update refinement event of one decomposition instance: the newly
// found separator vertices and, when the affected set split, the old set
// id with the replacing piece ids (inheritor last, carrying the old id).
struct DecompEvent {
    std::vector<u32> new_separator;
    bool split = false;
    u64 old_set = 0;
    std::size_t old_size = 0;
    std::vector<u64> pieces;
};

// Low-diameter SCC decomposition of one strongly-connected-closed vertex
// set: maintains a growing separator S and the SCC family of the local
// graph minus E(S), with per-SCC ES-structures rooted at random vertices.
// Adaptive mode keeps every SCC diameter <= d2; oblivious mode keeps it
// <= d (assuming an oblivious adversary for the cost bounds; correctness
// of the diameter invariant is unconditional here because vertices that
// drift beyond d/2 from the root are cut off immediately).
class LowDiamDecomp {
public:
    LowDiamDecomp(const DecrementalGraph& g, std::vector<u32> comp, DecompMode mode,
                  DecompParams p, Rng rng, const std::vector<char>* pre_excluded = nullptr)
        : g_(&g), comp_(std::move(comp)), mode_(mode), p_(p), rng_(rng) {
        if (p_.omega < 1) throw ContractError("decomp: omega must be >= 1");
        in_comp_.assign(g_->vertex_count(), 0);
        for (u32 v : comp_) in_comp_[v] = 1;
        set_id_of_.assign(g_->vertex_count(), -1);
        in_sep_.assign(g_->vertex_count(), 0);
        excluded_.assign(g_->edge_count(), 0);
        if (pre_excluded) {
            for (u32 e = 0; e < g_->edge_count(); ++e) excluded_[e] = (*pre_excluded)[e];
        }
        double lgc = comp_.size() > 1 ? lg(static_cast<double>(comp_.size())) : 0.0;
        if (mode_ == DecompMode::Adaptive) {
            if (p_.d1 < 1 || p_.d1 >= p_.d2) throw ContractError("decomp: need 0 < d1 < d2");
            if (p_.d1 % p_.omega != 0 || p_.d2 % p_.omega != 0) {
                throw ContractError("decomp: d1, d2 must be divisible by omega");
            }
            if (static_cast<double>(p_.d2 - p_.d1) < 2.0 * p_.omega * lgc) {
                throw ContractError("decomp: d2 - d1 below the 2*omega*lg n floor");
            }
            install_partition(comp_, p_.d1, -1);
        } else {
            if (p_.d < 1) throw ContractError("decomp: need d >= 1");
            obl_thr_ = p_.d / 2;
            if (static_cast<double>(p_.d) < 4.0 * p_.omega * lgc) {
                // Trivial structure: S = V at all times.
                trivial_ = true;
                for (u32 v : comp_) add_separator(v);
                for (u32 v : comp_) register_set({v});
            } else {
                install_partition(comp_, p_.d, obl_thr_);
                // Enforce the radius-d/2 invariant from the random roots:
                // vertices beyond d/2 of their root are cut off now rather
                // than at the first deletion touching their SCC.
                std::vector<u64> work;
                for (const auto& [id, reg] : structs_) {
                    (void)reg;
                    work.push_back(id);
                }
                while (!work.empty()) {
                    u64 id = work.back();
                    work.pop_back();
                    settle_oblivious(id);
                }
            }
        }
        init_done_ = true;
    }

    DecompMode mode() const { return mode_; }
    const DecompParams& params() const { return p_; }
    bool trivial() const { return trivial_; }
    bool covers(u32 v) const { return in_comp_[v] != 0; }
    const std::vector<u32>& component() const { return comp_; }
    const std::vector<u32>& separator() const { return separator_; }
    bool in_separator(u32 v) const { return in_sep_[v] != 0; }
    const std::map<u64, std::vector<u32>>& family() const { return sets_; }
    i64 set_of(u32 v) const { return set_id_of_[v]; }
    const std::vector<char>& excluded_edges() const { return excluded_; }
    u64 repartition_count() const { return repartitions_; }
    const std::vector<u32>& root_log() const { return root_log_; }

    const EsStructure* structure_for(u64 id) const {
        auto it = structs_.find(id);
        return it == structs_.end() ? nullptr : it->second.es.get();
    }
    u32 root_for(u64 id) const {
        auto it = structs_.find(id);
        return it == structs_.end() ? NO_VERTEX : it->second.root;
    }

    // Handles the disappearance of edge e from this instance's graph:
    // a real graph deletion or an exclusion delivered from outside.
    DecompEvent erase_edge(u32 e) {
        DecompEvent ev;
        const GraphEdge& ed = g_->edge(e);
        if (!covers(ed.from) || !covers(ed.to)) return ev;
        if (excluded_[e]) return ev;
        excluded_[e] = 1;
        if (trivial_) return ev;
        i64 su = set_id_of_[ed.from];
        i64 sv = set_id_of_[ed.to];
        if (su != sv || su < 0) {
            // Cross-set edge: no SCC can change and no structure holds it.
            return ev;
        }
        u64 sid = static_cast<u64>(su);
        std::vector<u32> old_verts = sets_.at(sid);
        if (old_verts.size() <= 1) return ev;
        std::size_t sep_mark = separator_.size();
        event_sets_.clear();
        sets_.erase(sid);
        Reg active;
        bool has_struct = false;
        if (auto sit = structs_.find(sid); sit != structs_.end()) {
            active = std::move(sit->second);
            structs_.erase(sit);
            has_struct = true;
        }
        if (mode_ == DecompMode::Adaptive) {
            adaptive_update(old_verts, active, has_struct, e);
        } else {
            oblivious_update(old_verts, active, has_struct, e);
        }
        finalize_event(sid, old_verts, sep_mark, ev);
        return ev;
    }

    static constexpr u32 NO_VERTEX = 0xffffffffu;

private:
    struct Reg {
        std::unique_ptr<EsStructure> es;
        u32 root = NO_VERTEX;
        std::unordered_set<u32> processed;  // oblivious queue: one cut per vertex
    };

    // View of the current usable graph H_r of one ES-structure; the mask
    // lives on the heap so the contained GraphView's pointer stays valid.
    struct EsView {
        std::unique_ptr<std::vector<char>> mask;
        GraphView view;
    };

    GraphView local_view(const std::vector<u32>& verts) const {
        return GraphView(g_, verts, &excluded_);
    }

    EsView usable_view(const EsStructure& es) const {
        auto mask = std::make_unique<std::vector<char>>(g_->edge_count(), 1);
        es.for_each_usable_edge([&](u32 gid, u32, u32, i64) { (*mask)[gid] = 0; });
        GraphView view(g_, es.view_vertices(), mask.get());
        return EsView{std::move(mask), std::move(view)};
    }

    u64 register_set(std::vector<u32> verts) {
        u64 id = next_id_++;
        for (u32 v : verts) set_id_of_[v] = static_cast<i64>(id);
        sets_.emplace(id, std::move(verts));
        event_sets_.push_back(id);
        return id;
    }

    // Adds v to S and excludes its incident local edges; notifies any
    // registered structure still holding one of them.
    void add_separator(u32 v) {
        if (in_sep_[v]) return;
        in_sep_[v] = 1;
        separator_.push_back(v);
        auto handle = [&](u32 e) {
            const GraphEdge& ed = g_->edge(e);
            if (!ed.alive || excluded_[e]) return;
            if (!covers(ed.from) || !covers(ed.to)) return;
            excluded_[e] = 1;
            for (u32 end : {ed.from, ed.to}) {
                i64 sid = set_id_of_[end];
                if (sid < 0) continue;
                auto it = structs_.find(static_cast<u64>(sid));
                if (it != structs_.end() && it->second.es->edge_usable(e)) {
                    it->second.es->remove_edge(e);
                }
            }
        };
        for (u32 e : g_->out_edges(v)) handle(e);
        for (u32 e : g_->in_edges(v)) handle(e);
    }

    void dissolve_set(const std::vector<u32>& verts) {
        for (u32 v : verts) add_separator(v);
        for (u32 v : verts) register_set({v});
    }

    // Partition+ over verts with diameter parameter dpar (floored to a
    // multiple of omega); es_thr < 0 means the default dpar/2 threshold.
    void install_partition(const std::vector<u32>& verts, i64 dpar, i64 es_thr) {
        if (verts.empty()) return;
        if (verts.size() == 1) {
            register_set(verts);
            return;
        }
        i64 dw = (dpar / p_.omega) * p_.omega;
        if (dw < 1) {
            dissolve_set(verts);
            return;
        }
        if (init_done_) ++repartitions_;
        PartitionResult pr = partition_plus(local_view(verts), dw, rng_, es_thr, p_.omega);
        for (u32 r : pr.roots) root_log_.push_back(r);
        for (u32 s : pr.separator) add_separator(s);
        for (std::size_t i = 0; i < pr.sccs.size(); ++i) {
            u64 id = register_set(pr.sccs[i]);
            if (pr.sccs[i].size() > 1) {
                structs_[id] = Reg{std::move(pr.es_seeds[i]), pr.roots[i], {}};
            }
        }
    }

    std::vector<std::vector<u32>> pieces_of(const std::vector<u32>& verts) const {
        return strongly_connected_components(local_view(verts));
    }

    static int piece_containing(const std::vector<std::vector<u32>>& pieces, u32 v) {
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            for (u32 w : pieces[i]) {
                if (w == v) return static_cast<int>(i);
            }
        }
        return -1;
    }

    // ---- adaptive mode -------------------------------------------------

    void adaptive_update(const std::vector<u32>& old_verts, Reg& active, bool has_struct,
                         u32 e) {
        if (has_struct) active.es->remove_edge(e);
        auto pieces = pieces_of(old_verts);
        int root_piece = has_struct ? piece_containing(pieces, active.root) : -1;
        bool trigger = false;
        if (has_struct) {
            // Prune edges not inside the root's new SCC.
            std::vector<char> in_c(g_->vertex_count(), 0);
            for (u32 v : pieces[static_cast<std::size_t>(root_piece)]) in_c[v] = 1;
            std::vector<u32> drop;
            active.es->for_each_usable_edge([&](u32 gid, u32 u, u32 v, i64) {
                if (!in_c[u] || !in_c[v]) drop.push_back(gid);
            });
            for (u32 gid : drop) active.es->remove_edge(gid);
            i64 gap = p_.d2 - p_.d1;
            trigger = 2 * p_.omega * static_cast<i64>(active.es->missing_in()) >= gap ||
                      2 * p_.omega * static_cast<i64>(active.es->missing_out()) >= gap;
        }
        if (!trigger) {
            for (std::size_t i = 0; i < pieces.size(); ++i) {
                u64 id = register_set(pieces[i]);
                if (has_struct && static_cast<int>(i) == root_piece) {
                    structs_[id] = std::move(active);
                }
            }
            return;
        }
        // Repartition every rootless new SCC at the full parameter first.
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (static_cast<int>(i) != root_piece) install_partition(pieces[i], p_.d1, -1);
        }
        const std::vector<u32>& C = pieces[static_cast<std::size_t>(root_piece)];
        EsView hv = usable_view(*active.es);
        u32 n_r = active.es->view_size();
        const std::vector<u32>& hverts = active.es->view_vertices();
        u32 rprime = hverts[static_cast<std::size_t>(rng_.next_below(n_r))];
        root_log_.push_back(rprime);
        std::vector<i64> din = dijkstra_view(hv.view, rprime, true);
        std::vector<i64> dout = dijkstra_view(hv.view, rprime, false);
        i64 half = p_.d1 / 2;
        i64 quarter = p_.d1 / 4;
        i64 miss_in = 0, miss_out = 0, ball_in = 0, ball_out = 0;
        for (u32 v : hverts) {
            if (din[v] > half) ++miss_in;
            if (dout[v] > half) ++miss_out;
            if (din[v] <= quarter) ++ball_in;
            if (dout[v] <= quarter) ++ball_out;
        }
        i64 gap = p_.d2 - p_.d1;
        bool trig_in = 2 * p_.omega * miss_in >= gap && 2 * ball_in >= static_cast<i64>(n_r);
        bool trig_out = 2 * p_.omega * miss_out >= gap && 2 * ball_out >= static_cast<i64>(n_r);
        if (trig_in || trig_out) {
            i64 lo = ((quarter + 1 + p_.omega - 1) / p_.omega) * p_.omega;
            i64 hi = (half / p_.omega) * p_.omega;
            double floor_need = 2.0 * p_.omega * lg(static_cast<double>(std::max<u32>(2, n_r)));
            if (lo <= hi && static_cast<double>(hi - lo) >= floor_need) {
                bool reversed = trig_in;  // in-case separates on the reversed graph
                std::vector<u32> L;
                bool ok = true;
                try {
                    SeparatorResult sr =
                        thin_layer(hv.view, active.root, lo, hi, p_.omega, reversed);
                    L = sr.layer_vertices;
                } catch (const ContractError&) {
                    ok = false;
                }
                if (ok) {
                    for (u32 v : L) add_separator(v);
                    for (u32 v : L) register_set({v});
                    std::vector<char> in_l(g_->vertex_count(), 0);
                    for (u32 v : L) in_l[v] = 1;
                    std::vector<u32> rest;
                    for (u32 v : C) {
                        if (!in_l[v]) rest.push_back(v);
                    }
                    install_partition(rest, p_.d1, -1);
                    return;
                }
            }
        }
        install_partition(C, p_.d1 / 8, -1);
    }

    // ---- oblivious mode ------------------------------------------------

    i64 both_missing(const Reg& reg) const {
        i64 thr = reg.es->threshold();
        i64 cnt = 0;
        for (u32 v : reg.es->view_vertices()) {
            if (reg.es->out_level(v) > thr && reg.es->in_level(v) > thr) ++cnt;
        }
        return cnt;
    }

    // Processes the queue of vertices beyond d/2 from the root in either
    // direction: each gets cut off once via a separator layer and its
    // incident structure edges removed.
    void oblivious_queue(Reg& reg) {
        EsStructure& es = *reg.es;
        i64 thr = es.threshold();
        while (true) {
            u32 pick = NO_VERTEX;
            bool out_far = false;
            for (u32 v : es.view_vertices()) {
                if (reg.processed.count(v)) continue;
                if (in_sep_[v]) {
                    reg.processed.insert(v);
                    es.remove_vertex_edges(v);
                    continue;
                }
                bool o = es.out_level(v) > thr;
                bool i = es.in_level(v) > thr;
                if (o || i) {
                    pick = v;
                    out_far = o;
                    break;
                }
            }
            if (pick == NO_VERTEX) break;
            reg.processed.insert(pick);
            std::vector<u32> cut = oblivious_cut(es, pick, out_far);
            for (u32 s : cut) {
                add_separator(s);
                es.remove_vertex_edges(s);
                reg.processed.insert(s);
            }
            es.remove_vertex_edges(pick);
        }
    }

    // Separator layer around a far vertex v with budget d/4; out_far means
    // the root cannot reach v, so the layer grows against edge directions
    // (through the vertices that still reach v). Falls back to the direct
    // neighborhood of v when the layer-search floor cannot be met.
    std::vector<u32> oblivious_cut(const EsStructure& es, u32 v, bool out_far) const {
        EsView hv = usable_view(es);
        i64 budget = ((p_.d / 4) / p_.omega) * p_.omega;
        double need =
            2.0 * p_.omega * lg(static_cast<double>(std::max<u32>(2, es.view_size())));
        if (budget >= 1 && static_cast<double>(budget) >= need) {
            try {
                SeparatorResult sr = thin_layer(hv.view, v, 0, budget, p_.omega, out_far);
                return sr.layer_vertices;
            } catch (const ContractError&) {
                // fall through to the neighborhood cut
            }
        }
        std::vector<u32> cut;
        es.for_each_usable_edge([&](u32, u32 a, u32 b, i64) {
            if (out_far && b == v && a != v) cut.push_back(a);
            if (!out_far && a == v && b != v) cut.push_back(b);
        });
        std::sort(cut.begin(), cut.end());
        cut.erase(std::unique(cut.begin(), cut.end()), cut.end());
        return cut;
    }

    void oblivious_update(const std::vector<u32>& old_verts, Reg& active, bool has_struct,
                          u32 e) {
        bool keep = false;
        if (has_struct) {
            active.es->remove_edge(e);
            oblivious_queue(active);
            keep = 2 * both_missing(active) <= static_cast<i64>(active.es->view_size());
        }
        auto pieces = pieces_of(old_verts);
        int root_piece = keep ? piece_containing(pieces, active.root) : -1;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (keep && static_cast<int>(i) == root_piece) {
                u64 id = register_set(pieces[i]);
                structs_[id] = std::move(active);
            } else {
                install_partition(pieces[i], p_.d / 4, obl_thr_);
            }
        }
    }

    // Initialization-time stabilization of one oblivious structure: runs
    // the queue procedure, the destruction check, and repartitions pieces.
    void settle_oblivious(u64 sid) {
        auto sit = structs_.find(sid);
        if (sit == structs_.end() || !sets_.count(sid)) return;
        oblivious_queue(sit->second);
        bool keep = 2 * both_missing(sit->second) <=
                    static_cast<i64>(sit->second.es->view_size());
        std::vector<u32> verts = sets_.at(sid);
        auto pieces = pieces_of(verts);
        if (keep && pieces.size() == 1) return;
        Reg saved = std::move(sit->second);
        structs_.erase(sit);
        sets_.erase(sid);
        int root_piece = keep ? piece_containing(pieces, saved.root) : -1;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (keep && static_cast<int>(i) == root_piece) {
                u64 id = register_set(pieces[i]);
                structs_[id] = std::move(saved);
            } else {
                // d/4-born structures start within radius d/4 <= d/2 of
                // their root, so they need no further settling.
                install_partition(pieces[i], p_.d / 4, obl_thr_);
            }
        }
    }

    // ---- event assembly --------------------------------------------------

    void finalize_event(u64 sid, const std::vector<u32>& old_verts, std::size_t sep_mark,
                        DecompEvent& ev) {
        ev.new_separator.assign(separator_.begin() + static_cast<std::ptrdiff_t>(sep_mark),
                                separator_.end());
        std::vector<u64> ids;
        for (u64 id : event_sets_) {
            if (sets_.count(id)) ids.push_back(id);
        }
        if (ids.empty()) {
            // Defensive: every update path re-registers at least one piece.
            ids.push_back(register_set(old_verts));
        }
        // Inheritor: largest piece, ties by smallest contained vertex id.
        u64 inherit = ids.front();
        std::size_t best_sz = 0;
        u32 best_min = NO_VERTEX;
        for (u64 id : ids) {
            const auto& vs = sets_.at(id);
            u32 mn = *std::min_element(vs.begin(), vs.end());
            if (vs.size() > best_sz || (vs.size() == best_sz && mn < best_min)) {
                best_sz = vs.size();
                best_min = mn;
                inherit = id;
            }
        }
        auto node = sets_.extract(inherit);
        node.key() = sid;
        for (u32 v : node.mapped()) set_id_of_[v] = static_cast<i64>(sid);
        sets_.insert(std::move(node));
        if (auto st = structs_.find(inherit); st != structs_.end()) {
            structs_[sid] = std::move(st->second);
            structs_.erase(inherit);
        }
        ev.old_set = sid;
        ev.old_size = old_verts.size();
        for (u64 id : ids) {
            if (id != inherit) ev.pieces.push_back(id);
        }
        ev.pieces.push_back(sid);
        ev.split = ids.size() > 1;
    }

    const DecrementalGraph* g_;
    std::vector<u32> comp_;
    DecompMode mode_;
    DecompParams p_;
    Rng rng_;
    i64 obl_thr_ = 0;
    bool trivial_ = false;
    bool init_done_ = false;
    std::vector<char> in_comp_;
    std::vector<char> excluded_;
    std::vector<u32> separator_;
    std::vector<char> in_sep_;
    u64 next_id_ = 1;
    std::map<u64, std::vector<u32>> sets_;
    std::vector<i64> set_id_of_;
    std::map<u64, Reg> structs_;
    std::vector<u64> event_sets_;
    u64 repartitions_ = 0;
    std::vector<u32> root_log_;
};

// One leaf-family refinement: old leaf id replaced by piece ids
// (inheritor last, carrying the old id).
struct LeafSplit {
    u64 old_leaf = 0;
    std::vector<u64> pieces;
};

struct HierarchyEvent {
    std::vector<std::pair<int, u32>> new_separator;  // (level, vertex)
    std::vector<LeafSplit> leaf_splits;
};

// Hierarchical decomposition: levels 0..L where L = ceil(lg d1) (adaptive)
// or ceil(lg d) (oblivious). A strongly connected set of level i (size in
// (n/2^{i+1}, n/2^i]) is governed by an instance with parameters divided
// by 2^i; sets at level >= L dissolve entirely into S_L. The leaf family
// is the SCC family of the graph minus all excluded edges.
class Hierarchy {
public:
    // pre_excluded marks edges that never take part in the decomposition
    // at any level (the weighted structures bypass heavy edges this way);
    // they count as excluded from every graph of the hierarchy.
    Hierarchy(const DecrementalGraph& g, DecompMode mode, DecompParams p, Rng rng,
              const std::vector<char>* pre_excluded = nullptr)
        : g_(&g), mode_(mode), p_(p), rng_(rng) {
        n_ = g_->vertex_count();
        i64 base = mode_ == DecompMode::Adaptive ? p_.d1 : p_.d;
        if (base < 1) throw ContractError("hierarchy: base diameter parameter must be >= 1");
        L_ = static_cast<int>(ceil_log2(static_cast<u64>(base)));
        sep_levels_.assign(static_cast<std::size_t>(L_) + 1, {});
        vertex_sep_level_.assign(n_, -1);
        excl_level_.assign(g_->edge_count(), UNEXCLUDED);
        leaf_excluded_.assign(g_->edge_count(), 0);
        if (pre_excluded) {
            for (u32 e = 0; e < g_->edge_count(); ++e) {
                if ((*pre_excluded)[e]) {
                    excl_level_[e] = -1;
                    leaf_excluded_[e] = 1;
                }
            }
        }
        governed_.assign(static_cast<std::size_t>(L_) + 1, std::vector<char>(n_, 0));
        chain_.assign(n_, {});
        pending_.assign(static_cast<std::size_t>(L_) + 1, {});
        leaf_of_.assign(n_, -1);
        touched_mark_.assign(n_, 0);
        std::vector<u32> all(n_);
        for (u32 v = 0; v < n_; ++v) all[v] = v;
        for (auto& comp : strongly_connected_components(GraphView(g_, all, &leaf_excluded_))) {
            spawn_or_dissolve(comp, -1);
        }
        drain();
        new_sep_buf_.clear();
        for (u32 v : touched_) touched_mark_[v] = 0;
        touched_.clear();
        for (auto& comp : strongly_connected_components(GraphView(g_, all, &leaf_excluded_))) {
            u64 id = next_leaf_++;
            for (u32 v : comp) leaf_of_[v] = static_cast<i64>(id);
            leaves_.emplace(id, std::move(comp));
        }
    }

    int levels() const { return L_; }
    const std::vector<std::vector<u32>>& separator_levels() const { return sep_levels_; }
    int separator_level_of(u32 v) const { return vertex_sep_level_[v]; }
    const std::vector<int>& edge_excl_level() const { return excl_level_; }
    const std::vector<char>& leaf_excluded() const { return leaf_excluded_; }
    const std::map<u64, std::vector<u32>>& leaves() const { return leaves_; }
    i64 leaf_of(u32 v) const { return leaf_of_[v]; }

    u64 repartition_count() const {
        u64 total = 0;
        for (const auto& inst : insts_) total += inst.dec->repartition_count();
        return total;
    }

    std::vector<u32> all_root_draws() const {
        std::vector<u32> out;
        for (const auto& inst : insts_) {
            const auto& rl = inst.dec->root_log();
            out.insert(out.end(), rl.begin(), rl.end());
        }
        return out;
    }

    // The ES-structure governing a (non-singleton) leaf: the deepest
    // instance with a family set equal to the leaf. A family set
    // containing one of the leaf's vertices with equal size must equal
    // the leaf, because SCC families only coarsen toward lower levels.
    const EsStructure* leaf_structure(u64 leaf) const {
        std::size_t idx = 0;
        u64 sid = 0;
        if (!find_leaf_owner(leaf, idx, sid)) return nullptr;
        return insts_[idx].dec->structure_for(sid);
    }
    u32 leaf_root(u64 leaf) const {
        std::size_t idx = 0;
        u64 sid = 0;
        if (!find_leaf_owner(leaf, idx, sid)) return LowDiamDecomp::NO_VERTEX;
        return insts_[idx].dec->root_for(sid);
    }

    // Call after g.delete_edge(e).
    HierarchyEvent on_delete(u32 e) {
        new_sep_buf_.clear();
        for (u32 v : touched_) touched_mark_[v] = 0;
        touched_.clear();
        const GraphEdge& ed = g_->edge(e);
        touch(ed.from);
        touch(ed.to);
        for (u32 idx : chain_[ed.from]) {
            if (insts_[idx].dec->covers(ed.to)) {
                pending_[static_cast<std::size_t>(insts_[idx].level)].push_back({idx, e});
            }
        }
        drain();
        HierarchyEvent out;
        out.new_separator = new_sep_buf_;
        // Leaf refinement: recompute the partition of affected leaves.
        std::vector<u64> cand;
        for (u32 v : touched_) {
            if (leaf_of_[v] >= 0) cand.push_back(static_cast<u64>(leaf_of_[v]));
        }
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        for (u64 lid : cand) {
            auto& verts = leaves_.at(lid);
            if (verts.size() <= 1) continue;
            auto pieces =
                strongly_connected_components(GraphView(g_, verts, &leaf_excluded_));
            if (pieces.size() <= 1) continue;
            std::size_t best = 0;
            for (std::size_t i = 1; i < pieces.size(); ++i) {
                u32 mi = *std::min_element(pieces[i].begin(), pieces[i].end());
                u32 mb = *std::min_element(pieces[best].begin(), pieces[best].end());
                if (pieces[i].size() > pieces[best].size() ||
                    (pieces[i].size() == pieces[best].size() && mi < mb)) {
                    best = i;
                }
            }
            LeafSplit split;
            split.old_leaf = lid;
            for (std::size_t i = 0; i < pieces.size(); ++i) {
                if (i == best) continue;
                u64 nid = next_leaf_++;
                for (u32 v : pieces[i]) leaf_of_[v] = static_cast<i64>(nid);
                leaves_.emplace(nid, pieces[i]);
                split.pieces.push_back(nid);
            }
            leaves_[lid] = pieces[best];
            split.pieces.push_back(lid);
            out.leaf_splits.push_back(std::move(split));
        }
        return out;
    }

    // For tests: instance count and levels.
    std::size_t instance_count() const { return insts_.size(); }
    int instance_level(std::size_t i) const { return insts_[i].level; }
    const LowDiamDecomp& instance(std::size_t i) const { return *insts_[i].dec; }

private:
    static constexpr int UNEXCLUDED = 1 << 30;

    struct Inst {
        int level;
        std::unique_ptr<LowDiamDecomp> dec;
    };

    void touch(u32 v) {
        if (!touched_mark_[v]) {
            touched_mark_[v] = 1;
            touched_.push_back(v);
        }
    }

    bool find_leaf_owner(u64 leaf, std::size_t& idx_out, u64& sid_out) const {
        auto it = leaves_.find(leaf);
        if (it == leaves_.end() || it->second.empty()) return false;
        u32 v = it->second.front();
        int best_level = -1;
        for (u32 idx : chain_[v]) {
            const auto& inst = insts_[idx];
            if (inst.level <= best_level) continue;
            i64 sid = inst.dec->set_of(v);
            if (sid < 0) continue;
            const auto& fam = inst.dec->family().at(static_cast<u64>(sid));
            if (fam.size() == it->second.size()) {
                best_level = inst.level;
                idx_out = idx;
                sid_out = static_cast<u64>(sid);
            }
        }
        return best_level >= 0;
    }

    int level_of_size(std::size_t sz) const {
        int i = 0;
        while (i < L_ && (static_cast<u64>(sz) << (i + 1)) <= n_) ++i;
        return i;
    }

    // Records v as a level-lvl separator vertex: excludes its incident
    // edges at that level and queues deliveries to deeper instances.
    void record_sep(int lvl, u32 v) {
        if (vertex_sep_level_[v] != -1) return;
        vertex_sep_level_[v] = lvl;
        sep_levels_[static_cast<std::size_t>(lvl)].push_back(v);
        new_sep_buf_.push_back({lvl, v});
        touch(v);
        auto handle = [&](u32 e) {
            if (!g_->alive(e)) return;
            if (excl_level_[e] <= lvl) return;
            excl_level_[e] = lvl;
            leaf_excluded_[e] = 1;
            const GraphEdge& ed = g_->edge(e);
            touch(ed.from);
            touch(ed.to);
            for (u32 idx : chain_[ed.from]) {
                if (insts_[idx].level > lvl && insts_[idx].dec->covers(ed.to)) {
                    pending_[static_cast<std::size_t>(insts_[idx].level)].push_back({idx, e});
                }
            }
        };
        for (u32 e : g_->out_edges(v)) handle(e);
        for (u32 e : g_->in_edges(v)) handle(e);
    }

    void dissolve_at(int lvl, const std::vector<u32>& verts) {
        for (u32 v : verts) record_sep(lvl, v);
    }

    void spawn_or_dissolve(const std::vector<u32>& verts, int parent_level) {
        int lv = level_of_size(verts.size());
        if (lv <= parent_level) return;  // created by a same-level split
        if (lv >= L_) {
            dissolve_at(L_, verts);
            return;
        }
        std::vector<u32> ungov;
        for (u32 v : verts) {
            if (!governed_[static_cast<std::size_t>(lv)][v]) ungov.push_back(v);
        }
        if (ungov.empty()) return;
        DecompParams sp = p_;
        bool feasible = true;
        double lgc = ungov.size() > 1 ? lg(static_cast<double>(ungov.size())) : 0.0;
        if (mode_ == DecompMode::Adaptive) {
            sp.d1 = ((p_.d1 >> lv) / p_.omega) * p_.omega;
            sp.d2 = ((p_.d2 >> lv) / p_.omega) * p_.omega;
            if (sp.d1 < 1 || sp.d1 >= sp.d2 ||
                static_cast<double>(sp.d2 - sp.d1) < 2.0 * p_.omega * lgc) {
                feasible = false;
            }
        } else {
            sp.d = ((p_.d >> lv) / p_.omega) * p_.omega;
            if (sp.d < 1) feasible = false;
        }
        if (!feasible) {
            dissolve_at(lv, ungov);
            return;
        }
        for (u32 v : ungov) governed_[static_cast<std::size_t>(lv)][v] = 1;
        std::vector<char> pre(g_->edge_count(), 0);
        for (u32 e = 0; e < g_->edge_count(); ++e) pre[e] = (excl_level_[e] <= lv);
        auto dec = std::make_unique<LowDiamDecomp>(*g_, ungov, mode_, sp, rng_.split(), &pre);
        u32 idx = static_cast<u32>(insts_.size());
        insts_.push_back(Inst{lv, std::move(dec)});
        for (u32 v : ungov) chain_[v].push_back(idx);
        for (u32 s : insts_[idx].dec->separator()) record_sep(lv, s);
        // The initial family sets are freshly generated SCCs of G_lv.
        std::vector<std::vector<u32>> fam;
        for (const auto& [id, vs] : insts_[idx].dec->family()) {
            (void)id;
            fam.push_back(vs);
        }
        for (const auto& vs : fam) spawn_or_dissolve(vs, lv);
    }

    void drain() {
        for (int lvl = 0; lvl <= L_; ++lvl) {
            auto& q = pending_[static_cast<std::size_t>(lvl)];
            while (!q.empty()) {
                auto [idx, e] = q.front();
                q.pop_front();
                DecompEvent ev = insts_[idx].dec->erase_edge(e);
                for (u32 s : ev.new_separator) record_sep(insts_[idx].level, s);
                if (ev.split) {
                    int pl = level_of_size(ev.old_size);
                    for (u64 pid : ev.pieces) {
                        spawn_or_dissolve(insts_[idx].dec->family().at(pid), pl);
                    }
                }
            }
        }
    }

    const DecrementalGraph* g_;
    DecompMode mode_;
    DecompParams p_;
    Rng rng_;
    u32 n_ = 0;
    int L_ = 0;
    std::vector<std::vector<u32>> sep_levels_;
    std::vector<int> vertex_sep_level_;
    std::vector<int> excl_level_;
    std::vector<char> leaf_excluded_;
    std::vector<std::vector<char>> governed_;
    std::vector<Inst> insts_;
    std::vector<std::vector<u32>> chain_;
    std::vector<std::deque<std::pair<u32, u32>>> pending_;
    std::vector<std::pair<int, u32>> new_sep_buf_;
    std::vector<u32> touched_;
    std::vector<char> touched_mark_;
    u64 next_leaf_ = 1;
    std::map<u64, std::vector<u32>> leaves_;
    std::vector<i64> leaf_of_;
};

}  // namespace dsssp
