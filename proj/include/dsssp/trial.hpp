#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "combine.hpp"
#include "oracle.hpp"

namespace dsssp {

// Deletion policies driving a trial. Oblivious policies never look at
// answers; adaptive policies see exactly the answers returned to their
// own queries (never structure internals, never timing).
enum class PolicyKind {
    ObliviousRandom,
    ObliviousScripted,
    AdaptiveGreedy,
    AdaptiveRootHunter,
};

inline const char* policy_name(PolicyKind k) {
    switch (k) {
        case PolicyKind::ObliviousRandom: return "oblivious-random";
        case PolicyKind::ObliviousScripted: return "oblivious-scripted";
        case PolicyKind::AdaptiveGreedy: return "adaptive-greedy";
        case PolicyKind::AdaptiveRootHunter: return "adaptive-root-hunter";
    }
    return "?";
}

inline PolicyKind policy_from_name(const std::string& s) {
    if (s == "oblivious-random") return PolicyKind::ObliviousRandom;
    if (s == "oblivious-scripted") return PolicyKind::ObliviousScripted;
    if (s == "adaptive-greedy") return PolicyKind::AdaptiveGreedy;
    if (s == "adaptive-root-hunter") return PolicyKind::AdaptiveRootHunter;
    throw ContractError("unknown policy: " + s);
}

// One adversary instance. observe() feeds it the answers of the latest
// query round; next_deletion() picks an alive edge (or NO_EDGE). The
// oblivious kinds ignore observe() entirely; the interaction log records
// how much each side of the channel was used.
class AdversaryPolicy {
public:
    static constexpr u32 NO_EDGE = 0xffffffffu;

    AdversaryPolicy(PolicyKind kind, Rng rng) : kind_(kind), rng_(rng) {}

    static AdversaryPolicy scripted(std::vector<u32> script, Rng rng) {
        AdversaryPolicy p(PolicyKind::ObliviousScripted, rng);
        p.script_ = std::move(script);
        return p;
    }

    PolicyKind kind() const { return kind_; }
    bool reads_answers() const {
        return kind_ == PolicyKind::AdaptiveGreedy || kind_ == PolicyKind::AdaptiveRootHunter;
    }
    u64 answers_seen() const { return answers_seen_; }
    u64 deletions_chosen() const { return deletions_chosen_; }

    // Latest per-vertex answers. A no-op for oblivious kinds: they never
    // read the channel, which is the whole point of the model split.
    void observe(const std::vector<i64>& answers) {
        if (!reads_answers()) return;
        prev_ = last_;
        last_ = answers;
        answers_seen_ += answers.size();
    }

    u32 next_deletion(const DecrementalGraph& g) {
        u32 e = choose(g);
        if (e != NO_EDGE) ++deletions_chosen_;
        return e;
    }

private:
    u32 choose(const DecrementalGraph& g) {
        switch (kind_) {
            case PolicyKind::ObliviousScripted:
                while (sp_ < script_.size()) {
                    u32 e = script_[sp_++];
                    if (e < g.edge_count() && g.alive(e)) return e;
                }
                return NO_EDGE;
            case PolicyKind::ObliviousRandom:
                return random_alive(g);
            case PolicyKind::AdaptiveGreedy: {
                // Attack the nearest answered vertex: cutting its last
                // incoming edges forces the structure to reroute or give
                // up the closest part of the tree first.
                u32 target = NO_EDGE;
                i64 best = INF_DIST;
                for (u32 v = 0; v < last_.size(); ++v) {
                    if (last_[v] > 0 && last_[v] < best) {
                        best = last_[v];
                        target = v;
                    }
                }
                if (target == NO_EDGE) return random_alive(g);
                u32 e = incident_alive(g, target, true);
                if (e == NO_EDGE) e = incident_alive(g, target, false);
                return e == NO_EDGE ? random_alive(g) : e;
            }
            case PolicyKind::AdaptiveRootHunter: {
                // Vertices whose answers move the most betray proximity
                // to internal re-rooting; keep deleting around them.
                u32 target = NO_EDGE;
                i64 churn = -1;
                for (u32 v = 0; v < last_.size() && v < prev_.size(); ++v) {
                    i64 a = std::min(last_[v], INF_DIST);
                    i64 b = std::min(prev_[v], INF_DIST);
                    i64 c = a > b ? a - b : b - a;
                    if (c > churn) {
                        churn = c;
                        target = v;
                    }
                }
                if (target == NO_EDGE || churn <= 0) return random_alive(g);
                u32 e = incident_alive(g, target, true);
                if (e == NO_EDGE) e = incident_alive(g, target, false);
                return e == NO_EDGE ? random_alive(g) : e;
            }
        }
        return NO_EDGE;
    }

    u32 random_alive(const DecrementalGraph& g) {
        if (g.alive_edge_count() == 0) return NO_EDGE;
        std::vector<u32> alive;
        alive.reserve(g.alive_edge_count());
        for (u32 e = 0; e < g.edge_count(); ++e) {
            if (g.alive(e)) alive.push_back(e);
        }
        return alive[rng_.next_below(alive.size())];
    }

    u32 incident_alive(const DecrementalGraph& g, u32 v, bool incoming) {
        const auto& ids = incoming ? g.in_edges(v) : g.out_edges(v);
        std::vector<u32> cand;
        for (u32 e : ids) {
            if (g.alive(e)) cand.push_back(e);
        }
        if (cand.empty()) return NO_EDGE;
        return cand[rng_.next_below(cand.size())];
    }

    PolicyKind kind_;
    Rng rng_;
    std::vector<u32> script_;
    std::size_t sp_ = 0;
    std::vector<i64> last_;
    std::vector<i64> prev_;
    u64 answers_seen_ = 0;
    u64 deletions_chosen_ = 0;
};

// Random digraph families shared by trials and the CLI generator.
// "er": uniform distinct ordered pairs. "layered": a layered DAG with a
// sprinkle of back edges (long distances, some cycles). "gadget": a
// chain of small directed cycles with forward chords (SCC-rich).
inline std::vector<std::tuple<u32, u32, i64>> generate_family_edges(
    Rng& rng, const std::string& family, u32 n, u32 m, i64 wmax = 1) {
    if (n < 2) throw ContractError("generate_family_edges: n < 2");
    auto w = [&]() -> i64 {
        return wmax <= 1 ? 1 : 1 + static_cast<i64>(rng.next_below(static_cast<u64>(wmax)));
    };
    std::vector<std::tuple<u32, u32, i64>> edges;
    std::set<std::pair<u32, u32>> seen;
    auto add = [&](u32 u, u32 v) {
        if (u == v || !seen.insert({u, v}).second) return false;
        edges.emplace_back(u, v, w());
        return true;
    };
    if (family == "er") {
        u64 attempts = 0, cap = 50ull * m + 1000;
        while (edges.size() < m && attempts++ < cap) {
            add(static_cast<u32>(rng.next_below(n)), static_cast<u32>(rng.next_below(n)));
        }
    } else if (family == "layered") {
        u32 layers = std::max<u32>(2, static_cast<u32>(std::sqrt(static_cast<double>(n))));
        u32 per = (n + layers - 1) / layers;
        auto layer_of = [&](u32 v) { return v / per; };
        // Spine so every layer is reachable.
        for (u32 v = 0; v + 1 < n; ++v) add(v, v + 1);
        u64 attempts = 0, cap = 50ull * m + 1000;
        while (edges.size() < m && attempts++ < cap) {
            u32 u = static_cast<u32>(rng.next_below(n));
            u32 v = static_cast<u32>(rng.next_below(n));
            u32 lu = layer_of(u), lv = layer_of(v);
            bool forward = lv == lu + 1;
            bool back = lv + 2 <= lu && rng.next_below(10) == 0;
            if (forward || back) add(u, v);
        }
    } else if (family == "gadget") {
        u32 csize = 8;
        u32 cycles = std::max<u32>(1, n / csize);
        for (u32 c = 0; c < cycles; ++c) {
            u32 lo = c * csize;
            u32 hi = std::min(n, lo + csize);
            if (hi - lo < 2) break;
            for (u32 v = lo; v < hi; ++v) {
                add(v, v + 1 == hi ? lo : v + 1);
            }
            if (hi < n) add(hi - 1, hi);
        }
        u64 attempts = 0, cap = 50ull * m + 1000;
        while (edges.size() < m && attempts++ < cap) {
            u32 u = static_cast<u32>(rng.next_below(n));
            u32 v = static_cast<u32>(rng.next_below(n));
            if (v > u) add(u, v);
        }
    } else if (family == "chords") {
        // Forward chain plus random chords in both directions: the back
        // chords weld long stretches of the chain into large SCCs whose
        // diameters move as chords die, which keeps the decomposition
        // hierarchy busy splitting and repartitioning.
        for (u32 v = 0; v + 1 < n; ++v) add(v, v + 1);
        u64 attempts = 0, cap = 50ull * m + 1000;
        while (edges.size() < m && attempts++ < cap) {
            add(static_cast<u32>(rng.next_below(n)), static_cast<u32>(rng.next_below(n)));
        }
    } else if (family == "necklace") {
        // Forward chain plus local back edges only: no forward shortcut
        // ever exists, so the distance from 0 to v stays v while the
        // chain survives and every distance scale up to n gets queried;
        // the back edges keep the SCC structure rich.
        for (u32 v = 0; v + 1 < n; ++v) add(v, v + 1);
        u64 attempts = 0, cap = 50ull * m + 1000;
        while (edges.size() < m && attempts++ < cap) {
            u32 u = 1 + static_cast<u32>(rng.next_below(n - 1));
            u32 span = 1 + static_cast<u32>(rng.next_below(std::min<u64>(u, 6)));
            add(u, u - span);
        }
    } else {
        throw ContractError("unknown graph family: " + family);
    }
    return edges;
}

// Everything one trial needs, round-trippable and hashable so reports
// can be tied back to the exact configuration that produced them.
struct TrialConfig {
    u32 n = 40;
    u32 m = 160;
    i64 wmax = 1;
    std::string family = "er";
    Variant variant = Variant::Adaptive;
    double epsilon = 0.5;
    bool conservative = true;
    PolicyKind policy = PolicyKind::ObliviousRandom;
    u32 steps = 0;         // 0 = run until no edge is left
    u32 query_stride = 5;  // query every vertex every this many deletions
    bool check_paths = false;
    // Replace the preset parameter ladder by small-scale structurally
    // valid parameters, so band machinery runs at test sizes where the
    // asymptotic presets honestly fall back.
    bool desk_bands = false;

    u64 config_hash() const {
        std::string s = std::to_string(n) + "|" + std::to_string(m) + "|" +
                        std::to_string(wmax) + "|" + family + "|" +
                        std::to_string(static_cast<int>(variant)) + "|" +
                        std::to_string(epsilon) + "|" + std::to_string(conservative) + "|" +
                        policy_name(policy) + "|" + std::to_string(steps) + "|" +
                        std::to_string(query_stride) + "|" + std::to_string(check_paths) + "|" +
                        std::to_string(desk_bands);
        u64 h = 1469598103934665603ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return h;
    }
};

struct TrialReport {
    u64 seed = 0;
    u64 config_hash = 0;
    u32 steps = 0;
    u64 queries = 0;
    u64 lb_violations = 0;
    u64 ub_checks = 0;
    u64 ub_violations = 0;
    u64 exact_violations = 0;  // fallback scales disagreeing with the oracle
    u64 path_checks = 0;
    u64 path_violations = 0;
    double worst_ratio = 1.0;
    std::map<std::string, u64> counters;

    u64 violations() const {
        return lb_violations + ub_violations + exact_violations + path_violations;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["schema"] = "trial-report-v1";
        j["seed"] = seed;
        j["config_hash"] = config_hash;
        j["steps"] = steps;
        j["queries"] = queries;
        j["lb_violations"] = lb_violations;
        j["ub_checks"] = ub_checks;
        j["ub_violations"] = ub_violations;
        j["exact_violations"] = exact_violations;
        j["path_checks"] = path_checks;
        j["path_violations"] = path_violations;
        j["worst_ratio"] = worst_ratio;
        j["counters"] = counters;
        return j;
    }

    std::string to_json_line() const { return to_json().dump(); }
};

namespace detail {

// A reported path must be a live walk source -> v no longer than the
// estimate it was reported against.
inline bool path_is_valid(const DecrementalGraph& g, u32 source, u32 v,
                          const std::vector<u32>& path, i64 estimate) {
    if (path.empty() || path.front() != source || path.back() != v) return false;
    i64 len = 0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        i64 best = INF_DIST;
        for (u32 e : g.out_edges(path[i])) {
            if (g.alive(e) && g.edge(e).to == path[i + 1]) {
                best = std::min(best, g.edge(e).weight);
            }
        }
        if (best >= INF_DIST) return false;
        len += best;
    }
    return len <= estimate;
}

}  // namespace detail

// Runs one seeded trial: generates the instance, interleaves policy
// deletions with estimator updates, and checks the lower bound at every
// query plus the per-scale upper bound whenever the exact distance is
// bracketed by a non-fallback scale. Fully deterministic in (cfg, seed).
inline TrialReport run_trial(const TrialConfig& cfg, u64 seed) {
    TrialReport rep;
    rep.seed = seed;
    rep.config_hash = cfg.config_hash();

    Rng root(seed);
    Rng gen = root.split();
    auto edges = generate_family_edges(gen, cfg.family, cfg.n, cfg.m, cfg.wmax);
    DecrementalGraph g = DecrementalGraph::load(cfg.n, edges);
    const u32 source = 0;

    i64 max_dist = static_cast<i64>(cfg.n) * std::max<i64>(1, cfg.wmax);
    std::vector<ParamSet> desk_ladder;
    const std::vector<ParamSet>* explicit_params = nullptr;
    if (cfg.desk_bands) {
        // Cover the largest query scale and the whole desk band range
        // [16, 4n]: the top bands carry the deepest hierarchies even
        // when no distance ever reaches them.
        i64 top = i64{1} << ceil_log2(static_cast<u64>(std::max<i64>(max_dist, 2)));
        top = std::max<i64>(
            top, i64{1} << ceil_log2(static_cast<u64>(4 * static_cast<i64>(cfg.n))));
        for (i64 D = 1;; D *= 2) {
            ParamSet ps;
            ps.variant = cfg.variant;
            ps.epsilon = cfg.epsilon;
            ps.D = D;
            ps.fallback = true;
            ps.fallback_reason = "scale outside desk band range";
            if (D >= 16 && D <= 4 * static_cast<i64>(cfg.n)) {
                try {
                    ps = desk_parameters(cfg.variant, cfg.n, std::max<u64>(1, cfg.m),
                                         cfg.epsilon, D).ps;
                } catch (const ContractError&) {
                }
            }
            desk_ladder.push_back(ps);
            if (D >= top) break;
        }
        explicit_params = &desk_ladder;
    }
    CombinedEstimator est(g, source, cfg.variant, cfg.epsilon, root.split(), cfg.conservative,
                          explicit_params, max_dist);
    ExactOracle oracle(g);

    AdversaryPolicy pol = [&]() {
        Rng prng = root.split();
        if (cfg.policy == PolicyKind::ObliviousScripted) {
            std::vector<u32> script(g.edge_count());
            std::iota(script.begin(), script.end(), 0u);
            std::shuffle(script.begin(), script.end(), prng.engine());
            return AdversaryPolicy::scripted(std::move(script), prng);
        }
        return AdversaryPolicy(cfg.policy, prng);
    }();

    double ub_bound = cfg.variant == Variant::Sparse
                          ? (1.0 + 2.0 * cfg.epsilon) * (1.0 + 2.0 * cfg.epsilon)
                          : 1.0 + cfg.epsilon;

    std::vector<i64> answers(cfg.n, INF_DIST);
    auto check_round = [&]() {
        std::vector<i64> exact = oracle.distances_from(source);
        for (u32 v = 0; v < cfg.n; ++v) {
            ++rep.queries;
            i64 comb = est.query(v);
            answers[v] = comb;
            if (comb < exact[v]) ++rep.lb_violations;
            if (exact[v] > 0 && exact[v] < INF_DIST && comb < INF_DIST) {
                double ratio = static_cast<double>(comb) / static_cast<double>(exact[v]);
                rep.worst_ratio = std::max(rep.worst_ratio, ratio);
            }
            for (std::size_t si = 0; si < est.scale_count(); ++si) {
                i64 D = est.scale_params(si).D;
                i64 es = est.scale_estimate(si, v);
                if (est.scale_is_fallback(si)) {
                    bool in_range = exact[v] <= 2 * D;
                    if (in_range ? es != exact[v] : es < INF_DIST) ++rep.exact_violations;
                } else if (exact[v] >= D && exact[v] < 2 * D) {
                    i64 add = est.scale_band(si) ? est.scale_band(si)->additive()
                                                 : est.scale_sparse(si)->additive();
                    // The ratio is only promised when the additive slack
                    // fits inside half the scale's epsilon budget, the
                    // same condition desk_parameters reports through
                    // ratio_guaranteed (the other half covers rounding).
                    bool guaranteed =
                        add <= static_cast<i64>(std::floor(
                                   est.scale_params(si).epsilon * static_cast<double>(D) /
                                   2.0));
                    if (guaranteed) {
                        ++rep.ub_checks;
                        if (static_cast<double>(es) >
                            ub_bound * static_cast<double>(exact[v]) + 1e-9) {
                            ++rep.ub_violations;
                        }
                    }
                }
            }
            if (cfg.check_paths && v != source && exact[v] < INF_DIST) {
                for (std::size_t si = 0; si < est.scale_count(); ++si) {
                    const Band* b = est.scale_band(si);
                    if (!b) continue;
                    i64 es = b->query(v);
                    if (es >= INF_DIST) continue;
                    ++rep.path_checks;
                    std::vector<u32> path = b->report_path(v);
                    if (!detail::path_is_valid(g, source, v, path, es)) ++rep.path_violations;
                }
            }
        }
        pol.observe(answers);
    };

    check_round();
    u32 budget = cfg.steps == 0 ? static_cast<u32>(g.alive_edge_count())
                                : std::min<u32>(cfg.steps, static_cast<u32>(g.alive_edge_count()));
    for (u32 step = 1; step <= budget; ++step) {
        u32 e = pol.next_deletion(g);
        if (e == AdversaryPolicy::NO_EDGE) break;
        g.delete_edge(e);
        est.on_delete(e);
        ++rep.steps;
        if (step % cfg.query_stride == 0 || step == budget) check_round();
    }

    u64 splits = 0, repart = 0, drain_scans = 0, drain_increases = 0, classic_scans = 0;
    u64 s_inserts = 0, s_deletes = 0, s_increases = 0;
    for (std::size_t si = 0; si < est.scale_count(); ++si) {
        if (const Band* b = est.scale_band(si)) {
            splits += b->counters().splits;
            drain_scans += b->counters().drain_scans;
            drain_increases += b->counters().drain_increases;
            repart += b->hierarchy().repartition_count();
        } else if (const SparseBand* sb = est.scale_sparse(si)) {
            splits += sb->counters().splits;
            s_inserts += sb->counters().s_inserts;
            s_deletes += sb->counters().s_deletes;
            s_increases += sb->counters().s_increases;
            repart += sb->hierarchy().repartition_count();
        } else if (const ClassicScale* c = est.scale_classic(si)) {
            classic_scans += c->total_scans();
        }
    }
    rep.counters["deletions"] = rep.steps;
    rep.counters["splits"] = splits;
    rep.counters["repartitions"] = repart;
    rep.counters["drain_scans"] = drain_scans;
    rep.counters["drain_increases"] = drain_increases;
    rep.counters["classic_scans"] = classic_scans;
    rep.counters["super_inserts"] = s_inserts;
    rep.counters["super_deletes"] = s_deletes;
    rep.counters["super_increases"] = s_increases;
    rep.counters["answers_seen"] = pol.answers_seen();
    return rep;
}

}  // namespace dsssp
