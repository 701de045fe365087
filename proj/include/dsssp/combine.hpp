#pragma once

#include <limits>
#include <memory>
#include <set>
#include <vector>

#include "band.hpp"
#include "sparse.hpp"

namespace dsssp {

// Full-range estimator: one structure per distance scale D = 1, 2, 4, ...
// (classic exact tree wherever the scale parameters fall back), combined
// by a per-vertex minimum over the scales. Frozen / beyond-threshold
// scale answers count as infinite.
class CombinedEstimator {
public:
    CombinedEstimator(const DecrementalGraph& g, u32 source, Variant variant, double eps,
                      Rng rng, bool conservative = true,
                      const std::vector<ParamSet>* explicit_params = nullptr,
                      i64 max_distance = 0)
        : n_(g.vertex_count()), variant_(variant) {
        if (max_distance <= 0) max_distance = std::max<i64>(2, n_);
        u64 m = std::max<u64>(1, g.alive_edge_count());
        i64 top = i64{1} << ceil_log2(static_cast<u64>(std::max<i64>(max_distance, 2)));
        std::size_t idx = 0;
        for (i64 D = 1;; D *= 2, ++idx) {
            Scale sc;
            if (explicit_params && idx < explicit_params->size()) {
                sc.ps = (*explicit_params)[idx];
            } else if (variant == Variant::Exact) {
                sc.ps.variant = Variant::Exact;
                sc.ps.epsilon = eps;
                sc.ps.D = D;
                sc.ps.fallback = true;
                sc.ps.fallback_reason = "exact variant";
            } else {
                sc.ps = select_parameters(variant, n_, m, eps, D, conservative);
                if (sc.ps.fallback && sc.ps.dense_substitute) {
                    ParamSet alt = select_parameters(Variant::Dense, n_, m, eps, D,
                                                     conservative);
                    if (!alt.fallback) sc.ps = alt;
                }
            }
            if (!sc.ps.fallback) {
                try {
                    if (sc.ps.variant == Variant::Sparse) {
                        sc.sparse = std::make_unique<SparseBand>(g, source, sc.ps, rng.split());
                    } else {
                        sc.band = std::make_unique<Band>(g, source, sc.ps, rng.split());
                    }
                } catch (const ContractError&) {
                    sc.band.reset();
                    sc.sparse.reset();
                    sc.ps.fallback = true;
                    sc.ps.fallback_reason = "scale construction infeasible";
                }
            }
            if (sc.ps.fallback) sc.classic = std::make_unique<ClassicScale>(g, source, D);
            scales_.push_back(std::move(sc));
            if (D >= top) break;
        }
        est_.assign(scales_.size(), std::vector<i64>(n_, INF_DIST));
        combined_.assign(n_, INF_DIST);
        for (std::size_t si = 0; si < scales_.size(); ++si) {
            for (u32 v = 0; v < n_; ++v) {
                est_[si][v] = raw_query(si, v);
                combined_[v] = std::min(combined_[v], est_[si][v]);
            }
        }
    }

    i64 query(u32 u) const { return combined_.at(u); }

    void on_delete(u32 e) {
        std::set<u32> dirty;
        for (std::size_t si = 0; si < scales_.size(); ++si) {
            Scale& sc = scales_[si];
            std::vector<u32> changed;
            if (sc.classic) {
                sc.classic->on_delete(e);
                changed.resize(n_);
                for (u32 v = 0; v < n_; ++v) changed[v] = v;
            } else if (sc.band) {
                changed = sc.band->on_delete(e);
            } else {
                changed = sc.sparse->on_delete(e);
            }
            for (u32 v : changed) {
                i64 nv = raw_query(si, v);
                if (nv != est_[si][v]) {
                    est_[si][v] = nv;
                    dirty.insert(v);
                }
            }
        }
        for (u32 v : dirty) {
            i64 best = INF_DIST;
            for (std::size_t si = 0; si < scales_.size(); ++si) {
                best = std::min(best, est_[si][v]);
            }
            combined_[v] = best;
        }
    }

    std::size_t scale_count() const { return scales_.size(); }
    const ParamSet& scale_params(std::size_t i) const { return scales_.at(i).ps; }
    bool scale_is_fallback(std::size_t i) const { return scales_.at(i).classic != nullptr; }
    i64 scale_estimate(std::size_t i, u32 v) const { return est_.at(i).at(v); }
    const Band* scale_band(std::size_t i) const { return scales_.at(i).band.get(); }
    const ClassicScale* scale_classic(std::size_t i) const { return scales_.at(i).classic.get(); }
    const SparseBand* scale_sparse(std::size_t i) const { return scales_.at(i).sparse.get(); }

private:
    struct Scale {
        ParamSet ps;
        std::unique_ptr<Band> band;
        std::unique_ptr<SparseBand> sparse;
        std::unique_ptr<ClassicScale> classic;
    };

    i64 raw_query(std::size_t si, u32 v) const {
        const Scale& sc = scales_[si];
        if (sc.classic) return sc.classic->query(v);
        if (sc.band) return sc.band->query(v);
        return sc.sparse->query(v);
    }

    u32 n_;
    Variant variant_;
    std::vector<Scale> scales_;
    std::vector<std::vector<i64>> est_;
    std::vector<i64> combined_;
};

// Weighted estimator: for each outer scale D' = 1, 2, 4, ... the weight
// range is reduced (heavy edges removed, light weights raised and
// rescaled), and an inner ladder of reduced scales runs over the reduced
// graph — always a classic exact tree, plus a weighted band where the
// desk parameters are feasible. Unreducing each outer minimum and taking
// the overall minimum preserves the lower bound at every scale, because
// reduction only lengthens paths.
class WeightedEstimator {
public:
    static constexpr double INF = std::numeric_limits<double>::infinity();

    WeightedEstimator(const DecrementalGraph& g, u32 source, Variant variant, double eps,
                      Rng rng, bool enable_bands = true)
        : n_(g.vertex_count()), eps_(eps) {
        Variant var2 = variant == Variant::Adaptive ? Variant::Adaptive : Variant::Dense;
        i64 wmax = 1;
        for (u32 e = 0; e < g.edge_count(); ++e) {
            if (g.alive(e)) wmax = std::max(wmax, g.edge(e).weight);
        }
        u64 span = static_cast<u64>(std::max<u32>(n_, 2)) * static_cast<u64>(wmax);
        i64 top_outer = i64{1} << ceil_log2(span);
        for (i64 Dp = 1;; Dp *= 2) {
            Outer out;
            out.Dp = Dp;
            auto [rg, red, idmap] = reduce_weight_range(g, Dp, eps);
            out.red = red;
            out.idmap = std::move(idmap);
            out.rg = std::move(rg);
            u64 m_r = out.rg.alive_edge_count();
            i64 top_inner = i64{1} << ceil_log2(static_cast<u64>(std::max<i64>(red.d_max, 2)));
            double r_lo = static_cast<double>(Dp) / red.scale_factor / (1.0 + eps);
            for (i64 D = 1;; D *= 2) {
                Inner in;
                in.D = D;
                in.classic = std::make_unique<ClassicScale>(out.rg, source, D);
                if (enable_bands && variant != Variant::Exact && m_r >= 1 &&
                    static_cast<double>(D) >= std::max(16.0, r_lo / 2.0)) {
                    i64 omega = weighted_omega(var2, n_, m_r, eps, D, 0);
                    DeskParams dpk = desk_parameters(var2, n_, m_r, eps, D, omega);
                    dpk.ps.omega = omega;
                    try {
                        in.band = std::make_unique<Band>(out.rg, source, dpk.ps, rng.split());
                    } catch (const ContractError&) {
                        in.band.reset();
                    }
                }
                out.inners.push_back(std::move(in));
                if (D >= top_inner) break;
            }
            out.best.assign(n_, INF_DIST);
            for (u32 v = 0; v < n_; ++v) out.best[v] = inner_min(out, v);
            outers_.push_back(std::move(out));
            if (Dp >= top_outer) break;
        }
    }

    void on_delete(u32 e) {
        for (Outer& out : outers_) {
            int ie = out.idmap.at(e);
            if (ie < 0) continue;
            std::set<u32> dirty;
            for (Inner& in : out.inners) {
                in.classic->on_delete(static_cast<u32>(ie));
                if (in.band) {
                    for (u32 v : in.band->on_delete(static_cast<u32>(ie))) dirty.insert(v);
                }
            }
            // The classic trees report no change lists; refresh everyone.
            for (u32 v = 0; v < n_; ++v) out.best[v] = inner_min(out, v);
            (void)dirty;
        }
    }

    double query(u32 u) const {
        double best = INF;
        for (const Outer& out : outers_) {
            i64 b = out.best.at(u);
            if (b >= INF_DIST) continue;
            best = std::min(best, out.red.unreduce(b));
        }
        return best;
    }

    std::size_t outer_count() const { return outers_.size(); }
    i64 outer_scale(std::size_t i) const { return outers_.at(i).Dp; }
    const ScaleReduction& outer_reduction(std::size_t i) const { return outers_.at(i).red; }
    std::size_t band_count() const {
        std::size_t c = 0;
        for (const Outer& out : outers_) {
            for (const Inner& in : out.inners) c += in.band != nullptr;
        }
        return c;
    }
    // Unreduced estimate of one outer scale (INF when that scale is blind).
    double outer_query(std::size_t i, u32 u) const {
        i64 b = outers_.at(i).best.at(u);
        return b >= INF_DIST ? INF : outers_.at(i).red.unreduce(b);
    }

private:
    struct Inner {
        i64 D = 1;
        std::unique_ptr<Band> band;
        std::unique_ptr<ClassicScale> classic;
    };
    struct Outer {
        i64 Dp = 1;
        ScaleReduction red;
        std::vector<int> idmap;
        DecrementalGraph rg;
        std::vector<Inner> inners;
        std::vector<i64> best;
    };

    static i64 inner_min(const Outer& out, u32 v) {
        i64 best = INF_DIST;
        for (const Inner& in : out.inners) {
            best = std::min(best, in.classic->query(v));
            if (in.band) best = std::min(best, in.band->query(v));
        }
        return best;
    }

    u32 n_;
    double eps_;
    std::vector<Outer> outers_;
};

}  // namespace dsssp
