// Command-line harness: generate instances, replay deletion scripts,
// verify against the exact oracle, and benchmark with operation
// counters. All outputs are machine-diffable (JSON lines / CSV) and
// deterministic under fixed seeds.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dsssp/sssp.hpp"

using namespace dsssp;
using nlohmann::json;

namespace {

Variant parse_variant(const std::string& s) {
    if (s == "adaptive") return Variant::Adaptive;
    if (s == "dense") return Variant::Dense;
    if (s == "sparse") return Variant::Sparse;
    if (s == "exact") return Variant::Exact;
    throw CLI::ValidationError("--variant", "must be adaptive|dense|sparse|exact");
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw CLI::ValidationError("--out", "cannot open " + path);
    return file;
}

// Graph file: first line "n m", then m lines "u v w" (0-indexed).
DecrementalGraph read_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--graph", "cannot open " + path);
    u32 n = 0;
    std::size_t m = 0;
    in >> n >> m;
    std::vector<std::tuple<u32, u32, i64>> edges;
    edges.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        u32 u, v;
        i64 w;
        if (!(in >> u >> v >> w)) throw CLI::ValidationError("--graph", "truncated file");
        edges.emplace_back(u, v, w);
    }
    return DecrementalGraph::load(n, edges);
}

struct ScriptLine {
    char op;  // 'd' delete edge id, 'q' query vertex, 'p' path query
    u32 arg;
};

std::vector<ScriptLine> read_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--script", "cannot open " + path);
    std::vector<ScriptLine> lines;
    std::string op;
    u32 arg;
    while (in >> op >> arg) {
        if (op != "d" && op != "q" && op != "p") {
            throw CLI::ValidationError("--script", "bad op: " + op);
        }
        lines.push_back({op[0], arg});
    }
    return lines;
}

int cmd_generate(const std::string& family, u32 n, u32 m, i64 wmax, u64 seed,
                 const std::string& graph_out, const std::string& script_out,
                 u32 query_stride) {
    Rng rng(seed);
    auto edges = generate_family_edges(rng, family, n, m, wmax);
    {
        std::ofstream out(graph_out);
        if (!out) throw CLI::ValidationError("--out", "cannot open " + graph_out);
        out << n << " " << edges.size() << "\n";
        for (auto& [u, v, w] : edges) out << u << " " << v << " " << w << "\n";
    }
    if (!script_out.empty()) {
        DecrementalGraph g = DecrementalGraph::load(n, edges);
        std::vector<u32> order(g.edge_count());
        std::iota(order.begin(), order.end(), 0u);
        std::shuffle(order.begin(), order.end(), rng.engine());
        std::ofstream out(script_out);
        if (!out) throw CLI::ValidationError("--script-out", "cannot open " + script_out);
        u32 step = 0;
        for (u32 e : order) {
            out << "d " << e << "\n";
            if (query_stride > 0 && ++step % query_stride == 0) {
                for (u32 v = 0; v < n; v += std::max<u32>(1, n / 8)) out << "q " << v << "\n";
            }
        }
    }
    // SCC statistics of the generated instance, for the record.
    DecrementalGraph g = DecrementalGraph::load(n, edges);
    auto sccs = strongly_connected_components(GraphView::whole(g));
    std::size_t largest = 0, nontrivial = 0;
    for (auto& c : sccs) {
        largest = std::max(largest, c.size());
        nontrivial += c.size() > 1;
    }
    json j;
    j["schema"] = "generate-v1";
    j["n"] = n;
    j["m"] = edges.size();
    j["family"] = family;
    j["seed"] = seed;
    j["scc_count"] = sccs.size();
    j["scc_nontrivial"] = nontrivial;
    j["scc_largest"] = largest;
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_run(const std::string& graph_path, const std::string& script_path,
            const std::string& variant_s, double eps, const std::string& preset, u64 seed,
            const std::string& out_path) {
    DecrementalGraph g = read_graph(graph_path);
    std::vector<ScriptLine> script = read_script(script_path);
    Variant variant = parse_variant(variant_s);
    bool conservative = preset != "paper";
    i64 wmax = 1;
    for (u32 e = 0; e < g.edge_count(); ++e) wmax = std::max(wmax, g.edge(e).weight);
    CombinedEstimator est(g, 0, variant, eps, Rng(seed), conservative, nullptr,
                          static_cast<i64>(g.vertex_count()) * wmax);

    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    u64 step = 0;
    for (const ScriptLine& ln : script) {
        json j;
        j["schema"] = "run-v1";
        j["step"] = step;
        if (ln.op == 'd') {
            if (ln.arg >= g.edge_count() || !g.alive(ln.arg)) {
                throw CLI::ValidationError("--script", "bad delete id " + std::to_string(ln.arg));
            }
            g.delete_edge(ln.arg);
            est.on_delete(ln.arg);
            ++step;
            continue;
        }
        j["vertex"] = ln.arg;
        i64 q = est.query(ln.arg);
        if (q >= INF_DIST) {
            j["estimate"] = nullptr;
        } else {
            j["estimate"] = q;
        }
        if (ln.op == 'p') {
            json jp = nullptr;
            for (std::size_t si = 0; si < est.scale_count(); ++si) {
                const Band* b = est.scale_band(si);
                if (!b || b->query(ln.arg) >= INF_DIST) continue;
                std::vector<u32> path = b->report_path(ln.arg);
                if (!path.empty()) {
                    jp = path;
                    break;
                }
            }
            j["path"] = jp;
        }
        out << j.dump() << "\n";
    }
    // Final counter record.
    u64 splits = 0, repart = 0, classic_scans = 0;
    for (std::size_t si = 0; si < est.scale_count(); ++si) {
        if (const Band* b = est.scale_band(si)) {
            splits += b->counters().splits;
            repart += b->hierarchy().repartition_count();
        } else if (const SparseBand* sb = est.scale_sparse(si)) {
            splits += sb->counters().splits;
            repart += sb->hierarchy().repartition_count();
        } else if (const ClassicScale* c = est.scale_classic(si)) {
            classic_scans += c->total_scans();
        }
    }
    json j;
    j["schema"] = "run-counters-v1";
    j["deletions"] = step;
    j["splits"] = splits;
    j["repartitions"] = repart;
    j["classic_scans"] = classic_scans;
    out << j.dump() << "\n";
    return 0;
}

int cmd_verify(TrialConfig cfg, u32 trials, u64 seed, const std::string& out_path) {
    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    u64 lb = 0, ub = 0, exact_v = 0, path_v = 0;
    for (u32 t = 0; t < trials; ++t) {
        TrialReport rep = run_trial(cfg, seed + t);
        out << rep.to_json_line() << "\n";
        lb += rep.lb_violations;
        ub += rep.ub_violations;
        exact_v += rep.exact_violations;
        path_v += rep.path_violations;
    }
    // Monte Carlo variants get a failure budget of trials/n upper-bound
    // misses; everything else is a hard zero.
    u64 ub_budget =
        cfg.variant == Variant::Sparse ? std::max<u64>(1, trials / std::max<u32>(1, cfg.n)) : 0;
    bool ok = lb == 0 && exact_v == 0 && path_v == 0 && ub <= ub_budget;
    json j;
    j["schema"] = "verify-v1";
    j["trials"] = trials;
    j["lb_violations"] = lb;
    j["ub_violations"] = ub;
    j["ub_budget"] = ub_budget;
    j["exact_violations"] = exact_v;
    j["path_violations"] = path_v;
    j["pass"] = ok;
    out << j.dump() << "\n";
    return ok ? 0 : 1;
}

int cmd_bench(const std::vector<u32>& ns, const std::vector<u32>& ms,
              const std::string& variant_s, double eps, u32 trials, u64 seed,
              const std::string& out_path, bool desk_bands) {
    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    out << "schema,variant,n,m,epsilon,seed,deletions,splits,repartitions,drain_scans,"
           "drain_increases,classic_scans,worst_ratio\n";
    for (std::size_t i = 0; i < ns.size(); ++i) {
        u32 n = ns[i];
        u32 m = i < ms.size() ? ms[i] : 4 * n;
        for (u32 t = 0; t < trials; ++t) {
            TrialConfig cfg;
            cfg.n = n;
            cfg.m = m;
            cfg.variant = parse_variant(variant_s);
            cfg.epsilon = eps;
            cfg.desk_bands = desk_bands;
            TrialReport rep = run_trial(cfg, seed + t);
            out << "bench-v1," << variant_s << "," << n << "," << m << "," << eps << ","
                << seed + t << "," << rep.counters.at("deletions") << ","
                << rep.counters.at("splits") << "," << rep.counters.at("repartitions") << ","
                << rep.counters.at("drain_scans") << "," << rep.counters.at("drain_increases")
                << "," << rep.counters.at("classic_scans") << "," << rep.worst_ratio << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decremental approximate SSSP harness"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "generate a graph and deletion script");
    std::string g_family = "er", g_out = "graph.txt", g_script;
    u32 g_n = 100, g_m = 400, g_stride = 0;
    i64 g_wmax = 1;
    u64 g_seed = 1;
    gen->add_option("--family", g_family, "er|layered|gadget");
    gen->add_option("--n", g_n, "vertex count");
    gen->add_option("--m", g_m, "edge count");
    gen->add_option("--wmax", g_wmax, "max edge weight");
    gen->add_option("--seed", g_seed, "seed");
    gen->add_option("--out", g_out, "graph output path");
    gen->add_option("--script-out", g_script, "deletion script output path");
    gen->add_option("--query-stride", g_stride, "emit queries every k deletions");

    // run
    auto* run = app.add_subcommand("run", "replay a script over one structure");
    std::string r_graph, r_script, r_variant = "adaptive", r_preset = "conservative", r_out;
    double r_eps = 0.5;
    u64 r_seed = 1;
    run->add_option("--graph", r_graph, "graph path")->required();
    run->add_option("--script", r_script, "script path")->required();
    run->add_option("--variant", r_variant, "adaptive|dense|sparse|exact");
    run->add_option("--epsilon", r_eps, "approximation parameter");
    run->add_option("--preset", r_preset, "conservative|paper");
    run->add_option("--seed", r_seed, "seed");
    run->add_option("--out", r_out, "output path (default stdout)");

    // verify
    auto* ver = app.add_subcommand("verify", "run seeded trials against the oracle");
    std::string v_variant = "adaptive", v_preset = "conservative", v_policy = "oblivious-random";
    std::string v_family = "er", v_out;
    u32 v_n = 40, v_m = 160, v_trials = 20, v_stride = 5;
    double v_eps = 0.5;
    u64 v_seed = 1;
    i64 v_wmax = 1;
    bool v_paths = false, v_desk = false;
    ver->add_option("--n", v_n, "vertex count");
    ver->add_option("--m", v_m, "edge count");
    ver->add_option("--wmax", v_wmax, "max edge weight");
    ver->add_option("--family", v_family, "er|layered|gadget");
    ver->add_option("--variant", v_variant, "adaptive|dense|sparse|exact");
    ver->add_option("--epsilon", v_eps, "approximation parameter");
    ver->add_option("--preset", v_preset, "conservative|paper");
    ver->add_option("--policy", v_policy, "deletion policy");
    ver->add_option("--trials", v_trials, "number of trials");
    ver->add_option("--seed", v_seed, "base seed");
    ver->add_option("--query-stride", v_stride, "query every k deletions");
    ver->add_flag("--paths", v_paths, "validate reported paths");
    ver->add_flag("--desk-bands", v_desk, "force small-scale band parameters");
    ver->add_option("--out", v_out, "output path (default stdout)");

    // bench
    auto* ben = app.add_subcommand("bench", "counter tables over a size sweep");
    std::vector<u32> b_ns{50, 100}, b_ms;
    std::string b_variant = "adaptive", b_out;
    double b_eps = 0.5;
    u32 b_trials = 3;
    u64 b_seed = 1;
    bool b_desk = false;
    ben->add_option("--n", b_ns, "vertex counts");
    ben->add_option("--m", b_ms, "edge counts (default 4n)");
    ben->add_option("--variant", b_variant, "adaptive|dense|sparse|exact");
    ben->add_option("--epsilon", b_eps, "approximation parameter");
    ben->add_option("--trials", b_trials, "trials per size");
    ben->add_option("--seed", b_seed, "base seed");
    ben->add_flag("--desk-bands", b_desk, "force small-scale band parameters");
    ben->add_option("--out", b_out, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            return cmd_generate(g_family, g_n, g_m, g_wmax, g_seed, g_out, g_script, g_stride);
        }
        if (run->parsed()) {
            return cmd_run(r_graph, r_script, r_variant, r_eps, r_preset, r_seed, r_out);
        }
        if (ver->parsed()) {
            TrialConfig cfg;
            cfg.n = v_n;
            cfg.m = v_m;
            cfg.wmax = v_wmax;
            cfg.family = v_family;
            cfg.variant = parse_variant(v_variant);
            cfg.epsilon = v_eps;
            cfg.conservative = v_preset != "paper";
            cfg.policy = policy_from_name(v_policy);
            cfg.query_stride = v_stride;
            cfg.check_paths = v_paths;
            cfg.desk_bands = v_desk;
            return cmd_verify(cfg, v_trials, v_seed, v_out);
        }
        if (ben->parsed()) {
            return cmd_bench(b_ns, b_ms, b_variant, b_eps, b_trials, b_seed, b_out, b_desk);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
