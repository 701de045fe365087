#include <catch2/catch_amalgamated.hpp>

#include "dsssp/oracle.hpp"
#include "dsssp/separators.hpp"

using namespace dsssp;

namespace {

DecrementalGraph random_graph(Rng& rng, u32 n, u32 m, i64 wmax = 1) {
    std::vector<std::tuple<u32, u32, i64>> edges;
    for (u32 i = 0; i < m; ++i) {
        u32 u = static_cast<u32>(rng.next_below(n));
        u32 v = static_cast<u32>(rng.next_below(n));
        i64 w = 1 + static_cast<i64>(rng.next_below(static_cast<u64>(wmax)));
        edges.emplace_back(u, v, w);
    }
    return DecrementalGraph::load(n, edges);
}

DecrementalGraph cycle_graph(u32 n) {
    std::vector<std::tuple<u32, u32, i64>> edges;
    for (u32 i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n, 1);
    return DecrementalGraph::load(n, edges);
}

// Checks that S is a q-quality separator: every SCC of H minus E(S) has
// at most |V| - q|S| vertices.
void require_quality(const GraphView& H, const SeparatorResult& sep) {
    std::vector<char> in_sep(H.graph().vertex_count(), 0);
    for (u32 s : sep.layer_vertices) in_sep[s] = 1;
    std::vector<u32> rest;
    for (u32 v : H.vertices()) {
        if (!in_sep[v]) rest.push_back(v);
    }
    double budget =
        static_cast<double>(H.size()) - sep.quality * static_cast<double>(sep.layer_vertices.size());
    for (const auto& comp : strongly_connected_components(H.restricted(rest))) {
        REQUIRE(static_cast<double>(comp.size()) <= budget + 1e-9);
    }
}

// No surviving edge crosses from strictly inside the chosen layer/band
// to strictly outside it.
void require_soundness(const GraphView& H, u32 r, const SeparatorResult& sep, i64 omega,
                       bool reversed = false) {
    std::vector<i64> dist = dijkstra_view(H, r, reversed);
    std::vector<char> in_sep(H.graph().vertex_count(), 0);
    for (u32 s : sep.layer_vertices) in_sep[s] = 1;
    const DecrementalGraph& g = H.graph();
    for (u32 e = 0; e < g.edge_count(); ++e) {
        if (!H.edge_in_view(e)) continue;
        const GraphEdge& ed = g.edge(e);
        u32 tail = reversed ? ed.to : ed.from;
        u32 head = reversed ? ed.from : ed.to;
        if (in_sep[tail] || in_sep[head]) continue;  // edge removed with E(S)
        bool tail_inside = dist[tail] <= sep.layer_depth - omega;
        bool head_outside = dist[head] > sep.layer_depth;
        REQUIRE(!(tail_inside && head_outside));
    }
}

void require_partition_size_bound(const GraphView& H, const PartitionResult& pr, i64 d) {
    double lgV = lg(static_cast<double>(std::max<std::size_t>(2, H.size())));
    double sum = 0;
    for (const auto& c : pr.sccs) {
        sum += static_cast<double>(c.size()) * (lgV - lg(static_cast<double>(c.size())));
    }
    double bound = 4.0 * lgV / static_cast<double>(d) * sum;
    REQUIRE(static_cast<double>(pr.separator.size()) <= bound + 1e-9);
}

void require_partition_diameters(const GraphView& H, const PartitionResult& pr, i64 d) {
    std::vector<char> in_sep(H.graph().vertex_count(), 0);
    for (u32 s : pr.separator) in_sep[s] = 1;
    for (const auto& comp : pr.sccs) {
        if (comp.size() == 1) continue;
        for (u32 v : comp) REQUIRE(!in_sep[v]);
        REQUIRE(exact_diameter(H, comp) <= d);
    }
}

}  // namespace

TEST_CASE("thin_layer on a 16-vertex path") {
    std::vector<std::tuple<u32, u32, i64>> edges;
    for (u32 i = 0; i + 1 < 16; ++i) edges.emplace_back(i, i + 1, 1);
    auto g = DecrementalGraph::load(16, edges);
    auto sep = thin_layer(GraphView::whole(g), 0, 0, 8);
    REQUIRE(sep.quality == Catch::Approx(1.0));
    REQUIRE(sep.layer_depth == 1);
    REQUIRE(sep.layer_vertices == std::vector<u32>{1});
}

TEST_CASE("thin_layer on a star") {
    // Center 0 with 15 leaves: the only nonempty layers are 0 and 1; the
    // first qualifying layer is the empty layer at depth 2.
    std::vector<std::tuple<u32, u32, i64>> edges;
    for (u32 i = 1; i < 16; ++i) edges.emplace_back(0, i, 1);
    auto g = DecrementalGraph::load(16, edges);
    auto sep = thin_layer(GraphView::whole(g), 0, 0, 8);
    REQUIRE(sep.layer_vertices.empty());
    REQUIRE(sep.layer_depth == 2);
}

TEST_CASE("thin_layer degenerate and error cases") {
    auto g = DecrementalGraph::load(1, {});
    auto sep = thin_layer(GraphView(&g, {0}), 0, 0, 100);
    REQUIRE(sep.layer_vertices.empty());

    auto g2 = DecrementalGraph::load(8, {{0, 1, 1}});
    REQUIRE_THROWS_AS(thin_layer(GraphView::whole(g2), 0, 0, 2), ContractError);
}

TEST_CASE("separator on cycles") {
    for (i64 d : {8, 12}) {
        auto g = cycle_graph(static_cast<u32>(2 * d));
        GraphView H = GraphView::whole(g);
        auto sep = separator(H, d);
        REQUIRE(!sep.layer_vertices.empty());
        require_quality(H, sep);
        require_soundness(H, 0, sep, 1);
    }
}

TEST_CASE("separator quality on random digraphs") {
    Rng rng(37);
    for (int rep = 0; rep < 30; ++rep) {
        u32 n = 10 + static_cast<u32>(rng.next_below(20));
        auto g = random_graph(rng, n, 3 * n);
        GraphView H = GraphView::whole(g);
        i64 d = 2 * static_cast<i64>(std::ceil(lg(n))) + 2;
        u32 r = *std::min_element(H.vertices().begin(), H.vertices().end());
        auto sep = separator(H, d);
        require_quality(H, sep);
        require_soundness(H, r, sep, 1);
    }
}

TEST_CASE("partition basics") {
    SECTION("short cycle stays whole") {
        auto g = cycle_graph(4);
        auto pr = partition(GraphView::whole(g), 8);
        REQUIRE(pr.separator.empty());
        REQUIRE(pr.sccs.size() == 1);
        REQUIRE(pr.sccs[0].size() == 4);
    }
    SECTION("long cycle gets cut") {
        i64 d = 8;
        auto g = cycle_graph(static_cast<u32>(4 * d));
        GraphView H = GraphView::whole(g);
        auto pr = partition(H, d);
        REQUIRE(!pr.separator.empty());
        require_partition_diameters(H, pr, d);
        require_partition_size_bound(H, pr, d);
    }
    SECTION("DAG yields empty separator") {
        auto g = DecrementalGraph::load(5, {{0, 1, 1}, {1, 2, 1}, {0, 3, 1}, {3, 4, 1}});
        auto pr = partition(GraphView::whole(g), 4);
        REQUIRE(pr.separator.empty());
        REQUIRE(pr.sccs.size() == 5);
    }
}

TEST_CASE("partition fuzz: diameter and size bounds") {
    Rng rng(41);
    for (int rep = 0; rep < 40; ++rep) {
        u32 n = 10 + static_cast<u32>(rng.next_below(30));
        auto g = random_graph(rng, n, 2 * n + static_cast<u32>(rng.next_below(2 * n)));
        GraphView H = GraphView::whole(g);
        i64 d = 4 + static_cast<i64>(rng.next_below(12));
        auto pr = partition(H, d);
        require_partition_diameters(H, pr, d);
        require_partition_size_bound(H, pr, d);
        // Output sets partition V(H).
        std::size_t total = 0;
        for (auto& c : pr.sccs) total += c.size();
        REQUIRE(total == H.size());
    }
}

TEST_CASE("partition_plus") {
    SECTION("cycle covered by one es structure") {
        auto g = cycle_graph(4);
        Rng rng(5);
        auto pr = partition_plus(GraphView::whole(g), 8, rng);
        REQUIRE(pr.es_seeds.size() == 1);
        const EsStructure& es = *pr.es_seeds[0];
        for (u32 v = 0; v < 4; ++v) {
            REQUIRE(es.out_reachable(v));
            REQUIRE(es.in_reachable(v));
        }
    }
    SECTION("deterministic under seed") {
        auto g = cycle_graph(10);
        Rng a(99), b(99);
        auto p1 = partition_plus(GraphView::whole(g), 40, a);
        auto p2 = partition_plus(GraphView::whole(g), 40, b);
        REQUIRE(p1.roots == p2.roots);
    }
    SECTION("root uniformity") {
        auto g = cycle_graph(10);
        Rng rng(123);
        std::vector<int> freq(10, 0);
        for (int i = 0; i < 2000; ++i) {
            auto pr = partition_plus(GraphView::whole(g), 40, rng);
            ++freq[pr.roots[0]];
        }
        // Binomial(2000, 1/10): mean 200, 3 sigma ~ 40.
        for (int f : freq) {
            REQUIRE(f >= 160);
            REQUIRE(f <= 240);
        }
    }
}

TEST_CASE("fast_separator") {
    std::vector<std::tuple<u32, u32, i64>> edges;
    for (u32 i = 0; i + 1 < 32; ++i) edges.emplace_back(i, i + 1, 1);
    auto g = DecrementalGraph::load(32, edges);
    GraphView H = GraphView::whole(g);
    auto sep = fast_separator(H, 0, 16);
    REQUIRE(!sep.layer_vertices.empty());  // far vertices exist => nonempty
    require_quality(H, sep);
    require_soundness(H, 0, sep, 1);
    // Cost proportional to the explored ball.
    REQUIRE(sep.touched_cost <= 4 * (2 * 32 + 1));
}

TEST_CASE("weighted thin layer") {
    SECTION("omega=1 degenerates to thin_layer") {
        Rng rng(43);
        auto g = random_graph(rng, 20, 60);
        GraphView H = GraphView::whole(g);
        auto a = thin_layer(H, 0, 0, 12);
        auto b = wthin_layer(H, 0, 0, 12, 1);
        REQUIRE(a.layer_vertices == b.layer_vertices);
        REQUIRE(a.layer_depth == b.layer_depth);
    }
    SECTION("weight-2 path with omega=3 bands") {
        std::vector<std::tuple<u32, u32, i64>> edges;
        for (u32 i = 0; i + 1 < 20; ++i) edges.emplace_back(i, i + 1, 2);
        auto g = DecrementalGraph::load(20, edges);
        GraphView H = GraphView::whole(g);
        auto sep = wthin_layer(H, 0, 0, 27, 3);
        std::vector<i64> dist = dijkstra_view(H, 0);
        for (u32 s : sep.layer_vertices) {
            REQUIRE(dist[s] > sep.layer_depth - 3);
            REQUIRE(dist[s] <= sep.layer_depth);
        }
        require_soundness(H, 0, sep, 3);
    }
    SECTION("weighted quality fuzz") {
        Rng rng(47);
        for (int rep = 0; rep < 25; ++rep) {
            u32 n = 8 + static_cast<u32>(rng.next_below(22));
            i64 omega = 3;
            auto g = random_graph(rng, n, 3 * n, omega - 1);  // weights in [1, omega)
            GraphView H = GraphView::whole(g);
            i64 floor_d = static_cast<i64>(std::ceil(2.0 * omega * lg(n)));
            i64 d = ((floor_d + 2 * omega) / omega) * omega;
            auto sep = wseparator(H, d, omega);
            require_quality(H, sep);
            u32 r = *std::min_element(H.vertices().begin(), H.vertices().end());
            require_soundness(H, r, sep, omega);
        }
    }
}

TEST_CASE("weighted partition fuzz") {
    Rng rng(53);
    for (int rep = 0; rep < 20; ++rep) {
        u32 n = 8 + static_cast<u32>(rng.next_below(25));
        i64 omega = 2 + static_cast<i64>(rng.next_below(2));
        auto g = random_graph(rng, n, 3 * n, omega - 1);
        GraphView H = GraphView::whole(g);
        i64 d = ((12 + static_cast<i64>(rng.next_below(20))) / omega) * omega;
        if (d < omega) d = omega;
        auto pr = wpartition(H, d, omega);
        require_partition_diameters(H, pr, d);
        std::size_t total = 0;
        for (auto& c : pr.sccs) total += c.size();
        REQUIRE(total == H.size());
    }
}
