#include "helpers.hpp"
#include "revnet/graph.hpp"
#include "revnet/synth.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace revnet;
using testing::review;

namespace {
Dataset fixture() {
    // u:{A,B,C}, v:{B,C}, w:{D}
    return group_reviews({review("A", "u", 1), review("B", "u", 2), review("C", "u", 3), review("B", "v", 4),
                          review("C", "v", 5), review("D", "w", 6)});
}
}  // namespace

TEST_SUITE("graph") {

TEST_CASE("one shared reviewer gives weight 1, two give 2") {
    auto net = project(group_reviews({review("A", "u", 1), review("B", "u", 2)}));
    CHECK(net.weight(net.index_of("A"), net.index_of("B")) == 1);
    net = project(group_reviews({review("A", "u", 1), review("B", "u", 2), review("A", "v", 1), review("B", "v", 2)}));
    CHECK(net.weight(0, 1) == 2);
    CHECK(net.weight(1, 0) == 2);
}

TEST_CASE("four-product fixture") {
    const auto net = project(fixture());
    REQUIRE(net.size() == 4);
    const auto A = net.index_of("A"), B = net.index_of("B"), C = net.index_of("C"), D = net.index_of("D");
    CHECK(net.weight(A, B) == 1);
    CHECK(net.weight(A, C) == 1);
    CHECK(net.weight(B, C) == 2);
    CHECK(net.neighbor_count(D) == 0);
    CHECK(net.edge_count() == 3);
    CHECK(net.weight(A, A) == 0);
}

TEST_CASE("repeat reviews by one reviewer count once") {
    const auto net = project(group_reviews({review("A", "u", 1), review("A", "u", 2), review("B", "u", 3)}));
    CHECK(net.weight(0, 1) == 1);
}

TEST_CASE("edge export and min_weight filter") {
    const auto net = project(fixture());
    const auto all = export_edges(net, 1);
    REQUIRE(all.size() == 3);
    CHECK(all[0] == EdgeRow{"A", "B", 1});
    CHECK(all[1] == EdgeRow{"A", "C", 1});
    CHECK(all[2] == EdgeRow{"B", "C", 2});
    const auto heavy = export_edges(net, 2);
    REQUIRE(heavy.size() == 1);
    CHECK(heavy[0] == EdgeRow{"B", "C", 2});
    CHECK(edges_to_csv(heavy) == "product_i,product_j,weight\nB,C,2\n");
    CHECK(export_edges(ProductNetwork{}, 1).empty());
    CHECK_THROWS_AS(project(Dataset{}), Error);
}

TEST_CASE("adjacency views are symmetric with empty diagonal") {
    const auto net = project(fixture());
    const Matrix a = Matrix(net.adjacency());
    const Matrix w = Matrix(net.weighted_adjacency());
    CHECK(a == a.transpose());
    CHECK(w == w.transpose());
    CHECK(a.diagonal().isZero());
    CHECK(w(net.index_of("B"), net.index_of("C")) == 2.0);
    CHECK(a(net.index_of("B"), net.index_of("C")) == 1.0);
}

TEST_CASE("projection of a synthetic dataset matches brute-force reviewer-set intersection") {
    SynthConfig cfg;
    cfg.n_organic_products = 30;
    cfg.n_fake_products = 15;
    cfg.seed = 3;
    cfg.embedding_dim = 4;
    const auto data = generate(cfg).reviews;
    const auto net = project(data);
    std::map<std::string, std::set<std::string>> reviewers;
    for (const auto& p : data)
        for (const auto& r : p.reviews) reviewers[p.product_id].insert(r.reviewer_id);
    std::size_t edges = 0;
    for (const auto& [a, ra] : reviewers)
        for (const auto& [b, rb] : reviewers) {
            if (a >= b) continue;
            std::size_t shared = 0;
            for (const auto& u : ra) shared += rb.count(u);
            CHECK(net.weight(net.index_of(a), net.index_of(b)) == shared);
            edges += shared > 0;
        }
    CHECK(net.edge_count() == edges);
}

TEST_CASE("product order in the input does not change the network") {
    auto data = fixture();
    std::reverse(data.begin(), data.end());
    const auto a = export_edges(project(fixture()));
    const auto b = export_edges(project(data));
    CHECK(a == b);
}

}  // TEST_SUITE
