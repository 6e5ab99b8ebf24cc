#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>

#include "sdoslab/lattice.hpp"

using namespace sdoslab;

TEST_CASE("enumerate_box membership examples") {
    LatticeSpec s{1, 1, 1.0};
    auto ks = enumerate_box(s, 1.0, 1.0);
    REQUIRE(ks == std::vector<IVec>{{-1, -1}, {-1, 0}, {0, -1}, {0, 0}});

    LatticeSpec sh{1, 1, 0.5};
    auto ks2 = enumerate_box(sh, 1.0, 0.5);
    // x1 axis: h k in [-1, 1) -> k in {-2,-1,0,1}
    std::vector<int> k1;
    for (const auto& k : ks2)
        if (std::find(k1.begin(), k1.end(), k[0]) == k1.end()) k1.push_back(k[0]);
    REQUIRE(k1 == std::vector<int>{-2, -1, 0, 1});

    auto ks3 = enumerate_box(LatticeSpec{1, 1, 1.0}, 1.5, 1.0);
    std::vector<int> k1b;
    for (const auto& k : ks3)
        if (std::find(k1b.begin(), k1b.end(), k[0]) == k1b.end()) k1b.push_back(k[0]);
    REQUIRE(k1b == std::vector<int>{-1, 0, 1});
}

TEST_CASE("cube_sites examples") {
    REQUIRE(cube_sites(LatticeSpec{1, 1, 1.0}, IVec{0, 0}) ==
            std::vector<IVec>{{0, 0}});

    // h = 1/2, 1-d behaviour checked on the x1 axis of a d = 2 lattice: the
    // cube [0,1) x [0,1) holds sites {0, 1} x {0, 1} i.e. x = 0 and 0.5.
    auto ks = cube_sites(LatticeSpec{1, 1, 0.5}, IVec{0, 0});
    REQUIRE(ks == std::vector<IVec>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});

    auto ks2 = cube_sites(LatticeSpec{1, 1, 0.5}, IVec{-1, 0});
    std::vector<int> k1;
    for (const auto& k : ks2)
        if (std::find(k1.begin(), k1.end(), k[0]) == k1.end()) k1.push_back(k[0]);
    REQUIRE(k1 == std::vector<int>{-2, -1});  // sites -1 and -0.5
}

TEST_CASE("cubes partition the box") {
    // For integer half-widths and h = 1/m the unit cubes partition the sites.
    for (int m : {1, 2, 3, 4}) {
        LatticeSpec s{1, 1, 1.0 / m};
        const double L = 2.0, Lp = 3.0;
        auto all = enumerate_box(s, L, Lp);
        std::size_t covered = 0;
        std::map<IVec, int> seen;
        for (int y1 = -2; y1 < 2; ++y1)
            for (int y2 = -3; y2 < 3; ++y2) {
                auto ks = cube_sites(s, IVec{y1, y2});
                covered += ks.size();
                for (auto& k : ks) seen[k]++;
            }
        REQUIRE(covered == all.size());
        for (auto& [k, c] : seen) REQUIRE(c == 1);  // half-open: exactly one cube
        // every box site is the anchor-consistent member of its cube
        for (auto& k : all) REQUIRE(seen.count(k) == 1);
    }
}

TEST_CASE("enumerate_box monotone in half-widths") {
    LatticeSpec s{1, 1, 0.5};
    auto small = enumerate_box(s, 1.5, 2.0);
    auto large = enumerate_box(s, 2.5, 3.0);
    std::set<IVec> big(large.begin(), large.end());
    for (auto& k : small) REQUIRE(big.count(k) == 1);
}

TEST_CASE("SiteIndex round trip and lexicographic order") {
    SiteIndex idx({{-2, 3}, {0, 1}, {-1, 1}});
    REQUIRE(idx.size() == 6u * 2u * 3u);
    IVec prev;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        IVec k = idx.decode(i);
        REQUIRE(idx.index(k) == i);
        REQUIRE(idx.contains(k));
        if (i > 0) REQUIRE(prev < k);  // lexicographic
        prev = k;
    }
    REQUIRE_FALSE(idx.contains(IVec{4, 0, 0}));
}

TEST_CASE("empty and tiny boxes") {
    LatticeSpec s{1, 1, 1.0};
    REQUIRE_THROWS_AS(enumerate_box(s, -1.0, 1.0), std::invalid_argument);
    REQUIRE(SiteIndex({{2, 1}, {0, 0}}).size() == 0);
    REQUIRE_THROWS_AS((LatticeSpec{0, 1, 1.0}.validate()), std::invalid_argument);
    REQUIRE_THROWS_AS((LatticeSpec{1, 1, 1.5}.validate()), std::invalid_argument);
    REQUIRE_THROWS_AS((BoxSpec{0.5, 1.0, 0}.validate()), std::invalid_argument);
}
