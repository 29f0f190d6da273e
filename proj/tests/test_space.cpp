#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracle.hpp"
#include "roelab/catalog.hpp"
#include "roelab/space.hpp"

#include <set>

using namespace roelab;

TEST_CASE("make_window: counting examples") {
    SUBCASE("Z, core 10, padding 4") {
        Window w = make_window(catalog::z(), 10, 4);
        CHECK(w.n() == 29);
        CHECK(w.core.size() == 21);
        CHECK(w.faithfulness_radius == 4);
    }
    SUBCASE("one-point space") {
        Window w = make_window(catalog::point(), 5, 3);
        CHECK(w.n() == 1);
        CHECK(w.core.size() == 1);
    }
    SUBCASE("free union of two lines") {
        Window w = make_window(catalog::z_disjoint_z(), 3, 1);
        std::set<int> comps(w.component.begin(), w.component.end());
        CHECK(comps.size() == 2);
        int c0 = 0, c1 = 0;
        for (int c : w.component) (c == 0 ? c0 : c1)++;
        CHECK(c0 == 9);
        CHECK(c1 == 9);
        for (int i = 0; i < w.n(); ++i)
            for (int j = 0; j < w.n(); ++j)
                if (w.component[i] != w.component[j]) CHECK(w.dist[i][j] == kUnrelated);
    }
    SUBCASE("inconsistent custom table names the offending triple") {
        std::vector<std::vector<int>> bad = {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}};
        CHECK_THROWS_WITH_AS(make_window(AmbientSpec::finite(bad, {"x", "y", "z"}), 1, 1),
                             doctest::Contains("triangle"), Error);
    }
}

TEST_CASE("window invariants: metric axioms and faithfulness") {
    for (auto spec : {catalog::z(), catalog::zplus(), catalog::z2(), catalog::z_disjoint_zplus()}) {
        Window w = make_window(spec, 4, 3);
        bool symmetric = true, zero_diag = true, triangle = true;
        for (int i = 0; i < w.n(); ++i) {
            zero_diag = zero_diag && w.dist[i][i] == 0;
            for (int j = 0; j < w.n(); ++j) {
                symmetric = symmetric && w.dist[i][j] == w.dist[j][i];
                for (int k = 0; k < w.n(); ++k) {
                    int ij = w.dist[i][j], jk = w.dist[j][k], ik = w.dist[i][k];
                    if (ij >= 0 && jk >= 0) triangle = triangle && ik >= 0 && ik <= ij + jk;
                }
            }
        }
        CHECK(symmetric);
        CHECK(zero_diag);
        CHECK(triangle);
        // faithfulness: ambient neighbors of core points are all listed
        bool faithful = true;
        for (int i : w.core)
            for (auto& p : w.spec.ball(w.pts[i], w.faithfulness_radius))
                faithful = faithful && w.index_of(p) >= 0;
        CHECK(faithful);
    }
}

TEST_CASE("check_controlled_proper") {
    Window wz = make_window(catalog::z(), 10, 4);
    SUBCASE("identity") {
        SpaceMap id = map_from_rule(wz, wz, catalog::identity_rule(), true);
        auto r = check_controlled_proper(id, 3);
        REQUIRE(r.k_out.has_value());
        CHECK(*r.k_out == 3);
        CHECK(r.properness == Properness::proper_by_rule);
    }
    SUBCASE("doubling doubles distances") {
        Window wd = make_window(catalog::z(), 3, 2); // domain [-5,5], image within [-10,10]
        SpaceMap dbl = map_from_rule(wd, wz, catalog::dilation_rule(2), true);
        auto r = check_controlled_proper(dbl, 1);
        REQUIRE(r.k_out.has_value());
        CHECK(*r.k_out == 2);
    }
    SUBCASE("x mod 2 is controlled but reported improper") {
        Window w2 = make_window(catalog::pair_space(1), 1, 1);
        AmbientRule mod2{"mod2", [](const Coord& p) -> std::optional<Coord> {
                             return Coord{((p[0] % 2) + 2) % 2};
                         }};
        SpaceMap m = map_from_rule(wz, w2, mod2, false);
        auto r = check_controlled_proper(m, 1);
        REQUIRE(r.k_out.has_value());
        CHECK(*r.k_out == 1);
        CHECK(r.properness == Properness::improper);
    }
}

TEST_CASE("check_close") {
    Window wz = make_window(catalog::z(), 10, 4);
    SpaceMap id = map_from_rule(wz, wz, catalog::identity_rule(), true);

    SUBCASE("f = g gives 0") {
        CHECK(check_close(id, id) == 0);
    }
    SUBCASE("identity vs shift-by-1") {
        Window dom = make_window(catalog::z(), 9, 4); // images stay in wz
        SpaceMap inc = map_from_rule(dom, wz, catalog::identity_rule(), true);
        SpaceMap sh = map_from_rule(dom, wz, catalog::shift_rule(1), true);
        CHECK(check_close(inc, sh) == 1);
        CHECK(check_close(sh, inc) == 1); // symmetry
    }
    SUBCASE("2Z inclusion vs shifted inclusion") {
        Window dom = make_window(catalog::z(), 3, 2); // stands for 2Z via x -> 2x
        SpaceMap i2 = map_from_rule(dom, wz, catalog::dilation_rule(2), true);
        AmbientRule r{"2x+3", [](const Coord& p) -> std::optional<Coord> {
                          return Coord{2 * p[0] + 3};
                      }};
        SpaceMap i2s = map_from_rule(dom, wz, r, true);
        CHECK(check_close(i2, i2s) == 3);
    }
}

TEST_CASE("certify_flasqueness") {
    SUBCASE("half-line shift is flasque") {
        Window w = make_window(catalog::zplus(), 8, 4);
        auto res = certify_flasqueness(w, catalog::halfline_shift());
        REQUIRE(std::holds_alternative<FlasquenessWitness>(res));
        auto& wit = std::get<FlasquenessWitness>(res);
        CHECK(wit.closeness_scale == 1);
        REQUIRE((int)wit.control_envelope.size() == w.faithfulness_radius);
        for (int k = 1; k <= w.faithfulness_radius; ++k) CHECK(wit.control_envelope[k - 1] == k);
        // escape schedule is valid: f^{n0}(window) misses the ball
        for (int r = 0; r <= w.core_radius; ++r) {
            int n0 = wit.escape_schedule[r];
            for (int i = 0; i < w.n(); ++i) {
                auto it = rule_iterate(catalog::halfline_shift(), w.pts[i], n0);
                REQUIRE(it.has_value());
                CHECK((*it)[0] > r);
            }
        }
    }
    SUBCASE("shift on the full line fails escape") {
        Window w = make_window(catalog::z(), 8, 4);
        auto res = certify_flasqueness(w, catalog::shift_rule(1));
        REQUIRE(std::holds_alternative<FlasquenessFailure>(res));
        CHECK(std::get<FlasquenessFailure>(res).condition == 2);
    }
    SUBCASE("identity on the point fails escape") {
        Window w = make_window(catalog::point(), 2, 2);
        auto res = certify_flasqueness(w, catalog::identity_rule());
        REQUIRE(std::holds_alternative<FlasquenessFailure>(res));
        CHECK(std::get<FlasquenessFailure>(res).condition == 2);
    }
}

namespace {

std::vector<int> subset_where(const Window& w, bool (*pred)(const Coord&)) {
    std::vector<int> out;
    for (int i = 0; i < w.n(); ++i)
        if (pred(w.pts[i])) out.push_back(i);
    return out;
}

} // namespace

TEST_CASE("check_u_convex") {
    Window w = make_window(catalog::z(), 8, 6);
    SUBCASE("nonnegative ray is convex with kappa(n) = n") {
        auto Y = subset_where(w, [](const Coord& p) { return p[0] >= 0; });
        auto res = check_u_convex(w, Y, 1);
        REQUIRE(std::holds_alternative<ConvexityTable>(res));
        for (auto& [hops, kappa] : std::get<ConvexityTable>(res).kappa) CHECK(kappa == hops);
    }
    SUBCASE("even integers are not convex: witness (0,2)") {
        auto Y = subset_where(w, [](const Coord& p) { return p[0] % 2 == 0; });
        auto res = check_u_convex(w, Y, 1);
        REQUIRE(std::holds_alternative<ConvexityWitness>(res));
        auto& wit = std::get<ConvexityWitness>(res);
        CHECK(w.dist[wit.x][wit.y] == 2); // a gap of size two with no in-Y path
    }
    SUBCASE("punctured line is convex at scale 2") {
        // jumps of size 2 cross the gap; crossing pairs with even endpoints
        // need one extra hop inside Y (exhaustive path search: kappa(1) = 1,
        // kappa(n) = n + 1 for n >= 2)
        auto Y = subset_where(w, [](const Coord& p) { return p[0] != 0; });
        auto res = check_u_convex(w, Y, 2);
        REQUIRE(std::holds_alternative<ConvexityTable>(res));
        for (auto& [hops, kappa] : std::get<ConvexityTable>(res).kappa)
            CHECK(kappa == (hops == 1 ? 1 : hops + 1));
    }
    SUBCASE("monotone in the scale on sample subsets") {
        for (auto pred : {+[](const Coord& p) { return p[0] >= 0; },
                          +[](const Coord& p) { return p[0] != 0; },
                          +[](const Coord& p) { return p[0] % 2 == 0; }}) {
            auto Y = subset_where(w, pred);
            for (int k = 1; k + 1 <= 3; ++k) {
                bool conv_k = std::holds_alternative<ConvexityTable>(check_u_convex(w, Y, k));
                bool conv_k1 = std::holds_alternative<ConvexityTable>(check_u_convex(w, Y, k + 1));
                if (conv_k) CHECK(conv_k1);
            }
        }
    }
}

TEST_CASE("check_convex_pair") {
    SUBCASE("half-line against left rays") {
        Window w = make_window(catalog::z(), 6, 4);
        auto Z = subset_where(w, [](const Coord& p) { return p[0] >= 0; });
        std::vector<std::vector<int>> family;
        for (int i = 0; i <= 4; ++i) {
            std::vector<int> Yi;
            for (int p = 0; p < w.n(); ++p)
                if (w.pts[p][0] <= i) Yi.push_back(p);
            family.push_back(Yi);
        }
        auto rep = check_convex_pair(w, Z, family, 1);
        CHECK(rep.complementary);
        for (auto& v : rep.per_index) {
            CHECK(v.y_convex);
            CHECK(v.zy_convex_in_z);
        }
    }
    SUBCASE("2Z is not complementary to anything missing odd points") {
        Window w = make_window(catalog::z(), 6, 4);
        auto Z = subset_where(w, [](const Coord& p) { return p[0] % 2 == 0; });
        std::vector<std::vector<int>> family = {
            subset_where(w, [](const Coord& p) { return p[0] <= -3; })};
        auto rep = check_convex_pair(w, Z, family, 1);
        CHECK(!rep.complementary);
    }
    SUBCASE("upper half-plane against lower strips") {
        Window w = make_window(catalog::z2(), 4, 3);
        auto Z = subset_where(w, [](const Coord& p) { return p[1] >= 0; });
        std::vector<std::vector<int>> family;
        for (int i = 0; i <= 2; ++i) {
            std::vector<int> Yi;
            for (int p = 0; p < w.n(); ++p)
                if (w.pts[p][1] <= i) Yi.push_back(p);
            family.push_back(Yi);
        }
        auto rep = check_convex_pair(w, Z, family, 1);
        CHECK(rep.complementary);
        for (auto& v : rep.per_index) {
            CHECK(v.y_convex);
            CHECK(v.zy_convex_in_z);
        }
    }
    SUBCASE("non-increasing family is rejected") {
        Window w = make_window(catalog::z(), 4, 2);
        std::vector<std::vector<int>> family = {{0, 1, 2}, {0, 1}};
        CHECK_THROWS_AS(check_convex_pair(w, w.all_indices(), family, 1), Error);
    }
}
