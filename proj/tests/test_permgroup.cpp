#include <catch2/catch_amalgamated.hpp>

#include <chambers/permgroup.hpp>

#include <algorithm>
#include <map>
#include <random>

using namespace chambers;

namespace {

Perm pl(std::initializer_list<long> v) { return Perm::from_one_line_1based(std::vector<long>(v)); }

Perm random_perm(unsigned n, std::mt19937& rng) {
    std::vector<uint16_t> img(n);
    for (unsigned i = 0; i < n; ++i) img[i] = static_cast<uint16_t>(i);
    std::shuffle(img.begin(), img.end(), rng);
    return Perm(std::move(img));
}

PermGroup random_group(unsigned n, std::mt19937& rng) {
    std::vector<Perm> gens;
    unsigned k = 1 + rng() % 2;
    for (unsigned i = 0; i < k; ++i) gens.push_back(random_perm(n, rng));
    return PermGroup(n, gens);
}

IndexSet random_subset(unsigned n, std::mt19937& rng) {
    IndexSet s;
    for (unsigned i = 0; i < n; ++i)
        if (rng() % 2) s.push_back(static_cast<uint16_t>(i));
    return s;
}

} // namespace

TEST_CASE("permutation basics") {
    Perm id = Perm::identity(4);
    REQUIRE(id.is_identity());
    Perm a = pl({2, 3, 1, 4});
    REQUIRE(a(0) == 1);
    REQUIRE((a * a * a).is_identity());
    REQUIRE(a.inverse() * a == id);
    Perm b = pl({2, 1, 3, 4});
    REQUIRE((a * b)(0) == 2);  // (a*b)(x) = a(b(x))
    REQUIRE(a.apply({0, 1}) == IndexSet{1, 2});
    REQUIRE(a.apply({2, 3}) == IndexSet{0, 3});
    REQUIRE(a.one_line_1based() == std::vector<long>{2, 3, 1, 4});

    REQUIRE_THROWS_AS(Perm(std::vector<uint16_t>{0, 0, 1}), error);
    REQUIRE_THROWS_AS(pl({2, 3}), error);
    REQUIRE_THROWS_AS(pl({1, 1}), error);
    REQUIRE_THROWS_AS(pl({0, 1}), error);
}

TEST_CASE("stabilizer chain computes orders and membership") {
    PermGroup trivial(5);
    REQUIRE(trivial.order() == Count(1));
    REQUIRE(trivial.is_trivial());
    REQUIRE(trivial.contains(Perm::identity(5)));

    PermGroup s3in4(4, {pl({2, 3, 1, 4}), pl({2, 1, 3, 4})});
    REQUIRE(s3in4.order() == Count(6));
    REQUIRE(s3in4.contains(pl({3, 2, 1, 4})));
    REQUIRE_FALSE(s3in4.contains(pl({1, 2, 4, 3})));
    REQUIRE_FALSE(s3in4.contains(Perm::identity(5)));

    PermGroup s4(4, {pl({2, 1, 3, 4}), pl({2, 3, 4, 1})});
    REQUIRE(s4.order() == Count(24));

    PermGroup s8(8, {pl({2, 1, 3, 4, 5, 6, 7, 8}), pl({2, 3, 4, 5, 6, 7, 8, 1})});
    REQUIRE(s8.order() == Count(40320));

    // Hyperoctahedral B3 acting on the six signed unit vectors.
    PermGroup b3(6, {pl({2, 1, 3, 5, 4, 6}), pl({2, 3, 1, 5, 6, 4}), pl({4, 2, 3, 1, 5, 6})});
    REQUIRE(b3.order() == Count(48));

    REQUIRE_THROWS_AS(PermGroup(4, {Perm::identity(5)}), error);
}

TEST_CASE("extend grows the chain incrementally") {
    PermGroup g(4);
    g.extend(pl({2, 1, 3, 4}));
    REQUIRE(g.order() == Count(2));
    g.extend(pl({2, 3, 4, 1}));
    REQUIRE(g.order() == Count(24));
    g.extend(pl({3, 2, 1, 4}));  // already inside
    REQUIRE(g.order() == Count(24));
    REQUIRE(g.generators().size() == 2);
}

TEST_CASE("chain order matches enumeration on random groups") {
    std::mt19937 rng(20240818);
    for (int trial = 0; trial < 30; ++trial) {
        unsigned n = 3 + rng() % 5;
        PermGroup g = random_group(n, rng);
        auto elems = enumerate_elements(g);
        REQUIRE(g.order() == Count(elems.size()));
        for (size_t i = 0; i < elems.size(); i += 7) REQUIRE(g.contains(elems[i]));
    }
}

TEST_CASE("orbit_of_set enumerates set orbits") {
    PermGroup s3in4(4, {pl({2, 3, 1, 4}), pl({2, 1, 3, 4})});
    auto orb = orbit_of_set(s3in4, {0, 1});
    REQUIRE(orb.size() == 3);
    auto single = orbit_of_set(s3in4, {3});
    REQUIRE(single == std::vector<IndexSet>{{3}});
    PermGroup s4(4, {pl({2, 1, 3, 4}), pl({2, 3, 4, 1})});
    REQUIRE(orbit_of_set(s4, {0, 1}).size() == 6);
    REQUIRE(orbit_of_set(s4, {}).size() == 1);
    REQUIRE_THROWS_AS(orbit_of_set(s4, {0, 1}, 3), error);
    REQUIRE_THROWS_AS(orbit_of_set(s4, {9}), error);
}

TEST_CASE("minimal images, exact and pseudo") {
    PermGroup g(4, {pl({3, 2, 1, 4})});  // transposition (1 3)
    REQUIRE(minimal_image_exact(g, {2}) == IndexSet{0});
    REQUIRE(minimal_image_exact(g, {1, 2}) == IndexSet{0, 1});

    auto pool = g.generators();
    REQUIRE(pseudo_minimal_image({2}, pool) == IndexSet{0});
    REQUIRE(pseudo_minimal_image({2}, {}) == IndexSet{2});

    PermGroup two(4, {pl({2, 1, 3, 4}), pl({1, 2, 4, 3})});
    REQUIRE(pseudo_minimal_image({1, 3}, two.generators()) == IndexSet{0, 2});

    PermGroup s8(8, {pl({2, 1, 3, 4, 5, 6, 7, 8}), pl({2, 3, 4, 5, 6, 7, 8, 1})});
    REQUIRE_THROWS_AS(minimal_image_exact(s8, {0, 3, 5, 6}, 10), error);
}

TEST_CASE("pseudo keys are sound, exact keys are minimal") {
    std::mt19937 rng(777);
    for (int trial = 0; trial < 25; ++trial) {
        unsigned n = 3 + rng() % 6;
        PermGroup g = random_group(n, rng);
        auto pool = g.random_elements(n, 0xfeed + trial);
        for (unsigned mask = 0; mask < (1u << n); mask += 1 + rng() % 5) {
            IndexSet I;
            for (unsigned i = 0; i < n; ++i)
                if (mask & (1u << i)) I.push_back(static_cast<uint16_t>(i));
            auto orb = orbit_of_set(g, I);
            IndexSet truemin = orb[0];
            for (const auto& s : orb) truemin = std::min(truemin, s);

            IndexSet key = pseudo_minimal_image(I, pool);
            REQUIRE(std::find(orb.begin(), orb.end(), key) != orb.end());  // sound
            for (const Perm& p : pool) REQUIRE_FALSE(p.apply(key) < key);  // fixed point

            REQUIRE(minimal_image_exact(g, I) == truemin);
        }
    }
}

TEST_CASE("setwise stabilizer on the worked examples") {
    PermGroup s3in4(4, {pl({2, 3, 1, 4}), pl({2, 1, 3, 4})});
    REQUIRE(setwise_stabilizer(s3in4, {3}).order() == Count(6));

    PermGroup flip(4, {pl({2, 1, 4, 3})});
    REQUIRE(setwise_stabilizer(flip, {0, 1}).order() == Count(2));

    PermGroup s4(4, {pl({2, 1, 3, 4}), pl({2, 3, 4, 1})});
    PermGroup k = setwise_stabilizer(s4, {0, 1});
    REQUIRE(k.order() == Count(4));
    for (const Perm& g : k.generators()) REQUIRE(g.apply({0, 1}) == IndexSet{0, 1});
}

TEST_CASE("setwise stabilizer matches the enumeration oracle") {
    std::mt19937 rng(31337);
    for (int trial = 0; trial < 40; ++trial) {
        unsigned n = 3 + rng() % 5;
        PermGroup g = random_group(n, rng);
        IndexSet s = random_subset(n, rng);
        PermGroup k = setwise_stabilizer(g, s);

        IndexSet canon = sorted(s);
        size_t oracle = 0;
        for (const Perm& e : enumerate_elements(g)) {
            if (e.apply(canon) == canon) {
                ++oracle;
                REQUIRE(k.contains(e));
            }
        }
        REQUIRE(k.order() == Count(oracle));
        for (const Perm& e : k.generators()) REQUIRE(e.apply(canon) == canon);

        // orbit-stabilizer identity
        REQUIRE(g.order() == Count(orbit_of_set(g, s).size()) * k.order());
    }
}

TEST_CASE("random elements are deterministic, members, roughly uniform") {
    PermGroup s3in4(4, {pl({2, 3, 1, 4}), pl({2, 1, 3, 4})});
    auto a = s3in4.random_elements(50, 12345);
    auto b = s3in4.random_elements(50, 12345);
    REQUIRE(a == b);
    auto c = s3in4.random_elements(50, 54321);
    REQUIRE(a != c);

    std::map<std::vector<uint16_t>, size_t> freq;
    const size_t m = 12000;
    for (const Perm& p : s3in4.random_elements(m, 2024)) {
        REQUIRE(s3in4.contains(p));
        ++freq[p.images()];
    }
    REQUIRE(freq.size() == 6);
    for (const auto& [img, count] : freq) {
        REQUIRE(count > m / 6.0 * 0.85);
        REQUIRE(count < m / 6.0 * 1.15);
    }

    REQUIRE(PermGroup(3).random_elements(4, 1) ==
            std::vector<Perm>(4, Perm::identity(3)));
}

TEST_CASE("setwise stabilizer survives large set orbits") {
    // the orbit of {0,1,2} under S_10 has C(10,3) = 120 elements, well past
    // the transversal buffer's initial reservation; guards the growth path
    std::vector<uint16_t> cyc(10);
    for (unsigned i = 0; i < 10; ++i) cyc[i] = static_cast<uint16_t>((i + 1) % 10);
    PermGroup s10(10, {pl({2, 1, 3, 4, 5, 6, 7, 8, 9, 10}), Perm(std::move(cyc))});
    REQUIRE(s10.order() == Count(mpz_class(3628800)));

    IndexSet S{0, 1, 2};
    REQUIRE(orbit_of_set(s10, S).size() == 120);
    PermGroup st = setwise_stabilizer(s10, S);
    REQUIRE(st.order() == Count(30240ul));  // 3! * 7!
    for (const Perm& g : st.generators()) REQUIRE(g.apply(S) == S);
}
