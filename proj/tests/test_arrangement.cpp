#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include <chambers/arrangement.hpp>
#include <chambers/flats.hpp>

#include "test_util.hpp"

using namespace chambers;
using testutil::q;

namespace {

IndexSet iset(std::initializer_list<uint16_t> xs) { return IndexSet(xs); }

Row row(std::initializer_list<long> entries) {
    Row r;
    for (long e : entries) r.push_back(q(e));
    return r;
}

} // namespace

TEST_CASE("arrangement construction validates and promotes") {
    auto A = testutil::running_example();
    REQUIRE(A.dim() == 2);
    REQUIRE(A.size() == 4);
    REQUIRE(A.field() == 0);

    SECTION("coefficient count must match the dimension") {
        std::vector<Hyperplane> bad = {{{q(1)}, q(0)}};
        REQUIRE_THROWS_AS(Arrangement(2, 0, bad), error);
    }
    SECTION("zero rows are rejected") {
        std::vector<Hyperplane> bad = {{{q(0), q(0)}, q(1)}};
        REQUIRE_THROWS_AS(Arrangement(2, 0, bad), error);
    }
    SECTION("rational input is promoted into a quadratic field") {
        std::vector<Hyperplane> hs = {{{q(1), q(2)}, q(0)}};
        Arrangement B(2, 5, hs);
        REQUIRE(B[0].coeffs[0].field() == 5);
        REQUIRE(B[0].coeffs[0] == FieldScalar::one(5));
    }
    SECTION("scalars from a different field are rejected") {
        FieldScalar phi = FieldScalar::quadratic(mpq_class(1, 2), mpq_class(1, 2), 5);
        std::vector<Hyperplane> bad = {{{phi, q(1)}, q(0)}};
        REQUIRE_THROWS_AS(Arrangement(2, 0, bad), error);
        REQUIRE_THROWS_AS(Arrangement(2, 2, bad), error);
        REQUIRE_NOTHROW(Arrangement(2, 5, bad));
    }
    SECTION("dimension zero admits only the empty arrangement") {
        REQUIRE_NOTHROW(Arrangement(0, 0, {}));
        std::vector<Hyperplane> bad = {{{}, q(1)}};
        REQUIRE_THROWS_AS(Arrangement(0, 0, bad), error);
    }
}

TEST_CASE("canonical rows and duplicate detection") {
    auto A = testutil::running_example();
    REQUIRE(A.canonical_row(0) == row({1, -1, -1}));
    REQUIRE(A.canonical_row(1) == row({1, 0, 0}));
    REQUIRE(A.canonical_row(3) == row({0, 1, 0}));
    REQUIRE(A.duplicate_groups().empty());

    auto D = testutil::duplicate_pair_example();
    auto groups = D.duplicate_groups();
    REQUIRE(groups.size() == 1);
    REQUIRE(groups[0] == std::vector<size_t>{0, 1});
}

TEST_CASE("centrality") {
    REQUIRE_FALSE(is_central(testutil::running_example()));
    REQUIRE(is_central(testutil::central_three_lines()));
    REQUIRE(is_central(testutil::boolean_arrangement(3)));
    REQUIRE(is_central(Arrangement(2, 0, {})));
    std::vector<Hyperplane> parallel = {{{q(1), q(0)}, q(0)}, {{q(1), q(0)}, q(1)}};
    REQUIRE_FALSE(is_central(Arrangement(2, 0, parallel)));
}

TEST_CASE("deletion and restriction") {
    auto A = testutil::running_example();

    auto Adel = delete_hyperplane(A, 2);
    REQUIRE(Adel.size() == 3);
    REQUIRE(Adel[2].coeffs == std::vector<FieldScalar>{q(0), q(1)});

    SECTION("restriction to x = 0 merges the concurrent traces") {
        auto R = restrict_to_hyperplane(A, 1);
        REQUIRE(R.dim() == 1);
        REQUIRE(R.size() == 2);  // y = 1 from both H1 and H3, y = 0 from H4
        REQUIRE(R.canonical_row(0) == row({1, 1}));
        REQUIRE(R.canonical_row(1) == row({1, 0}));
    }
    SECTION("restriction to y - x = 1") {
        auto R = restrict_to_hyperplane(A, 0);
        REQUIRE(R.dim() == 1);
        REQUIRE(R.size() == 2);
    }
    SECTION("restriction to y = 0 keeps three distinct points") {
        auto R = restrict_to_hyperplane(A, 3);
        REQUIRE(R.size() == 3);
    }
    SECTION("a duplicate row restricts to nothing") {
        auto D = testutil::duplicate_pair_example();
        auto R = restrict_to_hyperplane(D, 0);
        REQUIRE(R.dim() == 1);
        REQUIRE(R.size() == 1);  // only y = 0 leaves a trace
        REQUIRE(R.canonical_row(0) == row({1, 0}));
    }
    SECTION("index out of range") {
        REQUIRE_THROWS_AS(delete_hyperplane(A, 4), error);
        REQUIRE_THROWS_AS(restrict_to_hyperplane(A, 4), error);
    }
}

TEST_CASE("flat bases of the running example") {
    auto A = testutil::running_example();

    auto b24 = flat_basis(A, iset({1, 3}));  // x = 0 and y = 0
    REQUIRE(b24.consistent);
    REQUIRE(b24.rank() == 2);
    REQUIRE(b24.rows == std::vector<Row>{row({1, 0, 0}), row({0, 1, 0})});
    REQUIRE(b24.pivots == std::vector<unsigned>{0, 1});

    auto b123 = flat_basis(A, iset({0, 1, 2}));  // concurrent at (0, 1)
    REQUIRE(b123.consistent);
    REQUIRE(b123.rank() == 2);
    REQUIRE(b123.rows == std::vector<Row>{row({1, 0, 0}), row({0, 1, 1})});

    auto ball = flat_basis(A, iset({0, 1, 2, 3}));
    REQUIRE_FALSE(ball.consistent);
    REQUIRE(ball.rank() == 2);
    REQUIRE(ball.rows.size() == 3);
    REQUIRE(ball.rows[2] == row({0, 0, 1}));
    REQUIRE(ball.pivots == std::vector<unsigned>{0, 1, 2});

    auto bempty = flat_basis(A, iset({}));
    REQUIRE(bempty.consistent);
    REQUIRE(bempty.rank() == 0);
    REQUIRE(bempty.rows.empty());
}

TEST_CASE("flat basis is canonical under reordering and scaling") {
    std::mt19937_64 rng(20240818);
    for (int iter = 0; iter < 60; ++iter) {
        auto A = testutil::random_arrangement(rng);
        const unsigned n = static_cast<unsigned>(A.size());
        std::uniform_int_distribution<unsigned> sz(0, n);
        IndexSet I;
        for (uint16_t i = 0; i < n; ++i)
            if (rng() % 2) I.push_back(i);
        auto b1 = flat_basis(A, I);

        IndexSet J = I;
        std::shuffle(J.begin(), J.end(), rng);
        auto b2 = flat_basis(A, J);
        REQUIRE(b1 == b2);
        REQUIRE(b1.rank() <= A.dim());
    }
}

TEST_CASE("classification of the running example") {
    auto A = testutil::running_example();

    SECTION("from the empty subset every line is proper and fresh") {
        auto cl = classify(A, iset({}), 0);
        for (unsigned j = 0; j < 4; ++j) {
            REQUIRE(cl.status_of(j) == RowStatus::PROPER);
            REQUIRE(cl.qualifies(j));
        }
        REQUIRE(cl.j_min == 0);
        REQUIRE(cl.qualifying_list == std::vector<unsigned>{0, 1, 2, 3});
    }
    SECTION("on H1 the traces of H2 and H3 coincide") {
        auto cl = classify(A, iset({0}), 1);
        REQUIRE(cl.status_of(1) == RowStatus::PROPER);
        REQUIRE(cl.status_of(2) == RowStatus::PROPER);
        REQUIRE(cl.status_of(3) == RowStatus::PROPER);
        REQUIRE(cl.canonical[0] == cl.canonical[1]);  // rows 1 and 2
        REQUIRE_FALSE(cl.qualifies(1));
        REQUIRE(cl.qualifies(2));
        REQUIRE(cl.qualifies(3));
        REQUIRE(cl.j_min == 2);
        REQUIRE(cl.next_qualifying_after(2) == 3);
        REQUIRE(cl.next_qualifying_after(3) == -1);
    }
    SECTION("on the point (0, 1) nothing remains to decide") {
        auto cl = classify(A, iset({0, 1}), 2);
        REQUIRE(cl.status_of(2) == RowStatus::REDUNDANT);  // x + y = 1 passes through
        REQUIRE(cl.status_of(3) == RowStatus::EMPTY);      // y = 0 misses
        REQUIRE(cl.j_min == -1);
    }
    SECTION("suffix start is respected") {
        auto cl = classify(A, iset({1}), 2);
        REQUIRE(cl.from == 2);
        REQUIRE(cl.status.size() == 2);
        REQUIRE(cl.status_of(2) == RowStatus::PROPER);
        REQUIRE(cl.status_of(3) == RowStatus::PROPER);
        REQUIRE(cl.j_min == 2);
    }
    SECTION("an inconsistent subset is rejected") {
        REQUIRE_THROWS_AS(classify(A, iset({0, 1, 2, 3}), 4), error);
    }
}

TEST_CASE("canonical trace rows agree with flat equality") {
    std::mt19937_64 rng(20240819);
    int proper_pairs = 0;
    for (int iter = 0; iter < 40; ++iter) {
        testutil::ArrConfig cfg;
        cfg.n_max = 6;
        cfg.dim_max = 3;
        auto A = testutil::random_arrangement(rng, cfg);
        const unsigned n = static_cast<unsigned>(A.size());
        for (unsigned mask = 0; mask < (1u << std::min(n, 4u)); ++mask) {
            IndexSet I;
            for (uint16_t i = 0; i < std::min(n, 4u); ++i)
                if (mask & (1u << i)) I.push_back(i);
            auto b = flat_basis(A, I);
            if (!b.consistent) continue;
            unsigned from = I.empty() ? 0 : I.back() + 1;
            auto cl = classify(A, b, from);
            for (unsigned j = from; j < n; ++j) {
                if (cl.status_of(j) != RowStatus::PROPER) continue;
                for (unsigned k = j + 1; k < n; ++k) {
                    if (cl.status_of(k) != RowStatus::PROPER) continue;
                    IndexSet Ij = I, Ik = I;
                    Ij.push_back(static_cast<uint16_t>(j));
                    Ik.push_back(static_cast<uint16_t>(k));
                    bool same_flat = flat_basis(A, Ij) == flat_basis(A, Ik);
                    bool same_row = cl.canonical[j - from] == cl.canonical[k - from];
                    REQUIRE(same_flat == same_row);
                    ++proper_pairs;
                }
            }
        }
    }
    REQUIRE(proper_pairs > 200);
}

TEST_CASE("restriction subset bookkeeping") {
    RestrictionRep rep;
    REQUIRE(rep.level == 0);
    REQUIRE(rep.mult == Count(1ul));

    auto d = delete_step(rep);
    REQUIRE(d.level == 1);
    REQUIRE(d.I.empty());

    auto r = restrict_step(d, 1);
    REQUIRE(r.level == 2);
    REQUIRE(r.I == IndexSet{1});
    REQUIRE_THROWS_AS(restrict_step(d, 0), error);
    REQUIRE_THROWS_AS(restrict_step(d, 2), error);

    auto r2 = restrict_step(r, 2);
    REQUIRE(r2.I == IndexSet{1, 2});
    REQUIRE(r2.mult == Count(1ul));
}

TEST_CASE("independence of the chosen subset along proper rows") {
    // Restricting only at PROPER rows keeps the subset independent, so the
    // rank always equals the subset size.
    std::mt19937_64 rng(20240820);
    for (int iter = 0; iter < 30; ++iter) {
        testutil::ArrConfig cfg;
        cfg.n_max = 7;
        auto A = testutil::random_arrangement(rng, cfg);
        const unsigned n = static_cast<unsigned>(A.size());

        std::vector<IndexSet> frontier = {IndexSet{}};
        for (unsigned depth = 0; depth < 3 && !frontier.empty(); ++depth) {
            std::vector<IndexSet> next;
            for (const IndexSet& I : frontier) {
                auto b = flat_basis(A, I);
                REQUIRE(b.consistent);
                REQUIRE(b.rank() == I.size());
                unsigned from = I.empty() ? 0 : I.back() + 1;
                auto cl = classify(A, b, from);
                for (unsigned j : cl.qualifying_list) {
                    IndexSet J = I;
                    J.push_back(static_cast<uint16_t>(j));
                    next.push_back(std::move(J));
                }
            }
            frontier = std::move(next);
        }
    }
}
