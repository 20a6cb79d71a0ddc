#include <random>

#include "doctest.h"
#include "ordauto/ordinal.hpp"
#include "ordauto/sampling.hpp"

using namespace ordauto;

namespace {
Ordinal W() { return Ordinal::omega(); }
Ordinal o(const char* s) { return parse_ordinal(s); }
}  // namespace

TEST_CASE("normalization of raw term sums") {
    CHECK(Ordinal::from_terms({{Ordinal(0), 3}, {Ordinal(0), 2}}) == Ordinal(5));
    // w + w^2 reorders to w^2 by left absorption.
    CHECK(Ordinal::from_terms({{Ordinal(1), 1}, {Ordinal(2), 1}}) == o("w^2"));
    CHECK(Ordinal::from_terms({}) == Ordinal(0));
    CHECK(Ordinal::from_terms({{Ordinal(1), 0}}) == Ordinal(0));
}

TEST_CASE("comparison") {
    CHECK(compare(W(), W()) == 0);
    CHECK(compare(o("w*2"), o("w^2")) < 0);
    CHECK(compare(o("w+1"), W()) > 0);
    CHECK(Ordinal(3) < W());
    CHECK(o("w^2") < o("w^2+1"));
}

TEST_CASE("addition") {
    CHECK(add(W(), o("w^2")) == o("w^2"));
    CHECK(add(o("w+1"), W()) == o("w*2"));
    CHECK(add(o("w^2"), W()) == o("w^2+w"));
    CHECK(add(Ordinal(1), W()) == W());
    CHECK(add(W(), Ordinal(1)) == o("w+1"));
}

TEST_CASE("left subtraction") {
    CHECK(left_subtract(W(), o("w*2")) == W());
    CHECK(left_subtract(Ordinal(3), W()) == W());
    CHECK_THROWS_AS(left_subtract(o("w*2"), W()), UnderflowError);
    CHECK(left_subtract(o("w^2+5"), o("w^2+7")) == Ordinal(2));
    CHECK_THROWS_AS(left_subtract(o("w^2+5"), o("w^2")), UnderflowError);
}

TEST_CASE("multiplication") {
    CHECK(multiply(Ordinal(2), W()) == W());
    CHECK(multiply(W(), Ordinal(2)) == o("w*2"));
    CHECK(multiply(o("w+1"), o("w+1")) == o("w^2+w+1"));
    CHECK(multiply(o("w*2"), o("w*2")) == o("w^2*2"));
    CHECK(multiply(W(), W()) == o("w^2"));
}

TEST_CASE("omega powers and depth budget") {
    CHECK(Ordinal::omega_power(Ordinal(0)) == Ordinal(1));
    CHECK(Ordinal::omega_power(Ordinal(2)) == o("w^2"));
    CHECK(Ordinal::omega_power(W()) == o("w^w"));
    Ordinal t = W();
    for (int i = 0; i < 6; ++i)
        t = Ordinal::omega_power(t);
    CHECK(t.depth() == 8);
    CHECK_THROWS_AS(Ordinal::omega_power(t), DepthError);
}

TEST_CASE("cardinality") {
    CHECK(cardinality(Ordinal(5)) == Cardinality{true, 5});
    CHECK(cardinality(o("w^w")) == Cardinality{false, 0});
    CHECK(cardinality(Ordinal(0)) == Cardinality{true, 0});
    CHECK(Cardinality{true, 100} < Cardinality{false, 0});
}

TEST_CASE("structure predicates") {
    CHECK(Ordinal(0).is_finite());
    CHECK(!Ordinal(0).is_limit());
    CHECK(!Ordinal(0).is_successor());
    CHECK(W().is_limit());
    CHECK(o("w+1").is_successor());
    CHECK(o("w+1").predecessor() == W());
    CHECK(o("w^2+w").is_limit());
}

TEST_CASE("parse/format round trip") {
    for (const char* lit : {"0", "5", "w", "w+1", "w*2", "w^2*3+w+5", "w^w", "w^(w+1)",
                            "w^(w*2)+w^2*4+17", "w^(w^2)+w^(w+1)*2"}) {
        Ordinal a = parse_ordinal(lit);
        CHECK(format(a) == lit);
        CHECK(parse_ordinal(format(a)) == a);
    }
    CHECK(parse_ordinal("w^1") == W());
    CHECK(parse_ordinal("w^0") == Ordinal(1));
    CHECK(parse_ordinal("  w + w^2 ") == o("w^2"));
    CHECK_THROWS_AS(parse_ordinal("w^"), ParseError);
    CHECK_THROWS_AS(parse_ordinal("(w"), ParseError);
    CHECK_THROWS_AS(parse_ordinal(""), ParseError);
    CHECK_THROWS_AS(parse_ordinal("w++1"), ParseError);
}

TEST_CASE("arithmetic laws on random triples") {
    std::mt19937_64 rng(20240811);
    for (int i = 0; i < 2000; ++i) {
        Ordinal a = sample_ordinal_below_omega_omega(rng);
        Ordinal b = sample_ordinal_below_omega_omega(rng);
        Ordinal c = sample_ordinal_below_omega_omega(rng);
        CHECK(add(add(a, b), c) == add(a, add(b, c)));
        CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
        CHECK(multiply(a, add(b, c)) == add(multiply(a, b), multiply(a, c)));
        if (a <= b) {
            CHECK(add(a, left_subtract(a, b)) == b);
        } else {
            CHECK(add(b, left_subtract(b, a)) == a);
        }
        if (b < c)
            CHECK(add(a, b) < add(a, c));
        CHECK(Ordinal::from_terms(a.terms()) == a);
        CHECK(parse_ordinal(format(a)) == a);
    }
}

TEST_CASE("non-commutativity witnesses") {
    CHECK(add(Ordinal(1), W()) == W());
    CHECK(add(W(), Ordinal(1)) != W());
    CHECK(multiply(Ordinal(2), W()) == W());
    CHECK(multiply(W(), Ordinal(2)) != W());
}

TEST_CASE("suffix splits") {
    Ordinal n = o("w^2+w*2+3");
    auto splits = suffix_splits(n);
    for (const auto& [head, tl] : splits)
        CHECK(add(head, tl) == n);
    // distinct tails: n, w*2+3, w+3, 3, 2, 1, 0
    CHECK(splits.size() == 7);
    // any b <= n subtracts to one of the listed tails
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        Ordinal b = sample_ordinal_below_omega_omega(rng);
        if (b > n)
            continue;
        Ordinal t = left_subtract(b, n);
        bool found = false;
        for (const auto& [head, tl] : splits)
            found = found || tl == t;
        CHECK(found);
    }
}

TEST_CASE("half of a sum") {
    CHECK(*half_of_sum(o("w^2*4+w+1")) == o("w^2*2+w+1"));
    CHECK(!half_of_sum(o("w*3")).has_value());
    CHECK(*half_of_sum(Ordinal(10)) == Ordinal(5));
    CHECK(*half_of_sum(Ordinal(0)) == Ordinal(0));
    Ordinal e = o("w^3+w+4");
    CHECK(*half_of_sum(add(e, e)) == e);
}

TEST_CASE("ordinal square roots") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 500; ++i) {
        Ordinal a = sample_ordinal_below_omega_omega(rng);
        Ordinal sq = multiply(a, a);
        auto r = ordinal_sqrt(sq);
        REQUIRE(r.has_value());
        CHECK(multiply(*r, *r) == sq);
    }
    CHECK(!ordinal_sqrt(Ordinal(2)).has_value());
    CHECK(*ordinal_sqrt(Ordinal(49)) == Ordinal(7));
    CHECK(!ordinal_sqrt(o("w^3")).has_value());   // odd power
    CHECK(*ordinal_sqrt(o("w^4*2")) == o("w^2*2"));
    CHECK(!ordinal_sqrt(o("w^6+w^2")).has_value());
    CHECK(*ordinal_sqrt(o("w^6+w^4")) == o("w^3+w"));
}

TEST_CASE("fundamental sequences") {
    CHECK(fundamental_sequence(W(), 3) == Ordinal(3));
    CHECK(fundamental_sequence(o("w^2"), 2) == o("w*2"));
    CHECK(fundamental_sequence(o("w*2"), 5) == o("w+5"));
    CHECK(fundamental_sequence(o("w^w"), 3) == o("w^3"));
    CHECK(fundamental_sequence(o("w^2+w"), 4) == o("w^2+4"));
    for (uint64_t k = 0; k < 5; ++k)
        CHECK(fundamental_sequence(o("w^w"), k) < fundamental_sequence(o("w^w"), k + 1));
}
