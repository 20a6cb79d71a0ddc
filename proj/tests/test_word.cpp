#include <random>

#include "doctest.h"
#include "ordauto/sampling.hpp"
#include "ordauto/word.hpp"

using namespace ordauto;

namespace {
BlockWord w(const char* lit) { return parse_word(lit); }
Ordinal o(const char* lit) { return parse_ordinal(lit); }
}  // namespace

TEST_CASE("alphabet basics") {
    Alphabet a({"0", "1"});
    CHECK(a.contains("0"));
    CHECK(!a.contains("2"));
    CHECK(a.index_of("1") == 1);
    CHECK_THROWS_AS(Alphabet({"lh"}), AlphabetError);
    CHECK_THROWS_AS(Alphabet({"lambda"}), AlphabetError);
    CHECK(Alphabet({"0"}).with_lambda().has_lambda());
}

TEST_CASE("word normalization") {
    CHECK(BlockWord::of({{"0", o("w")}, {"0", Ordinal(1)}}) == w("0^(w+1)"));
    CHECK(BlockWord::of({{"0", Ordinal(1)}, {"0", o("w")}}) == w("0^(w)"));
    CHECK(BlockWord::of({{"1", Ordinal(0)}, {"0", Ordinal(2)}}) == w("0^2"));
    CHECK(BlockWord::of({}).empty());
}

TEST_CASE("length") {
    CHECK(length(w("0^(w) 1^(w)")) == o("w*2"));
    CHECK(length(BlockWord()) == Ordinal(0));
    CHECK(length(w("0^5 1^(w)")) == o("w"));
}

TEST_CASE("concat") {
    CHECK(concat(w("0^(w)"), w("1^(w)")) == w("0^(w) 1^(w)"));
    CHECK(concat(w("0^3"), w("0^(w)")) == w("0^(w)"));
    BlockWord ww = w("0^(w) 1^2");
    CHECK(concat(BlockWord(), ww) == ww);
    CHECK(concat(ww, BlockWord()) == ww);
    BlockWord x = parse_word("a", Alphabet({"a"}));
    BlockWord y = parse_word("b", Alphabet({"b"}));
    CHECK_THROWS_AS(concat(x, y), AlphabetError);
}

TEST_CASE("slice") {
    CHECK(slice(w("0^(w) 1^(w)"), o("w"), o("w*2")) == w("1^(w)"));
    CHECK(slice(w("0^(w) 1^5"), o("w"), o("w+3")) == w("1^3"));
    CHECK(slice(w("0^(w) 1^(w)"), Ordinal(3), o("w")) == w("0^(w)"));
    BlockWord v = w("0^(w) 1^(w) 0^3");
    CHECK(slice(v, Ordinal(0), length(v)) == v);
    CHECK(slice(v, o("w*2"), o("w*2")).empty());
    CHECK_THROWS_AS(slice(v, o("w*2+4"), o("w*2+4")), RangeError);
    CHECK_THROWS_AS(slice(v, o("w"), Ordinal(3)), RangeError);
}

TEST_CASE("symbol_at") {
    BlockWord v = w("0^(w) 1^(w)");
    CHECK(symbol_at(v, o("w")) == "1");
    CHECK(symbol_at(v, Ordinal(0)) == "0");
    CHECK(symbol_at(v, o("w+5")) == "1");
    CHECK_THROWS_AS(symbol_at(v, o("w+w")), RangeError);
}

TEST_CASE("slice agrees with symbol_at spot checks") {
    BlockWord v = w("0^(w) 1^(w)");
    BlockWord s = slice(v, Ordinal(3), o("w"));
    // order type of [3, w) is w, all zeros
    CHECK(length(s) == o("w"));
    for (uint64_t i = 0; i < 20; ++i)
        CHECK(symbol_at(s, Ordinal(i)) == symbol_at(v, add(Ordinal(3), Ordinal(i))));
}

TEST_CASE("projection stats") {
    auto p0 = projection_stats(w("1 0^(w) 1"), "0");
    CHECK(p0.otp == o("w"));
    CHECK(!p0.card.finite);
    auto p1 = projection_stats(w("1 0^(w) 1"), "1");
    CHECK(p1.otp == Ordinal(2));
    CHECK(p1.card == Cardinality{true, 2});
    auto p2 = projection_stats(w("0^(w) 1^(w) 0^(w)"), "0");
    CHECK(p2.otp == o("w*2"));
    CHECK(!p2.card.finite);
}

TEST_CASE("projection otp equals length of the filtered word") {
    std::mt19937_64 rng(41);
    WordSampler sampler{Alphabet({"0", "1"})};
    for (int i = 0; i < 300; ++i) {
        BlockWord v = sampler.sample(rng);
        for (const Symbol& s : {Symbol("0"), Symbol("1")}) {
            std::vector<Block> kept;
            for (const Block& b : v.blocks())
                if (b.symbol == s)
                    kept.push_back(b);
            BlockWord filtered(v.alphabet(), kept);
            CHECK(projection_stats(v, s).otp == length(filtered));
        }
    }
}

TEST_CASE("slice composition property") {
    std::mt19937_64 rng(42);
    WordSampler sampler{Alphabet({"0", "1"})};
    for (int i = 0; i < 300; ++i) {
        BlockWord v = sampler.sample(rng);
        auto pos = split_positions(v);
        std::uniform_int_distribution<size_t> d(0, pos.size() - 1);
        Ordinal a = pos[d(rng)], b = pos[d(rng)], c = pos[d(rng)];
        if (b < a)
            std::swap(a, b);
        if (c < b)
            std::swap(b, c);
        if (b < a)
            std::swap(a, b);
        CHECK(concat(slice(v, a, b), slice(v, b, c)) == slice(v, a, c));
        CHECK(length(slice(v, a, b)) == left_subtract(a, b));
    }
}

TEST_CASE("length additivity over concat") {
    std::mt19937_64 rng(43);
    WordSampler sampler{Alphabet({"0", "1"})};
    for (int i = 0; i < 200; ++i) {
        BlockWord x = sampler.sample(rng), y = sampler.sample(rng);
        CHECK(length(concat(x, y)) == add(length(x), length(y)));
    }
}

TEST_CASE("word literals round trip") {
    for (const char* lit : {"eps", "0", "0^(w) 1^(w*2) 0^3", "1^(w^2)", "a b a", "0^17"}) {
        BlockWord v = parse_word(lit);
        CHECK(format(v) == lit);
        CHECK(parse_word(format(v)) == v);
    }
    CHECK_THROWS_AS(parse_word(""), ParseError);
    CHECK_THROWS_AS(parse_word("0^"), ParseError);
    CHECK_THROWS_AS(parse_word("0^(w"), ParseError);
    CHECK(parse_word("0^1") == parse_word("0"));
}
