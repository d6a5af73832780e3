#include <doctest.h>

#include <random>

#include "afav/encoding.hpp"

using namespace afav;

namespace {

LanguageOracle random_finite_language(std::mt19937_64& g, int r, int bound) {
    std::vector<std::string> members;
    Int count = 0;
    Int pw = 1;
    for (int j = 0; j <= bound; ++j) {
        count += pw;
        pw *= r;
    }
    for (Int i = 1; i <= count; ++i)
        if (g() & 1) members.push_back(shortlex_string(i, r));
    return LanguageOracle::from_members(r, members);
}

}  // namespace

TEST_CASE("shortlex index, binary: (1w) read in base 2") {
    CHECK(shortlex_index("", 2) == 1);
    CHECK(shortlex_index("0", 2) == 2);
    CHECK(shortlex_index("1", 2) == 3);
    CHECK(shortlex_index("00", 2) == 4);
    CHECK(shortlex_index("11", 2) == 7);
    CHECK(shortlex_index("101", 2) == 13);
    CHECK(shortlex_index("0000", 2) == 16);
}

TEST_CASE("shortlex index, ternary") {
    CHECK(shortlex_index("", 3) == 1);
    CHECK(shortlex_index("0", 3) == 2);
    CHECK(shortlex_index("2", 3) == 4);
    CHECK(shortlex_index("00", 3) == 5);
    CHECK(shortlex_index("21", 3) == 12);
    CHECK(shortlex_index("000", 3) == 14);
}

TEST_CASE("shortlex rejects foreign symbols") {
    CHECK_THROWS_AS(shortlex_index("2", 2), InvalidSymbol);
    CHECK_THROWS_AS(shortlex_index("a", 2), InvalidSymbol);
    CHECK_THROWS_AS(shortlex_string(0, 2), InvalidSymbol);
}

TEST_CASE("property: shortlex_string is the inverse of shortlex_index") {
    for (int r : {2, 3, 5}) {
        for (Int i = 1; i <= 4000; ++i) {
            std::string w = shortlex_string(i, r);
            CHECK(shortlex_index(w, r) == i);
        }
    }
}

TEST_CASE("property: shortlex order is by length then lexicographic") {
    for (int r : {2, 3}) {
        std::string prev = shortlex_string(1, r);
        for (Int i = 2; i <= 2000; ++i) {
            std::string cur = shortlex_string(i, r);
            bool ordered = prev.size() < cur.size() || (prev.size() == cur.size() && prev < cur);
            CHECK(ordered);
            prev = cur;
        }
    }
}

TEST_CASE("alpha of simple languages") {
    CHECK(alpha_value(LanguageOracle::empty(2), 6, 1).value.lo == 0);

    // L = {"1"}: only digit 3 of the characteristic sequence is 1.
    LanguageOracle one = LanguageOracle::from_members(2, {"1"});
    CHECK(alpha_value(one, 6, 1).value.lo == rat(1, 216));
    CHECK(alpha_value(one, 6, 3).value.lo == rat(1, 6));
    CHECK(alpha_value(one, 6, 4).value.lo == 0);

    // All strings of length <= 1: digits 1..3 are 1.
    LanguageOracle all1 = LanguageOracle::all_strings(2, 1);
    CHECK(alpha_value(all1, 6, 1).value.lo == rat(1, 6) + rat(1, 36) + rat(1, 216));
}

TEST_CASE("alpha shift matches a direct tail computation") {
    std::mt19937_64 g(31);
    for (int n = 0; n < 50; ++n) {
        LanguageOracle L = random_finite_language(g, 2, 3);
        AlphaValue a = alpha_value(L, 6, 1);
        for (Int j = 1; j <= 20; ++j) {
            AlphaValue shifted = alpha_shift(a, L.digit(j));
            CHECK(shifted.value == alpha_value(L, 6, j + 1).value);
            a = shifted;
        }
    }
}

TEST_CASE("property: alpha stays within [0, 1/(d-1)]") {
    std::mt19937_64 g(32);
    int cases = 0;
    while (cases < 10000) {
        LanguageOracle L = random_finite_language(g, 2, 3);
        for (int d : {6, 18}) {
            for (Int j = 1; j <= 8; ++j) {
                AlphaValue a = alpha_value(L, d, j);
                CHECK(a.value.lo >= 0);
                CHECK(a.value.hi <= Rational(1, d - 1));
                ++cases;
            }
        }
    }
}

TEST_CASE("infinite-support alpha gives certified, nested intervals") {
    LanguageOracle even;
    even.alphabet_size = 2;
    even.membership = [](const std::string& w) { return w.size() % 2 == 0; };
    even.name = "even-length";

    AlphaValue shallow = alpha_value(even, 6, 1, 4);
    AlphaValue deep = alpha_value(even, 6, 1, 12);
    CHECK(!shallow.exact());
    CHECK(shallow.value.hi - shallow.value.lo <= rat_pow(rat(1, 6), 4) / 5);
    CHECK(shallow.value.lo <= deep.value.lo);
    CHECK(deep.value.hi <= shallow.value.hi);

    AlphaValue tight = alpha_value(even, 6, 1, 40);
    AlphaValue shifted = alpha_shift(tight, even.digit(1));
    CHECK(shifted.value.lo <= alpha_value(even, 6, 2, 30).value.hi);
    CHECK(alpha_value(even, 6, 2, 30).value.lo <= shifted.value.hi);

    AlphaValue exhausted = alpha_value(even, 6, 1, 1);
    AlphaValue once = alpha_shift(exhausted, even.digit(1));
    CHECK_THROWS_AS(alpha_shift(once, even.digit(2)), InconclusiveAtDepth);
}

TEST_CASE("beta trace follows alpha while guesses are correct") {
    LanguageOracle L = LanguageOracle::from_members(2, {"0", "11"});
    BetaTrace t = BetaTrace::start(alpha_value(L, 6, 1));
    for (Int i = 1; i <= 10; ++i) {
        t = beta_step(t, L.digit(i), 6, L.digit(i));
        CHECK(!t.first_wrong_index);
        CHECK(t.current == alpha_value(L, 6, i + 1).value.as_interval());
    }
    CHECK_THROWS_AS(divergence_floor(t, 6), NotDiverged);
}

TEST_CASE("property: after a wrong guess |beta| dominates the divergence floor") {
    std::mt19937_64 g(33);
    int cases = 0;
    while (cases < 10000) {
        LanguageOracle L = random_finite_language(g, 2, 2);
        BetaTrace t = BetaTrace::start(alpha_value(L, 6, 1));
        int steps = 1 + static_cast<int>(g() % 12);
        for (int i = 1; i <= steps; ++i) {
            int truth = L.digit(i);
            int guess = static_cast<int>(g() % 2);
            t = beta_step(t, guess, 6, truth);
            if (t.first_wrong_index) {
                Rational floor = divergence_floor(t, 6);
                CHECK(floor >= rat(4, 5));
                CHECK(t.current.abs().lo >= floor);
                ++cases;
            }
        }
    }
}

TEST_CASE("divergence floor grows strictly") {
    LanguageOracle L = LanguageOracle::empty(2);
    BetaTrace t = BetaTrace::start(alpha_value(L, 6, 1));
    t = beta_step(t, 1, 6, 0);  // wrong
    Rational prev = divergence_floor(t, 6);
    CHECK(prev == rat(4, 5));
    for (int i = 0; i < 8; ++i) {
        t = beta_step(t, 0, 6, 0);
        Rational cur = divergence_floor(t, 6);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("oracle support bound cuts membership off") {
    LanguageOracle L = LanguageOracle::all_strings(2, 1);
    CHECK(L.contains("1"));
    CHECK(!L.contains("11"));
    CHECK_THROWS_AS(L.contains("2"), InvalidSymbol);
    CHECK(L.digit(3) == 1);
    CHECK(L.digit(4) == 0);
}
