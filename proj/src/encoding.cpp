#include "afav/encoding.hpp"

#include <algorithm>
#include <memory>
#include <set>

#include "afav/errors.hpp"

namespace afav {

namespace {

void check_alphabet(const std::string& w, int r) {
    for (char ch : w) {
        int v = ch - '0';
        if (v < 0 || v >= r)
            throw InvalidSymbol("symbol '" + std::string(1, ch) + "' not in alphabet of size " +
                                std::to_string(r));
    }
}

/// Number of strings of length <= n over an alphabet of size r.
Int strings_up_to(int n, int r) {
    Int total = 0;
    Int pw = 1;
    for (int j = 0; j <= n; ++j) {
        total += pw;
        pw *= r;
    }
    return total;
}

}  // namespace

bool LanguageOracle::contains(const std::string& w) const {
    check_alphabet(w, alphabet_size);
    if (support_bound && static_cast<int>(w.size()) > *support_bound) return false;
    return membership(w);
}

int LanguageOracle::digit(const Int& shortlex_i) const {
    return contains(shortlex_string(shortlex_i, alphabet_size)) ? 1 : 0;
}

LanguageOracle LanguageOracle::from_members(int alphabet_size, std::vector<std::string> members,
                                            std::string name) {
    int bound = 0;
    for (const auto& m : members) {
        check_alphabet(m, alphabet_size);
        bound = std::max(bound, static_cast<int>(m.size()));
    }
    auto set = std::make_shared<std::set<std::string>>(members.begin(), members.end());
    LanguageOracle L;
    L.alphabet_size = alphabet_size;
    L.membership = [set](const std::string& w) { return set->count(w) > 0; };
    L.support_bound = bound;
    L.name = std::move(name);
    return L;
}

LanguageOracle LanguageOracle::empty(int alphabet_size) {
    LanguageOracle L;
    L.alphabet_size = alphabet_size;
    L.membership = [](const std::string&) { return false; };
    L.support_bound = 0;
    L.name = "empty";
    return L;
}

LanguageOracle LanguageOracle::all_strings(int alphabet_size, int support_bound) {
    LanguageOracle L;
    L.alphabet_size = alphabet_size;
    L.membership = [](const std::string&) { return true; };
    L.support_bound = support_bound;
    L.name = "all";
    return L;
}

Int shortlex_index(const std::string& w, int r) {
    if (r < 2) throw InvalidSymbol("alphabet size must be >= 2");
    check_alphabet(w, r);
    // (w)_r + 1 + (number of strings strictly shorter than w)
    Int value = 0;
    for (char ch : w) value = value * r + (ch - '0');
    Int shorter = 0;
    Int pw = 1;
    for (std::size_t j = 0; j < w.size(); ++j) {
        shorter += pw;
        pw *= r;
    }
    return value + 1 + shorter;
}

std::string shortlex_string(const Int& i, int r) {
    if (r < 2) throw InvalidSymbol("alphabet size must be >= 2");
    if (i < 1) throw InvalidSymbol("shortlex index must be >= 1");
    Int n = i - 1;  // strings before position i
    int len = 0;
    Int pw = 1;  // r^len
    while (n >= pw) {
        n -= pw;
        pw *= r;
        ++len;
    }
    // n is now the rank of the string among the length-len strings.
    std::string out(static_cast<std::size_t>(len), '0');
    for (int pos = len - 1; pos >= 0; --pos) {
        out[static_cast<std::size_t>(pos)] = static_cast<char>('0' + static_cast<int>(n % r));
        n /= r;
    }
    return out;
}

AlphaValue alpha_value(const LanguageOracle& L, int d, const Int& j, int depth) {
    if (d < 3) throw UnsupportedParams("alpha base must be >= 3");
    if (j < 1) throw InvalidSymbol("alpha start index must be >= 1");
    AlphaValue a;
    a.base = d;
    a.start_index = j;

    Rational sum(0);
    Rational term(1, d);  // d^{-(i-j+1)} for i = j
    if (L.finite()) {
        Int last = strings_up_to(*L.support_bound, L.alphabet_size);
        for (Int i = j; i <= last; ++i) {
            if (L.digit(i)) sum += term;
            term /= d;
        }
        a.value = ProbabilityInterval::point(sum);
        a.truncation_depth = -1;
    } else {
        for (Int i = j; i < j + depth; ++i) {
            if (L.digit(i)) sum += term;
            term /= d;
        }
        // Unsummed tail is in [0, d^{-depth}/(d-1)].
        Rational tail = rat_pow(Rational(1, d), static_cast<unsigned long>(depth)) / (d - 1);
        a.value = ProbabilityInterval::bounds(sum, sum + tail);
        a.truncation_depth = depth;
    }
    return a;
}

AlphaValue alpha_shift(const AlphaValue& a, int digit) {
    AlphaValue out;
    out.base = a.base;
    out.start_index = a.start_index + 1;
    out.truncation_depth = a.exact() ? -1 : a.truncation_depth - 1;
    if (!a.exact() && out.truncation_depth < 0)
        throw InconclusiveAtDepth("alpha truncation budget exhausted; increase depth");
    Interval v = (a.value.as_interval() * Rational(a.base)) - Rational(digit);
    // The true value lies in [0, 1/(d-1)]; truncation slack can push the
    // endpoints past that, so intersect.
    Rational lo = std::max(v.lo, Rational(0));
    Rational hi = std::min(v.hi, Rational(1, a.base - 1));
    out.value = ProbabilityInterval::bounds(lo, hi);
    return out;
}

BetaTrace BetaTrace::start(const AlphaValue& alpha1) {
    if (alpha1.start_index != 1)
        throw Error("beta trace must start from alpha_L[1]");
    BetaTrace t;
    t.current = alpha1.value.as_interval();
    return t;
}

BetaTrace beta_step(const BetaTrace& t, int guess, int d, int true_digit) {
    BetaTrace out = t;
    out.current = (t.current * Rational(d)) - Rational(guess);
    out.guesses.push_back(guess);
    if (!out.first_wrong_index && guess != true_digit)
        out.first_wrong_index = Int(out.guesses.size());
    return out;
}

Rational divergence_floor(const BetaTrace& t, int d) {
    if (!t.first_wrong_index) throw NotDiverged();
    Rational floor(d - 2, d - 1);
    Int extra = Int(t.guesses.size()) - *t.first_wrong_index;
    for (Int i = 0; i < extra; ++i) floor = floor * d - 1;
    return floor;
}

}  // namespace afav
