#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace cakecut {

// Exact rational. Canonical reduced form with positive denominator is
// maintained by GMP; no floating point is used anywhere in the engine.
using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline std::string rat_str(const Rat& q) {
    return q.get_str();
}

// Parses "p/q" or "p". Returns nullopt on malformed input or q == 0.
inline std::optional<Rat> parse_rat(const std::string& s) {
    if (s.empty()) return std::nullopt;
    auto bad = [&](const std::string& part) {
        if (part.empty()) return true;
        std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
        if (i == part.size()) return true;
        for (; i < part.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(part[i]))) return true;
        return false;
    };
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (bad(num) || bad(den)) return std::nullopt;
    Rat q;
    if (mpq_set_str(q.get_mpq_t(), (num + "/" + den).c_str(), 10) != 0) return std::nullopt;
    if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0) return std::nullopt;
    q.canonicalize();
    return q;
}

inline Int floor_div(const Rat& q) {
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), mpq_numref(q.get_mpq_t()), mpq_denref(q.get_mpq_t()));
    return r;
}

inline Int ceil_div(const Rat& q) {
    Int r;
    mpz_cdiv_q(r.get_mpz_t(), mpq_numref(q.get_mpq_t()), mpq_denref(q.get_mpq_t()));
    return r;
}

// floor(a / b) as an integer, b > 0.
inline Int floor_quotient(const Rat& a, const Rat& b) {
    return floor_div(Rat(a / b));
}

inline long to_long(const Int& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("integer too large");
    return z.get_si();
}

// Rational interval [lo, hi] enclosing ln(x) for rational x > 0.
// Uses ln x = 2 atanh(z), z = (x-1)/(x+1), after range reduction by powers
// of two so the series converges quickly; the tail bound is outward.
std::pair<Rat, Rat> ln_interval(const Rat& x, int terms = 24);

// Smallest integer t with t >= (num_factor * ln(arg)) / den_factor, certified
// by refining the ln interval until the floor/ceil of both endpoints agree.
long certified_ceil_ln(const Rat& arg, const Rat& num_factor, const Rat& den_factor);

// Smallest integer t with t >= ln(a) / ln(b), for a >= 1 and b > 1.
long certified_ceil_ln_ratio(const Rat& a, const Rat& b);

}  // namespace cakecut
