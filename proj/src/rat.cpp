#include "cakecut/rat.hpp"

namespace cakecut {

namespace {

// atanh(z) = sum z^(2k+1)/(2k+1), |z| < 1; returns [lo, hi] with an outward
// tail bound z^(2K+1)/((2K+1)(1-z^2)).
std::pair<Rat, Rat> atanh_interval(const Rat& z, int terms) {
    Rat z2 = z * z;
    Rat pow = z;
    Rat sum = 0;
    for (int k = 0; k < terms; ++k) {
        sum += pow / (2 * k + 1);
        pow *= z2;
    }
    Rat tail = pow / ((2 * terms + 1) * (1 - z2));
    return {sum, sum + tail};
}

}  // namespace

std::pair<Rat, Rat> ln_interval(const Rat& x, int terms) {
    if (sgn(x) <= 0) throw std::domain_error("ln of non-positive rational");
    if (x < 1) {
        auto [lo, hi] = ln_interval(Rat(1 / x), terms);
        return {-hi, -lo};
    }
    // Reduce to r in [1, 2) so the atanh argument stays <= 1/3.
    long m = 0;
    Rat r = x;
    while (r >= 2) {
        r /= 2;
        ++m;
    }
    auto [r_lo, r_hi] = atanh_interval(Rat((r - 1) / (r + 1)), terms);
    Rat lo = 2 * r_lo, hi = 2 * r_hi;
    if (m > 0) {
        auto [l2_lo, l2_hi] = atanh_interval(make_rat(1, 3), terms);
        lo += m * 2 * l2_lo;
        hi += m * 2 * l2_hi;
    }
    return {lo, hi};
}

long certified_ceil_ln(const Rat& arg, const Rat& num_factor, const Rat& den_factor) {
    for (int terms = 16; terms <= 1024; terms *= 2) {
        auto [lo, hi] = ln_interval(arg, terms);
        Int c_lo = ceil_div(Rat(num_factor * lo / den_factor));
        Int c_hi = ceil_div(Rat(num_factor * hi / den_factor));
        if (c_lo == c_hi) return to_long(c_lo);
    }
    throw std::runtime_error("ln interval did not converge (argument on an integer boundary?)");
}

long certified_ceil_ln_ratio(const Rat& a, const Rat& b) {
    if (a <= 1) return 0;
    if (b <= 1) throw std::domain_error("ratio base must exceed 1");
    for (int terms = 16; terms <= 1024; terms *= 2) {
        auto [a_lo, a_hi] = ln_interval(a, terms);
        auto [b_lo, b_hi] = ln_interval(b, terms);
        Int c_lo = ceil_div(Rat(a_lo / b_hi));
        Int c_hi = ceil_div(Rat(a_hi / b_lo));
        if (c_lo == c_hi) return to_long(c_lo);
    }
    throw std::runtime_error("ln ratio interval did not converge");
}

}  // namespace cakecut
