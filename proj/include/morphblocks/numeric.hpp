#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <string>

namespace morphblocks {

using u64 = std::uint64_t;
using i64 = std::int64_t;

// Exact arithmetic throughout: positions and counts are u64, everything that
// can outgrow 64 bits (matrix powers, partial sums b^-n, ratio arithmetic on
// them) lives in GMP classes.
using BigInt = mpz_class;
using BigRat = mpq_class;

inline BigRat make_rat(const BigInt& num, const BigInt& den) {
    BigRat r(num, den);
    r.canonicalize();
    return r;
}

inline BigRat make_rat(long num, long den = 1) { return make_rat(BigInt(num), BigInt(den)); }

BigInt pow_ui(const BigInt& base, unsigned long exp);

// "p/q" (or just "p" when q == 1), canonical form.
std::string rat_str(const BigRat& r);

// Decimal rendering to `sig` significant digits, round-half-away-from-zero,
// computed exactly over integers so the output is platform independent.
std::string rat_decimal(const BigRat& r, int sig = 12);

// Parse "p/q", "p", or decimal/scientific forms like "0.01" and "1e-9";
// throws errc::invalid_params on junk.
BigRat parse_rat(const std::string& text);

double rat_double(const BigRat& r);

// log2 of a positive big integer, good to ~1e-9 relative error (used only by
// estimate-grade code paths, never by exact claims).
double log2_big(const BigInt& v);

} // namespace morphblocks
