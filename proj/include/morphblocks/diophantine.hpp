#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "morphblocks/numeric.hpp"
#include "morphblocks/stream.hpp"

namespace morphblocks {

// Base-b expansion d_0 . d_1 d_2 ... where d_n carries weight b^{-n} (d_0 is
// the integer part; all expansions built here keep it 0). When the expansion
// comes from a finite, complete support list, last_one marks the final
// nonzero digit: every later digit is known to be 0.
struct DigitExpansion {
    unsigned base = 2;
    StreamPtr digits;
    std::optional<BigInt> last_one;
};

// Expansion with 1s exactly at the given indices (strictly increasing, >= 1).
// complete=true asserts the list is the entire support, not a prefix of it.
DigitExpansion xi_from_indices(unsigned base, const std::vector<BigInt>& ones,
                               bool complete = false);

// Wrap an existing digit stream (e.g. a coded word read as digits).
DigitExpansion expansion_from_stream(unsigned base, StreamPtr digits);

// A maximal run of 0s or of (b-1)s at digit positions i..j (1-based)
// witnesses a rational approximation of quality (j - i + 1)/(i - 1);
// positions with i < 2 prove nothing and are skipped.
struct RunWitness {
    u64 start = 0, end = 0;  // digit positions, inclusive
    int digit = 0;           // 0 or b-1
    BigRat exponent;         // (end - start + 1) / (start - 1)
};

struct VbEstimate {
    BigRat best;                          // running sup of witness exponents
    std::optional<BigRat> tail;           // max over the trailing window
    std::optional<RunWitness> best_witness;
    std::vector<RunWitness> recent;       // the trailing window itself
    std::size_t witnesses = 0;
    std::size_t window = 8;
    u64 digits_scanned = 0;
};

// Scans digits d_1..d_N. A run still open at the scan edge is not maximal
// and yields no witness; a run known to extend forever (past last_one) means
// the value is rational and raises infinite_block.
VbEstimate v_b_estimate(const DigitExpansion& exp, u64 digit_count,
                        std::size_t window = 8);

// Exact partial sum of the first `take` ones: p / b^{n_take}, normalized.
BigRat truncate_value(const std::vector<BigInt>& ones, unsigned base,
                      std::size_t take);
// Same, reading a digit stream: contributions of the first `take` nonzero
// digits.
BigRat truncate_value(const DigitExpansion& exp, std::size_t take);

// Plain Euclidean continued fraction of a nonnegative rational.
std::vector<BigInt> continued_fraction(const BigRat& x, std::size_t max_terms = 64);

// Convergent denominators q_k from the quotient list.
std::vector<BigInt> convergent_denominators(const std::vector<BigInt>& cf);

// Irrationality-exponent cross-check from truncations of increasing depth:
// takes the continued fraction of the deepest one and returns
// 1 + max log q_{k+1} / log q_k over the last two eligible convergent pairs,
// skipping the final two quotients (truncation noise) and denominators below
// 16 (startup noise). Early pairs are excluded on purpose: their ratios stay
// well above the asymptotic growth rate even for bounded quotients.
struct MuFromCf {
    std::optional<double> value;   // empty: no eligible quotient pair
    std::size_t terms_used = 0;
};

MuFromCf mu_from_cf(const std::vector<BigRat>& truncations);
MuFromCf mu_from_quotients(const std::vector<BigInt>& cf);

// Gap condition on one positions: n_{j+1}/n_j >= 2 (exact comparison).
// "holds" everywhere, "eventual" from settles_at on, or "fails" when
// violations persist to the end of the observed data.
struct ClassCReport {
    std::string verdict;                         // holds | eventual | fails | n/a
    std::optional<std::size_t> first_violation;  // least j with n_{j+1} < 2 n_j
    std::optional<std::size_t> settles_at;       // eventual: clean from here on
    std::vector<std::size_t> violations;
    std::size_t checked = 0;
};

ClassCReport class_c_check(const std::vector<BigInt>& ones);

// Growth-based exponent estimate: running max and trailing-window max of
// n_{j+1}/n_j. Meaningful only under the gap condition; `applicable` records
// whether it held (possibly eventually). A tail window that is still strictly
// increasing flags divergence (no finite estimate).
struct MuEstimate {
    BigRat best;
    std::optional<BigRat> tail;
    bool applicable = false;
    bool diverging = false;
    std::size_t terms = 0;
};

MuEstimate mu_estimate(const std::vector<BigInt>& ones, std::size_t window = 8);

struct ExponentReport {
    VbEstimate vb;
    std::optional<MuEstimate> mu;
    std::optional<MuFromCf> mu_cf;
    ClassCReport class_c;
    unsigned base = 2;
};

} // namespace morphblocks
