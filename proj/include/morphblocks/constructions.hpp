#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "morphblocks/diophantine.hpp"
#include "morphblocks/linalg.hpp"
#include "morphblocks/stream.hpp"
#include "morphblocks/word.hpp"

namespace morphblocks {

// Marker layout of a constructed witness word. Plain shape puts one marker
// beta before each digit segment h^j(0); the two-group shape inserts
// beta 0 (gamma 0)^s beta 0 (gamma 0)^t, i.e. two marker ones per segment
// with inert gamma padding.
struct MarkerShape {
    unsigned s = 0, t = 0;
    bool two_groups = false;
};

// Outcome of a witness construction: the produced spec (when the word is
// morphic), the digit matrix, the growth target with certification, exact
// one positions with consecutive ratios, and the gap-condition status.
struct ConstructionReport {
    std::string kind;                    // perron | remark2 | rational
    bool has_spec = false;
    MorphicSpec spec;                    // meaningful only when has_spec
    IntMatrix matrix;                    // digit matrix A (marker constructions)
    MarkerShape shape;
    std::string target;                  // "p/q" or decimal text
    BigRat target_value;                 // exact when target_exact
    bool target_exact = false;
    std::optional<EigenInterval> eigen;  // certified dominant eigenvalue of A
    std::vector<BigInt> ones;            // one positions n_0 < n_1 < ...
    std::vector<BigRat> ratios;          // n_{j+1} / n_j
    ClassCReport class_c;
    unsigned p = 0, q = 0;               // rational construction parameters
};

// Morphic word over {alpha, beta} plus k digit letters whose one-position
// ratios approach the dominant eigenvalue of the digit matrix; coding sends
// beta to 1 and everything else to 0. Integer form: mu >= 2 picks the stock
// 2x2 matrix with spectral radius exactly mu (invalid_params below 2).
// Matrix form: requires a primitive matrix with no zero column (not_perron
// otherwise); the target is certified by an eigenvalue interval.
ConstructionReport perron_spec(unsigned mu, std::size_t ones_count = 26);
ConstructionReport perron_spec(const IntMatrix& a, std::size_t ones_count = 26,
                               double tol = 1e-9);

// Two ones per segment: fixed point alpha beta 0 (gamma 0)^s beta 0
// (gamma 0)^t h(0) ... with the inert letter gamma padding the marker pair.
ConstructionReport remark2_spec(unsigned mu, unsigned s, unsigned t,
                                std::size_t ones_count = 26);
ConstructionReport remark2_spec(const IntMatrix& a, unsigned s, unsigned t,
                                std::size_t ones_count = 26, double tol = 1e-9);

// Exact one positions of a marker construction, extended arithmetically from
// the matrix (stream expansion would overflow long before j gets large).
std::vector<BigInt> construction_ones(const IntMatrix& a, const MarkerShape& shape,
                                      std::size_t count);

// n_j = mu^j: strict gap-condition witness (every consecutive ratio is mu).
std::vector<BigInt> power_ones(unsigned mu, std::size_t count);

// Characteristic word of { m p^h : p <= m <= q p, h >= 0 } for p > q >= 1,
// p >= 2: membership is decided by stripping factors of p and range-testing
// every intermediate quotient. One-position ratios accumulate at p/q.
struct RationalWordParams {
    unsigned p = 3, q = 2;
};

bool rational_member(const RationalWordParams& rp, u64 n);
StreamPtr rational_word_stream(const RationalWordParams& rp);
ConstructionReport rational_word(unsigned p, unsigned q,
                                 std::size_t ones_count = 24);

// p-kernel exploration of an arbitrary stream: elements are the subsequences
// n -> w[P n + r] with P = p^e, 0 <= r < P; identified by comparing prefixes
// of length `depth`, rechecked at 2*depth (a disagreement between the two
// depths downgrades the verdict to "inconclusive"). Element count only.
struct KernelReport {
    std::size_t size = 0;
    std::string verdict;   // finite | inconclusive
    std::size_t depth = 0;
    std::size_t max_elems = 0;
};

KernelReport p_kernel(WordStream& w, unsigned p, std::size_t depth = 64,
                      std::size_t max_elems = 4096);

// Stock specs used across tests and the CLI.
MorphicSpec thue_morse_spec();
MorphicSpec powers_of_two_spec();
MorphicSpec fibonacci_spec();

} // namespace morphblocks
