#pragma once

#include <optional>
#include <string>
#include <vector>

#include "morphblocks/blocks.hpp"
#include "morphblocks/linalg.hpp"
#include "morphblocks/stream.hpp"

namespace morphblocks {

// g = h^e with e = bool_stabilize(Bool(A(h))): every power of g then has the
// same letter-reachability pattern, which the chain analysis relies on. The
// fixed point is unchanged.
struct NormalizedSpec {
    MorphicSpec spec;
    unsigned exponent = 1;
};

NormalizedSpec normalize_spec(const MorphicSpec& spec);

// Stretch of one chain step: how the next block's edges sit relative to the
// image of the previous block's edge letters. sign: +1 the block grew past
// the image (word prepended/appended), -1 it receded, 0 flush.
struct StretchRecord {
    Word sigma;          // left stretch word
    int sigma_sign = 0;
    Word rho;            // right stretch word
    int rho_sign = 0;
    int left_pivot = -1; // letters (as int) controlling the next stretch
    int right_pivot = -1;

    bool operator==(const StretchRecord&) const = default;
};

struct DeltaChain {
    std::vector<BlockOccurrence> elements;   // successive maximal blocks
    std::vector<StretchRecord> stretches;    // stretches[s]: elements[s+1] vs elements[s]
    Word signature;                          // window around the root's inverse image
    bool truncated = false;                  // horizon stopped the chain
};

struct CycleInfo {
    std::size_t preperiod = 0;
    std::size_t period = 1;
    std::size_t confirmed = 0;   // states seen beyond the preperiod
    bool low_confidence = false; // confirmed < requested confirmation count
};

struct AnalysisBudget {
    u64 stats_symbols = 1'000'000; // empirical ratio statistics range
    u64 horizon = 10'000'000;      // hard cap for chain probing / block growth
    std::size_t tail_window = 8;
    std::size_t confirm = 8;       // cycle states required beyond the preperiod
    std::size_t preperiod_cap = 16;
    std::size_t period_cap = 16;
    BigRat tol = make_rat(BigInt(1), pow_ui(BigInt(10), 12));
    std::string mode = "auto";     // auto | exact | empirical
};

struct LimsupValue {
    enum class Kind { rational, interval, estimate };
    Kind kind = Kind::estimate;
    BigRat value;      // rational / estimate payload
    BigRat lo, hi;     // interval payload

    const BigRat& upper() const { return kind == Kind::interval ? hi : value; }
};

struct ChainAnalysis {
    u64 root_i = 0, root_j = 0;
    std::size_t elements = 0;
    CycleInfo cycle;
    bool cycle_found = false;
    std::string method;  // uniform-closed-form | primitive-eigen | empirical
    LimsupValue value;
    BigRat ratio_bound;  // 1 + M + 2M/|u0| for this chain
};

struct LimsupReport {
    LimsupValue value;
    std::string method;          // winning method, or bounded/finite
    std::string classification;  // rational | algebraic | estimate-only
    std::size_t degree_bound = 0;
    unsigned normalize_exponent = 1;
    std::vector<ChainAnalysis> chains;
    RatioStats stats;
    std::size_t blocks_scanned = 0;
    std::string note;
};

// Δ over the coded alphabet pulled back through the coding (identity when
// the spec has none).
LetterSet pull_back_delta(const MorphicSpec& spec, const LetterSet& delta_coded);

// Morphism-level hypothesis checks on the normalized spec: which letters
// occur (and occur infinitely often), and whether Δ-blocks are unbounded
// (some occurring growing letter's image alphabet is inside Δ').
struct HypothesisInfo {
    LetterSet occurring;
    LetterSet infinitely_occurring;
    bool unbounded_blocks = false;
    bool infinitely_many_terminators = false;
    bool infinitely_many_delta = false;
};

HypothesisInfo check_hypotheses(const NormalizedSpec& ns, const LetterSet& delta_pure);

// Chain discovery: scan maximal Δ'-blocks of the pure fixed point, link each
// qualifying block (i > M, |u| > M²) to the unique maximal block containing
// the image of its core, and keep one representative chain per signature
// (the subword of length <= M² + 2M around the root's inverse image).
std::vector<DeltaChain> link_blocks(const NormalizedSpec& ns, const LetterSet& delta_pure,
                                    const AnalysisBudget& budget,
                                    std::vector<BlockOccurrence>* all_blocks = nullptr);

// Fill chain.stretches from image geometry; needs the same normalized spec.
void compute_stretches(DeltaChain& chain, const NormalizedSpec& ns,
                       const LetterSet& delta_pure);

// Minimal (preperiod, period) consistent with the observed stretch states;
// throws horizon_exceeded when nothing fits under the caps.
CycleInfo analyze_stretches(const DeltaChain& chain, const AnalysisBudget& budget);

// Uniform closed form for one phase of a settled chain:
//   limit = 1 + ((m-1)·|u0| + y) / ((m-1)·|v0| + x)
// with m the effective width (m_h^period). Throws degenerate_denominator.
BigRat exact_limsup_uniform(const BigInt& m_eff, const BigInt& u0_len, const BigInt& v0_len,
                            const BigInt& y, const BigInt& x);

// Certified interval around 1 + (ℓU + ℓY/(λ-1)) / (ℓV + ℓX/(λ-1)) for a
// primitive incidence matrix, from certified ℓ and λ enclosures. The core
// enclosure is refined to width <= tol/2 and padded by tol/4 per side, so a
// geometric-tail iterate sits inside whenever it is within tol/4 of the
// limit. Throws non_primitive / lambda_not_greater_than_one /
// precision_exhausted.
EigenInterval exact_limit_primitive(const IntMatrix& a, const ParikhVector& u0,
                                    const ParikhVector& v0, const ParikhVector& x,
                                    const ParikhVector& y, const BigRat& tol);

// Full pipeline for Δ-blocks: normalize, hypothesis checks, bounded branch
// (limsup 1 / finite max), else chains -> exact or empirical per chain,
// max over chains.
LimsupReport limsup_delta(const MorphicSpec& spec, const LetterSet& delta_coded,
                          const AnalysisBudget& budget = {});

// x-block variant: per-phase empirical tail estimates (no exact route).
LimsupReport limsup_x(const MorphicSpec& spec, const Word& x_coded,
                      const AnalysisBudget& budget = {});

} // namespace morphblocks
