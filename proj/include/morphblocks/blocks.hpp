#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "morphblocks/stream.hpp"

namespace morphblocks {

enum class BlockKind { delta, pattern };

// Maximal block occurrence w_i … w_j (inclusive). Ordinals count every block
// from the one at position 0 on; ratio aggregation skips i == 0 separately.
struct BlockOccurrence {
    u64 i = 0;
    u64 j = 0;
    std::size_t k = 0;           // ordinal
    BlockKind kind = BlockKind::delta;
    int phase = -1;              // pattern blocks: start of first full copy mod d

    u64 len() const { return j - i + 1; }
};

using LetterSet = std::vector<bool>; // indexed by letter

struct ScanLimit {
    u64 horizon = 10'000'000;                  // positions scanned
    std::optional<std::size_t> count;          // stop after this many blocks
    u64 block_horizon = 10'000'000;            // single-block length cap -> infinite_block
};

// Streaming scan for maximal delta-blocks (runs over the letter subset).
// A block still open when the scan stops is dropped: maximality on the right
// was never witnessed.
std::vector<BlockOccurrence> scan_delta_blocks(WordStream& w, const LetterSet& delta,
                                               const ScanLimit& limit = {});

struct XBlockPattern {
    Word x;
    std::vector<std::size_t> kmp_fail; // prefix function of x

    std::size_t period() const { return x.size(); }
};

XBlockPattern make_pattern(const Word& x); // throws pattern_degenerate on empty x

// Maximal x-blocks: maximal runs of period |x| that contain at least one full
// copy of x. Phase = (position of the first full copy) mod |x|. Unlike
// delta-blocks, consecutive x-blocks may be adjacent or overlap by < |x|.
std::vector<BlockOccurrence> scan_x_blocks(WordStream& w, const XBlockPattern& p,
                                           const ScanLimit& limit = {});

struct RatioStats {
    std::size_t count = 0;                  // all blocks, including i == 0
    std::optional<BigRat> max;              // running max of j/i, i >= 1
    std::optional<BigRat> tail;             // max over the last `window` eligible blocks
    std::size_t window = 8;
    std::optional<BigRat> bound;            // chain-derived cap when available
};

RatioStats ratio_stats(const std::vector<BlockOccurrence>& blocks, std::size_t window = 8);

// Split pattern blocks by phase class (d sequences, some possibly empty).
std::vector<std::vector<BlockOccurrence>> phase_partition(
    const std::vector<BlockOccurrence>& blocks, const XBlockPattern& p);

// d-letter window transform at offset m: windows equal to x collapse to d
// copies of a fresh letter (index = source alphabet size); all other windows
// pass through unchanged. Phase-m x-blocks then reappear as blocks of the
// fresh letter, with endpoints matching within d.
StreamPtr block_code_transform(StreamPtr source, std::size_t alphabet_size,
                               const XBlockPattern& p, std::size_t offset);

} // namespace morphblocks
