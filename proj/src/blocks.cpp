#include "morphblocks/blocks.hpp"

#include <algorithm>
#include <deque>

namespace morphblocks {

std::vector<BlockOccurrence> scan_delta_blocks(WordStream& w, const LetterSet& delta,
                                               const ScanLimit& limit) {
    std::vector<BlockOccurrence> out;
    auto in_delta = [&](Letter l) { return l < delta.size() && delta[l]; };

    u64 stop = limit.horizon;
    bool end_witnesses = false; // a finite word's end closes a block; a horizon does not
    if (auto len = w.length(); len && *len <= stop) {
        stop = *len;
        end_witnesses = true;
    }

    std::optional<u64> open;
    for (u64 p = 0; p < stop; ++p) {
        Letter l = w.at(p);
        if (in_delta(l)) {
            if (!open) open = p;
            if (p - *open + 1 > limit.block_horizon)
                fail(errc::infinite_block, "run exceeded the single-block horizon");
        } else if (open) {
            out.push_back({*open, p - 1, out.size(), BlockKind::delta, -1});
            open.reset();
            if (limit.count && out.size() >= *limit.count) return out;
        }
    }
    if (open && end_witnesses)
        out.push_back({*open, stop - 1, out.size(), BlockKind::delta, -1});
    else if (open && stop - *open >= limit.block_horizon)
        fail(errc::infinite_block, "open run consumed the whole single-block horizon");
    return out;
}

XBlockPattern make_pattern(const Word& x) {
    if (x.empty()) fail(errc::pattern_degenerate, "empty pattern");
    XBlockPattern p;
    p.x = x;
    p.kmp_fail.assign(x.size(), 0);
    for (std::size_t i = 1; i < x.size(); ++i) {
        std::size_t m = p.kmp_fail[i - 1];
        while (m > 0 && x[i] != x[m]) m = p.kmp_fail[m - 1];
        if (x[i] == x[m]) ++m;
        p.kmp_fail[i] = m;
    }
    return p;
}

std::vector<BlockOccurrence> scan_x_blocks(WordStream& w, const XBlockPattern& p,
                                           const ScanLimit& limit) {
    const std::size_t d = p.period();
    std::vector<BlockOccurrence> out;

    u64 stop = limit.horizon;
    bool end_witnesses = false;
    if (auto len = w.length(); len && *len <= stop) {
        stop = *len;
        end_witnesses = true;
    }

    u64 last_j = 0;
    bool have_block = false;
    std::size_t m = 0;
    for (u64 pos = 0; pos < stop; ++pos) {
        Letter l = w.at(pos);
        while (m > 0 && l != p.x[m]) m = p.kmp_fail[m - 1];
        if (l == p.x[m]) ++m;
        if (m != d) continue;
        m = p.kmp_fail[m - 1];

        u64 q = pos + 1 - d;
        // a full copy inside the previous block belongs to that same run
        if (have_block && q + d - 1 <= last_j) continue;

        // grow the period-d run around the copy [q, q+d-1]
        u64 i = q, j = q + d - 1;
        bool witnessed = true;
        while (j + 1 < stop && w.at(j + 1) == w.at(j + 1 - d)) {
            ++j;
            if (j - i + 1 > limit.block_horizon)
                fail(errc::infinite_block, "run exceeded the single-block horizon");
        }
        if (j + 1 >= stop && !end_witnesses) witnessed = false;
        while (i > 0 && w.at(i - 1) == w.at(i - 1 + d)) --i;

        if (!witnessed) {
            if (stop - i >= limit.block_horizon)
                fail(errc::infinite_block, "open run consumed the whole single-block horizon");
            break; // right maximality unknown; later blocks start even further out
        }
        out.push_back({i, j, out.size(), BlockKind::pattern, static_cast<int>(q % d)});
        last_j = j;
        have_block = true;
        if (limit.count && out.size() >= *limit.count) return out;
    }
    return out;
}

RatioStats ratio_stats(const std::vector<BlockOccurrence>& blocks, std::size_t window) {
    RatioStats st;
    st.window = window;
    st.count = blocks.size();
    std::deque<BigRat> tail;
    for (const auto& b : blocks) {
        if (b.i == 0) continue; // ratio j/i needs i >= 1
        BigRat r = make_rat(BigInt(b.j), BigInt(b.i));
        if (!st.max || r > *st.max) st.max = r;
        tail.push_back(std::move(r));
        if (tail.size() > window) tail.pop_front();
    }
    if (!tail.empty()) st.tail = *std::max_element(tail.begin(), tail.end());
    return st;
}

std::vector<std::vector<BlockOccurrence>> phase_partition(
    const std::vector<BlockOccurrence>& blocks, const XBlockPattern& p) {
    std::vector<std::vector<BlockOccurrence>> parts(p.period());
    for (const auto& b : blocks) {
        if (b.phase < 0 || static_cast<std::size_t>(b.phase) >= parts.size())
            fail(errc::invalid_params, "block without a phase in phase_partition");
        parts[static_cast<std::size_t>(b.phase)].push_back(b);
    }
    return parts;
}

namespace {

class BlockCodeStream final : public WordStream {
  public:
    BlockCodeStream(StreamPtr source, std::size_t alphabet_size, XBlockPattern p,
                    std::size_t offset)
        : WordStream("block code of " + source->origin()), src_(std::move(source)),
          p_(std::move(p)), offset_(offset), fresh_(static_cast<Letter>(alphabet_size)) {}

    std::optional<u64> length() const override { return src_->length(); }

  protected:
    void refill(u64 need) override {
        auto len = src_->length();
        if (len && need >= *len) need = *len == 0 ? 0 : *len - 1;
        const u64 d = p_.period();
        while (buf_.size() <= need) {
            u64 pos = buf_.size();
            if (len && pos >= *len) return;
            if (pos < offset_) {
                buf_.push_back(src_->at(pos));
                continue;
            }
            u64 start = offset_ + ((pos - offset_) / d) * d;
            if (len && start + d > *len) { // incomplete final window passes through
                buf_.push_back(src_->at(pos));
                continue;
            }
            if (window_start_ != start) {
                window_start_ = start;
                window_is_x_ = true;
                for (u64 t = 0; t < d && window_is_x_; ++t)
                    if (src_->at(start + t) != p_.x[static_cast<std::size_t>(t)])
                        window_is_x_ = false;
            }
            buf_.push_back(window_is_x_ ? fresh_ : src_->at(pos));
        }
    }

  private:
    StreamPtr src_;
    XBlockPattern p_;
    u64 offset_;
    Letter fresh_;
    u64 window_start_ = static_cast<u64>(-1);
    bool window_is_x_ = false;
};

} // namespace

StreamPtr block_code_transform(StreamPtr source, std::size_t alphabet_size,
                               const XBlockPattern& p, std::size_t offset) {
    if (alphabet_size >= max_alphabet + 1)
        fail(errc::invalid_alphabet, "no room for a fresh letter");
    return std::make_shared<BlockCodeStream>(std::move(source), alphabet_size, p, offset);
}

} // namespace morphblocks
