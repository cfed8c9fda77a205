#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "morphblocks/word.hpp"

namespace morphblocks {

// Demand-driven word source. Streams grow a single internal buffer without
// eviction, so memory is bounded by the deepest position read; positions are
// stable (reading never changes previously returned letters).
class WordStream {
  public:
    virtual ~WordStream() = default;

    Letter at(u64 pos);
    Word prefix(u64 len);
    u64 buffered() const { return buf_.size(); }

    // Set for finite sources (raw words); reading past it throws
    // horizon_exceeded.
    virtual std::optional<u64> length() const { return std::nullopt; }
    const std::string& origin() const { return origin_; }

  protected:
    explicit WordStream(std::string origin) : origin_(std::move(origin)) {}
    // Extend buf_ to cover at least position `need`, or throw.
    virtual void refill(u64 need) = 0;
    std::vector<Letter> buf_;

  private:
    std::string origin_;
};

using StreamPtr = std::shared_ptr<WordStream>;

// h^ω(a) for a spec already validated as prolongable: buffer starts as
// rule(a) and letter q's image is appended on demand, so the buffer is always
// h(w_0 … w_{q-1}).
StreamPtr fixed_point_stream(const MorphicSpec& spec);

// Pointwise coding of another stream.
StreamPtr coded_stream(StreamPtr source, const Coding& coding);

// Coded fixed point when the spec has a coding, pure fixed point otherwise.
StreamPtr output_stream(const MorphicSpec& spec);

// Finite literal word.
StreamPtr raw_stream(Word w);

// u_n = f(n); used by arithmetic constructions (e.g. radix membership words).
StreamPtr predicate_stream(std::function<Letter(u64)> f, std::string origin);

// Cumulative image geometry of the fixed point under its morphism:
//   image_interval(q) = positions of h(w_q) inside w,
//   inverse_image(r, s) = shortest (i, j) with [r, s] inside h(w_i … w_j).
// Backed by a monotone cumulative-length cursor over the pure stream.
class ImageCursor {
  public:
    ImageCursor(const Morphism& h, StreamPtr pure);

    struct Interval {
        u64 start;
        u64 end; // inclusive
    };

    Interval image_interval(u64 q);
    std::pair<u64, u64> inverse_image(u64 r, u64 s);

  private:
    void ensure_cum_through(u64 position);
    Morphism h_; // owned copy: cursors routinely outlive the spec they came from
    StreamPtr pure_;
    std::vector<u64> cum_; // cum_[q] = start of image of w_q; cum_[0] = 0
};

} // namespace morphblocks
