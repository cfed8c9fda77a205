#include "morphblocks/stream.hpp"

#include <algorithm>
#include <utility>

namespace morphblocks {

Letter WordStream::at(u64 pos) {
    if (pos >= buf_.size()) {
        refill(pos);
        if (pos >= buf_.size())
            fail(errc::horizon_exceeded, "read past end of " + origin());
    }
    return buf_[static_cast<std::size_t>(pos)];
}

Word WordStream::prefix(u64 len) {
    if (len == 0) return {};
    (void)at(len - 1);
    return Word(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(len));
}

namespace {

class FixedPointStream final : public WordStream {
  public:
    explicit FixedPointStream(const MorphicSpec& spec)
        : WordStream("fixed point"), h_(spec.morphism) {
        const Word& r = h_.rule(spec.seed);
        buf_.assign(r.begin(), r.end());
    }

  protected:
    // Invariant: buf_ == h(w_0 ... w_{next_-1}); prolongability guarantees
    // |h(prefix of length q)| > q, so letter next_ is always buffered.
    void refill(u64 need) override {
        while (buf_.size() <= need) {
            const Word& r = h_.rule(buf_[static_cast<std::size_t>(next_)]);
            buf_.insert(buf_.end(), r.begin(), r.end());
            ++next_;
        }
    }

  private:
    Morphism h_;
    u64 next_ = 1;
};

class CodedStream final : public WordStream {
  public:
    CodedStream(StreamPtr source, Coding coding)
        : WordStream("coding of " + source->origin()), src_(std::move(source)),
          coding_(std::move(coding)) {}

    std::optional<u64> length() const override { return src_->length(); }

  protected:
    void refill(u64 need) override {
        if (auto len = src_->length(); len && need >= *len) need = *len == 0 ? 0 : *len - 1;
        while (buf_.size() <= need) buf_.push_back(coding_.apply(src_->at(buf_.size())));
    }

  private:
    StreamPtr src_;
    Coding coding_;
};

class RawStream final : public WordStream {
  public:
    explicit RawStream(Word w) : WordStream("literal word") { buf_ = std::move(w); }
    std::optional<u64> length() const override { return buf_.size(); }

  protected:
    void refill(u64) override {}
};

class PredicateStream final : public WordStream {
  public:
    PredicateStream(std::function<Letter(u64)> f, std::string origin)
        : WordStream(std::move(origin)), f_(std::move(f)) {}

  protected:
    void refill(u64 need) override {
        while (buf_.size() <= need) buf_.push_back(f_(buf_.size()));
    }

  private:
    std::function<Letter(u64)> f_;
};

} // namespace

StreamPtr fixed_point_stream(const MorphicSpec& spec) {
    validate_spec(spec);
    return std::make_shared<FixedPointStream>(spec);
}

StreamPtr coded_stream(StreamPtr source, const Coding& coding) {
    return std::make_shared<CodedStream>(std::move(source), coding);
}

StreamPtr output_stream(const MorphicSpec& spec) {
    auto pure = fixed_point_stream(spec);
    if (spec.coding) return coded_stream(std::move(pure), *spec.coding);
    return pure;
}

StreamPtr raw_stream(Word w) { return std::make_shared<RawStream>(std::move(w)); }

StreamPtr predicate_stream(std::function<Letter(u64)> f, std::string origin) {
    return std::make_shared<PredicateStream>(std::move(f), std::move(origin));
}

ImageCursor::ImageCursor(const Morphism& h, StreamPtr pure)
    : h_(h), pure_(std::move(pure)), cum_{0} {}

void ImageCursor::ensure_cum_through(u64 position) {
    while (cum_.size() <= position + 1) {
        Letter l = pure_->at(cum_.size() - 1);
        cum_.push_back(cum_.back() + h_.rule(l).size());
    }
}

ImageCursor::Interval ImageCursor::image_interval(u64 q) {
    ensure_cum_through(q);
    return {cum_[static_cast<std::size_t>(q)], cum_[static_cast<std::size_t>(q) + 1] - 1};
}

std::pair<u64, u64> ImageCursor::inverse_image(u64 r, u64 s) {
    if (s < r) fail(errc::invalid_params, "inverse image of an empty interval");
    while (cum_.back() <= s) {
        Letter l = pure_->at(cum_.size() - 1);
        cum_.push_back(cum_.back() + h_.rule(l).size());
    }
    auto locate = [&](u64 pos) {
        auto it = std::upper_bound(cum_.begin(), cum_.end(), pos);
        return static_cast<u64>(it - cum_.begin()) - 1;
    };
    return {locate(r), locate(s)};
}

} // namespace morphblocks
