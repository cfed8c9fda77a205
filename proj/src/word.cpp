#include "morphblocks/word.hpp"

#include <algorithm>

namespace morphblocks {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty() || symbols_.size() > max_alphabet)
        fail(errc::invalid_alphabet, "alphabet size must be 1.." + std::to_string(max_alphabet));
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (symbols_[i].empty()) fail(errc::invalid_alphabet, "empty symbol");
        auto [it, fresh] = index_.emplace(symbols_[i], static_cast<Letter>(i));
        (void)it;
        if (!fresh) fail(errc::invalid_alphabet, "duplicate symbol: " + symbols_[i]);
    }
}

std::optional<Letter> Alphabet::find(const std::string& symbol) const {
    auto it = index_.find(symbol);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Letter Alphabet::require(const std::string& symbol) const {
    auto l = find(symbol);
    if (!l) fail(errc::invalid_alphabet, "unknown symbol: " + symbol);
    return *l;
}

std::string render_word(const Alphabet& a, const Word& w, bool concat) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!concat && i) out += ' ';
        out += a.symbol(w[i]);
    }
    return out;
}

Morphism::Morphism(std::size_t alphabet_size, std::vector<Word> rules)
    : n_(alphabet_size), rules_(std::move(rules)) {
    if (n_ == 0 || n_ > max_alphabet) fail(errc::invalid_morphism, "alphabet size out of range");
    if (rules_.size() != n_) fail(errc::invalid_morphism, "rule count != alphabet size");
    bool same = true;
    for (const auto& r : rules_) {
        for (Letter l : r)
            if (l >= n_) fail(errc::invalid_morphism, "rule letter out of range");
        max_len_ = std::max(max_len_, r.size());
        if (r.size() != rules_.front().size()) same = false;
    }
    if (same && !rules_.front().empty()) uniform_ = rules_.front().size();
}

Word Morphism::apply(const Word& w) const {
    Word out;
    out.reserve(static_cast<std::size_t>(image_length(w)));
    for (Letter l : w) {
        const Word& r = rule(l);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

u64 Morphism::image_length(const Word& w) const {
    u64 total = 0;
    for (Letter l : w) total += rule(l).size();
    return total;
}

Morphism morphism_power(const Morphism& h, unsigned t, u64 max_material) {
    if (t == 0) {
        std::vector<Word> rules(h.alphabet_size());
        for (std::size_t i = 0; i < h.alphabet_size(); ++i)
            rules[i] = Word{static_cast<Letter>(i)};
        return Morphism(h.alphabet_size(), std::move(rules));
    }
    Morphism cur = h;
    for (unsigned k = 1; k < t; ++k) {
        u64 material = 0;
        std::vector<Word> rules;
        rules.reserve(h.alphabet_size());
        for (std::size_t i = 0; i < h.alphabet_size(); ++i) {
            material += h.image_length(cur.rule(static_cast<Letter>(i)));
            if (material > max_material)
                fail(errc::horizon_exceeded, "morphism power exceeds material budget");
            rules.push_back(h.apply(cur.rule(static_cast<Letter>(i))));
        }
        cur = Morphism(h.alphabet_size(), std::move(rules));
    }
    return cur;
}

Word Coding::apply(const Word& w) const {
    Word out;
    out.reserve(w.size());
    for (Letter l : w) out.push_back(apply(l));
    return out;
}

void validate_spec(const MorphicSpec& spec) {
    const auto n = spec.alphabet.size();
    if (n == 0) fail(errc::invalid_alphabet, "empty alphabet");
    if (spec.morphism.alphabet_size() != n)
        fail(errc::invalid_morphism, "morphism size does not match alphabet");
    for (std::size_t i = 0; i < n; ++i)
        if (spec.morphism.rule(static_cast<Letter>(i)).empty())
            fail(errc::invalid_morphism,
                 "erasing rule for symbol " + spec.alphabet.symbol(static_cast<Letter>(i)));
    if (spec.seed >= n) fail(errc::invalid_morphism, "seed outside alphabet");
    const Word& sr = spec.morphism.rule(spec.seed);
    if (sr.size() < 2 || sr[0] != spec.seed)
        fail(errc::not_prolongable, "seed rule must start with the seed and add at least one letter");
    if (spec.coding) {
        if (spec.coding->map.size() != n)
            fail(errc::invalid_morphism, "coding does not cover the alphabet");
        if (spec.coding->target_size != spec.coded_alphabet.size())
            fail(errc::invalid_alphabet, "coding target does not match coded alphabet");
        for (Letter l : spec.coding->map)
            if (l >= spec.coding->target_size)
                fail(errc::invalid_morphism, "coding letter out of range");
    }
}

} // namespace morphblocks
