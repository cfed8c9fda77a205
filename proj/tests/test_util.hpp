#pragma once

// Shared helpers for the test binaries: compact spec builders, naive
// reference implementations used as oracles, and deterministic random
// generators. Everything here is intentionally simple and slow; the point is
// independence from the library's own algorithms.

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "morphblocks/blocks.hpp"
#include "morphblocks/errors.hpp"
#include "morphblocks/linalg.hpp"
#include "morphblocks/stream.hpp"
#include "morphblocks/word.hpp"

namespace mbtest {

using namespace morphblocks;

// One char per symbol: make_spec("abc", {"ab","bc","cc"}, 'a', "010").
// The coding string (optional) gives the coded symbol for each letter.
inline MorphicSpec make_spec(const std::string& letters, const std::vector<std::string>& rules,
                             char seed, const std::string& coding = "") {
    std::vector<std::string> symbols;
    for (char c : letters) symbols.emplace_back(1, c);
    Alphabet alphabet(symbols);
    std::vector<Word> rw(letters.size());
    for (std::size_t i = 0; i < rules.size(); ++i)
        for (char c : rules[i]) rw[i].push_back(alphabet.require(std::string(1, c)));
    MorphicSpec spec;
    spec.morphism = Morphism(letters.size(), std::move(rw));
    spec.seed = alphabet.require(std::string(1, seed));
    spec.alphabet = std::move(alphabet);
    if (!coding.empty()) {
        Coding cd;
        std::vector<std::string> targets;
        for (char c : coding) {
            std::string t(1, c);
            auto it = std::find(targets.begin(), targets.end(), t);
            std::size_t idx = static_cast<std::size_t>(it - targets.begin());
            if (it == targets.end()) targets.push_back(t);
            cd.map.push_back(static_cast<Letter>(idx));
        }
        cd.target_size = targets.size();
        spec.coding = std::move(cd);
        spec.coded_alphabet = Alphabet(targets);
    } else {
        spec.coded_alphabet = spec.alphabet;
    }
    return spec;
}

inline Word to_word(const Alphabet& a, const std::string& s) {
    Word w;
    for (char c : s) w.push_back(a.require(std::string(1, c)));
    return w;
}

// Returns the error code thrown by f, or nullopt if it returned normally.
template <class F> std::optional<errc> code_of(F&& f) {
    try {
        f();
    } catch (const error& e) {
        return e.code();
    }
    return std::nullopt;
}

// Reference fixed point: repeatedly apply h to the seed word until the
// prefix is long enough. Returns the coded prefix (or pure when no coding).
inline Word naive_fixed_prefix(const MorphicSpec& spec, std::size_t len,
                               std::size_t max_steps = 4096) {
    Word w{spec.seed};
    for (std::size_t step = 0; w.size() < len && step < max_steps; ++step) {
        Word next = spec.morphism.apply(w);
        if (next.size() == w.size()) break; // not growing; give up
        w = std::move(next);
        if (w.size() > 4'000'000) break;
    }
    if (w.size() > len) w.resize(len);
    if (spec.coding) w = spec.coding->apply(w);
    return w;
}

// Definition-literal maximal runs over a letter subset.
inline std::vector<std::pair<u64, u64>> naive_delta_blocks(const Word& w, const LetterSet& delta) {
    std::vector<std::pair<u64, u64>> out;
    std::size_t i = 0;
    while (i < w.size()) {
        if (!delta[w[i]]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < w.size() && delta[w[j + 1]]) ++j;
        out.emplace_back(i, j);
        i = j + 1;
    }
    return out;
}

// Definition-literal maximal x-blocks: maximal period-|x| runs that contain a
// full copy of x. Quadratic and proud of it.
inline std::vector<std::tuple<u64, u64, int>> naive_x_blocks(const Word& w, const Word& x) {
    std::size_t d = x.size();
    std::vector<std::tuple<u64, u64, int>> out;
    if (d == 0 || w.size() < d) return out;
    std::size_t i = 0;
    while (i < w.size()) {
        // longest period-d run starting at i
        std::size_t j = i;
        while (j + d < w.size() && w[j + d] == w[j]) ++j;
        std::size_t end = j + d - 1; // last index covered by the run
        if (end >= w.size()) end = w.size() - 1;
        // maximality on the left is automatic by construction order below
        if (end - i + 1 >= d) {
            int phase = -1;
            for (std::size_t q = i; q + d <= end + 1; ++q) {
                if (std::equal(x.begin(), x.end(), w.begin() + static_cast<long>(q))) {
                    phase = static_cast<int>(q % d);
                    break;
                }
            }
            if (phase >= 0) {
                out.emplace_back(i, end, phase);
                i = end - d + 2; // next run cannot start inside [i, end-d+1]
                continue;
            }
        }
        ++i;
    }
    // deduplicate runs that were revisited from inner start points
    std::vector<std::tuple<u64, u64, int>> dedup;
    for (auto& t : out)
        if (dedup.empty() || std::get<1>(dedup.back()) < std::get<1>(t)) dedup.push_back(t);
    return dedup;
}

inline std::vector<std::pair<u64, u64>> pairs(const std::vector<BlockOccurrence>& blocks) {
    std::vector<std::pair<u64, u64>> out;
    for (const BlockOccurrence& b : blocks) out.emplace_back(b.i, b.j);
    return out;
}

// Random validated spec: alphabet size 2..5, rule lengths 1..4, seed rule
// prolongable by construction.
inline MorphicSpec random_spec(std::mt19937_64& rng) {
    static const std::string pool = "abcde";
    for (;;) {
        std::uniform_int_distribution<std::size_t> nsize(2, 5);
        std::size_t n = nsize(rng);
        std::uniform_int_distribution<std::size_t> rlen(1, 4);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<std::string> rules(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t len = rlen(rng);
            for (std::size_t k = 0; k < len; ++k) rules[i] += pool[pick(rng)];
        }
        std::size_t seed = pick(rng);
        // force prolongability: seed rule = seed . something
        if (rules[seed].size() < 2) rules[seed] += pool[pick(rng)];
        rules[seed][0] = pool[seed];
        MorphicSpec spec = make_spec(pool.substr(0, n), rules, pool[seed]);
        try {
            validate_spec(spec);
        } catch (const error&) {
            continue;
        }
        return spec;
    }
}

inline Word random_word(std::mt19937_64& rng, std::size_t n_letters, std::size_t len) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(n_letters) - 1);
    Word w(len);
    for (auto& l : w) l = static_cast<Letter>(pick(rng));
    return w;
}

// Brute-force membership set { m p^h : p <= m <= q p } up to limit.
inline std::set<u64> rational_set(unsigned p, unsigned q, u64 limit) {
    std::set<u64> out;
    for (u64 scale = 1; scale <= limit; scale *= p) {
        for (u64 m = p; m <= static_cast<u64>(q) * p; ++m) {
            if (m > limit / scale) break;
            out.insert(m * scale);
        }
        if (scale > limit / p) break;
    }
    return out;
}

// Convergent numerators/denominators by the standard recurrence.
inline void convergents(const std::vector<BigInt>& cf, std::vector<BigInt>& p,
                        std::vector<BigInt>& q) {
    p.assign(cf.size(), 0);
    q.assign(cf.size(), 0);
    for (std::size_t k = 0; k < cf.size(); ++k) {
        if (k == 0) {
            p[k] = cf[0];
            q[k] = 1;
        } else if (k == 1) {
            p[k] = cf[1] * cf[0] + 1;
            q[k] = cf[1];
        } else {
            p[k] = cf[k] * p[k - 1] + p[k - 2];
            q[k] = cf[k] * q[k - 1] + q[k - 2];
        }
    }
}

} // namespace mbtest
