#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "morphblocks/errors.hpp"
#include "morphblocks/numeric.hpp"

namespace morphblocks {

// Letters are dense indices into an Alphabet. uint8 keeps long stream buffers
// small; 250 leaves room for letters synthesized by transforms.
using Letter = std::uint8_t;
using Word = std::vector<Letter>;

constexpr std::size_t max_alphabet = 250;

class Alphabet {
  public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> symbols);

    std::size_t size() const { return symbols_.size(); }
    const std::string& symbol(Letter l) const { return symbols_.at(l); }
    std::optional<Letter> find(const std::string& symbol) const;
    Letter require(const std::string& symbol) const;
    const std::vector<std::string>& symbols() const { return symbols_; }

    bool operator==(const Alphabet&) const = default;

  private:
    std::vector<std::string> symbols_;
    std::map<std::string, Letter> index_;
};

std::string render_word(const Alphabet& a, const Word& w, bool concat = false);

// Substitution on a single alphabet (source == target). Codings between two
// alphabets are handled separately by `Coding`.
class Morphism {
  public:
    Morphism() = default;
    Morphism(std::size_t alphabet_size, std::vector<Word> rules);

    std::size_t alphabet_size() const { return n_; }
    const Word& rule(Letter l) const { return rules_.at(l); }
    const std::vector<Word>& rules() const { return rules_; }

    // M: max image length over all letters.
    std::size_t max_rule_len() const { return max_len_; }
    // m when all rules share one length (the uniform / automatic case).
    std::optional<std::size_t> uniform_width() const { return uniform_; }

    Word apply(const Word& w) const;
    u64 image_length(const Word& w) const;

  private:
    std::size_t n_ = 0;
    std::vector<Word> rules_;
    std::size_t max_len_ = 0;
    std::optional<std::size_t> uniform_;
};

// h^t by repeated substitution into the rules. Material is bounded by
// `max_material` total letters (guards against exponential blowup).
Morphism morphism_power(const Morphism& h, unsigned t, u64 max_material = 10'000'000);

// Letter-to-letter map into a (possibly different) alphabet.
struct Coding {
    std::vector<Letter> map;           // index: source letter
    std::size_t target_size = 0;

    Letter apply(Letter l) const { return map.at(l); }
    Word apply(const Word& w) const;
};

struct MorphicSpec {
    Alphabet alphabet;                 // pure (internal) alphabet
    Morphism morphism;
    Letter seed = 0;
    std::optional<Coding> coding;
    Alphabet coded_alphabet;           // == alphabet when no coding

    const Alphabet& output_alphabet() const { return coding ? coded_alphabet : alphabet; }
};

// Structural checks: rule letters in range, nonerasing, seed rule of the form
// seed·x with |rule| >= 2. Throws invalid_morphism / not_prolongable.
void validate_spec(const MorphicSpec& spec);

} // namespace morphblocks
