#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "morphblocks/blocks.hpp"
#include "morphblocks/chains.hpp"
#include "morphblocks/constructions.hpp"
#include "morphblocks/diophantine.hpp"
#include "morphblocks/word.hpp"

namespace morphblocks {

using Json = nlohmann::ordered_json;

// Spec document:
//   { "alphabet": ["a","b","c"],
//     "rules":    {"a": "ab", "b": "bc", "c": "cc"},   // or arrays of symbols
//     "seed":     "a",
//     "coding":   {"a": "0", "b": "1", "c": "0"} }     // optional
// Rule strings split per character only when every symbol is one character.
MorphicSpec spec_from_json(const Json& doc);
MorphicSpec load_spec(const std::string& path); // spec_not_found / spec_parse

Json spec_to_json(const MorphicSpec& spec);

// Exact rationals serialize as strings ("7/3", "2"); estimates additionally
// carry a decimal rendering.
Json rat_json(const BigRat& value);

Json blocks_json(const std::vector<BlockOccurrence>& blocks, const RatioStats& stats);
Json limsup_json(const LimsupReport& report);
Json vb_json(const VbEstimate& vb);
Json exponent_json(const ExponentReport& report);
Json class_c_json(const ClassCReport& report);
Json kernel_json(const KernelReport& report);
Json construction_json(const ConstructionReport& report);

// Structured error object written to stderr by the CLI.
Json error_json(const error& e);

} // namespace morphblocks
