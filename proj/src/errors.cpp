#include "morphblocks/errors.hpp"

namespace morphblocks {

const char* errc_name(errc code) {
    switch (code) {
        case errc::invalid_morphism: return "InvalidMorphism";
        case errc::not_prolongable: return "NotProlongable";
        case errc::invalid_alphabet: return "InvalidAlphabet";
        case errc::spec_not_found: return "SpecNotFound";
        case errc::spec_parse: return "SpecParse";
        case errc::infinite_block: return "InfiniteBlock";
        case errc::horizon_exceeded: return "HorizonExceeded";
        case errc::pattern_degenerate: return "PatternDegenerate";
        case errc::precision_exhausted: return "PrecisionExhausted";
        case errc::non_primitive: return "NonPrimitive";
        case errc::not_perron: return "NotPerron";
        case errc::invalid_params: return "InvalidParams";
        case errc::degenerate_denominator: return "DegenerateDenominator";
        case errc::lambda_not_greater_than_one: return "LambdaNotGreaterThanOne";
    }
    return "Unknown";
}

} // namespace morphblocks
