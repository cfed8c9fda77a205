#pragma once

#include <stdexcept>
#include <string>

namespace morphblocks {

// Stable error identifiers; the CLI maps these to exit codes and a structured
// stderr object, so the names are part of the external contract.
enum class errc {
    invalid_morphism,
    not_prolongable,
    invalid_alphabet,
    spec_not_found,
    spec_parse,
    infinite_block,
    horizon_exceeded,
    pattern_degenerate,
    precision_exhausted,
    non_primitive,
    not_perron,
    invalid_params,
    degenerate_denominator,
    lambda_not_greater_than_one,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
  public:
    error(errc code, std::string detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code),
          detail_(std::move(detail)) {}

    errc code() const { return code_; }
    const std::string& detail() const { return detail_; }
    const char* name() const { return errc_name(code_); }

  private:
    errc code_;
    std::string detail_;
};

[[noreturn]] inline void fail(errc code, std::string detail) {
    throw error(code, std::move(detail));
}

} // namespace morphblocks
