#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "morphblocks/blocks.hpp"
#include "morphblocks/chains.hpp"
#include "morphblocks/constructions.hpp"
#include "morphblocks/diophantine.hpp"
#include "morphblocks/errors.hpp"
#include "morphblocks/json_io.hpp"
#include "morphblocks/stream.hpp"
#include "morphblocks/word.hpp"

namespace mb = morphblocks;
using mb::u64;

namespace {

int exit_code_for(mb::errc c) {
    switch (c) {
    case mb::errc::invalid_morphism:
    case mb::errc::not_prolongable:
    case mb::errc::invalid_alphabet:
    case mb::errc::spec_not_found:
    case mb::errc::spec_parse:
    case mb::errc::pattern_degenerate:
        return 2;
    case mb::errc::infinite_block:
        return 3;
    case mb::errc::horizon_exceeded:
        return 4;
    case mb::errc::not_perron:
    case mb::errc::invalid_params:
        return 5;
    default:
        return 1;
    }
}

struct GlobalOpts {
    std::string format = "json";
    std::string seed_spec;
    u64 horizon = 10'000'000;
    std::string tol = "1e-12";
};

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

bool all_single_char(const mb::Alphabet& a) {
    for (const std::string& s : a.symbols())
        if (s.size() != 1) return false;
    return true;
}

struct RawInput {
    mb::Alphabet alphabet;
    mb::Word word;
};

RawInput parse_raw(const std::string& text) {
    if (text.empty()) mb::fail(mb::errc::invalid_params, "--raw needs at least one symbol");
    std::set<char> chars(text.begin(), text.end());
    std::vector<std::string> symbols;
    for (char c : chars) symbols.emplace_back(1, c);
    RawInput in;
    in.alphabet = mb::Alphabet(symbols);
    for (char c : text) in.word.push_back(in.alphabet.require(std::string(1, c)));
    return in;
}

mb::Word parse_symbol_word(const std::string& text, const mb::Alphabet& a) {
    mb::Word w;
    if (all_single_char(a) && text.find(',') == std::string::npos) {
        for (char c : text) w.push_back(a.require(std::string(1, c)));
    } else {
        for (const std::string& tok : split_commas(text)) w.push_back(a.require(tok));
    }
    if (w.empty()) mb::fail(mb::errc::pattern_degenerate, "empty pattern");
    return w;
}

mb::LetterSet parse_delta(const std::string& text, const mb::Alphabet& a) {
    mb::LetterSet s(a.size(), false);
    for (const std::string& tok : split_commas(text)) s[a.require(tok)] = true;
    return s;
}

mb::MorphicSpec resolve_spec(const std::string& own, const GlobalOpts& g) {
    const std::string& path = own.empty() ? g.seed_spec : own;
    if (path.empty())
        mb::fail(mb::errc::invalid_params, "no spec given (use --spec or --seed-spec)");
    return mb::load_spec(path);
}

mb::AnalysisBudget make_budget(const GlobalOpts& g, const std::string& mode) {
    mb::AnalysisBudget b;
    b.horizon = g.horizon;
    b.stats_symbols = std::min<u64>(b.stats_symbols, g.horizon);
    b.tol = mb::parse_rat(g.tol);
    b.mode = mode;
    return b;
}

mb::IntMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) mb::fail(mb::errc::invalid_params, "cannot read matrix file: " + path);
    mb::Json doc;
    try {
        doc = mb::Json::parse(in);
    } catch (const mb::Json::exception& e) {
        mb::fail(mb::errc::invalid_params, std::string("matrix parse: ") + e.what());
    }
    if (!doc.is_array() || doc.empty())
        mb::fail(mb::errc::invalid_params, "matrix file must hold an array of rows");
    std::size_t n = doc.size();
    mb::IntMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!doc[i].is_array() || doc[i].size() != n)
            mb::fail(mb::errc::invalid_params, "matrix must be square");
        for (std::size_t j = 0; j < n; ++j) {
            const mb::Json& e = doc[i][j];
            if (e.is_number_unsigned())
                a.at(i, j) = mb::BigInt(e.get<unsigned long>());
            else if (e.is_number_integer())
                a.at(i, j) = mb::BigInt(static_cast<long>(e.get<long long>()));
            else if (e.is_string())
                a.at(i, j) = mb::BigInt(e.get<std::string>(), 10);
            else
                mb::fail(mb::errc::invalid_params, "matrix entries must be integers");
        }
    }
    return a;
}

std::vector<mb::BigInt> load_indices(const std::string& path) {
    std::ifstream in(path);
    if (!in) mb::fail(mb::errc::invalid_params, "cannot read indices file: " + path);
    std::vector<mb::BigInt> out;
    std::string tok;
    while (in >> tok) {
        if (tok.find_first_not_of("0123456789") != std::string::npos)
            mb::fail(mb::errc::invalid_params, "bad index token: " + tok);
        out.emplace_back(tok, 10);
    }
    return out;
}

void emit(const mb::Json& j, const GlobalOpts& g, const std::string& text) {
    if (g.format == "text")
        std::cout << text;
    else
        std::cout << j.dump(2) << "\n";
}

std::string blocks_text(const std::vector<mb::BlockOccurrence>& blocks,
                        const mb::RatioStats& stats) {
    std::ostringstream os;
    for (const mb::BlockOccurrence& b : blocks) {
        os << b.k << "\t(" << b.i << "," << b.j << ")\tlen " << b.len();
        if (b.phase >= 0) os << "\tphase " << b.phase;
        os << "\n";
    }
    if (stats.max) os << "max ratio " << mb::rat_str(*stats.max) << "\n";
    return os.str();
}

// ---- exponent input assembly ----

struct ExponentInputs {
    mb::DigitExpansion exp;
    std::vector<mb::BigInt> ones; // exact one positions when known
};

// collect one positions from a 0/1 digit scan; bail out if other digits occur
std::vector<mb::BigInt> ones_from_digits(mb::WordStream& d, u64 limit) {
    std::vector<mb::BigInt> out;
    for (u64 n = 1; n <= limit; ++n) {
        mb::Letter l = d.at(n);
        if (l == 0) continue;
        if (l != 1) return {};
        out.emplace_back(static_cast<unsigned long>(n));
        if (out.size() >= 4096) break;
    }
    return out;
}

ExponentInputs exponent_inputs(const std::string& spec_path, const std::string& indices_path,
                               const std::string& construct, const std::string& raw,
                               unsigned base, u64& digit_count, const GlobalOpts& g) {
    int sources = (!spec_path.empty() || !g.seed_spec.empty() ? 1 : 0) +
                  (!indices_path.empty() ? 1 : 0) + (!construct.empty() ? 1 : 0) +
                  (!raw.empty() ? 1 : 0);
    if (sources == 0)
        mb::fail(mb::errc::invalid_params,
                 "exponent needs one of --spec, --indices, --construct, --raw");

    ExponentInputs in;
    if (!indices_path.empty()) {
        in.ones = load_indices(indices_path);
        in.exp = mb::xi_from_indices(base, in.ones, false);
        return in;
    }
    if (!construct.empty()) {
        auto colon = construct.find(':');
        std::string name = construct.substr(0, colon);
        std::vector<unsigned> args;
        if (colon != std::string::npos)
            for (const std::string& tok : split_commas(construct.substr(colon + 1)))
                args.push_back(static_cast<unsigned>(std::stoul(tok)));
        if (name == "rational" && args.size() == 2) {
            mb::ConstructionReport r = mb::rational_word(args[0], args[1], 48);
            in.ones = r.ones;
            in.exp = mb::expansion_from_stream(
                base, mb::rational_word_stream({args[0], args[1]}));
        } else if (name == "perron" && args.size() == 1) {
            mb::ConstructionReport r = mb::perron_spec(args[0], 48);
            in.ones = r.ones;
            in.exp = mb::expansion_from_stream(base, mb::output_stream(r.spec));
        } else if (name == "remark2" && args.size() == 3) {
            mb::ConstructionReport r = mb::remark2_spec(args[0], args[1], args[2], 48);
            in.ones = r.ones;
            in.exp = mb::expansion_from_stream(base, mb::output_stream(r.spec));
        } else if (name == "power" && args.size() == 1) {
            in.ones = mb::power_ones(args[0], 64);
            in.exp = mb::xi_from_indices(base, in.ones, false);
        } else {
            mb::fail(mb::errc::invalid_params,
                     "unknown construction: " + construct +
                         " (want rational:p,q | perron:mu | remark2:mu,s,t | power:mu)");
        }
        return in;
    }
    if (!raw.empty()) {
        mb::Word w;
        for (char c : raw) {
            if (c < '0' || c > '9') mb::fail(mb::errc::invalid_params, "--raw digits must be 0-9");
            w.push_back(static_cast<mb::Letter>(c - '0'));
        }
        if (w.size() <= 1) mb::fail(mb::errc::invalid_params, "--raw needs at least two digits");
        digit_count = std::min<u64>(digit_count, w.size() - 1);
        in.exp = mb::expansion_from_stream(base, mb::raw_stream(std::move(w)));
        in.ones = ones_from_digits(*in.exp.digits, digit_count);
        return in;
    }
    mb::MorphicSpec spec = resolve_spec(spec_path, g);
    in.exp = mb::expansion_from_stream(base, mb::output_stream(spec));
    in.ones = ones_from_digits(*in.exp.digits, digit_count);
    return in;
}

mb::ExponentReport run_exponent(ExponentInputs& in, unsigned base, u64 digit_count, bool cf,
                                std::size_t take) {
    mb::ExponentReport rep;
    rep.base = base;
    rep.vb = mb::v_b_estimate(in.exp, digit_count);
    if (in.ones.size() >= 2) {
        rep.mu = mb::mu_estimate(in.ones);
        rep.class_c = mb::class_c_check(in.ones);
    } else {
        rep.class_c.verdict = "n/a";
    }
    if (cf && in.ones.size() >= 3) {
        // truncation depth capped so b^{n_J} stays manageable
        std::size_t deepest = 0;
        for (std::size_t j = 0; j < in.ones.size(); ++j)
            if (in.ones[j] <= 200'000) deepest = j + 1;
        deepest = std::min(deepest, take);
        if (deepest >= 3) {
            std::vector<mb::BigRat> truncations;
            for (std::size_t j = 2; j <= deepest; ++j)
                truncations.push_back(mb::truncate_value(in.ones, base, j));
            rep.mu_cf = mb::mu_from_cf(truncations);
        }
    }
    return rep;
}

} // namespace

int main(int argc, char** argv) {
    GlobalOpts g;
    CLI::App app{"fixed points of morphisms: block structure, limsup ratios, "
                 "witness constructions, digit-expansion exponents"};
    app.require_subcommand(1);
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_option("--seed-spec", g.seed_spec, "fallback spec file");
    app.add_option("--horizon", g.horizon, "position budget for scans");
    app.add_option("--tol", g.tol, "tolerance for certified enclosures");

    // gen
    auto* gen = app.add_subcommand("gen", "print a prefix of the (coded) word");
    gen->fallthrough();
    std::string gen_spec;
    u64 gen_len = 64;
    bool gen_concat = false;
    gen->add_option("--spec", gen_spec, "spec file");
    gen->add_option("--length", gen_len, "prefix length");
    gen->add_flag("--concat", gen_concat, "no separators");

    // blocks
    auto* blocks = app.add_subcommand("blocks", "maximal block scan");
    blocks->fallthrough();
    std::string blk_spec, blk_raw, blk_delta, blk_x;
    std::size_t blk_count = 0;
    blocks->add_option("--spec", blk_spec, "spec file");
    blocks->add_option("--raw", blk_raw, "literal word");
    blocks->add_option("--delta", blk_delta, "letter set, comma separated");
    blocks->add_option("--x", blk_x, "pattern word");
    blocks->add_option("--count", blk_count, "stop after this many blocks");

    // limsup
    auto* limsup = app.add_subcommand("limsup", "limsup of block position ratios");
    limsup->fallthrough();
    std::string ls_spec, ls_delta, ls_x, ls_mode = "auto";
    limsup->add_option("--spec", ls_spec, "spec file");
    limsup->add_option("--delta", ls_delta, "letter set, comma separated");
    limsup->add_option("--x", ls_x, "pattern word");
    limsup->add_option("--mode", ls_mode, "analysis mode")
        ->check(CLI::IsMember({"auto", "exact", "empirical"}));

    // construct
    auto* construct = app.add_subcommand("construct", "witness word constructions");
    construct->fallthrough();
    construct->require_subcommand(1);
    auto* cper = construct->add_subcommand("perron", "marker word from a Perron matrix");
    cper->fallthrough();
    unsigned cp_mu = 0;
    std::string cp_matrix;
    std::size_t cp_count = 26;
    cper->add_option("--mu", cp_mu, "integer target, at least 2");
    cper->add_option("--matrix", cp_matrix, "matrix file (JSON rows)");
    cper->add_option("--count", cp_count, "one positions to report");
    auto* crat = construct->add_subcommand("rational", "p/q-target predicate word");
    crat->fallthrough();
    unsigned cr_p = 0, cr_q = 0;
    std::size_t cr_count = 24;
    crat->add_option("--p", cr_p, "numerator")->required();
    crat->add_option("--q", cr_q, "denominator")->required();
    crat->add_option("--count", cr_count, "one positions to report");
    auto* crem = construct->add_subcommand("remark2", "two-marker variant");
    crem->fallthrough();
    unsigned cm_mu = 0, cm_s = 0, cm_t = 0;
    std::string cm_matrix;
    std::size_t cm_count = 26;
    crem->add_option("--mu", cm_mu, "integer target, at least 2");
    crem->add_option("--matrix", cm_matrix, "matrix file (JSON rows)");
    crem->add_option("--s", cm_s, "padding inside the marker pair");
    crem->add_option("--t", cm_t, "padding after the marker pair");
    crem->add_option("--count", cm_count, "one positions to report");

    // exponent
    auto* exponent = app.add_subcommand("exponent", "digit-expansion exponent estimates");
    exponent->fallthrough();
    std::string ex_spec, ex_indices, ex_construct, ex_raw;
    unsigned ex_base = 2;
    u64 ex_digits = 100'000;
    bool ex_cf = false;
    std::size_t ex_take = 12;
    exponent->add_option("--spec", ex_spec, "spec file; digits = coded word");
    exponent->add_option("--indices", ex_indices, "file of one positions");
    exponent->add_option("--construct", ex_construct,
                         "rational:p,q | perron:mu | remark2:mu,s,t | power:mu");
    exponent->add_option("--raw", ex_raw, "literal digit string");
    exponent->add_option("--base", ex_base, "expansion base");
    exponent->add_option("--digits", ex_digits, "digits to scan");
    exponent->add_flag("--cf", ex_cf, "continued-fraction cross-check");
    exponent->add_option("--take", ex_take, "truncation depth for --cf");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "blocks + limsup + exponent in one report");
    analyze->fallthrough();
    std::string an_spec, an_delta, an_x, an_mode = "auto";
    unsigned an_base = 2;
    u64 an_digits = 100'000;
    std::size_t an_count = 32;
    analyze->add_option("--spec", an_spec, "spec file");
    analyze->add_option("--delta", an_delta, "letter set, comma separated");
    analyze->add_option("--x", an_x, "pattern word");
    analyze->add_option("--mode", an_mode, "analysis mode")
        ->check(CLI::IsMember({"auto", "exact", "empirical"}));
    analyze->add_option("--base", an_base, "expansion base");
    analyze->add_option("--digits", an_digits, "digits to scan");
    analyze->add_option("--count", an_count, "blocks to list");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        mb::error err(mb::errc::invalid_params, e.what());
        std::cerr << mb::error_json(err).dump(2) << "\n";
        return 5;
    }

    try {
        if (*gen) {
            mb::MorphicSpec spec = resolve_spec(gen_spec, g);
            mb::Word w = mb::output_stream(spec)->prefix(gen_len);
            std::cout << mb::render_word(spec.output_alphabet(), w, gen_concat) << "\n";
            return 0;
        }

        if (*blocks) {
            if (blk_delta.empty() == blk_x.empty())
                mb::fail(mb::errc::invalid_params, "blocks needs exactly one of --delta, --x");
            mb::ScanLimit limit;
            limit.horizon = g.horizon;
            limit.block_horizon = g.horizon;
            if (blk_count > 0) limit.count = blk_count;

            mb::StreamPtr stream;
            mb::Alphabet alphabet;
            if (!blk_raw.empty()) {
                RawInput raw = parse_raw(blk_raw);
                alphabet = raw.alphabet;
                stream = mb::raw_stream(std::move(raw.word));
            } else {
                mb::MorphicSpec spec = resolve_spec(blk_spec, g);
                alphabet = spec.output_alphabet();
                stream = mb::output_stream(spec);
            }
            std::vector<mb::BlockOccurrence> found;
            if (!blk_delta.empty()) {
                found = mb::scan_delta_blocks(*stream, parse_delta(blk_delta, alphabet), limit);
            } else {
                mb::XBlockPattern pat = mb::make_pattern(parse_symbol_word(blk_x, alphabet));
                found = mb::scan_x_blocks(*stream, pat, limit);
            }
            mb::RatioStats stats = mb::ratio_stats(found);
            emit(mb::blocks_json(found, stats), g, blocks_text(found, stats));
            return 0;
        }

        if (*limsup) {
            if (ls_delta.empty() == ls_x.empty())
                mb::fail(mb::errc::invalid_params, "limsup needs exactly one of --delta, --x");
            mb::MorphicSpec spec = resolve_spec(ls_spec, g);
            mb::AnalysisBudget budget = make_budget(g, ls_mode);
            mb::LimsupReport rep;
            if (!ls_delta.empty())
                rep = mb::limsup_delta(spec, parse_delta(ls_delta, spec.output_alphabet()),
                                       budget);
            else
                rep = mb::limsup_x(spec, parse_symbol_word(ls_x, spec.output_alphabet()),
                                   budget);
            std::ostringstream os;
            os << "value " << mb::rat_decimal(rep.value.upper()) << " method " << rep.method
               << " classification " << rep.classification << "\n";
            emit(mb::limsup_json(rep), g, os.str());
            return 0;
        }

        if (*construct) {
            mb::ConstructionReport rep;
            if (*cper) {
                if (!cp_matrix.empty())
                    rep = mb::perron_spec(load_matrix(cp_matrix), cp_count);
                else if (cp_mu >= 1)
                    rep = mb::perron_spec(cp_mu, cp_count);
                else
                    mb::fail(mb::errc::invalid_params, "perron needs --mu or --matrix");
            } else if (*crat) {
                rep = mb::rational_word(cr_p, cr_q, cr_count);
            } else {
                if (!cm_matrix.empty())
                    rep = mb::remark2_spec(load_matrix(cm_matrix), cm_s, cm_t, cm_count);
                else if (cm_mu >= 1)
                    rep = mb::remark2_spec(cm_mu, cm_s, cm_t, cm_count);
                else
                    mb::fail(mb::errc::invalid_params, "remark2 needs --mu or --matrix");
            }
            std::ostringstream os;
            os << "target " << rep.target << " ones";
            for (const mb::BigInt& n : rep.ones) os << " " << n.get_str();
            os << "\n";
            emit(mb::construction_json(rep), g, os.str());
            return 0;
        }

        if (*exponent) {
            ExponentInputs in = exponent_inputs(ex_spec, ex_indices, ex_construct, ex_raw,
                                                ex_base, ex_digits, g);
            mb::ExponentReport rep = run_exponent(in, ex_base, ex_digits, ex_cf, ex_take);
            std::ostringstream os;
            os << "v_b best " << mb::rat_str(rep.vb.best);
            if (rep.vb.tail) os << " tail " << mb::rat_decimal(*rep.vb.tail, 6);
            if (rep.mu && rep.mu->tail)
                os << " | mu tail " << mb::rat_decimal(*rep.mu->tail, 6)
                   << (rep.mu->applicable ? "" : " (not applicable)");
            os << " | class C " << rep.class_c.verdict << "\n";
            emit(mb::exponent_json(rep), g, os.str());
            return 0;
        }

        // analyze
        {
            mb::MorphicSpec spec = resolve_spec(an_spec, g);
            if (an_delta.empty() == an_x.empty())
                mb::fail(mb::errc::invalid_params, "analyze needs exactly one of --delta, --x");
            mb::Json out;

            mb::ScanLimit limit;
            limit.horizon = g.horizon;
            limit.block_horizon = g.horizon;
            limit.count = an_count;
            mb::StreamPtr stream = mb::output_stream(spec);
            std::vector<mb::BlockOccurrence> found;
            mb::LimsupReport ls;
            mb::AnalysisBudget budget = make_budget(g, an_mode);
            if (!an_delta.empty()) {
                mb::LetterSet delta = parse_delta(an_delta, spec.output_alphabet());
                found = mb::scan_delta_blocks(*stream, delta, limit);
                ls = mb::limsup_delta(spec, delta, budget);
            } else {
                mb::XBlockPattern pat =
                    mb::make_pattern(parse_symbol_word(an_x, spec.output_alphabet()));
                found = mb::scan_x_blocks(*stream, pat, limit);
                ls = mb::limsup_x(spec, pat.x, budget);
            }
            out["blocks"] = mb::blocks_json(found, mb::ratio_stats(found));
            out["limsup"] = mb::limsup_json(ls);

            ExponentInputs in;
            in.exp = mb::expansion_from_stream(an_base, mb::output_stream(spec));
            in.ones = ones_from_digits(*in.exp.digits, an_digits);
            out["exponent"] = mb::exponent_json(run_exponent(in, an_base, an_digits, false, 0));

            std::ostringstream os;
            os << "blocks " << found.size() << " | limsup "
               << mb::rat_decimal(ls.value.upper()) << " (" << ls.method << ")\n";
            emit(out, g, os.str());
            return 0;
        }
    } catch (const mb::error& e) {
        std::cerr << mb::error_json(e).dump(2) << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        mb::Json j;
        j["error"] = "Internal";
        j["detail"] = e.what();
        std::cerr << j.dump(2) << "\n";
        return 1;
    }
}
