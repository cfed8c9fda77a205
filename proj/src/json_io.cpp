#include "morphblocks/json_io.hpp"

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "morphblocks/errors.hpp"

namespace morphblocks {

namespace {

bool all_single_char(const Alphabet& a) {
    for (const std::string& s : a.symbols())
        if (s.size() != 1) return false;
    return true;
}

Word parse_rule(const Json& val, const Alphabet& a, bool single) {
    Word w;
    if (val.is_string()) {
        if (!single)
            fail(errc::spec_parse, "rule strings need single-character symbols; use arrays");
        for (char c : val.get<std::string>()) w.push_back(a.require(std::string(1, c)));
        return w;
    }
    if (!val.is_array()) fail(errc::spec_parse, "rule must be a string or an array of symbols");
    for (const Json& item : val) {
        if (!item.is_string()) fail(errc::spec_parse, "rule entries must be symbol strings");
        w.push_back(a.require(item.get<std::string>()));
    }
    return w;
}

std::string big_str(const BigInt& v) { return v.get_str(); }

std::string class_c_text(const ClassCReport& r) {
    if (r.verdict == "eventual" && r.settles_at)
        return "eventual(" + std::to_string(*r.settles_at) + ")";
    return r.verdict;
}

Json stats_json(const RatioStats& stats) {
    Json j;
    j["count"] = stats.count;
    j["window"] = stats.window;
    if (stats.max) {
        j["max"] = rat_str(*stats.max);
        j["max_decimal"] = rat_decimal(*stats.max);
    }
    if (stats.tail) {
        j["tail"] = rat_str(*stats.tail);
        j["tail_decimal"] = rat_decimal(*stats.tail);
    }
    if (stats.bound) j["bound"] = rat_str(*stats.bound);
    return j;
}

Json value_json(const LimsupValue& v) {
    Json j;
    switch (v.kind) {
    case LimsupValue::Kind::rational:
        j["kind"] = "rational";
        j["value"] = rat_str(v.value);
        j["decimal"] = rat_decimal(v.value);
        break;
    case LimsupValue::Kind::interval: {
        j["kind"] = "interval";
        j["lo"] = rat_str(v.lo);
        j["hi"] = rat_str(v.hi);
        j["decimal"] = rat_decimal((v.lo + v.hi) / 2);
        break;
    }
    case LimsupValue::Kind::estimate:
        j["kind"] = "estimate";
        j["value"] = rat_str(v.value);
        j["decimal"] = rat_decimal(v.value);
        break;
    }
    return j;
}

Json witness_json(const RunWitness& w) {
    Json j;
    j["start"] = w.start;
    j["end"] = w.end;
    j["digit"] = w.digit;
    j["exponent"] = rat_str(w.exponent);
    j["exponent_decimal"] = rat_decimal(w.exponent);
    return j;
}

} // namespace

MorphicSpec spec_from_json(const Json& doc) {
    try {
        if (!doc.is_object()) fail(errc::spec_parse, "spec document must be an object");
        if (!doc.contains("alphabet") || !doc["alphabet"].is_array())
            fail(errc::spec_parse, "spec needs an \"alphabet\" array");
        std::vector<std::string> symbols;
        for (const Json& s : doc["alphabet"]) {
            if (!s.is_string()) fail(errc::spec_parse, "alphabet entries must be strings");
            symbols.push_back(s.get<std::string>());
        }
        Alphabet alphabet(symbols);
        bool single = all_single_char(alphabet);

        if (!doc.contains("rules") || !doc["rules"].is_object())
            fail(errc::spec_parse, "spec needs a \"rules\" object");
        std::vector<Word> rules(alphabet.size());
        for (std::size_t l = 0; l < alphabet.size(); ++l) {
            const std::string& sym = alphabet.symbol(static_cast<Letter>(l));
            if (!doc["rules"].contains(sym))
                fail(errc::spec_parse, "missing rule for symbol \"" + sym + "\"");
            rules[l] = parse_rule(doc["rules"][sym], alphabet, single);
        }

        if (!doc.contains("seed") || !doc["seed"].is_string())
            fail(errc::spec_parse, "spec needs a \"seed\" symbol");

        MorphicSpec spec;
        spec.seed = alphabet.require(doc["seed"].get<std::string>());
        spec.morphism = Morphism(alphabet.size(), std::move(rules));
        spec.alphabet = std::move(alphabet);

        if (doc.contains("coding")) {
            if (!doc["coding"].is_object())
                fail(errc::spec_parse, "\"coding\" must map symbols to symbols");
            Coding coding;
            coding.map.assign(spec.alphabet.size(), 0);
            std::vector<std::string> targets;
            for (std::size_t l = 0; l < spec.alphabet.size(); ++l) {
                const std::string& sym = spec.alphabet.symbol(static_cast<Letter>(l));
                if (!doc["coding"].contains(sym))
                    fail(errc::spec_parse, "missing coding for symbol \"" + sym + "\"");
                const Json& tv = doc["coding"][sym];
                if (!tv.is_string()) fail(errc::spec_parse, "coding values must be strings");
                std::string target = tv.get<std::string>();
                std::size_t idx = 0;
                while (idx < targets.size() && targets[idx] != target) ++idx;
                if (idx == targets.size()) targets.push_back(target);
                coding.map[l] = static_cast<Letter>(idx);
            }
            coding.target_size = targets.size();
            spec.coding = std::move(coding);
            spec.coded_alphabet = Alphabet(targets);
        } else {
            spec.coded_alphabet = spec.alphabet;
        }
        return spec;
    } catch (const Json::exception& e) {
        fail(errc::spec_parse, e.what());
    }
}

MorphicSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::spec_not_found, path);
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::exception& e) {
        fail(errc::spec_parse, e.what());
    }
    MorphicSpec spec = spec_from_json(doc);
    validate_spec(spec);
    return spec;
}

Json spec_to_json(const MorphicSpec& spec) {
    Json doc;
    doc["alphabet"] = Json::array();
    for (const std::string& s : spec.alphabet.symbols()) doc["alphabet"].push_back(s);
    bool single = all_single_char(spec.alphabet);
    Json rules = Json::object();
    for (std::size_t l = 0; l < spec.alphabet.size(); ++l) {
        const Word& w = spec.morphism.rule(static_cast<Letter>(l));
        if (single) {
            std::string s;
            for (Letter x : w) s += spec.alphabet.symbol(x);
            rules[spec.alphabet.symbol(static_cast<Letter>(l))] = s;
        } else {
            Json arr = Json::array();
            for (Letter x : w) arr.push_back(spec.alphabet.symbol(x));
            rules[spec.alphabet.symbol(static_cast<Letter>(l))] = arr;
        }
    }
    doc["rules"] = std::move(rules);
    doc["seed"] = spec.alphabet.symbol(spec.seed);
    if (spec.coding) {
        Json coding = Json::object();
        for (std::size_t l = 0; l < spec.alphabet.size(); ++l)
            coding[spec.alphabet.symbol(static_cast<Letter>(l))] =
                spec.coded_alphabet.symbol(spec.coding->map[l]);
        doc["coding"] = std::move(coding);
    }
    return doc;
}

Json rat_json(const BigRat& value) { return Json(rat_str(value)); }

Json blocks_json(const std::vector<BlockOccurrence>& blocks, const RatioStats& stats) {
    Json j;
    if (!blocks.empty())
        j["kind"] = blocks.front().kind == BlockKind::delta ? "delta" : "pattern";
    j["count"] = blocks.size();
    Json arr = Json::array();
    for (const BlockOccurrence& b : blocks) {
        Json e;
        e["k"] = b.k;
        e["i"] = b.i;
        e["j"] = b.j;
        e["len"] = b.len();
        if (b.phase >= 0) e["phase"] = b.phase;
        arr.push_back(std::move(e));
    }
    j["blocks"] = std::move(arr);
    j["ratios"] = stats_json(stats);
    return j;
}

Json limsup_json(const LimsupReport& report) {
    Json j;
    j["value"] = value_json(report.value);
    j["method"] = report.method;
    j["classification"] = report.classification;
    if (report.degree_bound > 0) j["degree_bound"] = report.degree_bound;
    j["normalize_exponent"] = report.normalize_exponent;
    Json chains = Json::array();
    for (const ChainAnalysis& c : report.chains) {
        Json e;
        e["root"] = Json::array({c.root_i, c.root_j});
        e["elements"] = c.elements;
        e["method"] = c.method;
        e["value"] = value_json(c.value);
        if (c.cycle_found) {
            Json cy;
            cy["preperiod"] = c.cycle.preperiod;
            cy["period"] = c.cycle.period;
            cy["confirmed"] = c.cycle.confirmed;
            cy["low_confidence"] = c.cycle.low_confidence;
            e["cycle"] = std::move(cy);
        }
        e["ratio_bound"] = rat_str(c.ratio_bound);
        chains.push_back(std::move(e));
    }
    j["chains"] = std::move(chains);
    j["stats"] = stats_json(report.stats);
    j["blocks_scanned"] = report.blocks_scanned;
    if (!report.note.empty()) j["note"] = report.note;
    return j;
}

Json vb_json(const VbEstimate& vb) {
    Json j;
    j["best"] = rat_str(vb.best);
    j["best_decimal"] = rat_decimal(vb.best);
    if (vb.tail)
        j["tail"] = rat_decimal(*vb.tail);
    else
        j["tail"] = nullptr;
    j["witnesses"] = vb.witnesses;
    j["window"] = vb.window;
    j["digits_scanned"] = vb.digits_scanned;
    return j;
}

Json class_c_json(const ClassCReport& report) {
    Json j;
    j["verdict"] = class_c_text(report);
    j["checked"] = report.checked;
    if (report.first_violation) j["first_violation"] = *report.first_violation;
    if (report.settles_at) j["settles_at"] = *report.settles_at;
    Json v = Json::array();
    for (std::size_t x : report.violations) v.push_back(x);
    j["violations"] = std::move(v);
    return j;
}

Json exponent_json(const ExponentReport& report) {
    Json j;
    j["base"] = report.base;
    j["v_b"] = vb_json(report.vb);
    if (report.mu) {
        Json m;
        m["best"] = rat_str(report.mu->best);
        m["best_decimal"] = rat_decimal(report.mu->best);
        if (report.mu->tail) {
            m["tail"] = rat_str(*report.mu->tail);
            m["tail_decimal"] = rat_decimal(*report.mu->tail);
        }
        m["applicable"] = report.mu->applicable;
        m["diverging"] = report.mu->diverging;
        m["terms"] = report.mu->terms;
        j["mu"] = std::move(m);
    } else {
        j["mu"] = nullptr;
    }
    if (report.mu_cf) {
        Json m;
        if (report.mu_cf->value)
            m["value"] = rat_decimal(BigRat(*report.mu_cf->value), 6);
        else
            m["value"] = nullptr;
        m["terms_used"] = report.mu_cf->terms_used;
        j["mu_cf"] = std::move(m);
    }
    j["class_C"] = class_c_text(report.class_c);
    Json wb = Json::array();
    if (report.vb.best_witness) wb.push_back(witness_json(*report.vb.best_witness));
    for (const RunWitness& w : report.vb.recent) {
        if (report.vb.best_witness && w.start == report.vb.best_witness->start) continue;
        wb.push_back(witness_json(w));
    }
    j["witness_blocks"] = std::move(wb);
    return j;
}

Json kernel_json(const KernelReport& report) {
    Json j;
    j["size"] = report.size;
    j["verdict"] = report.verdict;
    j["depth"] = report.depth;
    j["max_elems"] = report.max_elems;
    return j;
}

Json construction_json(const ConstructionReport& report) {
    Json j;
    j["kind"] = report.kind;
    j["target"] = report.target;
    j["target_exact"] = report.target_exact;
    if (report.eigen) {
        Json e;
        e["lo"] = rat_str(report.eigen->lo);
        e["hi"] = rat_str(report.eigen->hi);
        e["decimal"] = rat_decimal((report.eigen->lo + report.eigen->hi) / 2);
        j["eigen"] = std::move(e);
    }
    j["class_C"] = class_c_text(report.class_c);
    Json ones = Json::array();
    for (const BigInt& n : report.ones) ones.push_back(big_str(n));
    j["ones"] = std::move(ones);
    Json ratios = Json::array();
    for (const BigRat& r : report.ratios) ratios.push_back(rat_str(r));
    j["ratios"] = std::move(ratios);
    if (report.matrix.size() > 0) {
        Json m = Json::array();
        for (std::size_t i = 0; i < report.matrix.size(); ++i) {
            Json row = Json::array();
            for (std::size_t k = 0; k < report.matrix.size(); ++k)
                row.push_back(big_str(report.matrix.at(i, k)));
            m.push_back(std::move(row));
        }
        j["matrix"] = std::move(m);
    }
    if (report.kind == "remark2") {
        Json s;
        s["s"] = report.shape.s;
        s["t"] = report.shape.t;
        j["shape"] = std::move(s);
    }
    if (report.kind == "rational") {
        j["p"] = report.p;
        j["q"] = report.q;
    }
    if (report.has_spec) j["spec"] = spec_to_json(report.spec);
    return j;
}

Json error_json(const error& e) {
    Json j;
    j["error"] = e.name();
    j["detail"] = e.detail();
    return j;
}

} // namespace morphblocks
