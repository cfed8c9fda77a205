#include "morphblocks/constructions.hpp"

#include <deque>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "morphblocks/errors.hpp"

namespace morphblocks {

namespace {

// Upper bound on how much rule/prefix material a construction may
// materialize; columns beyond this cannot be turned into concrete rules.
constexpr std::size_t material_cap = 200'000;

// Image of digit letter j (unshifted): letter i repeated a_{i,j} times,
// ascending. Content is pinned by the matrix; the order is fixed for
// determinism.
std::vector<Word> digit_images(const IntMatrix& a) {
    std::size_t k = a.size();
    std::size_t total = 0;
    std::vector<Word> out(k);
    for (std::size_t j = 0; j < k; ++j) {
        Word w;
        for (std::size_t i = 0; i < k; ++i) {
            const BigInt& e = a.at(i, j);
            if (sgn(e) < 0) fail(errc::not_perron, "matrix entries must be nonnegative");
            if (!e.fits_ulong_p()) fail(errc::not_perron, "matrix entry too large to materialize");
            unsigned long c = e.get_ui();
            total += c;
            if (total > material_cap)
                fail(errc::not_perron, "matrix entries too large to materialize");
            w.insert(w.end(), c, static_cast<Letter>(i));
        }
        if (w.empty()) fail(errc::not_perron, "zero column at index " + std::to_string(j));
        out[j] = std::move(w);
    }
    return out;
}

void require_perron_matrix(const IntMatrix& a) {
    if (a.size() < 2) fail(errc::not_perron, "matrix must be at least 2x2");
    digit_images(a); // nonnegativity, no zero column, bounded material
    if (!primitivity_check(a)) fail(errc::not_perron, "matrix is not primitive");
}

IntMatrix stock_matrix(unsigned mu) {
    IntMatrix a(2);
    if (mu == 2) {
        a.at(0, 0) = 1;
        a.at(0, 1) = 1;
    } else {
        a.at(0, 0) = mu - 1;
        a.at(0, 1) = mu - 1;
    }
    a.at(1, 0) = 1;
    a.at(1, 1) = 1;
    return a;
}

MorphicSpec build_marker_spec(const IntMatrix& a, const MarkerShape& shape) {
    std::vector<Word> digits = digit_images(a);
    std::size_t k = a.size();
    std::size_t digit0 = shape.two_groups ? 3 : 2;
    std::size_t n = digit0 + k;
    if (n > max_alphabet) fail(errc::not_perron, "digit alphabet too large");

    auto shifted = [&](const Word& w) {
        Word out;
        out.reserve(w.size());
        for (Letter l : w) out.push_back(static_cast<Letter>(l + digit0));
        return out;
    };

    Letter alpha = 0, beta = 1, gamma = 2;
    Letter d0 = static_cast<Letter>(digit0);
    std::vector<Word> rules(n);
    Word& ga = rules[alpha];
    ga = {alpha, beta, d0};
    if (shape.two_groups) {
        for (unsigned i = 0; i < shape.s; ++i) {
            ga.push_back(gamma);
            ga.push_back(d0);
        }
        ga.push_back(beta);
        ga.push_back(d0);
        for (unsigned i = 0; i < shape.t; ++i) {
            ga.push_back(gamma);
            ga.push_back(d0);
        }
    }
    rules[beta] = {beta};
    if (shape.two_groups) rules[gamma] = {gamma};
    for (std::size_t j = 0; j < k; ++j) rules[digit0 + j] = shifted(digits[j]);

    std::vector<std::string> symbols = {"alpha", "beta"};
    if (shape.two_groups) symbols.push_back("gamma");
    for (std::size_t j = 0; j < k; ++j) symbols.push_back(std::to_string(j));

    MorphicSpec spec;
    spec.alphabet = Alphabet(symbols);
    spec.morphism = Morphism(n, std::move(rules));
    spec.seed = alpha;
    Coding coding;
    coding.target_size = 2;
    coding.map.assign(n, 0);
    coding.map[beta] = 1;
    spec.coding = std::move(coding);
    spec.coded_alphabet = Alphabet({"0", "1"});
    return spec;
}

// Literal check of the first few segments of the fixed point against the
// intended layout alpha B_0 B_1 ..., with B_j rebuilt from h^j(0) directly.
void verify_shape(const MorphicSpec& spec, const IntMatrix& a, const MarkerShape& shape) {
    std::size_t k = a.size();
    Letter digit0 = shape.two_groups ? 3 : 2;
    Morphism h(k, digit_images(a));
    Letter beta = 1, gamma = 2;

    Word expected = {0}; // alpha
    Word seg = {0};      // h^j(0), unshifted digit letters
    for (int j = 0; j < 4; ++j) {
        std::size_t groups = shape.two_groups ? (2u + shape.s + shape.t) : 1u;
        std::size_t block = groups * (1 + seg.size());
        if (expected.size() + block > material_cap) break;
        auto append_seg = [&]() {
            for (Letter l : seg) expected.push_back(static_cast<Letter>(l + digit0));
        };
        expected.push_back(beta);
        append_seg();
        if (shape.two_groups) {
            for (unsigned i = 0; i < shape.s; ++i) {
                expected.push_back(gamma);
                append_seg();
            }
            expected.push_back(beta);
            append_seg();
            for (unsigned i = 0; i < shape.t; ++i) {
                expected.push_back(gamma);
                append_seg();
            }
        }
        u64 next = h.image_length(seg);
        if (next > material_cap) break;
        seg = h.apply(seg);
    }

    StreamPtr u = fixed_point_stream(spec);
    Word actual = u->prefix(expected.size());
    if (actual != expected)
        fail(errc::invalid_params, "fixed point does not match the intended marker layout");
}

ConstructionReport marker_report(std::string kind, const IntMatrix& a, const MarkerShape& shape,
                                 std::size_t ones_count, const BigRat& eig_tol) {
    ConstructionReport r;
    r.kind = std::move(kind);
    r.matrix = a;
    r.shape = shape;
    r.spec = build_marker_spec(a, shape);
    r.has_spec = true;
    validate_spec(r.spec);
    verify_shape(r.spec, a, shape);
    r.eigen = dominant_eigen_interval(a, eig_tol);
    r.ones = construction_ones(a, shape, ones_count);
    for (std::size_t j = 0; j + 1 < r.ones.size(); ++j)
        r.ratios.push_back(make_rat(r.ones[j + 1], r.ones[j]));
    r.class_c = class_c_check(r.ones);
    return r;
}

BigRat tol_to_rat(double tol) {
    if (!(tol > 0)) fail(errc::invalid_params, "tolerance must be positive");
    return BigRat(tol);
}

void finish_matrix_target(ConstructionReport& r) {
    BigRat mid = (r.eigen->lo + r.eigen->hi) / 2;
    r.target_value = mid;
    r.target = rat_decimal(mid, 12);
    r.target_exact = false;
}

} // namespace

ConstructionReport perron_spec(unsigned mu, std::size_t ones_count) {
    if (mu < 2) fail(errc::invalid_params, "mu must be at least 2");
    ConstructionReport r =
        marker_report("perron", stock_matrix(mu), MarkerShape{}, ones_count, make_rat(1, 1'000'000'000));
    r.target = std::to_string(mu);
    r.target_value = BigRat(mu);
    r.target_exact = true;
    return r;
}

ConstructionReport perron_spec(const IntMatrix& a, std::size_t ones_count, double tol) {
    require_perron_matrix(a);
    ConstructionReport r = marker_report("perron", a, MarkerShape{}, ones_count, tol_to_rat(tol));
    finish_matrix_target(r);
    return r;
}

ConstructionReport remark2_spec(unsigned mu, unsigned s, unsigned t, std::size_t ones_count) {
    if (mu < 2) fail(errc::invalid_params, "mu must be at least 2");
    ConstructionReport r = marker_report("remark2", stock_matrix(mu), MarkerShape{s, t, true},
                                         ones_count, make_rat(1, 1'000'000'000));
    r.target = std::to_string(mu);
    r.target_value = BigRat(mu);
    r.target_exact = true;
    return r;
}

ConstructionReport remark2_spec(const IntMatrix& a, unsigned s, unsigned t, std::size_t ones_count,
                                double tol) {
    require_perron_matrix(a);
    ConstructionReport r =
        marker_report("remark2", a, MarkerShape{s, t, true}, ones_count, tol_to_rat(tol));
    finish_matrix_target(r);
    return r;
}

std::vector<BigInt> construction_ones(const IntMatrix& a, const MarkerShape& shape,
                                      std::size_t count) {
    std::vector<BigInt> ones;
    if (count == 0) return ones;
    ParikhVector v(a.size(), 0);
    v[0] = 1;
    if (!shape.two_groups) {
        BigInt pos = 1;
        ones.push_back(pos);
        while (ones.size() < count) {
            pos += vec_sum(v) + 1; // segment h^j(0) plus its marker
            ones.push_back(pos);
            v = a.apply(v);
        }
    } else {
        BigInt block_start = 1;
        while (ones.size() < count) {
            ones.push_back(block_start);
            if (ones.size() >= count) break;
            BigInt unit = vec_sum(v) + 1; // one marker-or-gamma plus one segment
            ones.push_back(block_start + unit * (shape.s + 1));
            block_start += unit * (2 + shape.s + shape.t);
            v = a.apply(v);
        }
    }
    return ones;
}

std::vector<BigInt> power_ones(unsigned mu, std::size_t count) {
    if (mu < 2) fail(errc::invalid_params, "mu must be at least 2");
    std::vector<BigInt> out;
    BigInt v = 1;
    for (std::size_t j = 0; j < count; ++j) {
        out.push_back(v);
        v *= mu;
    }
    return out;
}

namespace {

void check_rational_params(const RationalWordParams& rp) {
    if (rp.q < 1 || rp.p <= rp.q || rp.p < 2)
        fail(errc::invalid_params, "need p > q >= 1 and p >= 2");
}

} // namespace

bool rational_member(const RationalWordParams& rp, u64 n) {
    if (n == 0) return false;
    u64 lo = rp.p;
    u64 hi = static_cast<u64>(rp.p) * rp.q;
    u64 v = n;
    while (true) {
        if (v >= lo && v <= hi) return true;
        if (v < lo || v % rp.p != 0) return false;
        v /= rp.p;
    }
}

StreamPtr rational_word_stream(const RationalWordParams& rp) {
    check_rational_params(rp);
    RationalWordParams copy = rp;
    return predicate_stream(
        [copy](u64 n) { return static_cast<Letter>(rational_member(copy, n) ? 1 : 0); },
        "rational(" + std::to_string(rp.p) + "," + std::to_string(rp.q) + ")");
}

ConstructionReport rational_word(unsigned p, unsigned q, std::size_t ones_count) {
    RationalWordParams rp{p, q};
    check_rational_params(rp);
    ConstructionReport r;
    r.kind = "rational";
    r.p = p;
    r.q = q;
    r.target_value = make_rat(p, q);
    r.target = rat_str(r.target_value);
    r.target_exact = true;
    // Members in increasing order: level h contributes m·p^h for m = p..qp,
    // and every level-h member is below the first level-(h+1) member because
    // qp < p². Representations are unique (no m in range is p times another).
    BigInt ph = 1;
    while (r.ones.size() < ones_count) {
        for (u64 m = p; m <= static_cast<u64>(p) * q && r.ones.size() < ones_count; ++m)
            r.ones.push_back(m * ph);
        ph *= p;
    }
    for (std::size_t j = 0; j + 1 < r.ones.size(); ++j)
        r.ratios.push_back(make_rat(r.ones[j + 1], r.ones[j]));
    r.class_c = class_c_check(r.ones);
    return r;
}

KernelReport p_kernel(WordStream& w, unsigned p, std::size_t depth, std::size_t max_elems) {
    if (p < 2) fail(errc::invalid_params, "p must be at least 2");
    if (depth == 0) fail(errc::invalid_params, "depth must be positive");

    // Subsequence n -> w[P n + r]; the invariant 0 <= r < P holds for every
    // element reached from the root (P=1, r=0).
    struct Elem {
        u64 P, r;
    };

    auto probe = [&](const Elem& e, std::size_t len) {
        Word out;
        out.reserve(len);
        for (std::size_t i = 0; i < len; ++i) {
            if (e.P != 0 && i > (std::numeric_limits<u64>::max() - e.r) / e.P)
                fail(errc::horizon_exceeded, "kernel probe beyond addressable positions");
            out.push_back(w.at(e.P * i + e.r));
        }
        return out;
    };

    std::vector<Word> fingerprints; // prefix at 2*depth, the working identity
    std::map<Word, std::vector<std::size_t>> by_short;
    std::deque<Elem> queue;
    std::size_t count = 0;
    bool inconclusive = false;

    auto try_insert = [&](const Elem& e) {
        Word longp = probe(e, 2 * depth);
        Word shortp(longp.begin(), longp.begin() + depth);
        auto it = by_short.find(shortp);
        if (it != by_short.end()) {
            for (std::size_t idx : it->second)
                if (fingerprints[idx] == longp) return; // already known
            // agreed at depth but not at 2*depth: identification unreliable
            inconclusive = true;
        }
        if (count >= max_elems)
            fail(errc::horizon_exceeded, "kernel closure exceeds the element budget");
        fingerprints.push_back(std::move(longp));
        by_short[std::move(shortp)].push_back(count);
        ++count;
        queue.push_back(e);
    };

    try_insert(Elem{1, 0});
    while (!queue.empty()) {
        Elem e = queue.front();
        queue.pop_front();
        if (e.P > std::numeric_limits<u64>::max() / p)
            fail(errc::horizon_exceeded, "kernel probe beyond addressable positions");
        for (unsigned j = 0; j < p; ++j) try_insert(Elem{e.P * p, e.P * j + e.r});
    }

    KernelReport rep;
    rep.size = count;
    rep.verdict = inconclusive ? "inconclusive" : "finite";
    rep.depth = depth;
    rep.max_elems = max_elems;
    return rep;
}

MorphicSpec thue_morse_spec() {
    MorphicSpec spec;
    spec.alphabet = Alphabet({"0", "1"});
    spec.morphism = Morphism(2, {{0, 1}, {1, 0}});
    spec.seed = 0;
    spec.coded_alphabet = spec.alphabet;
    return spec;
}

MorphicSpec powers_of_two_spec() {
    MorphicSpec spec;
    spec.alphabet = Alphabet({"a", "b", "c"});
    spec.morphism = Morphism(3, {{0, 1}, {1, 2}, {2, 2}});
    spec.seed = 0;
    Coding coding;
    coding.target_size = 2;
    coding.map = {0, 1, 0};
    spec.coding = std::move(coding);
    spec.coded_alphabet = Alphabet({"0", "1"});
    return spec;
}

MorphicSpec fibonacci_spec() {
    MorphicSpec spec;
    spec.alphabet = Alphabet({"0", "1"});
    spec.morphism = Morphism(2, {{0, 1}, {0}});
    spec.seed = 0;
    spec.coded_alphabet = spec.alphabet;
    return spec;
}

} // namespace morphblocks
