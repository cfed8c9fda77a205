#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "morphblocks/chains.hpp"
#include "test_util.hpp"

using namespace morphblocks;
using mbtest::code_of;
using mbtest::make_spec;

namespace {

MorphicSpec p2() { return make_spec("abc", {"ab", "bc", "cc"}, 'a', "010"); }
MorphicSpec tm_spec() { return make_spec("01", {"01", "10"}, '0'); }
MorphicSpec fib() { return make_spec("01", {"01", "0"}, '0'); }
// uniform fixture: the a-runs double their neighbourhood each step, limit 2
MorphicSpec stationary() { return make_spec("sa", {"sas", "aaa"}, 's'); }
// non-uniform, non-primitive fixture: a-runs (48*2^k-15 .. 64*2^k-17), limit 4/3
MorphicSpec alternating() { return make_spec("dea", {"dea", "eda", "aa"}, 'd'); }

LetterSet letters(std::initializer_list<bool> bits) { return LetterSet(bits); }

const ChainAnalysis& chain_with_root(const LimsupReport& rep, u64 i, u64 j) {
    for (const auto& ca : rep.chains)
        if (ca.root_i == i && ca.root_j == j) return ca;
    REQUIRE(false);
    return rep.chains.front();
}

} // namespace

TEST_CASE("normalization exponent follows boolean stabilization") {
    NormalizedSpec np = normalize_spec(p2());
    CHECK(np.exponent == 2);
    CHECK(np.spec.morphism.rule(0) == Word{0, 1, 1, 2});
    CHECK(np.spec.morphism.rule(1) == Word{1, 2, 2, 2});
    CHECK(np.spec.morphism.rule(2) == Word{2, 2, 2, 2});

    CHECK(normalize_spec(tm_spec()).exponent == 1);

    NormalizedSpec nf = normalize_spec(fib());
    CHECK(nf.exponent == 2);
    CHECK(nf.spec.morphism.rule(0) == Word{0, 1, 0});
    CHECK(nf.spec.morphism.rule(1) == Word{0, 1});

    // the fixed point itself is untouched
    MorphicSpec f = fib();
    CHECK(fixed_point_stream(f)->prefix(32) ==
          fixed_point_stream(nf.spec)->prefix(32));
}

TEST_CASE("coded letter sets pull back through the coding") {
    MorphicSpec s = p2();
    CHECK(pull_back_delta(s, letters({true, false})) ==
          letters({true, false, true}));
    CHECK(pull_back_delta(s, letters({false, true})) ==
          letters({false, true, false}));
    // no coding: identity
    MorphicSpec t = tm_spec();
    CHECK(pull_back_delta(t, letters({true, false})) == letters({true, false}));
}

TEST_CASE("hypothesis checks") {
    NormalizedSpec np = normalize_spec(p2());
    HypothesisInfo hyp = check_hypotheses(np, letters({true, false, true}));
    CHECK(hyp.occurring == letters({true, true, true}));
    CHECK(hyp.infinitely_occurring == letters({false, true, true}));
    CHECK(hyp.unbounded_blocks);        // g(c) = cccc lies inside the set
    CHECK(hyp.infinitely_many_terminators);
    CHECK(hyp.infinitely_many_delta);

    NormalizedSpec nf = normalize_spec(fib());
    HypothesisInfo hf = check_hypotheses(nf, letters({true, false}));
    CHECK(!hf.unbounded_blocks);        // no image stays inside {0}
    CHECK(hf.infinitely_many_delta);
    CHECK(hf.infinitely_many_terminators);
}

TEST_CASE("chain discovery on the powers-of-two word") {
    MorphicSpec s = p2();
    NormalizedSpec ns = normalize_spec(s);
    LetterSet dp = pull_back_delta(s, letters({true, false}));
    auto chains = link_blocks(ns, dp, AnalysisBudget{});
    REQUIRE(chains.size() == 2);

    auto root = [](const DeltaChain& c) {
        return std::pair<u64, u64>{c.elements.front().i, c.elements.front().j};
    };
    std::vector<std::pair<u64, u64>> roots{root(chains[0]), root(chains[1])};
    std::sort(roots.begin(), roots.end());
    CHECK(roots == std::vector<std::pair<u64, u64>>{{33, 63}, {65, 127}});

    for (const auto& c : chains) {
        CHECK(c.elements.size() == 9); // next link would pass the probing horizon
        CHECK(c.truncated);
        // each link quadruples the geometry: i -> 4i - 3, j -> 4j + 3
        for (std::size_t k = 0; k + 1 < c.elements.size(); ++k) {
            CHECK(c.elements[k + 1].i == 4 * c.elements[k].i - 3);
            CHECK(c.elements[k + 1].j == 4 * c.elements[k].j + 3);
        }
    }
    CHECK(chains[0].signature != chains[1].signature);

    std::vector<BlockOccurrence> all;
    link_blocks(ns, dp, AnalysisBudget{}, &all);
    CHECK(all.size() > 10);
    CHECK(all.front().i == 0);
}

TEST_CASE("stretch geometry and cycle detection on the powers-of-two word") {
    MorphicSpec s = p2();
    NormalizedSpec ns = normalize_spec(s);
    LetterSet dp = pull_back_delta(s, letters({true, false}));
    auto chains = link_blocks(ns, dp, AnalysisBudget{});
    REQUIRE(!chains.empty());

    DeltaChain& c = chains.front();
    compute_stretches(c, ns, dp);
    REQUIRE(c.stretches.size() == c.elements.size() - 1);

    StretchRecord expected;
    expected.sigma = Word{2, 2, 2}; // blocks grow left by ccc each step
    expected.sigma_sign = 1;
    expected.rho = Word{};
    expected.rho_sign = 0;
    expected.left_pivot = 1;        // bounded by the letter b on both sides
    expected.right_pivot = 1;
    for (const auto& st : c.stretches) CHECK(st == expected);

    CycleInfo cy = analyze_stretches(c, AnalysisBudget{});
    CHECK(cy.preperiod == 0);
    CHECK(cy.period == 1);
    CHECK(cy.confirmed == c.stretches.size() - 1);
    CHECK(cy.low_confidence); // 7 confirmations, default demand is 8
}

TEST_CASE("cycle detection on synthetic stretch sequences") {
    StretchRecord A{Word{0}, 1, Word{}, 0, 0, 0};
    StretchRecord B{Word{1}, 1, Word{}, 0, 1, 1};
    StretchRecord C{Word{0, 1}, -1, Word{}, 0, 2, 2};

    AnalysisBudget confirm4;
    confirm4.confirm = 4;

    DeltaChain chain;
    chain.stretches = {A, B, A, B, A, B};
    CycleInfo cy = analyze_stretches(chain, confirm4);
    CHECK(cy.preperiod == 0);
    CHECK(cy.period == 2);
    CHECK(cy.confirmed == 4);
    CHECK(!cy.low_confidence);

    // same sequence against the default demand of 8: confidence drops
    cy = analyze_stretches(chain, AnalysisBudget{});
    CHECK(cy.period == 2);
    CHECK(cy.low_confidence);

    chain.stretches = {C, A, B, A, B};
    AnalysisBudget confirm2;
    confirm2.confirm = 2;
    cy = analyze_stretches(chain, confirm2);
    CHECK(cy.preperiod == 1);
    CHECK(cy.period == 2);
    CHECK(cy.confirmed == 2);
    CHECK(!cy.low_confidence);

    // six pairwise distinct records cannot settle under tight caps
    StretchRecord D{Word{2}, 1, Word{}, 0, 0, 1};
    StretchRecord E{Word{}, 0, Word{0}, 1, 1, 0};
    StretchRecord F{Word{}, 0, Word{1}, -1, 2, 0};
    chain.stretches = {A, B, C, D, E, F};
    AnalysisBudget tight;
    tight.period_cap = 2;
    tight.preperiod_cap = 2;
    CHECK(code_of([&] { analyze_stretches(chain, tight); }) ==
          errc::horizon_exceeded);
}

TEST_CASE("uniform closed form") {
    CHECK(exact_limsup_uniform(BigInt(4), BigInt(31), BigInt(33), BigInt(3), BigInt(-3)) ==
          BigRat(2));
    CHECK(exact_limsup_uniform(BigInt(4), BigInt(5), BigInt(7), BigInt(1), BigInt(2)) ==
          make_rat(39, 23));
    CHECK(code_of([] {
              exact_limsup_uniform(BigInt(2), BigInt(1), BigInt(1), BigInt(0), BigInt(-5));
          }) == errc::degenerate_denominator);
    CHECK(code_of([] {
              exact_limsup_uniform(BigInt(2), BigInt(1), BigInt(1), BigInt(0), BigInt(-1));
          }) == errc::degenerate_denominator);

    // the closed form is the limit of the defining recurrence
    BigInt u(5), v(7);
    for (int k = 0; k < 60; ++k) {
        u = 4 * u + 1;
        v = 4 * v + 2;
    }
    double limit = rat_double(make_rat(39, 23));
    double iterate = 1.0 + rat_double(make_rat(u, v));
    CHECK(std::abs(limit - iterate) <= 1e-12);
}

TEST_CASE("certified interval for the primitive route") {
    BigRat tol = parse_rat("1e-9");

    IntMatrix sym(2);
    sym.at(0, 0) = sym.at(0, 1) = sym.at(1, 0) = sym.at(1, 1) = 1;
    ParikhVector one{BigInt(1), BigInt(1)};
    ParikhVector zero{BigInt(0), BigInt(0)};
    EigenInterval iv = exact_limit_primitive(sym, one, one, zero, zero, tol);
    CHECK(iv.contains(BigRat(2)));
    CHECK(iv.width() <= tol);

    IntMatrix fibm(2);
    fibm.at(0, 0) = 2;
    fibm.at(0, 1) = 1;
    fibm.at(1, 0) = 1;
    fibm.at(1, 1) = 1;
    ParikhVector e0{BigInt(1), BigInt(0)};
    ParikhVector e1{BigInt(0), BigInt(1)};
    iv = exact_limit_primitive(fibm, e0, e1, zero, zero, tol);
    // limit is the golden ratio squared = 2.6180339887498949...
    CHECK(rat_double(iv.lo) <= 2.6180339888);
    CHECK(rat_double(iv.hi) >= 2.6180339887);
    CHECK(iv.width() <= tol);

    // nonzero additive tail: limit becomes 2 + sqrt(5) = 4.2360679774997896...
    iv = exact_limit_primitive(fibm, e0, e1, zero, one, tol);
    CHECK(rat_double(iv.lo) <= 4.2360679776);
    CHECK(rat_double(iv.hi) >= 4.2360679774);
    CHECK(iv.width() <= tol);

    CHECK(code_of([&] {
              exact_limit_primitive(IntMatrix::identity(2), one, one, zero, zero, tol);
          }) == errc::non_primitive);

    IntMatrix unit(1);
    unit.at(0, 0) = 1;
    ParikhVector u1{BigInt(1)};
    ParikhVector z1{BigInt(0)};
    CHECK(code_of([&] { exact_limit_primitive(unit, u1, u1, z1, z1, tol); }) ==
          errc::lambda_not_greater_than_one);
}

TEST_CASE("limsup on the powers-of-two word is exactly 2") {
    LimsupReport rep = limsup_delta(p2(), letters({true, false}));
    CHECK(rep.method == "uniform-closed-form");
    CHECK(rep.classification == "rational");
    CHECK(rep.degree_bound == 1);
    CHECK(rep.normalize_exponent == 2);
    REQUIRE(rep.value.kind == LimsupValue::Kind::rational);
    CHECK(rep.value.value == BigRat(2));

    REQUIRE(rep.chains.size() == 2);
    const ChainAnalysis& a = chain_with_root(rep, 33, 63);
    const ChainAnalysis& b = chain_with_root(rep, 65, 127);
    for (const ChainAnalysis* ca : {&a, &b}) {
        CHECK(ca->elements == 9);
        CHECK(ca->cycle_found);
        CHECK(ca->cycle.period == 1);
        CHECK(ca->cycle.low_confidence);
        CHECK(ca->method == "uniform-closed-form");
        REQUIRE(ca->value.kind == LimsupValue::Kind::rational);
        CHECK(ca->value.value == BigRat(2));
        CHECK(ca->ratio_bound == BigRat(2));
    }

    REQUIRE(rep.stats.bound);
    CHECK(*rep.stats.bound == BigRat(2));
    CHECK(rep.blocks_scanned > 10);
    REQUIRE(rep.stats.max);
    CHECK(*rep.stats.max > make_rat(19, 10));
    CHECK(*rep.stats.max < BigRat(2));
}

TEST_CASE("limsup on the uniform stationary fixture") {
    LimsupReport rep = limsup_delta(stationary(), letters({false, true}));
    CHECK(rep.method == "uniform-closed-form");
    CHECK(rep.normalize_exponent == 1);
    REQUIRE(rep.value.kind == LimsupValue::Kind::rational);
    CHECK(rep.value.value == BigRat(2));
    REQUIRE(!rep.chains.empty());
    const ChainAnalysis& ca = chain_with_root(rep, 27, 53);
    CHECK(!ca.cycle.low_confidence); // 12 elements: the cycle is amply confirmed
    CHECK(ca.cycle.period == 1);
}

TEST_CASE("limsup falls back to chain estimates without primitivity") {
    MorphicSpec s = alternating();
    LimsupReport rep = limsup_delta(s, letters({false, false, true}));
    CHECK(rep.method == "empirical");
    CHECK(rep.classification == "estimate-only");
    CHECK(rep.degree_bound == 0);
    // deepest element of the dominant chain is ((8k+32)2^k+1, (8k+48)2^k-1) at
    // k = 15, the last index with j below the default horizon
    CHECK(rep.value.upper() == make_rat(5505023, 4980737));

    const ChainAnalysis& ca = chain_with_root(rep, 33, 47);
    CHECK(ca.elements == 16);
    CHECK(ca.cycle_found);
    CHECK(ca.cycle.period == 2);

    // the stretch records alternate with period two
    NormalizedSpec ns = normalize_spec(s);
    LetterSet dp = pull_back_delta(s, letters({false, false, true}));
    auto chains = link_blocks(ns, dp, AnalysisBudget{});
    const DeltaChain* c = nullptr;
    for (auto& cand : chains)
        if (cand.elements.front().i == 33) c = &cand;
    REQUIRE(c);
    DeltaChain copy = *c;
    compute_stretches(copy, ns, dp);
    REQUIRE(copy.stretches.size() >= 4);
    CHECK(!(copy.stretches[0] == copy.stretches[1]));
    CHECK(copy.stretches[0] == copy.stretches[2]);
    CHECK(copy.stretches[1] == copy.stretches[3]);

    // chain elements follow the closed family i_k = (8k+32)*2^k + 1,
    // j_k = (8k+48)*2^k - 1
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(copy.elements[k].i == (8 * k + 32) * (u64(1) << k) + 1);
        CHECK(copy.elements[k].j == (8 * k + 48) * (u64(1) << k) - 1);
    }
}

TEST_CASE("fixture chain elements appear verbatim in a naive expansion") {
    MorphicSpec s = alternating();
    Word w = mbtest::naive_fixed_prefix(s, 600);
    REQUIRE(w.size() == 600);
    auto blocks = mbtest::naive_delta_blocks(w, letters({false, false, true}));
    auto has = [&](u64 i, u64 j) {
        return std::find(blocks.begin(), blocks.end(), std::pair<u64, u64>{i, j}) !=
               blocks.end();
    };
    CHECK(has(33, 47));
    CHECK(has(81, 111));
    CHECK(has(193, 255));
    CHECK(has(449, 575));
}

TEST_CASE("bounded and degenerate branches") {
    // Thue-Morse never has three equal letters in a row
    LimsupReport rep = limsup_delta(tm_spec(), letters({true, false}));
    CHECK(rep.method == "bounded");
    CHECK(rep.classification == "rational");
    REQUIRE(rep.value.kind == LimsupValue::Kind::rational);
    CHECK(rep.value.value == BigRat(1));
    CHECK(!rep.note.empty());

    rep = limsup_delta(fib(), letters({true, false}));
    CHECK(rep.method == "bounded");
    CHECK(rep.value.value == BigRat(1));

    // empty letter set
    rep = limsup_delta(p2(), letters({false, false}));
    CHECK(rep.method == "finite");
    CHECK(rep.value.value == BigRat(1));
    CHECK(!rep.note.empty());

    // the whole alphabet: the word is one endless run
    CHECK(code_of([] { limsup_delta(fib(), letters({true, true})); }) ==
          errc::infinite_block);
}

TEST_CASE("analysis modes") {
    AnalysisBudget emp;
    emp.mode = "empirical";
    LimsupReport rep = limsup_delta(p2(), letters({true, false}), emp);
    CHECK(rep.method == "empirical");
    CHECK(rep.classification == "estimate-only");
    CHECK(rep.chains.empty());
    CHECK(std::abs(rat_double(rep.value.upper()) - 2.0) <= 0.01);

    AnalysisBudget exact;
    exact.mode = "exact";
    rep = limsup_delta(p2(), letters({true, false}), exact);
    CHECK(rep.value.value == BigRat(2)); // exact route still succeeds

    CHECK(code_of([&] {
              limsup_delta(alternating(), letters({false, false, true}), exact);
          }) == errc::horizon_exceeded);
}

TEST_CASE("pattern-run limsup stays an estimate") {
    MorphicSpec s = tm_spec();
    LimsupReport rep = limsup_x(s, Word{1, 0});
    CHECK(rep.method == "empirical");
    CHECK(rep.classification == "estimate-only");
    CHECK(rep.degree_bound == 0);
    CHECK(!rep.note.empty());
    CHECK(rep.value.upper() >= BigRat(1));
    CHECK(rep.blocks_scanned > 0);

    CHECK(code_of([&] { limsup_x(s, Word{7}); }) == errc::invalid_params);
}
