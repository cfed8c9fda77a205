#include "morphblocks/chains.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "morphblocks/errors.hpp"

namespace morphblocks {

NormalizedSpec normalize_spec(const MorphicSpec& spec) {
    validate_spec(spec);
    unsigned e = bool_stabilize(BoolMatrix::of(incidence_matrix(spec.morphism)));
    NormalizedSpec ns;
    ns.spec = spec;
    ns.exponent = e;
    if (e > 1) ns.spec.morphism = morphism_power(spec.morphism, e);
    return ns;
}

LetterSet pull_back_delta(const MorphicSpec& spec, const LetterSet& delta_coded) {
    const std::size_t n = spec.alphabet.size();
    LetterSet out(n, false);
    for (std::size_t c = 0; c < n; ++c) {
        Letter img =
            spec.coding ? spec.coding->apply(static_cast<Letter>(c)) : static_cast<Letter>(c);
        out[c] = img < delta_coded.size() && delta_coded[img];
    }
    return out;
}

HypothesisInfo check_hypotheses(const NormalizedSpec& ns, const LetterSet& delta_pure) {
    const Morphism& g = ns.spec.morphism;
    const std::size_t n = g.alphabet_size();
    if (delta_pure.size() != n) fail(errc::invalid_params, "letter set size mismatch");

    HypothesisInfo info;
    info.occurring.assign(n, false);
    info.infinitely_occurring.assign(n, false);

    // After normalization the letter-reachability matrix is idempotent, so the
    // occurring letters are exactly those of g(a), and the infinitely
    // occurring ones those of g(x) for the tail x of g(a) = a·x.
    const Word& seed_rule = g.rule(ns.spec.seed);
    info.occurring[ns.spec.seed] = true;
    for (Letter l : seed_rule) info.occurring[l] = true;
    for (std::size_t idx = 1; idx < seed_rule.size(); ++idx)
        for (Letter l : g.rule(seed_rule[idx])) info.infinitely_occurring[l] = true;

    auto grow = growing_letters(g);
    for (std::size_t c = 0; c < n; ++c) {
        if (!info.occurring[c] || !grow[c]) continue;
        bool inside = true;
        for (Letter l : g.rule(static_cast<Letter>(c)))
            if (!delta_pure[l]) {
                inside = false;
                break;
            }
        if (inside) info.unbounded_blocks = true;
    }
    for (std::size_t c = 0; c < n; ++c) {
        if (!info.infinitely_occurring[c]) continue;
        if (delta_pure[c])
            info.infinitely_many_delta = true;
        else
            info.infinitely_many_terminators = true;
    }
    return info;
}

BigRat exact_limsup_uniform(const BigInt& m_eff, const BigInt& u0_len, const BigInt& v0_len,
                            const BigInt& y, const BigInt& x) {
    if (m_eff < 2) fail(errc::invalid_params, "effective width must be at least 2");
    BigInt den = (m_eff - 1) * v0_len + x;
    if (den <= 0) fail(errc::degenerate_denominator, "prefix recurrence denominator is not positive");
    BigInt num = (m_eff - 1) * u0_len + y;
    return BigRat(1) + make_rat(num, den);
}

namespace {

using RatInterval = std::pair<BigRat, BigRat>;

RatInterval iv_add(const RatInterval& a, const RatInterval& b) {
    return {a.first + b.first, a.second + b.second};
}

// b strictly positive
RatInterval iv_div(const RatInterval& a, const RatInterval& b) {
    BigRat c1 = a.first / b.first, c2 = a.first / b.second;
    BigRat c3 = a.second / b.first, c4 = a.second / b.second;
    BigRat lo = std::min(std::min(c1, c2), std::min(c3, c4));
    BigRat hi = std::max(std::max(c1, c2), std::max(c3, c4));
    return {lo, hi};
}

RatInterval iv_dot(const VectorEnclosure& ell, const ParikhVector& v) {
    BigRat lo(0), hi(0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] >= 0) {
            lo += ell.lo[i] * BigRat(v[i]);
            hi += ell.hi[i] * BigRat(v[i]);
        } else {
            lo += ell.hi[i] * BigRat(v[i]);
            hi += ell.lo[i] * BigRat(v[i]);
        }
    }
    return {lo, hi};
}

} // namespace

EigenInterval exact_limit_primitive(const IntMatrix& a, const ParikhVector& u0,
                                    const ParikhVector& v0, const ParikhVector& x,
                                    const ParikhVector& y, const BigRat& tol) {
    const std::size_t n = a.size();
    if (n == 0 || u0.size() != n || v0.size() != n || x.size() != n || y.size() != n)
        fail(errc::invalid_params, "dimension mismatch");
    if (tol <= 0) fail(errc::invalid_params, "tolerance must be positive");
    if (!primitivity_check(a)) fail(errc::non_primitive, "matrix is not primitive");

    const BigRat target = tol / 2;
    const BigRat pad = tol / 4;
    BigRat eig_tol = tol / 8;
    for (int round = 0; round < 60; ++round, eig_tol /= 2) {
        EigenInterval lam = dominant_eigen_interval(a, eig_tol);
        if (lam.hi <= 1)
            fail(errc::lambda_not_greater_than_one, "growth rate is not above one");
        if (lam.lo <= 1) continue; // cannot yet separate the growth rate from 1
        VectorEnclosure ell = left_eigenvector(a, eig_tol);

        RatInterval lam1{lam.lo - 1, lam.hi - 1};
        RatInterval num = iv_add(iv_dot(ell, u0), iv_div(iv_dot(ell, y), lam1));
        RatInterval den = iv_add(iv_dot(ell, v0), iv_div(iv_dot(ell, x), lam1));
        if (den.first <= 0) {
            if (den.second <= 0)
                fail(errc::degenerate_denominator, "prefix projection is not positive");
            continue; // denominator sign not yet certified
        }
        RatInterval ratio = iv_div(num, den);
        EigenInterval core{BigRat(1) + ratio.first, BigRat(1) + ratio.second};
        if (core.width() <= target) return {core.lo - pad, core.hi + pad};
    }
    fail(errc::precision_exhausted, "limit enclosure did not reach tolerance");
}

namespace {

constexpr std::size_t max_chain_elements = 64;
constexpr std::size_t max_tracked_roots = 256;

struct ChainContext {
    const NormalizedSpec& ns;
    const LetterSet& dp;
    AnalysisBudget budget;
    StreamPtr pure;
    ImageCursor cur;
    std::size_t M;

    ChainContext(const NormalizedSpec& n, const LetterSet& d, const AnalysisBudget& b)
        : ns(n), dp(d), budget(b), pure(fixed_point_stream(n.spec)),
          cur(n.spec.morphism, pure), M(n.spec.morphism.max_rule_len()) {}

    bool in_delta(Letter l) const { return l < dp.size() && dp[l]; }

    Word read_range(u64 lo, u64 hi) {
        Word out;
        out.reserve(static_cast<std::size_t>(hi - lo + 1));
        for (u64 p = lo; p <= hi; ++p) out.push_back(pure->at(p));
        return out;
    }
};

enum class LinkStatus { ok, truncated, broken };

// Successor of a qualifying block: the maximal run containing the image of
// its core (the block minus M letters each side). `truncated` when the run's
// right end is not witnessed inside the probing horizon, `broken` when the
// core's image is not contained in a single run.
LinkStatus find_successor(ChainContext& ctx, const BlockOccurrence& b, BlockOccurrence& out) {
    const std::size_t M = ctx.M;
    u64 ps = ctx.cur.image_interval(b.i + M).start;
    u64 pe = ctx.cur.image_interval(b.j - M).end;
    if (!ctx.in_delta(ctx.pure->at(ps))) return LinkStatus::broken;
    u64 j = ps;
    while (true) {
        if (j + 1 >= ctx.budget.horizon) return LinkStatus::truncated;
        if (!ctx.in_delta(ctx.pure->at(j + 1))) break;
        ++j;
    }
    if (j < pe) return LinkStatus::broken;
    u64 i = ps;
    while (i > 0 && ctx.in_delta(ctx.pure->at(i - 1))) --i;
    out = BlockOccurrence{i, j, 0, BlockKind::delta, -1};
    return LinkStatus::ok;
}

Word chain_signature(ChainContext& ctx, const BlockOccurrence& root) {
    auto [iv, jv] = ctx.cur.inverse_image(root.i, root.j);
    u64 lo = iv > ctx.M ? iv - ctx.M : 0;
    return ctx.read_range(lo, jv + ctx.M);
}

std::vector<DeltaChain> link_from_blocks(ChainContext& ctx,
                                         const std::vector<BlockOccurrence>& blocks) {
    const std::size_t M = ctx.M;
    std::vector<BlockOccurrence> qual;
    for (const auto& b : blocks) {
        if (b.i > M && b.len() > static_cast<u64>(M) * M) {
            qual.push_back(b);
            if (qual.size() >= max_tracked_roots) break;
        }
    }
    // successors of qualifying blocks; a qualifying block that is itself a
    // successor continues an existing chain instead of rooting a new one
    std::set<u64> succ_starts;
    for (const auto& b : qual) {
        BlockOccurrence s;
        if (find_successor(ctx, b, s) == LinkStatus::ok) succ_starts.insert(s.i);
    }
    std::vector<DeltaChain> chains;
    std::set<Word> seen;
    for (const auto& b : qual) {
        if (succ_starts.count(b.i)) continue;
        Word sig = chain_signature(ctx, b);
        if (!seen.insert(sig).second) continue;
        DeltaChain chain;
        chain.signature = std::move(sig);
        chain.elements.push_back(b);
        chain.elements.back().k = 0;
        while (chain.elements.size() < max_chain_elements) {
            BlockOccurrence nxt;
            LinkStatus st = find_successor(ctx, chain.elements.back(), nxt);
            if (st == LinkStatus::truncated) {
                chain.truncated = true;
                break;
            }
            if (st == LinkStatus::broken) break;
            nxt.k = chain.elements.size();
            chain.elements.push_back(nxt);
        }
        chains.push_back(std::move(chain));
    }
    return chains;
}

void compute_stretches_impl(ChainContext& ctx, DeltaChain& chain) {
    chain.stretches.clear();
    const u64 stretch_cap = 4ull * ctx.M * ctx.M + 16;
    for (std::size_t s = 0; s + 1 < chain.elements.size(); ++s) {
        const auto& b = chain.elements[s];
        const auto& c = chain.elements[s + 1];
        u64 first = ctx.cur.image_interval(b.i).start;
        u64 last = ctx.cur.image_interval(b.j).end;
        auto take = [&](u64 lo, u64 hi) {
            if (hi - lo + 1 > stretch_cap)
                fail(errc::horizon_exceeded, "stretch word exceeds the local window cap");
            return ctx.read_range(lo, hi);
        };
        StretchRecord r;
        if (c.i < first) {
            r.sigma = take(c.i, first - 1);
            r.sigma_sign = 1;
        } else if (c.i > first) {
            r.sigma = take(first, c.i - 1);
            r.sigma_sign = -1;
        }
        if (c.j > last) {
            r.rho = take(last + 1, c.j);
            r.rho_sign = 1;
        } else if (c.j < last) {
            r.rho = take(c.j + 1, last);
            r.rho_sign = -1;
        }
        if (c.i > 0)
            r.left_pivot = ctx.pure->at(ctx.cur.inverse_image(c.i - 1, c.i - 1).first);
        r.right_pivot = ctx.pure->at(ctx.cur.inverse_image(c.j + 1, c.j + 1).first);
        chain.stretches.push_back(std::move(r));
    }
}

BigRat element_ratio(const BlockOccurrence& b) { return make_rat(BigInt(b.j), BigInt(b.i)); }

LimsupValue rational_value(BigRat v) {
    LimsupValue lv;
    lv.kind = LimsupValue::Kind::rational;
    lv.value = std::move(v);
    return lv;
}

LimsupValue estimate_value(BigRat v) {
    LimsupValue lv;
    lv.kind = LimsupValue::Kind::estimate;
    lv.value = std::move(v);
    return lv;
}

ChainAnalysis analyze_chain(ChainContext& ctx, DeltaChain& chain) {
    ChainAnalysis ca;
    ca.root_i = chain.elements.front().i;
    ca.root_j = chain.elements.front().j;
    ca.elements = chain.elements.size();
    BigRat observed(0);
    for (const auto& b : chain.elements)
        if (element_ratio(b) > observed) observed = element_ratio(b);
    ca.ratio_bound = observed;

    auto empirical = [&]() {
        ca.method = "empirical";
        ca.value = estimate_value(element_ratio(chain.elements.back()));
    };

    try {
        compute_stretches_impl(ctx, chain);
        ca.cycle = analyze_stretches(chain, ctx.budget);
        ca.cycle_found = true;
    } catch (const error&) {
        empirical();
        return ca;
    }

    const Morphism& g = ctx.ns.spec.morphism;
    const std::size_t p = ca.cycle.period;
    const std::size_t t0 = ca.cycle.preperiod;
    try {
        if (auto mw = g.uniform_width()) {
            BigInt m(static_cast<unsigned long>(*mw));
            BigInt m_eff = pow_ui(m, static_cast<unsigned long>(p));
            std::optional<BigRat> best;
            for (std::size_t phi = 0; phi < p; ++phi) {
                const auto& start = chain.elements[t0 + phi];
                BigInt y(0), x(0);
                for (std::size_t l = 0; l < p; ++l) {
                    const auto& st = chain.stretches[t0 + phi + l];
                    BigInt w = pow_ui(m, static_cast<unsigned long>(p - 1 - l));
                    BigInt slen(static_cast<unsigned long>(st.sigma.size()));
                    BigInt rlen(static_cast<unsigned long>(st.rho.size()));
                    y += w * (st.sigma_sign * slen + st.rho_sign * rlen);
                    x -= w * (st.sigma_sign * slen);
                }
                BigRat v = exact_limsup_uniform(m_eff, BigInt(start.len()), BigInt(start.i), y, x);
                if (!best || v > *best) best = v;
            }
            ca.method = "uniform-closed-form";
            ca.value = rational_value(*best);
        } else {
            IntMatrix a = incidence_matrix(g);
            if (!primitivity_check(a))
                fail(errc::non_primitive, "no exact route without a primitive growth matrix");
            const std::size_t n = a.size();
            std::vector<IntMatrix> pw{IntMatrix::identity(n)};
            for (std::size_t l = 1; l < p; ++l) pw.push_back(pw.back() * a);
            IntMatrix b = pw.back() * a; // A^p
            std::optional<EigenInterval> best;
            for (std::size_t phi = 0; phi < p; ++phi) {
                const auto& start = chain.elements[t0 + phi];
                ParikhVector u0 = parikh(ctx.read_range(start.i, start.j), n);
                ParikhVector v0 = parikh(ctx.read_range(0, start.i - 1), n);
                ParikhVector xv(n, BigInt(0)), yv(n, BigInt(0));
                for (std::size_t l = 0; l < p; ++l) {
                    const auto& st = chain.stretches[t0 + phi + l];
                    ParikhVector sp = parikh(st.sigma, n), rp = parikh(st.rho, n);
                    ParikhVector ys(n), xs(n);
                    for (std::size_t i = 0; i < n; ++i) {
                        ys[i] = st.sigma_sign * sp[i] + st.rho_sign * rp[i];
                        xs[i] = -st.sigma_sign * sp[i];
                    }
                    ParikhVector ty = pw[p - 1 - l].apply(ys);
                    ParikhVector tx = pw[p - 1 - l].apply(xs);
                    for (std::size_t i = 0; i < n; ++i) {
                        yv[i] += ty[i];
                        xv[i] += tx[i];
                    }
                }
                EigenInterval iv = exact_limit_primitive(b, u0, v0, xv, yv, ctx.budget.tol);
                if (!best) {
                    best = iv;
                } else {
                    if (iv.lo > best->lo) best->lo = iv.lo;
                    if (iv.hi > best->hi) best->hi = iv.hi;
                }
            }
            ca.method = "primitive-eigen";
            ca.value.kind = LimsupValue::Kind::interval;
            ca.value.lo = best->lo;
            ca.value.hi = best->hi;
        }
        if (ca.value.upper() > ca.ratio_bound) ca.ratio_bound = ca.value.upper();
    } catch (const error&) {
        empirical();
    }
    return ca;
}

LimsupReport base_report(const AnalysisBudget& budget) {
    LimsupReport rep;
    rep.stats.window = budget.tail_window;
    return rep;
}

} // namespace

std::vector<DeltaChain> link_blocks(const NormalizedSpec& ns, const LetterSet& delta_pure,
                                    const AnalysisBudget& budget,
                                    std::vector<BlockOccurrence>* all_blocks) {
    ChainContext ctx(ns, delta_pure, budget);
    ScanLimit sl;
    sl.horizon = budget.stats_symbols;
    sl.block_horizon = budget.horizon;
    auto blocks = scan_delta_blocks(*ctx.pure, delta_pure, sl);
    if (all_blocks) *all_blocks = blocks;
    return link_from_blocks(ctx, blocks);
}

void compute_stretches(DeltaChain& chain, const NormalizedSpec& ns, const LetterSet& delta_pure) {
    ChainContext ctx(ns, delta_pure, AnalysisBudget{});
    compute_stretches_impl(ctx, chain);
}

CycleInfo analyze_stretches(const DeltaChain& chain, const AnalysisBudget& budget) {
    const auto& st = chain.stretches;
    const std::size_t N = st.size();
    auto fits = [&](std::size_t p, std::size_t t0) -> std::optional<std::size_t> {
        if (N < t0 + 2 * p) return std::nullopt; // want two full cycles past the preperiod
        for (std::size_t k = t0; k + p < N; ++k)
            if (!(st[k] == st[k + p])) return std::nullopt;
        return N - p - t0; // number of verified matches
    };
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t p = 1; p <= budget.period_cap; ++p) {
            for (std::size_t t0 = 0; t0 <= budget.preperiod_cap; ++t0) {
                auto checks = fits(p, t0);
                if (!checks) continue;
                if (pass == 0 && *checks >= budget.confirm)
                    return {t0, p, *checks, false};
                if (pass == 1 && *checks >= std::max<std::size_t>(2, p))
                    return {t0, p, *checks, true};
            }
        }
    }
    fail(errc::horizon_exceeded, "no stable stretch cycle within the caps");
}

LimsupReport limsup_delta(const MorphicSpec& spec, const LetterSet& delta_coded,
                          const AnalysisBudget& budget) {
    validate_spec(spec);
    LimsupReport rep = base_report(budget);

    LetterSet dp = pull_back_delta(spec, delta_coded);
    if (std::find(dp.begin(), dp.end(), true) == dp.end()) {
        rep.method = "finite";
        rep.classification = "rational";
        rep.value = rational_value(BigRat(1));
        rep.note = "no letter of the word lies in the set";
        return rep;
    }

    NormalizedSpec ns = normalize_spec(spec);
    rep.normalize_exponent = ns.exponent;
    HypothesisInfo hyp = check_hypotheses(ns, dp);
    if (!hyp.infinitely_many_terminators)
        fail(errc::infinite_block,
             "letters outside the set occur only finitely often; the word ends in one infinite run");

    ChainContext ctx(ns, dp, budget);
    ScanLimit sl;
    sl.horizon = budget.stats_symbols;
    sl.block_horizon = budget.horizon;
    auto blocks = scan_delta_blocks(*ctx.pure, dp, sl);
    rep.stats = ratio_stats(blocks, budget.tail_window);
    rep.blocks_scanned = blocks.size();

    if (!hyp.unbounded_blocks) {
        rep.classification = "rational";
        if (hyp.infinitely_many_delta) {
            rep.method = "bounded";
            rep.value = rational_value(BigRat(1));
            rep.note = "run lengths stay bounded while positions grow";
        } else {
            rep.method = "finite";
            rep.value = rational_value(rep.stats.max.value_or(BigRat(1)));
            rep.note = "set letters occur only finitely often; maximum over observed runs";
        }
        return rep;
    }

    auto empirical_report = [&](const std::string& note) {
        rep.method = "empirical";
        rep.classification = "estimate-only";
        rep.value = estimate_value(rep.stats.tail ? *rep.stats.tail
                                                  : rep.stats.max.value_or(BigRat(1)));
        if (!note.empty()) rep.note = note;
        if (budget.mode == "exact")
            fail(errc::horizon_exceeded, "no exact value within the probing caps");
    };

    if (budget.mode == "empirical") {
        empirical_report("");
        return rep;
    }

    auto chains = link_from_blocks(ctx, blocks);
    if (chains.empty()) {
        empirical_report("no qualifying chain root inside the scan range");
        return rep;
    }

    for (auto& chain : chains) rep.chains.push_back(analyze_chain(ctx, chain));
    const ChainAnalysis* win = &rep.chains.front();
    for (const auto& ca : rep.chains)
        if (ca.value.upper() > win->value.upper()) win = &ca;
    rep.value = win->value;
    rep.method = win->method;
    switch (rep.value.kind) {
        case LimsupValue::Kind::rational:
            rep.classification = "rational";
            rep.degree_bound = 1;
            break;
        case LimsupValue::Kind::interval:
            rep.classification = "algebraic";
            rep.degree_bound = ns.spec.morphism.alphabet_size();
            break;
        case LimsupValue::Kind::estimate:
            rep.classification = "estimate-only";
            rep.degree_bound = 0;
            break;
    }
    bool all_exact = std::all_of(rep.chains.begin(), rep.chains.end(), [](const ChainAnalysis& c) {
        return c.value.kind != LimsupValue::Kind::estimate;
    });
    if (all_exact) {
        BigRat bound(0);
        for (const auto& ca : rep.chains)
            if (ca.ratio_bound > bound) bound = ca.ratio_bound;
        rep.stats.bound = bound;
    }
    if (budget.mode == "exact" && rep.value.kind == LimsupValue::Kind::estimate)
        fail(errc::horizon_exceeded, "no exact value within the probing caps");
    return rep;
}

LimsupReport limsup_x(const MorphicSpec& spec, const Word& x_coded, const AnalysisBudget& budget) {
    validate_spec(spec);
    XBlockPattern pat = make_pattern(x_coded);
    const std::size_t out_n = spec.output_alphabet().size();
    for (Letter l : x_coded)
        if (l >= out_n) fail(errc::invalid_params, "pattern letter outside the output alphabet");

    LimsupReport rep = base_report(budget);
    auto out = output_stream(spec);
    ScanLimit sl;
    sl.horizon = budget.stats_symbols;
    sl.block_horizon = budget.horizon;
    auto blocks = scan_x_blocks(*out, pat, sl);
    rep.stats = ratio_stats(blocks, budget.tail_window);
    rep.blocks_scanned = blocks.size();

    // per-phase tail maxima; the overall estimate is their maximum
    std::optional<BigRat> best;
    for (const auto& part : phase_partition(blocks, pat)) {
        RatioStats ps = ratio_stats(part, budget.tail_window);
        const std::optional<BigRat>& v = ps.tail ? ps.tail : ps.max;
        if (v && (!best || *v > *best)) best = *v;
    }
    rep.method = "empirical";
    rep.classification = "estimate-only";
    rep.value = estimate_value(best ? *best : rep.stats.max.value_or(BigRat(1)));
    rep.note = "pattern-run ratios are estimated per phase; exact routes cover letter-set runs";
    if (budget.mode == "exact")
        fail(errc::horizon_exceeded, "pattern runs have no exact route");
    return rep;
}

} // namespace morphblocks
