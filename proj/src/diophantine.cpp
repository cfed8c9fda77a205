#include "morphblocks/diophantine.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <utility>
#include <vector>

#include "morphblocks/errors.hpp"

namespace morphblocks {

namespace {

void check_indices(const std::vector<BigInt>& ones) {
    for (std::size_t j = 0; j < ones.size(); ++j) {
        if (ones[j] < 1) fail(errc::invalid_params, "indices must be at least 1");
        if (j > 0 && ones[j] <= ones[j - 1])
            fail(errc::invalid_params, "indices must be strictly increasing");
    }
}

} // namespace

DigitExpansion xi_from_indices(unsigned base, const std::vector<BigInt>& ones, bool complete) {
    if (base < 2) fail(errc::invalid_params, "base must be at least 2");
    check_indices(ones);
    auto support = std::make_shared<std::vector<BigInt>>(ones);
    DigitExpansion exp;
    exp.base = base;
    exp.digits = predicate_stream(
        [support](u64 n) {
            BigInt key(static_cast<unsigned long>(n));
            return static_cast<Letter>(
                std::binary_search(support->begin(), support->end(), key) ? 1 : 0);
        },
        "xi-digits");
    if (complete) exp.last_one = ones.empty() ? BigInt(0) : ones.back();
    return exp;
}

DigitExpansion expansion_from_stream(unsigned base, StreamPtr digits) {
    if (base < 2) fail(errc::invalid_params, "base must be at least 2");
    if (!digits) fail(errc::invalid_params, "expansion needs a digit stream");
    DigitExpansion exp;
    exp.base = base;
    exp.digits = std::move(digits);
    return exp;
}

VbEstimate v_b_estimate(const DigitExpansion& exp, u64 digit_count, std::size_t window) {
    if (exp.base < 2) fail(errc::invalid_params, "base must be at least 2");
    if (!exp.digits) fail(errc::invalid_params, "expansion has no digit stream");
    if (window == 0) fail(errc::invalid_params, "window must be positive");
    if (exp.last_one && BigInt(static_cast<unsigned long>(digit_count)) > *exp.last_one)
        fail(errc::infinite_block, "digit tail is eventually constant: the value is rational");

    VbEstimate vb;
    vb.window = window;
    vb.best = 0;
    const int top = static_cast<int>(exp.base) - 1;
    std::deque<RunWitness> recent;

    u64 run_start = 1;
    int run_digit = -1; // nothing read yet
    auto close_run = [&](u64 end) {
        if (run_digit != 0 && run_digit != top) return;
        if (run_start < 2) return; // truncation at n = i-1 needs i >= 2
        RunWitness w;
        w.start = run_start;
        w.end = end;
        w.digit = run_digit;
        w.exponent = make_rat(BigInt(static_cast<unsigned long>(end - run_start + 1)),
                              BigInt(static_cast<unsigned long>(run_start - 1)));
        ++vb.witnesses;
        if (!vb.best_witness || w.exponent > vb.best) {
            vb.best = w.exponent;
            vb.best_witness = w;
        }
        recent.push_back(w);
        if (recent.size() > window) recent.pop_front();
    };

    WordStream& d = *exp.digits;
    for (u64 n = 1; n <= digit_count; ++n) {
        Letter l = d.at(n);
        if (l >= exp.base) fail(errc::invalid_params, "digit out of range for the base");
        int dig = l;
        if (dig != run_digit) {
            if (run_digit >= 0) close_run(n - 1);
            run_digit = dig;
            run_start = n;
        }
    }
    // a run still open at the scan edge is not known to be maximal: no witness

    vb.digits_scanned = digit_count;
    vb.recent.assign(recent.begin(), recent.end());
    if (!recent.empty()) {
        BigRat t = recent.front().exponent;
        for (const RunWitness& w : recent) t = std::max(t, w.exponent);
        vb.tail = t;
    }
    return vb;
}

BigRat truncate_value(const std::vector<BigInt>& ones, unsigned base, std::size_t take) {
    if (base < 2) fail(errc::invalid_params, "base must be at least 2");
    if (take == 0 || take > ones.size())
        fail(errc::invalid_params, "take must select a nonempty prefix of the indices");
    check_indices(ones);
    const BigInt& last = ones[take - 1];
    if (!last.fits_ulong_p()) fail(errc::invalid_params, "index too large to exponentiate");
    BigInt num = 0;
    for (std::size_t j = 0; j < take; ++j) {
        BigInt diff = last - ones[j];
        num += pow_ui(base, diff.get_ui());
    }
    return make_rat(num, pow_ui(base, last.get_ui()));
}

BigRat truncate_value(const DigitExpansion& exp, std::size_t take) {
    if (exp.base < 2) fail(errc::invalid_params, "base must be at least 2");
    if (!exp.digits) fail(errc::invalid_params, "expansion has no digit stream");
    if (take == 0) fail(errc::invalid_params, "take must be positive");

    constexpr u64 walk_cap = 10'000'000;
    std::vector<std::pair<u64, unsigned>> hits; // position, digit
    for (u64 n = 0; n <= walk_cap && hits.size() < take; ++n) {
        if (exp.last_one && BigInt(static_cast<unsigned long>(n)) > *exp.last_one) break;
        Letter l = exp.digits->at(n);
        if (l >= exp.base) fail(errc::invalid_params, "digit out of range for the base");
        if (l != 0) hits.emplace_back(n, l);
    }
    if (hits.size() < take) {
        if (exp.last_one)
            fail(errc::invalid_params, "expansion has fewer nonzero digits than requested");
        fail(errc::horizon_exceeded, "ran out of scan budget collecting nonzero digits");
    }
    u64 last = hits.back().first;
    BigInt num = 0;
    for (auto& [n, dig] : hits) num += BigInt(dig) * pow_ui(exp.base, last - n);
    return make_rat(num, pow_ui(exp.base, last));
}

std::vector<BigInt> continued_fraction(const BigRat& x, std::size_t max_terms) {
    if (x < 0) fail(errc::invalid_params, "continued fraction needs a nonnegative value");
    std::vector<BigInt> out;
    BigRat cur = x;
    for (std::size_t i = 0; i < max_terms; ++i) {
        BigInt fl;
        mpz_fdiv_q(fl.get_mpz_t(), mpq_numref(cur.get_mpq_t()), mpq_denref(cur.get_mpq_t()));
        out.push_back(fl);
        BigRat frac = cur - BigRat(fl);
        if (frac == 0) break;
        cur = BigRat(1) / frac;
    }
    return out;
}

std::vector<BigInt> convergent_denominators(const std::vector<BigInt>& cf) {
    std::vector<BigInt> q(cf.size());
    for (std::size_t k = 0; k < cf.size(); ++k) {
        if (k == 0)
            q[k] = 1;
        else if (k == 1)
            q[k] = cf[k];
        else
            q[k] = cf[k] * q[k - 1] + q[k - 2];
    }
    return q;
}

MuFromCf mu_from_quotients(const std::vector<BigInt>& cf) {
    MuFromCf m;
    std::vector<BigInt> q = convergent_denominators(cf);
    if (q.size() < 3) return m;
    std::size_t usable = q.size() - 2; // last two quotients carry truncation noise
    // Ratios at small denominators overweight startup fluctuations (for a
    // bounded-quotient fraction the ratio only approaches 1 as q grows), so
    // the growth rate is read off where the denominators are largest: the
    // final two eligible pairs.
    std::vector<double> tail;
    for (std::size_t k = 0; k + 1 < usable; ++k) {
        if (q[k] < 16) continue;
        double lo = log2_big(q[k]);
        if (lo <= 0) continue;
        tail.push_back(log2_big(q[k + 1]) / lo);
        ++m.terms_used;
    }
    if (tail.empty()) return m;
    double best = tail.back();
    if (tail.size() >= 2) best = std::max(best, tail[tail.size() - 2]);
    m.value = 1.0 + best;
    return m;
}

MuFromCf mu_from_cf(const std::vector<BigRat>& truncations) {
    if (truncations.empty()) return {};
    return mu_from_quotients(continued_fraction(truncations.back(), 256));
}

ClassCReport class_c_check(const std::vector<BigInt>& ones) {
    ClassCReport r;
    if (ones.size() < 2) {
        r.verdict = "n/a";
        return r;
    }
    check_indices(ones);
    for (std::size_t j = 0; j + 1 < ones.size(); ++j) {
        ++r.checked;
        if (ones[j + 1] < 2 * ones[j]) {
            r.violations.push_back(j);
            if (!r.first_violation) r.first_violation = j;
        }
    }
    if (r.violations.empty())
        r.verdict = "holds";
    else if (r.violations.back() == r.checked - 1)
        r.verdict = "fails"; // violations persist to the end of the data
    else {
        r.verdict = "eventual";
        r.settles_at = r.violations.back() + 1;
    }
    return r;
}

MuEstimate mu_estimate(const std::vector<BigInt>& ones, std::size_t window) {
    if (window == 0) fail(errc::invalid_params, "window must be positive");
    MuEstimate m;
    if (ones.size() < 2) return m;
    ClassCReport cc = class_c_check(ones);
    m.applicable = cc.verdict == "holds" || cc.verdict == "eventual";

    std::deque<BigRat> recent;
    BigRat best = 0;
    for (std::size_t j = 0; j + 1 < ones.size(); ++j) {
        BigRat ratio = make_rat(ones[j + 1], ones[j]);
        best = std::max(best, ratio);
        recent.push_back(ratio);
        if (recent.size() > window) recent.pop_front();
        ++m.terms;
    }
    m.best = best;
    BigRat t = recent.front();
    for (const BigRat& r : recent) t = std::max(t, r);
    m.tail = t;

    // Diverging: the tail ratios climb and keep accelerating (convex growth,
    // like n_j = j!). A concave climb toward a finite limit does not qualify.
    if (recent.size() >= 3) {
        bool increasing = true, convex = true;
        for (std::size_t i = 0; i + 1 < recent.size(); ++i)
            if (recent[i + 1] <= recent[i]) increasing = false;
        for (std::size_t i = 0; i + 2 < recent.size(); ++i)
            if (recent[i + 2] - recent[i + 1] < recent[i + 1] - recent[i]) convex = false;
        m.diverging = increasing && convex;
    }
    return m;
}

} // namespace morphblocks
