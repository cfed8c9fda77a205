#include "morphblocks/linalg.hpp"

#include <algorithm>

#include "morphblocks/errors.hpp"

namespace morphblocks {

ParikhVector parikh(const Word& w, std::size_t n) {
    ParikhVector v(n, BigInt(0));
    for (Letter l : w) {
        if (l >= n) fail(errc::invalid_params, "letter outside alphabet in parikh()");
        ++v[l];
    }
    return v;
}

IntMatrix::IntMatrix(std::size_t n, BigInt fill) : n_(n), data_(n * n, std::move(fill)) {}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (n_ != o.n_) fail(errc::invalid_params, "matrix size mismatch");
    IntMatrix out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const BigInt& aik = at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < n_; ++j) out.at(i, j) += aik * o.at(k, j);
        }
    return out;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
    if (n_ != o.n_) fail(errc::invalid_params, "matrix size mismatch");
    IntMatrix out(n_);
    for (std::size_t i = 0; i < n_ * n_; ++i) out.data_[i] = data_[i] + o.data_[i];
    return out;
}

ParikhVector IntMatrix::apply(const ParikhVector& v) const {
    if (v.size() != n_) fail(errc::invalid_params, "vector size mismatch");
    ParikhVector out(n_, BigInt(0));
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            if (at(i, j) != 0) out[i] += at(i, j) * v[j];
    return out;
}

IntMatrix IntMatrix::pow(unsigned e) const {
    IntMatrix result = identity(n_);
    IntMatrix base = *this;
    while (e) {
        if (e & 1u) result = result * base;
        e >>= 1u;
        if (e) base = base * base;
    }
    return result;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) out.at(j, i) = at(i, j);
    return out;
}

BigInt IntMatrix::column_sum(std::size_t j) const {
    BigInt s = 0;
    for (std::size_t i = 0; i < n_; ++i) s += at(i, j);
    return s;
}

IntMatrix incidence_matrix(const Morphism& h) {
    const std::size_t n = h.alphabet_size();
    IntMatrix a(n);
    for (std::size_t j = 0; j < n; ++j)
        for (Letter l : h.rule(static_cast<Letter>(j))) ++a.at(l, j);
    return a;
}

BigInt dot(const ParikhVector& a, const ParikhVector& b) {
    if (a.size() != b.size()) fail(errc::invalid_params, "vector size mismatch");
    BigInt s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

BigInt vec_sum(const ParikhVector& v) {
    BigInt s = 0;
    for (const BigInt& x : v) s += x;
    return s;
}

BoolMatrix BoolMatrix::of(const IntMatrix& a) {
    BoolMatrix b(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) b.set(i, j, a.at(i, j) != 0);
    return b;
}

BoolMatrix BoolMatrix::operator*(const BoolMatrix& o) const {
    if (n_ != o.n_) fail(errc::invalid_params, "matrix size mismatch");
    BoolMatrix out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k)
            if (get(i, k))
                for (std::size_t j = 0; j < n_; ++j)
                    if (o.get(k, j)) out.set(i, j, true);
    return out;
}

unsigned bool_stabilize(const BoolMatrix& b) {
    if (b.size() == 0) fail(errc::invalid_params, "empty matrix");
    std::vector<BoolMatrix> powers{b}; // powers[k] holds B^{k+1}
    const std::size_t cap = 4 * b.size() * b.size() + 64;
    for (std::size_t k = 1;; ++k) {
        BoolMatrix next = powers.back() * b; // B^{k+1}
        for (std::size_t t = 0; t < powers.size(); ++t) {
            if (!(powers[t] == next)) continue;
            auto tt = static_cast<unsigned>(t + 1);    // B^tt == B^{tt+c}
            auto c = static_cast<unsigned>(k + 1 - tt);
            for (unsigned add = 0; add < c; ++add)
                if ((tt + add) % c == 0) return tt + add;
        }
        powers.push_back(std::move(next));
        if (powers.size() > cap)
            fail(errc::precision_exhausted, "boolean power sequence did not cycle within cap");
    }
}

std::vector<BigInt> char_poly(const IntMatrix& a) {
    const std::size_t n = a.size();
    std::vector<BigInt> c(n + 1, BigInt(0));
    c[n] = 1;
    if (n == 0) return c;
    IntMatrix m = a;
    for (std::size_t k = 1; k <= n; ++k) {
        BigInt tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += m.at(i, i);
        // trace divisions in this scheme are exact over the integers
        if (!mpz_divisible_ui_p(tr.get_mpz_t(), static_cast<unsigned long>(k)))
            fail(errc::invalid_params, "internal: inexact trace division");
        BigInt ck;
        mpz_divexact_ui(ck.get_mpz_t(), tr.get_mpz_t(), static_cast<unsigned long>(k));
        c[n - k] = -ck;
        if (k < n) {
            for (std::size_t i = 0; i < n; ++i) m.at(i, i) += c[n - k];
            m = a * m;
        }
    }
    return c;
}

BigRat poly_eval(const std::vector<BigInt>& coeffs, const BigRat& x) {
    BigRat acc(0);
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + BigRat(coeffs[k]);
    return acc;
}

namespace {

// Tarjan strongly connected components over the support digraph; the edge
// direction is immaterial for component sets and the spectral radius.
struct SccFinder {
    const IntMatrix& a;
    std::vector<int> index, low, comp;
    std::vector<int> stack;
    std::vector<bool> on_stack;
    int counter = 0, ncomp = 0;

    explicit SccFinder(const IntMatrix& m)
        : a(m), index(m.size(), -1), low(m.size(), 0), comp(m.size(), -1),
          on_stack(m.size(), false) {}

    void dfs(int v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (std::size_t w = 0; w < a.size(); ++w) {
            if (a.at(static_cast<std::size_t>(v), w) == 0) continue;
            if (index[w] < 0) {
                dfs(static_cast<int>(w));
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            while (true) {
                int w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp[w] = ncomp;
                if (w == v) break;
            }
            ++ncomp;
        }
    }

    std::vector<std::vector<int>> run() {
        for (std::size_t v = 0; v < a.size(); ++v)
            if (index[v] < 0) dfs(static_cast<int>(v));
        std::vector<std::vector<int>> groups(ncomp);
        for (std::size_t v = 0; v < a.size(); ++v) groups[comp[v]].push_back(static_cast<int>(v));
        return groups;
    }
};

unsigned long grid_bits(const BigRat& tol) {
    unsigned long prec = 128;
    if (tol > 0 && tol < 1) {
        long bits = static_cast<long>(mpz_sizeinbase(tol.get_den().get_mpz_t(), 2)) -
                    static_cast<long>(mpz_sizeinbase(tol.get_num().get_mpz_t(), 2)) + 2;
        if (bits > 0 && static_cast<unsigned long>(bits) + 64 > prec)
            prec = static_cast<unsigned long>(bits) + 64;
    }
    return prec;
}

// Collatz–Wielandt bracket for one strongly connected component, run on
// T = A|_C + I (irreducible, aperiodic thanks to the shift); brackets from
// successive iterates are intersected, the +1 shift is removed at the end.
EigenInterval cw_component(const IntMatrix& a, const std::vector<int>& nodes, const BigRat& tol,
                           unsigned max_iter) {
    const std::size_t k = nodes.size();
    std::vector<BigInt> t(k * k, BigInt(0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            t[i * k + j] = a.at(static_cast<std::size_t>(nodes[i]), static_cast<std::size_t>(nodes[j]));
            if (i == j) ++t[i * k + j];
        }

    const BigInt scale = pow_ui(BigInt(2), grid_bits(tol));
    std::vector<BigRat> v(k, BigRat(1));
    BigRat best_lo(0), best_hi(0);
    bool have_hi = false;
    for (unsigned it = 0; it < max_iter; ++it) {
        std::vector<BigRat> w(k, BigRat(0));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (t[i * k + j] != 0) w[i] += BigRat(t[i * k + j]) * v[j];
        BigRat qmin, qmax;
        for (std::size_t i = 0; i < k; ++i) {
            BigRat q = w[i] / v[i];
            if (i == 0 || q < qmin) qmin = q;
            if (i == 0 || q > qmax) qmax = q;
        }
        if (qmin > best_lo) best_lo = qmin;
        if (!have_hi || qmax < best_hi) {
            best_hi = qmax;
            have_hi = true;
        }
        if (best_hi - best_lo <= tol) {
            BigRat lo = best_lo - 1;
            if (lo < 0) lo = 0;
            return {lo, best_hi - 1};
        }
        // renormalize onto a fixed dyadic grid so rationals stay small; any
        // positive vector yields a valid bracket, so rounding is harmless
        const BigRat& wmax = *std::max_element(w.begin(), w.end());
        for (std::size_t i = 0; i < k; ++i) {
            BigInt num;
            BigInt a_num = w[i].get_num() * scale * wmax.get_den();
            BigInt a_den = w[i].get_den() * wmax.get_num();
            mpz_fdiv_q(num.get_mpz_t(), a_num.get_mpz_t(), a_den.get_mpz_t());
            if (num < 1) num = 1;
            v[i] = make_rat(num, scale);
        }
    }
    fail(errc::precision_exhausted, "spectral radius enclosure did not reach tolerance");
}

} // namespace

EigenInterval dominant_eigen_interval(const IntMatrix& a, const BigRat& tol, unsigned max_iter) {
    if (a.size() == 0) fail(errc::invalid_params, "empty matrix");
    SccFinder finder(a);
    auto groups = finder.run();
    EigenInterval out{BigRat(0), BigRat(0)};
    for (const auto& nodes : groups) {
        EigenInterval e = cw_component(a, nodes, tol, max_iter);
        if (e.lo > out.lo) out.lo = e.lo;
        if (e.hi > out.hi) out.hi = e.hi;
    }
    return out;
}

bool primitivity_check(const IntMatrix& a) {
    const std::size_t n = a.size();
    if (n == 0) return false;
    BoolMatrix b = BoolMatrix::of(a);
    BoolMatrix p = b;
    const std::size_t wielandt = (n - 1) * (n - 1) + 1;
    for (std::size_t k = 1; k <= wielandt; ++k) {
        bool all = true;
        for (std::size_t i = 0; i < n && all; ++i)
            for (std::size_t j = 0; j < n && all; ++j)
                if (!p.get(i, j)) all = false;
        if (all) return true;
        p = p * b;
    }
    return false;
}

VectorEnclosure left_eigenvector(const IntMatrix& a, const BigRat& tol, unsigned max_squarings) {
    const std::size_t n = a.size();
    if (n == 0) fail(errc::invalid_params, "empty matrix");
    if (!primitivity_check(a))
        fail(errc::non_primitive, "left eigenvector enclosure needs a primitive matrix");
    if (n == 1) return {{BigRat(1)}, {BigRat(1)}};

    IntMatrix q = a.transpose();
    for (unsigned s = 0;; ++s) {
        bool positive = true;
        for (std::size_t i = 0; i < n && positive; ++i)
            for (std::size_t j = 0; j < n && positive; ++j)
                if (q.at(i, j) == 0) positive = false;
        if (positive) {
            // w is the Perron vector of Q = (Aᵀ)^m; by the mediant inequality
            // w_j / w_i lies between the extreme column quotients Q_jl / Q_il.
            VectorEnclosure enc;
            enc.lo.resize(n);
            enc.hi.resize(n);
            bool done = true;
            for (std::size_t i = 0; i < n; ++i) {
                BigRat sum_min(0), sum_max(0);
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == i) continue;
                    BigRat rmin, rmax;
                    for (std::size_t l = 0; l < n; ++l) {
                        BigRat ratio = make_rat(q.at(j, l), q.at(i, l));
                        if (l == 0 || ratio < rmin) rmin = ratio;
                        if (l == 0 || ratio > rmax) rmax = ratio;
                    }
                    sum_min += rmin;
                    sum_max += rmax;
                }
                enc.lo[i] = BigRat(1) / (BigRat(1) + sum_max);
                enc.hi[i] = BigRat(1) / (BigRat(1) + sum_min);
                if (enc.hi[i] - enc.lo[i] > tol) done = false;
            }
            if (done) return enc;
        }
        if (s >= max_squarings)
            fail(errc::precision_exhausted, "left eigenvector enclosure did not reach tolerance");
        q = q * q;
    }
}

BoolMatrix transitive_closure(const BoolMatrix& b) {
    const std::size_t n = b.size();
    BoolMatrix r = b;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (r.get(i, k))
                for (std::size_t j = 0; j < n; ++j)
                    if (r.get(k, j)) r.set(i, j, true);
    return r;
}

std::vector<bool> growing_letters(const Morphism& h) {
    const std::size_t n = h.alphabet_size();
    BoolMatrix closure = transitive_closure(BoolMatrix::of(incidence_matrix(h)));
    std::vector<bool> out(n, false);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t f = 0; f < n; ++f) {
            bool reachable = (f == c) || closure.get(f, c); // f appears in some h^k(c)
            if (reachable && closure.get(f, f) && h.rule(static_cast<Letter>(f)).size() >= 2) {
                out[c] = true;
                break;
            }
        }
    }
    return out;
}

} // namespace morphblocks
