#pragma once

#include <vector>

#include "morphblocks/numeric.hpp"
#include "morphblocks/word.hpp"

namespace morphblocks {

using ParikhVector = std::vector<BigInt>; // length = alphabet size

ParikhVector parikh(const Word& w, std::size_t n);

// Square matrix over big integers, row major. Column j of an incidence
// matrix is the Parikh vector of h(j), so [h(u)] = A·[u].
class IntMatrix {
  public:
    IntMatrix() = default;
    IntMatrix(std::size_t n, BigInt fill = 0);
    static IntMatrix identity(std::size_t n);

    std::size_t size() const { return n_; }
    BigInt& at(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const BigInt& at(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    IntMatrix operator*(const IntMatrix& o) const;
    IntMatrix operator+(const IntMatrix& o) const;
    ParikhVector apply(const ParikhVector& v) const;
    IntMatrix pow(unsigned e) const;
    IntMatrix transpose() const;
    BigInt column_sum(std::size_t j) const;
    bool operator==(const IntMatrix&) const = default;

  private:
    std::size_t n_ = 0;
    std::vector<BigInt> data_;
};

IntMatrix incidence_matrix(const Morphism& h);

BigInt dot(const ParikhVector& a, const ParikhVector& b);
BigInt vec_sum(const ParikhVector& v);

class BoolMatrix {
  public:
    BoolMatrix() = default;
    explicit BoolMatrix(std::size_t n) : n_(n), data_(n * n, 0) {}
    static BoolMatrix of(const IntMatrix& a);

    std::size_t size() const { return n_; }
    bool get(std::size_t i, std::size_t j) const { return data_[i * n_ + j] != 0; }
    void set(std::size_t i, std::size_t j, bool v) { data_[i * n_ + j] = v ? 1 : 0; }
    BoolMatrix operator*(const BoolMatrix& o) const;
    bool operator==(const BoolMatrix&) const = default;

  private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> data_;
};

// Smallest e >= 1 with (B^e)^n = B^e for all n: store successive powers
// B, B², … until B^t = B^{t+c}, then e = t + k for the unique k in [0, c)
// with c | t + k.
unsigned bool_stabilize(const BoolMatrix& b);

// det(xI - A), monic, coefficient of x^k at index k. Faddeev–LeVerrier over
// exact integers (the trace divisions are exact).
std::vector<BigInt> char_poly(const IntMatrix& a);

BigRat poly_eval(const std::vector<BigInt>& coeffs, const BigRat& x);

struct EigenInterval {
    BigRat lo;
    BigRat hi;
    BigRat width() const { return hi - lo; }
    bool contains(const BigRat& x) const { return lo <= x && x <= hi; }
};

// Certified enclosure of the spectral radius of a nonnegative matrix: the
// digraph is split into strongly connected components and each irreducible
// block is bracketed by Collatz–Wielandt quotients of (A_C + I) iterates,
// all in exact rationals; the overall radius is the component max.
EigenInterval dominant_eigen_interval(const IntMatrix& a, const BigRat& tol,
                                      unsigned max_iter = 10'000);

// Wielandt: A primitive iff Bool(A)^k all-ones for some k <= (n-1)^2 + 1.
bool primitivity_check(const IntMatrix& a);

struct VectorEnclosure {
    std::vector<BigRat> lo;
    std::vector<BigRat> hi;
};

// Componentwise enclosure of the dominant left eigenvector, normalized to
// sum 1. Requires primitivity (throws non_primitive). Bounds come from
// column-quotient ranges of high powers of Aᵀ, which contract to the Perron
// direction for positive matrices.
VectorEnclosure left_eigenvector(const IntMatrix& a, const BigRat& tol,
                                 unsigned max_squarings = 64);

// growing_letters[c] == true iff |h^k(c)| is unbounded: c reaches (reflexively)
// a cyclic letter whose rule has length >= 2 (nonerasing morphisms only).
std::vector<bool> growing_letters(const Morphism& h);

// Letters reachable from `from` in >= 1 steps of the rule-dependency graph.
BoolMatrix transitive_closure(const BoolMatrix& b);

} // namespace morphblocks
