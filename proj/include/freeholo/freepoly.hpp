#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "freeholo/matcore.hpp"

namespace freeholo {

/// A word over the letters 1..d; the empty word is the unit.
using Word = std::vector<int>;

/// Graded lexicographic order: shorter words first, ties broken letter by letter.
struct GradedLex {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

/// Complex-coefficient polynomial in d non-commuting variables x1..xd.
///
/// Terms are kept in graded-lex order and exact zero coefficients are never
/// stored. Multiplication concatenates words; there is no normal ordering.
class FreePoly {
public:
    using TermMap = std::map<Word, Complex, GradedLex>;

    explicit FreePoly(int nvars = 1);

    static FreePoly constant(Complex c, int nvars);
    /// The variable x_i (1-based).
    static FreePoly variable(int i, int nvars);
    static FreePoly monomial(const Word& w, Complex c, int nvars);

    int nvars() const noexcept { return nvars_; }
    const TermMap& terms() const noexcept { return terms_; }
    std::size_t term_count() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    /// Highest word length, -1 for the zero polynomial.
    int degree() const;
    /// Lowest word length, -1 for the zero polynomial.
    int min_degree() const;
    Complex coefficient(const Word& w) const;
    Complex constant_term() const { return coefficient({}); }

    /// Adds c to the coefficient of w; drops the term if the sum is exactly zero.
    void add_term(const Word& w, Complex c);
    /// Same polynomial viewed over more variables.
    FreePoly with_nvars(int nvars) const;
    /// Terms of degree <= k only.
    FreePoly truncated(int k) const;

    FreePoly& operator+=(const FreePoly& q);
    FreePoly& operator-=(const FreePoly& q);
    FreePoly& operator*=(Complex c);

    friend FreePoly operator+(FreePoly p, const FreePoly& q) { return p += q; }
    friend FreePoly operator-(FreePoly p, const FreePoly& q) { return p -= q; }
    friend FreePoly operator-(FreePoly p) { return p *= Complex(-1.0); }
    friend FreePoly operator*(Complex c, FreePoly p) { return p *= c; }
    friend FreePoly operator*(FreePoly p, Complex c) { return p *= c; }
    friend FreePoly operator*(const FreePoly& p, const FreePoly& q);
    friend bool operator==(const FreePoly& p, const FreePoly& q) { return p.terms_ == q.terms_; }

private:
    void check_word(const Word& w) const;

    int nvars_;
    TermMap terms_;
};

FreePoly poly_add(const FreePoly& p, const FreePoly& q);
FreePoly poly_mul(const FreePoly& p, const FreePoly& q);
FreePoly poly_scale(const FreePoly& p, Complex c);

/// Component k holds exactly the degree-k terms. Empty for the zero polynomial.
std::vector<FreePoly> homogeneous_split(const FreePoly& p);

/// x^w: ordered product x^{w_1} x^{w_2} ..., identity for the empty word.
CMatrix word_product(const Word& w, const MatrixTuple& x);

/// Sum of coeff(w) x^w. Requires p.nvars() <= x.size().
CMatrix eval(const FreePoly& p, const MatrixTuple& x);

/// Memoized word products at a fixed point. One cache per evaluation session;
/// not safe to share between threads.
class EvalCache {
public:
    explicit EvalCache(MatrixTuple x) : x_(std::move(x)) {}

    const MatrixTuple& point() const noexcept { return x_; }
    const CMatrix& word(const Word& w);
    std::size_t hits() const noexcept { return hits_; }
    std::size_t misses() const noexcept { return misses_; }

private:
    MatrixTuple x_;
    std::map<Word, CMatrix, GradedLex> products_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

/// eval() through a shared word-product cache bound to the cache's point.
CMatrix eval_many(const FreePoly& p, EvalCache& cache);

}  // namespace freeholo
