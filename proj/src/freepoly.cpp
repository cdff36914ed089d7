#include "freeholo/freepoly.hpp"

#include <algorithm>
#include <string>

namespace freeholo {

FreePoly::FreePoly(int nvars) : nvars_(nvars) {
    if (nvars < 1) throw DimensionError("FreePoly: nvars must be at least 1");
}

FreePoly FreePoly::constant(Complex c, int nvars) { return monomial({}, c, nvars); }

FreePoly FreePoly::variable(int i, int nvars) { return monomial({i}, 1.0, nvars); }

FreePoly FreePoly::monomial(const Word& w, Complex c, int nvars) {
    FreePoly p(nvars);
    p.add_term(w, c);
    return p;
}

int FreePoly::degree() const {
    return terms_.empty() ? -1 : static_cast<int>(terms_.rbegin()->first.size());
}

int FreePoly::min_degree() const {
    return terms_.empty() ? -1 : static_cast<int>(terms_.begin()->first.size());
}

Complex FreePoly::coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Complex(0.0) : it->second;
}

void FreePoly::check_word(const Word& w) const {
    for (int letter : w) {
        if (letter < 1 || letter > nvars_) {
            throw DimensionError("FreePoly: letter " + std::to_string(letter) + " outside 1.." +
                                 std::to_string(nvars_));
        }
    }
}

void FreePoly::add_term(const Word& w, Complex c) {
    check_word(w);
    if (c == Complex(0.0)) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == Complex(0.0)) terms_.erase(it);
    }
}

FreePoly FreePoly::with_nvars(int nvars) const {
    FreePoly out(nvars);
    for (const auto& [w, c] : terms_) out.add_term(w, c);
    return out;
}

FreePoly FreePoly::truncated(int k) const {
    FreePoly out(nvars_);
    for (const auto& [w, c] : terms_) {
        if (static_cast<int>(w.size()) <= k) out.terms_.emplace_hint(out.terms_.end(), w, c);
    }
    return out;
}

FreePoly& FreePoly::operator+=(const FreePoly& q) {
    nvars_ = std::max(nvars_, q.nvars_);
    for (const auto& [w, c] : q.terms_) add_term(w, c);
    return *this;
}

FreePoly& FreePoly::operator-=(const FreePoly& q) {
    nvars_ = std::max(nvars_, q.nvars_);
    for (const auto& [w, c] : q.terms_) add_term(w, -c);
    return *this;
}

FreePoly& FreePoly::operator*=(Complex c) {
    if (c == Complex(0.0)) {
        terms_.clear();
        return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= c;
        // Underflow can produce an exact zero.
        if (it->second == Complex(0.0)) {
            it = terms_.erase(it);
        } else {
            ++it;
        }
    }
    return *this;
}

FreePoly operator*(const FreePoly& p, const FreePoly& q) {
    FreePoly out(std::max(p.nvars_, q.nvars_));
    Word w;
    for (const auto& [wp, cp] : p.terms_) {
        for (const auto& [wq, cq] : q.terms_) {
            w.assign(wp.begin(), wp.end());
            w.insert(w.end(), wq.begin(), wq.end());
            out.add_term(w, cp * cq);
        }
    }
    return out;
}

FreePoly poly_add(const FreePoly& p, const FreePoly& q) { return p + q; }
FreePoly poly_mul(const FreePoly& p, const FreePoly& q) { return p * q; }
FreePoly poly_scale(const FreePoly& p, Complex c) { return c * p; }

std::vector<FreePoly> homogeneous_split(const FreePoly& p) {
    std::vector<FreePoly> out;
    if (p.is_zero()) return out;
    out.assign(static_cast<std::size_t>(p.degree()) + 1, FreePoly(p.nvars()));
    for (const auto& [w, c] : p.terms()) out[w.size()].add_term(w, c);
    return out;
}

CMatrix word_product(const Word& w, const MatrixTuple& x) {
    CMatrix out = CMatrix::Identity(x.dim(), x.dim());
    for (int letter : w) {
        if (letter < 1 || static_cast<std::size_t>(letter) > x.size()) {
            throw DimensionError("word_product: letter " + std::to_string(letter) + " but tuple has d = " +
                                 std::to_string(x.size()));
        }
        out = out * x[static_cast<std::size_t>(letter) - 1];
    }
    return out;
}

CMatrix eval(const FreePoly& p, const MatrixTuple& x) {
    if (static_cast<std::size_t>(p.nvars()) > x.size()) {
        throw DimensionError("eval: polynomial in " + std::to_string(p.nvars()) + " variables at a " +
                             std::to_string(x.size()) + "-tuple");
    }
    CMatrix acc = CMatrix::Zero(x.dim(), x.dim());
    for (const auto& [w, c] : p.terms()) acc += c * word_product(w, x);
    return acc;
}

const CMatrix& EvalCache::word(const Word& w) {
    if (auto it = products_.find(w); it != products_.end()) {
        ++hits_;
        return it->second;
    }
    ++misses_;
    CMatrix value;
    if (w.empty()) {
        value = CMatrix::Identity(x_.dim(), x_.dim());
    } else {
        const int letter = w.back();
        if (letter < 1 || static_cast<std::size_t>(letter) > x_.size()) {
            throw DimensionError("EvalCache: letter " + std::to_string(letter) + " out of range");
        }
        const Word prefix(w.begin(), w.end() - 1);
        value = word(prefix) * x_[static_cast<std::size_t>(letter) - 1];
    }
    return products_.emplace(w, std::move(value)).first->second;
}

CMatrix eval_many(const FreePoly& p, EvalCache& cache) {
    const MatrixTuple& x = cache.point();
    if (static_cast<std::size_t>(p.nvars()) > x.size()) {
        throw DimensionError("eval_many: polynomial has more variables than the tuple");
    }
    CMatrix acc = CMatrix::Zero(x.dim(), x.dim());
    for (const auto& [w, c] : p.terms()) acc += c * cache.word(w);
    return acc;
}

}  // namespace freeholo
