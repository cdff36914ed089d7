#include "freeholo/json_io.hpp"

#include <cmath>
#include <fstream>

#include "freeholo/polyparse.hpp"

namespace freeholo {

namespace {

const json& field(const json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key)) throw FixtureError(std::string(what) + ": missing key '" + key + "'");
    return j.at(key);
}

std::size_t natural(const json& j, const char* key, const char* what) {
    const json& v = field(j, key, what);
    if (!v.is_number_unsigned()) throw FixtureError(std::string(what) + ": '" + key + "' must be a natural number");
    return v.get<std::size_t>();
}

double finite_number(const json& v, const char* what) {
    if (!v.is_number()) throw FixtureError(std::string(what) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw FixtureError(std::string(what) + ": non-finite number");
    return x;
}

}  // namespace

json matrix_to_json(const CMatrix& a) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            re.push_back(a(i, j).real());
            im.push_back(a(i, j).imag());
        }
    }
    return json{{"rows", static_cast<std::size_t>(a.rows())}, {"cols", static_cast<std::size_t>(a.cols())}, {"re", std::move(re)}, {"im", std::move(im)}};
}

CMatrix matrix_from_json(const json& j) {
    const std::size_t rows = natural(j, "rows", "matrix");
    const std::size_t cols = natural(j, "cols", "matrix");
    const json& re = field(j, "re", "matrix");
    const json& im = field(j, "im", "matrix");
    if (!re.is_array() || re.size() != rows * cols) throw FixtureError("matrix: 're' must hold rows*cols numbers");
    if (!im.is_array() || im.size() != rows * cols) throw FixtureError("matrix: 'im' must hold rows*cols numbers");
    CMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t k = 0; k < rows * cols; ++k) {
        a(static_cast<Eigen::Index>(k / cols), static_cast<Eigen::Index>(k % cols)) =
            Complex(finite_number(re[k], "matrix"), finite_number(im[k], "matrix"));
    }
    return a;
}

json tuple_to_json(const MatrixTuple& x) {
    json parts = json::array();
    for (const auto& p : x.parts()) parts.push_back(matrix_to_json(p));
    return json{{"d", x.size()}, {"n", x.dim()}, {"parts", std::move(parts)}};
}

MatrixTuple tuple_from_json(const json& j) {
    const json& parts = field(j, "parts", "tuple");
    if (!parts.is_array() || parts.empty()) throw FixtureError("tuple: 'parts' must be a non-empty array");
    std::vector<CMatrix> mats;
    for (const auto& p : parts) mats.push_back(matrix_from_json(p));
    try {
        MatrixTuple x(std::move(mats));
        if (j.contains("n") && natural(j, "n", "tuple") != x.dim()) throw FixtureError("tuple: 'n' disagrees with parts");
        if (j.contains("d") && natural(j, "d", "tuple") != x.size()) throw FixtureError("tuple: 'd' disagrees with parts");
        return x;
    } catch (const DimensionError& e) {
        throw FixtureError(std::string("tuple: ") + e.what());
    }
}

json poly_to_json(const FreePoly& p) {
    json terms = json::array();
    for (const auto& [w, c] : p.terms()) {
        std::vector<std::size_t> letters(w.begin(), w.end());
        terms.push_back(json{{"word", letters}, {"re", c.real() + 0.0}, {"im", c.imag() + 0.0}});
    }
    return json{{"nvars", static_cast<std::size_t>(p.nvars())}, {"terms", std::move(terms)}};
}

FreePoly poly_from_json(const json& j) {
    const std::size_t nvars = natural(j, "nvars", "poly");
    if (nvars < 1) throw FixtureError("poly: nvars must be at least 1");
    FreePoly p(static_cast<int>(nvars));
    const json& terms = field(j, "terms", "poly");
    if (!terms.is_array()) throw FixtureError("poly: 'terms' must be an array");
    for (const auto& t : terms) {
        const json& word = field(t, "word", "poly term");
        if (!word.is_array()) throw FixtureError("poly term: 'word' must be an array");
        Word w;
        for (const auto& letter : word) {
            if (!letter.is_number_unsigned()) throw FixtureError("poly term: letters must be natural numbers");
            const auto v = letter.get<std::size_t>();
            if (v < 1 || v > nvars) throw FixtureError("poly term: letter outside 1..nvars");
            w.push_back(static_cast<int>(v));
        }
        p.add_term(w, Complex(finite_number(field(t, "re", "poly term"), "poly term"),
                              finite_number(field(t, "im", "poly term"), "poly term")));
    }
    return p;
}

json colligation_to_json(const Colligation& v) {
    return json{{"alpha", {v.alpha().real(), v.alpha().imag()}},
                {"B", matrix_to_json(v.b())},
                {"C", matrix_to_json(v.c())},
                {"D", matrix_to_json(v.d())},
                {"ell", v.ell()},
                {"I", v.rows()},
                {"J", v.cols()}};
}

Colligation colligation_from_json(const json& j) {
    const json& alpha = field(j, "alpha", "colligation");
    if (!alpha.is_array() || alpha.size() != 2) throw FixtureError("colligation: 'alpha' must be [re, im]");
    try {
        return Colligation(Complex(finite_number(alpha[0], "colligation"), finite_number(alpha[1], "colligation")),
                           matrix_from_json(field(j, "B", "colligation")),
                           matrix_from_json(field(j, "C", "colligation")),
                           matrix_from_json(field(j, "D", "colligation")), natural(j, "ell", "colligation"),
                           natural(j, "I", "colligation"), natural(j, "J", "colligation"));
    } catch (const DimensionError& e) {
        throw FixtureError(std::string("colligation: ") + e.what());
    }
}

json delta_to_json(const PolyMatrix& delta) {
    json rows = json::array();
    for (std::size_t i = 0; i < delta.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < delta.cols(); ++k) row.push_back(print_poly(delta(i, k)));
        rows.push_back(std::move(row));
    }
    return json{{"I", delta.rows()}, {"J", delta.cols()}, {"d", static_cast<std::size_t>(delta.nvars())}, {"entries", std::move(rows)}};
}

json neumann_to_json(const NeumannReport& r) {
    return json{{"terms_used", r.terms_used}, {"q", r.q}, {"tail_bound", r.tail_bound}, {"value", matrix_to_json(r.value)}};
}

json series_to_json(const SeriesExpansion& s) {
    json comps = json::array();
    for (const auto& p : s.components) comps.push_back(poly_to_json(p));
    json out{{"K", s.degree}, {"components", std::move(comps)}, {"recentered", s.recentered}};
    out["M"] = s.growth ? json(s.growth->bound) : json(nullptr);
    out["r"] = s.growth ? json(s.growth->radius) : json(nullptr);
    return out;
}

json report_to_json(const PropertyReport& r) {
    json failures = json::array();
    for (const auto& f : r.failures) {
        failures.push_back(json{{"seed", f.seed}, {"residual", std::isfinite(f.residual) ? json(f.residual) : json("inf")},
                                {"digest", f.digest}});
    }
    json out{{"suite", r.suite},
             {"trials", r.trials},
             {"tolerance", r.tolerance},
             {"max_residual", std::isfinite(r.max_residual) ? json(r.max_residual) : json("inf")},
             {"failures", std::move(failures)},
             {"verdict", to_string(r.verdict)}};
    if (!r.profile.empty()) out["profile"] = r.profile;
    if (!r.note.empty()) out["note"] = r.note;
    return out;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FixtureError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FixtureError("'" + path + "': " + e.what());
    }
}

}  // namespace freeholo
