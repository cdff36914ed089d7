#include "freeholo/rng.hpp"

#include <cmath>
#include <numbers>

namespace freeholo {

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller; 1 - u keeps the logarithm finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(ang);
    has_spare_ = true;
    return rad * std::cos(ang);
}

Complex Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) * std::numbers::sqrt2 * 0.5;
}

CMatrix Rng::gaussian(std::size_t rows, std::size_t cols) {
    CMatrix g(rows, cols);
    // Column-major fill order is part of the determinism contract.
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) g(i, j) = complex_normal();
    }
    return g;
}

CMatrix random_unitary(std::size_t n, Rng& rng) { return unitary_from_qr(rng.gaussian(n, n)); }

}  // namespace freeholo
