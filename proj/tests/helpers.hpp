#pragma once

// Deterministic random object generators shared by the test binaries. All
// randomness flows through std::mt19937_64 raw draws so that sequences are
// reproducible across standard library implementations (std::*_distribution
// is implementation-defined and would not be).

#include <cmath>
#include <random>
#include <vector>

#include "resgames/linalg.hpp"

namespace test_helpers {

inline double uniform01(std::mt19937_64& rng) {
    // (0, 1]: the +1 keeps log() finite in the Box-Muller transform.
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

inline double gauss(std::mt19937_64& rng) {
    const double u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline resgames::cplx cgauss(std::mt19937_64& rng) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    return resgames::cplx(re, im);
}

inline resgames::ComplexMatrix random_complex(std::mt19937_64& rng, std::size_t rows,
                                              std::size_t cols) {
    resgames::ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = cgauss(rng);
    return m;
}

inline resgames::HermitianOperator random_hermitian(std::mt19937_64& rng, std::size_t d) {
    const resgames::ComplexMatrix a = random_complex(rng, d, d);
    return resgames::HermitianOperator::trusted(0.5 * (a + resgames::adjoint(a)));
}

inline resgames::HermitianOperator random_psd(std::mt19937_64& rng, std::size_t d) {
    const resgames::ComplexMatrix a = random_complex(rng, d, d);
    return resgames::HermitianOperator::trusted(resgames::adjoint(a) * a);
}

// Random density operator: PSD with unit trace.
inline resgames::HermitianOperator random_state_matrix(std::mt19937_64& rng, std::size_t d) {
    resgames::HermitianOperator p = random_psd(rng, d);
    const double t = resgames::trace(p.matrix()).real();
    return (1.0 / t) * p;
}

// Haar-ish random unitary via Gram-Schmidt of a Gaussian matrix (two
// orthogonalization passes for numerical cleanliness).
inline resgames::ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t d) {
    resgames::ComplexMatrix a = random_complex(rng, d, d);
    for (std::size_t j = 0; j < d; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                resgames::cplx overlap(0.0, 0.0);
                for (std::size_t i = 0; i < d; ++i) overlap += std::conj(a(i, k)) * a(i, j);
                for (std::size_t i = 0; i < d; ++i) a(i, j) -= overlap * a(i, k);
            }
        }
        double n2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) n2 += std::norm(a(i, j));
        const double inv = 1.0 / std::sqrt(n2);
        for (std::size_t i = 0; i < d; ++i) a(i, j) *= inv;
    }
    return a;
}

inline resgames::ComplexMatrix pauli_x() {
    return resgames::ComplexMatrix(2, 2, {{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}});
}

inline resgames::ComplexMatrix pauli_y() {
    return resgames::ComplexMatrix(2, 2, {{0.0, 0.0}, {0.0, -1.0}, {0.0, 1.0}, {0.0, 0.0}});
}

inline resgames::ComplexMatrix pauli_z() {
    return resgames::ComplexMatrix(2, 2, {{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {-1.0, 0.0}});
}

}  // namespace test_helpers
