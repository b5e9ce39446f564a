#pragma once

// Fixed-size (5x5) real and complex linear algebra used by the memory model:
// symmetric eigendecomposition, unitary propagators and a series-expansion
// propagator kept as an independent cross-check.

#include <array>
#include <complex>
#include <cstddef>

namespace qem {

using complex = std::complex<double>;

inline constexpr std::size_t dim = 5;

using ComplexVector5 = std::array<complex, dim>;
using RealVector5 = std::array<double, dim>;

// Dense row-major 5x5 real matrix.
class RealMatrix5 {
public:
    RealMatrix5() { data_.fill(0.0); }

    static RealMatrix5 identity();

    double& operator()(std::size_t row, std::size_t col) { return data_[row * dim + col]; }
    double operator()(std::size_t row, std::size_t col) const { return data_[row * dim + col]; }

    RealMatrix5 transpose() const;

    friend RealMatrix5 operator*(const RealMatrix5& a, const RealMatrix5& b);
    friend bool operator==(const RealMatrix5&, const RealMatrix5&) = default;

private:
    std::array<double, dim * dim> data_;
};

// Real symmetric 5x5 matrix. Symmetry holds by construction: every write
// goes to both (i,j) and (j,i).
class SymmetricMatrix5 {
public:
    SymmetricMatrix5() = default;

    static SymmetricMatrix5 diagonal(const RealVector5& d);

    // Sets entries (i,j) and (j,i).
    void set(std::size_t i, std::size_t j, double value);

    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    const RealMatrix5& matrix() const noexcept { return m_; }

    bool is_finite() const;

    friend SymmetricMatrix5 operator+(const SymmetricMatrix5& a, const SymmetricMatrix5& b);
    friend bool operator==(const SymmetricMatrix5&, const SymmetricMatrix5&) = default;

private:
    RealMatrix5 m_;
};

// Dense row-major 5x5 complex matrix.
class ComplexMatrix5 {
public:
    ComplexMatrix5() { data_.fill(complex{0.0, 0.0}); }

    static ComplexMatrix5 identity();

    complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim + col]; }
    const complex& operator()(std::size_t row, std::size_t col) const { return data_[row * dim + col]; }

    // Conjugate transpose.
    ComplexMatrix5 adjoint() const;

    // Largest entry modulus.
    double max_norm() const;

    friend ComplexMatrix5 operator*(const ComplexMatrix5& a, const ComplexMatrix5& b);
    friend ComplexMatrix5 operator+(const ComplexMatrix5& a, const ComplexMatrix5& b);
    friend ComplexMatrix5 operator-(const ComplexMatrix5& a, const ComplexMatrix5& b);
    friend ComplexMatrix5 operator*(complex s, const ComplexMatrix5& a);

private:
    std::array<complex, dim * dim> data_;
};

// Propagators are ordinary complex matrices; unitarity is a checked property,
// see unitarity_defect().
using UnitaryMatrix5 = ComplexMatrix5;

struct Eigensystem {
    RealVector5 values;   // ascending
    RealMatrix5 vectors;  // column k is the eigenvector of values[k]
};

/// Cyclic Jacobi eigendecomposition of a real symmetric matrix.
///
/// Rotations sweep all off-diagonal pairs until the off-diagonal Frobenius
/// norm drops below 1e-14. Eigenvalues are returned in ascending order with
/// the eigenvector columns permuted to match.
///
/// Throws invalid_matrix_error for non-finite input.
Eigensystem eigendecompose(const SymmetricMatrix5& h);

// V * diag(values) * V^T
RealMatrix5 reconstruct(const Eigensystem& e);

/// exp(-i H t) computed as V diag(exp(-i lambda t)) V^T.
UnitaryMatrix5 propagator(const SymmetricMatrix5& h, double t);

// Same, reusing a decomposition when one operator is sampled at many times.
UnitaryMatrix5 propagator(const Eigensystem& e, double t);

/// exp(-i H t) by scaling and squaring a truncated power series.
///
/// The scaling exponent s is the smallest with ||H t||_inf / 2^s <= 0.5;
/// series terms are accumulated until a term's max-norm falls below 1e-16.
/// Shares no code with propagator() so the two can check each other.
UnitaryMatrix5 taylor_propagator(const SymmetricMatrix5& h, double t);

ComplexVector5 apply(const UnitaryMatrix5& u, const ComplexVector5& v);

double norm_squared(const ComplexVector5& v);

// max |U^dagger U - I|
double unitarity_defect(const UnitaryMatrix5& u);

}  // namespace qem
