#include "qem/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qem/error.hpp"

namespace qem {

namespace {

constexpr double jacobi_tolerance = 1e-14;
constexpr int max_jacobi_sweeps = 64;
constexpr double series_term_tolerance = 1e-16;

double off_diagonal_norm(const RealMatrix5& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            if (i != j) sum += a(i, j) * a(i, j);
    return std::sqrt(sum);
}

}  // namespace

RealMatrix5 RealMatrix5::identity() {
    RealMatrix5 m;
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

RealMatrix5 RealMatrix5::transpose() const {
    RealMatrix5 t;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) t(j, i) = (*this)(i, j);
    return t;
}

RealMatrix5 operator*(const RealMatrix5& a, const RealMatrix5& b) {
    RealMatrix5 c;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < dim; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

SymmetricMatrix5 SymmetricMatrix5::diagonal(const RealVector5& d) {
    SymmetricMatrix5 m;
    for (std::size_t i = 0; i < dim; ++i) m.m_(i, i) = d[i];
    return m;
}

void SymmetricMatrix5::set(std::size_t i, std::size_t j, double value) {
    m_(i, j) = value;
    m_(j, i) = value;
}

bool SymmetricMatrix5::is_finite() const {
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            if (!std::isfinite(m_(i, j))) return false;
    return true;
}

SymmetricMatrix5 operator+(const SymmetricMatrix5& a, const SymmetricMatrix5& b) {
    SymmetricMatrix5 c;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) c.m_(i, j) = a.m_(i, j) + b.m_(i, j);
    return c;
}

ComplexMatrix5 ComplexMatrix5::identity() {
    ComplexMatrix5 m;
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix5 ComplexMatrix5::adjoint() const {
    ComplexMatrix5 a;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) a(j, i) = std::conj((*this)(i, j));
    return a;
}

double ComplexMatrix5::max_norm() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

ComplexMatrix5 operator*(const ComplexMatrix5& a, const ComplexMatrix5& b) {
    ComplexMatrix5 c;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k) {
            const complex aik = a(i, k);
            for (std::size_t j = 0; j < dim; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

ComplexMatrix5 operator+(const ComplexMatrix5& a, const ComplexMatrix5& b) {
    ComplexMatrix5 c;
    for (std::size_t i = 0; i < dim * dim; ++i) c.data_[i] = a.data_[i] + b.data_[i];
    return c;
}

ComplexMatrix5 operator-(const ComplexMatrix5& a, const ComplexMatrix5& b) {
    ComplexMatrix5 c;
    for (std::size_t i = 0; i < dim * dim; ++i) c.data_[i] = a.data_[i] - b.data_[i];
    return c;
}

ComplexMatrix5 operator*(complex s, const ComplexMatrix5& a) {
    ComplexMatrix5 c;
    for (std::size_t i = 0; i < dim * dim; ++i) c.data_[i] = s * a.data_[i];
    return c;
}

Eigensystem eigendecompose(const SymmetricMatrix5& h) {
    if (!h.is_finite()) throw invalid_matrix_error("eigendecompose: matrix has non-finite entries");

    RealMatrix5 a = h.matrix();
    RealMatrix5 v = RealMatrix5::identity();

    for (int sweep = 0; sweep < max_jacobi_sweeps && off_diagonal_norm(a) >= jacobi_tolerance; ++sweep) {
        for (std::size_t p = 0; p + 1 < dim; ++p) {
            for (std::size_t q = p + 1; q < dim; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;

                // Rotation angle that zeroes a(p,q); the smaller root of
                // t^2 + 2 theta t - 1 = 0 keeps |angle| <= pi/4.
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < dim; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < dim; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < dim; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::array<std::size_t, dim> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

    Eigensystem e;
    for (std::size_t k = 0; k < dim; ++k) {
        e.values[k] = a(order[k], order[k]);
        for (std::size_t row = 0; row < dim; ++row) e.vectors(row, k) = v(row, order[k]);
    }
    return e;
}

RealMatrix5 reconstruct(const Eigensystem& e) {
    RealMatrix5 scaled = e.vectors;
    for (std::size_t row = 0; row < dim; ++row)
        for (std::size_t k = 0; k < dim; ++k) scaled(row, k) *= e.values[k];
    return scaled * e.vectors.transpose();
}

UnitaryMatrix5 propagator(const SymmetricMatrix5& h, double t) {
    if (!std::isfinite(t)) throw invalid_matrix_error("propagator: non-finite time");
    return propagator(eigendecompose(h), t);
}

UnitaryMatrix5 propagator(const Eigensystem& e, double t) {
    if (!std::isfinite(t)) throw invalid_matrix_error("propagator: non-finite time");

    std::array<complex, dim> phase{};
    for (std::size_t k = 0; k < dim; ++k) phase[k] = std::polar(1.0, -e.values[k] * t);

    UnitaryMatrix5 u;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            complex sum{0.0, 0.0};
            for (std::size_t k = 0; k < dim; ++k) sum += e.vectors(i, k) * phase[k] * e.vectors(j, k);
            u(i, j) = sum;
        }
    return u;
}

UnitaryMatrix5 taylor_propagator(const SymmetricMatrix5& h, double t) {
    if (!h.is_finite() || !std::isfinite(t)) throw invalid_matrix_error("taylor_propagator: non-finite input");

    double inf_norm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < dim; ++j) row += std::abs(h(i, j) * t);
        inf_norm = std::max(inf_norm, row);
    }
    int squarings = 0;
    double scaled_norm = inf_norm;
    while (scaled_norm > 0.5) {
        scaled_norm /= 2.0;
        ++squarings;
    }

    // A = -i H t / 2^s
    const double scale = t / std::ldexp(1.0, squarings);
    ComplexMatrix5 a;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) a(i, j) = complex{0.0, -h(i, j) * scale};

    ComplexMatrix5 sum = ComplexMatrix5::identity();
    ComplexMatrix5 term = ComplexMatrix5::identity();
    for (int k = 1; k < 200; ++k) {
        term = complex{1.0 / k, 0.0} * (term * a);
        sum = sum + term;
        if (term.max_norm() < series_term_tolerance) break;
    }
    for (int k = 0; k < squarings; ++k) sum = sum * sum;
    return sum;
}

ComplexVector5 apply(const UnitaryMatrix5& u, const ComplexVector5& v) {
    ComplexVector5 out{};
    for (std::size_t i = 0; i < dim; ++i) {
        complex sum{0.0, 0.0};
        for (std::size_t j = 0; j < dim; ++j) sum += u(i, j) * v[j];
        out[i] = sum;
    }
    return out;
}

double norm_squared(const ComplexVector5& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return s;
}

double unitarity_defect(const UnitaryMatrix5& u) {
    return (u.adjoint() * u - ComplexMatrix5::identity()).max_norm();
}

}  // namespace qem
