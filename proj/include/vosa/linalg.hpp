#pragma once

#include "vosa/scalar.hpp"

#include <optional>
#include <vector>

namespace vosa {

// Small dense matrix over the Gaussian rationals. Dimensions in the engine
// are bounded by graded piece sizes, so dense storage is fine.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<Scalar> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    static Mat identity(int n);

    Scalar& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Scalar& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool is_zero() const;
    bool is_hermitian() const;
    Mat conj_transpose() const;
    Mat transpose() const;

    Mat& operator+=(const Mat& o);
    Mat& operator-=(const Mat& o);
    friend Mat operator+(Mat x, const Mat& y) { return x += y; }
    friend Mat operator-(Mat x, const Mat& y) { return x -= y; }
    friend Mat operator*(const Mat& x, const Mat& y);
    friend Mat operator*(const Scalar& s, Mat x);
    friend bool operator==(const Mat& x, const Mat& y) { return x.rows == y.rows && x.cols == y.cols && x.a == y.a; }
};

std::vector<Scalar> mat_vec(const Mat& m, const std::vector<Scalar>& v);

// Exact Hermitian congruence diagonalization: returns real pivots p and an
// invertible T with T^dagger m T = diag(p).
struct Congruence {
    std::vector<Rational> pivots;
    Mat transform;
};
Congruence congruence_diagonalize(const Mat& m);

struct PsdVerdict {
    enum Kind { PositiveDefinite, PositiveSemidefinite, Indefinite } kind;
    int rank = 0;                     // strictly positive pivots (PSD cases)
    std::vector<Scalar> witness;      // v with v^dagger m v < 0 (indefinite case)
    Scalar witness_value;
};
PsdVerdict psd_verdict(const Mat& m);

// Exact kernel basis (column vectors of m annihilated by it).
std::vector<std::vector<Scalar>> kernel_basis(const Mat& m);
inline std::vector<std::vector<Scalar>> radical_basis(const Mat& m) { return kernel_basis(m); }

int rank_of(const Mat& m);
std::optional<Mat> inverse(const Mat& m);

// Characteristic polynomial coefficients c0..cn of det(xI - m)
// (Faddeev-LeVerrier; entries must be real for our uses but works generally).
std::vector<Scalar> char_poly(const Mat& m);

// All rational roots (with multiplicity ignored) of a polynomial with
// rational coefficients, given by coefficients c0..cn of sum c_k x^k.
std::vector<Rational> rational_roots(const std::vector<Rational>& coeffs);

} // namespace vosa
