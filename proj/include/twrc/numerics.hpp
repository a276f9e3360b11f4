// SPDX-License-Identifier: Apache-2.0
//
// twrc: relay power minimization for lattice-coded two-way relaying with
// power-splitting energy harvesting.
// Copyright (C) 2026 The twrc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Dense linear algebra for the small Hermitian systems that appear in the
// beamforming problems (N <= 16). Everything is stored densely, row-major.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace twrc
{

using Complex = std::complex<double>;

class ComplexVector
{
public:
    ComplexVector() = default;
    explicit ComplexVector(std::size_t n) : data_(n) {}
    ComplexVector(std::initializer_list<Complex> values) : data_(values) {}
    explicit ComplexVector(std::vector<Complex> values) : data_(std::move(values)) {}

    std::size_t size() const noexcept { return data_.size(); }
    Complex &operator[](std::size_t i) { return data_[i]; }
    const Complex &operator[](std::size_t i) const { return data_[i]; }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    std::span<const Complex> values() const noexcept { return data_; }

    double norm_squared() const noexcept;
    double norm() const noexcept;
    bool is_finite() const noexcept;

    // Unit-norm copy; throws DomainError for the zero vector.
    ComplexVector normalized() const;

    // Copy with every entry conjugated.
    ComplexVector conj() const;

    ComplexVector operator*(Complex s) const;

    friend bool operator==(const ComplexVector &, const ComplexVector &) = default;

private:
    std::vector<Complex> data_;
};

// Plain bilinear product sum_n a_n b_n (no conjugation), i.e. h^T f.
Complex dot(const ComplexVector &a, const ComplexVector &b);

// Sesquilinear product sum_n conj(a_n) b_n, i.e. a^H b.
Complex inner(const ComplexVector &a, const ComplexVector &b);

// Dense real matrix, row-major.
class RealMatrix
{
public:
    RealMatrix() = default;
    RealMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    static RealMatrix identity(std::size_t n);
    static RealMatrix diagonal(std::span<const double> d);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> raw() noexcept { return data_; }
    std::span<const double> raw() const noexcept { return data_; }

    RealMatrix transpose() const;
    double trace() const;
    double frobenius_norm() const;
    std::vector<double> multiply(std::span<const double> x) const;

    RealMatrix &operator+=(const RealMatrix &o);
    RealMatrix &operator-=(const RealMatrix &o);
    RealMatrix &operator*=(double s);

    friend RealMatrix operator+(RealMatrix a, const RealMatrix &b) { return a += b; }
    friend RealMatrix operator-(RealMatrix a, const RealMatrix &b) { return a -= b; }
    friend RealMatrix operator*(RealMatrix a, double s) { return a *= s; }
    friend RealMatrix operator*(double s, RealMatrix a) { return a *= s; }
    friend RealMatrix operator*(const RealMatrix &a, const RealMatrix &b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Sum of elementwise products, Tr(A^T B).
double frobenius_inner(const RealMatrix &a, const RealMatrix &b);

// Symmetric part (A + A^T) / 2.
RealMatrix symmetrize(const RealMatrix &a);

// Hermitian matrix. Conjugate symmetry is maintained by construction: every
// writer goes through set(), which mirrors the entry, and the general
// constructor keeps only the Hermitian part of its input.
class HermitianMatrix
{
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(std::size_t n) : n_(n), data_(n * n) {}

    // Hermitian part (M + M^H) / 2 of a row-major n x n matrix.
    HermitianMatrix(std::size_t n, std::span<const Complex> row_major);

    static HermitianMatrix identity(std::size_t n);
    static HermitianMatrix diagonal(std::span<const double> d);
    static HermitianMatrix diagonal(std::initializer_list<double> d);

    // v v^H
    static HermitianMatrix outer(const ComplexVector &v);

    std::size_t dim() const noexcept { return n_; }
    Complex operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

    // Writes (r, c) and its mirror (c, r); on the diagonal the imaginary part is dropped.
    void set(std::size_t r, std::size_t c, Complex value);

    double trace() const;
    double frobenius_norm() const;
    bool is_finite() const noexcept;

    ComplexVector apply(const ComplexVector &v) const;

    HermitianMatrix &operator+=(const HermitianMatrix &o);
    HermitianMatrix &operator-=(const HermitianMatrix &o);
    HermitianMatrix &operator*=(double s);

    friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix &b) { return a += b; }
    friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix &b) { return a -= b; }
    friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
    friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

private:
    std::size_t n_ = 0;
    std::vector<Complex> data_;
};

struct HermitianEigen
{
    std::vector<double> values;         // descending
    std::vector<ComplexVector> vectors; // orthonormal, vectors[k] pairs with values[k]
};

struct SymmetricEigen
{
    std::vector<double> values; // descending
    RealMatrix vectors;         // column k pairs with values[k]
};

// Cyclic Jacobi eigendecomposition. Equal eigenvalues keep the order in which
// they appear on the converged diagonal, and each eigenvector is rotated so its
// largest-magnitude entry is real and non-negative.
// Throws SolverFailure if the off-diagonal mass does not vanish within the sweep cap.
HermitianEigen eig_hermitian(const HermitianMatrix &m);

// Same algorithm for real symmetric input; eigenvector sign fixed the same way.
SymmetricEigen eig_symmetric(const RealMatrix &m);

// Tr(A B) for Hermitian A, B; the imaginary rounding residue is discarded.
double trace_inner(const HermitianMatrix &a, const HermitianMatrix &b);

// [[Re M, -Im M], [Im M, Re M]]
RealMatrix real_embed(const HermitianMatrix &m);

// Inverse of real_embed on matrices that commute with the complex structure;
// for general symmetric input returns the Hermitian matrix whose embedding is
// the nearest structured matrix.
HermitianMatrix real_unembed(const RealMatrix &m);

// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
// Returns false if a non-positive pivot is met.
bool cholesky(const RealMatrix &a, RealMatrix &lower);

// Solves L L^T x = b given the factor from cholesky().
std::vector<double> cholesky_solve(const RealMatrix &lower, std::span<const double> b);

// Inverse of a symmetric positive definite matrix through its Cholesky factor.
RealMatrix cholesky_inverse(const RealMatrix &lower);

} // namespace twrc
