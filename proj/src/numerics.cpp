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

#include "twrc/numerics.hpp"
#include "twrc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace twrc
{

const char *error_code_name(ErrorCode code) noexcept
{
    switch (code)
    {
    case ErrorCode::InvalidArgument:
        return "invalid-argument";
    case ErrorCode::DomainError:
        return "domain-error";
    case ErrorCode::DegenerateChannel:
        return "degenerate-channel";
    case ErrorCode::Infeasible:
        return "infeasible";
    case ErrorCode::SolverFailure:
        return "solver-failure";
    case ErrorCode::NestingViolation:
        return "nesting-violation";
    case ErrorCode::BracketError:
        return "bracket-error";
    case ErrorCode::IoError:
        return "io-error";
    case ErrorCode::Usage:
        return "usage";
    }
    return "unknown";
}

// ---- ComplexVector ------------------------------------------------------

double ComplexVector::norm_squared() const noexcept
{
    double s = 0.0;
    for (const auto &z : data_)
        s += std::norm(z);
    return s;
}

double ComplexVector::norm() const noexcept { return std::sqrt(norm_squared()); }

bool ComplexVector::is_finite() const noexcept
{
    return std::all_of(data_.begin(), data_.end(), [](const Complex &z)
                       { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexVector ComplexVector::normalized() const
{
    const double n = norm();
    if (!(n > 0.0))
        throw Error(ErrorCode::DomainError, "cannot normalize a zero vector");
    return *this * Complex(1.0 / n, 0.0);
}

ComplexVector ComplexVector::conj() const
{
    ComplexVector out(size());
    for (std::size_t i = 0; i < size(); ++i)
        out[i] = std::conj(data_[i]);
    return out;
}

ComplexVector ComplexVector::operator*(Complex s) const
{
    ComplexVector out(size());
    for (std::size_t i = 0; i < size(); ++i)
        out[i] = data_[i] * s;
    return out;
}

Complex dot(const ComplexVector &a, const ComplexVector &b)
{
    if (a.size() != b.size())
        throw Error(ErrorCode::InvalidArgument, "dot: dimension mismatch");
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

Complex inner(const ComplexVector &a, const ComplexVector &b)
{
    if (a.size() != b.size())
        throw Error(ErrorCode::InvalidArgument, "inner: dimension mismatch");
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::conj(a[i]) * b[i];
    return s;
}

// ---- RealMatrix ---------------------------------------------------------

RealMatrix RealMatrix::identity(std::size_t n)
{
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

RealMatrix RealMatrix::diagonal(std::span<const double> d)
{
    RealMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        m(i, i) = d[i];
    return m;
}

RealMatrix RealMatrix::transpose() const
{
    RealMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            t(c, r) = (*this)(r, c);
    return t;
}

double RealMatrix::trace() const
{
    double s = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i)
        s += (*this)(i, i);
    return s;
}

double RealMatrix::frobenius_norm() const
{
    double s = 0.0;
    for (double v : data_)
        s += v * v;
    return std::sqrt(s);
}

std::vector<double> RealMatrix::multiply(std::span<const double> x) const
{
    if (x.size() != cols_)
        throw Error(ErrorCode::InvalidArgument, "matrix-vector product: dimension mismatch");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            y[r] += (*this)(r, c) * x[c];
    return y;
}

RealMatrix &RealMatrix::operator+=(const RealMatrix &o)
{
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw Error(ErrorCode::InvalidArgument, "matrix sum: dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += o.data_[i];
    return *this;
}

RealMatrix &RealMatrix::operator-=(const RealMatrix &o)
{
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw Error(ErrorCode::InvalidArgument, "matrix difference: dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= o.data_[i];
    return *this;
}

RealMatrix &RealMatrix::operator*=(double s)
{
    for (double &v : data_)
        v *= s;
    return *this;
}

RealMatrix operator*(const RealMatrix &a, const RealMatrix &b)
{
    if (a.cols() != b.rows())
        throw Error(ErrorCode::InvalidArgument, "matrix product: dimension mismatch");
    RealMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
        {
            const double aik = a(i, k);
            if (aik == 0.0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

double frobenius_inner(const RealMatrix &a, const RealMatrix &b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorCode::InvalidArgument, "frobenius_inner: dimension mismatch");
    const auto x = a.raw();
    const auto y = b.raw();
    return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

RealMatrix symmetrize(const RealMatrix &a)
{
    RealMatrix s(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            s(r, c) = 0.5 * (a(r, c) + a(c, r));
    return s;
}

// ---- HermitianMatrix ----------------------------------------------------

HermitianMatrix::HermitianMatrix(std::size_t n, std::span<const Complex> row_major) : n_(n), data_(n * n)
{
    if (row_major.size() != n * n)
        throw Error(ErrorCode::InvalidArgument, "HermitianMatrix: expected n*n entries");
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = r; c < n; ++c)
            set(r, c, 0.5 * (row_major[r * n + c] + std::conj(row_major[c * n + r])));
}

HermitianMatrix HermitianMatrix::identity(std::size_t n)
{
    HermitianMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        m.data_[i * n + i] = 1.0;
    return m;
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d)
{
    HermitianMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        m.data_[i * d.size() + i] = d[i];
    return m;
}

HermitianMatrix HermitianMatrix::diagonal(std::initializer_list<double> d)
{
    return diagonal(std::span<const double>(d.begin(), d.size()));
}

HermitianMatrix HermitianMatrix::outer(const ComplexVector &v)
{
    const std::size_t n = v.size();
    HermitianMatrix m(n);
    for (std::size_t r = 0; r < n; ++r)
    {
        m.data_[r * n + r] = std::norm(v[r]);
        for (std::size_t c = r + 1; c < n; ++c)
        {
            const Complex z = v[r] * std::conj(v[c]);
            m.data_[r * n + c] = z;
            m.data_[c * n + r] = std::conj(z);
        }
    }
    return m;
}

void HermitianMatrix::set(std::size_t r, std::size_t c, Complex value)
{
    if (r == c)
    {
        data_[r * n_ + r] = Complex(value.real(), 0.0);
        return;
    }
    data_[r * n_ + c] = value;
    data_[c * n_ + r] = std::conj(value);
}

double HermitianMatrix::trace() const
{
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        s += data_[i * n_ + i].real();
    return s;
}

double HermitianMatrix::frobenius_norm() const
{
    double s = 0.0;
    for (const auto &z : data_)
        s += std::norm(z);
    return std::sqrt(s);
}

bool HermitianMatrix::is_finite() const noexcept
{
    return std::all_of(data_.begin(), data_.end(), [](const Complex &z)
                       { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexVector HermitianMatrix::apply(const ComplexVector &v) const
{
    if (v.size() != n_)
        throw Error(ErrorCode::InvalidArgument, "HermitianMatrix::apply: dimension mismatch");
    ComplexVector out(n_);
    for (std::size_t r = 0; r < n_; ++r)
    {
        Complex s = 0.0;
        for (std::size_t c = 0; c < n_; ++c)
            s += data_[r * n_ + c] * v[c];
        out[r] = s;
    }
    return out;
}

HermitianMatrix &HermitianMatrix::operator+=(const HermitianMatrix &o)
{
    if (n_ != o.n_)
        throw Error(ErrorCode::InvalidArgument, "Hermitian sum: dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += o.data_[i];
    return *this;
}

HermitianMatrix &HermitianMatrix::operator-=(const HermitianMatrix &o)
{
    if (n_ != o.n_)
        throw Error(ErrorCode::InvalidArgument, "Hermitian difference: dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= o.data_[i];
    return *this;
}

HermitianMatrix &HermitianMatrix::operator*=(double s)
{
    for (auto &z : data_)
        z *= s;
    return *this;
}

// ---- Jacobi eigensolver -------------------------------------------------

namespace
{

constexpr int max_sweeps = 100;

inline double cj(double x) { return x; }
inline Complex cj(const Complex &z) { return std::conj(z); }
inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const Complex &z) { return std::abs(z); }
inline double real_part(double x) { return x; }
inline double real_part(const Complex &z) { return z.real(); }

// Diagonalizes the n x n row-major matrix `a` in place, accumulating the
// unitary transform into `v` (initialized to identity here).
template <typename T>
void jacobi(std::vector<T> &a, std::vector<T> &v, std::size_t n)
{
    v.assign(n * n, T(0.0));
    for (std::size_t i = 0; i < n; ++i)
        v[i * n + i] = T(1.0);

    double total = 0.0;
    for (const auto &x : a)
        total += magnitude(x) * magnitude(x);
    const double threshold = 1e-30 * total;

    for (int sweep = 0; sweep <= max_sweeps; ++sweep)
    {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off += 2.0 * magnitude(a[p * n + q]) * magnitude(a[p * n + q]);
        if (off <= threshold)
            return;
        if (sweep == max_sweeps)
            break;

        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
            {
                const T apq = a[p * n + q];
                const double b = magnitude(apq);
                if (b == 0.0)
                    continue;
                const T phase = apq / b;

                const double theta = (real_part(a[q * n + q]) - real_part(a[p * n + p])) / (2.0 * b);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // U = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
                const T upp = T(c);
                const T upq = T(s);
                const T uqp = -s * cj(phase);
                const T uqq = c * cj(phase);

                for (std::size_t k = 0; k < n; ++k)
                {
                    const T akp = a[k * n + p];
                    const T akq = a[k * n + q];
                    a[k * n + p] = akp * upp + akq * uqp;
                    a[k * n + q] = akp * upq + akq * uqq;
                }
                for (std::size_t k = 0; k < n; ++k)
                {
                    const T apk = a[p * n + k];
                    const T aqk = a[q * n + k];
                    a[p * n + k] = cj(upp) * apk + cj(uqp) * aqk;
                    a[q * n + k] = cj(upq) * apk + cj(uqq) * aqk;
                }
                a[p * n + q] = T(0.0);
                a[q * n + p] = T(0.0);
                a[p * n + p] = T(real_part(a[p * n + p]));
                a[q * n + q] = T(real_part(a[q * n + q]));

                for (std::size_t k = 0; k < n; ++k)
                {
                    const T vkp = v[k * n + p];
                    const T vkq = v[k * n + q];
                    v[k * n + p] = vkp * upp + vkq * uqp;
                    v[k * n + q] = vkp * upq + vkq * uqq;
                }
            }
    }
    throw Error(ErrorCode::SolverFailure, "Jacobi eigensolver did not converge");
}

// Descending order; stable so equal eigenvalues keep diagonal order.
std::vector<std::size_t> descending_order(const std::vector<double> &values)
{
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y)
                     { return values[x] > values[y]; });
    return order;
}

} // namespace

HermitianEigen eig_hermitian(const HermitianMatrix &m)
{
    const std::size_t n = m.dim();
    if (n == 0)
        throw Error(ErrorCode::InvalidArgument, "eig_hermitian: empty matrix");
    if (!m.is_finite())
        throw Error(ErrorCode::DomainError, "eig_hermitian: non-finite entries");

    std::vector<Complex> a(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            a[r * n + c] = m(r, c);
    std::vector<Complex> v;
    jacobi(a, v, n);

    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i)
        diag[i] = a[i * n + i].real();

    HermitianEigen out;
    for (std::size_t k : descending_order(diag))
    {
        ComplexVector vec(n);
        std::size_t arg = 0;
        for (std::size_t r = 0; r < n; ++r)
        {
            vec[r] = v[r * n + k];
            if (std::abs(vec[r]) > std::abs(vec[arg]))
                arg = r;
        }
        const Complex unit = std::conj(vec[arg]) / std::abs(vec[arg]);
        for (auto &z : vec)
            z *= unit;
        vec[arg] = Complex(vec[arg].real(), 0.0);
        out.values.push_back(diag[k]);
        out.vectors.push_back(std::move(vec));
    }
    return out;
}

SymmetricEigen eig_symmetric(const RealMatrix &m)
{
    const std::size_t n = m.rows();
    if (n == 0 || m.cols() != n)
        throw Error(ErrorCode::InvalidArgument, "eig_symmetric: expected a non-empty square matrix");

    std::vector<double> a(m.raw().begin(), m.raw().end());
    for (double x : a)
        if (!std::isfinite(x))
            throw Error(ErrorCode::DomainError, "eig_symmetric: non-finite entries");
    std::vector<double> v;
    jacobi(a, v, n);

    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i)
        diag[i] = a[i * n + i];

    SymmetricEigen out;
    out.vectors = RealMatrix(n, n);
    std::size_t col = 0;
    for (std::size_t k : descending_order(diag))
    {
        std::size_t arg = 0;
        for (std::size_t r = 0; r < n; ++r)
            if (std::abs(v[r * n + k]) > std::abs(v[arg * n + k]))
                arg = r;
        const double sign = v[arg * n + k] < 0.0 ? -1.0 : 1.0;
        for (std::size_t r = 0; r < n; ++r)
            out.vectors(r, col) = sign * v[r * n + k];
        out.values.push_back(diag[k]);
        ++col;
    }
    return out;
}

double trace_inner(const HermitianMatrix &a, const HermitianMatrix &b)
{
    if (a.dim() != b.dim())
        throw Error(ErrorCode::InvalidArgument, "trace_inner: dimension mismatch");
    // Tr(AB) = sum_{r,c} A(r,c) B(c,r) = sum_{r,c} A(r,c) conj(B(r,c))
    const std::size_t n = a.dim();
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            s += (a(r, c) * std::conj(b(r, c))).real();
    return s;
}

RealMatrix real_embed(const HermitianMatrix &m)
{
    const std::size_t n = m.dim();
    RealMatrix e(2 * n, 2 * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
        {
            const Complex z = m(r, c);
            e(r, c) = z.real();
            e(r, c + n) = -z.imag();
            e(r + n, c) = z.imag();
            e(r + n, c + n) = z.real();
        }
    return e;
}

HermitianMatrix real_unembed(const RealMatrix &m)
{
    if (m.rows() != m.cols() || m.rows() % 2 != 0)
        throw Error(ErrorCode::InvalidArgument, "real_unembed: expected an even square matrix");
    const std::size_t n = m.rows() / 2;
    std::vector<Complex> entries(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            entries[r * n + c] = Complex(0.5 * (m(r, c) + m(r + n, c + n)), 0.5 * (m(r + n, c) - m(r, c + n)));
    return HermitianMatrix(n, entries);
}

bool cholesky(const RealMatrix &a, RealMatrix &lower)
{
    const std::size_t n = a.rows();
    lower = RealMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j)
    {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k)
            d -= lower(j, k) * lower(j, k);
        if (!(d > 0.0))
            return false;
        const double ljj = std::sqrt(d);
        lower(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i)
        {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k)
                s -= lower(i, k) * lower(j, k);
            lower(i, j) = s / ljj;
        }
    }
    return true;
}

std::vector<double> cholesky_solve(const RealMatrix &lower, std::span<const double> b)
{
    const std::size_t n = lower.rows();
    std::vector<double> y(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t k = 0; k < i; ++k)
            y[i] -= lower(i, k) * y[k];
        y[i] /= lower(i, i);
    }
    for (std::size_t i = n; i-- > 0;)
    {
        for (std::size_t k = i + 1; k < n; ++k)
            y[i] -= lower(k, i) * y[k];
        y[i] /= lower(i, i);
    }
    return y;
}

RealMatrix cholesky_inverse(const RealMatrix &lower)
{
    const std::size_t n = lower.rows();
    RealMatrix inv(n, n);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
    {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        const auto col = cholesky_solve(lower, e);
        for (std::size_t i = 0; i < n; ++i)
            inv(i, j) = col[i];
    }
    return symmetrize(inv);
}

} // namespace twrc
