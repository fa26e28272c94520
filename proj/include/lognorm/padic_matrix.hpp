#pragma once

// Matrices over Q_ell at a common working precision: rank over Q_ell by
// minimal-valuation pivoting, and the rank of the integer relation lattice
// of the columns (the Z-kernel), found by LLL reduction.

#include "lognorm/padic.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lognorm::padic {

class PadicMatrix {
public:
    PadicMatrix(Integer prime, std::size_t rows, std::size_t cols, std::vector<PadicNumber> entries)
        : prime_(std::move(prime)), rows_(rows), cols_(cols), entries_(std::move(entries))
    {
        if (entries_.size() != rows_ * cols_)
            throw std::invalid_argument("PadicMatrix: entry count does not match shape");
        for (const auto& e : entries_)
            if (e.prime() != prime_)
                throw std::invalid_argument("PadicMatrix: entries over different primes");
    }

    const Integer& prime() const { return prime_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    const PadicNumber& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    PadicNumber& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

    /// Minimum absolute precision over the entries.
    long precision() const
    {
        long p = kExactPrecision;
        for (const auto& e : entries_)
            p = std::min(p, e.absolute_precision());
        return p;
    }

private:
    Integer prime_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<PadicNumber> entries_;
};

struct RankResult {
    std::size_t rank = 0;
    /// Some entry fell in the grey zone: nonzero digits at or beyond the
    /// guarded precision, or a zero not known that far.
    bool ambiguous = false;
};

/// Rank over Q_ell. Entries of valuation >= precision - guard count as zero.
inline RankResult padic_matrix_rank(const PadicMatrix& matrix, long guard = kSeriesGuardDigits)
{
    if (matrix.empty())
        throw std::invalid_argument("padic_matrix_rank: empty matrix");
    const long precision = matrix.precision();
    const long threshold = precision >= kExactPrecision ? kExactPrecision : precision - guard;
    PadicMatrix m = matrix;
    RankResult result;
    std::vector<bool> row_used(m.rows(), false);
    std::vector<bool> col_used(m.cols(), false);

    auto effectively_zero = [&](const PadicNumber& e) {
        if (e.is_zero()) {
            if (e.absolute_precision() < threshold)
                result.ambiguous = true;
            return true;
        }
        if (e.valuation() >= threshold) {
            result.ambiguous = true;
            return true;
        }
        return false;
    };

    for (;;) {
        std::size_t pi = 0, pj = 0;
        bool found = false;
        long best = 0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (row_used[i])
                continue;
            for (std::size_t j = 0; j < m.cols(); ++j) {
                if (col_used[j])
                    continue;
                const auto& e = m.at(i, j);
                if (effectively_zero(e))
                    continue;
                if (!found || e.valuation() < best) {
                    found = true;
                    best = e.valuation();
                    pi = i;
                    pj = j;
                }
            }
        }
        if (!found)
            break;
        ++result.rank;
        row_used[pi] = true;
        col_used[pj] = true;
        const PadicNumber pivot = m.at(pi, pj);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (row_used[i] || m.at(i, pj).is_zero())
                continue;
            PadicNumber factor = m.at(i, pj) / pivot;
            for (std::size_t j = 0; j < m.cols(); ++j) {
                if (col_used[j] && j != pj)
                    continue;
                m.at(i, j) = m.at(i, j) - factor * m.at(pi, j);
            }
        }
    }
    return result;
}

namespace detail {

/// LLL reduction (delta = 0.99) of the rows of `basis`, with exact rational
/// Gram-Schmidt data. The rows must be linearly independent.
inline void lll_reduce(std::vector<std::vector<Integer>>& basis)
{
    const std::size_t n = basis.size();
    if (n == 0)
        return;
    const std::size_t dim = basis[0].size();
    const Rational delta(99, 100);

    std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n));
    std::vector<Rational> bstar_norm(n);
    std::vector<std::vector<Rational>> bstar(n, std::vector<Rational>(dim));

    auto recompute = [&]() {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t t = 0; t < dim; ++t)
                bstar[i][t] = basis[i][t];
            for (std::size_t j = 0; j < i; ++j) {
                Rational s = 0;
                for (std::size_t t = 0; t < dim; ++t)
                    s += Rational(basis[i][t]) * bstar[j][t];
                mu[i][j] = s / bstar_norm[j];
                for (std::size_t t = 0; t < dim; ++t)
                    bstar[i][t] -= mu[i][j] * bstar[j][t];
            }
            Rational s = 0;
            for (std::size_t t = 0; t < dim; ++t)
                s += bstar[i][t] * bstar[i][t];
            if (s == 0)
                throw std::invalid_argument("lll_reduce: dependent rows");
            bstar_norm[i] = s;
        }
    };

    recompute();
    std::size_t k = 1;
    while (k < n) {
        for (std::size_t jj = k; jj-- > 0;) {
            // q = floor(mu + 1/2)
            Rational twice = 2 * mu[k][jj] + 1;
            Integer den = 2 * twice.get_den();
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), twice.get_num_mpz_t(), den.get_mpz_t());
            if (q != 0) {
                for (std::size_t t = 0; t < dim; ++t)
                    basis[k][t] -= q * basis[jj][t];
                for (std::size_t t = 0; t < jj; ++t)
                    mu[k][t] -= Rational(q) * mu[jj][t];
                mu[k][jj] -= Rational(q);
            }
        }
        Rational lhs = bstar_norm[k];
        Rational rhs = (delta - mu[k][k - 1] * mu[k][k - 1]) * bstar_norm[k - 1];
        if (lhs >= rhs) {
            ++k;
        } else {
            std::swap(basis[k], basis[k - 1]);
            recompute();
            k = std::max<std::size_t>(k - 1, 1);
        }
    }
}

inline Integer squared_norm(const std::vector<Integer>& v)
{
    Integer s = 0;
    for (const auto& x : v)
        s += x * x;
    return s;
}

}  // namespace detail

struct KernelRankResult {
    std::size_t rank = 0;
    bool ambiguous = false;
    /// Integer relations v with sum_j M_ij v_j = 0, verified at the full
    /// matrix precision.
    std::vector<std::vector<Integer>> relations;
    long lattice_precision = 0;
    long verify_precision = 0;
};

/// Rank of {v in Z^cols : M v = 0}. Candidate relations come from an LLL
/// reduced basis of the lattice of v with M v = 0 mod ell^(lattice_precision
/// - guard); a candidate is accepted when it also holds at the matrix's full
/// precision (minus guard). The count is ambiguous when accepted vectors are
/// not an initial segment of the reduced basis, or when the shortest rejected
/// vector is not clearly longer than the longest accepted one.
inline KernelRankResult integer_kernel_rank(const PadicMatrix& matrix, long lattice_precision,
                                            long guard = kSeriesGuardDigits)
{
    if (matrix.empty())
        throw std::invalid_argument("integer_kernel_rank: empty matrix");
    const long full = matrix.precision();
    if (lattice_precision > full)
        throw std::invalid_argument("integer_kernel_rank: lattice precision exceeds matrix precision");
    KernelRankResult result;
    result.lattice_precision = lattice_precision - guard;
    result.verify_precision = full >= kExactPrecision ? lattice_precision * 2 : full - guard;
    if (result.lattice_precision < 1)
        throw std::invalid_argument("integer_kernel_rank: precision too small for the guard");

    const Integer& ell = matrix.prime();
    const std::size_t rows = matrix.rows();
    const std::size_t cols = matrix.cols();

    // Clear denominators so every entry is integral.
    long shift = 0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (!matrix.at(i, j).is_zero())
                shift = std::max(shift, -matrix.at(i, j).valuation());
    auto residues = [&](long precision) {
        std::vector<std::vector<Integer>> r(rows, std::vector<Integer>(cols));
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) {
                const PadicNumber& e = matrix.at(i, j);
                if (e.is_zero())
                    continue;
                PadicNumber scaled = PadicNumber::from_parts(ell, e.valuation() + shift, e.unit(),
                                                             e.relative_precision());
                r[i][j] = scaled.residue(std::min(precision + shift, scaled.absolute_precision()));
            }
        return r;
    };

    const long lat_exp = result.lattice_precision + shift;
    const Integer lat_mod = ipow(ell, static_cast<unsigned long>(lat_exp));
    const auto low = residues(result.lattice_precision);

    // Kernel lattice via the weighted embedding: rows (e_j | W * column_j)
    // and (0 | W * ell^k e_i); reduced vectors with a zero tail span it.
    const Integer weight = lat_mod * ipow(Integer(2), static_cast<unsigned long>(rows + cols + 4));
    std::vector<std::vector<Integer>> basis;
    for (std::size_t j = 0; j < cols; ++j) {
        std::vector<Integer> v(cols + rows, 0);
        v[j] = 1;
        for (std::size_t i = 0; i < rows; ++i)
            v[cols + i] = weight * low[i][j];
        basis.push_back(std::move(v));
    }
    for (std::size_t i = 0; i < rows; ++i) {
        std::vector<Integer> v(cols + rows, 0);
        v[cols + i] = weight * lat_mod;
        basis.push_back(std::move(v));
    }
    detail::lll_reduce(basis);

    std::vector<std::vector<Integer>> kernel_basis;
    for (const auto& v : basis) {
        bool tail_zero = true;
        for (std::size_t i = 0; i < rows; ++i)
            tail_zero = tail_zero && v[cols + i] == 0;
        if (tail_zero)
            kernel_basis.emplace_back(v.begin(), v.begin() + static_cast<long>(cols));
    }
    if (kernel_basis.size() != cols)
        throw std::logic_error("integer_kernel_rank: embedding weight too small");

    const long ver_exp = result.verify_precision + shift;
    const Integer ver_mod = ipow(ell, static_cast<unsigned long>(ver_exp));
    const auto high = residues(result.verify_precision);
    std::vector<bool> verified(cols, false);
    for (std::size_t b = 0; b < cols; ++b) {
        bool ok = true;
        for (std::size_t i = 0; i < rows && ok; ++i) {
            Integer s = 0;
            for (std::size_t j = 0; j < cols; ++j)
                s += high[i][j] * kernel_basis[b][j];
            ok = mod(s, ver_mod) == 0;
        }
        verified[b] = ok;
        if (ok) {
            ++result.rank;
            result.relations.push_back(kernel_basis[b]);
        }
    }

    Integer longest_accepted = 0;
    Integer shortest_rejected = -1;
    for (std::size_t b = 0; b < cols; ++b) {
        Integer n2 = detail::squared_norm(kernel_basis[b]);
        if (verified[b])
            longest_accepted = std::max(longest_accepted, n2);
        else if (shortest_rejected < 0 || n2 < shortest_rejected)
            shortest_rejected = n2;
        if (b > 0 && verified[b] && !verified[b - 1])
            result.ambiguous = true;
    }
    // LLL approximates successive minima within 2^((n-1)/2); demand that much
    // separation between accepted and rejected vectors.
    if (result.rank > 0 && shortest_rejected >= 0 &&
        shortest_rejected < longest_accepted * ipow(Integer(2), static_cast<unsigned long>(cols - 1)))
        result.ambiguous = true;
    return result;
}

}  // namespace lognorm::padic
