#pragma once

#include "rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace dgcat {

/* Sparse matrix of exact rationals, column-major. Stored entries are always
 * nonzero and each column is sorted by row index. */
class RationalMatrix {
public:
    using Entry = std::pair<std::size_t, Rational>;  // (row, value)

    RationalMatrix() : rows_(0), cols_(0) {}
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(cols) {}

    static RationalMatrix identity(std::size_t n)
    {
        RationalMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.data_[i].push_back({i, Rational(1)});
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    const std::vector<Entry>& column(std::size_t c) const { return data_[c]; }

    std::size_t nnz() const
    {
        std::size_t n = 0;
        for (auto& col : data_)
            n += col.size();
        return n;
    }

    bool is_zero() const { return nnz() == 0; }

    Rational at(std::size_t r, std::size_t c) const
    {
        check_index(r, c);
        const auto& col = data_[c];
        auto it = std::lower_bound(col.begin(), col.end(), r,
                                   [](const Entry& e, std::size_t row) { return e.first < row; });
        if (it != col.end() && it->first == r)
            return it->second;
        return Rational(0);
    }

    void set(std::size_t r, std::size_t c, const Rational& v)
    {
        check_index(r, c);
        auto& col = data_[c];
        auto it = std::lower_bound(col.begin(), col.end(), r,
                                   [](const Entry& e, std::size_t row) { return e.first < row; });
        if (it != col.end() && it->first == r) {
            if (dgcat::is_zero(v))
                col.erase(it);
            else
                it->second = v;
        }
        else if (!dgcat::is_zero(v)) {
            col.insert(it, {r, v});
        }
    }

    void add_to(std::size_t r, std::size_t c, const Rational& v)
    {
        if (dgcat::is_zero(v))
            return;
        set(r, c, at(r, c) + v);
    }

    /* Writes `m` into this matrix with top-left corner at (r0, c0). */
    void insert_block(std::size_t r0, std::size_t c0, const RationalMatrix& m)
    {
        if (r0 + m.rows() > rows_ || c0 + m.cols() > cols_)
            throw Error("insert_block out of range");
        for (std::size_t c = 0; c < m.cols(); ++c)
            for (const auto& [r, v] : m.data_[c])
                set(r0 + r, c0 + c, v);
    }

    RationalMatrix transpose() const
    {
        RationalMatrix t(cols_, rows_);
        for (std::size_t c = 0; c < cols_; ++c)
            for (const auto& [r, v] : data_[c])
                t.data_[r].push_back({c, v});
        for (auto& col : t.data_)
            std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
        return t;
    }

    RationalMatrix operator*(const RationalMatrix& rhs) const
    {
        if (cols_ != rhs.rows_)
            throw Error("matrix product shape mismatch");
        RationalMatrix out(rows_, rhs.cols_);
        std::map<std::size_t, Rational> acc;
        for (std::size_t c = 0; c < rhs.cols_; ++c) {
            acc.clear();
            for (const auto& [k, w] : rhs.data_[c])
                for (const auto& [r, v] : data_[k])
                    acc[r] += v * w;
            auto& col = out.data_[c];
            for (auto& [r, v] : acc)
                if (!dgcat::is_zero(v))
                    col.push_back({r, v});
        }
        return out;
    }

    RationalMatrix operator+(const RationalMatrix& rhs) const { return combine(rhs, Rational(1)); }
    RationalMatrix operator-(const RationalMatrix& rhs) const { return combine(rhs, Rational(-1)); }

    RationalMatrix operator*(const Rational& s) const
    {
        RationalMatrix out(rows_, cols_);
        if (dgcat::is_zero(s))
            return out;
        out.data_ = data_;
        for (auto& col : out.data_)
            for (auto& e : col)
                e.second *= s;
        return out;
    }

    bool operator==(const RationalMatrix& rhs) const
    {
        return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
    }
    bool operator!=(const RationalMatrix& rhs) const { return !(*this == rhs); }

    /* Columns of `vs` appended to the right of this matrix's columns. */
    static RationalMatrix hconcat(const RationalMatrix& a, const RationalMatrix& b)
    {
        if (a.rows() != b.rows())
            throw Error("hconcat row mismatch");
        RationalMatrix out(a.rows(), a.cols() + b.cols());
        for (std::size_t c = 0; c < a.cols(); ++c)
            out.data_[c] = a.data_[c];
        for (std::size_t c = 0; c < b.cols(); ++c)
            out.data_[a.cols() + c] = b.data_[c];
        return out;
    }

private:
    RationalMatrix combine(const RationalMatrix& rhs, const Rational& s) const
    {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
            throw Error("matrix sum shape mismatch");
        RationalMatrix out(rows_, cols_);
        for (std::size_t c = 0; c < cols_; ++c) {
            auto& col = out.data_[c];
            auto ia = data_[c].begin(), ea = data_[c].end();
            auto ib = rhs.data_[c].begin(), eb = rhs.data_[c].end();
            while (ia != ea || ib != eb) {
                if (ib == eb || (ia != ea && ia->first < ib->first)) {
                    col.push_back(*ia++);
                }
                else if (ia == ea || ib->first < ia->first) {
                    col.push_back({ib->first, s * ib->second});
                    ++ib;
                }
                else {
                    Rational v = ia->second + s * ib->second;
                    if (!dgcat::is_zero(v))
                        col.push_back({ia->first, v});
                    ++ia;
                    ++ib;
                }
            }
        }
        return out;
    }

    void check_index(std::size_t r, std::size_t c) const
    {
        if (r >= rows_ || c >= cols_)
            throw Error("matrix index out of range");
    }

    std::size_t rows_, cols_;
    std::vector<std::vector<Entry>> data_;
};

namespace detail {

/* Sparse fraction-free (Bareiss) echelon form. Rows are scaled to integers
 * first; row scaling changes neither rank nor kernel nor solvability. Pivots
 * are chosen in the sparsest live column, then by smallest |entry|, which is
 * what keeps intermediate values from blowing up on our incidence-like
 * matrices. */
struct Echelon {
    std::size_t rows, cols;
    // echelon rows as sorted sparse integer vectors; pivot_col[i] for row i
    std::vector<std::vector<std::pair<std::size_t, Integer>>> elim_rows;
    std::vector<std::size_t> pivot_col;  // strictly increasing reordering not guaranteed
    std::vector<bool> col_is_pivot;
    bool residue = false;  // a live row survived with entries only beyond the pivot limit

    std::size_t rank() const { return elim_rows.size(); }
};

/* Pivots are restricted to columns < pivot_limit; with the default limit this
 * is a plain echelon form. */
inline Echelon echelon_form(const RationalMatrix& m, std::size_t pivot_limit = ~std::size_t(0))
{
    using Row = std::map<std::size_t, Integer>;
    std::size_t nr = m.rows(), nc = m.cols();

    // row-major integer copy
    std::vector<Row> rows(nr);
    {
        std::vector<Integer> den_lcm(nr, Integer(1));
        for (std::size_t c = 0; c < nc; ++c)
            for (const auto& [r, v] : m.column(c))
                mpz_lcm(den_lcm[r].get_mpz_t(), den_lcm[r].get_mpz_t(), v.get_den_mpz_t());
        for (std::size_t c = 0; c < nc; ++c)
            for (const auto& [r, v] : m.column(c)) {
                Integer num = v.get_num() * (den_lcm[r] / v.get_den());
                rows[r][c] = num;
            }
    }

    std::vector<std::size_t> col_count(nc, 0);
    for (auto& row : rows)
        for (auto& [c, v] : row)
            ++col_count[c];

    Echelon ech;
    ech.rows = nr;
    ech.cols = nc;
    ech.col_is_pivot.assign(nc, false);

    std::vector<bool> row_done(nr, false);
    Integer prev_pivot(1);

    for (;;) {
        // pick pivot: sparsest live column, then smallest |value|, then lowest
        // (col,row); one pass over all live entries keeps this cheap
        std::size_t best_col = nc, best_row = nr;
        std::size_t best_count = ~std::size_t(0);
        Integer best_abs;
        for (std::size_t r = 0; r < nr; ++r) {
            if (row_done[r])
                continue;
            for (const auto& [c, v] : rows[r]) {
                if (c >= pivot_limit)
                    continue;
                Integer a = abs(v);
                bool better;
                if (best_col == nc)
                    better = true;
                else if (col_count[c] != best_count)
                    better = col_count[c] < best_count;
                else if (a != best_abs)
                    better = a < best_abs;
                else if (c != best_col)
                    better = c < best_col;
                else
                    better = r < best_row;
                if (better) {
                    best_count = col_count[c];
                    best_col = c;
                    best_row = r;
                    best_abs = a;
                }
            }
        }
        if (best_col == nc)
            break;

        Row piv_row = rows[best_row];
        Integer piv = piv_row[best_col];
        row_done[best_row] = true;
        for (auto& [c, v] : piv_row)
            --col_count[c];
        rows[best_row].clear();

        // one-step Bareiss: every live row becomes a stage-k value, including
        // rows with no entry in the pivot column (pure rescale); skipping the
        // rescale would break the exact-division invariant
        for (std::size_t r = 0; r < nr; ++r) {
            if (row_done[r])
                continue;
            Row& row = rows[r];
            auto it = row.find(best_col);
            if (it == row.end()) {
                for (auto& [c, v] : row) {
                    v *= piv;
                    mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev_pivot.get_mpz_t());
                }
                continue;
            }
            Integer f = it->second;
            for (auto& [c, v] : row)
                --col_count[c];
            Row next;
            auto ia = row.begin();
            auto ib = piv_row.begin();
            while (ia != row.end() || ib != piv_row.end()) {
                if (ib == piv_row.end() || (ia != row.end() && ia->first < ib->first)) {
                    Integer v = piv * ia->second;
                    mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev_pivot.get_mpz_t());
                    if (v != 0)
                        next[ia->first] = v;
                    ++ia;
                }
                else if (ia == row.end() || ib->first < ia->first) {
                    Integer v = -f * ib->second;
                    mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev_pivot.get_mpz_t());
                    if (v != 0)
                        next[ib->first] = v;
                    ++ib;
                }
                else {
                    Integer v = piv * ia->second - f * ib->second;
                    mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev_pivot.get_mpz_t());
                    if (v != 0)
                        next[ia->first] = v;
                    ++ia;
                    ++ib;
                }
            }
            next.erase(best_col);
            row = std::move(next);
            for (auto& [c, v] : row)
                ++col_count[c];
        }

        ech.pivot_col.push_back(best_col);
        ech.col_is_pivot[best_col] = true;
        std::vector<std::pair<std::size_t, Integer>> stored(piv_row.begin(), piv_row.end());
        ech.elim_rows.push_back(std::move(stored));
        prev_pivot = piv;
    }
    for (std::size_t r = 0; r < nr; ++r)
        if (!row_done[r] && !rows[r].empty())
            ech.residue = true;
    return ech;
}

}  // namespace detail

inline std::size_t rank(const RationalMatrix& m)
{
    return detail::echelon_form(m).rank();
}

/* Columns form a basis of ker(m); column count = cols - rank. Free columns
 * are taken in increasing order, so the basis is deterministic. */
inline RationalMatrix kernel_basis(const RationalMatrix& m)
{
    auto ech = detail::echelon_form(m);
    std::size_t nc = m.cols();
    std::size_t nullity = nc - ech.rank();
    RationalMatrix ker(nc, nullity);

    // a pivot row only touches free columns and pivots chosen later, so
    // back-substitution runs in reverse elimination order
    std::vector<std::size_t> order(ech.rank());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = ech.rank() - 1 - i;

    std::size_t k = 0;
    for (std::size_t fc = 0; fc < nc; ++fc) {
        if (ech.col_is_pivot[fc])
            continue;
        std::map<std::size_t, Rational> x;
        x[fc] = Rational(1);
        // rows processed from the largest pivot column down
        for (std::size_t oi : order) {
            const auto& row = ech.elim_rows[oi];
            std::size_t pc = ech.pivot_col[oi];
            Rational dot(0);
            Rational pv(0);
            for (const auto& [c, v] : row) {
                if (c == pc) {
                    pv = Rational(v);
                    continue;
                }
                auto it = x.find(c);
                if (it != x.end())
                    dot += Rational(v) * it->second;
            }
            if (!is_zero(dot))
                x[pc] = -dot / pv;
        }
        for (auto& [r, v] : x)
            if (!is_zero(v))
                ker.set(r, k, v);
        ++k;
    }
    return ker;
}

/* Solves B * X = M columnwise. Throws if some column of M is outside the
 * column span of B. When ker(B) != 0 the solution picked is the one with
 * zeros in B's free columns (deterministic). */
inline RationalMatrix solve(const RationalMatrix& B, const RationalMatrix& M)
{
    if (B.rows() != M.rows())
        throw Error("solve: row mismatch");
    RationalMatrix aug = RationalMatrix::hconcat(B, M);
    auto ech = detail::echelon_form(aug, B.cols());
    if (ech.residue)
        throw Error("solve: system is inconsistent");

    std::vector<std::size_t> order(ech.rank());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = ech.rank() - 1 - i;

    RationalMatrix X(B.cols(), M.cols());
    for (std::size_t mc = 0; mc < M.cols(); ++mc) {
        std::size_t target = B.cols() + mc;
        std::map<std::size_t, Rational> x;  // over aug columns; target has coefficient -1
        for (std::size_t oi : order) {
            const auto& row = ech.elim_rows[oi];
            std::size_t pc = ech.pivot_col[oi];
            Rational dot(0), pv(0);
            for (const auto& [c, v] : row) {
                if (c == pc) {
                    pv = Rational(v);
                    continue;
                }
                if (c == target) {
                    dot -= Rational(v);
                    continue;
                }
                if (c >= B.cols())
                    continue;
                auto it = x.find(c);
                if (it != x.end())
                    dot += Rational(v) * it->second;
            }
            if (!is_zero(dot))
                x[pc] = -dot / pv;
        }
        for (auto& [r, v] : x)
            if (r < B.cols() && !is_zero(v))
                X.set(r, mc, v);
    }
    return X;
}

/* A maximal set of linearly independent columns of m, as a matrix. Pivot
 * columns stay independent under the (invertible) row operations, so the
 * echelon pivot set works directly. */
inline RationalMatrix image_basis(const RationalMatrix& m)
{
    auto ech = detail::echelon_form(m);
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (ech.col_is_pivot[c])
            cols.push_back(c);
    RationalMatrix out(m.rows(), cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k)
        for (const auto& [r, v] : m.column(cols[k]))
            out.set(r, k, v);
    return out;
}

}  // namespace dgcat
