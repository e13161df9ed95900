#pragma once

#include "matrix.hpp"

#include <climits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace dgcat {

constexpr int kExactDegree = INT_MAX / 2;  // reliable_up_to for untruncated results

/* Homology ranks per degree. reliable_up_to records the truncation contract:
 * ranks in degrees above it may be artifacts. */
struct BettiTable {
    std::map<int, std::size_t> ranks;  // zero ranks omitted
    int reliable_up_to = kExactDegree;

    std::size_t rank(int n) const
    {
        auto it = ranks.find(n);
        return it == ranks.end() ? 0 : it->second;
    }

    bool equal_in_range(const BettiTable& other, int lo, int hi) const
    {
        for (int n = lo; n <= hi; ++n)
            if (rank(n) != other.rank(n))
                return false;
        return true;
    }

    std::string str() const
    {
        std::string s = "{";
        bool first = true;
        for (auto& [n, r] : ranks) {
            if (!first)
                s += ", ";
            s += std::to_string(n) + ":" + std::to_string(r);
            first = false;
        }
        return s + "}";
    }
};

/* Bounded chain complex of finite-dimensional Q-vector spaces, homological
 * grading: d_n : C_n -> C_{n-1}. */
class ChainComplex {
public:
    ChainComplex() = default;

    static ChainComplex zero() { return ChainComplex(); }

    /* Q concentrated in one degree. */
    static ChainComplex point(int degree, std::size_t dim = 1)
    {
        ChainComplex c;
        if (dim > 0)
            c.dims_[degree] = dim;
        return c;
    }

    std::size_t dim(int n) const
    {
        auto it = dims_.find(n);
        return it == dims_.end() ? 0 : it->second;
    }

    std::size_t total_dim() const
    {
        std::size_t t = 0;
        for (auto& [n, d] : dims_)
            t += d;
        return t;
    }

    bool is_zero() const { return total_dim() == 0; }

    int lo() const { return dims_.empty() ? 0 : dims_.begin()->first; }
    int hi() const { return dims_.empty() ? -1 : dims_.rbegin()->first; }

    void set_dim(int n, std::size_t d)
    {
        if (d == 0)
            dims_.erase(n);
        else
            dims_[n] = d;
    }

    RationalMatrix d(int n) const
    {
        auto it = diff_.find(n);
        if (it != diff_.end())
            return it->second;
        return RationalMatrix(dim(n - 1), dim(n));
    }

    void set_d(int n, RationalMatrix m)
    {
        if (m.rows() != dim(n - 1) || m.cols() != dim(n))
            throw Error("differential shape mismatch in degree " + std::to_string(n));
        if (m.is_zero())
            diff_.erase(n);
        else
            diff_[n] = std::move(m);
    }

    /* d∘d = 0 and differential shapes; throws on violation. */
    void validate() const
    {
        for (auto& [n, m] : diff_) {
            if (m.rows() != dim(n - 1) || m.cols() != dim(n))
                throw Error("differential shape mismatch in degree " + std::to_string(n));
            if (dim(n) > 0 && dim(n - 2) > 0) {
                if (!(d(n - 1) * m).is_zero())
                    throw Error("d∘d != 0 in degree " + std::to_string(n));
            }
        }
    }

    bool operator==(const ChainComplex& rhs) const
    {
        if (dims_ != rhs.dims_)
            return false;
        int a = std::min(lo(), rhs.lo()), b = std::max(hi(), rhs.hi());
        for (int n = a; n <= b + 1; ++n)
            if (d(n) != rhs.d(n))
                return false;
        return true;
    }
    bool operator!=(const ChainComplex& rhs) const { return !(*this == rhs); }

    const std::map<int, std::size_t>& dims() const { return dims_; }

private:
    std::map<int, std::size_t> dims_;
    std::map<int, RationalMatrix> diff_;
};

/* Degreewise linear map commuting with differentials (degree 0 unless noted;
 * all structure maps in this library are degree 0). */
class ChainMap {
public:
    ChainMap() = default;
    ChainMap(ChainComplex source, ChainComplex target)
        : source_(std::move(source)), target_(std::move(target))
    {
    }

    static ChainMap identity(const ChainComplex& c)
    {
        ChainMap f(c, c);
        for (auto& [n, d] : c.dims())
            f.comps_[n] = RationalMatrix::identity(d);
        return f;
    }

    static ChainMap zero_map(const ChainComplex& src, const ChainComplex& dst)
    {
        return ChainMap(src, dst);
    }

    const ChainComplex& source() const { return source_; }
    const ChainComplex& target() const { return target_; }

    RationalMatrix component(int n) const
    {
        auto it = comps_.find(n);
        if (it != comps_.end())
            return it->second;
        return RationalMatrix(target_.dim(n), source_.dim(n));
    }

    void set_component(int n, RationalMatrix m)
    {
        if (m.rows() != target_.dim(n) || m.cols() != source_.dim(n))
            throw Error("chain map component shape mismatch in degree " + std::to_string(n));
        if (m.is_zero())
            comps_.erase(n);
        else
            comps_[n] = std::move(m);
    }

    void add_to_component(int n, std::size_t r, std::size_t c, const Rational& v)
    {
        if (dgcat::is_zero(v))
            return;
        auto it = comps_.find(n);
        if (it == comps_.end()) {
            RationalMatrix m(target_.dim(n), source_.dim(n));
            m.set(r, c, v);
            comps_[n] = std::move(m);
        }
        else {
            it->second.add_to(r, c, v);
        }
    }

    bool is_zero() const
    {
        for (auto& [n, m] : comps_)
            if (!m.is_zero())
                return false;
        return true;
    }

    /* Commutation with the differentials; throws on violation. */
    void validate() const
    {
        int a = std::min(source_.lo(), target_.lo());
        int b = std::max(source_.hi(), target_.hi());
        for (int n = a; n <= b; ++n) {
            if (target_.d(n) * component(n) != component(n - 1) * source_.d(n))
                throw Error("chain map does not commute with d in degree " + std::to_string(n));
        }
    }

    ChainMap compose_after(const ChainMap& g) const  // (*this) ∘ g
    {
        ChainMap out(g.source_, target_);
        int a = std::min(g.source_.lo(), target_.lo());
        int b = std::max(g.source_.hi(), target_.hi());
        for (int n = a; n <= b; ++n) {
            RationalMatrix m = component(n) * g.component(n);
            if (!m.is_zero())
                out.comps_[n] = std::move(m);
        }
        return out;
    }

    ChainMap operator+(const ChainMap& rhs) const { return combine(rhs, Rational(1)); }
    ChainMap operator-(const ChainMap& rhs) const { return combine(rhs, Rational(-1)); }

    ChainMap operator*(const Rational& s) const
    {
        ChainMap out(source_, target_);
        for (auto& [n, m] : comps_) {
            RationalMatrix sm = m * s;
            if (!sm.is_zero())
                out.comps_[n] = std::move(sm);
        }
        return out;
    }

    bool operator==(const ChainMap& rhs) const
    {
        int a = std::min(source_.lo(), rhs.source_.lo());
        int b = std::max(source_.hi(), rhs.source_.hi());
        for (int n = a; n <= b; ++n)
            if (component(n) != rhs.component(n))
                return false;
        return true;
    }
    bool operator!=(const ChainMap& rhs) const { return !(*this == rhs); }

private:
    ChainMap combine(const ChainMap& rhs, const Rational& s) const
    {
        ChainMap out(source_, target_);
        int a = std::min(source_.lo(), target_.lo());
        int b = std::max(source_.hi(), target_.hi());
        for (int n = a; n <= b; ++n) {
            RationalMatrix m = component(n) + rhs.component(n) * s;
            if (!m.is_zero())
                out.comps_[n] = std::move(m);
        }
        return out;
    }

    ChainComplex source_, target_;
    std::map<int, RationalMatrix> comps_;
};

/* ---------------------------------------------------------------- tensor */

/* Ordered tensor product of a list of complexes. Basis of degree n is all
 * tuples ((deg_0,idx_0),...,(deg_{k-1},idx_{k-1})) with Σ deg = n, ordered
 * lexicographically; the empty product is Q in degree 0. The differential
 * carries the Koszul sign (-1)^{deg_0+...+deg_{s-1}} on slot s. */
class TensorSpace {
public:
    struct Elem {
        std::vector<int> degs;
        std::vector<std::size_t> idxs;
        bool operator<(const Elem& rhs) const
        {
            for (std::size_t i = 0; i < degs.size(); ++i) {
                if (degs[i] != rhs.degs[i])
                    return degs[i] < rhs.degs[i];
                if (idxs[i] != rhs.idxs[i])
                    return idxs[i] < rhs.idxs[i];
            }
            return false;
        }
        bool operator==(const Elem& rhs) const { return degs == rhs.degs && idxs == rhs.idxs; }
    };

    explicit TensorSpace(std::vector<ChainComplex> slots) : slots_(std::move(slots)) { build(); }

    const ChainComplex& total() const { return total_; }
    const std::vector<ChainComplex>& slots() const { return slots_; }

    const std::vector<Elem>& basis(int n) const
    {
        static const std::vector<Elem> empty;
        auto it = basis_.find(n);
        return it == basis_.end() ? empty : it->second;
    }

    std::size_t index_of(const Elem& e, int n) const
    {
        auto it = index_.find(n);
        if (it == index_.end())
            throw Error("tensor basis degree out of range");
        auto jt = it->second.find(e);
        if (jt == it->second.end())
            throw Error("tensor basis element not found");
        return jt->second;
    }

private:
    void build()
    {
        if (slots_.empty()) {
            total_ = ChainComplex::point(0);
            basis_[0] = {Elem{{}, {}}};
            index_[0][Elem{{}, {}}] = 0;
            return;
        }
        for (auto& s : slots_)
            if (s.is_zero()) {
                total_ = ChainComplex::zero();
                return;
            }
        int lo = 0, hi = 0;
        for (auto& s : slots_) {
            lo += s.lo();
            hi += s.hi();
        }
        for (int n = lo; n <= hi; ++n) {
            std::vector<Elem> elems;
            Elem cur;
            cur.degs.resize(slots_.size());
            cur.idxs.resize(slots_.size());
            enumerate(0, n, cur, elems);
            if (elems.empty())
                continue;
            total_.set_dim(n, elems.size());
            for (std::size_t i = 0; i < elems.size(); ++i)
                index_[n][elems[i]] = i;
            basis_[n] = std::move(elems);
        }
        // Koszul differential
        for (int n = lo + 1; n <= hi; ++n) {
            const auto& src = basis(n);
            if (src.empty() || basis(n - 1).empty())
                continue;
            RationalMatrix d(total_.dim(n - 1), total_.dim(n));
            for (std::size_t col = 0; col < src.size(); ++col) {
                const Elem& e = src[col];
                int sign_deg = 0;
                for (std::size_t s = 0; s < slots_.size(); ++s) {
                    const RationalMatrix ds = slots_[s].d(e.degs[s]);
                    if (!ds.is_zero()) {
                        Rational sign((sign_deg % 2 == 0) ? 1 : -1);
                        for (const auto& [r, v] : ds.column(e.idxs[s])) {
                            Elem t = e;
                            t.degs[s] -= 1;
                            t.idxs[s] = r;
                            d.add_to(index_of(t, n - 1), col, sign * v);
                        }
                    }
                    sign_deg += e.degs[s];
                }
            }
            total_.set_d(n, std::move(d));
        }
    }

    void enumerate(std::size_t s, int remaining, Elem& cur, std::vector<Elem>& out) const
    {
        if (s == slots_.size()) {
            if (remaining == 0)
                out.push_back(cur);
            return;
        }
        // degree budget feasibility for the remaining slots
        int rest_lo = 0, rest_hi = 0;
        for (std::size_t t = s + 1; t < slots_.size(); ++t) {
            rest_lo += slots_[t].lo();
            rest_hi += slots_[t].hi();
        }
        const ChainComplex& c = slots_[s];
        for (int deg = c.lo(); deg <= c.hi(); ++deg) {
            if (remaining - deg < rest_lo || remaining - deg > rest_hi)
                continue;
            std::size_t dm = c.dim(deg);
            for (std::size_t i = 0; i < dm; ++i) {
                cur.degs[s] = deg;
                cur.idxs[s] = i;
                enumerate(s + 1, remaining - deg, cur, out);
            }
        }
    }

    std::vector<ChainComplex> slots_;
    ChainComplex total_;
    std::map<int, std::vector<Elem>> basis_;
    std::map<int, std::map<Elem, std::size_t>> index_;
};

inline ChainComplex tensor(const ChainComplex& a, const ChainComplex& b)
{
    return TensorSpace({a, b}).total();
}

inline ChainComplex unit_complex() { return ChainComplex::point(0); }

/* f⊗g for degree-0 chain maps (no Koszul signs arise). */
inline ChainMap tensor_map(const ChainMap& f, const ChainMap& g)
{
    TensorSpace src({f.source(), g.source()});
    TensorSpace dst({f.target(), g.target()});
    ChainMap out(src.total(), dst.total());
    for (int n = src.total().lo(); n <= src.total().hi(); ++n) {
        for (std::size_t col = 0; col < src.basis(n).size(); ++col) {
            const auto& e = src.basis(n)[col];
            const RationalMatrix fm = f.component(e.degs[0]);
            const RationalMatrix gm = g.component(e.degs[1]);
            for (const auto& [r1, v1] : fm.column(e.idxs[0]))
                for (const auto& [r2, v2] : gm.column(e.idxs[1])) {
                    TensorSpace::Elem t{{e.degs[0], e.degs[1]}, {r1, r2}};
                    out.add_to_component(n, dst.index_of(t, n), col, v1 * v2);
                }
        }
    }
    return out;
}

/* Canonical isomorphism (a⊗b)⊗c -> a⊗(b⊗c); coefficient 1 on basis tuples. */
inline ChainMap associator(const ChainComplex& a, const ChainComplex& b, const ChainComplex& c)
{
    TensorSpace ab({a, b});
    TensorSpace bc({b, c});
    TensorSpace src({ab.total(), c});
    TensorSpace dst({a, bc.total()});
    ChainMap out(src.total(), dst.total());
    for (int n = src.total().lo(); n <= src.total().hi(); ++n) {
        for (std::size_t col = 0; col < src.basis(n).size(); ++col) {
            const auto& e = src.basis(n)[col];
            const auto& inner = ab.basis(e.degs[0])[e.idxs[0]];
            int db = inner.degs[1], dc = e.degs[1];
            TensorSpace::Elem right{{db, dc}, {inner.idxs[1], e.idxs[1]}};
            TensorSpace::Elem t{{inner.degs[0], db + dc},
                                {inner.idxs[0], bc.index_of(right, db + dc)}};
            out.add_to_component(n, dst.index_of(t, n), col, Rational(1));
        }
    }
    return out;
}

/* Braiding a⊗b -> b⊗a with Koszul sign (-1)^{|x||y|}. */
inline ChainMap braiding(const ChainComplex& a, const ChainComplex& b)
{
    TensorSpace src({a, b});
    TensorSpace dst({b, a});
    ChainMap out(src.total(), dst.total());
    for (int n = src.total().lo(); n <= src.total().hi(); ++n) {
        for (std::size_t col = 0; col < src.basis(n).size(); ++col) {
            const auto& e = src.basis(n)[col];
            TensorSpace::Elem t{{e.degs[1], e.degs[0]}, {e.idxs[1], e.idxs[0]}};
            Rational sign(((e.degs[0] * e.degs[1]) % 2 == 0) ? 1 : -1);
            out.add_to_component(n, dst.index_of(t, n), col, sign);
        }
    }
    return out;
}

/* ------------------------------------------------------------ direct sum */

struct SumSpace {
    ChainComplex total;
    std::vector<ChainComplex> parts;

    std::size_t offset(std::size_t part, int n) const
    {
        std::size_t off = 0;
        for (std::size_t i = 0; i < part; ++i)
            off += parts[i].dim(n);
        return off;
    }

    ChainMap inclusion(std::size_t part) const
    {
        ChainMap f(parts[part], total);
        for (auto& [n, d] : parts[part].dims()) {
            RationalMatrix m(total.dim(n), d);
            std::size_t off = offset(part, n);
            for (std::size_t i = 0; i < d; ++i)
                m.set(off + i, i, Rational(1));
            f.set_component(n, std::move(m));
        }
        return f;
    }

    ChainMap projection(std::size_t part) const
    {
        ChainMap f(total, parts[part]);
        for (auto& [n, d] : parts[part].dims()) {
            RationalMatrix m(d, total.dim(n));
            std::size_t off = offset(part, n);
            for (std::size_t i = 0; i < d; ++i)
                m.set(i, off + i, Rational(1));
            f.set_component(n, std::move(m));
        }
        return f;
    }
};

inline SumSpace direct_sum(std::vector<ChainComplex> parts)
{
    SumSpace s;
    s.parts = std::move(parts);
    int lo = 0, hi = -1;
    bool any = false;
    for (auto& p : s.parts) {
        if (p.is_zero())
            continue;
        if (!any) {
            lo = p.lo();
            hi = p.hi();
            any = true;
        }
        else {
            lo = std::min(lo, p.lo());
            hi = std::max(hi, p.hi());
        }
    }
    if (!any)
        return s;
    for (int n = lo; n <= hi; ++n) {
        std::size_t d = 0;
        for (auto& p : s.parts)
            d += p.dim(n);
        s.total.set_dim(n, d);
    }
    for (int n = lo; n <= hi + 1; ++n) {
        RationalMatrix m(s.total.dim(n - 1), s.total.dim(n));
        std::size_t ro = 0, co = 0;
        for (auto& p : s.parts) {
            m.insert_block(ro, co, p.d(n));
            ro += p.dim(n - 1);
            co += p.dim(n);
        }
        if (!m.is_zero())
            s.total.set_d(n, std::move(m));
    }
    return s;
}

/* ------------------------------------------------------------ shift, cone */

/* c[k]: degree n holds c_{n-k}; differential picks up (-1)^k. */
inline ChainComplex shift(const ChainComplex& c, int k)
{
    ChainComplex out;
    for (auto& [n, d] : c.dims())
        out.set_dim(n + k, d);
    Rational sign((k % 2 == 0) ? 1 : -1);
    for (int n = c.lo() + 1; n <= c.hi(); ++n) {
        RationalMatrix m = c.d(n) * sign;
        if (!m.is_zero())
            out.set_d(n + k, std::move(m));
    }
    return out;
}

struct Cone {
    ChainComplex complex;           // cone(f)_n = target_n ⊕ source_{n-1}
    ChainMap include_target;        // target -> cone
    ChainMap project_source_shift;  // cone -> source[1]
};

/* cone(f: A->B): d(b,a) = (d_B b + f a, -d_A a). */
inline Cone cone(const ChainMap& f)
{
    const ChainComplex& A = f.source();
    const ChainComplex& B = f.target();
    ChainComplex c;
    int lo = std::min(B.lo(), A.lo() + 1), hi = std::max(B.hi(), A.hi() + 1);
    for (int n = lo; n <= hi; ++n) {
        std::size_t d = B.dim(n) + A.dim(n - 1);
        if (d > 0)
            c.set_dim(n, d);
    }
    for (int n = lo; n <= hi + 1; ++n) {
        std::size_t rows = c.dim(n - 1), cols = c.dim(n);
        if (rows == 0 || cols == 0)
            continue;
        RationalMatrix m(rows, cols);
        m.insert_block(0, 0, B.d(n));
        m.insert_block(0, B.dim(n), f.component(n - 1));
        m.insert_block(B.dim(n - 1), B.dim(n), A.d(n - 1) * Rational(-1));
        if (!m.is_zero())
            c.set_d(n, std::move(m));
    }
    Cone out;
    out.complex = c;
    out.include_target = ChainMap(B, c);
    for (auto& [n, d] : B.dims()) {
        RationalMatrix m(c.dim(n), d);
        for (std::size_t i = 0; i < d; ++i)
            m.set(i, i, Rational(1));
        out.include_target.set_component(n, std::move(m));
    }
    ChainComplex sh = shift(A, 1);
    out.project_source_shift = ChainMap(c, sh);
    for (auto& [n, d] : sh.dims()) {
        RationalMatrix m(d, c.dim(n));
        for (std::size_t i = 0; i < d; ++i)
            m.set(i, B.dim(n) + i, Rational(1));
        out.project_source_shift.set_component(n, std::move(m));
    }
    return out;
}

/* ------------------------------------------------------------- homology */

inline BettiTable homology_ranks(const ChainComplex& c)
{
    c.validate();
    BettiTable t;
    for (int n = c.lo(); n <= c.hi(); ++n) {
        if (c.dim(n) == 0)
            continue;
        std::size_t r = c.dim(n) - rank(c.d(n)) - rank(c.d(n + 1));
        if (r > 0)
            t.ranks[n] = r;
    }
    return t;
}

/* True iff H_n(f) is an isomorphism for all n <= up_to. Decided exactly via
 * ranks of cycles, boundaries and mapped cycles. */
inline bool is_quasi_iso(const ChainMap& f, int up_to = kExactDegree)
{
    const ChainComplex& A = f.source();
    const ChainComplex& B = f.target();
    int lo = std::min(A.lo(), B.lo());
    int hi = std::max(A.hi(), B.hi());
    if (up_to < hi)
        hi = up_to;
    for (int n = lo; n <= hi; ++n) {
        std::size_t hA = 0, hB = 0;
        RationalMatrix zA(0, 0);
        if (A.dim(n) > 0) {
            zA = kernel_basis(A.d(n));
            hA = zA.cols() - rank(A.d(n + 1));
        }
        if (B.dim(n) > 0)
            hB = B.dim(n) - rank(B.d(n)) - rank(B.d(n + 1));
        if (hA != hB)
            return false;
        if (hA == 0)
            continue;
        RationalMatrix fz = f.component(n) * zA;
        RationalMatrix bB = B.d(n + 1);
        std::size_t im_rank = rank(RationalMatrix::hconcat(fz, bB)) - rank(bB);
        if (im_rank != hB)
            return false;
    }
    return true;
}

/* ----------------------------------------------------- sub- and quotient */

struct Subcomplex {
    ChainComplex complex;
    ChainMap inclusion;
};

/* Kernel of f, degreewise, as a subcomplex with inclusion. */
inline Subcomplex kernel_subcomplex(const ChainMap& f)
{
    const ChainComplex& A = f.source();
    Subcomplex out;
    std::map<int, RationalMatrix> incl;
    for (int n = A.lo(); n <= A.hi(); ++n) {
        if (A.dim(n) == 0)
            continue;
        RationalMatrix k = kernel_basis(f.component(n));
        if (k.cols() > 0) {
            out.complex.set_dim(n, k.cols());
            incl[n] = std::move(k);
        }
    }
    out.inclusion = ChainMap(out.complex, A);
    for (auto& [n, m] : incl)
        out.inclusion.set_component(n, m);
    for (int n = out.complex.lo(); n <= out.complex.hi(); ++n) {
        if (out.complex.dim(n) == 0 || out.complex.dim(n - 1) == 0)
            continue;
        // d restricts to the kernel; express in the kernel basis
        RationalMatrix rhs = A.d(n) * out.inclusion.component(n);
        out.complex.set_d(n, solve(out.inclusion.component(n - 1), rhs));
    }
    out.complex.validate();
    out.inclusion.validate();
    return out;
}

/* Factors f through an inclusion: given incl: K -> C injective and
 * f: W -> C with image inside K, returns g: W -> K with incl ∘ g = f. */
inline ChainMap corestrict(const ChainMap& incl, const ChainMap& f)
{
    ChainMap g(f.source(), incl.source());
    int a = std::min(f.source().lo(), incl.source().lo());
    int b = std::max(f.source().hi(), incl.source().hi());
    for (int n = a; n <= b; ++n) {
        RationalMatrix fc = f.component(n);
        if (fc.is_zero())
            continue;
        if (incl.source().dim(n) == 0)
            throw Error("corestrict: image leaves the subcomplex");
        g.set_component(n, solve(incl.component(n), fc));
    }
    return g;
}

struct Quotient {
    ChainComplex complex;
    ChainMap projection;  // C -> Q
    ChainMap section;     // Q -> C, splits projection (chosen complement)
};

namespace detail {

/* Incremental rational row reduction used to pick complements. */
struct SpanReducer {
    // lead column -> reduced sparse row (normalized to lead coefficient 1)
    std::map<std::size_t, std::map<std::size_t, Rational>> rows;

    // reduces v in place; returns false if v reduces to zero
    bool reduce(std::map<std::size_t, Rational>& v) const
    {
        for (;;) {
            while (!v.empty() && is_zero(v.begin()->second))
                v.erase(v.begin());
            if (v.empty())
                return false;
            auto it = rows.find(v.begin()->first);
            if (it == rows.end())
                return true;
            Rational c = v.begin()->second;
            for (auto& [col, w] : it->second) {
                auto vt = v.find(col);
                Rational nv = (vt == v.end() ? Rational(0) : vt->second) - c * w;
                if (is_zero(nv)) {
                    if (vt != v.end())
                        v.erase(vt);
                }
                else {
                    v[col] = nv;
                }
            }
        }
    }

    bool insert(std::map<std::size_t, Rational> v)
    {
        if (!reduce(v))
            return false;
        Rational lead = v.begin()->second;
        for (auto& [c, w] : v)
            w /= lead;
        rows[v.begin()->first] = std::move(v);
        return true;
    }
};

}  // namespace detail

/* Quotient of C by the span of the given columns (degreewise). The span must
 * be closed under d. Representatives are the standard basis vectors not in
 * the span, chosen greedily in index order. */
inline Quotient quotient_by_span(const ChainComplex& C, const std::map<int, RationalMatrix>& span)
{
    Quotient out;
    std::map<int, std::vector<std::size_t>> reps;       // chosen complement columns
    std::map<int, RationalMatrix> proj;

    for (int n = C.lo(); n <= C.hi(); ++n) {
        std::size_t dn = C.dim(n);
        if (dn == 0)
            continue;
        detail::SpanReducer red;
        RationalMatrix sp(dn, 0);
        auto it = span.find(n);
        if (it != span.end()) {
            if (it->second.rows() != dn)
                throw Error("quotient span shape mismatch");
            sp = image_basis(it->second);
            for (std::size_t c = 0; c < sp.cols(); ++c) {
                std::map<std::size_t, Rational> v;
                for (const auto& [r, w] : sp.column(c))
                    v[r] = w;
                red.insert(std::move(v));
            }
        }
        std::vector<std::size_t> chosen;
        for (std::size_t i = 0; i < dn; ++i) {
            std::map<std::size_t, Rational> v{{i, Rational(1)}};
            if (red.insert(std::move(v)))
                chosen.push_back(i);
        }
        if (!chosen.empty())
            out.complex.set_dim(n, chosen.size());
        // projection: solve [sp | e_chosen] y = e_i, take the complement part
        RationalMatrix full(dn, sp.cols() + chosen.size());
        full.insert_block(0, 0, sp);
        for (std::size_t k = 0; k < chosen.size(); ++k)
            full.set(chosen[k], sp.cols() + k, Rational(1));
        RationalMatrix X = solve(full, RationalMatrix::identity(dn));
        RationalMatrix p(chosen.size(), dn);
        for (std::size_t k = 0; k < chosen.size(); ++k)
            for (std::size_t i = 0; i < dn; ++i) {
                Rational v = X.at(sp.cols() + k, i);
                if (!is_zero(v))
                    p.set(k, i, v);
            }
        proj[n] = std::move(p);
        reps[n] = std::move(chosen);
    }

    out.projection = ChainMap(C, out.complex);
    for (auto& [n, m] : proj)
        out.projection.set_component(n, m);
    out.section = ChainMap(out.complex, C);
    for (auto& [n, rs] : reps) {
        RationalMatrix s(C.dim(n), rs.size());
        for (std::size_t k = 0; k < rs.size(); ++k)
            s.set(rs[k], k, Rational(1));
        out.section.set_component(n, std::move(s));
    }
    for (int n = out.complex.lo(); n <= out.complex.hi(); ++n) {
        RationalMatrix m =
            out.projection.component(n - 1) * (C.d(n) * out.section.component(n));
        if (!m.is_zero())
            out.complex.set_d(n, std::move(m));
    }
    // well-definedness: d must send the span into the span
    for (int n = C.lo(); n <= C.hi(); ++n) {
        auto it = span.find(n);
        if (it == span.end())
            continue;
        RationalMatrix chk = out.projection.component(n - 1) * (C.d(n) * it->second);
        if (!chk.is_zero())
            throw Error("quotient span is not closed under the differential");
    }
    out.complex.validate();
    out.projection.validate();
    return out;
}

/* ------------------------------------------------------------ Hom complex */

/* Internal hom: Hom(X,Y)_n = Π_m Hom(X_m, Y_{m+n}), with
 * (df)(x) = d_Y(f(x)) - (-1)^n f(d_X x). Basis elements are (m, i, j) in
 * lexicographic order. */
class HomSpace {
public:
    struct Elem {
        int m;
        std::size_t i, j;
        bool operator<(const Elem& r) const
        {
            if (m != r.m)
                return m < r.m;
            if (i != r.i)
                return i < r.i;
            return j < r.j;
        }
    };

    HomSpace(ChainComplex X, ChainComplex Y) : X_(std::move(X)), Y_(std::move(Y)) { build(); }

    const ChainComplex& total() const { return total_; }
    const std::vector<Elem>& basis(int n) const
    {
        static const std::vector<Elem> empty;
        auto it = basis_.find(n);
        return it == basis_.end() ? empty : it->second;
    }
    std::size_t index_of(const Elem& e, int n) const { return index_.at(n).at(e); }

    /* Interprets a coordinate column in degree n as a degreewise linear map
     * X -> Y of degree n (not necessarily a chain map). */
    std::map<int, RationalMatrix> to_components(int n, const RationalMatrix& col) const
    {
        std::map<int, RationalMatrix> comps;
        for (int m = X_.lo(); m <= X_.hi(); ++m)
            if (X_.dim(m) > 0 && Y_.dim(m + n) > 0)
                comps[m] = RationalMatrix(Y_.dim(m + n), X_.dim(m));
        const auto& b = basis(n);
        for (const auto& [r, v] : col.column(0))
            comps[b[r].m].set(b[r].j, b[r].i, v);
        return comps;
    }

private:
    void build()
    {
        if (X_.is_zero() || Y_.is_zero())
            return;
        int nlo = Y_.lo() - X_.hi(), nhi = Y_.hi() - X_.lo();
        for (int n = nlo; n <= nhi; ++n) {
            std::vector<Elem> elems;
            for (int m = X_.lo(); m <= X_.hi(); ++m)
                for (std::size_t i = 0; i < X_.dim(m); ++i)
                    for (std::size_t j = 0; j < Y_.dim(m + n); ++j)
                        elems.push_back({m, i, j});
            if (elems.empty())
                continue;
            total_.set_dim(n, elems.size());
            for (std::size_t k = 0; k < elems.size(); ++k)
                index_[n][elems[k]] = k;
            basis_[n] = std::move(elems);
        }
        std::map<int, RationalMatrix> dX_t;  // transposed differentials of X
        for (int m = X_.lo(); m <= X_.hi() + 1; ++m)
            dX_t[m] = X_.d(m).transpose();
        for (int n = nlo + 1; n <= nhi; ++n) {
            if (total_.dim(n) == 0 || total_.dim(n - 1) == 0)
                continue;
            RationalMatrix d(total_.dim(n - 1), total_.dim(n));
            Rational sgn((n % 2 == 0) ? 1 : -1);
            std::map<int, RationalMatrix> dY;
            for (std::size_t col = 0; col < basis(n).size(); ++col) {
                const Elem& e = basis(n)[col];
                // d_Y ∘ f
                if (!dY.count(e.m + n))
                    dY[e.m + n] = Y_.d(e.m + n);
                for (const auto& [r, v] : dY.at(e.m + n).column(e.j))
                    d.add_to(index_of({e.m, e.i, r}, n - 1), col, v);
                // -(-1)^n f ∘ d_X: row i of d_X in degree m+1
                const auto& t = dX_t.at(e.m + 1);
                if (e.i < t.cols())
                    for (const auto& [r, v] : t.column(e.i))
                        d.add_to(index_of({e.m + 1, r, e.j}, n - 1), col, -sgn * v);
            }
            total_.set_d(n, std::move(d));
        }
        total_.validate();
    }

    ChainComplex X_, Y_, total_;
    std::map<int, std::vector<Elem>> basis_;
    std::map<int, std::map<Elem, std::size_t>> index_;
};

/* Basis of the space of degree-0 chain maps X -> Y (cycles of Hom in
 * degree 0); handy for generating random chain maps in tests. */
inline std::vector<ChainMap> chain_map_basis(const ChainComplex& X, const ChainComplex& Y)
{
    HomSpace H(X, Y);
    std::vector<ChainMap> out;
    if (H.total().dim(0) == 0)
        return out;
    RationalMatrix Z = kernel_basis(H.total().d(0));
    for (std::size_t c = 0; c < Z.cols(); ++c) {
        RationalMatrix col(Z.rows(), 1);
        for (const auto& [r, v] : Z.column(c))
            col.set(r, 0, v);
        ChainMap f(X, Y);
        for (auto& [m, comp] : H.to_components(0, col))
            f.set_component(m, comp);
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace dgcat
