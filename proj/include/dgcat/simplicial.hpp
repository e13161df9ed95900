#pragma once

#include "chain_complex.hpp"

#include <string>
#include <vector>

namespace dgcat {

/* Truncated simplicial object in chain complexes: levels 0..top with all
 * faces and degeneracies on the retained range. */
struct SimplicialChainComplex {
    int top = -1;
    std::vector<ChainComplex> levels;
    std::vector<std::vector<ChainMap>> faces;   // faces[q][i]: q -> q-1, for 1 <= q <= top
    std::vector<std::vector<ChainMap>> degens;  // degens[q][i]: q -> q+1, for 0 <= q < top

    const ChainMap& d(int q, int i) const { return faces[q][i]; }
    const ChainMap& s(int q, int i) const { return degens[q][i]; }

    /* Exact check of all simplicial identities on the retained levels. */
    void validate_identities() const
    {
        for (int q = 1; q <= top; ++q) {
            if ((int)faces[q].size() != q + 1)
                throw Error("face count mismatch at level " + std::to_string(q));
            for (auto& f : faces[q])
                f.validate();
        }
        for (int q = 0; q < top; ++q) {
            if ((int)degens[q].size() != q + 1)
                throw Error("degeneracy count mismatch at level " + std::to_string(q));
            for (auto& f : degens[q])
                f.validate();
        }
        // d_i d_j = d_{j-1} d_i  (i < j)
        for (int q = 2; q <= top; ++q)
            for (int j = 1; j <= q; ++j)
                for (int i = 0; i < j; ++i)
                    if (d(q - 1, i).compose_after(d(q, j)) != d(q - 1, j - 1).compose_after(d(q, i)))
                        throw Error("identity d_i d_j failed at level " + std::to_string(q));
        // d_i s_j relations
        for (int q = 0; q < top; ++q)
            for (int j = 0; j <= q; ++j)
                for (int i = 0; i <= q + 1; ++i) {
                    ChainMap lhs = d(q + 1, i).compose_after(s(q, j));
                    if (i == j || i == j + 1) {
                        if (lhs != ChainMap::identity(levels[q]))
                            throw Error("identity d_i s_j = id failed at level " + std::to_string(q));
                    }
                    else if (i < j) {
                        if (q == 0)
                            continue;
                        if (lhs != s(q - 1, j - 1).compose_after(d(q, i)))
                            throw Error("identity d_i s_j (i<j) failed at level " + std::to_string(q));
                    }
                    else {  // i > j+1
                        if (q == 0)
                            continue;
                        if (lhs != s(q - 1, j).compose_after(d(q, i - 1)))
                            throw Error("identity d_i s_j (i>j+1) failed at level " + std::to_string(q));
                    }
                }
        // s_i s_j = s_{j+1} s_i  (i <= j)
        for (int q = 0; q + 1 < top; ++q)
            for (int j = 0; j <= q; ++j)
                for (int i = 0; i <= j; ++i)
                    if (s(q + 1, i).compose_after(s(q, j)) != s(q + 1, j + 1).compose_after(s(q, i)))
                        throw Error("identity s_i s_j failed at level " + std::to_string(q));
    }
};

namespace detail {

struct NormalizedLevels {
    std::vector<ChainComplex> levels;   // N_q = ∩_{i>=1} ker d_i
    std::vector<ChainMap> inclusions;   // N_q -> level q
    std::vector<ChainMap> moore;        // d_0 restricted: N_q -> N_{q-1} (index q>=1)
};

inline NormalizedLevels normalize(const SimplicialChainComplex& s)
{
    NormalizedLevels out;
    out.levels.resize(s.top + 1);
    out.inclusions.resize(s.top + 1);
    out.moore.resize(s.top + 1);

    out.levels[0] = s.levels[0];
    out.inclusions[0] = ChainMap::identity(s.levels[0]);
    for (int q = 1; q <= s.top; ++q) {
        // stack d_1..d_q into one map and take its kernel
        std::vector<ChainComplex> copies(q, s.levels[q - 1]);
        SumSpace stack = direct_sum(copies);
        ChainMap stacked(s.levels[q], stack.total);
        for (int i = 1; i <= q; ++i) {
            ChainMap part = stack.inclusion(i - 1).compose_after(s.d(q, i));
            stacked = stacked + part;
        }
        Subcomplex K = kernel_subcomplex(stacked);
        out.levels[q] = K.complex;
        out.inclusions[q] = K.inclusion;
    }
    for (int q = 1; q <= s.top; ++q) {
        ChainMap d0_incl = s.d(q, 0).compose_after(out.inclusions[q]);
        out.moore[q] = ChainMap(out.levels[q], out.levels[q - 1]);
        for (int n = out.levels[q].lo(); n <= out.levels[q].hi(); ++n) {
            if (out.levels[q].dim(n) == 0)
                continue;
            if (out.levels[q - 1].dim(n) == 0) {
                if (!d0_incl.component(n).is_zero())
                    throw Error("Moore differential leaves the normalized complex");
                continue;
            }
            out.moore[q].set_component(
                n, solve(out.inclusions[q - 1].component(n), d0_incl.component(n)));
        }
        out.moore[q].validate();
    }
    return out;
}

/* Assembles Tot_n = ⊕_q N(q)_{n-q} with D = moore + (-1)^q d_internal. */
inline ChainComplex total_complex(const std::vector<ChainComplex>& levels,
                                  const std::vector<ChainMap>& moore)
{
    int top = (int)levels.size() - 1;
    ChainComplex tot;
    int lo = 0, hi = -1;
    bool any = false;
    for (int q = 0; q <= top; ++q) {
        if (levels[q].is_zero())
            continue;
        int a = levels[q].lo() + q, b = levels[q].hi() + q;
        if (!any) {
            lo = a;
            hi = b;
            any = true;
        }
        else {
            lo = std::min(lo, a);
            hi = std::max(hi, b);
        }
    }
    if (!any)
        return tot;

    auto offset = [&](int q, int n) {  // offset of level-q block inside Tot_n
        std::size_t off = 0;
        for (int p = 0; p < q; ++p)
            off += levels[p].dim(n - p);
        return off;
    };
    for (int n = lo; n <= hi; ++n) {
        std::size_t d = 0;
        for (int q = 0; q <= top; ++q)
            d += levels[q].dim(n - q);
        if (d > 0)
            tot.set_dim(n, d);
    }
    for (int n = lo; n <= hi + 1; ++n) {
        if (tot.dim(n) == 0 || tot.dim(n - 1) == 0)
            continue;
        RationalMatrix D(tot.dim(n - 1), tot.dim(n));
        for (int q = 0; q <= top; ++q) {
            int m = n - q;
            if (levels[q].dim(m) == 0)
                continue;
            std::size_t co = offset(q, n);
            if (q >= 1) {  // Moore part: (q, m) -> (q-1, m)
                const RationalMatrix mm = moore[q].component(m);
                if (!mm.is_zero()) {
                    std::size_t ro = offset(q - 1, n - 1);
                    for (std::size_t c = 0; c < mm.cols(); ++c)
                        for (const auto& [r, v] : mm.column(c))
                            D.add_to(ro + r, co + c, v);
                }
            }
            const RationalMatrix dm = levels[q].d(m);  // internal: (q, m) -> (q, m-1)
            if (!dm.is_zero()) {
                Rational sign((q % 2 == 0) ? 1 : -1);
                std::size_t ro = offset(q, n - 1);
                for (std::size_t c = 0; c < dm.cols(); ++c)
                    for (const auto& [r, v] : dm.column(c))
                        D.add_to(ro + r, co + c, sign * v);
            }
        }
        if (!D.is_zero())
            tot.set_d(n, std::move(D));
    }
    tot.validate();
    return tot;
}

}  // namespace detail

/* Totalization of the normalized Moore bicomplex. Homology of the result is
 * trustworthy only in degrees <= top - 1. */
inline ChainComplex totalize(const SimplicialChainComplex& s)
{
    if (s.top < 0)
        return ChainComplex::zero();
    s.validate_identities();
    auto norm = detail::normalize(s);
    return detail::total_complex(norm.levels, norm.moore);
}

inline BettiTable truncated_betti(const ChainComplex& tot, int truncation)
{
    BettiTable t = homology_ranks(tot);
    t.reliable_up_to = truncation - 1;
    return t;
}

}  // namespace dgcat
