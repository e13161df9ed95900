#pragma once

#include <dgcat/chain_complex.hpp>

#include <random>

namespace dgcat::testing {

using Rng = std::mt19937_64;

inline Rational random_rational(Rng& rng, int num_range = 3)
{
    std::uniform_int_distribution<int> num(-num_range, num_range);
    std::uniform_int_distribution<int> den(1, 3);
    return rat(num(rng), den(rng));
}

inline RationalMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols,
                                    double density = 0.5)
{
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    RationalMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (coin(rng) < density)
                m.set(r, c, random_rational(rng));
    return m;
}

/* Random bounded complex: direct sum of points and contractible two-term
 * pieces, conjugated by a random unipotent change of basis so that the
 * differentials are not in normal form. */
inline ChainComplex random_complex(Rng& rng, int lo, int hi, std::size_t max_dim = 2)
{
    std::uniform_int_distribution<std::size_t> dpick(0, max_dim);
    std::vector<ChainComplex> pieces;
    for (int n = lo; n <= hi; ++n) {
        std::size_t points = dpick(rng) % 2;
        for (std::size_t k = 0; k < points; ++k)
            pieces.push_back(ChainComplex::point(n));
        if (n > lo && dpick(rng) % 2 == 1) {
            ChainComplex cone2;  // Q -> Q, d = nonzero scalar
            cone2.set_dim(n, 1);
            cone2.set_dim(n - 1, 1);
            RationalMatrix d(1, 1);
            d.set(0, 0, rat(1 + (int)(dpick(rng) % 2)));
            cone2.set_d(n, d);
            pieces.push_back(cone2);
        }
    }
    if (pieces.empty())
        return ChainComplex::zero();
    ChainComplex c = direct_sum(std::move(pieces)).total;

    // unipotent basis change: conjugate d by (I + E) degreewise
    std::map<int, RationalMatrix> P, Pinv;
    for (auto& [n, d] : c.dims()) {
        RationalMatrix p = RationalMatrix::identity(d);
        if (d >= 2) {
            std::uniform_int_distribution<std::size_t> pick(0, d - 1);
            std::size_t r = pick(rng), cc = pick(rng);
            if (r != cc)
                p.set(r, cc, random_rational(rng, 2));
        }
        RationalMatrix pinv = RationalMatrix::identity(d);
        if (d >= 2)
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    if (i != j) {
                        Rational v = p.at(i, j);
                        if (!is_zero(v))
                            pinv.set(i, j, -v);
                    }
        P[n] = std::move(p);
        Pinv[n] = std::move(pinv);
    }
    ChainComplex out;
    for (auto& [n, d] : c.dims())
        out.set_dim(n, d);
    for (int n = c.lo() + 1; n <= c.hi(); ++n) {
        if (c.dim(n) == 0 || c.dim(n - 1) == 0)
            continue;
        out.set_d(n, P.at(n - 1) * (c.d(n) * Pinv.at(n)));
    }
    out.validate();
    return out;
}

/* Random degree-0 chain map as a rational combination of a basis of the
 * space of chain maps. */
inline ChainMap random_chain_map(Rng& rng, const ChainComplex& X, const ChainComplex& Y)
{
    auto basis = chain_map_basis(X, Y);
    ChainMap f(X, Y);
    for (auto& b : basis)
        f = f + b * random_rational(rng, 2);
    f.validate();
    return f;
}

}  // namespace dgcat::testing
