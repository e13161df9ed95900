#include <doctest.h>

#include <dgcat/simplicial.hpp>

#include "test_helpers.hpp"

using namespace dgcat;

namespace {

SimplicialChainComplex constant_object(const ChainComplex& c, int top)
{
    SimplicialChainComplex s;
    s.top = top;
    s.levels.assign(top + 1, c);
    s.faces.resize(top + 1);
    s.degens.resize(top + 1);
    for (int q = 1; q <= top; ++q)
        s.faces[q].assign(q + 1, ChainMap::identity(c));
    for (int q = 0; q < top; ++q)
        s.degens[q].assign(q + 1, ChainMap::identity(c));
    return s;
}

}  // namespace

TEST_CASE("constant simplicial object totalizes to its value")
{
    testing::Rng rng(17);
    ChainComplex c = testing::random_complex(rng, 0, 2);
    int t = 4;
    ChainComplex tot = totalize(constant_object(c, t));
    BettiTable h = homology_ranks(c);
    BettiTable ht = truncated_betti(tot, t);
    CHECK(ht.reliable_up_to == t - 1);
    for (int n = c.lo(); n <= t - 1; ++n)
        CHECK(ht.rank(n) == h.rank(n));
}

TEST_CASE("levelwise zero totalizes to zero")
{
    SimplicialChainComplex s = constant_object(ChainComplex::zero(), 3);
    CHECK(totalize(s).is_zero());
}

TEST_CASE("unit-category bar: levels Q with alternating faces")
{
    ChainComplex q = ChainComplex::point(0);
    ChainComplex tot = totalize(constant_object(q, 5));
    CHECK(homology_ranks(tot).str() == "{0:1}");
}

TEST_CASE("truncation stability of the totalization")
{
    testing::Rng rng(23);
    ChainComplex c = testing::random_complex(rng, 0, 2);
    for (int t = 2; t <= 4; ++t) {
        ChainComplex a = totalize(constant_object(c, t));
        ChainComplex b = totalize(constant_object(c, t + 1));
        BettiTable ha = homology_ranks(a), hb = homology_ranks(b);
        for (int n = -1; n < t; ++n)
            CHECK(ha.rank(n) == hb.rank(n));
    }
}

TEST_CASE("simplicial identity violations are rejected")
{
    ChainComplex q = ChainComplex::point(0);
    SimplicialChainComplex s = constant_object(q, 2);
    s.faces[1][0] = ChainMap::identity(q) * rat(2);  // breaks d_0 s_0 = id
    CHECK_THROWS_AS(totalize(s), Error);
}

TEST_CASE("augmented object with extra degeneracy collapses")
{
    // B_q = Q^(2^q) modelling words in one idempotent letter: use the
    // two-term contractible complex placed in a simplicial direction instead:
    // a direct nontrivial check: simplicial object with levels Q (constant)
    // already covered; here check that a nonconstant object with an exact
    // Moore complex totalizes to the right thing.
    ChainComplex q = ChainComplex::point(0);
    ChainComplex q2;
    q2.set_dim(0, 2);
    SimplicialChainComplex s;
    s.top = 1;
    s.levels = {q, q2};
    s.faces.resize(2);
    s.degens.resize(2);
    // d_0 = sum of coordinates, d_1 = first coordinate doubled? must satisfy
    // d_0 s_0 = d_1 s_0 = id with s_0 the diagonal/2... keep it honest:
    // s_0(x) = (x, x); d_0(a,b) = a; d_1(a,b) = b.
    ChainMap s0(q, q2);
    RationalMatrix ms(2, 1);
    ms.set(0, 0, rat(1));
    ms.set(1, 0, rat(1));
    s0.set_component(0, ms);
    ChainMap d0(q2, q), d1(q2, q);
    RationalMatrix m0(1, 2), m1(1, 2);
    m0.set(0, 0, rat(1));
    m1.set(0, 1, rat(1));
    d0.set_component(0, m0);
    d1.set_component(0, m1);
    s.faces[1] = {d0, d1};
    s.degens[0] = {s0};
    ChainComplex tot = totalize(s);
    // N_1 = ker d_1 = {(a,0)} and the Moore differential d_0 maps it onto
    // level 0, so H_0 = coker(d_0 - d_1) = 0 in the reliable range
    BettiTable h = truncated_betti(tot, 1);
    CHECK(h.rank(0) == 0);
    CHECK(h.reliable_up_to == 0);
}
