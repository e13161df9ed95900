#include <doctest.h>

#include <dgcat/chain_complex.hpp>

#include "test_helpers.hpp"

using namespace dgcat;

namespace {

ChainComplex two_term(int top_degree, const Rational& d_entry)
{
    ChainComplex c;
    c.set_dim(top_degree, 1);
    c.set_dim(top_degree - 1, 1);
    RationalMatrix d(1, 1);
    d.set(0, 0, d_entry);
    c.set_d(top_degree, d);
    return c;
}

}  // namespace

TEST_CASE("homology of basic complexes")
{
    CHECK(homology_ranks(ChainComplex::point(0)).str() == "{0:1}");
    CHECK(homology_ranks(two_term(1, rat(1))).ranks.empty());  // cone(id) contractible

    // Q -> Q^2 -> Q with both differentials of rank 1: all homology vanishes
    ChainComplex c;
    c.set_dim(0, 1);
    c.set_dim(1, 2);
    c.set_dim(2, 1);
    RationalMatrix d1(1, 2), d2(2, 1);
    d1.set(0, 1, rat(1));
    d2.set(0, 0, rat(1));
    c.set_d(1, d1);
    c.set_d(2, d2);
    c.validate();
    CHECK(rank(d1) == 1);
    CHECK(rank(d2) == 1);
    CHECK(homology_ranks(c).ranks.empty());
}

TEST_CASE("homology rejects non-complexes")
{
    ChainComplex c;
    c.set_dim(0, 1);
    c.set_dim(1, 1);
    c.set_dim(2, 1);
    RationalMatrix one(1, 1);
    one.set(0, 0, rat(1));
    c.set_d(1, one);
    c.set_d(2, one);
    CHECK_THROWS_AS(homology_ranks(c), Error);
}

TEST_CASE("tensor unit and contractibility")
{
    testing::Rng rng(4);
    ChainComplex c = testing::random_complex(rng, -1, 2);
    ChainComplex t = tensor(c, ChainComplex::point(0));
    for (int n = c.lo() - 1; n <= c.hi() + 1; ++n)
        CHECK(t.dim(n) == c.dim(n));
    CHECK(homology_ranks(t).ranks == homology_ranks(c).ranks);

    ChainComplex k = tensor(two_term(1, rat(1)), two_term(1, rat(1)));
    CHECK(homology_ranks(k).ranks.empty());
    CHECK(k.total_dim() == 4);
}

TEST_CASE("Koszul sign in the tensor differential")
{
    ChainComplex a = two_term(1, rat(1));
    TensorSpace ts({a, a});
    // degree 2 basis: x1⊗y1; d = x0⊗y1 - x1⊗y0
    REQUIRE(ts.total().dim(2) == 1);
    RationalMatrix d2 = ts.total().d(2);
    std::size_t r01 = ts.index_of({{0, 1}, {0, 0}}, 1);
    std::size_t r10 = ts.index_of({{1, 0}, {0, 0}}, 1);
    CHECK(d2.at(r01, 0) == rat(1));
    CHECK(d2.at(r10, 0) == rat(-1));
    ts.total().validate();
}

TEST_CASE("cone behaviour")
{
    testing::Rng rng(11);
    ChainComplex a = testing::random_complex(rng, 0, 2);

    Cone cid = cone(ChainMap::identity(a));
    CHECK(homology_ranks(cid.complex).ranks.empty());
    cid.include_target.validate();
    cid.project_source_shift.validate();

    ChainComplex b = testing::random_complex(rng, 0, 2);
    Cone c0 = cone(ChainMap::zero_map(a, b));
    BettiTable expect = homology_ranks(direct_sum({b, shift(a, 1)}).total);
    CHECK(homology_ranks(c0.complex).ranks == expect.ranks);

    CHECK(homology_ranks(cone(ChainMap::identity(ChainComplex::point(0)) * rat(2)).complex)
              .ranks.empty());
}

TEST_CASE("quasi-isomorphism checks")
{
    ChainComplex pt = ChainComplex::point(0);
    CHECK(is_quasi_iso(ChainMap::identity(pt)));
    // zero -> cone(id): both acyclic
    ChainComplex acyclic = cone(ChainMap::identity(pt)).complex;
    CHECK(is_quasi_iso(ChainMap::zero_map(ChainComplex::zero(), acyclic)));
    CHECK(!is_quasi_iso(ChainMap::zero_map(pt, ChainComplex::zero())));
}

TEST_CASE("cone acyclic iff quasi-iso, on random maps")
{
    testing::Rng rng(2024);
    int seen_qi = 0, seen_non = 0;
    for (int trial = 0; trial < 25; ++trial) {
        ChainComplex a = testing::random_complex(rng, 0, 2);
        ChainComplex b = (trial % 3 == 0) ? a : testing::random_complex(rng, 0, 2);
        ChainMap f = (trial % 3 == 0) ? ChainMap::identity(a) : testing::random_chain_map(rng, a, b);
        bool qi = is_quasi_iso(f);
        bool acyclic = homology_ranks(cone(f).complex).ranks.empty();
        CHECK(qi == acyclic);
        (qi ? seen_qi : seen_non)++;
    }
    CHECK(seen_qi > 0);
    CHECK(seen_non > 0);
}

TEST_CASE("tensor associativity up to the canonical isomorphism")
{
    testing::Rng rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        ChainComplex a = testing::random_complex(rng, 0, 1);
        ChainComplex b = testing::random_complex(rng, -1, 1);
        ChainComplex c = testing::random_complex(rng, 0, 1);
        ChainComplex left = tensor(tensor(a, b), c);
        ChainComplex right = tensor(a, tensor(b, c));
        CHECK(homology_ranks(left).ranks == homology_ranks(right).ranks);
        if (!left.is_zero()) {
            ChainMap assoc = associator(a, b, c);
            assoc.validate();
            CHECK(is_quasi_iso(assoc));
        }
    }
}

TEST_CASE("braiding is a chain map")
{
    testing::Rng rng(32);
    ChainComplex a = testing::random_complex(rng, 0, 2);
    ChainComplex b = testing::random_complex(rng, -1, 1);
    if (!tensor(a, b).is_zero()) {
        ChainMap br = braiding(a, b);
        br.validate();
        CHECK(is_quasi_iso(br));
    }
}

TEST_CASE("shift moves homology")
{
    testing::Rng rng(5);
    ChainComplex c = testing::random_complex(rng, 0, 2);
    BettiTable h = homology_ranks(c);
    BettiTable hs = homology_ranks(shift(c, 3));
    for (auto& [n, r] : h.ranks)
        CHECK(hs.rank(n + 3) == r);
    shift(c, 1).validate();
}

TEST_CASE("hom complex cycles are chain maps")
{
    testing::Rng rng(6);
    ChainComplex X = testing::random_complex(rng, 0, 2);
    ChainComplex Y = testing::random_complex(rng, 0, 2);
    for (auto& f : chain_map_basis(X, Y))
        f.validate();
    auto maps = chain_map_basis(ChainComplex::point(0), ChainComplex::point(0));
    CHECK(maps.size() == 1);
}

TEST_CASE("quotient and kernel subcomplex")
{
    // quotient of Q^2 (degree 0) by the span of (1,1)
    ChainComplex c;
    c.set_dim(0, 2);
    RationalMatrix span(2, 1);
    span.set(0, 0, rat(1));
    span.set(1, 0, rat(1));
    Quotient q = quotient_by_span(c, {{0, span}});
    CHECK(q.complex.dim(0) == 1);
    CHECK(q.projection.component(0) * q.section.component(0) ==
          RationalMatrix::identity(1));
    CHECK((q.projection.component(0) * span).is_zero());

    // kernel of the projection  Q^2 -> Q  recovers the span
    Subcomplex k = kernel_subcomplex(q.projection);
    CHECK(k.complex.dim(0) == 1);
    CHECK_NOTHROW(solve(span, k.inclusion.component(0)));

    // d-stability violation is rejected
    ChainComplex bad = two_term(1, rat(1));
    RationalMatrix top(1, 1);
    top.set(0, 0, rat(1));
    CHECK_THROWS_AS(quotient_by_span(bad, {{1, top}}), Error);
}

TEST_CASE("sum space projections and inclusions")
{
    testing::Rng rng(7);
    ChainComplex a = testing::random_complex(rng, 0, 1);
    ChainComplex b = testing::random_complex(rng, 0, 2);
    SumSpace s = direct_sum({a, b});
    s.total.validate();
    for (std::size_t part = 0; part < 2; ++part) {
        s.inclusion(part).validate();
        s.projection(part).validate();
        ChainMap round = s.projection(part).compose_after(s.inclusion(part));
        CHECK(round == ChainMap::identity(s.parts[part]));
    }
}
