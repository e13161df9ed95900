#pragma once

#include <dgcat/balanced.hpp>
#include <dgcat/monad.hpp>
#include <dgcat/reduction.hpp>

namespace dgcat::fixtures {

inline ObjectSet objs(std::size_t n)
{
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i)
        labels.push_back(std::to_string(i));
    return ObjectSet(labels);
}

inline EnrichedGraph a2_quiver()
{
    EnrichedGraph g(objs(2));
    g.set_hom(0, 1, ChainComplex::point(0));
    return g;
}

inline EnrichedGraph a3_quiver()
{
    EnrichedGraph g(objs(3));
    g.set_hom(0, 1, ChainComplex::point(0));
    g.set_hom(1, 2, ChainComplex::point(0));
    return g;
}

inline EnrichedGraph loop_graph()
{
    EnrichedGraph g(ObjectSet({"pt"}));
    g.set_hom(0, 0, ChainComplex::point(0));
    return g;
}

/* Q[e]/e^2 with basis {1, e} in degree 0. */
inline DgCategory dual_numbers()
{
    DgCategory c;
    c.graph = EnrichedGraph(ObjectSet({"pt"}));
    ChainComplex h;
    h.set_dim(0, 2);
    c.graph.set_hom(0, 0, h);
    c.compose = detail::zero_compose_table(c.graph);
    TensorSpace t({h, h});
    RationalMatrix m(2, 4);
    auto ix = [&](std::size_t a, std::size_t b) { return t.index_of({{0, 0}, {a, b}}, 0); };
    m.set(0, ix(0, 0), rat(1));
    m.set(1, ix(0, 1), rat(1));
    m.set(1, ix(1, 0), rat(1));
    c.compose[0].set_component(0, m);
    RationalMatrix u(2, 1);
    u.set(0, 0, rat(1));
    c.units.push_back(u);
    return c;
}

/* Two objects, every hom Q, every composite of basis elements the basis
 * element: both objects strictly isomorphic. */
inline DgCategory codiscrete(std::size_t nobj)
{
    DgCategory c;
    c.graph = EnrichedGraph(objs(nobj));
    for (std::size_t i = 0; i < nobj; ++i)
        for (std::size_t j = 0; j < nobj; ++j)
            c.graph.set_hom(i, j, ChainComplex::point(0));
    c.compose = detail::zero_compose_table(c.graph);
    for (std::size_t i = 0; i < nobj; ++i)
        for (std::size_t j = 0; j < nobj; ++j)
            for (std::size_t k = 0; k < nobj; ++k) {
                RationalMatrix m(1, 1);
                m.set(0, 0, rat(1));
                c.comp(i, j, k).set_component(0, m);
            }
    for (std::size_t i = 0; i < nobj; ++i) {
        RationalMatrix u(1, 1);
        u.set(0, 0, rat(1));
        c.units.push_back(u);
    }
    return c;
}

inline DgCategory free_a2() { return free_category(a2_quiver()).category; }
inline DgCategory free_a3() { return free_category(a3_quiver()).category; }

inline AugmentedCategory split_dual_numbers() { return split_over_units(dual_numbers(), {0}); }

inline AugmentedCategory split_free(const EnrichedGraph& g,
                                    std::optional<std::size_t> bound = {})
{
    FreeCategory f = free_category(g, bound);
    std::vector<std::size_t> unit_idx;
    for (std::size_t i = 0; i < f.category.n(); ++i) {
        std::size_t id = f.words.pair_id(i, i);
        std::vector<std::size_t> trivial{i};
        unit_idx.push_back(
            f.words.sums[id].offset(f.words.path_index[id].at(trivial), 0));
    }
    return split_over_units(f.category, unit_idx);
}

/* Square-zero thickening of a split category by a contractible bimodule at
 * the pair (0,0), acting through the augmentation: quasi-isomorphic to the
 * original but with a genuinely different underlying category. */
inline AugmentedCategory contractible_thickening(const AugmentedCategory& xa)
{
    const DgCategory& a = xa.total;
    std::size_t n = a.n();
    EnrichedGraph g(a.objects());
    ChainComplex cone2;
    cone2.set_dim(0, 1);
    cone2.set_dim(1, 1);
    RationalMatrix d(1, 1);
    d.set(0, 0, rat(1));
    cone2.set_d(1, d);
    g.set_hom(0, 0, cone2);
    Bimodule c;
    c.graph = g;
    c.left = detail::zero_left_table(a.graph, g);
    c.right = detail::zero_right_table(a.graph, g);
    // α·x = ε(α)x and x·α = ε(α)x: only unit components act
    if (!a.hom(0, 0).is_zero()) {
        ChainMap eps = xa.aug.at(0, 0);  // A(0,0) -> Q
        std::vector<ChainComplex> slots1{a.hom(0, 0), cone2};
        c.left[detail::triple_index(n, 0, 0, 0)] = collapse_slot(slots1, 0, eps);
        std::vector<ChainComplex> slots2{cone2, a.hom(0, 0)};
        c.right[detail::triple_index(n, 0, 0, 0)] = collapse_slot(slots2, 1, eps);
    }
    AugmentedCategory out = square_zero_extension(a, c);
    return out;
}

/* Composite splitting: given a over I (inner) and t over a (outer), the
 * splitting of t over I. */
inline AugmentedCategory split_composite(const AugmentedCategory& inner,
                                         const AugmentedCategory& outer)
{
    AugmentedCategory out;
    out.total = outer.total;
    out.base = inner.base;
    out.aug = inner.aug.compose_after(outer.aug);
    out.section = outer.section.compose_after(inner.section);
    return out;
}

}  // namespace dgcat::fixtures
