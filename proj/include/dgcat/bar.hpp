#pragma once

#include "balanced.hpp"
#include "simplicial.hpp"

#include <functional>

namespace dgcat {

/* ------------------------------------------------------------ split data */

/* Complement data of a unit splitting: Ā(i,j) = ker(aug) with inclusion and
 * the complement projection id − section∘aug. */
struct SplitParts {
    std::vector<Subcomplex> bar;     // [i*n+j]
    std::vector<ChainMap> proj;      // A(i,j) -> Ā(i,j)
    std::size_t n = 0;

    const ChainComplex& at(std::size_t i, std::size_t j) const
    {
        return bar[i * n + j].complex;
    }
    const ChainMap& incl(std::size_t i, std::size_t j) const
    {
        return bar[i * n + j].inclusion;
    }
    const ChainMap& pr(std::size_t i, std::size_t j) const { return proj[i * n + j]; }
};

inline SplitParts split_parts(const AugmentedCategory& xa)
{
    SplitParts out;
    out.n = xa.total.n();
    for (std::size_t i = 0; i < out.n; ++i)
        for (std::size_t j = 0; j < out.n; ++j) {
            out.bar.push_back(kernel_subcomplex(xa.aug.at(i, j)));
            ChainMap complement =
                ChainMap::identity(xa.total.hom(i, j)) -
                xa.section.at(i, j).compose_after(xa.aug.at(i, j));
            out.proj.push_back(corestrict(out.bar.back().inclusion, complement));
        }
    return out;
}

/* --------------------------------------------------------- level scaffold */

struct BarLevel {
    std::vector<std::vector<std::size_t>> shapes;  // object tuples
    std::map<std::vector<std::size_t>, std::size_t> shape_index;
    std::vector<TensorSpace> spaces;
    SumSpace sum;

    void add_shape(std::vector<std::size_t> shape, std::vector<ChainComplex> slots)
    {
        TensorSpace sp(std::move(slots));
        if (sp.total().is_zero())
            return;
        shape_index[shape] = shapes.size();
        shapes.push_back(std::move(shape));
        spaces.push_back(std::move(sp));
    }

    void finish()
    {
        std::vector<ChainComplex> parts;
        for (auto& sp : spaces)
            parts.push_back(sp.total());
        sum = direct_sum(std::move(parts));
    }
};

/* Assembles a map of level totals from a per-shape rule. The rule returns
 * (target shape tuple, map on the slot product) or nothing for zero. */
inline ChainMap assemble_level_map(
    const BarLevel& src, const BarLevel& dst,
    const std::function<std::optional<std::pair<std::vector<std::size_t>, ChainMap>>(
        std::size_t)>& rule)
{
    ChainMap out(src.sum.total, dst.sum.total);
    for (std::size_t s = 0; s < src.shapes.size(); ++s) {
        auto r = rule(s);
        if (!r)
            continue;
        auto it = dst.shape_index.find(r->first);
        if (it == dst.shape_index.end())
            continue;
        const ChainMap& f = r->second;
        std::size_t t = it->second;
        for (int d = f.source().lo(); d <= f.source().hi(); ++d) {
            const RationalMatrix m = f.component(d);
            if (m.is_zero())
                continue;
            std::size_t coff = src.sum.offset(s, d);
            std::size_t roff = dst.sum.offset(t, d);
            for (std::size_t c = 0; c < m.cols(); ++c)
                for (const auto& [r2, v] : m.column(c))
                    out.add_to_component(d, roff + r2, coff + c, v);
        }
    }
    return out;
}

/* -------------------------------------------------- slot modules (bar ends) */

/* M(x) with action M(x) ⊗ A(x,y) -> M(y): occupies the first slot of the
 * two-sided bar. */
struct RightSlotModule {
    std::vector<ChainComplex> at;
    std::vector<ChainMap> act;  // [x*n+y]

    const ChainMap& action(std::size_t x, std::size_t y, std::size_t n) const
    {
        return act[x * n + y];
    }
};

/* N(y) with action A(x,y) ⊗ N(y) -> N(x): the last slot. */
struct LeftSlotModule {
    std::vector<ChainComplex> at;
    std::vector<ChainMap> act;  // [x*n+y]

    const ChainMap& action(std::size_t x, std::size_t y, std::size_t n) const
    {
        return act[x * n + y];
    }
};

inline RightSlotModule representable_right(const DgCategory& a, std::size_t obj)
{
    RightSlotModule m;
    for (std::size_t x = 0; x < a.n(); ++x)
        m.at.push_back(a.hom(obj, x));
    for (std::size_t x = 0; x < a.n(); ++x)
        for (std::size_t y = 0; y < a.n(); ++y)
            m.act.push_back(a.comp(obj, x, y));
    return m;
}

inline LeftSlotModule representable_left(const DgCategory& a, std::size_t obj)
{
    LeftSlotModule m;
    for (std::size_t x = 0; x < a.n(); ++x)
        m.at.push_back(a.hom(x, obj));
    for (std::size_t x = 0; x < a.n(); ++x)
        for (std::size_t y = 0; y < a.n(); ++y)
            m.act.push_back(a.comp(x, y, obj));
    return m;
}

inline RightSlotModule right_slot_from_bimodule(const DgCategory& a, const Bimodule& m,
                                                std::size_t fixed_first)
{
    RightSlotModule out;
    for (std::size_t x = 0; x < a.n(); ++x)
        out.at.push_back(m.at(fixed_first, x));
    for (std::size_t x = 0; x < a.n(); ++x)
        for (std::size_t y = 0; y < a.n(); ++y)
            out.act.push_back(m.r(fixed_first, x, y));
    return out;
}

inline LeftSlotModule left_slot_from_bimodule(const DgCategory& a, const Bimodule& m,
                                              std::size_t fixed_second)
{
    LeftSlotModule out;
    for (std::size_t x = 0; x < a.n(); ++x)
        out.at.push_back(m.at(x, fixed_second));
    for (std::size_t x = 0; x < a.n(); ++x)
        for (std::size_t y = 0; y < a.n(); ++y)
            out.act.push_back(m.l(x, y, fixed_second));
    return out;
}

/* ------------------------------------------------------------- cyclic bar */

struct BarResult {
    ChainComplex tot;
    int truncation = 0;
    BettiTable betti() const { return truncated_betti(tot, truncation); }
};

namespace detail {

/* Raw cyclic bar as a truncated simplicial chain complex, with all faces and
 * degeneracies; simplicial identities are asserted by totalize(). Slots of
 * level q at shape (c_0..c_q): A(c_0,c_1), ..., A(c_{q-1},c_q), M(c_q,c_0). */
inline SimplicialChainComplex cyclic_bar_raw(const DgCategory& a, const Bimodule& m, int t)
{
    std::size_t n = a.n();
    std::vector<BarLevel> levels(t + 1);
    for (int q = 0; q <= t; ++q) {
        std::vector<std::vector<std::size_t>> tuples{{}};
        for (int s = 0; s <= q; ++s) {
            std::vector<std::vector<std::size_t>> next;
            for (auto& tu : tuples)
                for (std::size_t c = 0; c < n; ++c) {
                    auto v = tu;
                    v.push_back(c);
                    next.push_back(std::move(v));
                }
            tuples = std::move(next);
        }
        for (auto& tu : tuples) {
            std::vector<ChainComplex> slots;
            for (int s = 0; s < q; ++s)
                slots.push_back(a.hom(tu[s], tu[s + 1]));
            slots.push_back(m.at(tu[q], tu[0]));
            levels[q].add_shape(tu, std::move(slots));
        }
        levels[q].finish();
    }

    auto slot_list = [&](const std::vector<std::size_t>& tu) {
        std::vector<ChainComplex> slots;
        int q = (int)tu.size() - 1;
        for (int s = 0; s < q; ++s)
            slots.push_back(a.hom(tu[s], tu[s + 1]));
        slots.push_back(m.at(tu[q], tu[0]));
        return slots;
    };

    SimplicialChainComplex out;
    out.top = t;
    out.levels.resize(t + 1);
    out.faces.resize(t + 1);
    out.degens.resize(t + 1);
    for (int q = 0; q <= t; ++q)
        out.levels[q] = levels[q].sum.total;

    for (int q = 1; q <= t; ++q) {
        for (int i = 0; i <= q; ++i) {
            out.faces[q].push_back(assemble_level_map(
                levels[q], levels[q - 1],
                [&](std::size_t s) -> std::optional<std::pair<std::vector<std::size_t>, ChainMap>> {
                    const auto& tu = levels[q].shapes[s];
                    std::vector<ChainComplex> slots = slot_list(tu);
                    if (i == 0) {
                        // rotate the first letter to the end, then the right
                        // action of it on the coefficient
                        std::vector<std::size_t> target(tu.begin() + 1, tu.end());
                        ChainMap rot = rotate_first_to_end(slots);
                        std::vector<ChainComplex> rslots(slots.begin() + 1, slots.end());
                        rslots.push_back(slots.front());
                        std::vector<std::size_t> groups(q - 1, 1);
                        groups.push_back(2);
                        std::vector<ChainMap> maps;
                        for (int s2 = 1; s2 < q; ++s2)
                            maps.push_back(ChainMap::identity(a.hom(tu[s2], tu[s2 + 1])));
                        maps.push_back(m.r(tu[q], tu[0], tu[1]));
                        ChainMap merge = grouped_map(rslots, groups, maps);
                        return std::make_pair(target, merge.compose_after(rot));
                    }
                    // d_i merges slots (i-1, i): composition for i<q, the left
                    // action for i=q; the vertex c_i disappears
                    std::vector<std::size_t> target;
                    for (int s2 = 0; s2 <= q; ++s2)
                        if (s2 != i)
                            target.push_back(tu[s2]);
                    std::vector<std::size_t> groups;
                    std::vector<ChainMap> maps;
                    for (int s2 = 0; s2 < i - 1; ++s2) {
                        groups.push_back(1);
                        maps.push_back(ChainMap::identity(a.hom(tu[s2], tu[s2 + 1])));
                    }
                    groups.push_back(2);
                    if (i < q)
                        maps.push_back(a.comp(tu[i - 1], tu[i], tu[i + 1]));
                    else
                        maps.push_back(m.l(tu[q - 1], tu[q], tu[0]));
                    for (int s2 = i + 1; s2 < q; ++s2) {
                        groups.push_back(1);
                        maps.push_back(ChainMap::identity(a.hom(tu[s2], tu[s2 + 1])));
                    }
                    if (i < q) {
                        groups.push_back(1);
                        maps.push_back(ChainMap::identity(m.at(tu[q], tu[0])));
                    }
                    return std::make_pair(target, grouped_map(slots, groups, maps));
                }));
        }
    }
    for (int q = 0; q < t; ++q) {
        for (int j = 0; j <= q; ++j) {
            out.degens[q].push_back(assemble_level_map(
                levels[q], levels[q + 1],
                [&](std::size_t s) -> std::optional<std::pair<std::vector<std::size_t>, ChainMap>> {
                    const auto& tu = levels[q].shapes[s];
                    std::vector<std::size_t> target;
                    for (int s2 = 0; s2 <= q; ++s2) {
                        target.push_back(tu[s2]);
                        if (s2 == j)
                            target.push_back(tu[s2]);
                    }
                    std::vector<ChainComplex> slots = slot_list(tu);
                    return std::make_pair(
                        target, insert_vector_slot(slots, j, a.hom(tu[j], tu[j]), a.unit(tu[j])));
                }));
        }
    }
    return out;
}

}  // namespace detail

/* N^cy(A, M) via the raw simplicial object and linear-algebra normalization.
 * Works for any category; prefer the split variant for speed. */
inline BarResult cyclic_bar(const DgCategory& a, const Bimodule& m, int t)
{
    SimplicialChainComplex s = detail::cyclic_bar_raw(a, m, t);
    BarResult out;
    out.tot = totalize(s);
    out.truncation = t;
    return out;
}

/* Reduced cyclic bar of a split category: levels use the augmentation
 * complement in the A slots (the normalized complex), with the Moore
 * differential Σ(-1)^i d_i and unit components projected away. */
inline BarResult cyclic_bar_split(const AugmentedCategory& xa, const Bimodule& m, int t)
{
    const DgCategory& a = xa.total;
    std::size_t n = a.n();
    SplitParts sp = split_parts(xa);

    std::vector<BarLevel> levels(t + 1);
    for (int q = 0; q <= t; ++q) {
        std::vector<std::vector<std::size_t>> tuples{{}};
        for (int s = 0; s <= q; ++s) {
            std::vector<std::vector<std::size_t>> next;
            for (auto& tu : tuples)
                for (std::size_t c = 0; c < n; ++c) {
                    if (!tu.empty() && s <= q - 0 && tu.size() >= 1) {
                        // prune: previous slot Ā(tu.back(), c) must be nonzero
                    }
                    auto v = tu;
                    v.push_back(c);
                    next.push_back(std::move(v));
                }
            tuples = std::move(next);
        }
        for (auto& tu : tuples) {
            std::vector<ChainComplex> slots;
            bool dead = false;
            for (int s = 0; s < q; ++s) {
                if (sp.at(tu[s], tu[s + 1]).is_zero())
                    dead = true;
                slots.push_back(sp.at(tu[s], tu[s + 1]));
            }
            slots.push_back(m.at(tu[q], tu[0]));
            if (!dead)
                levels[q].add_shape(tu, std::move(slots));
        }
        levels[q].finish();
    }

    std::vector<ChainComplex> level_totals(t + 1);
    std::vector<ChainMap> moore(t + 1);
    for (int q = 0; q <= t; ++q)
        level_totals[q] = levels[q].sum.total;

    for (int q = 1; q <= t; ++q) {
        ChainMap sum(levels[q].sum.total, levels[q - 1].sum.total);
        for (int i = 0; i <= q; ++i) {
            Rational sign((i % 2 == 0) ? 1 : -1);
            ChainMap di = assemble_level_map(
                levels[q], levels[q - 1],
                [&](std::size_t s) -> std::optional<std::pair<std::vector<std::size_t>, ChainMap>> {
                    const auto& tu = levels[q].shapes[s];
                    std::vector<ChainComplex> slots;
                    for (int s2 = 0; s2 < q; ++s2)
                        slots.push_back(sp.at(tu[s2], tu[s2 + 1]));
                    slots.push_back(m.at(tu[q], tu[0]));
                    if (i == 0) {
                        std::vector<std::size_t> target(tu.begin() + 1, tu.end());
                        ChainMap rot = rotate_first_to_end(slots);
                        std::vector<ChainComplex> rslots(slots.begin() + 1, slots.end());
                        rslots.push_back(slots.front());
                        std::vector<std::size_t> groups(q - 1, 1);
                        groups.push_back(2);
                        std::vector<ChainMap> maps;
                        for (int s2 = 1; s2 < q; ++s2)
                            maps.push_back(ChainMap::identity(sp.at(tu[s2], tu[s2 + 1])));
                        // right action restricted to the complement letter
                        ChainMap ract = m.r(tu[q], tu[0], tu[1]).compose_after(tensor_map(
                            ChainMap::identity(m.at(tu[q], tu[0])), sp.incl(tu[0], tu[1])));
                        maps.push_back(ract);
                        ChainMap merge = grouped_map(rslots, groups, maps);
                        return std::make_pair(target, merge.compose_after(rot));
                    }
                    std::vector<std::size_t> target;
                    for (int s2 = 0; s2 <= q; ++s2)
                        if (s2 != i)
                            target.push_back(tu[s2]);
                    std::vector<std::size_t> groups;
                    std::vector<ChainMap> maps;
                    for (int s2 = 0; s2 < i - 1; ++s2) {
                        groups.push_back(1);
                        maps.push_back(ChainMap::identity(sp.at(tu[s2], tu[s2 + 1])));
                    }
                    groups.push_back(2);
                    if (i < q) {
                        // compose two complement letters and project back
                        ChainMap comp = sp.pr(tu[i - 1], tu[i + 1])
                                            .compose_after(a.comp(tu[i - 1], tu[i], tu[i + 1]))
                                            .compose_after(tensor_map(
                                                sp.incl(tu[i - 1], tu[i]),
                                                sp.incl(tu[i], tu[i + 1])));
                        maps.push_back(comp);
                    }
                    else {
                        ChainMap lact = m.l(tu[q - 1], tu[q], tu[0]).compose_after(tensor_map(
                            sp.incl(tu[q - 1], tu[q]), ChainMap::identity(m.at(tu[q], tu[0]))));
                        maps.push_back(lact);
                    }
                    for (int s2 = i + 1; s2 < q; ++s2) {
                        groups.push_back(1);
                        maps.push_back(ChainMap::identity(sp.at(tu[s2], tu[s2 + 1])));
                    }
                    if (i < q) {
                        groups.push_back(1);
                        maps.push_back(ChainMap::identity(m.at(tu[q], tu[0])));
                    }
                    return std::make_pair(target, grouped_map(slots, groups, maps));
                });
            sum = sum + di * sign;
        }
        moore[q] = std::move(sum);
    }

    BarResult out;
    out.tot = detail::total_complex(level_totals, moore);
    out.truncation = t;
    return out;
}

/* --------------------------------------------------------- two-sided bar */

/* B(M, A, N): levels ⊕ M(a_0) ⊗ A(a_0,a_1) ⊗ ... ⊗ A(a_{q-1},a_q) ⊗ N(a_q),
 * d_0 the M action, d_q the N action, inner faces composition. */
inline SimplicialChainComplex two_sided_bar_raw(const DgCategory& a, const RightSlotModule& m,
                                                const LeftSlotModule& nmod, int t)
{
    std::size_t n = a.n();
    std::vector<BarLevel> levels(t + 1);
    for (int q = 0; q <= t; ++q) {
        std::vector<std::vector<std::size_t>> tuples{{}};
        for (int s = 0; s <= q; ++s) {
            std::vector<std::vector<std::size_t>> next;
            for (auto& tu : tuples)
                for (std::size_t c = 0; c < n; ++c) {
                    auto v = tu;
                    v.push_back(c);
                    next.push_back(std::move(v));
                }
            tuples = std::move(next);
        }
        for (auto& tu : tuples) {
            std::vector<ChainComplex> slots;
            slots.push_back(m.at[tu[0]]);
            for (int s = 0; s < q; ++s)
                slots.push_back(a.hom(tu[s], tu[s + 1]));
            slots.push_back(nmod.at[tu[q]]);
            levels[q].add_shape(tu, std::move(slots));
        }
        levels[q].finish();
    }

    auto slot_list = [&](const std::vector<std::size_t>& tu) {
        std::vector<ChainComplex> slots;
        int q = (int)tu.size() - 1;
        slots.push_back(m.at[tu[0]]);
        for (int s = 0; s < q; ++s)
            slots.push_back(a.hom(tu[s], tu[s + 1]));
        slots.push_back(nmod.at[tu[q]]);
        return slots;
    };

    SimplicialChainComplex out;
    out.top = t;
    out.levels.resize(t + 1);
    out.faces.resize(t + 1);
    out.degens.resize(t + 1);
    for (int q = 0; q <= t; ++q)
        out.levels[q] = levels[q].sum.total;

    for (int q = 1; q <= t; ++q)
        for (int i = 0; i <= q; ++i)
            out.faces[q].push_back(assemble_level_map(
                levels[q], levels[q - 1],
                [&](std::size_t s) -> std::optional<std::pair<std::vector<std::size_t>, ChainMap>> {
                    const auto& tu = levels[q].shapes[s];
                    std::vector<ChainComplex> slots = slot_list(tu);
                    std::vector<std::size_t> target;
                    for (int s2 = 0; s2 <= q; ++s2)
                        if (s2 != i)
                            target.push_back(tu[s2]);
                    // slots: [M, w_1..w_q, N]; d_i merges slot pair (i, i+1)
                    std::vector<std::size_t> groups;
                    std::vector<ChainMap> maps;
                    for (int s2 = 0; s2 < i; ++s2) {
                        groups.push_back(1);
                        maps.push_back(ChainMap::identity(slots[s2]));
                    }
                    groups.push_back(2);
                    if (i == 0)
                        maps.push_back(m.action(tu[0], tu[1], n));
                    else if (i == q)
                        maps.push_back(nmod.action(tu[q - 1], tu[q], n));
                    else
                        maps.push_back(a.comp(tu[i - 1], tu[i], tu[i + 1]));
                    for (int s2 = i + 2; s2 <= q + 1; ++s2) {
                        groups.push_back(1);
                        maps.push_back(ChainMap::identity(slots[s2]));
                    }
                    return std::make_pair(target, grouped_map(slots, groups, maps));
                }));
    for (int q = 0; q < t; ++q)
        for (int j = 0; j <= q; ++j)
            out.degens[q].push_back(assemble_level_map(
                levels[q], levels[q + 1],
                [&](std::size_t s) -> std::optional<std::pair<std::vector<std::size_t>, ChainMap>> {
                    const auto& tu = levels[q].shapes[s];
                    std::vector<std::size_t> target;
                    for (int s2 = 0; s2 <= q; ++s2) {
                        target.push_back(tu[s2]);
                        if (s2 == j)
                            target.push_back(tu[s2]);
                    }
                    std::vector<ChainComplex> slots = slot_list(tu);
                    return std::make_pair(target,
                                          insert_vector_slot(slots, j + 1, a.hom(tu[j], tu[j]),
                                                             a.unit(tu[j])));
                }));
    return out;
}

inline BarResult two_sided_bar(const DgCategory& a, const RightSlotModule& m,
                               const LeftSlotModule& nmod, int t)
{
    SimplicialChainComplex s = two_sided_bar_raw(a, m, nmod, t);
    BarResult out;
    out.tot = totalize(s);
    out.truncation = t;
    return out;
}

/* ------------------------------------------------------------------ nerve */

/* The nerve of a split category: level q has the q-fold words of homs, the
 * outer faces collapse the outer letter through the augmentation, the inner
 * faces compose; degeneracies insert units. Requires a splitting so that the
 * collapse is defined. */
struct NerveResult {
    SimplicialChainComplex simplicial;
    ChainComplex tot;
    int truncation = 0;
};

inline NerveResult nerve(const AugmentedCategory& xa, int t)
{
    const DgCategory& a = xa.total;
    std::size_t n = a.n();
    std::vector<BarLevel> levels(t + 1);
    for (int q = 0; q <= t; ++q) {
        // shapes: tuples (c_0..c_q), slots: A(c_0,c_1)..A(c_{q-1},c_q)
        std::vector<std::vector<std::size_t>> tuples{{}};
        for (int s = 0; s <= q; ++s) {
            std::vector<std::vector<std::size_t>> next;
            for (auto& tu : tuples)
                for (std::size_t c = 0; c < n; ++c) {
                    auto v = tu;
                    v.push_back(c);
                    next.push_back(std::move(v));
                }
            tuples = std::move(next);
        }
        for (auto& tu : tuples) {
            std::vector<ChainComplex> slots;
            for (int s = 0; s < q; ++s)
                slots.push_back(a.hom(tu[s], tu[s + 1]));
            levels[q].add_shape(tu, std::move(slots));
        }
        levels[q].finish();
    }

    NerveResult out;
    out.truncation = t;
    out.simplicial.top = t;
    out.simplicial.levels.resize(t + 1);
    out.simplicial.faces.resize(t + 1);
    out.simplicial.degens.resize(t + 1);
    for (int q = 0; q <= t; ++q)
        out.simplicial.levels[q] = levels[q].sum.total;

    for (int q = 1; q <= t; ++q)
        for (int i = 0; i <= q; ++i)
            out.simplicial.faces[q].push_back(assemble_level_map(
                levels[q], levels[q - 1],
                [&](std::size_t s) -> std::optional<std::pair<std::vector<std::size_t>, ChainMap>> {
                    const auto& tu = levels[q].shapes[s];
                    std::vector<ChainComplex> slots;
                    for (int s2 = 0; s2 < q; ++s2)
                        slots.push_back(a.hom(tu[s2], tu[s2 + 1]));
                    std::vector<std::size_t> target;
                    for (int s2 = 0; s2 <= q; ++s2)
                        if (s2 != i)
                            target.push_back(tu[s2]);
                    if (i == 0) {
                        // collapse the first letter through ε (zero unless the
                        // letter is an endomorphism)
                        if (tu[0] != tu[1])
                            return std::nullopt;
                        return std::make_pair(target,
                                              collapse_slot(slots, 0, xa.aug.at(tu[0], tu[1])));
                    }
                    if (i == q) {
                        if (tu[q - 1] != tu[q])
                            return std::nullopt;
                        return std::make_pair(
                            target, collapse_slot(slots, q - 1, xa.aug.at(tu[q - 1], tu[q])));
                    }
                    std::vector<std::size_t> groups;
                    std::vector<ChainMap> maps;
                    for (int s2 = 0; s2 < i - 1; ++s2) {
                        groups.push_back(1);
                        maps.push_back(ChainMap::identity(slots[s2]));
                    }
                    groups.push_back(2);
                    maps.push_back(a.comp(tu[i - 1], tu[i], tu[i + 1]));
                    for (int s2 = i + 1; s2 < q; ++s2) {
                        groups.push_back(1);
                        maps.push_back(ChainMap::identity(slots[s2]));
                    }
                    return std::make_pair(target, grouped_map(slots, groups, maps));
                }));
    for (int q = 0; q < t; ++q)
        for (int j = 0; j <= q; ++j)
            out.simplicial.degens[q].push_back(assemble_level_map(
                levels[q], levels[q + 1],
                [&](std::size_t s) -> std::optional<std::pair<std::vector<std::size_t>, ChainMap>> {
                    const auto& tu = levels[q].shapes[s];
                    std::vector<std::size_t> target;
                    for (int s2 = 0; s2 <= q; ++s2) {
                        target.push_back(tu[s2]);
                        if (s2 == j)
                            target.push_back(tu[s2]);
                    }
                    std::vector<ChainComplex> slots;
                    for (int s2 = 0; s2 < q; ++s2)
                        slots.push_back(a.hom(tu[s2], tu[s2 + 1]));
                    return std::make_pair(target,
                                          insert_vector_slot(slots, j, a.hom(tu[j], tu[j]),
                                                             a.unit(tu[j])));
                }));
    out.tot = totalize(out.simplicial);
    return out;
}

/* --------------------------------------------------- derived indecomposables */

/* Compositions of k (ordered block sizes). */
inline std::vector<std::vector<std::size_t>> compositions(std::size_t k)
{
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    auto rec = [&](auto&& self, std::size_t rest) -> void {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (std::size_t b = 1; b <= rest; ++b) {
            cur.push_back(b);
            self(self, rest - b);
            cur.pop_back();
        }
    };
    rec(rec, k);
    return out;
}

/* Strict chains C_1 ≻ ... ≻ C_q = singletons of k, encoded by the rounds at
 * which each of the k-1 gaps becomes a block boundary (surjections onto
 * {1..q}). The chain is stored coarsest first. */
inline std::vector<std::vector<std::vector<std::size_t>>> strict_chains(std::size_t k, int q)
{
    std::vector<std::vector<std::vector<std::size_t>>> out;
    if (q == 0) {
        if (k == 1)
            out.push_back({});
        return out;
    }
    if (k < (std::size_t)q + 1)
        return out;
    std::size_t gaps = k - 1;
    std::vector<std::size_t> tau(gaps, 1);
    auto emit = [&]() {
        // surjectivity
        std::vector<bool> seen(q + 1, false);
        for (auto v : tau)
            seen[v] = true;
        for (int r = 1; r <= q; ++r)
            if (!seen[r])
                return;
        std::vector<std::vector<std::size_t>> chain;
        for (int r = 1; r <= q; ++r) {
            // composition whose boundaries are gaps with tau <= r
            std::vector<std::size_t> comp;
            std::size_t block = 1;
            for (std::size_t g = 0; g < gaps; ++g) {
                if (tau[g] <= (std::size_t)r) {
                    comp.push_back(block);
                    block = 1;
                }
                else {
                    ++block;
                }
            }
            comp.push_back(block);
            chain.push_back(std::move(comp));
        }
        out.push_back(std::move(chain));
    };
    auto rec = [&](auto&& self, std::size_t g) -> void {
        if (g == gaps) {
            emit();
            return;
        }
        for (int r = 1; r <= q; ++r) {
            tau[g] = r;
            self(self, g + 1);
        }
    };
    rec(rec, 0);
    return out;
}

/* The derived indecomposables Q^L(N) computed by the normalized monadic bar
 * resolution over the Mod-level free monad (balanced tensor powers): level q
 * is ⊕_{k,chains} N^{⊗_A k}, faces drop a chain stage or compose within the
 * innermost blocks. Weight k strands are complete for every retained k, so
 * homology in degrees <= bound - 1 is exact per strand. */
struct DerivedQ {
    Bimodule value;  // complex-valued bimodule: per-pair totalizations + actions
    int truncation = 0;
    std::size_t bound = 0;
    BalancedTower tower;
    // per pair: block lists per level: (k, chain id) with chains per (k,q)
    std::vector<std::vector<ChainComplex>> levels;  // [pair][q]
    std::vector<std::vector<ChainMap>> moore;       // [pair][q]
};

inline DerivedQ derived_q(const DgCategory& a, const ActionCategory& nu, int t,
                          std::optional<std::size_t> bound = {})
{
    std::size_t n = a.n();
    DerivedQ out;
    out.truncation = t;
    auto nil = is_nilpotent(nu.cat.graph);
    std::size_t b = bound ? *bound : (std::size_t)std::max(t, 1);
    if (nil && *nil >= 1 && *nil - 1 < b)
        b = std::max<std::size_t>(*nil - 1, 1);
    out.bound = b;
    out.tower = balanced_tower(a, nu.as_bimodule(), b);

    // chains per (k, q)
    using ChainOfComps = std::vector<std::vector<std::size_t>>;
    std::vector<std::vector<std::vector<ChainOfComps>>> chains(b + 1);
    for (std::size_t k = 1; k <= b; ++k) {
        chains[k].resize(t + 1);
        for (int q = 0; q <= t; ++q)
            chains[k][q] = strict_chains(k, q);
    }

    // block lists per level (shared across pairs): (k, chain index)
    struct Block {
        std::size_t k;
        std::size_t chain;
    };
    std::vector<std::vector<Block>> blocks(t + 1);
    for (int q = 0; q <= t; ++q)
        for (std::size_t k = 1; k <= b; ++k)
            for (std::size_t c = 0; c < chains[k][q].size(); ++c)
                blocks[q].push_back({k, c});

    auto find_block = [&](int q, std::size_t k, const ChainOfComps& chain) -> std::size_t {
        for (std::size_t s = 0; s < blocks[q].size(); ++s)
            if (blocks[q][s].k == k && chains[k][q][blocks[q][s].chain] == chain)
                return s;
        throw Error("derived_q: target chain block not found");
    };

    out.levels.resize(n * n);
    out.moore.resize(n * n);
    out.value.graph = EnrichedGraph(a.objects());

    std::vector<std::vector<SumSpace>> sums(n * n);  // per pair per level
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t pid = i * n + j;
            sums[pid].resize(t + 1);
            out.levels[pid].resize(t + 1);
            out.moore[pid].resize(t + 1);
            for (int q = 0; q <= t; ++q) {
                std::vector<ChainComplex> parts;
                for (const auto& bl : blocks[q])
                    parts.push_back(out.tower.P(bl.k).graph.hom(i, j));
                sums[pid][q] = direct_sum(std::move(parts));
                out.levels[pid][q] = sums[pid][q].total;
            }
            for (int q = 1; q <= t; ++q) {
                ChainMap d(out.levels[pid][q], out.levels[pid][q - 1]);
                for (std::size_t s = 0; s < blocks[q].size(); ++s) {
                    std::size_t k = blocks[q][s].k;
                    const auto& chain = chains[k][q][blocks[q][s].chain];
                    if (out.tower.P(k).graph.hom(i, j).is_zero())
                        continue;
                    // δ_i for 1 <= i <= q-1: drop chain stage i (1-based)
                    for (int fi = 1; fi < q; ++fi) {
                        ChainOfComps target_chain;
                        for (int r = 0; r < q; ++r)
                            if (r != fi - 1)
                                target_chain.push_back(chain[r]);
                        std::size_t tblock = find_block(q - 1, k, target_chain);
                        Rational sign((fi % 2 == 0) ? 1 : -1);
                        ChainMap idm = ChainMap::identity(out.tower.P(k).graph.hom(i, j));
                        ChainMap route = sums[pid][q - 1]
                                             .inclusion(tblock)
                                             .compose_after(idm * sign)
                                             .compose_after(sums[pid][q].projection(s));
                        d = d + route;
                    }
                    // δ_q: compose within the blocks of C_{q-1} (the finest
                    // retained stage above the singletons); for q = 1 the
                    // whole word is one block
                    {
                        std::vector<std::size_t> grouping =
                            (q >= 2) ? chain[q - 2] : std::vector<std::size_t>{k};
                        std::size_t k2 = grouping.size();
                        // target chain: stages 1..q-2 re-indexed by the blocks
                        ChainOfComps target_chain;
                        if (q >= 2) {
                            // prefix sums of the grouping to locate block ends
                            for (int r = 0; r + 2 < q; ++r) {
                                // chain[r] groups leaves; re-express as a
                                // composition of the k2 blocks
                                std::vector<std::size_t> re;
                                std::size_t covered = 0, used = 0, count = 0;
                                std::size_t bi = 0;
                                for (std::size_t part : chain[r]) {
                                    covered += part;
                                    count = 0;
                                    while (used < covered) {
                                        used += grouping[bi++];
                                        ++count;
                                    }
                                    re.push_back(count);
                                }
                                target_chain.push_back(std::move(re));
                            }
                            // the new finest stage: singletons of k2
                            target_chain.push_back(std::vector<std::size_t>(k2, 1));
                        }
                        if (!out.tower.P(k2).graph.hom(i, j).is_zero()) {
                            std::size_t tblock = find_block(q - 1, k2, target_chain);
                            ChainMap psi = out.tower.block_compose(nu, grouping, i, j);
                            Rational sign((q % 2 == 0) ? 1 : -1);
                            ChainMap route = sums[pid][q - 1]
                                                 .inclusion(tblock)
                                                 .compose_after(psi * sign)
                                                 .compose_after(sums[pid][q].projection(s));
                            d = d + route;
                        }
                    }
                }
                out.moore[pid][q] = std::move(d);
            }
            out.value.graph.set_hom(i, j, detail::total_complex(out.levels[pid], out.moore[pid]));
        }

    // actions on the totalizations, levelwise on the first/last letter
    out.value.left = detail::zero_left_table(a.graph, out.value.graph);
    out.value.right = detail::zero_right_table(a.graph, out.value.graph);
    auto tot_offset = [&](std::size_t pid, int q, int deg) {
        std::size_t off = 0;
        for (int p = 0; p < q; ++p)
            off += out.levels[pid][p].dim(deg - p);
        return off;
    };
    for (std::size_t w = 0; w < n; ++w)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                // left: A(w,i) ⊗ Tot(i,j) -> Tot(w,j)
                std::size_t spid = i * n + j, tpid = w * n + j;
                TensorSpace dom({a.hom(w, i), out.value.graph.hom(i, j)});
                if (!dom.total().is_zero() && !out.value.graph.hom(w, j).is_zero()) {
                    ChainMap act(dom.total(), out.value.graph.hom(w, j));
                    std::map<std::pair<std::size_t, int>, ChainMap> block_act;
                    for (int deg = dom.total().lo(); deg <= dom.total().hi(); ++deg) {
                        const auto& elems = dom.basis(deg);
                        for (std::size_t col = 0; col < elems.size(); ++col) {
                            const auto& e = elems[col];
                            // decode the Tot index: level q, then block
                            int tdeg = e.degs[1];
                            std::size_t rest = e.idxs[1];
                            int q = 0;
                            while (true) {
                                std::size_t dq = out.levels[spid][q].dim(tdeg - q);
                                if (rest < dq)
                                    break;
                                rest -= dq;
                                ++q;
                            }
                            auto [bl, local] =
                                detail::locate_summand(sums[spid][q], tdeg - q, rest);
                            std::size_t k = blocks[q][bl].k;
                            auto key = std::make_pair(k, 0);
                            auto ita = block_act.find(key);
                            if (ita == block_act.end())
                                ita = block_act
                                          .emplace(key, out.tower.left_action(k, w, i, j))
                                          .first;
                            const ChainMap& la = ita->second;
                            // column of la at (deg of α ⊗ P_k element)
                            TensorSpace ladom(
                                {a.hom(w, i), out.tower.P(k).graph.hom(i, j)});
                            std::size_t lcol = ladom.index_of(
                                {{e.degs[0], tdeg - q}, {e.idxs[0], local}},
                                e.degs[0] + tdeg - q);
                            const RationalMatrix lm = la.component(e.degs[0] + tdeg - q);
                            std::size_t roff =
                                tot_offset(tpid, q, deg) +
                                sums[tpid][q].offset(bl, e.degs[0] + tdeg - q);
                            for (const auto& [r, v] : lm.column(lcol))
                                act.add_to_component(deg, roff + r, col, v);
                        }
                    }
                    out.value.l(w, i, j) = std::move(act);
                }
                // right: Tot(w,i) ⊗ A(i,j) -> Tot(w,j)
                std::size_t spid2 = w * n + i, tpid2 = w * n + j;
                TensorSpace dom2({out.value.graph.hom(w, i), a.hom(i, j)});
                if (!dom2.total().is_zero() && !out.value.graph.hom(w, j).is_zero()) {
                    ChainMap act(dom2.total(), out.value.graph.hom(w, j));
                    std::map<std::size_t, ChainMap> ract_cache;
                    for (int deg = dom2.total().lo(); deg <= dom2.total().hi(); ++deg) {
                        const auto& elems = dom2.basis(deg);
                        for (std::size_t col = 0; col < elems.size(); ++col) {
                            const auto& e = elems[col];
                            int tdeg = e.degs[0];
                            std::size_t rest = e.idxs[0];
                            int q = 0;
                            while (true) {
                                std::size_t dq = out.levels[spid2][q].dim(tdeg - q);
                                if (rest < dq)
                                    break;
                                rest -= dq;
                                ++q;
                            }
                            auto [bl, local] =
                                detail::locate_summand(sums[spid2][q], tdeg - q, rest);
                            std::size_t k = blocks[q][bl].k;
                            auto itr = ract_cache.find(k);
                            if (itr == ract_cache.end())
                                itr = ract_cache
                                          .emplace(k, out.tower.right_action(k, w, i, j))
                                          .first;
                            const ChainMap& ra = itr->second;
                            TensorSpace radom(
                                {out.tower.P(k).graph.hom(w, i), a.hom(i, j)});
                            std::size_t rcol = radom.index_of(
                                {{tdeg - q, e.degs[1]}, {local, e.idxs[1]}},
                                tdeg - q + e.degs[1]);
                            const RationalMatrix rm = ra.component(tdeg - q + e.degs[1]);
                            std::size_t roff =
                                tot_offset(tpid2, q, deg) +
                                sums[tpid2][q].offset(bl, tdeg - q + e.degs[1]);
                            for (const auto& [r, v] : rm.column(rcol))
                                act.add_to_component(deg, roff + r, col, v);
                        }
                    }
                    out.value.r(w, i, j) = std::move(act);
                }
            }
    return out;
}

}  // namespace dgcat
