#pragma once

#include "category.hpp"

namespace dgcat {

/* A category over a base: total -> base, arbitrary object sets. */
struct CategoryOver {
    DgCategory total, base;
    DgFunctor aug;  // total -> base
};

inline CheckReport check_category_over(const CategoryOver& x) { return check_functor(x.aug); }

/* Red: same objects as the base, hom(a,b) = ⊕ over fiber pairs of the total
 * homs, composition on matching middle objects and zero otherwise. Summand
 * provenance (c,d) is recorded in lex order. */
struct Reduced {
    DgCategory category;
    DgCategory base;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> summands;  // [a*n+b]
    std::vector<SumSpace> sums;                                              // [a*n+b]
    std::vector<std::size_t> object_map;  // of the original augmentation

    std::size_t summand_index(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const
    {
        const auto& list = summands[a * base.n() + b];
        for (std::size_t s = 0; s < list.size(); ++s)
            if (list[s] == std::make_pair(c, d))
                return s;
        throw Error("reduced summand not found");
    }
};

inline Reduced reduce(const CategoryOver& x)
{
    std::size_t nb = x.base.n(), nt = x.total.n();
    Reduced out;
    out.base = x.base;
    out.object_map = x.aug.object_map;
    out.category.graph = EnrichedGraph(x.base.objects());
    out.summands.resize(nb * nb);
    out.sums.resize(nb * nb);
    for (std::size_t a = 0; a < nb; ++a)
        for (std::size_t b = 0; b < nb; ++b) {
            std::vector<ChainComplex> parts;
            for (std::size_t c = 0; c < nt; ++c)
                for (std::size_t d = 0; d < nt; ++d)
                    if (x.aug.object_map[c] == a && x.aug.object_map[d] == b) {
                        out.summands[a * nb + b].push_back({c, d});
                        parts.push_back(x.total.hom(c, d));
                    }
            out.sums[a * nb + b] = direct_sum(std::move(parts));
            out.category.graph.set_hom(a, b, out.sums[a * nb + b].total);
        }
    out.category.compose = detail::zero_compose_table(out.category.graph);
    for (std::size_t a = 0; a < nb; ++a)
        for (std::size_t b = 0; b < nb; ++b)
            for (std::size_t c = 0; c < nb; ++c) {
                const SumSpace &sab = out.sums[a * nb + b], &sbc = out.sums[b * nb + c],
                               &sac = out.sums[a * nb + c];
                if (tensor(sab.total, sbc.total).is_zero())
                    continue;
                ChainMap comp(tensor(sab.total, sbc.total), sac.total);
                const auto &lab = out.summands[a * nb + b], &lbc = out.summands[b * nb + c];
                for (std::size_t s1 = 0; s1 < lab.size(); ++s1)
                    for (std::size_t s2 = 0; s2 < lbc.size(); ++s2) {
                        auto [c1, d1] = lab[s1];
                        auto [c2, d2] = lbc[s2];
                        if (d1 != c2)
                            continue;  // non-composable summands map to zero
                        ChainMap route =
                            sac.inclusion(out.summand_index(a, c, c1, d2))
                                .compose_after(x.total.comp(c1, d1, d2))
                                .compose_after(
                                    tensor_map(sab.projection(s1), sbc.projection(s2)));
                        comp = comp + route;
                    }
                out.category.comp(a, b, c) = std::move(comp);
            }
    for (std::size_t a = 0; a < nb; ++a) {
        RationalMatrix u(out.category.hom(a, a).dim(0), 1);
        const auto& list = out.summands[a * nb + a];
        for (std::size_t s = 0; s < list.size(); ++s) {
            auto [c, d] = list[s];
            if (c != d)
                continue;
            std::size_t off = out.sums[a * nb + a].offset(s, 0);
            for (const auto& [r, v] : x.total.unit(c).column(0))
                u.add_to(off + r, 0, v);
        }
        out.category.units.push_back(std::move(u));
    }
    return out;
}

/* Red on a functor over the base (summandwise). */
inline DgFunctor reduce_map(const Reduced& rb, const Reduced& rc, const DgFunctor& g)
{
    std::size_t nb = rb.base.n();
    DgFunctor out;
    out.source = rb.category;
    out.target = rc.category;
    for (std::size_t a = 0; a < nb; ++a)
        out.object_map.push_back(a);
    for (std::size_t a = 0; a < nb; ++a)
        for (std::size_t b = 0; b < nb; ++b) {
            ChainMap f(rb.category.hom(a, b), rc.category.hom(a, b));
            const auto& list = rb.summands[a * nb + b];
            for (std::size_t s = 0; s < list.size(); ++s) {
                auto [c, d] = list[s];
                std::size_t t = rc.summand_index(a, b, g.object_map[c], g.object_map[d]);
                f = f + rc.sums[a * nb + b]
                            .inclusion(t)
                            .compose_after(g.at(c, d))
                            .compose_after(rb.sums[a * nb + b].projection(s));
            }
            out.hom_maps.push_back(std::move(f));
        }
    return out;
}

/* Red ⊣ ι: a functor Red(B) -> C over the base (identity on objects)
 * corresponds to a functor B -> C over the base, by splitting into summand
 * components. C has the base's object set. */
inline DgFunctor red_transpose(const Reduced& rb, const CategoryOver& b, const DgCategory& c,
                               const DgFunctor& f)
{
    std::size_t nb = rb.base.n(), nt = b.total.n();
    DgFunctor out;
    out.source = b.total;
    out.target = c;
    for (std::size_t i = 0; i < nt; ++i)
        out.object_map.push_back(b.aug.object_map[i]);
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            std::size_t a = b.aug.object_map[i], bb = b.aug.object_map[j];
            std::size_t s = rb.summand_index(a, bb, i, j);
            out.hom_maps.push_back(
                f.at(a, bb).compose_after(rb.sums[a * nb + bb].inclusion(s)));
        }
    return out;
}

inline DgFunctor red_untranspose(const Reduced& rb, const CategoryOver& b, const DgCategory& c,
                                 const DgFunctor& g)
{
    std::size_t nb = rb.base.n(), nt = b.total.n();
    DgFunctor out;
    out.source = rb.category;
    out.target = c;
    for (std::size_t a = 0; a < nb; ++a)
        out.object_map.push_back(a);
    for (std::size_t a = 0; a < nb; ++a)
        for (std::size_t bb = 0; bb < nb; ++bb) {
            ChainMap f(rb.category.hom(a, bb), c.hom(a, bb));
            const auto& list = rb.summands[a * nb + bb];
            for (std::size_t s = 0; s < list.size(); ++s) {
                auto [i, j] = list[s];
                f = f + g.at(i, j).compose_after(rb.sums[a * nb + bb].projection(s));
            }
            out.hom_maps.push_back(std::move(f));
        }
    (void)nt;
    return out;
}

/* Unit of the adjunction: B -> ι Red(B), the summand inclusions. */
inline DgFunctor red_unit(const Reduced& rb, const CategoryOver& b)
{
    return red_transpose(rb, b, rb.category, DgFunctor::identity(rb.category));
}

}  // namespace dgcat
