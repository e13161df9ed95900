#pragma once

#include "category.hpp"

namespace dgcat {

/* Reindexing isomorphism: flat (k+1)-slot word space -> tensor(flat k-slot
 * space, last slot). Coefficient 1 on basis tuples. */
inline ChainMap nest_last(const std::vector<ChainComplex>& slots)
{
    if (slots.empty())
        throw Error("nest_last on empty word");
    std::vector<ChainComplex> head(slots.begin(), slots.end() - 1);
    TensorSpace src(slots);
    TensorSpace headspace(head);
    TensorSpace dst({headspace.total(), slots.back()});
    ChainMap out(src.total(), dst.total());
    for (int n = src.total().lo(); n <= src.total().hi(); ++n) {
        const auto& elems = src.basis(n);
        for (std::size_t col = 0; col < elems.size(); ++col) {
            const auto& e = elems[col];
            TensorSpace::Elem h;
            h.degs.assign(e.degs.begin(), e.degs.end() - 1);
            h.idxs.assign(e.idxs.begin(), e.idxs.end() - 1);
            int hd = n - e.degs.back();
            TensorSpace::Elem t{{hd, e.degs.back()}, {headspace.index_of(h, hd), e.idxs.back()}};
            out.add_to_component(n, dst.index_of(t, n), col, Rational(1));
        }
    }
    return out;
}

/* Iterated composition of a category along an object path: the map from the
 * word space ⊗_s hom(p_s, p_{s+1}) to hom(p_0, p_L). The empty path gives
 * the unit. */
inline ChainMap word_eval_map(const DgCategory& x, const std::vector<std::size_t>& path)
{
    std::size_t L = path.size() - 1;
    if (L == 0) {
        ChainMap f(unit_complex(), x.hom(path[0], path[0]));
        RationalMatrix m(x.hom(path[0], path[0]).dim(0), 1);
        for (const auto& [r, v] : x.unit(path[0]).column(0))
            m.set(r, 0, v);
        f.set_component(0, std::move(m));
        return f;
    }
    std::vector<ChainComplex> slots;
    for (std::size_t s = 0; s < L; ++s)
        slots.push_back(x.hom(path[s], path[s + 1]));
    ChainMap f = ChainMap::identity(slots[0]);
    for (std::size_t s = 1; s < L; ++s) {
        std::vector<ChainComplex> sub(slots.begin(), slots.begin() + s + 1);
        ChainMap nested = nest_last(sub);
        ChainMap step = tensor_map(f, ChainMap::identity(slots[s]));
        f = x.comp(path[0], path[s], path[s + 1]).compose_after(step).compose_after(nested);
    }
    return f;
}

/* ξ : T(UX) -> X, the algebra structure of a category over the free-category
 * monad: evaluate each word by iterated composition. */
inline DgFunctor eval_functor(const FreeCategory& tx, const DgCategory& x)
{
    std::size_t n = x.n();
    DgFunctor f;
    f.source = tx.category;
    f.target = x;
    for (std::size_t i = 0; i < n; ++i)
        f.object_map.push_back(i);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t id = tx.words.pair_id(i, j);
            ChainMap comp(tx.category.hom(i, j), x.hom(i, j));
            for (std::size_t p = 0; p < tx.words.paths[id].size(); ++p) {
                ChainMap ev = word_eval_map(x, tx.words.paths[id][p]);
                // include the summand offset
                for (int d = ev.source().lo(); d <= ev.source().hi(); ++d) {
                    const RationalMatrix m = ev.component(d);
                    std::size_t off = tx.words.sums[id].offset(p, d);
                    for (std::size_t c = 0; c < m.cols(); ++c)
                        for (const auto& [r, v] : m.column(c))
                            comp.add_to_component(d, r, off + c, v);
                }
            }
            f.hom_maps.push_back(std::move(comp));
        }
    return f;
}

/* T applied to a graph map whose source/target free words are given:
 * slotwise application, path by path. Paths whose image summand was
 * truncated away map to zero. */
inline DgFunctor free_on_graph_map(const FreeCategory& src, const FreeCategory& dst,
                                   const GraphMap& phi)
{
    if (src.words.base != phi.source || dst.words.base != phi.target)
        throw Error("free_on_graph_map: free structures do not match the graph map");
    std::size_t n = src.category.n();
    DgFunctor f;
    f.source = src.category;
    f.target = dst.category;
    for (std::size_t i = 0; i < n; ++i)
        f.object_map.push_back(i);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t id = src.words.pair_id(i, j);
            ChainMap comp(src.category.hom(i, j), dst.category.hom(i, j));
            for (std::size_t p = 0; p < src.words.paths[id].size(); ++p) {
                const auto& path = src.words.paths[id][p];
                auto it = dst.words.path_index[id].find(path);
                if (it == dst.words.path_index[id].end())
                    continue;
                std::size_t q = it->second;
                // slotwise phi on the word space
                std::vector<ChainComplex> slots;
                std::vector<std::size_t> groups;
                std::vector<ChainMap> maps;
                for (std::size_t s = 0; s + 1 < path.size(); ++s) {
                    slots.push_back(phi.source.hom(path[s], path[s + 1]));
                    groups.push_back(1);
                    maps.push_back(phi.at(path[s], path[s + 1]));
                }
                ChainMap w = slots.empty()
                                 ? ChainMap::identity(unit_complex())
                                 : grouped_map(slots, groups, maps);
                for (int d = w.source().lo(); d <= w.source().hi(); ++d) {
                    const RationalMatrix m = w.component(d);
                    std::size_t coff = src.words.sums[id].offset(p, d);
                    std::size_t roff = dst.words.sums[id].offset(q, d);
                    for (std::size_t c = 0; c < m.cols(); ++c)
                        for (const auto& [r, v] : m.column(c))
                            comp.add_to_component(d, roff + r, coff + c, v);
                }
            }
            f.hom_maps.push_back(std::move(comp));
        }
    return f;
}

/* μ : T(U T G) -> T G, flattening words of words by concatenation.
 * Flattenings that exceed the inner truncation map to zero. */
inline DgFunctor flatten_functor(const FreeCategory& outer, const FreeCategory& inner)
{
    std::size_t n = inner.category.n();
    DgFunctor f;
    f.source = outer.category;
    f.target = inner.category;
    for (std::size_t i = 0; i < n; ++i)
        f.object_map.push_back(i);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t id = outer.words.pair_id(i, j);
            ChainMap comp(outer.category.hom(i, j), inner.category.hom(i, j));
            for (std::size_t p = 0; p < outer.words.paths[id].size(); ++p) {
                const auto& opath = outer.words.paths[id][p];
                const TensorSpace& ospace = outer.words.spaces[id][p];
                std::size_t coff_base = 0;  // recomputed per degree below
                (void)coff_base;
                for (int deg = ospace.total().lo(); deg <= ospace.total().hi(); ++deg) {
                    const auto& elems = ospace.basis(deg);
                    for (std::size_t col = 0; col < elems.size(); ++col) {
                        const auto& e = elems[col];
                        // decode each outer slot (an inner hom sum) into an
                        // inner path + local element, then concatenate
                        std::vector<std::size_t> flat_path{opath.front()};
                        TensorSpace::Elem t;
                        bool dead = false;
                        for (std::size_t s = 0; s + 1 < opath.size(); ++s) {
                            std::size_t iid = inner.words.pair_id(opath[s], opath[s + 1]);
                            auto [ip, il] = detail::locate_summand(inner.words.sums[iid],
                                                                   e.degs[s], e.idxs[s]);
                            const auto& ipath = inner.words.paths[iid][ip];
                            const auto ie = inner.words.spaces[iid][ip].basis(e.degs[s])[il];
                            flat_path.insert(flat_path.end(), ipath.begin() + 1, ipath.end());
                            t.degs.insert(t.degs.end(), ie.degs.begin(), ie.degs.end());
                            t.idxs.insert(t.idxs.end(), ie.idxs.begin(), ie.idxs.end());
                            if (flat_path.size() > inner.words.max_len + 1) {
                                dead = true;
                                break;
                            }
                        }
                        if (dead)
                            continue;
                        std::size_t tid = inner.words.pair_id(i, j);
                        auto it = inner.words.path_index[tid].find(flat_path);
                        if (it == inner.words.path_index[tid].end())
                            continue;
                        std::size_t row = inner.words.sums[tid].offset(it->second, deg) +
                                          inner.words.spaces[tid][it->second].index_of(t, deg);
                        std::size_t cff = outer.words.sums[id].offset(p, deg);
                        comp.add_to_component(deg, row, cff + col, Rational(1));
                    }
                }
            }
            f.hom_maps.push_back(std::move(comp));
        }
    return f;
}

/* η at the graph level: G -> U T G, inclusion of length-one words. */
inline GraphMap unit_graph_map(const EnrichedGraph& g, const FreeCategory& tg)
{
    GraphMap eta(g, tg.category.graph);
    std::size_t n = g.n();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (g.hom(i, j).is_zero())
                continue;
            std::size_t id = tg.words.pair_id(i, j);
            std::vector<std::size_t> path{i, j};
            auto it = tg.words.path_index[id].find(path);
            if (it == tg.words.path_index[id].end())
                continue;
            ChainMap f(g.hom(i, j), tg.category.hom(i, j));
            for (int d = g.hom(i, j).lo(); d <= g.hom(i, j).hi(); ++d) {
                std::size_t off = tg.words.sums[id].offset(it->second, d);
                for (std::size_t c = 0; c < g.hom(i, j).dim(d); ++c)
                    f.add_to_component(d, off + c, c, rat(1));
            }
            eta.at(i, j) = std::move(f);
        }
    return eta;
}

/* Total generator-letter count of a basis word of T(U T G), i.e. the length
 * of its flattening. */
inline std::size_t flattened_letter_count(const FreeWords& outer, const FreeWords& inner,
                                          std::size_t pair, int degree, std::size_t flat)
{
    auto [p, local] = detail::locate_summand(outer.sums[pair], degree, flat);
    const auto& opath = outer.paths[pair][p];
    const auto e = outer.spaces[pair][p].basis(degree)[local];
    std::size_t letters = 0;
    for (std::size_t s = 0; s + 1 < opath.size(); ++s) {
        std::size_t iid = inner.pair_id(opath[s], opath[s + 1]);
        auto [ip, il] = detail::locate_summand(inner.sums[iid], e.degs[s], e.idxs[s]);
        (void)il;
        letters += inner.paths[iid][ip].size() - 1;
    }
    return letters;
}

/* Verification of the split-coequalizer lemma for the canonical diagram
 * TTX ⇉ TX -> X at a finite word bound. The splitting identities hold on the
 * nose; the fork and the coequalizer comparison are checked on the stage of
 * words whose flattened length stays within the bound (beyond it the
 * truncated μ is not defined, so those relations belong to a later stage of
 * the colimit). */
inline CheckReport verify_split_coequalizer(const DgCategory& X, std::size_t bound)
{
    CheckReport report;
    std::size_t n = X.n();
    FreeCategory TX = free_category(X.graph, bound);
    FreeCategory TTX = free_category(TX.category.graph, bound);
    DgFunctor xi = eval_functor(TX, X);
    DgFunctor mu = flatten_functor(TTX, TX);
    GraphMap xig(TX.category.graph, X.graph);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            xig.at(i, j) = xi.at(i, j);
    DgFunctor Txi = free_on_graph_map(TTX, TX, xig);
    GraphMap etaX = unit_graph_map(X.graph, TX);
    GraphMap etaTX = unit_graph_map(TX.category.graph, TTX);

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (xi.at(i, j).compose_after(etaX.at(i, j)) != ChainMap::identity(X.hom(i, j)))
                report.fail("ξ∘η != id at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            if (mu.at(i, j).compose_after(etaTX.at(i, j)) !=
                ChainMap::identity(TX.category.hom(i, j)))
                report.fail("μ∘η_T != id at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            if (Txi.at(i, j).compose_after(etaTX.at(i, j)) !=
                etaX.at(i, j).compose_after(xi.at(i, j)))
                report.fail("Tξ∘η_T != η∘ξ at (" + std::to_string(i) + "," + std::to_string(j) +
                            ")");
        }

    // content-bounded relation span and fork
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t id = TTX.words.pair_id(i, j);
            const ChainComplex& src = TTX.category.hom(i, j);
            ChainMap rel = mu.at(i, j) - Txi.at(i, j);
            ChainMap fork = xi.at(i, j).compose_after(mu.at(i, j)) -
                            xi.at(i, j).compose_after(Txi.at(i, j));
            std::map<int, RationalMatrix> span;
            for (int d = src.lo(); d <= src.hi(); ++d) {
                if (src.dim(d) == 0)
                    continue;
                RationalMatrix relm = rel.component(d);
                RationalMatrix forkm = fork.component(d);
                RationalMatrix sp(TX.category.hom(i, j).dim(d), src.dim(d));
                for (std::size_t col = 0; col < src.dim(d); ++col) {
                    if (flattened_letter_count(TTX.words, TX.words, id, d, col) > bound)
                        continue;
                    for (std::size_t r = 0; r < forkm.rows(); ++r)
                        if (!is_zero(forkm.at(r, col))) {
                            report.fail("fork ξ∘μ != ξ∘Tξ on a content-bounded word at (" +
                                        std::to_string(i) + "," + std::to_string(j) + ")");
                            break;
                        }
                    for (const auto& [r, v] : relm.column(col))
                        sp.set(r, col, v);
                }
                span[d] = std::move(sp);
            }
            Quotient q = quotient_by_span(TX.category.hom(i, j), span);
            // the coequalizer recovers X: dimensions agree and ξ descends to
            // an isomorphism
            for (int d = std::min(q.complex.lo(), X.hom(i, j).lo());
                 d <= std::max(q.complex.hi(), X.hom(i, j).hi()); ++d)
                if (q.complex.dim(d) != X.hom(i, j).dim(d)) {
                    report.fail("coequalizer dimension mismatch at (" + std::to_string(i) + "," +
                                std::to_string(j) + ") degree " + std::to_string(d));
                    break;
                }
            ChainMap induced = xi.at(i, j).compose_after(q.section);
            for (int d = q.complex.lo(); d <= q.complex.hi(); ++d)
                if (rank(induced.component(d)) != q.complex.dim(d)) {
                    report.fail("induced map to X is not an isomorphism at (" + std::to_string(i) +
                                "," + std::to_string(j) + ")");
                    break;
                }
        }
    return report;
}

}  // namespace dgcat
