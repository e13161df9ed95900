#pragma once

#include "monad.hpp"
#include "squarezero.hpp"

namespace dgcat {

/* Iterated composition along a path for a non-unital category (length >= 1). */
inline ChainMap nu_word_eval_map(const NonUnitalDgCategory& x, const std::vector<std::size_t>& path)
{
    std::size_t L = path.size() - 1;
    if (L == 0)
        throw Error("non-unital word evaluation needs length >= 1");
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

namespace detail {

/* Shifts a map landing in one path's word space into the hom of a FreeWords
 * sum (offset bookkeeping). */
inline void add_into_sum(ChainMap& target, const ChainMap& w, const FreeWords& fw,
                         std::size_t pair, std::size_t path_idx, std::size_t col_offset_deg,
                         int deg, std::size_t col)
{
    (void)col_offset_deg;
    const RationalMatrix m = w.component(deg);
    std::size_t roff = fw.sums[pair].offset(path_idx, deg);
    for (const auto& [r, v] : m.column(col))
        target.add_to_component(deg, roff + r, col, v);
}

}  // namespace detail

/* Balanced tensor power M^{⊗_A k}: quotient of the plain length-k word
 * spaces by the junction relations  x·α ⊗ y  −  x ⊗ α·y. */
struct BalancedPower {
    std::size_t k = 0;
    FreeWords plain;              // words of length exactly k on m.graph
    std::vector<Quotient> quots;  // per hom pair
    EnrichedGraph graph;

    const ChainMap& proj(std::size_t i, std::size_t j) const
    {
        return quots[i * graph.n() + j].projection;
    }
    const ChainMap& sect(std::size_t i, std::size_t j) const
    {
        return quots[i * graph.n() + j].section;
    }
};

inline BalancedPower balanced_power(const DgCategory& a, const Bimodule& m, std::size_t k)
{
    if (k == 0)
        throw Error("balanced powers start at k = 1");
    std::size_t n = a.n();
    BalancedPower out;
    out.k = k;
    out.plain = free_words(m.graph, k, k);
    out.graph = EnrichedGraph(a.objects());

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const ChainComplex& plain_ij = out.plain.graph.hom(i, j);
            std::size_t id = out.plain.pair_id(i, j);
            std::map<int, RationalMatrix> span;
            if (!plain_ij.is_zero() && k >= 2) {
                std::vector<std::map<int, std::vector<RationalMatrix>>> pieces;  // per degree cols
                std::map<int, std::vector<RationalMatrix>> cols_by_deg;
                // enumerate: junction t, target-shaped "extended paths": a
                // prefix m-path of t edges ending at u, an A-edge u -> v, a
                // suffix m-path of k-t edges starting at v
                for (std::size_t t = 1; t < k; ++t) {
                    // prefix paths of length t from i, suffix of length k-t to j
                    std::vector<std::vector<std::size_t>> prefixes, suffixes;
                    std::vector<std::vector<std::size_t>> frontier{{i}};
                    for (std::size_t step = 0; step < t; ++step) {
                        std::vector<std::vector<std::size_t>> next;
                        for (auto& p : frontier)
                            for (std::size_t w = 0; w < n; ++w)
                                if (!m.at(p.back(), w).is_zero()) {
                                    auto q = p;
                                    q.push_back(w);
                                    next.push_back(std::move(q));
                                }
                        frontier = std::move(next);
                    }
                    prefixes = frontier;
                    // suffixes built forward from every possible start v
                    for (std::size_t v = 0; v < n; ++v) {
                        std::vector<std::vector<std::size_t>> sfront{{v}};
                        for (std::size_t step = 0; step + t < k; ++step) {
                            std::vector<std::vector<std::size_t>> next;
                            for (auto& p : sfront)
                                for (std::size_t w = 0; w < n; ++w)
                                    if (!m.at(p.back(), w).is_zero()) {
                                        auto q = p;
                                        q.push_back(w);
                                        next.push_back(std::move(q));
                                    }
                            sfront = std::move(next);
                        }
                        for (auto& s : sfront)
                            if (s.back() == j)
                                suffixes.push_back(s);
                    }
                    for (const auto& pre : prefixes)
                        for (const auto& suf : suffixes) {
                            std::size_t u = pre.back(), v = suf.front();
                            if (a.hom(u, v).is_zero())
                                continue;
                            // slots: m-edges of pre, A(u,v), m-edges of suf
                            std::vector<ChainComplex> slots;
                            for (std::size_t s = 0; s + 1 < pre.size(); ++s)
                                slots.push_back(m.at(pre[s], pre[s + 1]));
                            slots.push_back(a.hom(u, v));
                            for (std::size_t s = 0; s + 1 < suf.size(); ++s)
                                slots.push_back(m.at(suf[s], suf[s + 1]));
                            TensorSpace gen(slots);
                            if (gen.total().is_zero())
                                continue;
                            ChainMap rel(gen.total(), plain_ij);
                            // term 1: right action on the last prefix slot
                            {
                                std::vector<std::size_t> tgt_path = pre;
                                tgt_path.back() = v;  // pre with endpoint moved to v
                                std::vector<std::size_t> full = pre;
                                full.pop_back();
                                full.push_back(v);
                                full.insert(full.end(), suf.begin() + 1, suf.end());
                                auto it = out.plain.path_index[id].find(full);
                                if (it != out.plain.path_index[id].end() &&
                                    !m.at(pre[pre.size() - 2], v).is_zero()) {
                                    std::vector<std::size_t> groups;
                                    std::vector<ChainMap> maps;
                                    for (std::size_t s = 0; s + 2 < pre.size(); ++s) {
                                        groups.push_back(1);
                                        maps.push_back(
                                            ChainMap::identity(m.at(pre[s], pre[s + 1])));
                                    }
                                    groups.push_back(2);
                                    maps.push_back(m.r(pre[pre.size() - 2], u, v));
                                    for (std::size_t s = 0; s + 1 < suf.size(); ++s) {
                                        groups.push_back(1);
                                        maps.push_back(
                                            ChainMap::identity(m.at(suf[s], suf[s + 1])));
                                    }
                                    ChainMap w = grouped_map(slots, groups, maps);
                                    for (int d = w.source().lo(); d <= w.source().hi(); ++d) {
                                        const RationalMatrix mm = w.component(d);
                                        std::size_t roff =
                                            out.plain.sums[id].offset(it->second, d);
                                        for (std::size_t c = 0; c < mm.cols(); ++c)
                                            for (const auto& [r, vv] : mm.column(c))
                                                rel.add_to_component(d, roff + r, c, vv);
                                    }
                                }
                            }
                            // term 2: left action on the first suffix slot
                            {
                                std::vector<std::size_t> full = pre;
                                full.push_back(suf.size() >= 2 ? suf[1] : v);
                                full.insert(full.end(), suf.begin() + 2, suf.end());
                                auto it = out.plain.path_index[id].find(full);
                                if (it != out.plain.path_index[id].end() &&
                                    suf.size() >= 2 && !m.at(u, suf[1]).is_zero()) {
                                    std::vector<std::size_t> groups;
                                    std::vector<ChainMap> maps;
                                    for (std::size_t s = 0; s + 1 < pre.size(); ++s) {
                                        groups.push_back(1);
                                        maps.push_back(
                                            ChainMap::identity(m.at(pre[s], pre[s + 1])));
                                    }
                                    groups.push_back(2);
                                    maps.push_back(m.l(u, v, suf[1]));
                                    for (std::size_t s = 1; s + 1 < suf.size(); ++s) {
                                        groups.push_back(1);
                                        maps.push_back(
                                            ChainMap::identity(m.at(suf[s], suf[s + 1])));
                                    }
                                    ChainMap w = grouped_map(slots, groups, maps);
                                    for (int d = w.source().lo(); d <= w.source().hi(); ++d) {
                                        const RationalMatrix mm = w.component(d);
                                        std::size_t roff =
                                            out.plain.sums[id].offset(it->second, d);
                                        for (std::size_t c = 0; c < mm.cols(); ++c)
                                            for (const auto& [r, vv] : mm.column(c))
                                                rel.add_to_component(d, roff + r, c,
                                                                     -vv);
                                    }
                                }
                            }
                            for (int d = gen.total().lo(); d <= gen.total().hi(); ++d) {
                                RationalMatrix mm = rel.component(d);
                                if (!mm.is_zero())
                                    cols_by_deg[d].push_back(std::move(mm));
                            }
                        }
                }
                for (auto& [d, mats] : cols_by_deg) {
                    std::size_t total = 0;
                    for (auto& mm : mats)
                        total += mm.cols();
                    RationalMatrix sp(plain_ij.dim(d), total);
                    std::size_t off = 0;
                    for (auto& mm : mats) {
                        sp.insert_block(0, off, mm);
                        off += mm.cols();
                    }
                    span[d] = std::move(sp);
                }
            }
            out.quots.push_back(quotient_by_span(plain_ij, span));
            out.graph.set_hom(i, j, out.quots.back().complex);
        }
    return out;
}

/* Tower of balanced powers P_1..P_b with the structure maps used by the free
 * algebra and the monadic bar resolution. */
struct BalancedTower {
    DgCategory a;
    Bimodule m;
    std::size_t bound = 0;
    std::vector<BalancedPower> powers;  // powers[k-1] = P_k

    const BalancedPower& P(std::size_t k) const { return powers[k - 1]; }

    /* concatenation P_p(i,u) ⊗ P_q(u,j) -> P_{p+q}(i,j) */
    ChainMap concat(std::size_t p, std::size_t q, std::size_t i, std::size_t u,
                    std::size_t j) const
    {
        const BalancedPower &Pp = P(p), &Pq = P(q), &Pt = P(p + q);
        TensorSpace dom({Pp.graph.hom(i, u), Pq.graph.hom(u, j)});
        ChainMap out(dom.total(), Pt.graph.hom(i, j));
        if (dom.total().is_zero() || Pt.graph.hom(i, j).is_zero())
            return out;
        // σ⊗σ into plain words, concatenate, project
        TensorSpace plain_dom({Pp.plain.graph.hom(i, u), Pq.plain.graph.hom(u, j)});
        ChainMap lift = tensor_map(Pp.sect(i, u), Pq.sect(u, j));
        ChainMap cat(plain_dom.total(), Pt.plain.graph.hom(i, j));
        std::size_t lid = Pp.plain.pair_id(i, u), rid = Pq.plain.pair_id(u, j),
                    tid = Pt.plain.pair_id(i, j);
        for (int deg = plain_dom.total().lo(); deg <= plain_dom.total().hi(); ++deg) {
            const auto& elems = plain_dom.basis(deg);
            for (std::size_t col = 0; col < elems.size(); ++col) {
                const auto& e = elems[col];
                auto [pa, la] = detail::locate_summand(Pp.plain.sums[lid], e.degs[0], e.idxs[0]);
                auto [pb, lb] = detail::locate_summand(Pq.plain.sums[rid], e.degs[1], e.idxs[1]);
                std::vector<std::size_t> path = Pp.plain.paths[lid][pa];
                const auto& pathb = Pq.plain.paths[rid][pb];
                path.insert(path.end(), pathb.begin() + 1, pathb.end());
                auto it = Pt.plain.path_index[tid].find(path);
                if (it == Pt.plain.path_index[tid].end())
                    continue;
                const auto ea = Pp.plain.spaces[lid][pa].basis(e.degs[0])[la];
                const auto eb = Pq.plain.spaces[rid][pb].basis(e.degs[1])[lb];
                TensorSpace::Elem tele;
                tele.degs = ea.degs;
                tele.degs.insert(tele.degs.end(), eb.degs.begin(), eb.degs.end());
                tele.idxs = ea.idxs;
                tele.idxs.insert(tele.idxs.end(), eb.idxs.begin(), eb.idxs.end());
                std::size_t row = Pt.plain.sums[tid].offset(it->second, deg) +
                                  Pt.plain.spaces[tid][it->second].index_of(tele, deg);
                cat.add_to_component(deg, row, col, Rational(1));
            }
        }
        return Pt.proj(i, j).compose_after(cat).compose_after(lift);
    }

    /* left action A(w,i) ⊗ P_k(i,j) -> P_k(w,j) on the first letter */
    ChainMap left_action(std::size_t k, std::size_t w, std::size_t i, std::size_t j) const
    {
        const BalancedPower& Pk = P(k);
        TensorSpace dom({a.hom(w, i), Pk.graph.hom(i, j)});
        ChainMap out(dom.total(), Pk.graph.hom(w, j));
        if (dom.total().is_zero() || Pk.graph.hom(w, j).is_zero())
            return out;
        ChainMap plain = plain_left_action(k, w, i, j);
        return Pk.proj(w, j).compose_after(plain).compose_after(
            tensor_map(ChainMap::identity(a.hom(w, i)), Pk.sect(i, j)));
    }

    ChainMap right_action(std::size_t k, std::size_t i, std::size_t j, std::size_t w) const
    {
        const BalancedPower& Pk = P(k);
        TensorSpace dom({Pk.graph.hom(i, j), a.hom(j, w)});
        ChainMap out(dom.total(), Pk.graph.hom(i, w));
        if (dom.total().is_zero() || Pk.graph.hom(i, w).is_zero())
            return out;
        ChainMap plain = plain_right_action(k, i, j, w);
        return Pk.proj(i, w).compose_after(plain).compose_after(
            tensor_map(Pk.sect(i, j), ChainMap::identity(a.hom(j, w))));
    }

    /* block composition: compose the letters within each block of the
     * composition (b_1,...,b_r) of k through the algebra structure of nu;
     * P_k(i,j) -> P_r(i,j). */
    ChainMap block_compose(const ActionCategory& nu, const std::vector<std::size_t>& blocks,
                           std::size_t i, std::size_t j) const
    {
        std::size_t k = 0;
        for (auto b : blocks)
            k += b;
        std::size_t r = blocks.size();
        const BalancedPower &Pk = P(k), &Pr = P(r);
        ChainMap plain(Pk.plain.graph.hom(i, j), Pr.plain.graph.hom(i, j));
        std::size_t sid = Pk.plain.pair_id(i, j), tid = Pr.plain.pair_id(i, j);
        for (std::size_t p = 0; p < Pk.plain.paths[sid].size(); ++p) {
            const auto& path = Pk.plain.paths[sid][p];
            // block endpoints give the target path
            std::vector<std::size_t> tpath{path[0]};
            std::vector<std::size_t> groups;
            std::vector<ChainMap> maps;
            std::vector<ChainComplex> slots;
            std::size_t pos = 0;
            bool dead = false;
            for (auto b : blocks) {
                std::vector<std::size_t> sub(path.begin() + pos, path.begin() + pos + b + 1);
                pos += b;
                tpath.push_back(sub.back());
                for (std::size_t s = 0; s + 1 < sub.size(); ++s)
                    slots.push_back(m.at(sub[s], sub[s + 1]));
                groups.push_back(b);
                if (nu.at(sub.front(), sub.back()).is_zero() && b >= 2) {
                    // evaluation lands in a zero hom: contributes nothing
                    maps.push_back(ChainMap(TensorSpace(std::vector<ChainComplex>(
                                                slots.end() - b, slots.end()))
                                                .total(),
                                            nu.at(sub.front(), sub.back())));
                }
                else {
                    maps.push_back(b == 1 ? ChainMap::identity(m.at(sub.front(), sub.back()))
                                          : nu_word_eval_map(nu.cat, sub));
                }
            }
            auto it = Pr.plain.path_index[tid].find(tpath);
            if (it == Pr.plain.path_index[tid].end())
                dead = true;
            if (dead)
                continue;
            ChainMap w = grouped_map(slots, groups, maps);
            // w lands in the tensor space of nu-homs along tpath = the plain
            // word space of the target path
            for (int d = w.source().lo(); d <= w.source().hi(); ++d) {
                const RationalMatrix mm = w.component(d);
                std::size_t roff = Pr.plain.sums[tid].offset(it->second, d);
                std::size_t coff = Pk.plain.sums[sid].offset(p, d);
                for (std::size_t c = 0; c < mm.cols(); ++c)
                    for (const auto& [rr, vv] : mm.column(c))
                        plain.add_to_component(d, roff + rr, coff + c, vv);
            }
        }
        return Pr.proj(i, j).compose_after(plain).compose_after(Pk.sect(i, j));
    }

private:
    ChainMap plain_left_action(std::size_t k, std::size_t w, std::size_t i, std::size_t j) const
    {
        const BalancedPower& Pk = P(k);
        TensorSpace dom({a.hom(w, i), Pk.plain.graph.hom(i, j)});
        ChainMap out(dom.total(), Pk.plain.graph.hom(w, j));
        std::size_t sid = Pk.plain.pair_id(i, j), tid = Pk.plain.pair_id(w, j);
        for (int deg = dom.total().lo(); deg <= dom.total().hi(); ++deg) {
            const auto& elems = dom.basis(deg);
            for (std::size_t col = 0; col < elems.size(); ++col) {
                const auto& e = elems[col];
                auto [p, local] = detail::locate_summand(Pk.plain.sums[sid], e.degs[1], e.idxs[1]);
                const auto& path = Pk.plain.paths[sid][p];
                const auto we = Pk.plain.spaces[sid][p].basis(e.degs[1])[local];
                std::vector<std::size_t> tpath = path;
                tpath[0] = w;
                auto it = Pk.plain.path_index[tid].find(tpath);
                if (it == Pk.plain.path_index[tid].end())
                    continue;
                // act on the first letter
                TensorSpace am({a.hom(w, i), m.at(path[0], path[1])});
                std::size_t cc = am.index_of({{e.degs[0], we.degs[0]}, {e.idxs[0], we.idxs[0]}},
                                             e.degs[0] + we.degs[0]);
                const RationalMatrix lm = m.l(w, i, path[1]).component(e.degs[0] + we.degs[0]);
                for (const auto& [rr, vv] : lm.column(cc)) {
                    TensorSpace::Elem t = we;
                    t.degs[0] = e.degs[0] + we.degs[0];
                    t.idxs[0] = rr;
                    std::size_t row = Pk.plain.sums[tid].offset(it->second, deg) +
                                      Pk.plain.spaces[tid][it->second].index_of(t, deg);
                    out.add_to_component(deg, row, col, vv);
                }
            }
        }
        return out;
    }

    ChainMap plain_right_action(std::size_t k, std::size_t i, std::size_t j, std::size_t w) const
    {
        const BalancedPower& Pk = P(k);
        TensorSpace dom({Pk.plain.graph.hom(i, j), a.hom(j, w)});
        ChainMap out(dom.total(), Pk.plain.graph.hom(i, w));
        std::size_t sid = Pk.plain.pair_id(i, j), tid = Pk.plain.pair_id(i, w);
        for (int deg = dom.total().lo(); deg <= dom.total().hi(); ++deg) {
            const auto& elems = dom.basis(deg);
            for (std::size_t col = 0; col < elems.size(); ++col) {
                const auto& e = elems[col];
                auto [p, local] = detail::locate_summand(Pk.plain.sums[sid], e.degs[0], e.idxs[0]);
                const auto& path = Pk.plain.paths[sid][p];
                const auto we = Pk.plain.spaces[sid][p].basis(e.degs[0])[local];
                std::vector<std::size_t> tpath = path;
                tpath.back() = w;
                auto it = Pk.plain.path_index[tid].find(tpath);
                if (it == Pk.plain.path_index[tid].end())
                    continue;
                std::size_t last = path.size() - 2;
                TensorSpace ma({m.at(path[last], path[last + 1]), a.hom(j, w)});
                std::size_t cc = ma.index_of(
                    {{we.degs[last], e.degs[1]}, {we.idxs[last], e.idxs[1]}},
                    we.degs[last] + e.degs[1]);
                const RationalMatrix rm =
                    m.r(path[last], j, w).component(we.degs[last] + e.degs[1]);
                for (const auto& [rr, vv] : rm.column(cc)) {
                    TensorSpace::Elem t = we;
                    t.degs[last] = we.degs[last] + e.degs[1];
                    t.idxs[last] = rr;
                    std::size_t row = Pk.plain.sums[tid].offset(it->second, deg) +
                                      Pk.plain.spaces[tid][it->second].index_of(t, deg);
                    out.add_to_component(deg, row, col, vv);
                }
            }
        }
        return out;
    }
};

inline BalancedTower balanced_tower(const DgCategory& a, const Bimodule& m, std::size_t bound)
{
    BalancedTower t;
    t.a = a;
    t.m = m;
    t.bound = bound;
    for (std::size_t k = 1; k <= bound; ++k)
        t.powers.push_back(balanced_power(a, m, k));
    return t;
}

/* Free non-unital action category on a bimodule: ⊕_{k=1..b} M^{⊗_A k} with
 * concatenation; the Mod-level free monad of the T_nu ⊣ U adjunction. */
struct FreeActionCategory {
    ActionCategory cat;
    BalancedTower tower;
    std::vector<SumSpace> sums;  // per pair, parts k = 1..bound
    std::size_t bound = 0;
};

inline FreeActionCategory free_action_category(const DgCategory& a, const Bimodule& g,
                                               std::size_t bound)
{
    std::size_t n = a.n();
    FreeActionCategory out;
    out.bound = bound;
    out.tower = balanced_tower(a, g, bound);
    out.cat.cat.graph = EnrichedGraph(a.objects());
    out.sums.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<ChainComplex> parts;
            for (std::size_t k = 1; k <= bound; ++k)
                parts.push_back(out.tower.P(k).graph.hom(i, j));
            out.sums[i * n + j] = direct_sum(std::move(parts));
            out.cat.cat.graph.set_hom(i, j, out.sums[i * n + j].total);
        }
    out.cat.cat.compose = detail::zero_compose_table(out.cat.cat.graph);
    out.cat.cat.truncated = true;
    out.cat.cat.word_bound = bound;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t j = 0; j < n; ++j) {
                const SumSpace &sij = out.sums[i * n + u], &sjk = out.sums[u * n + j],
                               &sik = out.sums[i * n + j];
                if (tensor(sij.total, sjk.total).is_zero())
                    continue;
                ChainMap comp(tensor(sij.total, sjk.total), sik.total);
                for (std::size_t p = 1; p <= bound; ++p)
                    for (std::size_t q = 1; q <= bound; ++q) {
                        if (p + q > bound)
                            continue;  // truncation
                        ChainMap c = out.tower.concat(p, q, i, u, j);
                        if (c.is_zero())
                            continue;
                        ChainMap route = sik.inclusion(p + q - 1)
                                             .compose_after(c)
                                             .compose_after(tensor_map(sij.projection(p - 1),
                                                                       sjk.projection(q - 1)));
                        comp = comp + route;
                    }
                out.cat.cat.comp(i, u, j) = std::move(comp);
            }
    out.cat.left = detail::zero_left_table(a.graph, out.cat.cat.graph);
    out.cat.right = detail::zero_right_table(a.graph, out.cat.cat.graph);
    for (std::size_t w = 0; w < n; ++w)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                {
                    const SumSpace& s = out.sums[i * n + j];
                    const SumSpace& t = out.sums[w * n + j];
                    if (!tensor(a.hom(w, i), s.total).is_zero()) {
                        ChainMap act(tensor(a.hom(w, i), s.total), t.total);
                        for (std::size_t k = 1; k <= bound; ++k) {
                            ChainMap la = out.tower.left_action(k, w, i, j);
                            if (la.is_zero())
                                continue;
                            act = act + t.inclusion(k - 1).compose_after(la).compose_after(
                                            tensor_map(ChainMap::identity(a.hom(w, i)),
                                                       s.projection(k - 1)));
                        }
                        out.cat.left[detail::triple_index(n, w, i, j)] = std::move(act);
                    }
                }
                {
                    const SumSpace& s = out.sums[w * n + i];
                    const SumSpace& t = out.sums[w * n + j];
                    if (!tensor(s.total, a.hom(i, j)).is_zero()) {
                        ChainMap act(tensor(s.total, a.hom(i, j)), t.total);
                        for (std::size_t k = 1; k <= bound; ++k) {
                            ChainMap ra = out.tower.right_action(k, w, i, j);
                            if (ra.is_zero())
                                continue;
                            act = act + t.inclusion(k - 1).compose_after(ra).compose_after(
                                            tensor_map(s.projection(k - 1),
                                                       ChainMap::identity(a.hom(i, j))));
                        }
                        out.cat.right[detail::triple_index(n, w, i, j)] = std::move(act);
                    }
                }
            }
    return out;
}

/* T_nu ⊣ U: an action-algebra map F(G) -> N restricts to a bimodule map
 * G -> U(N) on the length-one summand. */
inline GraphMap tnu_transpose(const FreeActionCategory& fg, const ActionCategory& nu,
                              const GraphMap& f)
{
    std::size_t n = fg.cat.cat.n();
    GraphMap out(fg.tower.m.graph, nu.cat.graph);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            // P_1 = plain length-1 words = G itself (no junction relations)
            ChainMap incl = fg.sums[i * n + j].inclusion(0);
            out.at(i, j) = f.at(i, j)
                               .compose_after(incl)
                               .compose_after(fg.tower.P(1).proj(i, j));
        }
    return out;
}

/* Extension of a bimodule map G -> U(N) to an algebra map F(G) -> N by
 * evaluating words through N's composition. */
inline GraphMap tnu_untranspose(const FreeActionCategory& fg, const ActionCategory& nu,
                                const GraphMap& phi)
{
    std::size_t n = fg.cat.cat.n();
    GraphMap out(fg.cat.cat.graph, nu.cat.graph);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            ChainMap f(fg.cat.cat.hom(i, j), nu.at(i, j));
            for (std::size_t k = 1; k <= fg.bound; ++k) {
                const BalancedPower& Pk = fg.tower.P(k);
                if (Pk.graph.hom(i, j).is_zero())
                    continue;
                // plain words: slotwise phi, then iterated composition in nu
                std::size_t id = Pk.plain.pair_id(i, j);
                ChainMap on_plain(Pk.plain.graph.hom(i, j), nu.at(i, j));
                for (std::size_t p = 0; p < Pk.plain.paths[id].size(); ++p) {
                    const auto& path = Pk.plain.paths[id][p];
                    if (nu.at(i, j).is_zero())
                        continue;
                    std::vector<ChainComplex> slots;
                    std::vector<std::size_t> groups;
                    std::vector<ChainMap> maps;
                    for (std::size_t s = 0; s + 1 < path.size(); ++s) {
                        slots.push_back(fg.tower.m.graph.hom(path[s], path[s + 1]));
                        groups.push_back(1);
                        maps.push_back(phi.at(path[s], path[s + 1]));
                    }
                    ChainMap slotwise = grouped_map(slots, groups, maps);
                    ChainMap ev = (path.size() == 2)
                                      ? ChainMap::identity(nu.at(path[0], path[1]))
                                      : nu_word_eval_map(nu.cat, path);
                    ChainMap w = ev.compose_after(slotwise);
                    for (int d = w.source().lo(); d <= w.source().hi(); ++d) {
                        const RationalMatrix mm = w.component(d);
                        std::size_t coff = Pk.plain.sums[id].offset(p, d);
                        for (std::size_t c = 0; c < mm.cols(); ++c)
                            for (const auto& [r, v] : mm.column(c))
                                on_plain.add_to_component(d, r, coff + c, v);
                    }
                }
                ChainMap through = on_plain.compose_after(Pk.sect(i, j));
                f = f + through.compose_after(fg.sums[i * n + j].projection(k - 1));
            }
            out.at(i, j) = std::move(f);
        }
    return out;
}

}  // namespace dgcat
