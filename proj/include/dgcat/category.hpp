#pragma once

#include "graph.hpp"
#include "word_space.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace dgcat {

struct CheckReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    void fail(const std::string& what) { violations.push_back(what); }
    std::string str() const
    {
        std::string s;
        for (auto& v : violations)
            s += v + "\n";
        return s;
    }
};

namespace detail {

inline std::size_t triple_index(std::size_t n, std::size_t i, std::size_t j, std::size_t k)
{
    return (i * n + j) * n + k;
}

}  // namespace detail

/* Category enriched in chain complexes with a fixed object set: an enriched
 * graph with composition chain maps and unit cycles. Composition is written
 * diagrammatically: comp(i,j,k) : hom(i,j) ⊗ hom(j,k) -> hom(i,k). */
struct DgCategory {
    EnrichedGraph graph;
    std::vector<ChainMap> compose;      // [(i*n+j)*n+k]
    std::vector<RationalMatrix> units;  // column in hom(i,i) degree 0
    bool truncated = false;             // free construction was cut at word_bound
    std::size_t word_bound = 0;

    std::size_t n() const { return graph.n(); }
    const ObjectSet& objects() const { return graph.objects(); }
    const ChainComplex& hom(std::size_t i, std::size_t j) const { return graph.hom(i, j); }
    const ChainMap& comp(std::size_t i, std::size_t j, std::size_t k) const
    {
        return compose[detail::triple_index(n(), i, j, k)];
    }
    ChainMap& comp(std::size_t i, std::size_t j, std::size_t k)
    {
        return compose[detail::triple_index(n(), i, j, k)];
    }
    const RationalMatrix& unit(std::size_t i) const { return units[i]; }
};

struct NonUnitalDgCategory {
    EnrichedGraph graph;
    std::vector<ChainMap> compose;
    bool truncated = false;
    std::size_t word_bound = 0;

    std::size_t n() const { return graph.n(); }
    const ObjectSet& objects() const { return graph.objects(); }
    const ChainComplex& hom(std::size_t i, std::size_t j) const { return graph.hom(i, j); }
    const ChainMap& comp(std::size_t i, std::size_t j, std::size_t k) const
    {
        return compose[detail::triple_index(n(), i, j, k)];
    }
    ChainMap& comp(std::size_t i, std::size_t j, std::size_t k)
    {
        return compose[detail::triple_index(n(), i, j, k)];
    }
};

namespace detail {

inline std::vector<ChainMap> zero_compose_table(const EnrichedGraph& g)
{
    std::size_t n = g.n();
    std::vector<ChainMap> table;
    table.reserve(n * n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                table.emplace_back(tensor(g.hom(i, j), g.hom(j, k)), g.hom(i, k));
    return table;
}

}  // namespace detail

inline DgCategory unit_category(const ObjectSet& objects)
{
    DgCategory c;
    c.graph = unit_graph(objects);
    c.compose = detail::zero_compose_table(c.graph);
    for (std::size_t i = 0; i < c.n(); ++i) {
        ChainMap& m = c.comp(i, i, i);
        RationalMatrix one(1, 1);
        one.set(0, 0, rat(1));
        m.set_component(0, one);
        RationalMatrix u(1, 1);
        u.set(0, 0, rat(1));
        c.units.push_back(u);
    }
    return c;
}

/* hom(i,j) -> tensor(hom(i,i), hom(i,j)), x |-> u ⊗ x. */
inline ChainMap left_unit_insertion(const DgCategory& a, std::size_t i, std::size_t j)
{
    std::vector<ChainComplex> slots{a.hom(i, j)};
    return insert_vector_slot(slots, 0, a.hom(i, i), a.unit(i));
}

inline ChainMap right_unit_insertion(const DgCategory& a, std::size_t i, std::size_t j)
{
    std::vector<ChainComplex> slots{a.hom(i, j)};
    return insert_vector_slot(slots, 1, a.hom(j, j), a.unit(j));
}

namespace detail {

template <typename Cat>
inline void check_associativity(const Cat& c, CheckReport& report)
{
    std::size_t n = c.n();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                try {
                    c.comp(i, j, k).validate();
                }
                catch (const Error& e) {
                    report.fail("compose(" + std::to_string(i) + "," + std::to_string(j) + "," +
                                std::to_string(k) + ") is not a chain map: " + e.what());
                }
                for (std::size_t l = 0; l < n; ++l) {
                    const ChainComplex &hij = c.hom(i, j), &hjk = c.hom(j, k), &hkl = c.hom(k, l);
                    if (tensor(tensor(hij, hjk), hkl).is_zero())
                        continue;
                    ChainMap route1 = c.comp(i, k, l).compose_after(
                        tensor_map(c.comp(i, j, k), ChainMap::identity(hkl)));
                    ChainMap route2 = c.comp(i, j, l)
                                          .compose_after(tensor_map(ChainMap::identity(hij),
                                                                    c.comp(j, k, l)))
                                          .compose_after(associator(hij, hjk, hkl));
                    if (route1 != route2)
                        report.fail("associativity fails on triple (" + std::to_string(i) + "," +
                                    std::to_string(j) + "," + std::to_string(k) + "," +
                                    std::to_string(l) + ")");
                }
            }
}

}  // namespace detail

/* Verifies associativity on all object triples, the chain-map property of
 * composition and (unital case) the unit laws. Report-valued. */
inline CheckReport check_category_axioms(const DgCategory& c)
{
    CheckReport report;
    detail::check_associativity(c, report);
    for (std::size_t i = 0; i < c.n(); ++i) {
        if (c.unit(i).rows() != c.hom(i, i).dim(0) || c.unit(i).cols() != 1) {
            report.fail("unit vector shape mismatch at object " + std::to_string(i));
            continue;
        }
        if (!(c.hom(i, i).d(0) * c.unit(i)).is_zero())
            report.fail("unit at object " + std::to_string(i) + " is not a cycle");
        for (std::size_t j = 0; j < c.n(); ++j) {
            if (!c.hom(i, j).is_zero()) {
                ChainMap left = c.comp(i, i, j).compose_after(left_unit_insertion(c, i, j));
                if (left != ChainMap::identity(c.hom(i, j)))
                    report.fail("left unit law fails on hom(" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
            }
            if (!c.hom(j, i).is_zero()) {
                ChainMap right = c.comp(j, i, i).compose_after(right_unit_insertion(c, j, i));
                if (right != ChainMap::identity(c.hom(j, i)))
                    report.fail("right unit law fails on hom(" + std::to_string(j) + "," +
                                std::to_string(i) + ")");
            }
        }
    }
    return report;
}

inline CheckReport check_category_axioms(const NonUnitalDgCategory& c)
{
    CheckReport report;
    detail::check_associativity(c, report);
    return report;
}

/* ------------------------------------------------------- free categories */

/* Word bookkeeping for free categories: for each hom pair the summands are
 * object paths ordered by (length, lexicographic), each carrying the tensor
 * space of its edge homs. Composition is concatenation by index bookkeeping. */
struct FreeWords {
    EnrichedGraph base;  // the generating graph
    std::size_t min_len = 0, max_len = 0;
    EnrichedGraph graph;
    std::vector<std::vector<std::vector<std::size_t>>> paths;      // [pair][p] -> o_0..o_L
    std::vector<std::vector<TensorSpace>> spaces;                  // [pair][p]
    std::vector<SumSpace> sums;                                    // [pair]
    std::vector<std::map<std::vector<std::size_t>, std::size_t>> path_index;  // [pair]

    std::size_t pair_id(std::size_t i, std::size_t j) const { return i * base.n() + j; }
};

inline FreeWords free_words(const EnrichedGraph& g, std::size_t min_len, std::size_t max_len)
{
    std::size_t n = g.n();
    FreeWords fw;
    fw.base = g;
    fw.min_len = min_len;
    fw.max_len = max_len;
    fw.paths.resize(n * n);
    fw.spaces.resize(n * n);
    fw.sums.resize(n * n);
    fw.path_index.resize(n * n);
    fw.graph = EnrichedGraph(g.objects());

    // enumerate paths by (length, lex)
    std::vector<std::vector<std::size_t>> frontier;
    for (std::size_t i = 0; i < n; ++i)
        frontier.push_back({i});
    for (std::size_t len = 0; len <= max_len; ++len) {
        if (len >= min_len)
            for (const auto& p : frontier) {
                std::size_t id = fw.pair_id(p.front(), p.back());
                fw.path_index[id][p] = fw.paths[id].size();
                fw.paths[id].push_back(p);
                std::vector<ChainComplex> slots;
                for (std::size_t s = 0; s + 1 < p.size(); ++s)
                    slots.push_back(g.hom(p[s], p[s + 1]));
                fw.spaces[id].emplace_back(std::move(slots));
            }
        if (len == max_len)
            break;
        std::vector<std::vector<std::size_t>> next;
        for (const auto& p : frontier)
            for (std::size_t k = 0; k < n; ++k)
                if (!g.hom(p.back(), k).is_zero()) {
                    auto q = p;
                    q.push_back(k);
                    next.push_back(std::move(q));
                }
        frontier = std::move(next);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t id = fw.pair_id(i, j);
            std::vector<ChainComplex> parts;
            for (auto& sp : fw.spaces[id])
                parts.push_back(sp.total());
            fw.sums[id] = direct_sum(std::move(parts));
            fw.graph.set_hom(i, j, fw.sums[id].total);
        }
    return fw;
}

namespace detail {

/* Concatenation composition table over a FreeWords structure; words whose
 * concatenated path is not retained map to zero (the truncation). */
inline std::vector<ChainMap> concat_compose(const FreeWords& fw)
{
    std::size_t n = fw.graph.n();
    std::vector<ChainMap> table = zero_compose_table(fw.graph);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const ChainComplex &hij = fw.graph.hom(i, j), &hjk = fw.graph.hom(j, k);
                if (hij.is_zero() || hjk.is_zero())
                    continue;
                ChainMap& out = table[triple_index(n, i, j, k)];
                TensorSpace dom({hij, hjk});
                std::size_t left_id = fw.pair_id(i, j), right_id = fw.pair_id(j, k),
                            tgt_id = fw.pair_id(i, k);
                for (int deg = dom.total().lo(); deg <= dom.total().hi(); ++deg) {
                    const auto& elems = dom.basis(deg);
                    for (std::size_t col = 0; col < elems.size(); ++col) {
                        const auto& e = elems[col];
                        auto [pa, la] = locate_summand(fw.sums[left_id], e.degs[0], e.idxs[0]);
                        auto [pb, lb] = locate_summand(fw.sums[right_id], e.degs[1], e.idxs[1]);
                        std::vector<std::size_t> path = fw.paths[left_id][pa];
                        const auto& pathb = fw.paths[right_id][pb];
                        path.insert(path.end(), pathb.begin() + 1, pathb.end());
                        auto it = fw.path_index[tgt_id].find(path);
                        if (it == fw.path_index[tgt_id].end())
                            continue;  // truncated away
                        const auto ea = fw.spaces[left_id][pa].basis(e.degs[0])[la];
                        const auto eb = fw.spaces[right_id][pb].basis(e.degs[1])[lb];
                        TensorSpace::Elem t;
                        t.degs = ea.degs;
                        t.degs.insert(t.degs.end(), eb.degs.begin(), eb.degs.end());
                        t.idxs = ea.idxs;
                        t.idxs.insert(t.idxs.end(), eb.idxs.begin(), eb.idxs.end());
                        std::size_t row = fw.sums[tgt_id].offset(it->second, deg) +
                                          fw.spaces[tgt_id][it->second].index_of(t, deg);
                        out.add_to_component(deg, row, col, Rational(1));
                    }
                }
            }
    return table;
}

inline std::size_t resolve_word_length(const EnrichedGraph& g,
                                       std::optional<std::size_t> bound, bool& truncated,
                                       bool nonunital)
{
    auto nil = is_nilpotent(g);
    if (nil) {
        std::size_t exact_len = *nil == 0 ? 0 : *nil - 1;
        if (!bound || *bound >= exact_len) {
            truncated = false;
            return exact_len;
        }
        truncated = true;
        return *bound;
    }
    if (!bound)
        throw Error(std::string("free ") + (nonunital ? "non-unital " : "") +
                    "category on a non-nilpotent graph requires a word-length bound");
    truncated = true;
    return *bound;
}

}  // namespace detail

struct FreeCategory {
    DgCategory category;
    FreeWords words;
};

struct FreeNonUnital {
    NonUnitalDgCategory category;
    FreeWords words;
};

/* TG = ⊕_{n>=0} G^{⊗n}; exact when G is nilpotent, truncated at `bound`
 * otherwise (the result then is the quotient by words longer than the
 * bound, and is flagged). */
inline FreeCategory free_category(const EnrichedGraph& g, std::optional<std::size_t> bound = {})
{
    bool truncated = false;
    std::size_t maxlen = detail::resolve_word_length(g, bound, truncated, false);
    FreeCategory out;
    out.words = free_words(g, 0, maxlen);
    out.category.graph = out.words.graph;
    out.category.compose = detail::concat_compose(out.words);
    out.category.truncated = truncated;
    out.category.word_bound = maxlen;
    for (std::size_t i = 0; i < g.n(); ++i) {
        // unit = the empty word at object i (always the first summand)
        std::size_t id = out.words.pair_id(i, i);
        RationalMatrix u(out.category.hom(i, i).dim(0), 1);
        std::vector<std::size_t> trivial{i};
        std::size_t p = out.words.path_index[id].at(trivial);
        u.set(out.words.sums[id].offset(p, 0), 0, rat(1));
        out.category.units.push_back(std::move(u));
    }
    return out;
}

/* T_nu G = ⊕_{n>=1} G^{⊗n}. */
inline FreeNonUnital free_nonunital(const EnrichedGraph& g, std::optional<std::size_t> bound = {})
{
    bool truncated = false;
    std::size_t maxlen = detail::resolve_word_length(g, bound, truncated, true);
    if (maxlen == 0)
        maxlen = 1;  // only empty content either way
    FreeNonUnital out;
    out.words = free_words(g, 1, maxlen);
    out.category.graph = out.words.graph;
    out.category.compose = detail::concat_compose(out.words);
    out.category.truncated = truncated;
    out.category.word_bound = maxlen;
    return out;
}

/* -------------------------------------------------------------- functors */

struct DgFunctor {
    DgCategory source, target;
    std::vector<std::size_t> object_map;
    std::vector<ChainMap> hom_maps;  // [i*n+j]: hom(i,j) -> hom(Fi, Fj)

    const ChainMap& at(std::size_t i, std::size_t j) const
    {
        return hom_maps[i * source.n() + j];
    }
    ChainMap& at(std::size_t i, std::size_t j) { return hom_maps[i * source.n() + j]; }

    static DgFunctor identity(const DgCategory& c)
    {
        DgFunctor f;
        f.source = c;
        f.target = c;
        for (std::size_t i = 0; i < c.n(); ++i)
            f.object_map.push_back(i);
        for (std::size_t i = 0; i < c.n(); ++i)
            for (std::size_t j = 0; j < c.n(); ++j)
                f.hom_maps.push_back(ChainMap::identity(c.hom(i, j)));
        return f;
    }

    DgFunctor compose_after(const DgFunctor& g) const  // (*this) ∘ g
    {
        DgFunctor out;
        out.source = g.source;
        out.target = target;
        for (std::size_t i = 0; i < g.source.n(); ++i)
            out.object_map.push_back(object_map[g.object_map[i]]);
        for (std::size_t i = 0; i < g.source.n(); ++i)
            for (std::size_t j = 0; j < g.source.n(); ++j)
                out.hom_maps.push_back(
                    at(g.object_map[i], g.object_map[j]).compose_after(g.at(i, j)));
        return out;
    }
};

/* Functoriality: chain-map components, composition preservation, units.
 * With require_units = false this checks a semifunctor (used for the
 * reduction adjunction, whose unit map is not unit-preserving on fibers
 * with more than one point). */
inline CheckReport check_functor(const DgFunctor& f, bool require_units = true)
{
    CheckReport report;
    std::size_t n = f.source.n();
    if (f.object_map.size() != n || f.hom_maps.size() != n * n) {
        report.fail("functor data has wrong arity");
        return report;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            try {
                f.at(i, j).validate();
            }
            catch (const Error& e) {
                report.fail("functor component (" + std::to_string(i) + "," + std::to_string(j) +
                            ") is not a chain map: " + e.what());
            }
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (tensor(f.source.hom(i, j), f.source.hom(j, k)).is_zero())
                    continue;
                std::size_t fi = f.object_map[i], fj = f.object_map[j], fk = f.object_map[k];
                ChainMap lhs = f.at(i, k).compose_after(f.source.comp(i, j, k));
                ChainMap rhs =
                    f.target.comp(fi, fj, fk).compose_after(tensor_map(f.at(i, j), f.at(j, k)));
                if (lhs != rhs)
                    report.fail("functor does not preserve composition on (" + std::to_string(i) +
                                "," + std::to_string(j) + "," + std::to_string(k) + ")");
            }
    if (require_units)
        for (std::size_t i = 0; i < n; ++i) {
            RationalMatrix fu = f.at(i, i).component(0) * f.source.unit(i);
            if (fu != f.target.unit(f.object_map[i]))
                report.fail("functor does not preserve the unit at object " + std::to_string(i));
        }
    return report;
}

/* ------------------------------------------------------- op and smash */

inline DgCategory op_category(const DgCategory& a)
{
    std::size_t n = a.n();
    DgCategory out;
    out.graph = EnrichedGraph(a.objects());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out.graph.set_hom(i, j, a.hom(j, i));
    out.compose = detail::zero_compose_table(out.graph);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                // A^op(i,j)⊗A^op(j,k) = A(j,i)⊗A(k,j) --τ--> A(k,j)⊗A(j,i) --comp--> A(k,i)
                if (tensor(a.hom(j, i), a.hom(k, j)).is_zero())
                    continue;
                out.comp(i, j, k) =
                    a.comp(k, j, i).compose_after(braiding(a.hom(j, i), a.hom(k, j)));
            }
    out.units = a.units;
    out.truncated = a.truncated;
    out.word_bound = a.word_bound;
    return out;
}

/* (A∧B)((a,b),(a',b')) = A(a,a') ⊗ B(b,b'), with the Koszul interchange sign
 * in the composition. Objects are ordered pairs, b fastest. */
inline DgCategory category_smash(const DgCategory& a, const DgCategory& b)
{
    std::size_t na = a.n(), nb = b.n();
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t p = 0; p < nb; ++p)
            labels.push_back("(" + a.objects().labels[i] + "," + b.objects().labels[p] + ")");
    DgCategory out;
    out.graph = EnrichedGraph(ObjectSet(labels));
    auto obj = [&](std::size_t i, std::size_t p) { return i * nb + p; };
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t p = 0; p < nb; ++p)
            for (std::size_t j = 0; j < na; ++j)
                for (std::size_t q = 0; q < nb; ++q)
                    out.graph.set_hom(obj(i, p), obj(j, q), tensor(a.hom(i, j), b.hom(p, q)));
    out.compose = detail::zero_compose_table(out.graph);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t p = 0; p < nb; ++p)
            for (std::size_t j = 0; j < na; ++j)
                for (std::size_t q = 0; q < nb; ++q)
                    for (std::size_t k = 0; k < na; ++k)
                        for (std::size_t r = 0; r < nb; ++r) {
                            TensorSpace xy({a.hom(i, j), b.hom(p, q)});
                            TensorSpace yz({a.hom(j, k), b.hom(q, r)});
                            TensorSpace dom({xy.total(), yz.total()});
                            if (dom.total().is_zero())
                                continue;
                            TensorSpace ta({a.hom(i, j), a.hom(j, k)});
                            TensorSpace tb({b.hom(p, q), b.hom(q, r)});
                            TensorSpace tgt({a.hom(i, k), b.hom(p, r)});
                            const ChainMap& ca = a.comp(i, j, k);
                            const ChainMap& cb = b.comp(p, q, r);
                            ChainMap m(dom.total(), tgt.total());
                            for (int deg = dom.total().lo(); deg <= dom.total().hi(); ++deg) {
                                const auto& elems = dom.basis(deg);
                                for (std::size_t col = 0; col < elems.size(); ++col) {
                                    const auto& e = elems[col];
                                    const auto fst = xy.basis(e.degs[0])[e.idxs[0]];
                                    const auto snd = yz.basis(e.degs[1])[e.idxs[1]];
                                    // (α⊗β)⊗(α'⊗β') -> (-1)^{|β||α'|}(αα')⊗(ββ')
                                    int sgn_deg = fst.degs[1] * snd.degs[0];
                                    Rational sign((sgn_deg % 2 == 0) ? 1 : -1);
                                    int da = fst.degs[0] + snd.degs[0];
                                    int db = fst.degs[1] + snd.degs[1];
                                    std::size_t col_a = ta.index_of(
                                        {{fst.degs[0], snd.degs[0]}, {fst.idxs[0], snd.idxs[0]}},
                                        da);
                                    std::size_t col_b = tb.index_of(
                                        {{fst.degs[1], snd.degs[1]}, {fst.idxs[1], snd.idxs[1]}},
                                        db);
                                    const RationalMatrix ma = ca.component(da);
                                    const RationalMatrix mb = cb.component(db);
                                    for (const auto& [ra, va] : ma.column(col_a))
                                        for (const auto& [rb, vb] : mb.column(col_b)) {
                                            TensorSpace::Elem t{{da, db}, {ra, rb}};
                                            m.add_to_component(deg, tgt.index_of(t, deg), col,
                                                               sign * va * vb);
                                        }
                                }
                            }
                            out.comp(obj(i, p), obj(j, q), obj(k, r)) = std::move(m);
                        }
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t p = 0; p < nb; ++p) {
            TensorSpace tgt({a.hom(i, i), b.hom(p, p)});
            RationalMatrix u(tgt.total().dim(0), 1);
            for (const auto& [ra, va] : a.unit(i).column(0))
                for (const auto& [rb, vb] : b.unit(p).column(0))
                    u.add_to(tgt.index_of({{0, 0}, {ra, rb}}, 0), 0, va * vb);
            out.units.push_back(std::move(u));
        }
    return out;
}

/* ------------------------------------------------ reflexive coequalizers */

struct CoequalizerResult {
    DgCategory category;
    DgFunctor projection;  // target of the pair -> coequalizer
};

/* Coequalizer of a reflexive pair of identity-on-objects algebra maps,
 * computed pointwise as the quotient by im(f - g); composition descends
 * because the pair is reflexive. */
inline CoequalizerResult coequalizer_algebra(const DgFunctor& f, const DgFunctor& g,
                                             const DgFunctor& section)
{
    std::size_t n = f.source.n();
    if (g.source.n() != n || f.target.n() != g.target.n())
        throw Error("coequalizer: mismatched pair");
    for (std::size_t i = 0; i < n; ++i)
        if (f.object_map[i] != i || g.object_map[i] != i)
            throw Error("coequalizer: pair must be identity on objects");
    // reflexivity: f∘s = g∘s = id on the codomain
    DgFunctor fs = f.compose_after(section), gs = g.compose_after(section);
    DgFunctor idT = DgFunctor::identity(f.target);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (fs.at(i, j) != idT.at(i, j) || gs.at(i, j) != idT.at(i, j))
                throw Error("coequalizer: pair is not reflexive (no common section)");

    const DgCategory& B = f.target;
    std::vector<Quotient> quots;
    EnrichedGraph qgraph(B.objects());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            ChainMap diff = f.at(i, j) - g.at(i, j);
            std::map<int, RationalMatrix> span;
            for (int d = diff.source().lo(); d <= diff.source().hi(); ++d) {
                RationalMatrix m = diff.component(d);
                if (!m.is_zero())
                    span[d] = std::move(m);
            }
            quots.push_back(quotient_by_span(B.hom(i, j), span));
            qgraph.set_hom(i, j, quots.back().complex);
        }
    CoequalizerResult out;
    out.category.graph = qgraph;
    out.category.compose = detail::zero_compose_table(qgraph);
    out.category.truncated = B.truncated;
    out.category.word_bound = B.word_bound;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const Quotient &qij = quots[i * n + j], &qjk = quots[j * n + k],
                               &qik = quots[i * n + k];
                if (tensor(qij.complex, qjk.complex).is_zero())
                    continue;
                ChainMap lifted = B.comp(i, j, k).compose_after(
                    tensor_map(qij.section, qjk.section));
                out.category.comp(i, j, k) = qik.projection.compose_after(lifted);
                // descent: the result may not depend on chosen representatives
                ChainMap check1 = qik.projection.compose_after(B.comp(i, j, k))
                                      .compose_after(tensor_map(
                                          ChainMap::identity(B.hom(i, j)) -
                                              qij.section.compose_after(qij.projection),
                                          ChainMap::identity(B.hom(j, k))));
                ChainMap check2 = qik.projection.compose_after(B.comp(i, j, k))
                                      .compose_after(tensor_map(
                                          ChainMap::identity(B.hom(i, j)),
                                          ChainMap::identity(B.hom(j, k)) -
                                              qjk.section.compose_after(qjk.projection)));
                if (!check1.is_zero() || !check2.is_zero())
                    throw Error("coequalizer: composition does not descend");
            }
    for (std::size_t i = 0; i < n; ++i)
        out.category.units.push_back(quots[i * n + i].projection.component(0) * B.unit(i));

    out.projection.source = B;
    out.projection.target = out.category;
    for (std::size_t i = 0; i < n; ++i)
        out.projection.object_map.push_back(i);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out.projection.hom_maps.push_back(quots[i * n + j].projection);
    return out;
}

/* -------------------------------------------------------------- bimodules */

/* Enriched graph with commuting left/right actions of a category:
 * left(i,j,k): A(i,j) ⊗ M(j,k) -> M(i,k), right(i,j,k): M(i,j) ⊗ A(j,k) -> M(i,k). */
struct Bimodule {
    EnrichedGraph graph;
    std::vector<ChainMap> left;   // [(i*n+j)*n+k]
    std::vector<ChainMap> right;  // [(i*n+j)*n+k]

    std::size_t n() const { return graph.n(); }
    const ChainComplex& at(std::size_t i, std::size_t j) const { return graph.hom(i, j); }
    const ChainMap& l(std::size_t i, std::size_t j, std::size_t k) const
    {
        return left[detail::triple_index(n(), i, j, k)];
    }
    ChainMap& l(std::size_t i, std::size_t j, std::size_t k)
    {
        return left[detail::triple_index(n(), i, j, k)];
    }
    const ChainMap& r(std::size_t i, std::size_t j, std::size_t k) const
    {
        return right[detail::triple_index(n(), i, j, k)];
    }
    ChainMap& r(std::size_t i, std::size_t j, std::size_t k)
    {
        return right[detail::triple_index(n(), i, j, k)];
    }
};

namespace detail {

inline std::vector<ChainMap> zero_left_table(const EnrichedGraph& a, const EnrichedGraph& m)
{
    std::size_t n = a.n();
    std::vector<ChainMap> t;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                t.emplace_back(tensor(a.hom(i, j), m.hom(j, k)), m.hom(i, k));
    return t;
}

inline std::vector<ChainMap> zero_right_table(const EnrichedGraph& a, const EnrichedGraph& m)
{
    std::size_t n = a.n();
    std::vector<ChainMap> t;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                t.emplace_back(tensor(m.hom(i, j), a.hom(j, k)), m.hom(i, k));
    return t;
}

}  // namespace detail

inline Bimodule zero_bimodule(const DgCategory& a)
{
    Bimodule m;
    m.graph = zero_graph(a.objects());
    m.left = detail::zero_left_table(a.graph, m.graph);
    m.right = detail::zero_right_table(a.graph, m.graph);
    return m;
}

/* A as a bimodule over itself; both actions are composition. */
inline Bimodule regular_bimodule(const DgCategory& a)
{
    Bimodule m;
    m.graph = a.graph;
    m.left = a.compose;
    m.right = a.compose;
    return m;
}

/* Verifies the graph-with-(A,A)-action axioms: chain maps, two-sided
 * associativity, commuting actions, units acting as the identity. */
inline CheckReport bimodule_check(const DgCategory& a, const Bimodule& m)
{
    CheckReport report;
    std::size_t n = a.n();
    if (m.n() != n || m.graph.objects() != a.objects()) {
        report.fail("bimodule object set mismatch");
        return report;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                try {
                    m.l(i, j, k).validate();
                    m.r(i, j, k).validate();
                }
                catch (const Error& e) {
                    report.fail("action is not a chain map at (" + std::to_string(i) + "," +
                                std::to_string(j) + "," + std::to_string(k) + "): " + e.what());
                }
            }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    const ChainComplex &aij = a.hom(i, j), &ajk = a.hom(j, k), &akl = a.hom(k, l);
                    const ChainComplex &mjk = m.at(j, k), &mkl = m.at(k, l), &mij = m.at(i, j);
                    // left associativity over tensor((a,a),m)
                    if (!tensor(tensor(aij, ajk), mkl).is_zero()) {
                        ChainMap r1 = m.l(i, k, l).compose_after(
                            tensor_map(a.comp(i, j, k), ChainMap::identity(mkl)));
                        ChainMap r2 = m.l(i, j, l)
                                          .compose_after(
                                              tensor_map(ChainMap::identity(aij), m.l(j, k, l)))
                                          .compose_after(associator(aij, ajk, mkl));
                        if (r1 != r2)
                            report.fail("left action associativity fails at (" +
                                        std::to_string(i) + "," + std::to_string(j) + "," +
                                        std::to_string(k) + "," + std::to_string(l) + ")");
                    }
                    // right associativity over tensor((m,a),a)
                    if (!tensor(tensor(mij, ajk), akl).is_zero()) {
                        ChainMap r1 = m.r(i, k, l).compose_after(
                            tensor_map(m.r(i, j, k), ChainMap::identity(akl)));
                        ChainMap r2 = m.r(i, j, l)
                                          .compose_after(
                                              tensor_map(ChainMap::identity(mij), a.comp(j, k, l)))
                                          .compose_after(associator(mij, ajk, akl));
                        if (r1 != r2)
                            report.fail("right action associativity fails at (" +
                                        std::to_string(i) + "," + std::to_string(j) + "," +
                                        std::to_string(k) + "," + std::to_string(l) + ")");
                    }
                    // the two actions commute over tensor((a,m),a)
                    if (!tensor(tensor(aij, mjk), akl).is_zero()) {
                        ChainMap r1 = m.r(i, k, l).compose_after(
                            tensor_map(m.l(i, j, k), ChainMap::identity(akl)));
                        ChainMap r2 = m.l(i, j, l)
                                          .compose_after(
                                              tensor_map(ChainMap::identity(aij), m.r(j, k, l)))
                                          .compose_after(associator(aij, mjk, akl));
                        if (r1 != r2)
                            report.fail("left and right actions do not commute at (" +
                                        std::to_string(i) + "," + std::to_string(j) + "," +
                                        std::to_string(k) + "," + std::to_string(l) + ")");
                    }
                }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!m.at(i, j).is_zero()) {
                ChainMap lu = m.l(i, i, j).compose_after(
                    insert_vector_slot({m.at(i, j)}, 0, a.hom(i, i), a.unit(i)));
                if (lu != ChainMap::identity(m.at(i, j)))
                    report.fail("unit does not act as identity on the left at (" +
                                std::to_string(i) + "," + std::to_string(j) + ")");
                ChainMap ru = m.r(i, j, j).compose_after(
                    insert_vector_slot({m.at(i, j)}, 1, a.hom(j, j), a.unit(j)));
                if (ru != ChainMap::identity(m.at(i, j)))
                    report.fail("unit does not act as identity on the right at (" +
                                std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    return report;
}

/* x⊗y with the outer actions: (x⊗y)(i,j) = ⊕_k x(i,k)⊗y(k,j); the left
 * action hits the x factor, the right action the y factor (no Koszul signs:
 * the acting element never moves past another factor). */
inline Bimodule bimodule_tensor(const DgCategory& a, const Bimodule& x, const Bimodule& y)
{
    std::size_t n = a.n();
    GraphTensor gt = graph_tensor(x.graph, y.graph);
    Bimodule out;
    out.graph = gt.result;
    out.left = detail::zero_left_table(a.graph, out.graph);
    out.right = detail::zero_right_table(a.graph, out.graph);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                // left: A(i,j) ⊗ (x⊗y)(j,k) -> (x⊗y)(i,k), summandwise in m
                {
                    TensorSpace dom({a.hom(i, j), out.at(j, k)});
                    if (!dom.total().is_zero()) {
                        ChainMap f(dom.total(), out.at(i, k));
                        const SumSpace& src_sum = gt.sums[j * n + k];
                        const SumSpace& dst_sum = gt.sums[i * n + k];
                        for (int deg = dom.total().lo(); deg <= dom.total().hi(); ++deg) {
                            const auto& elems = dom.basis(deg);
                            for (std::size_t col = 0; col < elems.size(); ++col) {
                                const auto& e = elems[col];
                                auto [mid, local] =
                                    detail::locate_summand(src_sum, e.degs[1], e.idxs[1]);
                                const auto pair =
                                    gt.factors[j * n + k][mid].basis(e.degs[1])[local];
                                // act on the x part: la_x(α ⊗ x_part) ⊗ y_part
                                TensorSpace ax({a.hom(i, j), x.at(j, mid)});
                                std::size_t cx = ax.index_of(
                                    {{e.degs[0], pair.degs[0]}, {e.idxs[0], pair.idxs[0]}},
                                    e.degs[0] + pair.degs[0]);
                                const RationalMatrix lm =
                                    x.l(i, j, mid).component(e.degs[0] + pair.degs[0]);
                                for (const auto& [r, v] : lm.column(cx)) {
                                    TensorSpace::Elem t{{e.degs[0] + pair.degs[0], pair.degs[1]},
                                                        {r, pair.idxs[1]}};
                                    std::size_t row =
                                        dst_sum.offset(mid, deg) +
                                        gt.factors[i * n + k][mid].index_of(t, deg);
                                    f.add_to_component(deg, row, col, v);
                                }
                            }
                        }
                        out.l(i, j, k) = std::move(f);
                    }
                }
                // right: (x⊗y)(i,j) ⊗ A(j,k) -> (x⊗y)(i,k)
                {
                    TensorSpace dom({out.at(i, j), a.hom(j, k)});
                    if (!dom.total().is_zero()) {
                        ChainMap f(dom.total(), out.at(i, k));
                        const SumSpace& src_sum = gt.sums[i * n + j];
                        const SumSpace& dst_sum = gt.sums[i * n + k];
                        for (int deg = dom.total().lo(); deg <= dom.total().hi(); ++deg) {
                            const auto& elems = dom.basis(deg);
                            for (std::size_t col = 0; col < elems.size(); ++col) {
                                const auto& e = elems[col];
                                auto [mid, local] =
                                    detail::locate_summand(src_sum, e.degs[0], e.idxs[0]);
                                const auto pair =
                                    gt.factors[i * n + j][mid].basis(e.degs[0])[local];
                                TensorSpace ya({y.at(mid, j), a.hom(j, k)});
                                std::size_t cy = ya.index_of(
                                    {{pair.degs[1], e.degs[1]}, {pair.idxs[1], e.idxs[1]}},
                                    pair.degs[1] + e.degs[1]);
                                const RationalMatrix rm =
                                    y.r(mid, j, k).component(pair.degs[1] + e.degs[1]);
                                for (const auto& [r, v] : rm.column(cy)) {
                                    TensorSpace::Elem t{{pair.degs[0], pair.degs[1] + e.degs[1]},
                                                        {pair.idxs[0], r}};
                                    std::size_t row =
                                        dst_sum.offset(mid, deg) +
                                        gt.factors[i * n + k][mid].index_of(t, deg);
                                    f.add_to_component(deg, row, col, v);
                                }
                            }
                        }
                        out.r(i, j, k) = std::move(f);
                    }
                }
            }
    return out;
}

/* Free bimodule on a graph: M(x,y) = ⊕_{(i,j)} A(x,i) ⊗ G(i,j) ⊗ A(j,y),
 * actions by composing into the outer slots. Summands ordered (i,j) lex. */
struct InducedBimodule {
    Bimodule bimodule;
    std::vector<std::vector<TensorSpace>> words;  // [x*n+y][(i*n+j)] 3-slot spaces
    std::vector<SumSpace> sums;                   // [x*n+y]
};

inline InducedBimodule induced_bimodule(const DgCategory& a, const EnrichedGraph& g)
{
    std::size_t n = a.n();
    if (g.objects() != a.objects())
        throw Error("induced bimodule needs the category's object set");
    InducedBimodule out;
    out.bimodule.graph = EnrichedGraph(a.objects());
    out.words.resize(n * n);
    out.sums.resize(n * n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            std::vector<ChainComplex> parts;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    out.words[x * n + y].emplace_back(
                        std::vector<ChainComplex>{a.hom(x, i), g.hom(i, j), a.hom(j, y)});
                    parts.push_back(out.words[x * n + y].back().total());
                }
            out.sums[x * n + y] = direct_sum(std::move(parts));
            out.bimodule.graph.set_hom(x, y, out.sums[x * n + y].total);
        }
    out.bimodule.left = detail::zero_left_table(a.graph, out.bimodule.graph);
    out.bimodule.right = detail::zero_right_table(a.graph, out.bimodule.graph);
    for (std::size_t w = 0; w < n; ++w)
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) {
                // left: A(w,x) ⊗ M(x,y) -> M(w,y): α·(a⊗g⊗b) = (α∘a)⊗g⊗b
                TensorSpace dom({a.hom(w, x), out.bimodule.at(x, y)});
                if (dom.total().is_zero())
                    continue;
                ChainMap f(dom.total(), out.bimodule.at(w, y));
                for (int deg = dom.total().lo(); deg <= dom.total().hi(); ++deg) {
                    const auto& elems = dom.basis(deg);
                    for (std::size_t col = 0; col < elems.size(); ++col) {
                        const auto& e = elems[col];
                        auto [part, local] =
                            detail::locate_summand(out.sums[x * n + y], e.degs[1], e.idxs[1]);
                        const auto word = out.words[x * n + y][part].basis(e.degs[1])[local];
                        std::size_t gi = part / n;
                        TensorSpace ta({a.hom(w, x), a.hom(x, gi)});
                        std::size_t ca = ta.index_of(
                            {{e.degs[0], word.degs[0]}, {e.idxs[0], word.idxs[0]}},
                            e.degs[0] + word.degs[0]);
                        const RationalMatrix cm =
                            a.comp(w, x, gi).component(e.degs[0] + word.degs[0]);
                        for (const auto& [r, v] : cm.column(ca)) {
                            TensorSpace::Elem t{
                                {e.degs[0] + word.degs[0], word.degs[1], word.degs[2]},
                                {r, word.idxs[1], word.idxs[2]}};
                            std::size_t row = out.sums[w * n + y].offset(part, deg) +
                                              out.words[w * n + y][part].index_of(t, deg);
                            f.add_to_component(deg, row, col, v);
                        }
                    }
                }
                out.bimodule.l(w, x, y) = std::move(f);
            }
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
                // right: M(x,y) ⊗ A(y,z) -> M(x,z): (a⊗g⊗b)·β = a⊗g⊗(b∘β)
                TensorSpace dom({out.bimodule.at(x, y), a.hom(y, z)});
                if (dom.total().is_zero())
                    continue;
                ChainMap f(dom.total(), out.bimodule.at(x, z));
                for (int deg = dom.total().lo(); deg <= dom.total().hi(); ++deg) {
                    const auto& elems = dom.basis(deg);
                    for (std::size_t col = 0; col < elems.size(); ++col) {
                        const auto& e = elems[col];
                        auto [part, local] =
                            detail::locate_summand(out.sums[x * n + y], e.degs[0], e.idxs[0]);
                        const auto word = out.words[x * n + y][part].basis(e.degs[0])[local];
                        std::size_t gj = part % n;
                        TensorSpace tb({a.hom(gj, y), a.hom(y, z)});
                        std::size_t cb = tb.index_of(
                            {{word.degs[2], e.degs[1]}, {word.idxs[2], e.idxs[1]}},
                            word.degs[2] + e.degs[1]);
                        const RationalMatrix cm =
                            a.comp(gj, y, z).component(word.degs[2] + e.degs[1]);
                        for (const auto& [r, v] : cm.column(cb)) {
                            TensorSpace::Elem t{
                                {word.degs[0], word.degs[1], word.degs[2] + e.degs[1]},
                                {word.idxs[0], word.idxs[1], r}};
                            std::size_t row = out.sums[x * n + z].offset(part, deg) +
                                              out.words[x * n + z][part].index_of(t, deg);
                            f.add_to_component(deg, row, col, v);
                        }
                    }
                }
                out.bimodule.r(x, y, z) = std::move(f);
            }
    return out;
}

/* f^* m: restriction of a bimodule along a functor. */
inline Bimodule restrict_bimodule(const DgFunctor& f, const Bimodule& m)
{
    std::size_t n = f.source.n();
    Bimodule out;
    out.graph = EnrichedGraph(f.source.objects());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out.graph.set_hom(i, j, m.at(f.object_map[i], f.object_map[j]));
    out.left = detail::zero_left_table(f.source.graph, out.graph);
    out.right = detail::zero_right_table(f.source.graph, out.graph);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                std::size_t fi = f.object_map[i], fj = f.object_map[j], fk = f.object_map[k];
                if (!tensor(f.source.hom(i, j), out.at(j, k)).is_zero())
                    out.l(i, j, k) = m.l(fi, fj, fk).compose_after(
                        tensor_map(f.at(i, j), ChainMap::identity(out.at(j, k))));
                if (!tensor(out.at(i, j), f.source.hom(j, k)).is_zero())
                    out.r(i, j, k) = m.r(fi, fj, fk).compose_after(
                        tensor_map(ChainMap::identity(out.at(i, j)), f.at(j, k)));
            }
    return out;
}

}  // namespace dgcat
