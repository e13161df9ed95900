#pragma once

#include "chain_complex.hpp"

#include <vector>

namespace dgcat {

/* Builders for maps between ordered tensor products ("word spaces"). All
 * structure maps fed in here are degree 0, so the only Koszul signs are the
 * ones introduced explicitly by rotations. */

/* Map T(src) -> T(dst) that applies maps[g] to the g-th consecutive group of
 * source slots; group_sizes partitions the source slot list in order,
 * maps[g] : T(group slots).total() -> dst_slot_g. Groups of size 0 insert a
 * slot via a map from the empty tensor product (Q in degree 0). */
inline ChainMap grouped_map(const std::vector<ChainComplex>& src_slots,
                            const std::vector<std::size_t>& group_sizes,
                            const std::vector<ChainMap>& maps)
{
    if (group_sizes.size() != maps.size())
        throw Error("grouped_map: group/map count mismatch");
    std::size_t total = 0;
    for (auto s : group_sizes)
        total += s;
    if (total != src_slots.size())
        throw Error("grouped_map: group sizes do not partition the slots");

    std::vector<TensorSpace> groups;
    std::vector<ChainComplex> dst_slots;
    {
        std::size_t pos = 0;
        for (std::size_t g = 0; g < group_sizes.size(); ++g) {
            std::vector<ChainComplex> part(src_slots.begin() + pos,
                                           src_slots.begin() + pos + group_sizes[g]);
            pos += group_sizes[g];
            groups.emplace_back(std::move(part));
            if (maps[g].source().dims() != groups.back().total().dims())
                throw Error("grouped_map: map domain does not match its slot group");
            dst_slots.push_back(maps[g].target());
        }
    }
    TensorSpace src(src_slots);
    TensorSpace dst(dst_slots);
    ChainMap out(src.total(), dst.total());

    struct Partial {
        std::vector<int> degs;
        std::vector<std::size_t> idxs;
        Rational coeff;
    };

    for (int n = src.total().lo(); n <= src.total().hi(); ++n) {
        const auto& elems = src.basis(n);
        for (std::size_t col = 0; col < elems.size(); ++col) {
            const auto& e = elems[col];
            std::vector<Partial> partials{{{}, {}, Rational(1)}};
            std::size_t pos = 0;
            for (std::size_t g = 0; g < group_sizes.size() && !partials.empty(); ++g) {
                TensorSpace::Elem sub;
                int gdeg = 0;
                for (std::size_t s = 0; s < group_sizes[g]; ++s) {
                    sub.degs.push_back(e.degs[pos + s]);
                    sub.idxs.push_back(e.idxs[pos + s]);
                    gdeg += e.degs[pos + s];
                }
                pos += group_sizes[g];
                std::size_t gcol = groups[g].index_of(sub, gdeg);
                const RationalMatrix m = maps[g].component(gdeg);
                std::vector<Partial> next;
                for (const auto& [r, v] : m.column(gcol))
                    for (const auto& p : partials) {
                        Partial q = p;
                        q.degs.push_back(gdeg);
                        q.idxs.push_back(r);
                        q.coeff *= v;
                        next.push_back(std::move(q));
                    }
                partials = std::move(next);
            }
            for (const auto& p : partials) {
                TensorSpace::Elem t{p.degs, p.idxs};
                out.add_to_component(n, dst.index_of(t, n), col, p.coeff);
            }
        }
    }
    return out;
}

/* x_0 ⊗ x_1 ⊗ ... ⊗ x_r  ->  (-1)^{|x_0|(|x_1|+...+|x_r|)} x_1 ⊗ ... ⊗ x_0. */
inline ChainMap rotate_first_to_end(const std::vector<ChainComplex>& slots)
{
    if (slots.empty())
        throw Error("rotate on empty word");
    std::vector<ChainComplex> dst_slots(slots.begin() + 1, slots.end());
    dst_slots.push_back(slots.front());
    TensorSpace src(slots);
    TensorSpace dst(dst_slots);
    ChainMap out(src.total(), dst.total());
    for (int n = src.total().lo(); n <= src.total().hi(); ++n) {
        const auto& elems = src.basis(n);
        for (std::size_t col = 0; col < elems.size(); ++col) {
            const auto& e = elems[col];
            TensorSpace::Elem t;
            t.degs.assign(e.degs.begin() + 1, e.degs.end());
            t.idxs.assign(e.idxs.begin() + 1, e.idxs.end());
            t.degs.push_back(e.degs[0]);
            t.idxs.push_back(e.idxs[0]);
            int rest = n - e.degs[0];
            Rational sign(((e.degs[0] * rest) % 2 == 0) ? 1 : -1);
            out.add_to_component(n, dst.index_of(t, n), col, sign);
        }
    }
    return out;
}

/* Inserts the degree-0 cycle `vec` (a column in C_0) as a new slot at
 * position pos. */
inline ChainMap insert_vector_slot(const std::vector<ChainComplex>& slots, std::size_t pos,
                                   const ChainComplex& C, const RationalMatrix& vec)
{
    if (pos > slots.size())
        throw Error("insert_vector_slot: bad position");
    if (vec.rows() != C.dim(0) || vec.cols() != 1)
        throw Error("insert_vector_slot: vector shape mismatch");
    std::vector<ChainComplex> dst_slots = slots;
    dst_slots.insert(dst_slots.begin() + pos, C);
    TensorSpace src(slots);
    TensorSpace dst(dst_slots);
    ChainMap out(src.total(), dst.total());
    for (int n = src.total().lo(); n <= src.total().hi(); ++n) {
        const auto& elems = src.basis(n);
        for (std::size_t col = 0; col < elems.size(); ++col) {
            const auto& e = elems[col];
            for (const auto& [r, v] : vec.column(0)) {
                TensorSpace::Elem t = e;
                t.degs.insert(t.degs.begin() + pos, 0);
                t.idxs.insert(t.idxs.begin() + pos, r);
                out.add_to_component(n, dst.index_of(t, n), col, v);
            }
        }
    }
    return out;
}

/* Applies a degree-0 functional (phi : slots[pos] -> Q in degree 0) and drops
 * the slot. */
inline ChainMap collapse_slot(const std::vector<ChainComplex>& slots, std::size_t pos,
                              const ChainMap& phi)
{
    if (pos >= slots.size())
        throw Error("collapse_slot: bad position");
    if (phi.target().dims() != unit_complex().dims())
        throw Error("collapse_slot: functional must land in Q");
    std::vector<ChainComplex> dst_slots = slots;
    dst_slots.erase(dst_slots.begin() + pos);
    TensorSpace src(slots);
    TensorSpace dst(dst_slots);
    ChainMap out(src.total(), dst.total());
    for (int n = src.total().lo(); n <= src.total().hi(); ++n) {
        const auto& elems = src.basis(n);
        for (std::size_t col = 0; col < elems.size(); ++col) {
            const auto& e = elems[col];
            Rational c = phi.component(e.degs[pos]).at(0, e.idxs[pos]);
            if (is_zero(c))
                continue;
            TensorSpace::Elem t = e;
            t.degs.erase(t.degs.begin() + pos);
            t.idxs.erase(t.idxs.begin() + pos);
            out.add_to_component(n, dst.index_of(t, n), col, c);
        }
    }
    return out;
}

namespace detail {

/* (part, local index) of a flat index inside a direct sum at a given degree. */
inline std::pair<std::size_t, std::size_t> locate_summand(const SumSpace& sum, int degree,
                                                          std::size_t flat)
{
    std::size_t off = 0;
    for (std::size_t p = 0; p < sum.parts.size(); ++p) {
        std::size_t d = sum.parts[p].dim(degree);
        if (flat < off + d)
            return {p, flat - off};
        off += d;
    }
    throw Error("locate_summand: index out of range");
}

}  // namespace detail

}  // namespace dgcat
