#pragma once

#include "chain_complex.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dgcat {

struct ObjectSet {
    std::vector<std::string> labels;

    ObjectSet() = default;
    explicit ObjectSet(std::vector<std::string> ls) : labels(std::move(ls))
    {
        if (labels.empty())
            throw Error("object set must be nonempty");
        for (std::size_t i = 0; i < labels.size(); ++i)
            for (std::size_t j = i + 1; j < labels.size(); ++j)
                if (labels[i] == labels[j])
                    throw Error("duplicate object label '" + labels[i] + "'");
    }

    std::size_t size() const { return labels.size(); }

    std::size_t index(const std::string& label) const
    {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label)
                return i;
        throw Error("unknown object '" + label + "'");
    }

    bool operator==(const ObjectSet& rhs) const { return labels == rhs.labels; }
    bool operator!=(const ObjectSet& rhs) const { return !(*this == rhs); }
};

/* Hom object for each ordered pair of a fixed object set; a category without
 * composition. */
class EnrichedGraph {
public:
    EnrichedGraph() = default;
    explicit EnrichedGraph(ObjectSet objects)
        : objects_(std::move(objects)), homs_(objects_.size() * objects_.size())
    {
    }

    const ObjectSet& objects() const { return objects_; }
    std::size_t n() const { return objects_.size(); }

    const ChainComplex& hom(std::size_t i, std::size_t j) const { return homs_[i * n() + j]; }
    void set_hom(std::size_t i, std::size_t j, ChainComplex c) { homs_[i * n() + j] = std::move(c); }

    std::size_t total_dim() const
    {
        std::size_t t = 0;
        for (auto& h : homs_)
            t += h.total_dim();
        return t;
    }
    bool is_zero() const { return total_dim() == 0; }

    void validate() const
    {
        for (auto& h : homs_)
            h.validate();
    }

    bool operator==(const EnrichedGraph& rhs) const
    {
        return objects_ == rhs.objects_ && homs_ == rhs.homs_;
    }
    bool operator!=(const EnrichedGraph& rhs) const { return !(*this == rhs); }

private:
    ObjectSet objects_;
    std::vector<ChainComplex> homs_;
};

inline EnrichedGraph zero_graph(const ObjectSet& o) { return EnrichedGraph(o); }

/* hom(i,i) = Q in degree 0, zero off the diagonal. */
inline EnrichedGraph unit_graph(const ObjectSet& o)
{
    EnrichedGraph g(o);
    for (std::size_t i = 0; i < o.size(); ++i)
        g.set_hom(i, i, ChainComplex::point(0));
    return g;
}

struct GraphMap {
    EnrichedGraph source, target;  // same object set
    std::vector<ChainMap> comps;   // [i*n+j]

    GraphMap() = default;
    GraphMap(EnrichedGraph src, EnrichedGraph dst) : source(std::move(src)), target(std::move(dst))
    {
        if (source.objects() != target.objects())
            throw Error("graph map requires a common object set");
        comps.reserve(source.n() * source.n());
        for (std::size_t i = 0; i < source.n(); ++i)
            for (std::size_t j = 0; j < source.n(); ++j)
                comps.push_back(ChainMap(source.hom(i, j), target.hom(i, j)));
    }

    static GraphMap identity(const EnrichedGraph& g)
    {
        GraphMap f(g, g);
        for (std::size_t i = 0; i < g.n(); ++i)
            for (std::size_t j = 0; j < g.n(); ++j)
                f.at(i, j) = ChainMap::identity(g.hom(i, j));
        return f;
    }

    ChainMap& at(std::size_t i, std::size_t j) { return comps[i * source.n() + j]; }
    const ChainMap& at(std::size_t i, std::size_t j) const { return comps[i * source.n() + j]; }

    void validate() const
    {
        for (auto& c : comps)
            c.validate();
    }

    GraphMap compose_after(const GraphMap& g) const
    {
        GraphMap out(g.source, target);
        for (std::size_t k = 0; k < comps.size(); ++k)
            out.comps[k] = comps[k].compose_after(g.comps[k]);
        return out;
    }

    GraphMap operator-(const GraphMap& rhs) const
    {
        GraphMap out(source, target);
        for (std::size_t k = 0; k < comps.size(); ++k)
            out.comps[k] = comps[k] - rhs.comps[k];
        return out;
    }

    bool operator==(const GraphMap& rhs) const { return comps == rhs.comps; }
    bool operator!=(const GraphMap& rhs) const { return !(*this == rhs); }
};

/* (g⊗h)(i,j) = ⊕_k g(i,k) ⊗ h(k,j); summand indexing is stable (k ascending)
 * and queryable through `sums`. */
struct GraphTensor {
    EnrichedGraph result;
    std::vector<SumSpace> sums;                 // [i*n+j], parts indexed by k
    std::vector<std::vector<TensorSpace>> factors;  // [i*n+j][k]

    std::size_t offset(std::size_t i, std::size_t j, std::size_t k, int degree) const
    {
        return sums[i * result.n() + j].offset(k, degree);
    }
};

inline GraphTensor graph_tensor(const EnrichedGraph& g, const EnrichedGraph& h)
{
    if (g.objects() != h.objects())
        throw Error("graph tensor requires a common object set");
    std::size_t n = g.n();
    GraphTensor out;
    out.result = EnrichedGraph(g.objects());
    out.sums.resize(n * n);
    out.factors.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<ChainComplex> parts;
            auto& factor_list = out.factors[i * n + j];
            for (std::size_t k = 0; k < n; ++k) {
                factor_list.emplace_back(std::vector<ChainComplex>{g.hom(i, k), h.hom(k, j)});
                parts.push_back(factor_list.back().total());
            }
            out.sums[i * n + j] = direct_sum(std::move(parts));
            out.result.set_hom(i, j, out.sums[i * n + j].total);
        }
    return out;
}

/* Least N with g^{⊗N} = 0, via the support digraph (an edge wherever the hom
 * complex is nonzero); absent when that digraph has a cycle. */
inline std::optional<std::size_t> is_nilpotent(const EnrichedGraph& g)
{
    std::size_t n = g.n();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!g.hom(i, j).is_zero())
                adj[i].push_back(j);

    // longest path in a DAG; detect cycles along the way
    std::vector<int> state(n, 0);  // 0 unvisited, 1 on stack, 2 done
    std::vector<std::size_t> longest(n, 0);
    bool cyclic = false;
    auto dfs = [&](auto&& self, std::size_t v) -> void {
        state[v] = 1;
        for (std::size_t w : adj[v]) {
            if (state[w] == 1) {
                cyclic = true;
                return;
            }
            if (state[w] == 0)
                self(self, w);
            if (cyclic)
                return;
            longest[v] = std::max(longest[v], longest[w] + 1);
        }
        state[v] = 2;
    };
    for (std::size_t v = 0; v < n && !cyclic; ++v)
        if (state[v] == 0)
            dfs(dfs, v);
    if (cyclic)
        return std::nullopt;
    std::size_t L = 0;
    for (std::size_t v = 0; v < n; ++v)
        L = std::max(L, longest[v]);
    return L + 1;
}

}  // namespace dgcat
