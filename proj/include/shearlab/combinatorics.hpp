#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace shearlab {

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
    return result;
}

/**
 * Calls f(indices) for every k-subset of {0..n-1} in lexicographic order.
 * Stops early if f returns false.
 */
template <class F>
bool for_each_combination(std::size_t n, std::size_t k, F&& f) {
    if (k > n) return true;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        if (!f(static_cast<const std::vector<std::size_t>&>(idx))) return false;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return true;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

/**
 * Calls on_clique(indices) for every clique of `size` vertices (indices into 0..count-1, in
 * lexicographic order) of a uniform hypergraph of the given arity; has_edge receives a sorted
 * index vector. Stops early when on_clique returns false.
 */
template <class HasEdge, class OnClique>
void for_each_clique(std::size_t count, std::size_t arity, std::size_t size, HasEdge&& has_edge,
                     OnClique&& on_clique) {
    if (size > count) return;
    std::vector<std::size_t> current;
    std::vector<std::size_t> probe;

    // every arity-subset of current+{v} containing v must be an edge
    auto compatible = [&](std::size_t v) {
        if (current.size() + 1 < arity) return true;
        return for_each_combination(current.size(), arity - 1, [&](const std::vector<std::size_t>& pick) {
            probe.clear();
            for (auto p : pick) probe.push_back(current[p]);
            probe.push_back(v);
            return static_cast<bool>(has_edge(static_cast<const std::vector<std::size_t>&>(probe)));
        });
    };

    auto search = [&](auto&& self, std::size_t next) -> bool {
        if (current.size() == size)
            return static_cast<bool>(on_clique(static_cast<const std::vector<std::size_t>&>(current)));
        for (std::size_t v = next; v + (size - current.size()) <= count; ++v) {
            if (!compatible(v)) continue;
            current.push_back(v);
            if (!self(self, v + 1)) return false;
            current.pop_back();
        }
        return true;
    };
    search(search, 0);
}

template <class HasEdge>
std::optional<std::vector<std::size_t>> find_clique(std::size_t count, std::size_t arity,
                                                    std::size_t size, HasEdge&& has_edge) {
    std::optional<std::vector<std::size_t>> found;
    for_each_clique(count, arity, size, has_edge, [&](const std::vector<std::size_t>& c) {
        found = c;
        return false;
    });
    return found;
}

} // namespace shearlab
