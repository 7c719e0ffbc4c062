#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <optional>
#include <variant>
#include <vector>

#include "symx/matrix.hpp"

namespace symx {

/// Undirected graph with an edge wherever an off-diagonal pair is not
/// both zero. Vertices are 1-based to match all reported indices.
struct SupportGraph {
    int order = 0;
    std::vector<std::vector<int>> neighbors;  // ascending, 1-based

    template <class T>
    static SupportGraph of(const Matrix<T>& a) {
        const int m = a.order();
        SupportGraph g;
        g.order = m;
        g.neighbors.assign(m + 1, {});
        for (int i = 1; i <= m; ++i)
            for (int j = i + 1; j <= m; ++j)
                if (a(i - 1, j - 1) != T(0) || a(j - 1, i - 1) != T(0)) {
                    g.neighbors[i].push_back(j);
                    g.neighbors[j].push_back(i);
                }
        return g;
    }

    bool has_edge(int i, int j) const {
        return std::binary_search(neighbors[i].begin(), neighbors[i].end(), j);
    }

    /// True when i and j stay connected after removing edge {i,j}.
    bool edge_on_cycle(int i, int j) const {
        std::vector<char> seen(order + 1, 0);
        std::deque<int> queue{i};
        seen[i] = 1;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int w : neighbors[v]) {
                if ((v == i && w == j) || (v == j && w == i)) continue;
                if (!seen[w]) {
                    if (w == j) return true;
                    seen[w] = 1;
                    queue.push_back(w);
                }
            }
        }
        return false;
    }
};

template <class T>
struct SignViolation {
    int i = 0, j = 0;
    T a_ij{}, a_ji{};
};

template <class T>
struct CycleViolation {
    std::vector<int> cycle;  // distinct vertices, length >= 3, 1-based
    T forward_product{};
    T backward_product{};
};

/// Positive diagonal with the smallest entry of every support component
/// rescaled to 1.
template <class T>
struct Symmetrizer {
    std::vector<T> diag;
};

template <class T>
class SymmetrizabilityVerdict {
public:
    using State = std::variant<Symmetrizer<T>, SignViolation<T>, CycleViolation<T>>;

    SymmetrizabilityVerdict(State state) : state_(std::move(state)) {}

    bool symmetrizable() const { return std::holds_alternative<Symmetrizer<T>>(state_); }
    const Symmetrizer<T>* symmetrizer() const { return std::get_if<Symmetrizer<T>>(&state_); }
    const SignViolation<T>* sign_violation() const { return std::get_if<SignViolation<T>>(&state_); }
    const CycleViolation<T>* cycle_violation() const { return std::get_if<CycleViolation<T>>(&state_); }

private:
    State state_;
};

// Relative tolerance for the defining relation d_i a_ij = d_j a_ji in the
// float regime; exact scalars compare exactly.
inline constexpr double kSymmetrizerRelTol = 1e-9;

namespace symm_detail {

template <class T>
bool relation_holds(const T& lhs, const T& rhs) {
    if constexpr (is_exact_scalar_v<T>) {
        return lhs == rhs;
    } else {
        const T diff = abs_value(T(lhs - rhs));
        return diff <= kSymmetrizerRelTol * std::max(abs_value(lhs), abs_value(rhs));
    }
}

// Canonical presentation: smallest vertex first, then the direction whose
// second vertex is smaller than the last.
inline void canonicalize_cycle(std::vector<int>& cycle) {
    const auto lowest = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), lowest, cycle.end());
    if (cycle.size() >= 3 && cycle[1] > cycle.back())
        std::reverse(cycle.begin() + 1, cycle.end());
}

} // namespace symm_detail

/// Pass iff every off-diagonal pair is both zero or has positive product.
/// The first violating pair in row-major scan order is reported.
template <class T>
std::optional<SignViolation<T>> check_sign_symmetry(const Matrix<T>& a) {
    const int m = a.order();
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j) {
            if (i == j) continue;
            const T& x = a(i - 1, j - 1);
            const T& y = a(j - 1, i - 1);
            if (x == T(0) && y == T(0)) continue;
            if (x * y > T(0)) continue;
            return SignViolation<T>{i, j, x, y};
        }
    return std::nullopt;
}

/// Spanning-forest potential propagation. Every connected component is
/// rooted at its lowest vertex with potential 1 and d_j = d_i a_ij / a_ji
/// along tree edges; a non-tree edge that breaks the defining relation
/// closes a cycle through the tree, which is returned as the witness.
template <class T>
SymmetrizabilityVerdict<T> compute_symmetrizer(const Matrix<T>& a) {
    const int m = a.order();
    if (auto sv = check_sign_symmetry(a)) return {*sv};

    const SupportGraph g = SupportGraph::of(a);
    std::vector<T> d(m + 1, T(0));
    std::vector<int> parent(m + 1, 0), depth(m + 1, 0), component(m + 1, 0);
    std::vector<int> component_root;

    for (int root = 1; root <= m; ++root) {
        if (d[root] != T(0)) continue;
        component_root.push_back(root);
        const int comp = int(component_root.size());
        d[root] = T(1);
        component[root] = comp;
        std::deque<int> queue{root};
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int w : g.neighbors[v]) {
                if (d[w] != T(0)) continue;
                d[w] = T(d[v] * a(v - 1, w - 1) / a(w - 1, v - 1));
                parent[w] = v;
                depth[w] = depth[v] + 1;
                component[w] = comp;
                queue.push_back(w);
            }
        }
    }

    // Every non-tree support edge must satisfy the defining relation.
    for (int i = 1; i <= m; ++i)
        for (int j : g.neighbors[i]) {
            if (j < i) continue;
            if (parent[j] == i || parent[i] == j) continue;
            const T lhs = T(d[i] * a(i - 1, j - 1));
            const T rhs = T(d[j] * a(j - 1, i - 1));
            if (symm_detail::relation_holds(lhs, rhs)) continue;

            // Tree paths from both endpoints up to their lowest common
            // ancestor, glued into the violating cycle i ... j (+ edge j-i).
            std::vector<int> up_i, up_j;
            int u = i, w = j;
            while (depth[u] > depth[w]) { up_i.push_back(u); u = parent[u]; }
            while (depth[w] > depth[u]) { up_j.push_back(w); w = parent[w]; }
            while (u != w) {
                up_i.push_back(u); u = parent[u];
                up_j.push_back(w); w = parent[w];
            }
            std::vector<int> cycle = std::move(up_i);
            cycle.push_back(u);
            cycle.insert(cycle.end(), up_j.rbegin(), up_j.rend());
            symm_detail::canonicalize_cycle(cycle);

            CycleViolation<T> cv;
            cv.cycle = cycle;
            cv.forward_product = T(1);
            cv.backward_product = T(1);
            const int len = int(cycle.size());
            for (int t = 0; t < len; ++t) {
                const int p = cycle[t], q = cycle[(t + 1) % len];
                cv.forward_product *= a(p - 1, q - 1);
                cv.backward_product *= a(q - 1, p - 1);
            }
            return {cv};
        }

    // Canonical form: smallest entry of every component becomes 1.
    for (std::size_t c = 1; c <= component_root.size(); ++c) {
        T lo{};
        bool first = true;
        for (int v = 1; v <= m; ++v)
            if (component[v] == int(c) && (first || d[v] < lo)) { lo = d[v]; first = false; }
        for (int v = 1; v <= m; ++v)
            if (component[v] == int(c)) d[v] = T(d[v] / lo);
    }

    Symmetrizer<T> s;
    s.diag.assign(d.begin() + 1, d.end());
    return {s};
}

template <class T>
SymmetrizabilityVerdict<T> is_symmetrizable(const Matrix<T>& a) {
    return compute_symmetrizer(a);
}

/// Checks that d is a valid symmetrizer for a (within kSymmetrizerRelTol).
inline void require_symmetrizer(const RealMatrix& a, const Symmetrizer<double>& d) {
    const int m = a.order();
    if (int(d.diag.size()) != m) throw NotASymmetrizerError("diagonal length mismatch");
    for (double v : d.diag)
        if (!(v > 0)) throw NotASymmetrizerError("symmetrizer entries must be positive");
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (!symm_detail::relation_holds(d.diag[i] * a(i, j), d.diag[j] * a(j, i)))
                throw NotASymmetrizerError("defining relation fails at (" + std::to_string(i + 1) +
                                           "," + std::to_string(j + 1) + ")");
}

/// Similar symmetric form: t_ij = sqrt(d_i/d_j) a_ij.
inline RealMatrix symmetrize(const RealMatrix& a, const Symmetrizer<double>& d) {
    require_symmetrizer(a, d);
    const int m = a.order();
    RealMatrix t(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            t(i, j) = std::sqrt(d.diag[i] / d.diag[j]) * a(i, j);
    return t;
}

inline Symmetrizer<double> to_real(const Symmetrizer<Rational>& s) {
    Symmetrizer<double> r;
    r.diag.reserve(s.diag.size());
    for (const Rational& v : s.diag) r.diag.push_back(to_double(v));
    return r;
}

/// Brute force over all permutations of 1..m: the product of entries
/// along a permutation must match the product along its inverse.
inline bool permutation_product_oracle(const RationalMatrix& a) {
    const int m = a.order();
    if (m > 8) throw OrderTooLargeError("permutation oracle limited to order 8");
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        Rational forward(1), backward(1);
        for (int i = 0; i < m; ++i) {
            forward *= a(i, perm[i]);
            backward *= a(perm[i], i);
        }
        if (forward != backward) return false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return true;
}

/// Enumerates simple cycles of length 3..max_len (each once, anchored at
/// its smallest vertex) and compares forward/backward entry products.
inline std::optional<CycleViolation<Rational>> cycle_product_oracle(const RationalMatrix& a,
                                                                    int max_len = 0) {
    const int m = a.order();
    if (m > 10) throw OrderTooLargeError("cycle oracle limited to order 10");
    if (max_len <= 0 || max_len > m) max_len = m;

    std::vector<int> path;
    std::vector<char> used(m + 1, 0);
    std::optional<CycleViolation<Rational>> found;

    auto close_cycle = [&]() {
        const int len = int(path.size());
        Rational forward(1), backward(1);
        for (int t = 0; t < len; ++t) {
            const int p = path[t], q = path[(t + 1) % len];
            forward *= a(p - 1, q - 1);
            backward *= a(q - 1, p - 1);
        }
        if (forward != backward)
            found = CycleViolation<Rational>{path, forward, backward};
    };

    auto dfs = [&](auto&& self, int anchor) -> void {
        if (found) return;
        const int len = int(path.size());
        if (len >= 3 && path[1] < path.back()) close_cycle();
        if (found || len == max_len) return;
        for (int next = anchor + 1; next <= m; ++next) {
            if (used[next]) continue;
            used[next] = 1;
            path.push_back(next);
            self(self, anchor);
            path.pop_back();
            used[next] = 0;
        }
    };

    for (int anchor = 1; anchor + 2 <= m && !found; ++anchor) {
        std::fill(used.begin(), used.end(), 0);
        used[anchor] = 1;
        path = {anchor};
        dfs(dfs, anchor);
    }
    return found;
}

} // namespace symx
