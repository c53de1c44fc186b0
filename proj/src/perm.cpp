#include "koszul/perm.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace koszul {

Perm perm_identity(int n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

bool perm_is_identity(const Perm& p) {
    for (size_t i = 0; i < p.size(); ++i)
        if (p[i] != static_cast<int>(i)) return false;
    return true;
}

Perm perm_compose(const Perm& f, const Perm& g) {
    if (f.size() != g.size()) fail(ErrorCode::dimension_mismatch, "perm size mismatch");
    Perm h(f.size());
    for (size_t i = 0; i < f.size(); ++i) h[i] = f[g[i]];
    return h;
}

Perm perm_inverse(const Perm& p) {
    Perm q(p.size());
    for (size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<int>(i);
    return q;
}

int perm_sign(const Perm& p) {
    int inv = 0;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

Perm perm_transposition(int n, int i, int j) {
    Perm p = perm_identity(n);
    std::swap(p[i], p[j]);
    return p;
}

Perm sorting_perm(const std::vector<int>& keys) {
    int n = static_cast<int>(keys.size());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return keys[a] < keys[b]; });
    Perm p(n);
    for (int rank = 0; rank < n; ++rank) p[idx[rank]] = rank;
    return p;
}

std::vector<int> adjacent_word(const Perm& p) {
    // Bubble sort p's one-line form to the identity; reversing the swap sequence
    // expresses p as a product of adjacent transpositions.
    Perm v = p;
    std::vector<int> swaps;
    bool moved = true;
    while (moved) {
        moved = false;
        for (size_t i = 0; i + 1 < v.size(); ++i) {
            if (v[i] > v[i + 1]) {
                std::swap(v[i], v[i + 1]);
                swaps.push_back(static_cast<int>(i));
                moved = true;
            }
        }
    }
    // p = s_{swaps[k-1]} ... s_{swaps[0]} applied to identity... verify orientation in tests.
    std::reverse(swaps.begin(), swaps.end());
    return swaps;
}

std::vector<Perm> all_perms(int n) {
    std::vector<Perm> out;
    Perm p = perm_identity(n);
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

int koszul_sign(const std::vector<int>& degs, const Perm& p) {
    int sign = 1;
    for (size_t i = 0; i < degs.size(); ++i)
        for (size_t j = i + 1; j < degs.size(); ++j)
            if (p[i] > p[j] && (degs[i] % 2) && (degs[j] % 2)) sign = -sign;
    return sign;
}

std::vector<std::vector<std::vector<int>>> ordered_set_partitions(const std::vector<int>& labels,
                                                                  int k) {
    std::vector<std::vector<std::vector<int>>> out;
    if (labels.empty() || k <= 0) return out;
    std::vector<int> assign(labels.size(), 0);
    std::function<void(size_t, int)> rec = [&](size_t pos, int used) {
        if (pos == labels.size()) {
            if (used == k) {
                std::vector<std::vector<int>> blocks(k);
                for (size_t i = 0; i < labels.size(); ++i) blocks[assign[i]].push_back(labels[i]);
                out.push_back(std::move(blocks));
            }
            return;
        }
        int limit = std::min(used, k - 1);
        for (int b = 0; b <= limit; ++b) {
            assign[pos] = b;
            rec(pos + 1, std::max(used, b + 1));
        }
    };
    rec(0, 0);
    return out;
}

} // namespace koszul
