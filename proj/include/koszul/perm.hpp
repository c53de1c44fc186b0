#pragma once

#include <vector>

#include "koszul/error.hpp"

namespace koszul {

// A permutation of {0..n-1}; perm[i] is the image of i.
using Perm = std::vector<int>;

Perm perm_identity(int n);
bool perm_is_identity(const Perm& p);
Perm perm_compose(const Perm& f, const Perm& g); // (f*g)(i) = f(g(i))
Perm perm_inverse(const Perm& p);
int perm_sign(const Perm& p);
Perm perm_transposition(int n, int i, int j);

// Permutation sending position i to the rank of keys[i] (stable sort order).
Perm sorting_perm(const std::vector<int>& keys);

// Adjacent transposition word: p = s_{w[0]} * s_{w[1]} * ... (composition as functions,
// applied right-to-left), where s_i swaps i and i+1.
std::vector<int> adjacent_word(const Perm& p);

// All permutations of {0..n-1} in lexicographic order.
std::vector<Perm> all_perms(int n);

// Koszul sign of reordering homogeneous factors: factor i (degree degs[i]) moves to
// position p[i]; each inversion of two odd factors contributes -1.
int koszul_sign(const std::vector<int>& degs, const Perm& p);

// Set partitions of `labels` into exactly k nonempty blocks, each block sorted and
// the blocks ordered by their minima (restricted growth enumeration).
std::vector<std::vector<std::vector<int>>> ordered_set_partitions(const std::vector<int>& labels,
                                                                  int k);

} // namespace koszul
