#pragma once

#include <vector>

#include "akh/types.hpp"

// Mask-level exterior algebra on m generators. A basis monomial is a bitmask,
// bit k standing for the k-th generator; vectors are indexed by the mask.
namespace akh::ext {

int popcount(Mask m);
std::vector<int> bits(Mask m);

/// Sign of e_a ^ e_b relative to e_{a|b}; 0 when the masks overlap.
int wedge_sign(Mask a, Mask b);

/// Masks with exactly k bits among the first m, in lexicographic order of their
/// sorted index lists.
std::vector<Mask> subsets(int m, int k);

/// Coefficient action of a change of generators. If old generator a equals
/// sum_k S(a,k) new_k then coefficients transform by M(K,A) = det S[A,K].
CMat induced_map(const CMat& s);

/// Left multiplication by a mask-indexed form.
CMat wedge_matrix(const CVec& form, int m);

/// Odd derivation whose value on generator k is images[k] (mask-indexed).
CMat odd_derivation(const std::vector<CVec>& images, int m);

/// Wedge product of two mask-indexed forms.
CVec wedge(const CVec& a, const CVec& b);

}  // namespace akh::ext
