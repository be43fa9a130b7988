#pragma once

#include <random>

#include "akh/bigraded_algebra.hpp"

namespace testing_util {

inline akh::CVec random_cvec(int size, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  akh::CVec v(size);
  for (int i = 0; i < size; ++i) v(i) = akh::cd(nd(rng), nd(rng));
  return v;
}

inline akh::CMat random_hpd(int n, std::mt19937_64& rng) {
  akh::CMat a(n, n);
  std::normal_distribution<double> nd;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = akh::cd(nd(rng), nd(rng));
  return a * a.adjoint() + akh::CMat::Identity(n, n) * 0.5;
}

inline akh::algebra::BigradedForm random_block(int n, int p, int q, std::mt19937_64& rng) {
  akh::algebra::BigradedForm f(n);
  f.set_block(p, q, random_cvec(f.space().block_dim(p, q), rng));
  return f;
}

inline akh::algebra::BigradedForm random_form(int n, std::mt19937_64& rng) {
  auto S = akh::algebra::FormSpace::get(n);
  return akh::algebra::BigradedForm(n, random_cvec(S->dim(), rng));
}

inline long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace testing_util
