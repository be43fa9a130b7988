#include "akh/exterior.hpp"

#include <bit>
#include <functional>

#include "akh/errors.hpp"

namespace akh {

double op_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

double op_norm(const RMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<RMat> svd(m);
  return svd.singularValues()(0);
}

}  // namespace akh

namespace akh::ext {

int popcount(Mask m) { return std::popcount(m); }

std::vector<int> bits(Mask m) {
  std::vector<int> out;
  for (int k = 0; m; ++k, m >>= 1)
    if (m & 1u) out.push_back(k);
  return out;
}

int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  // count pairs (i in a, j in b) with i > j
  int inversions = 0;
  for (Mask rest = b; rest; rest &= rest - 1) {
    int j = std::countr_zero(rest);
    Mask above = a & ~((Mask{2} << j) - 1);
    inversions += std::popcount(above);
  }
  return (inversions & 1) ? -1 : 1;
}

std::vector<Mask> subsets(int m, int k) {
  std::vector<Mask> out;
  std::function<void(int, int, Mask)> rec = [&](int start, int left, Mask acc) {
    if (left == 0) {
      out.push_back(acc);
      return;
    }
    for (int i = start; i <= m - left; ++i) rec(i + 1, left - 1, acc | (Mask{1} << i));
  };
  if (k >= 0 && k <= m) rec(0, k, 0);
  return out;
}

static cd minor_det(const CMat& s, const std::vector<int>& rows, const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size());
  if (k == 0) return 1.0;
  CMat sub(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) sub(i, j) = s(rows[i], cols[j]);
  return sub.determinant();
}

CMat induced_map(const CMat& s) {
  if (s.rows() != s.cols()) throw DimensionError("induced_map: substitution must be square");
  const int m = static_cast<int>(s.rows());
  const int dim = 1 << m;
  CMat out = CMat::Zero(dim, dim);
  for (int k = 0; k <= m; ++k) {
    auto masks = subsets(m, k);
    for (Mask a : masks) {
      auto ra = bits(a);
      for (Mask kk : masks) out(kk, a) = minor_det(s, ra, bits(kk));
    }
  }
  return out;
}

CMat wedge_matrix(const CVec& form, int m) {
  const int dim = 1 << m;
  if (form.size() != dim) throw DimensionError("wedge_matrix: form size mismatch");
  CMat out = CMat::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    if (form(a) == cd(0.0)) continue;
    for (int b = 0; b < dim; ++b) {
      int s = wedge_sign(static_cast<Mask>(a), static_cast<Mask>(b));
      if (s) out(a | b, b) += static_cast<double>(s) * form(a);
    }
  }
  return out;
}

CMat odd_derivation(const std::vector<CVec>& images, int m) {
  const int dim = 1 << m;
  if (static_cast<int>(images.size()) != m) throw DimensionError("odd_derivation: need one image per generator");
  CMat out = CMat::Zero(dim, dim);
  for (int src = 0; src < dim; ++src) {
    // D(x_{k1} ^ ... ^ x_{kr}) = sum_t (-1)^t x_{k1} ^ .. ^ D x_{kt} ^ .. ^ x_{kr}
    auto ks = bits(static_cast<Mask>(src));
    for (std::size_t t = 0; t < ks.size(); ++t) {
      Mask before = 0, after = 0;
      for (std::size_t u = 0; u < t; ++u) before |= Mask{1} << ks[u];
      for (std::size_t u = t + 1; u < ks.size(); ++u) after |= Mask{1} << ks[u];
      const double sign = (t & 1) ? -1.0 : 1.0;
      const CVec& img = images[ks[t]];
      for (int c = 0; c < dim; ++c) {
        if (img(c) == cd(0.0)) continue;
        int s1 = wedge_sign(before, static_cast<Mask>(c));
        if (!s1) continue;
        Mask mid = before | static_cast<Mask>(c);
        int s2 = wedge_sign(mid, after);
        if (!s2) continue;
        out(mid | after, src) += sign * s1 * s2 * img(c);
      }
    }
  }
  return out;
}

CVec wedge(const CVec& a, const CVec& b) {
  if (a.size() != b.size()) throw DimensionError("wedge: size mismatch");
  CVec out = CVec::Zero(a.size());
  for (Eigen::Index x = 0; x < a.size(); ++x) {
    if (a(x) == cd(0.0)) continue;
    for (Eigen::Index y = 0; y < b.size(); ++y) {
      if (b(y) == cd(0.0)) continue;
      int s = wedge_sign(static_cast<Mask>(x), static_cast<Mask>(y));
      if (s) out(x | y) += static_cast<double>(s) * a(x) * b(y);
    }
  }
  return out;
}

}  // namespace akh::ext
