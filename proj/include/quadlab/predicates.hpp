// Sign-exact orientation predicate for double-precision inputs.
//
// Fast floating-point evaluation with a forward error bound, falling back to
// exact expansion arithmetic (two_sum / two_product / expansion sums) in the
// style of Shewchuk's "Adaptive Precision Floating-Point Arithmetic and Fast
// Robust Geometric Predicates", CMU-CS-96-140.

#pragma once

#include <cmath>

namespace quadlab {
namespace detail {

// |x| <= splitter * |x| assumed; standard Dekker/Knuth building blocks.
inline void fast_two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  const double bvirt = x - a;
  y = b - bvirt;
}

inline void two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  const double bvirt = x - a;
  const double avirt = x - bvirt;
  const double bround = b - bvirt;
  const double around = a - avirt;
  y = around + bround;
}

inline void split(double a, double& hi, double& lo) {
  constexpr double splitter = 134217729.0;  // 2^27 + 1
  const double c = splitter * a;
  const double abig = c - a;
  hi = c - abig;
  lo = a - hi;
}

inline void two_product(double a, double b, double& x, double& y) {
  x = a * b;
  double ahi, alo, bhi, blo;
  split(a, ahi, alo);
  split(b, bhi, blo);
  const double err1 = x - (ahi * bhi);
  const double err2 = err1 - (alo * bhi);
  const double err3 = err2 - (ahi * blo);
  y = (alo * blo) - err3;
}

// Sums two non-overlapping expansions, eliminating zero components.
// e and f must be sorted by increasing magnitude. h may not alias e or f.
inline int expansion_sum_zeroelim(int elen, const double* e, int flen,
                                  const double* f, double* h) {
  double q, qnew, hh;
  double enow = e[0];
  double fnow = f[0];
  int eindex = 0, findex = 0;
  if ((fnow > enow) == (fnow > -enow)) {
    q = enow;
    enow = e[++eindex];
  } else {
    q = fnow;
    fnow = f[++findex];
  }
  int hindex = 0;
  if ((eindex < elen) && (findex < flen)) {
    if ((fnow > enow) == (fnow > -enow)) {
      fast_two_sum(enow, q, qnew, hh);
      enow = e[++eindex];
    } else {
      fast_two_sum(fnow, q, qnew, hh);
      fnow = f[++findex];
    }
    q = qnew;
    if (hh != 0.0) h[hindex++] = hh;
    while ((eindex < elen) && (findex < flen)) {
      if ((fnow > enow) == (fnow > -enow)) {
        two_sum(q, enow, qnew, hh);
        enow = e[++eindex];
      } else {
        two_sum(q, fnow, qnew, hh);
        fnow = f[++findex];
      }
      q = qnew;
      if (hh != 0.0) h[hindex++] = hh;
    }
  }
  while (eindex < elen) {
    two_sum(q, enow, qnew, hh);
    enow = e[++eindex];
    q = qnew;
    if (hh != 0.0) h[hindex++] = hh;
  }
  while (findex < flen) {
    two_sum(q, fnow, qnew, hh);
    fnow = f[++findex];
    q = qnew;
    if (hh != 0.0) h[hindex++] = hh;
  }
  if ((q != 0.0) || (hindex == 0)) h[hindex++] = q;
  return hindex;
}

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Exact sign of ax*by - ax*cy - cx*by - ay*bx + ay*cx + cy*bx, the fully
// expanded 2x2 orientation determinant.
inline int orient2d_exact(double ax, double ay, double bx, double by,
                          double cx, double cy) {
  double t1[2], t2[2], t3[2], t4[2], t5[2], t6[2];
  two_product(ax, by, t1[1], t1[0]);
  two_product(-ax, cy, t2[1], t2[0]);
  two_product(-cx, by, t3[1], t3[0]);
  two_product(-ay, bx, t4[1], t4[0]);
  two_product(ay, cx, t5[1], t5[0]);
  two_product(cy, bx, t6[1], t6[0]);
  double s12[4], s34[4], s56[4], s1234[8], all[12];
  const int n12 = expansion_sum_zeroelim(2, t1, 2, t2, s12);
  const int n34 = expansion_sum_zeroelim(2, t3, 2, t4, s34);
  const int n56 = expansion_sum_zeroelim(2, t5, 2, t6, s56);
  const int n1234 = expansion_sum_zeroelim(n12, s12, n34, s34, s1234);
  const int nall = expansion_sum_zeroelim(n1234, s1234, n56, s56, all);
  return sign_of(all[nall - 1]);
}

}  // namespace detail

// Orientation of the triple (a, b, c): +1 counter-clockwise, -1 clockwise,
// 0 collinear. The returned sign equals the sign of the exact determinant
//   | ax-cx  ay-cy |
//   | bx-cx  by-cy |
inline int orient2d(double ax, double ay, double bx, double by, double cx,
                    double cy) {
  const double detleft = (ax - cx) * (by - cy);
  const double detright = (ay - cy) * (bx - cx);
  const double det = detleft - detright;
  double detsum;
  // Floating subtraction and multiplication are sign-faithful, so opposite
  // (or zero) signs of the two halves settle the result immediately.
  if (detleft > 0.0) {
    if (detright <= 0.0) return detail::sign_of(det);
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return detail::sign_of(det);
    detsum = -detleft - detright;
  } else {
    return detail::sign_of(det);
  }
  constexpr double ccwerrboundA = 3.3306690738754716e-16;
  const double errbound = ccwerrboundA * detsum;
  if (det >= errbound || -det >= errbound) return detail::sign_of(det);
  return detail::orient2d_exact(ax, ay, bx, by, cx, cy);
}

}  // namespace quadlab
