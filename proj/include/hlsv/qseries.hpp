#pragma once
// t-deformed special functions: the t-Pochhammer symbol (z;t)_inf, the
// t-factorial k_t!, the t-Gamma function, and the spiral function
// S(w, z; u, t), a bilateral sine-kernel sum obtained from Mellin-Barnes
// resummation of t-power series.

#include "hlsv/common.hpp"

namespace hlsv {

// (z;t)_inf = prod_{n>=0} (1 - z t^n), truncated once the logarithmic tail
// bound sum_{n>n0} |z| t^n / (1 - |z| t^n) drops below tol.abs_tol.
cplx t_pochhammer(cplx z, double t, const QTol& tol = {});

// log (z;t)_inf as a sum of principal per-factor logs; exp of it recovers the
// product exactly (including phase). Usable when |z| t^n crosses 1 and the
// plain product would overflow. Returns -inf real part at an exact zero.
cplx t_pochhammer_log(cplx z, double t, const QTol& tol = {});

// k_t! = (1-t)(1-t^2)...(1-t^k) / (1-t)^k
double t_factorial(int k, double t);

// Gamma_t(x) = (t;t)_inf / (t^x;t)_inf * (1-t)^(1-x). Throws PoleHit when
// (t^x;t)_inf vanishes.
cplx t_gamma(cplx x, double t, const QTol& tol = {});

// S(w, z; u, t) = sum_{m in Z} pi [-u]^{A + i m B} / sin(-pi (A + i m B))
// with A = (log w - log z)/log t and B = -2 pi / log t, principal logs.
// Defined for zw != 0, |z| != t^n |w| (all integer n), u off [0, inf).
// u = 0 gives 0. Throws OnSpiral when |z| is within 1e-12 relative of some
// t^n |w|, Nonconvergence when the bilateral sum fails to settle.
cplx spiral_S(cplx w, cplx z, const LogNeg& u, double t, const QTol& tol = {});

// 1 / (u t^{-ell}; t)_inf, the single-site t-Laplace weight, computed through
// the log-space Pochhammer so large ell does not overflow.
cplx t_laplace_weight(const LogNeg& u, int ell, double t, const QTol& tol = {});

}  // namespace hlsv
