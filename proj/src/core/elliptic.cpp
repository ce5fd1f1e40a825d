// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/elliptic.hpp"

#include <cmath>

#include "core/common.hpp"

namespace gcalb
{

double elliptic_K_complement(double kc)
{
  require(kc > 0.0 && kc <= 1.0, "elliptic_K: modulus outside [0, 1)");
  double a = 1.0;
  double b = kc;
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i)
  {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return pi / (a + b);
}

double elliptic_K(double k)
{
  require(k >= 0.0 && k < 1.0, "elliptic_K: modulus outside [0, 1)");
  return elliptic_K_complement(std::sqrt((1.0 - k) * (1.0 + k)));
}

JacobiValues jacobi_sn_cn_dn_complement(double u, double mc)
{
  require(mc > 0.0 && mc <= 1.0, "jacobi_sn_cn_dn: parameter outside [0, 1)");
  JacobiValues out;
  if (mc == 1.0)
  {
    out.sn = std::sin(u);
    out.cn = std::cos(u);
    return out;
  }
  // Descending Landen transformation.
  double em[16], en[16];
  double a = 1.0;
  double c = 1.0;
  double emc = mc;
  double dn = 1.0;
  int l = 0;
  for (int i = 0; i < 16; ++i)
  {
    l = i;
    em[i] = a;
    emc = std::sqrt(emc);
    en[i] = emc;
    c = 0.5 * (a + emc);
    if (std::abs(a - emc) <= 1e-9 * a)
    {
      break;
    }
    emc *= a;
    a = c;
  }
  u *= c;
  double sn = std::sin(u);
  double cn = std::cos(u);
  if (sn != 0.0)
  {
    a = cn / sn;
    c *= a;
    for (int ii = l; ii >= 0; --ii)
    {
      const double b = em[ii];
      a *= c;
      c *= dn;
      dn = (en[ii] + a) / (b + a);
      a = c / b;
    }
    a = 1.0 / std::sqrt(c * c + 1.0);
    sn = (sn >= 0.0) ? a : -a;
    cn = c * sn;
  }
  out.sn = sn;
  out.cn = cn;
  out.dn = dn;
  return out;
}

JacobiValues jacobi_sn_cn_dn(double u, double k)
{
  require(k >= 0.0 && k < 1.0, "jacobi_sn_cn_dn: modulus outside [0, 1)");
  return jacobi_sn_cn_dn_complement(u, (1.0 - k) * (1.0 + k));
}

}  // namespace gcalb
