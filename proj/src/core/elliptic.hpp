// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace gcalb
{

// Complete elliptic integral of the first kind K(k), 0 <= k < 1.
double elliptic_K(double k);
// The same integral parameterized by the complementary modulus k_c = sqrt(1 - k^2),
// which keeps full relative accuracy as k approaches 1.
double elliptic_K_complement(double kc);

struct JacobiValues
{
  double sn = 0.0;
  double cn = 1.0;
  double dn = 1.0;
};

JacobiValues jacobi_sn_cn_dn(double u, double k);
// Parameterized by the complementary parameter m_c = 1 - k^2.
JacobiValues jacobi_sn_cn_dn_complement(double u, double mc);

}  // namespace gcalb
