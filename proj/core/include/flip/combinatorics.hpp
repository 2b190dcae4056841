#pragma once

namespace flip {

constexpr double binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  double out = 1.0;
  for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

// (n)_r = n (n-1) ... (n-r+1)
constexpr double falling_factorial(double n, int r) {
  double out = 1.0;
  for (int i = 0; i < r; ++i) out *= n - i;
  return out;
}

}  // namespace flip
