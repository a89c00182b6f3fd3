// Independent reference implementations used only by the tests.  Everything
// here is recomputed from the defining formulas with plain loops and shares
// no code with the library routines it checks.
#ifndef FLS_TESTS_ORACLE_HPP
#define FLS_TESTS_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "fls/datagen.hpp"

namespace oracle {

struct Moments {
  std::vector<double> g, l;
  double sy2 = 0.0;
  std::size_t n = 0;
};

inline Moments moments(const fls::Sample &s) {
  Moments m;
  m.n = s.n;
  m.g.assign(s.J, 0.0);
  m.l.assign(s.J, 0.0);
  for (std::size_t j = 0; j < s.J; ++j) {
    double gs = 0.0, ls = 0.0;
    for (std::size_t i = 0; i < s.n; ++i) {
      gs += s.Y[i] * s.X[i * s.J + j];
      ls += s.X[i * s.J + j] * s.X[i * s.J + j];
    }
    m.g[j] = gs / static_cast<double>(s.n);
    m.l[j] = ls / static_cast<double>(s.n);
  }
  for (double y : s.Y)
    m.sy2 += y * y;
  m.sy2 /= static_cast<double>(s.n);
  return m;
}

inline bool kept(const Moments &m, std::size_t j) {
  return m.l[j - 1] * static_cast<double>(m.n) >= 1.0;
}

// -sum_{j<=m} w_j g_j^2 / l_j^2 over kept coordinates, recomputed from scratch.
inline double contrast(const Moments &m, const std::vector<double> &w,
                       std::size_t mm) {
  double c = 0.0;
  for (std::size_t j = 1; j <= mm; ++j)
    if (kept(m, j))
      c -= w[j - 1] * (m.g[j - 1] * m.g[j - 1]) / (m.l[j - 1] * m.l[j - 1]);
  return c;
}

inline double delta_hat(const Moments &m, const std::vector<double> &w,
                        std::size_t mm) {
  double D = 0.0, K = 0.0;
  for (std::size_t j = 1; j <= mm; ++j) {
    if (!kept(m, j))
      continue;
    D = std::max(D, w[j - 1] / m.l[j - 1]);
    K = std::max(K, std::max(w[j - 1], 1.0) / m.l[j - 1]);
  }
  const double top = std::log(std::max(K, static_cast<double>(mm + 2)));
  return static_cast<double>(mm) * D * std::fabs(top / std::log(mm + 2.0));
}

inline std::size_t M_hat(const Moments &m, const std::vector<double> &w) {
  const double n = static_cast<double>(m.n);
  std::size_t N = 0;
  double wmax = 0.0;
  for (std::size_t j = 1; j <= std::min(m.n, w.size()); ++j) {
    wmax = std::max(wmax, w[j - 1]);
    if (wmax <= n)
      N = j;
  }
  std::size_t best = 1;
  for (std::size_t M = 1; M <= std::min(N, m.l.size()); ++M)
    if (m.l[M - 1] / (static_cast<double>(M) * std::max(w[M - 1], 1.0)) >=
        std::log(n) / n)
      best = M;
  return best;
}

// First minimizer of v[0..count-1], returned 1-based.
inline std::size_t first_min(const std::vector<double> &v, std::size_t count) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < count; ++i)
    if (v[i] < v[best])
      best = i;
  return best + 1;
}

inline std::size_t select_data_driven(const Moments &m,
                                      const std::vector<double> &w, double eta,
                                      double C) {
  const std::size_t M = M_hat(m, w);
  std::vector<double> crit(M);
  for (std::size_t mm = 1; mm <= M; ++mm)
    crit[mm - 1] = contrast(m, w, mm) +
                   C * m.sy2 * eta * delta_hat(m, w, mm) / static_cast<double>(m.n);
  return first_min(crit, M);
}

// Plain (non-log) evaluation of the PP intrinsic delta_m.
inline std::vector<double> delta_pp(double a, double s, std::size_t J,
                                    bool pair) {
  std::vector<double> out;
  double D = 0.0, K = 0.0;
  for (std::size_t m = 1; m <= J; ++m) {
    std::size_t k = (pair && m >= 3 && m % 2 == 1) ? m - 1 : m;
    const double lam = std::pow(static_cast<double>(k), -2.0 * a);
    const double w = std::pow(static_cast<double>(m), 2.0 * s);
    D = std::max(D, w / lam);
    K = std::max(K, std::max(w, 1.0) / lam);
    out.push_back(static_cast<double>(m) * D *
                  std::fabs(std::log(std::max(K, m + 2.0)) / std::log(m + 2.0)));
  }
  return out;
}

inline std::size_t select_known(const Moments &m, const std::vector<double> &w,
                                const std::vector<double> &delta,
                                std::size_t M, double eta, double C) {
  std::vector<double> crit(M);
  for (std::size_t mm = 1; mm <= M; ++mm)
    crit[mm - 1] = contrast(m, w, mm) +
                   C * m.sy2 * eta * delta[mm - 1] / static_cast<double>(m.n);
  return first_min(crit, M);
}

} // namespace oracle

#endif
