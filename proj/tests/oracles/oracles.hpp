// Independent reference computations for the tests. Plain loops over
// std::vector, no Eigen, so a bug in the library cannot hide in both places.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;
using Vector = std::vector<double>;

inline Matrix zeros(std::size_t r, std::size_t c) { return Matrix(r, Vector(c, 0.0)); }

inline Matrix identity(std::size_t n) {
  auto m = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  auto c = zeros(a.size(), b.empty() ? 0 : b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < c[i].size(); ++j)
      for (std::size_t k = 0; k < b.size(); ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Vector multiply(const Matrix& a, const Vector& v) {
  Vector out(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < v.size(); ++k) out[i] += a[i][k] * v[k];
  return out;
}

inline Matrix transpose(const Matrix& a) {
  auto t = zeros(a.empty() ? 0 : a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline double norm(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline Vector symmetric_eigenvalues(Matrix a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  Vector ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Singular values (ascending) as square roots of the eigenvalues of MᵀM.
inline Vector singular_values(const Matrix& m) {
  auto ev = symmetric_eigenvalues(multiply(transpose(m), m));
  for (double& x : ev) x = std::sqrt(std::max(0.0, x));
  return ev;
}
inline double sigma_max(const Matrix& m) { return singular_values(m).back(); }
inline double sigma_min(const Matrix& m) { return singular_values(m).front(); }

/// Laplacian from a[i][j] = weight of edge j -> i.
inline Matrix laplacian(const Matrix& a) {
  const std::size_t n = a.size();
  auto l = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      l[i][j] = -a[i][j];
      l[i][i] += a[i][j];
    }
  }
  return l;
}

inline Matrix kron_identity(const Matrix& a, std::size_t n) {
  auto out = zeros(a.size() * n, a.size() * n);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      for (std::size_t k = 0; k < n; ++k) out[i * n + k][j * n + k] = a[i][j];
  return out;
}

/// Transitive closure reachability: reach[i][j] true if j is reachable from i.
inline std::vector<std::vector<bool>> reachability(const Matrix& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> stack{s};
    r[s][s] = true;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (a[v][u] > 0 && !r[s][v]) {  // edge u -> v
          r[s][v] = true;
          stack.push_back(v);
        }
      }
    }
  }
  return r;
}

/// Gaussian RBF activations, one loop per neuron.
inline Vector rbf(const Matrix& centers, const Vector& widths, const Vector& x) {
  Vector phi(centers.size());
  for (std::size_t j = 0; j < centers.size(); ++j) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) d2 += (x[k] - centers[j][k]) * (x[k] - centers[j][k]);
    phi[j] = std::exp(-d2 / widths[j]);
  }
  return phi;
}

/// Ŵᵀφ by explicit triple loop (W is ϑ×n).
inline Vector weights_times(const Matrix& w, const Vector& phi) {
  const std::size_t n = w.empty() ? 0 : w[0].size();
  Vector out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < w.size(); ++j) out[k] += w[j][k] * phi[j];
  return out;
}

/// One step of the leaky gradient rule, element by element.
inline Matrix tune(const Matrix& w, const Vector& phi, const Vector& hbar, double alpha, double gamma) {
  Matrix out = w;
  for (std::size_t j = 0; j < w.size(); ++j)
    for (std::size_t k = 0; k < w[j].size(); ++k)
      out[j][k] = w[j][k] + alpha * phi[j] * hbar[k] - gamma * w[j][k];
  return out;
}

inline Matrix power(const Matrix& g, std::size_t p) {
  Matrix out = identity(g.size());
  for (std::size_t i = 0; i < p; ++i) out = multiply(out, g);
  return out;
}

/// x(k) = G^k x(0) + Σ_{l<k} G^{k-l-1} v(l), every power formed explicitly.
inline Vector power_sum(const Matrix& g, const Vector& x0, const std::vector<Vector>& v, std::size_t k) {
  Vector out = multiply(power(g, k), x0);
  for (std::size_t l = 0; l < k; ++l) {
    const auto term = multiply(power(g, k - l - 1), v[l]);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += term[i];
  }
  return out;
}

/// Σ_{l<k} G^{k-l-1} v(l) for a diagonal G, with powers by std::pow.
inline Vector diagonal_power_sum(const Vector& g, const std::vector<Vector>& v, std::size_t k) {
  Vector out(g.size(), 0.0);
  for (std::size_t l = 0; l < k; ++l)
    for (std::size_t i = 0; i < g.size(); ++i)
      out[i] += std::pow(g[i], static_cast<double>(k - l - 1)) * v[l][i];
  return out;
}

}  // namespace oracle
