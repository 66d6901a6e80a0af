#pragma once

// Slow, obviously-correct reference implementations. None of these call
// into the library's numerical routines.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

// a dominates b, maximizing every coordinate.
inline bool dominates_max(const Vec& a, const Vec& b) {
  bool strict = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] < b[k]) return false;
    if (a[k] > b[k]) strict = true;
  }
  return strict;
}

inline Mat signed_copy(const Mat& ys, const std::vector<double>& signs) {
  Mat out = ys;
  for (Vec& y : out) {
    for (std::size_t k = 0; k < y.size(); ++k) y[k] *= signs[k];
  }
  return out;
}

// O(n^2) front: indices not dominated by anyone, dropping later exact copies.
inline std::vector<std::size_t> brute_front(const Mat& raw, const std::vector<double>& signs) {
  const Mat ys = signed_copy(raw, signs);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < ys.size() && keep; ++j) {
      if (j == i) continue;
      if (dominates_max(ys[j], ys[i])) keep = false;
      if (j < i && ys[j] == ys[i]) keep = false;
    }
    if (keep) out.push_back(i);
  }
  return out;
}

// Rank by repeatedly removing the non-dominated set.
inline std::vector<int> peel_ranks(const Mat& raw, const std::vector<double>& signs) {
  const Mat ys = signed_copy(raw, signs);
  std::vector<int> rank(ys.size(), -1);
  std::size_t left = ys.size();
  for (int r = 0; left > 0; ++r) {
    std::vector<std::size_t> layer;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      if (rank[i] >= 0) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < ys.size() && !dominated; ++j) {
        if (rank[j] >= 0 || j == i) continue;
        dominated = dominates_max(ys[j], ys[i]);
      }
      if (!dominated) layer.push_back(i);
    }
    for (std::size_t i : layer) rank[i] = r;
    left -= layer.size();
  }
  return rank;
}

inline double se(const Vec& a, const Vec& b, double ell, double sf2) {
  double d2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d2 += (a[k] - b[k]) * (a[k] - b[k]);
  return sf2 * std::exp(-d2 / (2.0 * ell * ell));
}

struct DensePrediction {
  double mean = 0.0;
  double variance = 0.0;
};

// Explicit inverse of the regularized Gram matrix on standardized outputs,
// in extended precision.
inline DensePrediction dense_gp(const Mat& x, const Vec& y_std, double y_mean, double y_scale, double ell,
                                double sf2, double noise, const Vec& at) {
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  auto kern = [&](const Vec& a, const Vec& b) {
    long double d2 = 0.0L;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const long double diff = static_cast<long double>(a[k]) - b[k];
      d2 += diff * diff;
    }
    return static_cast<long double>(sf2) * std::exp(-d2 / (2.0L * ell * ell));
  };
  const auto n = static_cast<Eigen::Index>(x.size());
  LMat k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) = kern(x[i], x[j]);
    k(i, i) += noise;
  }
  const LMat kinv = k.fullPivLu().inverse();
  LVec ks(n), ys(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ks(i) = kern(x[i], at);
    ys(i) = y_std[i];
  }
  DensePrediction p;
  p.mean = static_cast<double>(y_mean + y_scale * ks.dot(kinv * ys));
  p.variance = static_cast<double>(y_scale * y_scale * std::max(0.0L, sf2 - ks.dot(kinv * ks)));
  return p;
}

// Bi-objective hypervolume by sorting (maximization, reference `ref`).
inline double hv2(Mat pts, const Vec& ref) {
  std::erase_if(pts, [&](const Vec& p) { return !(p[0] > ref[0] && p[1] > ref[1]); });
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) { return a[0] > b[0]; });
  double area = 0.0, top = ref[1];
  for (const Vec& p : pts) {
    if (p[1] > top) {
      area += (p[0] - ref[0]) * (p[1] - top);
      top = p[1];
    }
  }
  return area;
}

inline bool weakly_dominated_by_any(const Mat& pts, const Vec& z) {
  for (const Vec& p : pts) {
    bool all = true;
    for (std::size_t k = 0; k < z.size() && all; ++k) all = p[k] >= z[k];
    if (all) return true;
  }
  return false;
}

// Monte-Carlo hypervolume inside the box [ref, upper].
inline double mc_hv(const Mat& pts, const Vec& ref, const Vec& upper, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double volume = 1.0;
  for (std::size_t k = 0; k < ref.size(); ++k) volume *= upper[k] - ref[k];
  std::size_t hit = 0;
  Vec z(ref.size());
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t k = 0; k < ref.size(); ++k) z[k] = ref[k] + u(rng) * (upper[k] - ref[k]);
    if (weakly_dominated_by_any(pts, z)) ++hit;
  }
  return volume * static_cast<double>(hit) / static_cast<double>(samples);
}

// Midpoint-grid measure of the region dominated by some batch row but by no
// front member, over [ref, upper].
inline double grid_qhvi(const Mat& front, const Mat& batch, const Vec& ref, const Vec& upper, int cells) {
  const double h0 = (upper[0] - ref[0]) / cells, h1 = (upper[1] - ref[1]) / cells;
  std::size_t hit = 0;
  Vec z(2);
  for (int i = 0; i < cells; ++i) {
    z[0] = ref[0] + (i + 0.5) * h0;
    for (int j = 0; j < cells; ++j) {
      z[1] = ref[1] + (j + 0.5) * h1;
      if (weakly_dominated_by_any(batch, z) && !weakly_dominated_by_any(front, z)) ++hit;
    }
  }
  return static_cast<double>(hit) * h0 * h1;
}

// Expected improvement of hv2 under independent normals, by midpoint
// quadrature over +-8 standard deviations.
inline double ehvi_quadrature(const Mat& front, const Vec& ref, const Vec& mu, const Vec& sigma, int cells) {
  const double base = hv2(front, ref);
  const double lo0 = mu[0] - 8 * sigma[0], lo1 = mu[1] - 8 * sigma[1];
  const double h0 = 16 * sigma[0] / cells, h1 = 16 * sigma[1] / cells;
  const double c = 1.0 / std::sqrt(2.0 * M_PI);
  std::vector<double> w0(cells), w1(cells);
  for (int i = 0; i < cells; ++i) {
    const double a = (lo0 + (i + 0.5) * h0 - mu[0]) / sigma[0];
    const double b = (lo1 + (i + 0.5) * h1 - mu[1]) / sigma[1];
    w0[i] = c * std::exp(-0.5 * a * a) * h0 / sigma[0];
    w1[i] = c * std::exp(-0.5 * b * b) * h1 / sigma[1];
  }
  double total = 0.0;
  Mat with = front;
  with.push_back(Vec(2));
  for (int i = 0; i < cells; ++i) {
    for (int j = 0; j < cells; ++j) {
      with.back() = {lo0 + (i + 0.5) * h0, lo1 + (j + 0.5) * h1};
      total += w0[i] * w1[j] * (hv2(with, ref) - base);
    }
  }
  return total;
}

}  // namespace oracle
