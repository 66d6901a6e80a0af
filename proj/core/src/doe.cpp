#include "seqpareto/doe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "seqpareto/error.hpp"
#include "seqpareto/pool.hpp"
#include "seqpareto/random.hpp"

namespace seqpareto {

std::string_view to_string(DoeMethod m) noexcept {
  switch (m) {
    case DoeMethod::Lhs: return "lhs";
    case DoeMethod::Uds: return "uds";
    case DoeMethod::SpherePacking: return "spm";
  }
  return "?";
}

DoeMethod parse_doe_method(std::string_view text) {
  if (text == "lhs" || text == "LHS") return DoeMethod::Lhs;
  if (text == "uds" || text == "UDS") return DoeMethod::Uds;
  if (text == "spm" || text == "SPM" || text == "sphere-packing") return DoeMethod::SpherePacking;
  throw ConfigError("unknown design method '" + std::string(text) + "'");
}

namespace {

void check_request(std::size_t n, std::size_t d) {
  if (n < 1) throw ConfigError("design size n must be >= 1");
  if (d < 1) throw ConfigError("design dimensionality d must be >= 1");
}

// Keeps generated coordinates inside [0, 1).
double below_one(double v) { return std::min(v, std::nextafter(1.0, 0.0)); }

double squared_distance(const DesignPoint& a, const DesignPoint& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

}  // namespace

std::vector<DesignPoint> lhs(std::size_t n, std::size_t d, std::uint64_t seed) {
  check_request(n, d);
  Rng rng(derive_seed(seed, 0x6c6873));
  std::vector<DesignPoint> pts(n, DesignPoint(d));
  std::vector<std::size_t> strata(n);
  for (std::size_t k = 0; k < d; ++k) {
    std::iota(strata.begin(), strata.end(), std::size_t{0});
    std::shuffle(strata.begin(), strata.end(), rng);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = uniform01(rng);
      pts[i][k] = below_one((static_cast<double>(strata[i]) + u) / static_cast<double>(n));
    }
  }
  return pts;
}

std::vector<DesignPoint> uds(std::size_t n, std::size_t d, std::uint64_t seed, bool random) {
  check_request(n, d);
  if (random) {
    Rng rng(derive_seed(seed, 0x756e69));
    std::vector<DesignPoint> pts(n, DesignPoint(d));
    for (auto& p : pts) {
      for (double& v : p) v = uniform01(rng);
    }
    return pts;
  }
  ScrambledSobol sobol(d, derive_seed(seed, 0x756473));
  return sobol.take(n);
}

SpherePackingResult sphere_packing(std::size_t n, std::size_t d, std::uint64_t seed,
                                   const SpherePackingOptions& options) {
  check_request(n, d);
  Rng rng(derive_seed(seed, 0x73706d));
  SpherePackingResult result;
  result.points.assign(n, DesignPoint(d));
  for (auto& p : result.points) {
    for (double& v : p) v = uniform01(rng);
  }
  if (n == 1) {
    result.min_distance_trace.push_back(0.0);
    return result;
  }

  auto& pts = result.points;
  // Nearest-neighbour squared distance and index per point.
  std::vector<double> nn(n);
  std::vector<std::size_t> nn_idx(n);
  auto refresh = [&](std::size_t i) {
    nn[i] = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double s = squared_distance(pts[i], pts[j]);
      if (s < nn[i]) {
        nn[i] = s;
        nn_idx[i] = j;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);
  auto current_min = [&] { return std::sqrt(*std::min_element(nn.begin(), nn.end())); };
  result.min_distance_trace.push_back(current_min());

  DesignPoint proposal(d);
  DesignPoint best_proposal(d);
  std::size_t stale = 0;
  for (std::size_t sweep = 0; sweep < options.sweeps; ++sweep) {
    const auto a = static_cast<std::size_t>(std::min_element(nn.begin(), nn.end()) - nn.begin());
    const std::size_t b = nn_idx[a];
    const double floor_sq = nn[a];
    bool moved = false;
    for (std::size_t mover : {a, b}) {
      double best_sq = -1.0;
      for (std::size_t t = 0; t < options.proposals; ++t) {
        for (double& v : proposal) v = uniform01(rng);
        double near = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n && near > best_sq; ++j) {
          if (j != mover) near = std::min(near, squared_distance(proposal, pts[j]));
        }
        if (near > best_sq) {
          best_sq = near;
          best_proposal = proposal;
        }
      }
      // A strict gain for the mover keeps the global minimum non-decreasing:
      // all other pairs were already at least floor_sq apart.
      if (best_sq > floor_sq) {
        pts[mover] = best_proposal;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == mover || nn_idx[i] == mover) {
            refresh(i);
          } else {
            const double s = squared_distance(pts[i], pts[mover]);
            if (s < nn[i]) {
              nn[i] = s;
              nn_idx[i] = mover;
            }
          }
        }
        moved = true;
        break;
      }
    }
    result.min_distance_trace.push_back(current_min());
    stale = moved ? 0 : stale + 1;
    if (stale >= options.patience) break;
  }
  result.radius = 0.5 * result.min_distance_trace.back();
  return result;
}

std::vector<DesignPoint> generate_design(const DoeRequest& request) {
  switch (request.method) {
    case DoeMethod::Lhs: return lhs(request.n, request.d, request.seed);
    case DoeMethod::Uds: return uds(request.n, request.d, request.seed, request.uds_random);
    case DoeMethod::SpherePacking: return sphere_packing(request.n, request.d, request.seed).points;
  }
  throw ConfigError("unknown design method");
}

std::vector<std::size_t> project_to_pool(const std::vector<DesignPoint>& design, CandidatePool& pool) {
  std::vector<std::size_t> chosen;
  chosen.reserve(design.size());
  for (const auto& x : design) {
    const std::size_t idx = pool.nearest_unconsumed(x);
    pool.consume(idx);
    chosen.push_back(idx);
  }
  return chosen;
}

}  // namespace seqpareto
