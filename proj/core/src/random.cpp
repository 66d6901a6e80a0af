#include <boost/math/special_functions/erf.hpp>
#include <boost/random/sobol.hpp>
#include <cmath>
#include <string>

#include "seqpareto/error.hpp"
#include "seqpareto/random.hpp"

namespace seqpareto {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) noexcept {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ stream) ^ index);
}

double uniform01(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw DataError("normal quantile needs u in (0, 1)");
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

struct ScrambledSobol::Engine {
  explicit Engine(std::size_t dims) : sobol(static_cast<unsigned>(dims)) {}
  boost::random::sobol_engine<std::uint32_t, 32> sobol;
};

ScrambledSobol::ScrambledSobol(std::size_t dims, std::uint64_t seed) {
  if (dims == 0 || dims > kMaxDims) {
    throw ConfigError("Sobol dimension must be in [1, " + std::to_string(kMaxDims) + "]");
  }
  engine_ = std::make_unique<Engine>(dims);
  Rng rng(seed);
  masks_.resize(dims);
  for (auto& m : masks_) m = static_cast<std::uint32_t>(rng() >> 32);
}

ScrambledSobol::~ScrambledSobol() = default;
ScrambledSobol::ScrambledSobol(ScrambledSobol&&) noexcept = default;
ScrambledSobol& ScrambledSobol::operator=(ScrambledSobol&&) noexcept = default;

void ScrambledSobol::next(std::span<double> out) {
  if (out.size() != dims()) throw DimensionError("Sobol output span has wrong size");
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::uint32_t v = engine_->sobol() ^ masks_[k];
    out[k] = static_cast<double>(v) * 0x1.0p-32;
  }
}

void ScrambledSobol::next_open(std::span<double> out) {
  if (out.size() != dims()) throw DimensionError("Sobol output span has wrong size");
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::uint32_t v = engine_->sobol() ^ masks_[k];
    out[k] = (static_cast<double>(v) + 0.5) * 0x1.0p-32;
  }
}

std::vector<std::vector<double>> ScrambledSobol::take(std::size_t n) {
  std::vector<std::vector<double>> pts(n, std::vector<double>(dims()));
  for (auto& p : pts) next(p);
  return pts;
}

}  // namespace seqpareto
