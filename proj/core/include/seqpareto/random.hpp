#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

namespace seqpareto {

using Rng = std::mt19937_64;

/// Mixes a base seed with stream/index tags into an independent 64-bit seed
/// (splitmix64 finalizer). Used to give every iteration, restart, and
/// worker its own reproducible stream.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0) noexcept;

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng) noexcept;

/// Standard normal quantile function.
double normal_quantile(double u);

/// Sobol low-discrepancy sequence with a seeded random digital shift.
///
/// The shift XORs every coordinate's 32-bit integer with a per-dimension
/// mask, which preserves the net structure of the sequence while making
/// different seeds produce different point sets.
class ScrambledSobol {
 public:
  ScrambledSobol(std::size_t dims, std::uint64_t seed);
  ~ScrambledSobol();
  ScrambledSobol(ScrambledSobol&&) noexcept;
  ScrambledSobol& operator=(ScrambledSobol&&) noexcept;

  std::size_t dims() const noexcept { return masks_.size(); }

  /// Next point with coordinates in [0, 1).
  void next(std::span<double> out);
  /// Next point with coordinates in the open interval (0, 1).
  void next_open(std::span<double> out);

  std::vector<std::vector<double>> take(std::size_t n);

  static constexpr std::size_t kMaxDims = 1111;

 private:
  struct Engine;
  std::unique_ptr<Engine> engine_;
  std::vector<std::uint32_t> masks_;
};

}  // namespace seqpareto
