#include "floquetlab/classical.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "floquetlab/threading.hpp"
#include "floquetlab/types.hpp"

namespace floquetlab {

PhasePoint chirikov_step(const PhasePoint& pt, double K, double T) {
  PhasePoint next;
  next.theta = wrap_angle(pt.theta + T * pt.momentum);
  next.momentum = pt.momentum + K * std::sin(next.theta);
  return next;
}

PhasePoint chirikov_inverse_step(const PhasePoint& pt, double K, double T) {
  PhasePoint prev;
  prev.momentum = pt.momentum - K * std::sin(pt.theta);
  prev.theta = wrap_angle(pt.theta - T * prev.momentum);
  return prev;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform [0, 1) from the top 53 bits; identical on every platform.
double unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

DiagnosticSeries ensemble_second_moment(double K, double T, int n_points, std::uint64_t seed,
                                        int j_max) {
  if (n_points < 100)
    throw std::invalid_argument("ensemble_second_moment: n_points must be >= 100");
  if (j_max < 0) throw std::invalid_argument("ensemble_second_moment: j_max must be >= 0");

  // Fixed-size chunks accumulated in chunk order: the summation order (and so
  // the bytes of the output) does not depend on the worker count.
  constexpr int kChunk = 256;
  const int n_chunks = (n_points + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> partial(static_cast<size_t>(n_chunks));

  parallel_for(static_cast<size_t>(n_chunks), [&](size_t chunk) {
    auto& acc = partial[chunk];
    acc.assign(static_cast<size_t>(j_max) + 1, 0.0);
    const int lo = static_cast<int>(chunk) * kChunk;
    const int hi = std::min(lo + kChunk, n_points);
    for (int i = lo; i < hi; ++i) {
      const std::uint64_t member_seed = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(i)));
      PhasePoint pt{kTwoPi * unit_double(member_seed), 0.0};
      // j = 0 contributes P^2 = 0 by initialization.
      for (int j = 1; j <= j_max; ++j) {
        pt = chirikov_step(pt, K, T);
        acc[static_cast<size_t>(j)] += pt.momentum * pt.momentum;
      }
    }
  });

  DiagnosticSeries series;
  series.kind = SeriesKind::p2;
  series.meta.method = MethodTag::direct;
  series.meta.model = "chirikov K=" + std::to_string(K) + " T=" + std::to_string(T);
  series.meta.dim = n_points;
  const double inv_n = 1.0 / static_cast<double>(n_points);
  for (int j = 0; j <= j_max; ++j) {
    double total = 0.0;
    for (int chunk = 0; chunk < n_chunks; ++chunk)
      total += partial[static_cast<size_t>(chunk)][static_cast<size_t>(j)];
    series.times.push_back(j);
    series.values.push_back(Complex(total * inv_n, 0.0));
  }
  return series;
}

}  // namespace floquetlab
