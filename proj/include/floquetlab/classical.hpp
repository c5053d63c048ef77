#pragma once

#include <cstdint>

#include "floquetlab/series.hpp"

namespace floquetlab {

struct PhasePoint {
  double theta = 0.0;     // kept in [0, 2pi)
  double momentum = 0.0;  // unbounded
};

// One Chirikov step in the map's own ordering: theta first, then P with the
// NEW theta in the sine (M = 1).
PhasePoint chirikov_step(const PhasePoint& pt, double K, double T);

// Exact inverse (P first, then theta).
PhasePoint chirikov_inverse_step(const PhasePoint& pt, double K, double T);

// <P^2>(j) over an ensemble started at P = 0 with theta uniform from a seeded
// deterministic stream; byte-identical for a fixed seed.
DiagnosticSeries ensemble_second_moment(double K, double T, int n_points, std::uint64_t seed,
                                        int j_max);

}  // namespace floquetlab
