#pragma once

#include <string>
#include <vector>

#include "floquetlab/types.hpp"

namespace floquetlab {

enum class SeriesKind { echo, a_j, sff, otoc, p2 };
enum class MethodTag { direct, eigensystem };

struct SeriesMeta {
  MethodTag method = MethodTag::direct;
  std::string model;          // short parameter label
  std::string initial_state;  // e.g. "|0>"
  int dim = 0;
  bool truncated = false;     // edge contamination cut the sweep short
  int truncated_at = -1;      // first kick index that was not evaluated
};

// Kick-indexed diagnostic values. echo/otoc/p2 are real-valued; A_j is complex
// in general and kept as such.
struct DiagnosticSeries {
  SeriesKind kind = SeriesKind::echo;
  std::vector<int> times;
  std::vector<Complex> values;
  SeriesMeta meta;
};

struct WignerGrid {
  RVector theta;               // n_theta uniform samples of [0, 2pi)
  std::vector<int> p_labels;   // integer momentum labels -N..N
  RMatrix values;              // n_theta x dim, W(theta_t, p_l)
  int time_index = 0;
  double max_imag_residue = 0.0;
};

}  // namespace floquetlab
