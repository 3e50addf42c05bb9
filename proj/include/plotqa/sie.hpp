#pragma once

// Geometric reconstruction of a plot's data table from detected elements.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plotqa/detsim.hpp"
#include "plotqa/table.hpp"

namespace plotqa::sie {

using detsim::Detection;
using detsim::DetectionSet;

// Legend label text -> color id of the preview it was paired with.
std::map<std::string, int> associate_legend(const DetectionSet& d);

struct Tick {
  std::string text;
  double pos = 0;  // label centre projected onto its axis, in px
  std::optional<double> value;  // parsed numeric value, if any
};

enum class Axis { x, y };

// Tick labels of one axis sorted by pixel position.
std::vector<Tick> associate_ticks(const DetectionSet& d, Axis axis);

// The ticks of the value axis that parse as numbers. Throws ExtractionError
// when fewer than two are readable.
std::vector<Tick> value_ticks(const DetectionSet& d);

// Linear interpolation of a pixel coordinate between the bracketing ticks,
// extrapolating from the two extreme ticks outside their range.
double interpolate_value(double edge_px, const std::vector<Tick>& ticks);

// Value-edge coordinate of a data mark: top edge for vertical bars, right edge
// for horizontal bars, centre for line vertices and markers.
double value_edge(const Detection& mark, plotgen::PlotType type);

struct MarkAssignment {
  size_t detection = 0;  // index into DetectionSet::detections
  std::optional<size_t> row;  // index into the categorical ticks
  std::optional<std::string> col;
};

// Assigns each data mark a row (nearest categorical tick) and a column
// (legend label with the same color, or `single_col` when there is no legend).
std::vector<MarkAssignment> associate_marks(const DetectionSet& d,
                                            const std::map<std::string, int>& legend,
                                            const std::vector<Tick>& categories,
                                            const std::string& single_col);

struct Extraction {
  SemiStructuredTable table;
  std::vector<std::string> warnings;
  int unassigned_marks = 0;
};

Extraction extract(const DetectionSet& d);
inline SemiStructuredTable extract_table(const DetectionSet& d) { return extract(d).table; }

struct F1 {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

inline constexpr double kDefaultTupleTolerance = 0.02;

// Tuple-level scores over (row header, col header, value) triples.
F1 table_f1(const SemiStructuredTable& pred, const SemiStructuredTable& gold,
            double rel_tol = kDefaultTupleTolerance);

}  // namespace plotqa::sie
