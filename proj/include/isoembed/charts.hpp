#pragma once

// Two stereographic charts on the unit sphere S^n ⊂ R^{n+1}.
//
//   north: x̂(y) = (2y, 1 − |y|²) / (1 + |y|²)   (y = 0 is the north pole)
//   south: x̂(y) = (2y, |y|² − 1) / (1 + |y|²)   (y = 0 is the south pole)
//
// They overlap on 1/r < |y| < r for chart radius r > 1 and are related by the
// inversion y ↦ y / |y|².

#include <string>
#include <vector>

#include "isoembed/jets.hpp"

namespace isoembed {

enum class Chart { North, South };

inline constexpr double kDefaultChartRadius = 1.8;

std::string to_string(Chart c);
Chart chart_from_string(const std::string& s);
inline Chart other_chart(Chart c) { return c == Chart::North ? Chart::South : Chart::North; }

struct ChartPoint {
    Chart chart = Chart::North;
    std::vector<double> coords;

    int dim() const { return static_cast<int>(coords.size()); }
    double radius() const;
};

/// Same surface point expressed in the other chart. Requires coords ≠ 0.
ChartPoint chart_transition(const ChartPoint& p);

/// Unit-sphere point x̂ as n + 1 jets in the chart coordinates, expanded at p.
std::vector<Jet> sphere_point_jets(const ChartPoint& p, int order);
std::vector<double> sphere_point(const ChartPoint& p);

/// Points of the cubic lattice with `resolution` nodes per axis on
/// [−radius, radius]^n that satisfy |y| ≤ radius.
std::vector<ChartPoint> chart_grid(Chart chart, int dim, int resolution, double radius);

/// Both charts' grids concatenated (north first).
std::vector<ChartPoint> sphere_grid(int dim, int resolution, double radius);

} // namespace isoembed
