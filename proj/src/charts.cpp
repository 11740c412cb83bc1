#include "isoembed/charts.hpp"

#include <cmath>

namespace isoembed {

std::string to_string(Chart c) { return c == Chart::North ? "north" : "south"; }

Chart chart_from_string(const std::string& s) {
    if (s == "north") return Chart::North;
    if (s == "south") return Chart::South;
    throw PreconditionError("unknown chart '" + s + "'");
}

double ChartPoint::radius() const {
    double r2 = 0.0;
    for (double c : coords) r2 += c * c;
    return std::sqrt(r2);
}

ChartPoint chart_transition(const ChartPoint& p) {
    double r2 = 0.0;
    for (double c : p.coords) r2 += c * c;
    if (r2 == 0.0) throw DomainError("chart_transition: chart centre is not covered by the other chart");
    ChartPoint q{other_chart(p.chart), p.coords};
    for (double& c : q.coords) c /= r2;
    return q;
}

std::vector<Jet> sphere_point_jets(const ChartPoint& p, int order) {
    const int n = p.dim();
    if (n < 1 || n > kMaxJetVars) throw PreconditionError("sphere_point_jets: chart dimension must lie in [1, 3]");
    std::vector<Jet> y;
    Jet r2 = Jet::constant(0.0, order, n);
    for (int i = 0; i < n; ++i) {
        y.push_back(Jet::variable(p.coords[static_cast<std::size_t>(i)], i, order, n));
        r2 += y.back() * y.back();
    }
    const Jet inv = 1.0 / (1.0 + r2);
    std::vector<Jet> x;
    for (int i = 0; i < n; ++i) x.push_back(2.0 * y[static_cast<std::size_t>(i)] * inv);
    x.push_back(p.chart == Chart::North ? (1.0 - r2) * inv : (r2 - 1.0) * inv);
    return x;
}

std::vector<double> sphere_point(const ChartPoint& p) {
    double r2 = 0.0;
    for (double c : p.coords) r2 += c * c;
    std::vector<double> x;
    for (double c : p.coords) x.push_back(2.0 * c / (1.0 + r2));
    x.push_back((p.chart == Chart::North ? 1.0 - r2 : r2 - 1.0) / (1.0 + r2));
    return x;
}

std::vector<ChartPoint> chart_grid(Chart chart, int dim, int resolution, double radius) {
    if (resolution < 2) throw PreconditionError("chart_grid: resolution must be at least 2");
    const double h = 2.0 * radius / (resolution - 1);
    std::vector<ChartPoint> out;
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    while (true) {
        ChartPoint p{chart, {}};
        double r2 = 0.0;
        for (int i : idx) {
            const double c = -radius + h * i;
            p.coords.push_back(c);
            r2 += c * c;
        }
        if (r2 <= radius * radius * (1.0 + 1e-12)) out.push_back(std::move(p));
        int pos = dim - 1;
        while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == resolution) idx[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
    }
    return out;
}

std::vector<ChartPoint> sphere_grid(int dim, int resolution, double radius) {
    auto out = chart_grid(Chart::North, dim, resolution, radius);
    auto south = chart_grid(Chart::South, dim, resolution, radius);
    out.insert(out.end(), south.begin(), south.end());
    return out;
}

} // namespace isoembed
