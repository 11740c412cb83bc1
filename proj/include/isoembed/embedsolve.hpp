#pragma once

// Recovering a hypersurface from its intrinsic data (n = 3): solve the
// once-contracted Gauss equation Ric = tr(χ)χ − χ² pointwise, test Codazzi,
// and integrate the frame system to rebuild X.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "isoembed/charts.hpp"
#include "isoembed/intrinsic.hpp"
#include "isoembed/surfaces.hpp"

namespace isoembed {

struct FieldPoint {
    ChartPoint point;
    MetricJet metric; ///< order ≥ 1
    JetMatrix ricci;  ///< order ≥ 1
};

struct IntrinsicField {
    int dim = 3;
    std::vector<FieldPoint> points;
};

/// Metric and Ricci jets of a family at the given chart points. The metric
/// has order 3, so Ricci carries first derivatives.
IntrinsicField intrinsic_field(const Family& family, const std::vector<ChartPoint>& points);

/// Ric + amount·g₁₁·e₁⊗e₁ at every point (derivatives included); the standard
/// non-embeddable test field.
IntrinsicField perturb_ricci(const IntrinsicField& field, double amount);

enum class FrameChoice {
    Cholesky,     ///< e = L^{−T}, g = L Lᵀ
    SymmetricRoot ///< e = g^{−1/2}
};

struct ChiPoint {
    JetMatrix chi;        ///< order 1
    double eps_gap = 0.0; ///< ε of the frame Ricci
    double residual = 0.0; ///< |tr(χ)χ − χ² − Ric| in the frame, relative to max(1, |Ric|)
};

struct ChiField {
    std::vector<ChiPoint> points;
    double max_residual = 0.0;
};

/// χ with its first derivatives at one point; derivatives from the
/// linearization Φ'(A)Ċ = (Ric)˙ − (∂_g of the contracted Gauss map)·ġ.
/// Throws EmbeddabilityObstruction (point index `index`) outside T_n.
ChiPoint solve_point(const MetricJet& metric, const JetMatrix& ricci, std::size_t index = 0,
                     FrameChoice frame = FrameChoice::Cholesky, const PhiInverseOptions& opts = {});

ChiField solve_contracted_gauss(const IntrinsicField& field, FrameChoice frame = FrameChoice::Cholesky,
                                const PhiInverseOptions& opts = {});

struct EmbeddabilityVerdict {
    bool embeddable = false;
    double threshold = 0.0;
    double max_residual = 0.0;
    std::size_t argmax = 0;
    std::vector<double> residuals; ///< per point, max |χ_{ij;k} − χ_{ik;j}|
};

EmbeddabilityVerdict embeddability_check(const IntrinsicField& field, const ChiField& chi, double threshold);

/// 10 × the largest Codazzi residual of the solved χ over the calibration
/// families at the same points, floored at 1e−10.
double calibrate_codazzi_threshold(const std::vector<Family>& families, const std::vector<ChartPoint>& points);
/// Default calibration set: unit S³ and ellipsoids (1, 1.3, 0.8, 1.1), (1.1, 0.9, 1.2, 1).
std::vector<Family> calibration_families();

// ---------------------------------------------------------------------------
// Frame integration

/// Coefficients of the frame system at a chart point.
struct FrameCoefficients {
    Eigen::MatrixXd g;
    std::vector<double> gamma; ///< Γ^k_ij at ((k·n + i)·n + j)
    Eigen::MatrixXd chi;
};

using FrameSource = std::function<FrameCoefficients(const std::vector<double>& y)>;

enum class ChiSource {
    Embedded, ///< χ of the embedding itself
    Solved    ///< χ from the contracted Gauss equation
};

/// Frame coefficients of a family in one chart; `ricci_perturbation` is
/// applied before solving (ignored for Embedded).
FrameSource family_source(const Family& family, Chart chart, ChiSource chi = ChiSource::Solved,
                          double ricci_perturbation = 0.0);

struct FrameState {
    Eigen::VectorXd X;
    Eigen::MatrixXd E; ///< columns E_1..E_n
    Eigen::VectorXd N;
};

/// E = (Lᵀ; 0) with g = L Lᵀ, N = e_{n+1}, X = 0.
FrameState seed_frame(const Eigen::MatrixXd& g);

struct PathPlan {
    Chart chart = Chart::North;
    std::vector<double> center{0.0, 0.0, 0.0};
    int half_width = 3;     ///< lattice nodes on each side of the centre per axis
    double spacing = 0.1;   ///< lattice spacing in chart coordinates
    double step = 1e-2;     ///< integration step (spacing is rounded to a multiple)
};

struct Reconstruction {
    std::vector<std::vector<double>> coords; ///< lattice chart coordinates
    std::vector<Eigen::VectorXd> X;          ///< axis-ascending fill
    std::vector<Eigen::VectorXd> X_reversed; ///< axis-descending fill
    std::vector<FrameState> frames;
    double isometry_residual = 0.0; ///< sup |E_i·E_j − g_ij|
    double holonomy_residual = 0.0; ///< sup |X − X_reversed|
    int substeps = 0;
};

/// One classical RK4 step of the frame system along coordinate `axis`.
FrameState rk4_step(const FrameSource& src, const FrameState& s, std::vector<double> y, int axis, double h);

Reconstruction reconstruct(const FrameSource& src, const PathPlan& plan,
                           std::optional<FrameState> seed = std::nullopt);

struct RigidAlignment {
    Eigen::MatrixXd Q;      ///< orthogonal, det = ±1
    Eigen::VectorXd t;
    double rms = 0.0;
    bool unstable = false;  ///< the centred cloud is numerically rank deficient
};

/// Least-squares Q, t minimising Σ|Q a_i + t − b_i|², reflections allowed.
RigidAlignment align_rigid(const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b);

} // namespace isoembed
