#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvlab/bessel.hpp"
#include "curvlab/transform.hpp"

namespace curvlab {

// Keeps the n largest coefficients (ties broken by flat order) and zeroes the rest.
CoefficientSet threshold(const CoefficientSet& c, std::size_t n);

struct ErrorPoint {
    std::int64_t n = 0;
    double err2 = 0.0;   // ||f - f_N||^2 of the synthesised approximation
    double tail2 = 0.0;  // sum of the squared dropped coefficients
};

struct ErrorCurve {
    std::vector<ErrorPoint> points;
    std::int64_t coefficient_count = 0;
    double energy = 0.0;
};

// Geometric schedule n0, n0*ratio, ... up to max_n (rounded, deduplicated).
std::vector<std::int64_t> geometric_schedule(std::int64_t n0, double ratio, std::int64_t max_n);

// Thresholding errors of f for each N. Each err2 is obtained by synthesis and checked
// against the coefficient tail, which bounds it from above for a tight frame.
ErrorCurve error_curve(const RealGrid& f, const DigitalCurveletFrame& frame, const std::vector<std::int64_t>& ns);

struct FitWindow {
    double n_lo = 32;
    double n_hi = 0;  // 0: a quarter of the coefficient count
};

struct RateReport {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // root mean square of the log-log residuals
    double n_lo = 0.0, n_hi = 0.0;
    int points_used = 0;
    std::optional<double> target_lo, target_hi;
    std::string verdict = "UNCHECKED";
    nlohmann::json to_json() const;
};

// Least-squares slope of log err2 against log N inside the window.
RateReport fit_rate(const ErrorCurve& curve, FitWindow window = {}, bool use_tail = false);
// Same fit on arbitrary positive (x, y) samples.
RateReport fit_loglog(const std::vector<double>& x, const std::vector<double>& y, double x_lo, double x_hi);
void assign_verdict(RateReport& r, std::optional<double> lo, std::optional<double> hi);

// sup_n n^{1/p} |c*_n| over the decreasing rearrangement.
double weak_lp_norm(std::span<const double> magnitudes, double p);
double weak_lp_norm(const CoefficientSet& c, double p);

struct ScaleMaximum {
    int j = 0;
    double max_abs = 0.0;
    double implied_constant = 0.0;  // max_abs / (sup|f| 2^{-js(1+alpha)/2})
};

struct AprioriReport {
    std::vector<ScaleMaximum> scales;
    double slope = 0.0;  // fitted log2 max|c| per scale
    double target = 0.0;  // -s(1+alpha)/2
    int j_lo = 0, j_hi = 0;
    bool vacuous = false;  // fewer than two scales in the window
};

// Per-scale maximal coefficient magnitude and its decay over the scale window [j_lo, j_hi].
// A negative j_hi counts from the top scale (j_max + 1 + j_hi).
AprioriReport apriori_decay_check(const CoefficientSet& c, double f_sup, int j_lo, int j_hi);

struct TailBoundPoint {
    std::int64_t n = 0;
    double bound = 0.0;
};

struct TailBoundCurve {
    std::vector<TailBoundPoint> points;
    int j_top = 0;
    std::size_t wedge_count = 0;
    double remainder = 0.0;  // energy attributed to scales beyond j_top
};

struct TailBoundOptions {
    int j_top = 0;              // 0: deepest scale of a 2^15 grid
    int quadrature_extra = 4;   // scales beyond j_top evaluated by quadrature
    QuadratureOptions quadrature;
};

// Lower-bound estimator for N-term errors of the disc: core energies of all wedges up to
// j_top ranked decreasingly; the bound for N is the energy of all cores not among the N largest.
TailBoundCurve bound1_tail_estimator(const FrameParams& params, const std::vector<std::int64_t>& ns,
                                     const TailBoundOptions& opt = {});

struct GeneratorDecayRow {
    int j = 0;
    double sup = 0.0;             // sampled sup of the rescaled window
    double max_outside = 0.0;     // largest value outside [-1/2,1/2]^2
    double max_inner_box = 0.0;   // largest value inside the small central box (j > 0)
    std::int64_t probes = 0;
};

// Rescaled generators W_{j,0}(A_j xi) probed on a square grid of spacing `step` over [-extent, extent]^2.
std::vector<GeneratorDecayRow> generator_decay_check(const FrameParams& params, double step = 1e-3,
                                                     double extent = 0.75);

}  // namespace curvlab
