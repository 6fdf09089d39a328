#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace curvlab {

// Parameters of one alpha-curvelet frame together with the sampling grid it is
// realised on. Use make() to obtain the documented defaults.
struct FrameParams {
    double s = 1.0;
    double alpha = 0.5;
    double corona_constant = 0.0;
    double tau1 = 0.0;
    double tau2 = 0.0;
    int j_max = 0;
    int grid_n = 256;

    static FrameParams make(double s, double alpha, int grid_n);
    static double default_corona_constant(double s);

    // Largest j whose full frequency support fits below the grid Nyquist rate.
    static int default_j_max(double s, double corona_constant, double tau2, int grid_n);
    // Largest j whose corona still starts below the Nyquist rate; larger j_max is rejected.
    static int max_j_max(double s, double corona_constant, double tau2, int grid_n);

    void validate() const;
    nlohmann::json to_json() const;
    static FrameParams from_json(const nlohmann::json& j);
};

struct ScaleAngleIndex {
    int j = 0;
    int ell = 0;
    bool operator==(const ScaleAngleIndex&) const = default;
};

enum class TileKind { Low, Wedge, Closure };

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct RotatedRect {
    double half_length = 0.0;  // along the wedge direction
    double half_width = 0.0;
    double angle = 0.0;        // direction of the long axis
};

struct WrapPeriods {
    int p1 = 2;
    int p2 = 2;
    std::int64_t count() const { return std::int64_t(p1) * p2; }
};

struct WedgeSpec {
    TileKind kind = TileKind::Wedge;
    ScaleAngleIndex index;
    int tiles_at_scale = 1;
    double fundamental_angle = 0.0;
    double orientation = 0.0;  // ell * fundamental_angle
    double direction = 0.0;    // polar angle of the wedge centre line (-orientation)
    Interval radial_support;
    Interval radial_core;
    double angular_halfwidth_outer = 0.0;
    double angular_halfwidth_inner = 0.0;
    RotatedRect bounding_rect;
    WrapPeriods wrap;
    std::int64_t support_cardinality = 0;
    bool isotropic() const { return kind != TileKind::Wedge || tiles_at_scale == 1; }
};

int tiles_at_scale(int j, double s, double alpha);
double fundamental_angle(int j, double s, double alpha);

// C^2 step: 0 for t <= 0, 1 for t >= 1, with step(t)^2 + step(1-t)^2 = 1.
double smooth_step(double t);

class WindowProfile {
public:
    explicit WindowProfile(const FrameParams& p);

    double low(double r) const;               // U_0
    double generator(double rho) const;       // U
    double angular(double t) const;           // angular bump in radians
    double angular_units(double a) const;     // same bump, argument in units of pi
    double radial(int j, double r) const;     // U_j(r) = U(2^{-js} r), j >= 1
    double closure(int j_top, double r) const;
    double corona_constant() const { return c_; }
    double tau1() const { return tau1_; }
    double tau2() const { return tau2_; }
    double s() const { return s_; }

private:
    double ramp(double rho) const;
    double c_, tau1_, tau2_, s_;
};

struct LatticePoint {
    std::int32_t k1 = 0;
    std::int32_t k2 = 0;
};

// Lattice points of one wedge (frequency k/2, centred integer coordinates) with
// the window values sampled there. Only points with a nonzero window are kept.
struct TileSupport {
    std::vector<LatticePoint> points;
    std::vector<double> values;
};

struct LayoutOptions {
    bool include_closure = true;
};

struct TilingLayout {
    FrameParams params;
    std::vector<WedgeSpec> wedges;
    std::vector<TileSupport> supports;

    std::size_t wedge_count() const { return wedges.size(); }
    // Position of (j, ell) in the wedge table or -1.
    long find(int j, int ell) const;
    long closure_position() const;
    std::int64_t coefficient_count() const;
};

double wedge_value(double xi1, double xi2, const WedgeSpec& spec, const WindowProfile& profile);

// Geometry of a single tile: j = 0 gives the coarse tile; j >= 1 need not be <= j_max.
WedgeSpec make_wedge(const FrameParams& p, int j, int ell);

// Geometry of all wedges without lattice supports or wrap periods.
std::vector<WedgeSpec> wedge_geometry(const FrameParams& p, bool include_closure = true);

TilingLayout build_layout(const FrameParams& p, const LayoutOptions& opt = {});

// max over an n x n frequency lattice (n = lattice_n, default: the layout grid)
// of |sum_J W_J^2 - 1|, evaluating every wedge of the layout afresh.
double verify_partition(const TilingLayout& layout, int lattice_n = 0);

// Smallest even box whose translates keep the support points distinct.
WrapPeriods find_wrap_periods(const std::vector<LatticePoint>& points, int grid_n);

nlohmann::json layout_to_json(const TilingLayout& layout);

}  // namespace curvlab
