#include "curvlab/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"

namespace curvlab {

using std::numbers::pi;

double FrameParams::default_corona_constant(double s) { return std::exp2(-s) / (3.0 * pi); }

int FrameParams::default_j_max(double s, double c, double tau2, int grid_n) {
    int j = 0;
    while (c * std::exp2(s * (j + 2)) * tau2 <= grid_n / 4.0) ++j;
    return j;
}

int FrameParams::max_j_max(double s, double c, double tau2, int grid_n) {
    int j = 0;
    while (c * std::exp2(s * (j + 1)) * tau2 <= grid_n / 4.0) ++j;
    return j;
}

FrameParams FrameParams::make(double s, double alpha, int grid_n) {
    FrameParams p;
    p.s = s;
    p.alpha = alpha;
    p.grid_n = grid_n;
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("s must be positive");
    p.corona_constant = default_corona_constant(s);
    p.tau1 = std::exp2(s / 3.0);
    p.tau2 = std::exp2(2.0 * s / 3.0);
    p.j_max = default_j_max(s, p.corona_constant, p.tau2, grid_n);
    p.validate();
    return p;
}

void FrameParams::validate() const {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("s must be positive and finite");
    if (!std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite");
    if (alpha > 1.0 && std::floor(j_max * s * (1.0 - alpha) + 1e-9) < -1.0)
        throw std::invalid_argument("alpha > 1 leaves fewer than one angular tile at scale j_max; lower j_max or alpha");
    if (!(corona_constant > 0.0) || !std::isfinite(corona_constant))
        throw std::invalid_argument("corona constant must be positive");
    if (!(tau1 > 1.0 && tau1 < tau2 && tau2 <= std::exp2(s) && tau2 < std::exp2(s) * tau1))
        throw std::invalid_argument("transition constants must satisfy 1 < tau1 < tau2 <= 2^s, tau2 < 2^s tau1");
    if (grid_n < 16 || grid_n % 2 != 0) throw std::invalid_argument("grid_n must be even and at least 16");
    if (j_max < 0) throw std::invalid_argument("j_max must be nonnegative");
    if (j_max > max_j_max(s, corona_constant, tau2, grid_n))
        throw std::invalid_argument("j_max exceeds the Nyquist bound of the grid");
    tiles_at_scale(j_max, s, alpha);
}

nlohmann::json FrameParams::to_json() const {
    return {{"s", s},           {"alpha", alpha}, {"corona_constant", corona_constant},
            {"tau1", tau1},     {"tau2", tau2},   {"j_max", j_max},
            {"grid_n", grid_n}};
}

FrameParams FrameParams::from_json(const nlohmann::json& j) {
    FrameParams p;
    p.s = j.value("s", 1.0);
    p.alpha = j.value("alpha", 0.5);
    p.grid_n = j.value("grid_n", 256);
    if (!(p.s > 0.0) || !std::isfinite(p.s)) throw std::invalid_argument("s must be positive");
    p.corona_constant = default_corona_constant(p.s);
    p.tau1 = std::exp2(p.s / 3.0);
    p.tau2 = std::exp2(2.0 * p.s / 3.0);
    p.corona_constant = j.value("corona_constant", p.corona_constant);
    p.tau1 = j.value("tau1", p.tau1);
    p.tau2 = j.value("tau2", p.tau2);
    if (j.contains("j_max") && !j["j_max"].is_null())
        p.j_max = j["j_max"].get<int>();
    else
        p.j_max = default_j_max(p.s, p.corona_constant, p.tau2, p.grid_n);
    p.validate();
    return p;
}

int tiles_at_scale(int j, double s, double alpha) {
    if (j < 0) throw std::invalid_argument("scale must be nonnegative");
    if (j == 0) return 1;
    // Small slack so that exact integers like 3 * (2/3) are not floored to 1.
    double e = std::floor(j * s * (1.0 - alpha) + 1e-9);
    if (e > 24) throw std::invalid_argument("too many angular tiles at this scale");
    if (e < -1) throw std::invalid_argument("fewer than one angular tile at this scale");
    return 1 << (int(e) + 1);
}

double fundamental_angle(int j, double s, double alpha) { return pi / tiles_at_scale(j, s, alpha); }

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double p = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    return std::sin(0.5 * pi * p);
}

WindowProfile::WindowProfile(const FrameParams& p)
    : c_(p.corona_constant), tau1_(p.tau1), tau2_(p.tau2), s_(p.s) {}

double WindowProfile::ramp(double rho) const { return (c_ * tau2_ - rho) / (c_ * (tau2_ - tau1_)); }

double WindowProfile::low(double r) const {
    if (r <= c_ * tau1_) return 1.0;
    if (r < c_ * tau2_) return smooth_step(ramp(r));
    return 0.0;
}

double WindowProfile::generator(double rho) const {
    double lower = rho * std::exp2(s_);
    if (lower <= c_ * tau1_) return 0.0;
    if (lower < c_ * tau2_) return smooth_step(1.0 - ramp(lower));
    if (rho <= c_ * tau1_) return 1.0;
    if (rho < c_ * tau2_) return smooth_step(ramp(rho));
    return 0.0;
}

double WindowProfile::radial(int j, double r) const {
    // The lower transition of scale j and the upper one of scale j-1 are evaluated
    // from the same rescaled radius so that their squares sum to one.
    double lower = r * std::exp2(-(j - 1) * s_);
    if (lower <= c_ * tau1_) return 0.0;
    if (lower < c_ * tau2_) return smooth_step(1.0 - ramp(lower));
    double rho = r * std::exp2(-j * s_);
    if (rho <= c_ * tau1_) return 1.0;
    if (rho < c_ * tau2_) return smooth_step(ramp(rho));
    return 0.0;
}

double WindowProfile::closure(int j_top, double r) const {
    double rho = r * std::exp2(-j_top * s_);
    if (rho <= c_ * tau1_) return 0.0;
    if (rho < c_ * tau2_) return smooth_step(1.0 - ramp(rho));
    return 1.0;
}

double WindowProfile::angular_units(double a) const {
    a = std::fabs(a);
    if (a <= 0.25) return 1.0;
    if (a >= 0.75) return 0.0;
    return smooth_step(1.5 - 2.0 * a);
}

double WindowProfile::angular(double t) const { return angular_units(t / pi); }

namespace {

// Angular coordinate of xi relative to wedge ell of a scale with L tiles, in units
// of the fundamental angle and reduced to the representative closest to zero.
double angular_offset(double xi1, double xi2, int L, int ell) {
    // V is pi-periodic; evaluating on a canonical half plane makes W(xi) = W(-xi) exact.
    if (xi2 < 0.0 || (xi2 == 0.0 && xi1 < 0.0)) {
        xi1 = -xi1;
        xi2 = -xi2;
    }
    double y = L * std::atan2(xi2, xi1) / pi;
    double ry = std::nearbyint(y);
    double f = y - ry;
    long m = (static_cast<long>(ry) + ell) % L;
    if (m < 0) m += L;
    double a1 = f + double(m);
    double a2 = f + double(m - L);
    return std::fabs(a1) <= std::fabs(a2) ? a1 : a2;
}

int wrap_ell(long ell, int L) {
    long h = L / 2;
    long m = ((ell + h) % L + L) % L;
    return int(m - h);
}

// Finds the wedges of a table that may be nonzero at a lattice point.
class TileLocator {
public:
    TileLocator(const FrameParams& p, const std::vector<WedgeSpec>& wedges) : p_(p), wedges_(wedges) {
        scale_offset_.assign(p.j_max + 2, -1);
        for (std::size_t i = 0; i < wedges.size(); ++i) {
            const auto& w = wedges[i];
            if (w.kind == TileKind::Low) low_ = long(i);
            if (w.kind == TileKind::Closure) closure_ = long(i);
            if (w.kind == TileKind::Wedge && scale_offset_[w.index.j] < 0)
                scale_offset_[w.index.j] = long(i) - (w.index.ell + w.tiles_at_scale / 2);
        }
        for (int j = 1; j <= p.j_max; ++j) tiles_.push_back(tiles_at_scale(j, p.s, p.alpha));
    }

    template <class Fn>
    void visit(double xi1, double xi2, const WindowProfile& prof, Fn&& fn) const {
        double r = std::sqrt(xi1 * xi1 + xi2 * xi2);
        if (low_ >= 0) fn(low_);
        if (closure_ >= 0) fn(closure_);
        if (r == 0.0 || p_.j_max == 0) return;
        double c = p_.corona_constant;
        int jlo = std::max(1, int(std::floor(std::log2(r / (c * p_.tau2)) / p_.s)) - 1);
        int jhi = std::min(p_.j_max, int(std::floor(std::log2(r / (c * p_.tau1)) / p_.s)) + 2);
        for (int j = jlo; j <= jhi; ++j) {
            if (scale_offset_[j] < 0 && j != 0) continue;
            if (prof.radial(j, r) == 0.0) continue;
            int L = tiles_[j - 1];
            double ax = xi1, ay = xi2;
            if (ay < 0.0 || (ay == 0.0 && ax < 0.0)) {
                ax = -ax;
                ay = -ay;
            }
            long centre = -static_cast<long>(std::nearbyint(L * std::atan2(ay, ax) / pi));
            int seen[3];
            int nseen = 0;
            for (long d = -1; d <= 1; ++d) {
                int ell = wrap_ell(centre + d, L);
                bool dup = false;
                for (int q = 0; q < nseen; ++q) dup |= (seen[q] == ell);
                if (dup) continue;
                seen[nseen++] = ell;
                fn(scale_offset_[j] + ell + L / 2);
            }
        }
    }

private:
    const FrameParams& p_;
    const std::vector<WedgeSpec>& wedges_;
    std::vector<long> scale_offset_;
    std::vector<int> tiles_;
    long low_ = -1;
    long closure_ = -1;
};

int next_fft_size(int n) {
    for (int m = std::max(n, 2);; ++m) {
        int r = m;
        for (int f : {2, 3, 5, 7})
            while (r % f == 0) r /= f;
        if (r == 1) return m;
    }
}

}  // namespace

double wedge_value(double xi1, double xi2, const WedgeSpec& spec, const WindowProfile& profile) {
    double r = std::sqrt(xi1 * xi1 + xi2 * xi2);
    switch (spec.kind) {
        case TileKind::Low:
            return profile.low(r);
        case TileKind::Closure:
            return profile.closure(spec.index.j - 1, r);
        case TileKind::Wedge:
            break;
    }
    double u = profile.radial(spec.index.j, r);
    if (u == 0.0) return 0.0;
    if (spec.tiles_at_scale == 1) return u;
    return u * profile.angular_units(angular_offset(xi1, xi2, spec.tiles_at_scale, spec.index.ell));
}

WedgeSpec make_wedge(const FrameParams& p, int j, int ell) {
    const double c = p.corona_constant;
    WedgeSpec w;
    if (j == 0) {
        w.kind = TileKind::Low;
        w.index = {0, 0};
        w.tiles_at_scale = 1;
        w.fundamental_angle = pi;
        w.radial_support = {0.0, c * p.tau2};
        w.radial_core = {0.0, c * p.tau1};
        // The coarse tile is isotropic, so its core covers the full circle.
        w.angular_halfwidth_outer = w.angular_halfwidth_inner = pi / 2;
        w.bounding_rect = {0.5, 0.5, 0.0};
        return w;
    }
    const int L = tiles_at_scale(j, p.s, p.alpha);
    if (ell < -L / 2 || ell >= L - L / 2) throw std::out_of_range("angular index out of range");
    const double phi = pi / L;
    w.kind = TileKind::Wedge;
    w.index = {j, ell};
    w.tiles_at_scale = L;
    w.fundamental_angle = phi;
    w.orientation = ell * phi;
    w.direction = -ell * phi;
    w.radial_support = {c * std::exp2((j - 1) * p.s) * p.tau1, c * std::exp2(j * p.s) * p.tau2};
    w.radial_core = {c * std::exp2((j - 1) * p.s) * p.tau2, c * std::exp2(j * p.s) * p.tau1};
    w.angular_halfwidth_outer = L == 1 ? pi / 2 : 0.75 * phi;
    w.angular_halfwidth_inner = L == 1 ? pi / 2 : 0.25 * phi;
    w.bounding_rect = {std::exp2(j * p.s - 1), std::exp2(j * p.s * p.alpha - 1), w.direction};
    return w;
}

std::vector<WedgeSpec> wedge_geometry(const FrameParams& p, bool include_closure) {
    p.validate();
    const double c = p.corona_constant;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<WedgeSpec> out;
    out.push_back(make_wedge(p, 0, 0));
    for (int j = 1; j <= p.j_max; ++j) {
        int L = tiles_at_scale(j, p.s, p.alpha);
        for (int ell = -L / 2; ell < L - L / 2; ++ell) out.push_back(make_wedge(p, j, ell));
    }
    if (include_closure) {
        WedgeSpec cl;
        cl.kind = TileKind::Closure;
        cl.index = {p.j_max + 1, 0};
        cl.tiles_at_scale = 1;
        cl.fundamental_angle = pi;
        cl.radial_support = {c * std::exp2(p.j_max * p.s) * p.tau1, inf};
        cl.radial_core = {c * std::exp2(p.j_max * p.s) * p.tau2, inf};
        cl.angular_halfwidth_outer = cl.angular_halfwidth_inner = pi / 2;
        cl.bounding_rect = {inf, inf, 0.0};
        out.push_back(cl);
    }
    return out;
}

long TilingLayout::find(int j, int ell) const {
    for (std::size_t i = 0; i < wedges.size(); ++i)
        if (wedges[i].index.j == j && wedges[i].index.ell == ell) return long(i);
    return -1;
}

long TilingLayout::closure_position() const {
    for (std::size_t i = 0; i < wedges.size(); ++i)
        if (wedges[i].kind == TileKind::Closure) return long(i);
    return -1;
}

std::int64_t TilingLayout::coefficient_count() const {
    std::int64_t n = 0;
    for (const auto& w : wedges) n += w.wrap.count();
    return n;
}

WrapPeriods find_wrap_periods(const std::vector<LatticePoint>& pts, int grid_n) {
    if (pts.empty()) return {2, 2};
    int min1 = pts[0].k1, max1 = pts[0].k1, min2 = pts[0].k2, max2 = pts[0].k2;
    for (const auto& q : pts) {
        min1 = std::min(min1, q.k1);
        max1 = std::max(max1, q.k1);
        min2 = std::min(min2, q.k2);
        max2 = std::max(max2, q.k2);
    }
    const int e1 = max1 - min1 + 1, e2 = max2 - min2 + 1;
    auto even_up = [](long v) { return int(v + (v & 1)); };
    const int cap1 = std::min(grid_n, even_up(std::max(e1, 2)));
    const int cap2 = std::min(grid_n, even_up(std::max(e2, 2)));

    // Occupied differences q - q' on [-(e-1), e-1]^2.
    const int w1 = 2 * e1 - 1, w2 = 2 * e2 - 1;
    std::vector<char> diff(std::size_t(w1) * w2, 0);
    const double npts = double(pts.size());
    if (npts * npts < 64.0 * double(w1) * w2) {
        for (std::size_t a = 0; a < pts.size(); ++a)
            for (std::size_t b = 0; b < pts.size(); ++b) {
                int d1 = pts[a].k1 - pts[b].k1 + e1 - 1;
                int d2 = pts[a].k2 - pts[b].k2 + e2 - 1;
                diff[std::size_t(d1) * w2 + d2] = 1;
            }
    } else {
        const int m1 = next_fft_size(w1), m2 = next_fft_size(w2);
        std::vector<std::complex<double>> buf(std::size_t(m1) * m2);
        for (const auto& q : pts) buf[std::size_t(q.k1 - min1) * m2 + (q.k2 - min2)] = 1.0;
        detail::FftPlan2d fwd(m1, m2, FFTW_FORWARD), bwd(m1, m2, FFTW_BACKWARD);
        fwd.execute(buf.data());
        for (auto& v : buf) v = std::norm(v);
        bwd.execute(buf.data());
        const double scale = 1.0 / (double(m1) * m2);
        for (int d1 = -(e1 - 1); d1 <= e1 - 1; ++d1)
            for (int d2 = -(e2 - 1); d2 <= e2 - 1; ++d2) {
                int i1 = (d1 + m1) % m1, i2 = (d2 + m2) % m2;
                if (buf[std::size_t(i1) * m2 + i2].real() * scale > 0.5)
                    diff[std::size_t(d1 + e1 - 1) * w2 + (d2 + e2 - 1)] = 1;
            }
    }

    auto feasible = [&](int p1, int p2) {
        for (int a = 0; a * p1 <= e1 - 1; ++a)
            for (int b = -((e2 - 1) / p2); b * p2 <= e2 - 1; ++b) {
                if (a == 0 && b <= 0) continue;
                if (diff[std::size_t(a * p1 + e1 - 1) * w2 + (b * p2 + e2 - 1)]) return false;
            }
        return true;
    };

    WrapPeriods best{cap1, cap2};
    std::int64_t best_count = best.count();
    const std::int64_t n = std::int64_t(pts.size());
    for (int p1 = 2; p1 <= cap1; p1 += 2) {
        int start = even_up(std::max<std::int64_t>(2, (n + p1 - 1) / p1));
        for (int p2 = start; p2 <= cap2; p2 += 2) {
            if (std::int64_t(p1) * p2 >= best_count) break;
            if (feasible(p1, p2)) {
                best = {p1, p2};
                best_count = best.count();
                break;
            }
        }
    }
    return best;
}

TilingLayout build_layout(const FrameParams& p, const LayoutOptions& opt) {
    TilingLayout layout;
    layout.params = p;
    layout.wedges = wedge_geometry(p, opt.include_closure);
    layout.supports.resize(layout.wedges.size());
    WindowProfile prof(p);
    TileLocator loc(p, layout.wedges);
    const int n = p.grid_n;
    for (int k1 = -n / 2; k1 < n / 2; ++k1)
        for (int k2 = -n / 2; k2 < n / 2; ++k2) {
            double x1 = 0.5 * k1, x2 = 0.5 * k2;
            loc.visit(x1, x2, prof, [&](long w) {
                double v = wedge_value(x1, x2, layout.wedges[w], prof);
                if (v != 0.0) {
                    layout.supports[w].points.push_back({k1, k2});
                    layout.supports[w].values.push_back(v);
                }
            });
        }
    for (std::size_t w = 0; w < layout.wedges.size(); ++w) {
        layout.wedges[w].support_cardinality = std::int64_t(layout.supports[w].points.size());
        layout.wedges[w].wrap = find_wrap_periods(layout.supports[w].points, n);
    }
    return layout;
}

double verify_partition(const TilingLayout& layout, int lattice_n) {
    const FrameParams& p = layout.params;
    const int n = lattice_n > 0 ? lattice_n : p.grid_n;
    WindowProfile prof(p);
    TileLocator loc(p, layout.wedges);
    double worst = 0.0;
    for (int k1 = -n / 2; k1 < n / 2; ++k1)
        for (int k2 = -n / 2; k2 < n / 2; ++k2) {
            double x1 = 0.5 * k1, x2 = 0.5 * k2;
            double sum = 0.0;
            loc.visit(x1, x2, prof, [&](long w) {
                double v = wedge_value(x1, x2, layout.wedges[w], prof);
                sum += v * v;
            });
            worst = std::max(worst, std::fabs(sum - 1.0));
        }
    return worst;
}

namespace {
const char* kind_name(TileKind k) {
    switch (k) {
        case TileKind::Low: return "low";
        case TileKind::Wedge: return "wedge";
        case TileKind::Closure: return "closure";
    }
    return "?";
}

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }
}  // namespace

nlohmann::json layout_to_json(const TilingLayout& layout) {
    nlohmann::json j;
    j["params"] = layout.params.to_json();
    j["coefficient_count"] = layout.coefficient_count();
    auto& arr = j["wedges"] = nlohmann::json::array();
    for (const auto& w : layout.wedges) {
        arr.push_back({
            {"kind", kind_name(w.kind)},
            {"j", w.index.j},
            {"ell", w.index.ell},
            {"tiles_at_scale", w.tiles_at_scale},
            {"orientation", w.orientation},
            {"radial_support", {w.radial_support.lo, finite_or_null(w.radial_support.hi)}},
            {"radial_core", {w.radial_core.lo, finite_or_null(w.radial_core.hi)}},
            {"angular_halfwidth_outer", w.angular_halfwidth_outer},
            {"angular_halfwidth_inner", w.angular_halfwidth_inner},
            {"bounding_rect",
             {{"half_length", finite_or_null(w.bounding_rect.half_length)},
              {"half_width", finite_or_null(w.bounding_rect.half_width)},
              {"angle", w.bounding_rect.angle}}},
            {"wrap_periods", {w.wrap.p1, w.wrap.p2}},
            {"support_cardinality", w.support_cardinality},
        });
    }
    return j;
}

}  // namespace curvlab
