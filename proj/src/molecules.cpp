#include "curvlab/molecules.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace curvlab {

using std::numbers::pi;

namespace {
double wrap_orientation(double t) {
    t = std::fmod(t, pi);
    if (t < 0) t += pi;
    if (t >= pi) t -= pi;
    return t;
}

// |t| modulo pi, minimal representative in [0, pi/2]
double orientation_gap(double a, double b) {
    double d = std::fmod(std::fabs(a - b), pi);
    return std::min(d, pi - d);
}
}  // namespace

PhasePoint curvelet_parametrization(const CurveletIndex& mu, double s, double alpha) {
    if (mu.j < 0) throw std::invalid_argument("scale index must be nonnegative");
    const int L = tiles_at_scale(mu.j, s, alpha);
    if (mu.ell < -L / 2 || mu.ell >= L - L / 2) throw std::invalid_argument("angular index out of range");
    const double angle = mu.ell * pi / L;
    const double y1 = std::exp2(-mu.j * s) * double(mu.k1);
    const double y2 = std::exp2(-mu.j * s * alpha) * double(mu.k2);
    // rotation by -angle
    const double c = std::cos(angle), sn = std::sin(angle);
    PhasePoint p;
    p.s = std::exp2(mu.j * s);
    p.theta = wrap_orientation(angle);
    p.x1 = c * y1 + sn * y2;
    p.x2 = -sn * y1 + c * y2;
    return p;
}

DistanceTerms distance_terms(const PhasePoint& p, const PhasePoint& q, double alpha) {
    if (!(p.s > 0.0) || !(q.s > 0.0)) throw std::invalid_argument("scales must be positive");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0,1]");
    const double s0 = std::min(p.s, q.s);
    const double dt = orientation_gap(p.theta, q.theta);
    const double dx1 = p.x1 - q.x1, dx2 = p.x2 - q.x2;
    const double a2 = std::pow(s0, 2.0 * (1.0 - alpha)) * dt * dt;
    const double proj = std::cos(p.theta) * dx1 - std::sin(p.theta) * dx2;
    DistanceTerms t;
    t.angular = a2;
    t.spatial = std::pow(s0, 2.0 * alpha) * (dx1 * dx1 + dx2 * dx2);
    t.directional = s0 * s0 / (1.0 + a2) * proj * proj;
    return t;
}

double index_distance(const PhasePoint& p, const PhasePoint& q, double alpha) {
    DistanceTerms t = distance_terms(p, q, alpha);
    return std::max(p.s / q.s, q.s / p.s) * (1.0 + t.angular + t.spatial + t.directional);
}

std::vector<PhasePoint> enumerate_curvelet_points(double s, double alpha, double max_scale, double radius) {
    std::vector<PhasePoint> out;
    for (int j = 0; std::exp2(j * s) <= max_scale * (1.0 + 1e-12); ++j) {
        const int L = tiles_at_scale(j, s, alpha);
        const long c1 = long(std::floor(radius * std::exp2(j * s)));
        const long c2 = long(std::floor(radius * std::exp2(j * s * alpha)));
        for (int ell = -L / 2; ell < L - L / 2; ++ell)
            for (long k1 = -c1; k1 <= c1; ++k1)
                for (long k2 = -c2; k2 <= c2; ++k2) {
                    PhasePoint p = curvelet_parametrization({j, ell, k1, k2}, s, alpha);
                    if (p.x1 * p.x1 + p.x2 * p.x2 <= radius * radius) out.push_back(p);
                }
    }
    return out;
}

namespace {
// Phase point with the powers and trigonometric values the distance needs.
struct Prepared {
    double s, theta, x1, x2, c, sn, pa, pb, s2;
};

std::vector<Prepared> prepare(const std::vector<PhasePoint>& pts, double alpha) {
    std::vector<Prepared> out;
    out.reserve(pts.size());
    for (const auto& p : pts)
        out.push_back({p.s, p.theta, p.x1, p.x2, std::cos(p.theta), std::sin(p.theta),
                       std::pow(p.s, 2.0 * (1.0 - alpha)), std::pow(p.s, 2.0 * alpha), p.s * p.s});
    return out;
}

// Same value as index_distance, from prepared points.
inline double fast_distance(const Prepared& p, const Prepared& q) {
    const Prepared& lo = p.s <= q.s ? p : q;
    double d = std::fabs(p.theta - q.theta);
    d = std::min(d, pi - d);
    const double dx1 = p.x1 - q.x1, dx2 = p.x2 - q.x2;
    const double a2 = lo.pa * d * d;
    const double proj = p.c * dx1 - p.sn * dx2;
    const double ratio = p.s >= q.s ? p.s / q.s : q.s / p.s;
    return ratio * (1.0 + a2 + lo.pb * (dx1 * dx1 + dx2 * dx2) + lo.s2 / (1.0 + a2) * proj * proj);
}
}  // namespace

ConsistencyReport consistency_sum(double s_a, double s_b, double alpha, double k_exp, double max_scale,
                                  const std::vector<double>& radii) {
    if (!(k_exp > 0.0)) throw std::invalid_argument("decay exponent must be positive");
    if (radii.empty()) throw std::invalid_argument("no truncation radii given");
    ConsistencyReport rep;
    for (double radius : radii) {
        if (!(radius > 0.0) || !(max_scale >= 1.0)) throw std::invalid_argument("truncation caps must be positive");
        auto a = prepare(enumerate_curvelet_points(s_a, alpha, max_scale, radius), alpha);
        auto b = prepare(enumerate_curvelet_points(s_b, alpha, max_scale, radius), alpha);
        if (a.empty() || b.empty()) throw std::invalid_argument("empty truncated index set");
        std::vector<double> sum_a(a.size(), 0.0), sum_b(b.size(), 0.0);
        const bool cube = k_exp == 3.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t m = 0; m < b.size(); ++m) {
                double w = fast_distance(a[i], b[m]);
                double v = cube ? 1.0 / (w * w * w) : std::pow(w, -k_exp);
                sum_a[i] += v;
                sum_b[m] += v;
            }
        ConsistencyLevel lvl;
        lvl.radius = radius;
        lvl.sup_a = *std::max_element(sum_a.begin(), sum_a.end());
        lvl.sup_b = *std::max_element(sum_b.begin(), sum_b.end());
        lvl.count_a = a.size();
        lvl.count_b = b.size();
        rep.levels.push_back(lvl);
    }
    if (rep.levels.size() >= 2) {
        const auto& x = rep.levels[rep.levels.size() - 2];
        const auto& y = rep.levels.back();
        double prev = std::max(x.sup_a, x.sup_b), last = std::max(y.sup_a, y.sup_b);
        rep.final_growth = (last - prev) / prev;
    }
    return rep;
}

}  // namespace curvlab
