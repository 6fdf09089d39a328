#include "curvlab/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace curvlab {

using std::numbers::pi;

double order_value(BesselOrder nu) {
    switch (nu) {
        case BesselOrder::MinusHalf: return -0.5;
        case BesselOrder::Zero: return 0.0;
        case BesselOrder::Half: return 0.5;
        case BesselOrder::One: return 1.0;
    }
    return 0.0;
}

namespace {
template <class Real>
Real power_series(Real nu, double r) {
    using std::fabs, std::pow, std::tgamma;
    const Real x = Real(r) / 2;
    const Real x2 = x * x;
    Real term = pow(x, nu) / tgamma(nu + 1);
    Real sum = term;
    const Real tol = Real(1e-22);
    for (int k = 0; k < 1000; ++k) {
        term *= -x2 / ((k + 1) * (k + 1 + nu));
        sum += term;
        if (k > x && fabs(term) <= tol * fabs(sum)) break;
    }
    return sum;
}
}  // namespace

double bessel_j_series(BesselOrder order, double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("bessel argument must be nonnegative");
    const long double nu = order_value(order);
    if (r == 0.0) {
        if (nu < 0) return std::numeric_limits<double>::infinity();
        return nu == 0 ? 1.0 : 0.0;
    }
    if (r < kWideSeriesRadius) return double(power_series<long double>(nu, r));
    // Terms grow like e^r before cancelling, so large arguments need wider arithmetic.
    using wide = boost::multiprecision::cpp_bin_float_50;
    return power_series<wide>(wide(double(nu)), r).convert_to<double>();
}

double bessel_j_asymptotic(BesselOrder order, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("asymptotic expansion needs a positive argument");
    const double nu = order_value(order);
    const double mu = 4.0 * nu * nu;
    // Hankel expansion, truncated just before its terms start to grow.
    double p = 0.0, q = 0.0;
    double term = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) {
        if (k > 0) term *= (mu - double(2 * k - 1) * (2 * k - 1)) / (k * 8.0 * r);
        double a = std::fabs(term);
        if (a > prev) break;
        int sign = ((k / 2) % 2 == 0) ? 1 : -1;
        if (k % 2 == 0)
            p += sign * term;
        else
            q += sign * term;
        if (a == 0.0 || a < 1e-17 * std::fabs(p)) break;
        prev = a;
    }
    const double chi = r - 0.5 * nu * pi - 0.25 * pi;
    return std::sqrt(2.0 / (pi * r)) * (p * std::cos(chi) - q * std::sin(chi));
}

double bessel_j(BesselOrder nu, double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("bessel argument must be finite and nonnegative");
    if (nu == BesselOrder::Half) return r == 0.0 ? 0.0 : std::sqrt(2.0 / (pi * r)) * std::sin(r);
    if (nu == BesselOrder::MinusHalf)
        return r == 0.0 ? std::numeric_limits<double>::infinity() : std::sqrt(2.0 / (pi * r)) * std::cos(r);
    if (r >= kBesselSwitchRadius) return bessel_j_asymptotic(nu, r);
    if (r == 0.0) return nu == BesselOrder::Zero ? 1.0 : 0.0;
    return double(power_series<long double>(order_value(nu), r));
}

double disc_spectrum(double xi_abs) {
    xi_abs = std::fabs(xi_abs);
    if (xi_abs == 0.0) return pi / 4.0;
    return bessel_j(BesselOrder::One, pi * xi_abs) / (2.0 * xi_abs);
}

RemainderCheck remainder_bound_check(double r_min, double r_max, BesselOrder nu, std::size_t samples) {
    if (!(r_min > 0.0 && r_max > r_min) || samples < 2) throw std::invalid_argument("invalid remainder range");
    const double v = order_value(nu);
    RemainderCheck out;
    out.samples = samples;
    const double step = std::log(r_max / r_min) / double(samples - 1);
    for (std::size_t i = 0; i < samples; ++i) {
        double r = r_min * std::exp(step * double(i));
        double lead = std::sqrt(2.0 / (pi * r)) * std::cos(r - 0.5 * v * pi - 0.25 * pi);
        double scaled = std::pow(r, 1.5) * std::fabs(bessel_j(nu, r) - lead);
        if (scaled > out.sup_scaled) {
            out.sup_scaled = scaled;
            out.argmax = r;
        }
    }
    return out;
}

namespace {

struct RegionGeometry {
    double r_lo = 0.0, r_hi = 0.0;
    double halfwidth = 0.0;  // per lobe; two opposite lobes
    bool full_circle = false;
};

RegionGeometry region_geometry(const WedgeSpec& spec, EnergyRegion region, const WindowProfile& prof) {
    if (spec.kind == TileKind::Closure) throw std::invalid_argument("quadrature is not defined for the closure tile");
    RegionGeometry g;
    g.full_circle = spec.isotropic();
    const int j = spec.index.j;
    switch (region) {
        case EnergyRegion::Core:
            g.r_lo = spec.radial_core.lo;
            g.r_hi = spec.radial_core.hi;
            g.halfwidth = spec.angular_halfwidth_inner;
            break;
        case EnergyRegion::Outer:
            g.r_lo = j == 0 ? 0.0 : prof.corona_constant() * std::exp2((j - 1) * prof.s());
            g.r_hi = prof.corona_constant() * std::exp2((j + 1) * prof.s());
            g.halfwidth = spec.angular_halfwidth_outer;
            break;
        case EnergyRegion::Window:
            g.r_lo = spec.radial_support.lo;
            g.r_hi = spec.radial_support.hi;
            g.halfwidth = spec.angular_halfwidth_outer;
            break;
    }
    return g;
}

double midpoint(const WedgeSpec& spec, EnergyRegion region, const WindowProfile& prof, const RegionGeometry& g,
                double cells_per_unit, int angular_cells) {
    const int nr = std::max(16, int(std::ceil(cells_per_unit * (g.r_hi - g.r_lo))));
    const double dr = (g.r_hi - g.r_lo) / nr;
    const double angle_measure = g.full_circle ? 2.0 * pi : 4.0 * g.halfwidth;
    double total = 0.0;
    if (region != EnergyRegion::Window) {
        for (int i = 0; i < nr; ++i) {
            double r = g.r_lo + (i + 0.5) * dr;
            double v = disc_spectrum(r);
            total += v * v * r;
        }
        return total * dr * angle_measure;
    }
    // The window is a product of a radial and an angular profile, so the two factors are
    // integrated separately: the radial one along the centre direction, the angular one
    // at a radius inside the radial plateau.
    const double c_dir = std::cos(spec.direction), s_dir = std::sin(spec.direction);
    for (int i = 0; i < nr; ++i) {
        double r = g.r_lo + (i + 0.5) * dr;
        double v = disc_spectrum(r);
        double w = wedge_value(r * c_dir, r * s_dir, spec, prof);
        total += v * v * r * w * w;
    }
    total *= dr;
    if (g.full_circle) return total * 2.0 * pi;
    const double r_core = 0.5 * (spec.radial_core.lo + spec.radial_core.hi);
    const double dt = 2.0 * g.halfwidth / angular_cells;
    double ang = 0.0;
    for (int lobe = 0; lobe < 2; ++lobe) {
        double start = spec.direction + lobe * pi - g.halfwidth;
        for (int t = 0; t < angular_cells; ++t) {
            double th = start + (t + 0.5) * dt;
            double w = wedge_value(r_core * std::cos(th), r_core * std::sin(th), spec, prof);
            ang += w * w;
        }
    }
    return total * ang * dt;
}

}  // namespace

QuadratureResult wedge_energy_quadrature(const WedgeSpec& spec, EnergyRegion region, const WindowProfile& profile,
                                         const QuadratureOptions& opt) {
    RegionGeometry g = region_geometry(spec, region, profile);
    QuadratureResult res;
    if (!(g.r_hi > g.r_lo) || (!g.full_circle && !(g.halfwidth > 0.0))) return res;
    double cpu = opt.cells_per_unit;
    int nt = opt.angular_cells;
    double coarse = midpoint(spec, region, profile, g, cpu, nt);
    for (int d = 0; d < opt.max_doublings; ++d) {
        double fine = midpoint(spec, region, profile, g, 2 * cpu, 2 * nt);
        double change = std::fabs(fine - coarse) / std::max(std::fabs(fine), 1e-300);
        if (change <= opt.rel_tol || fine == 0.0) {
            res.value = fine;
            res.coarse_value = coarse;
            res.rel_change = change;
            res.cells_per_unit = 2 * cpu;
            return res;
        }
        coarse = fine;
        cpu *= 2;
        nt *= 2;
    }
    throw std::runtime_error("wedge energy quadrature did not converge");
}

}  // namespace curvlab
