#pragma once

#include <optional>
#include <vector>

#include "curvlab/tiling.hpp"

namespace curvlab {

enum class BesselOrder { MinusHalf, Zero, Half, One };

double order_value(BesselOrder nu);

// Radius where the evaluator switches from the power series to the asymptotic expansion.
inline constexpr double kBesselSwitchRadius = 20.0;
// From this radius on the power series is summed in 50-digit arithmetic.
inline constexpr double kWideSeriesRadius = 12.0;

double bessel_j(BesselOrder nu, double r);
// The two branches, exposed for crossover checks. The series is accurate to about
// 1e-15 for every argument; bessel_j itself sums it in long double (below 1e-12 near the switch).
double bessel_j_series(BesselOrder nu, double r);
double bessel_j_asymptotic(BesselOrder nu, double r);

// Fourier transform of the indicator of the centred disc of radius 1/2.
double disc_spectrum(double xi_abs);

struct RemainderCheck {
    double sup_scaled = 0.0;  // max of r^{3/2} |J(r) - leading term(r)| over the grid
    double argmax = 0.0;
    std::size_t samples = 0;
};

RemainderCheck remainder_bound_check(double r_min, double r_max, BesselOrder nu = BesselOrder::One,
                                     std::size_t samples = 20000);

enum class EnergyRegion { Core, Outer, Window };

struct QuadratureOptions {
    double cells_per_unit = 8.0;  // radial cells per unit of |xi|
    int angular_cells = 64;
    double rel_tol = 1e-3;
    int max_doublings = 6;
};

struct QuadratureResult {
    double value = 0.0;
    double coarse_value = 0.0;
    double rel_change = 0.0;
    double cells_per_unit = 0.0;
};

// Energy of the disc spectrum on a region of one wedge by a polar midpoint rule,
// refined by doubling until two successive values agree to rel_tol.
// Throws std::runtime_error when that does not happen within max_doublings.
QuadratureResult wedge_energy_quadrature(const WedgeSpec& spec, EnergyRegion region, const WindowProfile& profile,
                                         const QuadratureOptions& opt = {});

}  // namespace curvlab
