#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvlab/transform.hpp"

namespace curvlab {

// C^beta polynomial step on [0,1]: 0 at 0, 1 at 1, first beta derivatives vanish at both ends.
class RampPolynomial {
public:
    explicit RampPolynomial(int beta);
    double value(double t, int derivative = 0) const;
    double sup_derivative(int derivative) const;
    int beta() const { return beta_; }

private:
    int beta_;
    std::vector<std::vector<double>> coeffs_;  // monomial coefficients of each derivative
    std::vector<double> sups_;
};

// Tensor bump g(x) = amplitude * b(x1) b(x2): b = 1 on |t| <= plateau, 0 for |t| >= support,
// ramped in between. The amplitude is chosen so that the C^beta norm of g is at most nu.
class SmoothFactor {
public:
    SmoothFactor(int beta, double nu, double plateau = 0.25, double support = 0.9);
    double operator()(double x1, double x2) const;
    double amplitude() const { return amplitude_; }
    double profile(double t, int derivative = 0) const;
    double unit_norm() const { return unit_norm_; }  // C^beta norm bound of the unit-amplitude bump
    int beta() const { return ramp_.beta(); }
    double nu() const { return nu_; }

private:
    RampPolynomial ramp_;
    double nu_, plateau_, support_, amplitude_, unit_norm_;
};

enum class CartoonKind { Disc, HalfSpace, SmoothBump, Star };

struct CartoonSpec {
    CartoonKind kind = CartoonKind::Disc;
    // disc
    double radius = 0.5;
    double center1 = 0.0, center2 = 0.0;
    // half-space {x1 cos(angle) - x2 sin(angle) >= offset}
    double angle = 0.0;
    double offset = 0.0;
    // star-shaped boundary radius(theta) = radius + sum_k (cos_k[k] cos((k+1) theta) + sin_k[k] sin((k+1) theta))
    std::vector<double> cos_k, sin_k;
    // optional smooth factor (half-space, bump and star)
    bool smooth = false;
    int beta = 2;
    double nu = 1.0;
    int antialias = 4;

    nlohmann::json to_json() const;
    static CartoonSpec from_json(const nlohmann::json& j);
};

// Pixel averages over antialias x antialias subsamples of each cell centred at the grid points.
RealGrid render(const CartoonSpec& spec, int grid_n);

// Closed-form Fourier transform when one is known (disc: radius 1/2 at the origin, no smooth factor).
std::optional<std::function<double(double, double)>> analytic_spectrum(const CartoonSpec& spec);

void write_pgm(const RealGrid& g, const std::string& path);

}  // namespace curvlab
