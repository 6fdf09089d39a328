#include "curvlab/cartoons.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "curvlab/bessel.hpp"
#include "curvlab/report.hpp"

namespace curvlab {

using std::numbers::pi;

namespace {
double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double horner(const std::vector<double>& c, double t) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * t + c[i];
    return v;
}
}  // namespace

RampPolynomial::RampPolynomial(int beta) : beta_(beta) {
    if (beta < 0 || beta > 12) throw std::invalid_argument("smoothness order must lie in [0,12]");
    const int deg = 2 * beta + 1;
    // sum_{k=beta+1}^{deg} C(deg,k) t^k (1-t)^(deg-k), expanded into monomials
    std::vector<double> c(deg + 1, 0.0);
    for (int k = beta + 1; k <= deg; ++k)
        for (int i = 0; i <= deg - k; ++i)
            c[k + i] += binomial(deg, k) * binomial(deg - k, i) * ((i % 2) ? -1.0 : 1.0);
    coeffs_.push_back(c);
    for (int d = 1; d <= deg + 1; ++d) {
        const auto& prev = coeffs_.back();
        std::vector<double> next(prev.size() > 1 ? prev.size() - 1 : 1, 0.0);
        for (std::size_t i = 1; i < prev.size(); ++i) next[i - 1] = prev[i] * double(i);
        coeffs_.push_back(next);
    }
    const int samples = 20000;
    for (int d = 0; d <= deg; ++d) {
        double sup = 0.0, next_sup = 0.0;
        for (int i = 0; i <= samples; ++i) {
            double t = double(i) / samples;
            sup = std::max(sup, std::fabs(horner(coeffs_[d], t)));
            next_sup = std::max(next_sup, std::fabs(horner(coeffs_[d + 1], t)));
        }
        // grid maximum plus the largest possible overshoot between samples
        sups_.push_back(sup + next_sup * 0.5 / samples);
    }
}

double RampPolynomial::value(double t, int derivative) const {
    if (derivative < 0 || derivative >= int(coeffs_.size())) return 0.0;
    if (t <= 0.0 || t >= 1.0) {
        if (derivative > 0) return 0.0;
        return t <= 0.0 ? 0.0 : 1.0;
    }
    return horner(coeffs_[derivative], t);
}

double RampPolynomial::sup_derivative(int derivative) const {
    if (derivative < 0 || derivative >= int(sups_.size())) return 0.0;
    return sups_[derivative];
}

SmoothFactor::SmoothFactor(int beta, double nu, double plateau, double support)
    : ramp_(beta), nu_(nu), plateau_(plateau), support_(support) {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw std::invalid_argument("amplitude bound must be positive");
    if (!(plateau >= 0.0 && plateau < support && support <= 1.0))
        throw std::invalid_argument("need 0 <= plateau < support <= 1");
    const double w = support - plateau;
    std::vector<double> sup(beta + 1);
    sup[0] = 1.0;
    for (int d = 1; d <= beta; ++d) sup[d] = ramp_.sup_derivative(d) / std::pow(w, d);
    double norm = 0.0;
    for (int m1 = 0; m1 <= beta; ++m1)
        for (int m2 = 0; m1 + m2 <= beta; ++m2) {
            norm += sup[m1] * sup[m2];
            // Holder part of exponent zero for the top derivatives: |f(x)-f(y)| <= 2 sup|f|
            if (m1 + m2 == beta) norm += 2.0 * sup[m1] * sup[m2];
        }
    unit_norm_ = norm;
    amplitude_ = nu / norm;
}

double SmoothFactor::profile(double t, int derivative) const {
    const double a = std::fabs(t);
    if (a >= support_) return 0.0;
    if (a <= plateau_) return derivative == 0 ? 1.0 : 0.0;
    const double w = support_ - plateau_;
    const double u = (support_ - a) / w;
    double v = ramp_.value(u, derivative);
    if (derivative > 0) {
        double du = (t > 0 ? -1.0 : 1.0) / w;
        v *= std::pow(du, derivative);
    }
    return v;
}

double SmoothFactor::operator()(double x1, double x2) const { return amplitude_ * profile(x1) * profile(x2); }

namespace {
const char* kind_name(CartoonKind k) {
    switch (k) {
        case CartoonKind::Disc: return "disc";
        case CartoonKind::HalfSpace: return "half_space";
        case CartoonKind::SmoothBump: return "smooth_bump";
        case CartoonKind::Star: return "star";
    }
    return "?";
}

CartoonKind kind_from(const std::string& s) {
    if (s == "disc") return CartoonKind::Disc;
    if (s == "half_space") return CartoonKind::HalfSpace;
    if (s == "smooth_bump") return CartoonKind::SmoothBump;
    if (s == "star") return CartoonKind::Star;
    throw std::invalid_argument("unknown cartoon kind: " + s);
}

double star_radius(const CartoonSpec& c, double th) {
    double r = c.radius;
    for (std::size_t k = 0; k < c.cos_k.size(); ++k) r += c.cos_k[k] * std::cos((k + 1.0) * th);
    for (std::size_t k = 0; k < c.sin_k.size(); ++k) r += c.sin_k[k] * std::sin((k + 1.0) * th);
    return r;
}
}  // namespace

nlohmann::json CartoonSpec::to_json() const {
    nlohmann::json j = {{"kind", kind_name(kind)}, {"antialias", antialias}};
    switch (kind) {
        case CartoonKind::Disc:
            j["radius"] = radius;
            j["center"] = {center1, center2};
            break;
        case CartoonKind::HalfSpace:
            j["angle"] = angle;
            j["offset"] = offset;
            break;
        case CartoonKind::SmoothBump:
            break;
        case CartoonKind::Star:
            j["radius"] = radius;
            j["center"] = {center1, center2};
            j["cos_k"] = cos_k;
            j["sin_k"] = sin_k;
            break;
    }
    j["smooth"] = smooth || kind == CartoonKind::SmoothBump;
    if (smooth || kind == CartoonKind::SmoothBump) {
        j["beta"] = beta;
        j["nu"] = nu;
    }
    return j;
}

CartoonSpec CartoonSpec::from_json(const nlohmann::json& j) {
    CartoonSpec c;
    c.kind = kind_from(j.value("kind", std::string("disc")));
    c.radius = j.value("radius", c.radius);
    if (j.contains("center")) {
        c.center1 = j["center"].at(0).get<double>();
        c.center2 = j["center"].at(1).get<double>();
    }
    c.angle = j.value("angle", c.angle);
    c.offset = j.value("offset", c.offset);
    c.cos_k = j.value("cos_k", c.cos_k);
    c.sin_k = j.value("sin_k", c.sin_k);
    c.smooth = j.value("smooth", c.smooth);
    c.beta = j.value("beta", c.beta);
    c.nu = j.value("nu", c.nu);
    c.antialias = j.value("antialias", c.antialias);
    return c;
}

RealGrid render(const CartoonSpec& spec, int grid_n) {
    if (grid_n < 2) throw std::invalid_argument("grid must have at least two samples per axis");
    if (spec.antialias < 1) throw std::invalid_argument("antialias factor must be at least one");
    if (spec.kind == CartoonKind::Disc && !(spec.radius > 0.0)) throw std::invalid_argument("disc radius must be positive");
    if (spec.kind == CartoonKind::Star) {
        for (int i = 0; i < 4096; ++i)
            if (!(star_radius(spec, 2.0 * pi * i / 4096) > 0.0))
                throw std::invalid_argument("star boundary radius must stay positive");
    }
    std::optional<SmoothFactor> g;
    if (spec.smooth || spec.kind == CartoonKind::SmoothBump) g.emplace(spec.beta, spec.nu);

    const double ca = std::cos(spec.angle), sa = std::sin(spec.angle);
    auto inside = [&](double x1, double x2) -> bool {
        switch (spec.kind) {
            case CartoonKind::Disc: {
                double d1 = x1 - spec.center1, d2 = x2 - spec.center2;
                return d1 * d1 + d2 * d2 <= spec.radius * spec.radius;
            }
            case CartoonKind::HalfSpace:
                return x1 * ca - x2 * sa >= spec.offset;
            case CartoonKind::SmoothBump:
                return true;
            case CartoonKind::Star: {
                double d1 = x1 - spec.center1, d2 = x2 - spec.center2;
                return std::hypot(d1, d2) <= star_radius(spec, std::atan2(d2, d1));
            }
        }
        return false;
    };

    RealGrid out(grid_n);
    const double h = out.spacing();
    const int s = spec.antialias;
    const double inv = 1.0 / (double(s) * s);
    for (int i1 = 0; i1 < grid_n; ++i1)
        for (int i2 = 0; i2 < grid_n; ++i2) {
            double acc = 0.0;
            for (int a = 0; a < s; ++a)
                for (int b = 0; b < s; ++b) {
                    double x1 = out.coordinate(i1) + ((a + 0.5) / s - 0.5) * h;
                    double x2 = out.coordinate(i2) + ((b + 0.5) / s - 0.5) * h;
                    if (!inside(x1, x2)) continue;
                    acc += g ? (*g)(x1, x2) : 1.0;
                }
            out(i1, i2) = acc * inv;
        }
    return out;
}

std::optional<std::function<double(double, double)>> analytic_spectrum(const CartoonSpec& spec) {
    if (spec.kind != CartoonKind::Disc || spec.smooth || spec.center1 != 0.0 || spec.center2 != 0.0) return std::nullopt;
    const double r = spec.radius;
    return [r](double xi1, double xi2) {
        double a = std::hypot(xi1, xi2);
        // scaling of the radius-1/2 transform
        return 4.0 * r * r * disc_spectrum(2.0 * r * a);
    };
}

void write_pgm(const RealGrid& g, const std::string& path) {
    auto [lo, hi] = std::minmax_element(g.data.begin(), g.data.end());
    const double a = g.data.empty() ? 0.0 : *lo;
    const double span = g.data.empty() ? 0.0 : *hi - a;
    std::string out = "P5\n" + std::to_string(g.n) + " " + std::to_string(g.n) + "\n255\n";
    // rows top to bottom with x2 increasing upwards
    for (int i2 = g.n - 1; i2 >= 0; --i2)
        for (int i1 = 0; i1 < g.n; ++i1) {
            double v = span > 0 ? (g(i1, i2) - a) / span : 0.0;
            out.push_back(char(static_cast<unsigned char>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)))));
        }
    atomic_write(path, out);
}

}  // namespace curvlab
