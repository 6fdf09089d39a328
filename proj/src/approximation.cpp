#include "curvlab/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace curvlab {

using std::numbers::pi;

CoefficientSet threshold(const CoefficientSet& c, std::size_t n) {
    CoefficientSet out(c.layout_ptr());
    auto order = c.order_by_magnitude();
    n = std::min(n, order.size());
    for (std::size_t i = 0; i < n; ++i) out.values()[order[i]] = c.values()[order[i]];
    return out;
}

std::vector<std::int64_t> geometric_schedule(std::int64_t n0, double ratio, std::int64_t max_n) {
    if (n0 < 1 || !(ratio > 1.0)) throw std::invalid_argument("schedule needs n0 >= 1 and ratio > 1");
    std::vector<std::int64_t> out;
    for (double v = double(n0); v <= double(max_n) + 0.5; v *= ratio) {
        auto n = std::int64_t(std::llround(v));
        if (out.empty() || n != out.back()) out.push_back(n);
    }
    return out;
}

ErrorCurve error_curve(const RealGrid& f, const DigitalCurveletFrame& frame, const std::vector<std::int64_t>& ns) {
    CoefficientSet c = frame.analyze(f);
    auto order = c.order_by_magnitude();
    const std::size_t m = order.size();

    // suffix[i] = sum of |c|^2 over ranks >= i, accumulated from the smallest upward
    std::vector<double> suffix(m + 1, 0.0);
    for (std::size_t i = m; i-- > 0;) suffix[i] = suffix[i + 1] + std::norm(c.values()[order[i]]);

    std::vector<std::int64_t> sorted_ns(ns);
    std::sort(sorted_ns.begin(), sorted_ns.end());
    ErrorCurve curve;
    curve.coefficient_count = std::int64_t(m);
    curve.energy = f.l2_norm_squared();
    CoefficientSet kept(c.layout_ptr());
    std::size_t filled = 0;
    const double h2 = f.spacing() * f.spacing();
    for (std::int64_t n : sorted_ns) {
        if (n < 0) throw std::invalid_argument("N must be nonnegative");
        std::size_t upto = std::min<std::size_t>(std::size_t(n), m);
        for (; filled < upto; ++filled) kept.values()[order[filled]] = c.values()[order[filled]];
        RealGrid approx = frame.synthesize(kept);
        double err = 0.0;
        for (std::size_t i = 0; i < f.data.size(); ++i) {
            double d = f.data[i] - approx.data[i];
            err += d * d;
        }
        ErrorPoint pt{n, err * h2, suffix[upto]};
        // The synthesis operator of a tight frame is a contraction.
        if (pt.err2 > pt.tail2 * (1.0 + 1e-9) + 1e-14 * curve.energy)
            throw std::logic_error("thresholding error exceeds the dropped coefficient energy");
        curve.points.push_back(pt);
    }
    return curve;
}

nlohmann::json RateReport::to_json() const {
    nlohmann::json j = {{"slope", slope},   {"intercept", intercept}, {"residual", residual},
                        {"n_lo", n_lo},     {"n_hi", n_hi},           {"points_used", points_used},
                        {"verdict", verdict}};
    j["target_lo"] = target_lo ? nlohmann::json(*target_lo) : nlohmann::json(nullptr);
    j["target_hi"] = target_hi ? nlohmann::json(*target_hi) : nlohmann::json(nullptr);
    return j;
}

RateReport fit_loglog(const std::vector<double>& x, const std::vector<double>& y, double x_lo, double x_hi) {
    if (x.size() != y.size()) throw std::invalid_argument("x and y differ in length");
    RateReport r;
    r.n_lo = x_lo;
    r.n_hi = x_hi;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] >= x_lo && x[i] <= x_hi && x[i] > 0 && y[i] > 0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    r.points_used = int(lx.size());
    if (lx.size() < 2) {
        r.slope = r.intercept = r.residual = std::numeric_limits<double>::quiet_NaN();
        r.verdict = "INSUFFICIENT";
        return r;
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= double(lx.size());
    my /= double(lx.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        double e = ly[i] - (r.intercept + r.slope * lx[i]);
        ss += e * e;
    }
    r.residual = std::sqrt(ss / double(lx.size()));
    return r;
}

RateReport fit_rate(const ErrorCurve& curve, FitWindow window, bool use_tail) {
    double hi = window.n_hi > 0 ? window.n_hi : double(curve.coefficient_count) / 4.0;
    std::vector<double> x, y;
    for (const auto& p : curve.points) {
        x.push_back(double(p.n));
        y.push_back(use_tail ? p.tail2 : p.err2);
    }
    return fit_loglog(x, y, window.n_lo, hi);
}

void assign_verdict(RateReport& r, std::optional<double> lo, std::optional<double> hi) {
    r.target_lo = lo;
    r.target_hi = hi;
    if (r.verdict == "INSUFFICIENT") return;
    bool ok = std::isfinite(r.slope) && (!lo || r.slope >= *lo) && (!hi || r.slope <= *hi);
    r.verdict = ok ? "PASS" : "FAIL";
}

double weak_lp_norm(std::span<const double> magnitudes, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
    std::vector<double> m;
    m.reserve(magnitudes.size());
    for (double v : magnitudes) m.push_back(std::fabs(v));
    std::sort(m.begin(), m.end(), std::greater<>());
    double best = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) best = std::max(best, std::pow(double(i + 1), 1.0 / p) * m[i]);
    return best;
}

double weak_lp_norm(const CoefficientSet& c, double p) {
    std::vector<double> m(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) m[i] = std::abs(c.values()[i]);
    return weak_lp_norm(m, p);
}

AprioriReport apriori_decay_check(const CoefficientSet& c, double f_sup, int j_lo, int j_hi) {
    const auto& layout = c.layout();
    const auto& p = layout.params;
    if (j_hi < 0) j_hi = p.j_max + 1 + j_hi;
    std::map<int, double> best;
    for (std::size_t w = 0; w < layout.wedges.size(); ++w) {
        if (layout.wedges[w].kind == TileKind::Closure) continue;
        double m = 0.0;
        for (const auto& v : c.wedge(w)) m = std::max(m, std::abs(v));
        auto& b = best[layout.wedges[w].index.j];
        b = std::max(b, m);
    }
    AprioriReport rep;
    rep.target = -p.s * (1.0 + p.alpha) / 2.0;
    rep.j_lo = j_lo;
    rep.j_hi = j_hi;
    std::vector<double> x, y;
    for (auto [j, m] : best) {
        double ref = f_sup * std::exp2(rep.target * j);
        rep.scales.push_back({j, m, ref > 0 ? m / ref : 0.0});
        if (j >= j_lo && j <= j_hi && m > 0) {
            x.push_back(j);
            y.push_back(std::log2(m));
        }
    }
    rep.vacuous = x.size() < 2;
    if (!rep.vacuous) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            mx += x[i];
            my += y[i];
        }
        mx /= double(x.size());
        my /= double(x.size());
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sxx += (x[i] - mx) * (x[i] - mx);
            sxy += (x[i] - mx) * (y[i] - my);
        }
        rep.slope = sxy / sxx;
    } else {
        rep.slope = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

TailBoundCurve bound1_tail_estimator(const FrameParams& params, const std::vector<std::int64_t>& ns,
                                     const TailBoundOptions& opt) {
    FrameParams p = params;
    p.validate();
    int j_top = opt.j_top;
    if (j_top <= 0) j_top = FrameParams::default_j_max(p.s, p.corona_constant, p.tau2, 1 << 15);
    const WindowProfile prof(p);

    // The core integrand is radial and every wedge of a scale has the same angular
    // measure, so one quadrature per scale serves all of its wedges.
    auto scale_core = [&](int j) {
        return wedge_energy_quadrature(make_wedge(p, j, 0), EnergyRegion::Core, prof, opt.quadrature).value;
    };
    std::vector<double> energies;
    for (int j = 0; j <= j_top; ++j) {
        double e = scale_core(j);
        int L = j == 0 ? 1 : tiles_at_scale(j, p.s, p.alpha);
        energies.insert(energies.end(), std::size_t(L), e);
    }
    double remainder = 0.0;
    for (int j = j_top + 1; j <= j_top + opt.quadrature_extra; ++j)
        remainder += tiles_at_scale(j, p.s, p.alpha) * scale_core(j);
    // Beyond that the averaged asymptotics of J_1^2 give the per-scale core energy
    // (1/(4 pi)) (1/a_j - 1/b_j) with a_j = C 2^{(j-1)s} tau2, b_j = C 2^{js} tau1.
    const int j_from = j_top + opt.quadrature_extra + 1;
    const double geom = std::exp2(-j_from * p.s) / (1.0 - std::exp2(-p.s));
    remainder += (std::exp2(p.s) / p.tau2 - 1.0 / p.tau1) * geom / (4.0 * pi * p.corona_constant);

    std::sort(energies.begin(), energies.end(), std::greater<>());
    std::vector<double> suffix(energies.size() + 1, 0.0);
    for (std::size_t i = energies.size(); i-- > 0;) suffix[i] = suffix[i + 1] + energies[i];

    TailBoundCurve out;
    out.j_top = j_top;
    out.wedge_count = energies.size();
    out.remainder = remainder;
    for (std::int64_t n : ns) {
        if (n < 0) throw std::invalid_argument("N must be nonnegative");
        std::size_t k = std::min<std::size_t>(std::size_t(n), energies.size());
        out.points.push_back({n, suffix[k] + remainder});
    }
    return out;
}

std::vector<GeneratorDecayRow> generator_decay_check(const FrameParams& params, double step, double extent) {
    params.validate();
    if (!(step > 0.0) || !(extent > 0.5)) throw std::invalid_argument("probe grid must extend beyond 1/2");
    const WindowProfile prof(params);
    const int k = int(std::llround(extent / step));
    std::vector<GeneratorDecayRow> rows;
    const double inner = std::exp2(-2.0 * params.s - 5.0);
    for (int j = 0; j <= params.j_max; ++j) {
        const WedgeSpec spec = make_wedge(params, j, 0);
        const double a1 = std::exp2(j * params.s), a2 = std::exp2(j * params.s * params.alpha);
        const double inner2 = std::exp2(j * params.s * (1.0 - params.alpha)) * inner;
        GeneratorDecayRow row;
        row.j = j;
        for (int i1 = -k; i1 <= k; ++i1)
            for (int i2 = -k; i2 <= k; ++i2) {
                const double x1 = i1 * step, x2 = i2 * step;
                const double v = std::fabs(wedge_value(a1 * x1, a2 * x2, spec, prof));
                ++row.probes;
                row.sup = std::max(row.sup, v);
                if (std::fabs(x1) > 0.5 || std::fabs(x2) > 0.5) row.max_outside = std::max(row.max_outside, v);
                if (j > 0 && std::fabs(x1) <= inner && std::fabs(x2) <= inner2)
                    row.max_inner_box = std::max(row.max_inner_box, v);
            }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace curvlab
