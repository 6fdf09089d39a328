#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <set>
#include <utility>

#include "curvlab/transform.hpp"

using namespace curvlab;
using cplx = std::complex<double>;
using std::numbers::pi;

namespace {

RealGrid noise(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    RealGrid f(n);
    for (auto& v : f.data) v = g(rng);
    return f;
}

double sq_diff(const RealGrid& a, const RealGrid& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) s += (a.data[i] - b.data[i]) * (a.data[i] - b.data[i]);
    return s * a.spacing() * a.spacing();
}

// Coefficients from their definition: spectrum samples at frequency k/2 weighted by the
// window and expanded in the Fourier basis of the wrap box.
std::vector<cplx> brute_force(const RealGrid& f, const TilingLayout& layout, std::size_t w) {
    const int n = f.n;
    const double h = f.spacing();
    const auto& spec = layout.wedges[w];
    const WindowProfile prof(layout.params);
    const auto& pts = layout.supports[w].points;
    std::vector<cplx> weighted;
    for (const auto& q : pts) {
        const double x1 = 0.5 * q.k1, x2 = 0.5 * q.k2;
        cplx acc = 0.0;
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2)
                acc += f(i1, i2) * std::polar(1.0, -2 * pi * (x1 * (-1 + i1 * h) + x2 * (-1 + i2 * h)));
        weighted.push_back(acc * h * h * wedge_value(x1, x2, spec, prof));
    }
    const int p1 = spec.wrap.p1, p2 = spec.wrap.p2;
    std::vector<cplx> out;
    for (int m1 = 0; m1 < p1; ++m1)
        for (int m2 = 0; m2 < p2; ++m2) {
            cplx acc = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i)
                acc += weighted[i] * std::polar(1.0, -2 * pi * (double(pts[i].k1) * m1 / p1 + double(pts[i].k2) * m2 / p2));
            out.push_back(acc * 0.5 / std::sqrt(double(p1) * p2));
        }
    return out;
}

}  // namespace

TEST_CASE("tight frame: Parseval and reconstruction") {
    for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        CAPTURE(a);
        DigitalCurveletFrame frame(FrameParams::make(1.0, a, 64));
        for (unsigned t = 0; t < 3; ++t) {
            RealGrid f = noise(64, 10 + t);
            CoefficientSet c = frame.analyze(f);
            CHECK(std::fabs(c.energy() - f.l2_norm_squared()) <= 1e-12 * f.l2_norm_squared());
            CHECK(sq_diff(frame.synthesize(c), f) <= 1e-24 * f.l2_norm_squared());
        }
    }
}

TEST_CASE("fast coefficients equal the brute-force definition") {
    DigitalCurveletFrame frame(FrameParams::make(1.0, 0.5, 32));
    RealGrid f = noise(32, 7);
    CoefficientSet c = frame.analyze(f);
    for (std::size_t w = 0; w < frame.layout().wedge_count(); ++w) {
        auto ref = brute_force(f, frame.layout(), w);
        auto got = c.wedge(w);
        REQUIRE(ref.size() == got.size());
        double num = 0, den = 0;
        for (std::size_t i = 0; i < ref.size(); ++i) {
            num += std::norm(ref[i] - got[i]);
            den += std::norm(ref[i]);
        }
        CHECK(std::sqrt(num) <= 1e-10 * std::max(1.0, std::sqrt(den)));
    }
}

TEST_CASE("direct evaluation matches and is limited to small grids") {
    DigitalCurveletFrame frame(FrameParams::make(1.0, 0.25, 64));
    RealGrid f = noise(64, 9);
    CoefficientSet c = frame.analyze(f);
    auto idx = frame.layout().wedges[5].index;
    auto d = frame.analyze_direct(f, idx);
    auto got = c.wedge(5);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(std::abs(d[i] - got[i]) <= 1e-12);
    DigitalCurveletFrame big(FrameParams::make(1.0, 0.5, 256));
    CHECK_THROWS_AS(big.analyze_direct(noise(256, 1), {1, 0}), std::invalid_argument);
}

TEST_CASE("real images have real syntheses and conjugate-symmetric spectra") {
    DigitalCurveletFrame frame(FrameParams::make(1.0, 0.5, 64));
    RealGrid f = noise(64, 4);
    ComplexGrid g = frame.synthesize_complex(frame.analyze(f));
    double imag = 0.0;
    for (const auto& v : g.data) imag = std::max(imag, std::fabs(v.imag()));
    CHECK(imag <= 1e-12);
    auto spec = frame.spectrum(f);
    const int n = 64;
    for (int k1 = -n / 2 + 1; k1 < n / 2; ++k1)
        for (int k2 = -n / 2 + 1; k2 < n / 2; ++k2) {
            cplx a = spec[std::size_t(k1 + n / 2) * n + (k2 + n / 2)];
            cplx b = spec[std::size_t(-k1 + n / 2) * n + (-k2 + n / 2)];
            CHECK(std::abs(a - std::conj(b)) <= 1e-12);
        }
}

TEST_CASE("coefficient indexing round-trips") {
    DigitalCurveletFrame frame(FrameParams::make(1.0, 0.5, 64));
    CoefficientSet c(frame.layout_ptr());
    CHECK(c.size() == std::size_t(frame.layout().coefficient_count()));
    for (std::size_t flat = 0; flat < c.size(); flat += 37) CHECK(c.encode(c.decode(flat)) == flat);
    CHECK_THROWS_AS(c.decode(c.size()), std::out_of_range);
    CHECK_THROWS_AS(c.encode({0, 99, 0}), std::out_of_range);
}

TEST_CASE("magnitude order breaks ties by position") {
    DigitalCurveletFrame frame(FrameParams::make(1.0, 0.5, 32));
    CoefficientSet c(frame.layout_ptr());
    c.values()[5] = 2.0;
    c.values()[3] = cplx(0.0, -2.0);
    c.values()[9] = 3.0;
    auto order = c.order_by_magnitude();
    CHECK(order[0] == 9);
    CHECK(order[1] == 3);
    CHECK(order[2] == 5);
    CHECK(order[3] == 0);
}

TEST_CASE("atoms have norm at most one") {
    DigitalCurveletFrame frame(FrameParams::make(1.0, 0.5, 64));
    for (std::size_t w = 1; w < frame.layout().wedge_count(); w += 3) {
        if (frame.layout().supports[w].points.empty()) continue;
        Atom a = frame.atom({w, 0, 0});
        CHECK(a.l2_norm <= 1.0 + 1e-12);
        CHECK(a.l1_norm <= 2.0 * a.l2_norm + 1e-12);  // Cauchy-Schwarz on an area-4 domain
    }
}

TEST_CASE("size mismatch and non-finite input are rejected") {
    DigitalCurveletFrame frame(FrameParams::make(1.0, 0.5, 32));
    CHECK_THROWS_AS(frame.analyze(RealGrid(64)), std::invalid_argument);
    RealGrid f(32);
    f(1, 1) = std::nan("");
    CHECK_THROWS_AS(frame.analyze(f), std::invalid_argument);
}

TEST_CASE("tightness over many random images") {
    for (double a : {0.0, 0.5}) {
        DigitalCurveletFrame frame(FrameParams::make(1.0, a, 32));
        for (unsigned t = 0; t < 100; ++t) {
            RealGrid f = noise(32, 100 + t);
            CHECK(std::fabs(frame.analyze(f).energy() - f.l2_norm_squared()) <= 1e-10 * f.l2_norm_squared());
        }
    }
}

TEST_CASE("analysis is linear") {
    DigitalCurveletFrame frame(FrameParams::make(1.0, 0.5, 64));
    RealGrid f = noise(64, 21), g = noise(64, 22), h(64);
    const double a = 0.7, b = -2.3;
    for (std::size_t i = 0; i < h.data.size(); ++i) h.data[i] = a * f.data[i] + b * g.data[i];
    auto cf = frame.analyze(f).values(), cg = frame.analyze(g).values(), ch = frame.analyze(h).values();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < ch.size(); ++i) {
        num += std::norm(ch[i] - (a * cf[i] + b * cg[i]));
        den += std::norm(ch[i]);
    }
    CHECK(std::sqrt(num / den) <= 1e-12);
}

TEST_CASE("zero and delta images") {
    DigitalCurveletFrame frame(FrameParams::make(1.0, 0.5, 64));
    CoefficientSet z = frame.analyze(RealGrid(64));
    for (auto v : z.values()) CHECK(v == 0.0);
    CHECK(frame.synthesize(z).l2_norm_squared() == 0.0);
    RealGrid delta(64);
    delta(17, 40) = 1.0;
    CHECK(sq_diff(frame.synthesize(frame.analyze(delta)), delta) <= 1e-20 * delta.l2_norm_squared());
}

TEST_CASE("a single Fourier mode only reaches the wedges containing it") {
    const int n = 64;
    DigitalCurveletFrame frame(FrameParams::make(1.0, 0.5, n));
    const int k1 = 9, k2 = -4;  // frequency (k1, k2) / 2
    RealGrid f(n);
    for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2)
            f(i1, i2) = std::cos(2 * pi * 0.5 * (k1 * f.coordinate(i1) + k2 * f.coordinate(i2)));
    CoefficientSet c = frame.analyze(f);
    int reached = 0;
    for (std::size_t w = 0; w < frame.layout().wedge_count(); ++w) {
        bool contains = false;
        for (const auto& q : frame.layout().supports[w].points)
            contains = contains || (q.k1 == k1 && q.k2 == k2) || (q.k1 == -k1 && q.k2 == -k2);
        double e = 0.0;
        for (auto v : c.wedge(w)) e += std::norm(v);
        if (contains) {
            reached += e > 0.0;
        } else {
            CHECK(e <= 1e-24 * f.l2_norm_squared());
        }
    }
    CHECK(reached >= 1);
}

TEST_CASE("atom spectra stay inside their wedge support") {
    const int n = 64;
    DigitalCurveletFrame frame(FrameParams::make(1.0, 0.5, n));
    double lo = 1e300, hi = 0.0;
    for (std::size_t w = 0; w < frame.layout().wedge_count(); w += 2) {
        const auto& pts = frame.layout().supports[w].points;
        if (pts.empty()) continue;
        Atom a = frame.atom({w, 1, 0});
        lo = std::min(lo, a.l2_norm);
        hi = std::max(hi, a.l2_norm);
        std::set<std::pair<int, int>> inside;
        for (const auto& q : pts) inside.insert({q.k1, q.k2});
        auto spec = frame.spectrum(a.values);
        double total = 0.0, outside = 0.0;
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2) {
                double e = std::norm(spec[std::size_t(i1) * n + i2]);
                total += e;
                if (!inside.count({i1 - n / 2, i2 - n / 2})) outside += e;
            }
        CAPTURE(w);
        CHECK(outside <= 1e-20 * total);
    }
    MESSAGE("atom L2 norms lie in [" << lo << ", " << hi << "]");
    CHECK(lo > 0.0);
    CHECK(hi <= 1.0 + 1e-12);
}
