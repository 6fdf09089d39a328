#include "curvlab/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "fft.hpp"

namespace curvlab {

using cplx = std::complex<double>;
namespace {
constexpr double kFreqStep = 0.5;

int wrap_index(int k, int p) {
    int m = k % p;
    return m < 0 ? m + p : m;
}

void check_grid(const RealGrid& f, int n) {
    if (f.n != n || f.data.size() != std::size_t(n) * n)
        throw std::invalid_argument("image size does not match the frame grid");
    for (double v : f.data)
        if (!std::isfinite(v)) throw std::invalid_argument("image contains non-finite values");
}
}  // namespace

double RealGrid::l2_norm_squared() const {
    double s = 0.0;
    for (double v : data) s += v * v;
    double h = spacing();
    return s * h * h;
}

CoefficientSet::CoefficientSet(std::shared_ptr<const TilingLayout> layout) : layout_(std::move(layout)) {
    offsets_.resize(layout_->wedges.size() + 1, 0);
    for (std::size_t w = 0; w < layout_->wedges.size(); ++w)
        offsets_[w + 1] = offsets_[w] + std::size_t(layout_->wedges[w].wrap.count());
    values_.assign(offsets_.back(), cplx(0.0, 0.0));
}

std::span<cplx> CoefficientSet::wedge(std::size_t w) {
    return {values_.data() + offsets_[w], offsets_[w + 1] - offsets_[w]};
}

std::span<const cplx> CoefficientSet::wedge(std::size_t w) const {
    return {values_.data() + offsets_[w], offsets_[w + 1] - offsets_[w]};
}

CoefficientIndex CoefficientSet::decode(std::size_t flat) const {
    if (flat >= values_.size()) throw std::out_of_range("coefficient index out of range");
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), flat);
    std::size_t w = std::size_t(it - offsets_.begin()) - 1;
    std::size_t local = flat - offsets_[w];
    int p2 = layout_->wedges[w].wrap.p2;
    return {w, int(local / p2), int(local % p2)};
}

std::size_t CoefficientSet::encode(const CoefficientIndex& idx) const {
    const auto& wr = layout_->wedges.at(idx.wedge).wrap;
    if (idx.m1 < 0 || idx.m1 >= wr.p1 || idx.m2 < 0 || idx.m2 >= wr.p2)
        throw std::out_of_range("translation index out of range");
    return offsets_[idx.wedge] + std::size_t(idx.m1) * wr.p2 + idx.m2;
}

double CoefficientSet::energy() const {
    double s = 0.0;
    for (const auto& c : values_) s += std::norm(c);
    return s;
}

std::vector<std::size_t> CoefficientSet::order_by_magnitude() const {
    std::vector<double> mag(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) mag[i] = std::norm(values_[i]);
    std::vector<std::size_t> order(values_.size());
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });
    return order;
}

struct DigitalCurveletFrame::Impl {
    int n = 0;
    std::vector<std::vector<std::uint32_t>> grid_index;
    std::vector<std::vector<std::uint32_t>> box_index;
    std::map<std::tuple<int, int, int>, std::unique_ptr<detail::FftPlan2d>> plans;

    const detail::FftPlan2d& plan(int p1, int p2, int sign) const { return *plans.at({p1, p2, sign}); }
    void add_plan(int p1, int p2, int sign) {
        auto key = std::make_tuple(p1, p2, sign);
        if (!plans.count(key)) plans.emplace(key, std::make_unique<detail::FftPlan2d>(p1, p2, sign));
    }
};

DigitalCurveletFrame::DigitalCurveletFrame(const FrameParams& params)
    : DigitalCurveletFrame(std::make_shared<const TilingLayout>(build_layout(params))) {}

DigitalCurveletFrame::DigitalCurveletFrame(std::shared_ptr<const TilingLayout> layout)
    : layout_(std::move(layout)), impl_(std::make_unique<Impl>()) {
    const int n = layout_->params.grid_n;
    impl_->n = n;
    impl_->add_plan(n, n, FFTW_FORWARD);
    impl_->add_plan(n, n, FFTW_BACKWARD);
    const std::size_t nw = layout_->wedges.size();
    impl_->grid_index.resize(nw);
    impl_->box_index.resize(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        const auto& wr = layout_->wedges[w].wrap;
        impl_->add_plan(wr.p1, wr.p2, FFTW_FORWARD);
        impl_->add_plan(wr.p1, wr.p2, FFTW_BACKWARD);
        for (const auto& q : layout_->supports[w].points) {
            impl_->grid_index[w].push_back(std::uint32_t((q.k1 + n / 2) * n + (q.k2 + n / 2)));
            impl_->box_index[w].push_back(std::uint32_t(wrap_index(q.k1, wr.p1) * wr.p2 + wrap_index(q.k2, wr.p2)));
        }
    }
}

DigitalCurveletFrame::~DigitalCurveletFrame() = default;

std::vector<cplx> DigitalCurveletFrame::spectrum(const RealGrid& f) const {
    const int n = impl_->n;
    check_grid(f, n);
    std::vector<cplx> buf(f.data.begin(), f.data.end());
    impl_->plan(n, n, FFTW_FORWARD).execute(buf.data());
    const double h2 = f.spacing() * f.spacing();
    std::vector<cplx> out(buf.size());
    for (int k1 = -n / 2; k1 < n / 2; ++k1)
        for (int k2 = -n / 2; k2 < n / 2; ++k2) {
            double sign = ((k1 + k2) & 1) ? -h2 : h2;
            out[std::size_t(k1 + n / 2) * n + (k2 + n / 2)] = sign * buf[std::size_t(wrap_index(k1, n)) * n + wrap_index(k2, n)];
        }
    return out;
}

CoefficientSet DigitalCurveletFrame::analyze(const RealGrid& f) const {
    std::vector<cplx> spec = spectrum(f);
    CoefficientSet out(layout_);
    std::vector<cplx> box;
    for (std::size_t w = 0; w < layout_->wedges.size(); ++w) {
        const auto& wr = layout_->wedges[w].wrap;
        box.assign(std::size_t(wr.count()), cplx(0.0, 0.0));
        const auto& vals = layout_->supports[w].values;
        const auto& gi = impl_->grid_index[w];
        const auto& bi = impl_->box_index[w];
        for (std::size_t q = 0; q < gi.size(); ++q) box[bi[q]] = spec[gi[q]] * vals[q];
        impl_->plan(wr.p1, wr.p2, FFTW_FORWARD).execute(box.data());
        const double scale = kFreqStep / std::sqrt(double(wr.count()));
        auto dst = out.wedge(w);
        for (std::size_t i = 0; i < box.size(); ++i) dst[i] = box[i] * scale;
    }
    return out;
}

ComplexGrid DigitalCurveletFrame::synthesize_complex(const CoefficientSet& c) const {
    if (&c.layout() != layout_.get() && c.layout().wedges.size() != layout_->wedges.size())
        throw std::invalid_argument("coefficients belong to a different layout");
    const int n = impl_->n;
    std::vector<cplx> spec(std::size_t(n) * n, cplx(0.0, 0.0));
    std::vector<cplx> box;
    for (std::size_t w = 0; w < layout_->wedges.size(); ++w) {
        auto src = c.wedge(w);
        if (std::all_of(src.begin(), src.end(), [](const cplx& v) { return v == cplx(0.0, 0.0); })) continue;
        const auto& wr = layout_->wedges[w].wrap;
        box.assign(src.begin(), src.end());
        impl_->plan(wr.p1, wr.p2, FFTW_BACKWARD).execute(box.data());
        const double scale = 1.0 / (kFreqStep * std::sqrt(double(wr.count())));
        const auto& vals = layout_->supports[w].values;
        const auto& gi = impl_->grid_index[w];
        const auto& bi = impl_->box_index[w];
        for (std::size_t q = 0; q < gi.size(); ++q) spec[gi[q]] += box[bi[q]] * (vals[q] * scale);
    }
    std::vector<cplx> buf(spec.size());
    for (int k1 = -n / 2; k1 < n / 2; ++k1)
        for (int k2 = -n / 2; k2 < n / 2; ++k2) {
            double sign = ((k1 + k2) & 1) ? -1.0 : 1.0;
            buf[std::size_t(wrap_index(k1, n)) * n + wrap_index(k2, n)] = sign * spec[std::size_t(k1 + n / 2) * n + (k2 + n / 2)];
        }
    impl_->plan(n, n, FFTW_BACKWARD).execute(buf.data());
    const double df2 = kFreqStep * kFreqStep;
    for (auto& v : buf) v *= df2;
    return {n, std::move(buf)};
}

RealGrid DigitalCurveletFrame::synthesize(const CoefficientSet& c) const {
    ComplexGrid g = synthesize_complex(c);
    RealGrid out(g.n);
    for (std::size_t i = 0; i < g.data.size(); ++i) out.data[i] = g.data[i].real();
    return out;
}

std::vector<cplx> DigitalCurveletFrame::analyze_direct(const RealGrid& f, ScaleAngleIndex idx) const {
    const int n = impl_->n;
    if (n > kDirectMaxGrid) throw std::invalid_argument("direct evaluation is limited to small grids");
    check_grid(f, n);
    long w = layout_->find(idx.j, idx.ell);
    if (w < 0) throw std::out_of_range("no wedge with this index");
    const WedgeSpec& spec = layout_->wedges[w];
    const WindowProfile prof(layout_->params);
    const double h = f.spacing();

    // phase[k][i] = exp(-2 pi i (k/2) x_i)
    std::vector<cplx> phase(std::size_t(n) * n);
    for (int k = -n / 2; k < n / 2; ++k)
        for (int i = 0; i < n; ++i)
            phase[std::size_t(k + n / 2) * n + i] = std::polar(1.0, -std::numbers::pi * k * f.coordinate(i));
    // partial[i1][k2] = sum_i2 f(i1,i2) phase[k2][i2]
    std::vector<cplx> partial(std::size_t(n) * n);
    for (int i1 = 0; i1 < n; ++i1)
        for (int k2 = 0; k2 < n; ++k2) {
            cplx acc = 0.0;
            for (int i2 = 0; i2 < n; ++i2) acc += f(i1, i2) * phase[std::size_t(k2) * n + i2];
            partial[std::size_t(i1) * n + k2] = acc;
        }

    const auto& pts = layout_->supports[w].points;
    std::vector<cplx> weighted(pts.size());
    for (std::size_t q = 0; q < pts.size(); ++q) {
        cplx acc = 0.0;
        for (int i1 = 0; i1 < n; ++i1)
            acc += phase[std::size_t(pts[q].k1 + n / 2) * n + i1] * partial[std::size_t(i1) * n + (pts[q].k2 + n / 2)];
        weighted[q] = acc * (h * h) * wedge_value(0.5 * pts[q].k1, 0.5 * pts[q].k2, spec, prof);
    }

    const int p1 = spec.wrap.p1, p2 = spec.wrap.p2;
    const double scale = kFreqStep / std::sqrt(double(p1) * p2);
    std::vector<cplx> out(std::size_t(p1) * p2);
    for (int m1 = 0; m1 < p1; ++m1)
        for (int m2 = 0; m2 < p2; ++m2) {
            cplx acc = 0.0;
            for (std::size_t q = 0; q < pts.size(); ++q) {
                double t = double(pts[q].k1) * m1 / p1 + double(pts[q].k2) * m2 / p2;
                acc += weighted[q] * std::polar(1.0, -2.0 * std::numbers::pi * t);
            }
            out[std::size_t(m1) * p2 + m2] = acc * scale;
        }
    return out;
}

Atom DigitalCurveletFrame::atom(const CoefficientIndex& idx) const {
    CoefficientSet c(layout_);
    c.values()[c.encode(idx)] = 1.0;
    ComplexGrid g = synthesize_complex(c);
    Atom a;
    a.values = RealGrid(g.n);
    const double h = 2.0 / g.n;
    double l1 = 0.0, l2 = 0.0;
    for (std::size_t i = 0; i < g.data.size(); ++i) {
        double v = g.data[i].real();
        a.values.data[i] = v;
        l1 += std::fabs(v);
        l2 += v * v;
        a.max_imag = std::max(a.max_imag, std::fabs(g.data[i].imag()));
    }
    a.l1_norm = l1 * h * h;
    a.l2_norm = std::sqrt(l2 * h * h);
    return a;
}

}  // namespace curvlab
