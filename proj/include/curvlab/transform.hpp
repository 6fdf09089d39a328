#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "curvlab/tiling.hpp"

namespace curvlab {

// Samples of a function on [-1,1)^2: value(i1, i2) at x = (-1 + i1 h, -1 + i2 h), h = 2/n.
struct RealGrid {
    int n = 0;
    std::vector<double> data;

    RealGrid() = default;
    explicit RealGrid(int n_) : n(n_), data(std::size_t(n_) * n_, 0.0) {}
    double& operator()(int i1, int i2) { return data[std::size_t(i1) * n + i2]; }
    double operator()(int i1, int i2) const { return data[std::size_t(i1) * n + i2]; }
    double spacing() const { return 2.0 / n; }
    double coordinate(int i) const { return -1.0 + i * spacing(); }
    double l2_norm_squared() const;  // h^2 sum f^2
};

struct ComplexGrid {
    int n = 0;
    std::vector<std::complex<double>> data;
};

// Position of one coefficient: wedge position in the layout and the translation (m1, m2).
struct CoefficientIndex {
    std::size_t wedge = 0;
    int m1 = 0;
    int m2 = 0;
};

// Coefficients of all wedges, stored wedge by wedge in layout order, each block
// row-major over its p1 x p2 translations. This flat order is the tie-break order.
class CoefficientSet {
public:
    CoefficientSet() = default;
    explicit CoefficientSet(std::shared_ptr<const TilingLayout> layout);

    const TilingLayout& layout() const { return *layout_; }
    std::shared_ptr<const TilingLayout> layout_ptr() const { return layout_; }
    std::size_t size() const { return values_.size(); }
    std::span<std::complex<double>> wedge(std::size_t w);
    std::span<const std::complex<double>> wedge(std::size_t w) const;
    std::vector<std::complex<double>>& values() { return values_; }
    const std::vector<std::complex<double>>& values() const { return values_; }
    std::size_t offset(std::size_t w) const { return offsets_[w]; }

    CoefficientIndex decode(std::size_t flat) const;
    std::size_t encode(const CoefficientIndex& idx) const;
    double energy() const;  // sum |c|^2

    // Flat positions sorted by decreasing magnitude, ties by flat position.
    std::vector<std::size_t> order_by_magnitude() const;

private:
    std::shared_ptr<const TilingLayout> layout_;
    std::vector<std::size_t> offsets_;
    std::vector<std::complex<double>> values_;
};

struct Atom {
    RealGrid values;
    double l1_norm = 0.0;
    double l2_norm = 0.0;
    double max_imag = 0.0;
};

class DigitalCurveletFrame {
public:
    explicit DigitalCurveletFrame(const FrameParams& params);
    explicit DigitalCurveletFrame(std::shared_ptr<const TilingLayout> layout);
    ~DigitalCurveletFrame();
    DigitalCurveletFrame(const DigitalCurveletFrame&) = delete;
    DigitalCurveletFrame& operator=(const DigitalCurveletFrame&) = delete;

    const FrameParams& params() const { return layout_->params; }
    const TilingLayout& layout() const { return *layout_; }
    std::shared_ptr<const TilingLayout> layout_ptr() const { return layout_; }

    CoefficientSet analyze(const RealGrid& f) const;
    ComplexGrid synthesize_complex(const CoefficientSet& c) const;
    RealGrid synthesize(const CoefficientSet& c) const;

    // Reference evaluation of one wedge's coefficients by direct sums (no FFT);
    // only for grids up to kDirectMaxGrid.
    static constexpr int kDirectMaxGrid = 128;
    std::vector<std::complex<double>> analyze_direct(const RealGrid& f, ScaleAngleIndex idx) const;

    Atom atom(const CoefficientIndex& idx) const;

    // Continuum-normalised spectrum h^2 sum f(x) e^{-2 pi i xi.x} on the centred lattice,
    // returned row-major with k1 = -n/2 .. n/2-1.
    std::vector<std::complex<double>> spectrum(const RealGrid& f) const;

private:
    struct Impl;
    std::shared_ptr<const TilingLayout> layout_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace curvlab
