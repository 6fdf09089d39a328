#pragma once

#include <complex>
#include <map>
#include <memory>
#include <tuple>

#include <fftw3.h>

namespace curvlab::detail {

// In-place 2D complex DFT of a row-major n1 x n2 array (unnormalised).
class FftPlan2d {
public:
    FftPlan2d(int n1, int n2, int sign);
    ~FftPlan2d();
    FftPlan2d(const FftPlan2d&) = delete;
    FftPlan2d& operator=(const FftPlan2d&) = delete;

    void execute(std::complex<double>* data) const;
    int n1() const { return n1_; }
    int n2() const { return n2_; }

private:
    int n1_, n2_;
    fftw_plan plan_ = nullptr;
};

class PlanCache {
public:
    const FftPlan2d& get(int n1, int n2, int sign);

private:
    std::map<std::tuple<int, int, int>, std::unique_ptr<FftPlan2d>> plans_;
};

}  // namespace curvlab::detail
