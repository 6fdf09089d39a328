#include "fft.hpp"

#include <mutex>
#include <stdexcept>
#include <vector>

namespace curvlab::detail {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

FftPlan2d::FftPlan2d(int n1, int n2, int sign) : n1_(n1), n2_(n2) {
    if (n1 <= 0 || n2 <= 0) throw std::invalid_argument("fft size must be positive");
    std::vector<std::complex<double>> scratch(std::size_t(n1) * n2);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = fftw_plan_dft_2d(n1, n2, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_) throw std::runtime_error("fftw planning failed");
}

FftPlan2d::~FftPlan2d() {
    if (plan_) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
}

void FftPlan2d::execute(std::complex<double>* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan_, p, p);
}

const FftPlan2d& PlanCache::get(int n1, int n2, int sign) {
    auto key = std::make_tuple(n1, n2, sign);
    auto it = plans_.find(key);
    if (it == plans_.end()) it = plans_.emplace(key, std::make_unique<FftPlan2d>(n1, n2, sign)).first;
    return *it->second;
}

}  // namespace curvlab::detail
