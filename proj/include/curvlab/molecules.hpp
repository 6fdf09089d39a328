#pragma once

#include <vector>

#include "curvlab/tiling.hpp"

namespace curvlab {

// Point of the phase space: scale, orientation in [0, pi), position.
struct PhasePoint {
    double s = 1.0;
    double theta = 0.0;
    double x1 = 0.0, x2 = 0.0;
};

struct CurveletIndex {
    int j = 0;
    int ell = 0;
    long k1 = 0, k2 = 0;
};

PhasePoint curvelet_parametrization(const CurveletIndex& mu, double s, double alpha);

// The three nonnegative summands of the alpha-scaled distance between p and q.
struct DistanceTerms {
    double angular = 0.0;
    double spatial = 0.0;
    double directional = 0.0;
};

DistanceTerms distance_terms(const PhasePoint& p, const PhasePoint& q, double alpha);
double index_distance(const PhasePoint& p, const PhasePoint& q, double alpha);

// All curvelet phase points of one parametrization with scale <= max_scale and |x| <= radius.
std::vector<PhasePoint> enumerate_curvelet_points(double s, double alpha, double max_scale, double radius);

struct ConsistencyLevel {
    double radius = 0.0;
    double sup_a = 0.0;  // sup over the first system of sums over the second
    double sup_b = 0.0;  // sup over the second system of sums over the first
    std::size_t count_a = 0, count_b = 0;
};

struct ConsistencyReport {
    std::vector<ConsistencyLevel> levels;
    double final_growth = 0.0;  // relative growth of max(sup_a, sup_b) at the last doubling
};

// Truncated consistency sums sup_lambda sum_mu omega^{-k} in both directions for two curvelet
// parametrizations (scales s_a, s_b; common alpha), at each spatial truncation radius.
// max_scale caps the scale value 2^{js} of both systems. Diagnostic only.
ConsistencyReport consistency_sum(double s_a, double s_b, double alpha, double k_exp, double max_scale,
                                  const std::vector<double>& radii);

}  // namespace curvlab
