#pragma once

#include <vector>

namespace agenthub::sim {

double mean(const std::vector<double>& values);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

// P(T <= t) for Student's t with df degrees of freedom.
double student_t_cdf(double t, double df);

// One-sided paired test of H1: mean(a) < mean(b). Returns the p-value.
double paired_one_sided_p(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace agenthub::sim
