#pragma once

namespace textcoherence {

struct TailProbability {
  double p = 1.0;
  double log10_p = 0.0;  // finite even where p underflows
};

// Two-tailed P(|T| >= |t|) for Student's t with `dof` degrees of freedom,
// via the regularized incomplete beta function evaluated in log space.
TailProbability student_t_two_tailed(double t, double dof);

// ln I_x(a, b), the log of the regularized incomplete beta function.
double log_incomplete_beta(double a, double b, double x);

}  // namespace textcoherence
