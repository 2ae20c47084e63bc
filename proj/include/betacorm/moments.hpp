#pragma once

#include "betacorm/error.hpp"

#include <cmath>

namespace betacorm {

// Closed-form prior moments of the jump p, the perturbed jump m*p, and the
// cross-group covariance structure at one atom, given shape a, base weight q,
// concentration c and group count d.
template <typename Scalar>
struct MomentReport {
  Scalar mean_B;      // E(p) = q
  Scalar var_B_term;  // Var(p) = q(1-q)/(c+1)
  Scalar mean_Bj;     // E(m p) = a q/(a+1)
  Scalar var_Bj;      // Var(m p)
  Scalar cov_jk;      // Cov across two groups sharing p
  Scalar corr_jk;
  Scalar p_marginal;  // P(x = 1) = a q/(a+1)
  Scalar p_joint_d;   // P(all d groups present) = (a/(a+1))^d prod_{j<d} (cq+j)/(c+j)
};

template <typename Scalar>
MomentReport<Scalar> prior_moments(Scalar a, Scalar q, Scalar c, int d) {
  if (!(a > Scalar(0)) || !(c > Scalar(0)) || !(q > Scalar(0)) || !(q < Scalar(1)) || d < 1) {
    throw Error(ErrorKind::data, "prior_moments requires a>0, c>0, q in (0,1), d>=1");
  }
  const Scalar ratio = a / (a + Scalar(1));
  const Scalar var_p = q * (Scalar(1) - q) / (c + Scalar(1));

  MomentReport<Scalar> r;
  r.mean_B = q;
  r.var_B_term = var_p;
  r.mean_Bj = ratio * q;
  r.var_Bj = (a * q / (a + Scalar(2))) *
             (((Scalar(1) - q) * (a + Scalar(1)) * (a + Scalar(1)) + q * (c + Scalar(1))) /
              ((c + Scalar(1)) * (a + Scalar(1)) * (a + Scalar(1))));
  r.cov_jk = ratio * ratio * var_p;
  r.corr_jk = a * (a + Scalar(2)) * (Scalar(1) - q) /
              ((a + Scalar(1)) * (a + Scalar(1)) * (Scalar(1) - q) + q * (c + Scalar(1)));
  r.p_marginal = ratio * q;

  // d-th moment of beta(cq, c(1-q)); the j=0 factor is exactly q, which makes
  // p_joint_d reduce to p_marginal at d=1 without rounding slack.
  Scalar moment = q;
  for (int j = 1; j < d; ++j) {
    moment *= (c * q + Scalar(j)) / (c + Scalar(j));
  }
  Scalar ratio_pow = ratio;
  for (int j = 1; j < d; ++j) ratio_pow *= ratio;
  r.p_joint_d = ratio_pow * moment;
  return r;
}

// Spike-and-slab view of the beta(a,1) score density split at x0: mass
// 1 - x0^a sits on the slab (x0, 1) with cdf (x^a - x0^a)/(1 - x0^a), which
// tends to the log-uniform law (log x0 - log x)/log x0 as a -> 0.
template <typename Scalar>
class SlabSummary {
 public:
  SlabSummary(Scalar a, Scalar x0) : a_(a), x0_(x0), log_x0_(std::log(x0)) {
    if (!(a > Scalar(0)) || !(x0 > Scalar(0)) || !(x0 < Scalar(1))) {
      throw Error(ErrorKind::data, "slab_summary requires a > 0 and x0 in (0,1)");
    }
  }

  Scalar a() const { return a_; }
  Scalar cut() const { return x0_; }

  // Inclusion probability w = 1 - x0^a.
  Scalar w() const { return -std::expm1(a_ * log_x0_); }

  // Slab cdf on [x0, 1]; expm1 keeps it stable down to a ~ 1e-16.
  Scalar cdf(Scalar x) const {
    check_domain(x);
    return (std::expm1(a_ * std::log(x)) - std::expm1(a_ * log_x0_)) /
           (-std::expm1(a_ * log_x0_));
  }

  // a -> 0 limit of the cdf.
  Scalar limit_cdf(Scalar x) const {
    check_domain(x);
    return (log_x0_ - std::log(x)) / log_x0_;
  }

  // a -> 0 limit density 1/(log(1/x0) x).
  Scalar limit_pdf(Scalar x) const {
    check_domain(x);
    return Scalar(1) / (std::log(Scalar(1) / x0_) * x);
  }

 private:
  void check_domain(Scalar x) const {
    if (!(x >= x0_) || !(x <= Scalar(1))) {
      throw Error(ErrorKind::data, "slab evaluation point outside [x0, 1]");
    }
  }

  Scalar a_;
  Scalar x0_;
  Scalar log_x0_;
};

template <typename Scalar>
SlabSummary<Scalar> slab_summary(Scalar a, Scalar x0) {
  return SlabSummary<Scalar>(a, x0);
}

}  // namespace betacorm
