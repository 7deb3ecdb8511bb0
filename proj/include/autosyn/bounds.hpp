#pragma once

#include <cmath>
#include <string>

namespace autosyn {

// Inputs to the closed-form failure-probability calculators. L is the run
// length in slots, R the epoch length, Q the adversarial query budget; beta is
// the honest stake ratio, eta the delivery ratio, eps the admissibility slack.
struct BoundParams {
  double L = 0;
  double R = 0;
  double Q = 0;
  double f = 0;
  double beta = 0;
  double eta = 0;
  double eps = 0;
  double omega_rate = 1.0 / 20.0;  // Omega(k) = omega_rate * k in the composite bound
};

namespace detail {
inline double sq(double x) { return x * x; }
inline double p4(double x) { return x * x * x * x; }
}  // namespace detail

// multi-epoch lifting cost added to every single-epoch bound
inline double eps_lift(const BoundParams& p) {
  double a = detail::sq(p.eps * p.f * p.beta * p.eta);
  double t1 = p.R * p.R * p.R * std::exp(-(a * p.R) / 768.0);
  double t2 = (38.0 * p.R / detail::p4(p.eps)) *
              std::exp(2.0 - detail::p4(p.eps) * p.f * p.beta * p.eta * p.R / 864.0);
  return p.Q * p.L * (t1 + t2);
}

inline double bound_cp(const BoundParams& p, double k) {
  return (19.0 * p.L / detail::p4(p.eps)) * std::exp(2.0 - detail::p4(p.eps) * k / 18.0) +
         eps_lift(p);
}

inline double bound_cg(const BoundParams& p, double s) {
  return (s * p.L * p.L / 2.0) * std::exp(-detail::sq(p.eps * p.f * p.beta * p.eta) * s / 256.0) +
         eps_lift(p);
}

inline double bound_ecq(const BoundParams& p, double s) {
  return (s + 1.0) * p.L * p.L * std::exp(-detail::sq(p.eps * p.f * p.beta * p.eta) * s / 64.0) +
         eps_lift(p);
}

inline double bound_cq(const BoundParams& p, double k) {
  return (k * p.L * p.L / 2.0) * std::exp(-detail::sq(p.eps * p.f * p.beta * p.eta) * k / 256.0) +
         eps_lift(p);
}

// single-epoch divergence tail over R slots
inline double theorem4(const BoundParams& p, double k) {
  return (19.0 * p.R / detail::p4(p.eps)) * std::exp(-detail::p4(p.eps) * k / 18.0);
}

// single-epoch settlement bounds over a window of r rounds
inline double corollary2(const BoundParams& p, double k, double r) {
  return (19.0 * r / detail::p4(p.eps)) * std::exp(2.0 - detail::p4(p.eps) * k / 18.0);
}

inline double corollary3(const BoundParams& p, double s, double r) {
  return 0.5 * s * r * r * std::exp(-detail::sq(p.eps * p.f * p.beta * p.eta) * s / 256.0);
}

inline double corollary4(const BoundParams& p, double k, double r) {
  return 0.5 * k * r * r * std::exp(-detail::sq(p.eps * p.f * p.beta * p.eta) * k / 256.0);
}

// parameter floors the window/recency arguments must respect
inline double floor_s_cg(const BoundParams& p) { return 96.0 / (p.eps * p.beta * p.f * p.eta); }
inline double floor_s_ecq(const BoundParams& p) { return 24.0 / (p.eps * p.beta * p.f * p.eta); }
inline double pinned_k_cq(const BoundParams& p) { return 96.0 / (p.eps * p.beta * p.f * p.eta); }
inline double tau_cg(const BoundParams& p) { return p.beta * p.f * p.eta / 16.0; }
inline double mu_cq(const BoundParams& p) { return p.eps * p.beta * p.f * p.eta / 16.0; }

// honest-advantage admissibility: alpha(1-f)^2 eta > (1+eps)/2
inline bool admissible(double alpha, double f, double eta, double eps) {
  return alpha * (1.0 - f) * (1.0 - f) * eta > (1.0 + eps) / 2.0;
}

// epoch-length gates used by the wrapper's pre-run check
inline double r_gate_main(const BoundParams& p) {
  const double delta = 2.0;
  return 144.0 * delta / (p.eps * p.beta * p.f * p.eta);
}
inline double r_gate_single_window(const BoundParams& p) { return 288.0 / (p.eps * p.beta * p.f); }

// composite self-healing bound for recency parameter k
struct CompositeBound {
  double total = 0;
  double term_growth = 0;
  double term_cg = 0;
  double term_ecq = 0;
  double term_cp = 0;
  bool constraints_ok = true;
  std::string note;
};

inline CompositeBound theorem2(const BoundParams& p, double k) {
  CompositeBound r;
  double s = k / (4.0 * p.f);
  r.term_growth = std::exp(std::log(p.L) - p.omega_rate * k);
  r.term_cg = bound_cg(p, s);
  r.term_ecq = bound_ecq(p, s);
  r.term_cp = bound_cp(p, k * p.beta * p.eta / 64.0);
  r.total = r.term_growth + r.term_cg + r.term_ecq + r.term_cp;
  if (!(k > 384.0 / (p.eps * p.beta * p.eta))) {
    r.constraints_ok = false;
    r.note = "k below 384/(eps*beta*eta)";
  } else if (!(s >= floor_s_cg(p))) {
    r.constraints_ok = false;
    r.note = "window k/(4f) below the growth floor";
  } else if (!(p.R / 6.0 >= s)) {
    r.constraints_ok = false;
    r.note = "window k/(4f) exceeds R/6";
  }
  return r;
}

}  // namespace autosyn
