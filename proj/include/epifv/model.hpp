#ifndef EPIFV_MODEL_HPP
#define EPIFV_MODEL_HPP

#include <string>

namespace epifv {

enum class Variant { BaseSIR, SARS };

/// Reaction parameters. A (recruitment) and r (treatment capacity) are only
/// meaningful for the SARS variant and must stay zero otherwise.
struct ModelParams {
  double alpha_incidence = 0.0;
  double mu = 0.0;
  double gamma = 0.0;
  Variant variant = Variant::BaseSIR;
  double A = 0.0;
  double r = 0.0;

  /// Throws std::invalid_argument on negative rates.
  void validate() const;
};

/// Incidence sigma(u,v,w) = alpha * u+ v+ / (u+ + v+ + w+), extended by 0
/// when all positive parts vanish.
double incidence(double u, double v, double w, double alpha);

/// Treatment H(v) = r for v > 0, else 0.
double treatment(double v, double r);

/// Nonlocal diffusion-coefficient families a_i(.). The truncated kinds keep
/// evaluations inside [eps, M]; the plain linear law can reach 0 and is
/// excluded from the positivity-dependent invariant suites.
class DiffusionLaw {
 public:
  enum class Kind { Constant, Linear, TruncatedLinear, TruncatedInverseSquare };

  static DiffusionLaw constant(double c);
  static DiffusionLaw linear(double slope);
  static DiffusionLaw truncated_linear(double M, double eps);
  static DiffusionLaw truncated_inverse_square(double d, double u_tilde, double M, double eps);

  double operator()(double s) const;

  Kind kind() const { return kind_; }
  double lower_bound() const;  // > 0 except for the Linear kind (0)
  double upper_bound() const;
  /// False for the Linear kind, whose values are not bounded away from 0.
  bool bounded_below() const { return kind_ != Kind::Linear; }

  double c() const { return c_; }
  double slope() const { return slope_; }
  double M() const { return M_; }
  double eps() const { return eps_; }
  double d() const { return d_; }
  double u_tilde() const { return u_tilde_; }

  std::string describe() const;

 private:
  DiffusionLaw() = default;
  Kind kind_ = Kind::Constant;
  double c_ = 1.0, slope_ = 0.0, M_ = 0.0, eps_ = 0.0, d_ = 0.0, u_tilde_ = 0.0;
};

struct ReactionRates {
  double f1 = 0.0, f2 = 0.0, f3 = 0.0;
};

/// Right-hand sides d/dt u_i = a_i Lap u_i + f_i in the form the scheme
/// uses: u1_lag feeds sigma in equation 2 and u2_lag feeds gamma*u2 in
/// equation 3 (both are time-n values there).
ReactionRates reaction_rates(const ModelParams& p, double u1, double u2, double u3,
                             double u1_lag, double u2_lag);

}  // namespace epifv

#endif
