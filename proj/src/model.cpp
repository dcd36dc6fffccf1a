#include "epifv/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace epifv {

namespace {
inline double pos(double x) { return x > 0.0 ? x : 0.0; }
}

void ModelParams::validate() const {
  if (alpha_incidence < 0.0 || mu < 0.0 || gamma < 0.0)
    throw std::invalid_argument("ModelParams: rates must be nonnegative");
  if (A < 0.0 || r < 0.0)
    throw std::invalid_argument("ModelParams: A and r must be nonnegative");
  if (variant == Variant::BaseSIR && (A != 0.0 || r != 0.0))
    throw std::invalid_argument("ModelParams: A and r apply to the SARS variant only");
}

double incidence(double u, double v, double w, double alpha) {
  const double up = pos(u), vp = pos(v), wp = pos(w);
  const double total = up + vp + wp;
  if (total <= 0.0) return 0.0;
  return alpha * up * vp / total;
}

double treatment(double v, double r) { return v > 0.0 ? r : 0.0; }

DiffusionLaw DiffusionLaw::constant(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("DiffusionLaw::constant: c must be > 0");
  DiffusionLaw l;
  l.kind_ = Kind::Constant;
  l.c_ = c;
  return l;
}

DiffusionLaw DiffusionLaw::linear(double slope) {
  DiffusionLaw l;
  l.kind_ = Kind::Linear;
  l.slope_ = slope;
  return l;
}

DiffusionLaw DiffusionLaw::truncated_linear(double M, double eps) {
  if (!(eps > 0.0) || !(M >= eps))
    throw std::invalid_argument("DiffusionLaw::truncated_linear: need 0 < eps <= M");
  DiffusionLaw l;
  l.kind_ = Kind::TruncatedLinear;
  l.M_ = M;
  l.eps_ = eps;
  return l;
}

DiffusionLaw DiffusionLaw::truncated_inverse_square(double d, double u_tilde, double M, double eps) {
  if (!(eps > 0.0) || !(M >= eps))
    throw std::invalid_argument("DiffusionLaw::truncated_inverse_square: need 0 < eps <= M");
  if (!(d > 0.0)) throw std::invalid_argument("DiffusionLaw::truncated_inverse_square: d must be > 0");
  DiffusionLaw l;
  l.kind_ = Kind::TruncatedInverseSquare;
  l.d_ = d;
  l.u_tilde_ = u_tilde;
  l.M_ = M;
  l.eps_ = eps;
  return l;
}

double DiffusionLaw::operator()(double s) const {
  switch (kind_) {
    case Kind::Constant:
      return c_;
    case Kind::Linear:
      return slope_ * s;
    case Kind::TruncatedLinear:
      return std::clamp(s, eps_, M_);
    case Kind::TruncatedInverseSquare: {
      const double gap = s - u_tilde_;
      if (gap == 0.0) return M_;  // raw expression diverges; take the upper clamp
      const double raw = d_ / (gap * gap);
      if (!std::isfinite(raw)) return M_;
      return std::clamp(raw, eps_, M_);
    }
  }
  return c_;
}

double DiffusionLaw::lower_bound() const {
  switch (kind_) {
    case Kind::Constant: return c_;
    case Kind::Linear: return 0.0;
    default: return eps_;
  }
}

double DiffusionLaw::upper_bound() const {
  switch (kind_) {
    case Kind::Constant: return c_;
    case Kind::Linear: return std::numeric_limits<double>::infinity();
    default: return M_;
  }
}

std::string DiffusionLaw::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Constant: os << "constant(c=" << c_ << ")"; break;
    case Kind::Linear: os << "linear(slope=" << slope_ << ")"; break;
    case Kind::TruncatedLinear: os << "truncated_linear(M=" << M_ << ", eps=" << eps_ << ")"; break;
    case Kind::TruncatedInverseSquare:
      os << "truncated_inverse_square(d=" << d_ << ", u_tilde=" << u_tilde_ << ", M=" << M_
         << ", eps=" << eps_ << ")";
      break;
  }
  return os.str();
}

ReactionRates reaction_rates(const ModelParams& p, double u1, double u2, double u3,
                             double u1_lag, double u2_lag) {
  ReactionRates f;
  const double sig_now = incidence(u1, u2, u3, p.alpha_incidence);
  const double sig_lag = incidence(u1_lag, u2, u3, p.alpha_incidence);
  if (p.variant == Variant::BaseSIR) {
    f.f1 = -sig_now - p.mu * u1;
    f.f2 = sig_lag - (p.gamma + p.mu) * u2;
    f.f3 = p.gamma * u2_lag;
  } else {
    const double H = treatment(u2, p.r);
    f.f1 = p.A - sig_now - p.mu * u1;
    f.f2 = sig_lag - (p.gamma + p.mu) * u2 - H;
    f.f3 = p.gamma * u2_lag + H - p.mu * u3;
  }
  return f;
}

}  // namespace epifv
