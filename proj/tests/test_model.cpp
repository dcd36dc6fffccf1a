#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "epifv/model.hpp"
#include "epifv/rng.hpp"

using namespace epifv;

TEST_CASE("incidence point values") {
  CHECK(incidence(1.0, 1.0, 1.0, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(incidence(0.0, 0.0, 0.0, 5.0) == 0.0);
  CHECK(incidence(-1.0, 2.0, 0.0, 3.0) == 0.0);
  CHECK(incidence(-1.0, -2.0, -3.0, 3.0) == 0.0);
}

TEST_CASE("incidence is invariant under positive parts") {
  SplitMix64 rng(42);
  for (int i = 0; i < 5000; ++i) {
    const double u = rng.uniform() * 8.0 - 4.0;
    const double v = rng.uniform() * 8.0 - 4.0;
    const double w = rng.uniform() * 8.0 - 4.0;
    const double alpha = rng.uniform() * 5.0;
    const double up = std::max(u, 0.0), vp = std::max(v, 0.0), wp = std::max(w, 0.0);
    CHECK(incidence(u, v, w, alpha) == incidence(up, vp, wp, alpha));
  }
}

TEST_CASE("incidence is bounded by alpha*min(u+,v+)") {
  SplitMix64 rng(43);
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform() * 10.0 - 2.0;
    const double v = rng.uniform() * 10.0 - 2.0;
    const double w = rng.uniform() * 10.0 - 2.0;
    const double alpha = rng.uniform() * 4.0;
    const double s = incidence(u, v, w, alpha);
    CHECK(s >= 0.0);
    const double bound = alpha * std::min(std::max(u, 0.0), std::max(v, 0.0));
    CHECK(s <= bound * (1.0 + 1e-12) + 1e-300);
  }
}

TEST_CASE("incidence Lipschitz in the first argument away from the origin") {
  SplitMix64 rng(44);
  for (int i = 0; i < 20000; ++i) {
    const double v = rng.uniform() * 5.0;
    const double w = rng.uniform() * 5.0;
    double u1 = rng.uniform() * 5.0;
    double u2 = rng.uniform() * 5.0;
    if (u1 + v + w < 1.0) u1 += 1.0;
    if (u2 + v + w < 1.0) u2 += 1.0;
    const double alpha = 0.5 + rng.uniform() * 3.0;
    const double d = std::fabs(incidence(u1, v, w, alpha) - incidence(u2, v, w, alpha));
    CHECK(d <= alpha * std::fabs(u1 - u2) * (1.0 + 1e-12) + 1e-300);
  }
}

TEST_CASE("treatment branches") {
  CHECK(treatment(0.5, 0.5) == 0.5);
  CHECK(treatment(0.0, 0.5) == 0.0);
  CHECK(treatment(-1.0, 0.5) == 0.0);
  CHECK(treatment(1e-300, 0.25) == 0.25);
}

TEST_CASE("truncated linear law branches") {
  const DiffusionLaw law = DiffusionLaw::truncated_linear(1e4, 1e-4);
  CHECK(law(2e4) == 1e4);
  CHECK(law(1.0) == 1.0);
  CHECK(law(1e-6) == 1e-4);
}

TEST_CASE("constant and linear laws") {
  CHECK(DiffusionLaw::constant(0.1)(123.0) == 0.1);
  CHECK(DiffusionLaw::linear(0.1)(3.0) == doctest::Approx(0.3));
  CHECK(DiffusionLaw::linear(0.1)(-1.0) == doctest::Approx(-0.1));  // violates the lower bound
  CHECK_FALSE(DiffusionLaw::linear(0.1).bounded_below());
  CHECK(DiffusionLaw::constant(0.1).bounded_below());
}

TEST_CASE("truncated inverse-square law") {
  const DiffusionLaw law = DiffusionLaw::truncated_inverse_square(400.0, 1.5, 1e4, 1e-4);
  CHECK(law(1.5) == 1e4);  // singular point takes the upper clamp
  CHECK(law(1.5 + 2.0) == doctest::Approx(100.0));  // 400/4
  CHECK(law(1.5 + 1e6) == 1e-4);
  CHECK(law(1.5 - 2.0) == doctest::Approx(100.0));
}

TEST_CASE("truncated laws stay inside [eps, M] over a million samples") {
  const DiffusionLaw lin = DiffusionLaw::truncated_linear(1e4, 1e-4);
  const DiffusionLaw inv = DiffusionLaw::truncated_inverse_square(4e5, 4.0109, 1e4, 1e-4);
  SplitMix64 rng(45);
  for (int i = 0; i < 1000000; ++i) {
    const double s = (rng.uniform() - 0.5) * 2e6;
    const double a = lin(s), b = inv(s);
    CHECK(a >= 1e-4);
    CHECK(a <= 1e4);
    CHECK(b >= 1e-4);
    CHECK(b <= 1e4);
  }
}

TEST_CASE("law constructors validate parameters") {
  CHECK_THROWS_AS(DiffusionLaw::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(DiffusionLaw::truncated_linear(1e-6, 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(DiffusionLaw::truncated_linear(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(DiffusionLaw::truncated_inverse_square(0.0, 1.0, 1e4, 1e-4),
                  std::invalid_argument);
}

TEST_CASE("sampled Lipschitz bound for the law families") {
  SplitMix64 rng(46);
  const DiffusionLaw lin = DiffusionLaw::truncated_linear(1e2, 1e-2);
  const double d = 4e5, M = 1e4, eps = 1e-4;
  const DiffusionLaw inv = DiffusionLaw::truncated_inverse_square(d, 0.0, M, eps);
  const double L_inv = 2.0 * std::pow(M, 1.5) / std::sqrt(d);
  for (int i = 0; i < 100000; ++i) {
    const double s1 = (rng.uniform() - 0.5) * 2e4;
    const double s2 = (rng.uniform() - 0.5) * 2e4;
    CHECK(std::fabs(lin(s1) - lin(s2)) <= std::fabs(s1 - s2) * (1.0 + 1e-12));
    CHECK(std::fabs(inv(s1) - inv(s2)) <= L_inv * std::fabs(s1 - s2) * (1.0 + 1e-9));
  }
}

TEST_CASE("reaction rates: zeros give zeros") {
  ModelParams p;
  p.alpha_incidence = 2.0;
  p.mu = 0.01;
  p.gamma = 1.0;
  const auto f = reaction_rates(p, 0.0, 0.0, 0.0, 0.0, 0.0);
  CHECK(f.f1 == 0.0);
  CHECK(f.f2 == 0.0);
  CHECK(f.f3 == 0.0);
}

TEST_CASE("reaction rates: base model worked values") {
  ModelParams p;
  p.alpha_incidence = 2.0;
  p.mu = 0.01;
  p.gamma = 1.0;
  const auto f = reaction_rates(p, 1.0, 1.0, 1.0, 1.0, 1.0);
  CHECK(f.f1 == doctest::Approx(-2.0 / 3.0 - 0.01).epsilon(1e-14));
  CHECK(f.f2 == doctest::Approx(2.0 / 3.0 - 1.01).epsilon(1e-14));
  CHECK(f.f3 == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("reaction rates: treatment switches off at u2=0") {
  ModelParams p;
  p.variant = Variant::SARS;
  p.alpha_incidence = 3.8;
  p.mu = 0.3;
  p.gamma = 0.8;
  p.A = 3.0;
  p.r = 0.5;
  const auto off = reaction_rates(p, 2.0, 0.0, 1.0, 2.0, 0.0);
  CHECK(off.f2 == doctest::Approx(-(p.gamma + p.mu) * 0.0).epsilon(1e-15));
  CHECK(off.f3 == doctest::Approx(-p.mu * 1.0).epsilon(1e-14));
  const auto on = reaction_rates(p, 2.0, 0.5, 1.0, 2.0, 0.5);
  CHECK(on.f3 == doctest::Approx(p.gamma * 0.5 + p.r - p.mu * 1.0).epsilon(1e-14));
}

TEST_CASE("parameter validation") {
  ModelParams p;
  p.mu = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  ModelParams q;
  q.A = 1.0;  // BaseSIR with recruitment
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  ModelParams s;
  s.variant = Variant::SARS;
  s.A = 1.0;
  s.r = 0.5;
  CHECK_NOTHROW(s.validate());
}
