#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "biofilm/error.hpp"
#include "biofilm/kinetics.hpp"

using namespace biofilm;

TEST_CASE("monod examples and domain") {
  CHECK(monod(0.0, 1.0) == 0.0);
  CHECK(monod(2.5, 2.5) == 0.5);
  CHECK(monod(3.0, 1.0) == 0.75);
  CHECK_THROWS_AS(monod(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(monod(1.0, 0.0), DomainError);
}

TEST_CASE("monod is monotone and bounded") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const double s = u(rng), K = 0.01 + u(rng), ds = 0.1 + u(rng);
    const double m = monod(s, K);
    CHECK(m >= 0.0);
    CHECK(m < 1.0);
    CHECK(monod(s + ds, K) > m);
    CHECK(monod(s + 1.0, K + ds) < monod(s + 1.0, K));
  }
}

TEST_CASE("rate coefficients") {
  KineticsWG p;
  p.mu1 = 2.0;
  p.b1 = 1.0;
  p.K11 = p.K13 = 1.0;
  p.k1 = 0.1;
  const auto r = rate_coeffs_wg(1.0, 1.0, 1.0, p);
  CHECK(r.A == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r.A1 == doctest::Approx(-0.1).epsilon(1e-15));

  KineticsWG q;
  q.k1 = 0.03;
  q.k2 = 0.07;
  const auto z = rate_coeffs_wg(0.7, 0.2, 0.0, q);
  CHECK(z.A == 0.0);
  CHECK(z.B == 0.0);
  CHECK(z.A1 == -0.03);
  CHECK(z.A2 == -0.07);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    q.k1 = u(rng);
    q.k2 = u(rng);
    const auto c = rate_coeffs_wg(u(rng), u(rng), u(rng), q);
    CHECK(c.A1 - c.A == doctest::Approx(-q.k1).epsilon(1e-14));
    CHECK(c.A2 - c.B == doctest::Approx(-q.k2).epsilon(1e-14));
  }
  CHECK_THROWS_AS(rate_coeffs_wg(-1.0, 0.0, 0.0, q), DomainError);
}

TEST_CASE("WG biomass RHS") {
  KineticsWG p;
  p.k1 = 0.2;
  p.k2 = 0.3;
  const std::array<double, 3> X{0.5, 0.3, 0.2};
  const auto F = biomass_rhs_wg(X, {0.0, 0.0, 0.0}, p);
  CHECK(F[0] == doctest::Approx(-0.2 * 0.5));
  CHECK(F[1] == doctest::Approx(-0.3 * 0.3));
  CHECK(F[2] == doctest::Approx(0.2 * 0.5 + 0.3 * 0.3));
  CHECK(F[0] + F[1] + F[2] == doctest::Approx(0.0).scale(1.0));
  const auto Z = biomass_rhs_wg({0.0, 0.0, 0.0}, {1.0, 2.0, 3.0}, p);
  CHECK(Z == std::array<double, 3>{0.0, 0.0, 0.0});
  CHECK_THROWS_AS(biomass_rhs_wg({-0.1, 0.5, 0.6}, {1.0, 1.0, 1.0}, p), DomainError);
}

TEST_CASE("WG conservation identity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  KineticsWG p;
  p.k1 = 0.05;
  p.k2 = 0.02;
  for (int k = 0; k < 1000; ++k) {
    const std::array<double, 3> S{3 * u(rng), 3 * u(rng), 5 * u(rng)};
    // off the simplex
    const std::array<double, 3> Y{u(rng), u(rng), u(rng)};
    const auto F = biomass_rhs_wg(Y, S, p);
    const double G = growth_rate_wg(Y, S, p);
    const double expect = G * (1.0 - Y[0] - Y[1] - Y[2]);
    CHECK(F[0] + F[1] + F[2] == doctest::Approx(expect).scale(1.0).epsilon(1e-14));
    // on the simplex
    const double a = u(rng), b = u(rng) * (1.0 - a);
    const std::array<double, 3> X{a, b, 1.0 - a - b};
    const auto H = biomass_rhs_wg(X, S, p);
    CHECK(std::abs(H[0] + H[1] + H[2]) < 1e-15);
  }
}

TEST_CASE("WG substrate RHS") {
  KineticsWG p;
  CHECK(substrate_rhs_wg(0.5, 0.5, {1.0, 1.0, 0.0}, p) == std::array<double, 3>{0.0, 0.0, 0.0});
  const auto z = substrate_rhs_wg(0.0, 0.0, {1.0, 1.0, 1.0}, p);
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 0.0);
  CHECK(z[2] == 0.0);
  // beta1 = -D1 mu1 / Y1 = -1
  KineticsWG q;
  q.D1 = 1.0;
  q.mu1 = 0.5;
  q.Y1 = 0.5;
  q.K11 = q.K13 = 1.0;
  CHECK(q.beta1() == -1.0);
  const auto H = substrate_rhs_wg(2.0, 0.0, {1.0, 1.0, 1.0}, q);
  CHECK(H[0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(p.beta1() < 0.0);
  CHECK(p.beta2() < 0.0);
}

TEST_CASE("beta5 D3 switch") {
  KineticsWG p;
  p.D3 = 2.0;
  const double plain = p.beta5();
  p.beta5_with_D3 = true;
  CHECK(p.beta5() == doctest::Approx(2.0 * plain));
}

TEST_CASE("rescaled gamma") {
  KineticsWG p;
  p.K13 = 0.5;
  p.K23 = 1.5;
  CHECK(rescaled_wg(p).gamma == doctest::Approx(3.0));
  CHECK(rescaled_wg(p).lambda[0] == doctest::Approx(p.beta1() / p.K11));
}

TEST_CASE("KineticsWG validation names the key") {
  KineticsWG p;
  p.mu2 = -1.0;
  try {
    p.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("mu2") != std::string::npos);
  }
}

TEST_CASE("saturation index and diffusion") {
  CHECK(saturation_index(2.0, 3.0, 6.0) == 1.0);
  CHECK(saturation_index(0.0, 7.0, 2.0) == 0.0);
  CHECK(saturation_index(1.0, 1.0, 4.0) == 0.25);
  CHECK_THROWS_AS(saturation_index(1.0, 1.0, 0.0), DomainError);
  CHECK(diffusion_coeff(1.0, 2.0) == 2.0);
  CHECK(diffusion_coeff(0.0, 2.0) == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK(diffusion_coeff(0.75, 1.0) == doctest::Approx(0.60653).epsilon(1e-5));
  CHECK_THROWS_AS(diffusion_coeff(1.2, 1.0), DomainError);
  CHECK_THROWS_AS(diffusion_coeff(-0.1, 1.0), DomainError);
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double d = diffusion_coeff(i / 100.0, 1.0);
    CHECK(d > prev);
    prev = d;
  }
}

TEST_CASE("SRB biomass RHS") {
  KineticsSRB p;
  const std::array<double, 5> X0{};
  const std::array<double, 6> S0{};
  const auto F = biomass_rhs_srb(X0, S0, p);
  CHECK(F[kPr] == doctest::Approx(p.k));
  CHECK(F[kE] == 0.0);
  CHECK(F[kA] == 0.0);
  CHECK(F[kI] == 0.0);
  CHECK(F[kPo] == 0.0);

  const std::array<double, 5> X{0.3, 0.2, 0.1, 0.1, 0.3};
  std::array<double, 6> S{1.0, 1.0, 1.0, 1.0, 2.0, 0.0};
  S[sCat] = p.Ksp / S[sAn];
  CHECK(biomass_rhs_srb(X, S, p)[kPr] == doctest::Approx(0.0).scale(1.0));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    std::array<double, 5> Y;
    std::array<double, 6> T;
    for (double& y : Y) y = u(rng);
    for (double& t : T) t = u(rng);
    const auto G = biomass_rhs_srb(Y, T, p);
    CHECK(G[kI] == p.kE * Y[kE] + p.kA * Y[kA]);
    CHECK(G[kPr] >= 0.0);
  }
  KineticsSRB bad;
  bad.XPo_bar = 1.0;
  CHECK_THROWS_AS(biomass_rhs_srb(X, S, bad), DomainError);
}

TEST_CASE("SRB substrate RHS") {
  KineticsSRB p;
  const std::array<double, 5> X0{};
  std::array<double, 6> S{1.0, 1.0, 1.0, 1.0, 2.0, 0.0};
  S[sCat] = p.Ksp / S[sAn];
  for (double r : substrate_rhs_srb(X0, S, p)) CHECK(r == doctest::Approx(0.0).scale(1.0));

  const std::array<double, 5> X{0.3, 0.2, 0.1, 0.1, 0.3};
  std::array<double, 6> T{0.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  const auto R = substrate_rhs_srb(X, T, p);
  CHECK(R[sE] == 0.0);
  // acetate keeps only the X_A term
  const double mA = monod(T[sA], p.KA), mO = monod(T[sO], p.KO), inhib = p.KI / (p.KI + T[sO]);
  CHECK(R[sA] == doctest::Approx(-p.muA * mA * inhib * (mO + 1.0) * X[kA]));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int k = 0; k < 500; ++k) {
    std::array<double, 5> Y;
    std::array<double, 6> Z;
    for (double& y : Y) y = u(rng);
    for (double& z : Z) z = u(rng);
    CHECK(substrate_rhs_srb(Y, Z, p)[sCat] <= 0.0);
  }
}

TEST_CASE("KineticsSRB validation") {
  KineticsSRB p;
  CHECK_NOTHROW(p.validate());
  p.YE = 1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  KineticsSRB q;
  q.XPo_bar = 0.0;
  CHECK_THROWS_AS(q.validate(), ConfigError);
}

TEST_CASE("RHS evaluations are bitwise deterministic") {
  KineticsWG p;
  const std::array<double, 3> X{0.4, 0.35, 0.25}, S{0.3, 0.7, 2.1};
  const auto a = biomass_rhs_wg(X, S, p), b = biomass_rhs_wg(X, S, p);
  CHECK(a == b);
  const auto c = substrate_rhs_wg(0.4, 0.35, S, p), d = substrate_rhs_wg(0.4, 0.35, S, p);
  CHECK(c == d);
}
