#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "biofilm/error.hpp"
#include "biofilm/numerics.hpp"
#include "biofilm/stability.hpp"
#include "biofilm/steady.hpp"

using namespace biofilm;

namespace {

SrbSteadyProfiles srb_profiles(std::size_t n, double L = 1.5) {
  SrbSteadyProfiles s;
  s.grid = Grid(n);
  s.L_star = L;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = s.grid.x(i);
    s.XE.push_back(0.3 + 0.1 * x);
    s.XA.push_back(0.2 * (1.0 - x) + 0.05);
    s.fPo.push_back(0.3 + 0.2 * x * x);
  }
  return s;
}

SrbSteadyProfiles flat_profiles(std::size_t n, double XE, double XA, double fPo, double L) {
  SrbSteadyProfiles s;
  s.grid = Grid(n);
  s.L_star = L;
  s.XE.assign(n, XE);
  s.XA.assign(n, XA);
  s.fPo.assign(n, fPo);
  return s;
}

Matrix6c random_matrix(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Matrix6c M;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) M(i, j) = cdouble(nd(rng), nd(rng));
  return M;
}

SteadyState hand_steady(std::size_t n, double C1, double C2, double C3, double X1, double X2) {
  SteadyState ss;
  ss.grid = Grid(n);
  ss.L_star = 1.0;
  ss.C_star = {std::vector<double>(n, C1), std::vector<double>(n, C2),
               std::vector<double>(n, C3)};
  ss.X_star = {std::vector<double>(n, X1), std::vector<double>(n, X2),
               std::vector<double>(n, 1.0 - X1 - X2)};
  return ss;
}

}  // namespace

TEST_CASE("energy_E examples") {
  for (std::size_t n : {101u, 201u}) {
    const Grid g(n);
    const double h = g.h();
    std::vector<std::vector<double>> Cs(3, std::vector<double>(n, 0.4));
    CHECK(energy_E_profiles(Cs, Cs, h) == 0.0);
    auto C = Cs;
    for (auto& c : C)
      for (double& v : c) v += 1.0;
    CHECK(energy_E_profiles(C, Cs, h) == doctest::Approx(1.5).epsilon(1e-14));
    C = Cs;
    for (std::size_t i = 0; i < n; ++i) C[1][i] += g.x(i);
    CHECK(std::abs(energy_E_profiles(C, Cs, h) - 1.0 / 6.0) <= h * h);
  }
  std::vector<std::vector<double>> a(3, std::vector<double>(11)), b(3, std::vector<double>(12));
  CHECK_THROWS_AS(energy_E_profiles(a, b, 0.1), DomainError);
}

TEST_CASE("energy_E on states checks the grid") {
  SteadyState ss = hand_steady(51, 0.5, 0.5, 2.0, 1.0, 0.0);
  FieldState s = steady_to_state(ss);
  CHECK(energy_E(s, ss) == 0.0);
  CHECK(energy_F(s, ss) == 0.0);
  SteadyState other = hand_steady(41, 0.5, 0.5, 2.0, 1.0, 0.0);
  CHECK_THROWS_AS(energy_E(s, other), DomainError);
  CHECK_THROWS_AS(energy_F(s, other), DomainError);
}

TEST_CASE("energy_F examples") {
  const Grid g(101);
  std::vector<std::vector<double>> Cs(3, std::vector<double>(g.n(), 0.2));
  CHECK(energy_F_profiles(Cs, Cs, g.h()) == 0.0);
  auto C = Cs;
  for (std::size_t i = 0; i < g.n(); ++i) C[2][i] += g.x(i);
  CHECK(energy_F_profiles(C, Cs, g.h()) == doctest::Approx(0.5).epsilon(1e-12));

  // sin(pi x): 1/2 int pi^2 cos^2 = pi^2/4
  const double exact = std::numbers::pi * std::numbers::pi / 4.0;
  double prev = 0.0;
  for (std::size_t n : {51u, 101u, 201u, 401u}) {
    const Grid gg(n);
    std::vector<std::vector<double>> Z(3, std::vector<double>(n, 0.0)), S = Z;
    for (std::size_t i = 0; i < n; ++i) S[0][i] = std::sin(std::numbers::pi * gg.x(i));
    const double err = std::abs(energy_F_profiles(S, Z, gg.h()) - exact);
    if (prev > 0.0) CHECK(prev / err >= 2.0);
    prev = err;
  }
}

TEST_CASE("linearized coefficients: degenerate profiles") {
  SUBCASE("no biomass") {
    const auto ss = hand_steady(21, 0.3, 0.4, 2.0, 0.0, 0.0);
    const auto c = linearized_coeffs_wg(ss, 0.2, KineticsWG{});
    for (const auto* v : {&c.Q1, &c.Q2, &c.N1, &c.N2, &c.M1, &c.M2, &c.M3})
      for (double x : *v) CHECK(x == 0.0);
  }
  SUBCASE("C1 = C2 = 0") {
    KineticsWG p;
    const double y = 0.3, C3 = 2.0, X1 = 0.6;
    const auto ss = hand_steady(21, 0.0, 0.0, C3, X1, 0.2);
    const auto c = linearized_coeffs_wg(ss, y, p);
    const double m13 = C3 / (p.K13 + C3);
    for (std::size_t i = 0; i < ss.grid.n(); ++i) {
      CHECK(c.Q2[i] == 0.0);
      CHECK(c.Q1[i] == doctest::Approx(std::exp(y) * p.beta1() * X1 / p.K11 * m13));
      CHECK(c.N2[i] == 0.0);
    }
  }
}

TEST_CASE("linearized coefficients: sign audit under beta3 < 0") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    KineticsWG p;
    p.mu1 = 0.2 + 2.0 * u(rng);
    p.mu2 = 0.2 + 2.0 * u(rng);
    p.Y1 = 0.2 + 0.6 * u(rng);
    p.alpha1 = p.Y1 * u(rng);  // beta3 < 0
    p.Y2 = 0.2 + 0.6 * u(rng);
    p.alpha2 = 1.5 * u(rng);
    p.b1 = u(rng);
    p.b2 = u(rng);
    REQUIRE(p.beta3() < 0.0);
    const double X1 = u(rng), X2 = (1.0 - X1) * u(rng);
    const auto ss = hand_steady(11, 2.0 * u(rng), 2.0 * u(rng), 5.0 * u(rng), X1, X2);
    const auto c = linearized_coeffs_wg(ss, u(rng), p);
    for (std::size_t i = 0; i < 11; ++i) {
      CHECK(c.Q1[i] <= 0.0);
      CHECK(c.Q2[i] <= 0.0);
      CHECK(c.N1[i] <= 0.0);
      CHECK(c.N2[i] <= 0.0);
      CHECK(c.M1[i] <= 0.0);
      CHECK(c.M3_terms[0][i] <= 0.0);
      CHECK(c.M3_terms[1][i] * p.beta5() >= 0.0);
      CHECK(c.M3_terms[2][i] >= 0.0);
      CHECK(c.M3[i] ==
            doctest::Approx(c.M3_terms[0][i] + c.M3_terms[1][i] + c.M3_terms[2][i]));
    }
  }
}

TEST_CASE("decay_fit examples") {
  std::vector<double> t, v, one;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(0.1 * i);
    v.push_back(5.0 * std::exp(-0.3 * t.back()));
    one.push_back(2.0);
  }
  auto f = decay_fit(t, v, 0.0, 10.0);
  CHECK(f.K_amp == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(f.mu_rate == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.samples == 101);

  f = decay_fit(t, v, 4.0, 6.0);
  CHECK(f.mu_rate == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(f.t_start >= 4.0 - 1e-12);
  CHECK(f.t_end <= 6.0 + 1e-12);

  f = decay_fit(t, one, 0.0, 10.0);
  CHECK(std::abs(f.mu_rate) < 1e-14);
  CHECK(std::abs(f.K_amp - 2.0) < 1e-12);
  CHECK(f.r2 >= 0.0);
  CHECK(f.r2 <= 1.0);

  auto bad = v;
  bad[50] = 0.0;
  CHECK_THROWS_AS(decay_fit(t, bad, 0.0, 10.0), DomainError);
  CHECK_NOTHROW(decay_fit(t, bad, 6.0, 10.0));
  CHECK_THROWS_AS(decay_fit(t, v, 0.0, 0.3), DomainError);
  CHECK_THROWS_AS(decay_fit(t, std::vector<double>(3, 1.0), 0.0, 1.0), DomainError);
}

TEST_CASE("decay_fit r2 drops on noisy data") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd(0.0, 0.5);
  std::vector<double> t, v;
  for (int i = 0; i < 200; ++i) {
    t.push_back(0.05 * i);
    v.push_back(std::exp(-0.5 * t.back() + nd(rng)));
  }
  const auto f = decay_fit(t, v, 0.0, 10.0);
  CHECK(f.r2 < 0.95);
  CHECK(f.r2 >= 0.0);
}

TEST_CASE("perturb_steady and monotone_violations") {
  const auto ss = hand_steady(21, 0.5, 0.4, 2.0, 0.7, 0.1);
  const auto s = perturb_steady(ss, 0.01);
  CHECK(s.y == doctest::Approx(std::log(1.01)).epsilon(1e-14));
  CHECK(s.C[0].back() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.C[2].front() == doctest::Approx(2.0 * 0.99).epsilon(1e-15));
  CHECK(s.X[0] == ss.X_star[0]);
  CHECK_THROWS_AS(perturb_steady(ss, -1.0), DomainError);

  CHECK(monotone_violations({5, 4, 4, 3, 3.5, 2}, 0, 0.0) == 1);
  CHECK(monotone_violations({5, 4, 4, 3, 3.5, 2}, 4, 0.0) == 0);
  CHECK(monotone_violations({1, 1 + 1e-14, 1}, 0, 1e-13) == 0);
}

TEST_CASE("local equilibrium") {
  KineticsSRB p;
  REQUIRE(p.KO == 4.0);
  for (double a : {0.1, 0.5, 1.0, 7.3}) {
    const auto e = local_equilibrium_srb(p, a);
    CHECK(saturation_index(e[sAn], e[sCat], p.Ksp) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e[sO] == 2.0);
    CHECK(e[sE] == 0.0);
    CHECK(e[sA] == 0.0);
    CHECK(e[sC] == 0.0);
    // local reaction terms vanish with no active biomass
    const std::array<double, 5> X{0.0, 0.0, 0.3, 0.1, 0.4};
    const auto R = substrate_rhs_srb(X, e, p);
    for (double r : R) CHECK(std::abs(r) < 1e-15);
  }
  CHECK_THROWS_AS(local_equilibrium_srb(p, 0.0), DomainError);
  CHECK_THROWS_AS(local_equilibrium_srb(p, -1.0), DomainError);
}

TEST_CASE("local Jacobian examples") {
  KineticsSRB p;
  p.muE = 1.2;
  p.KE = 0.6;
  const auto eq = local_equilibrium_srb(p, 0.5);
  auto r = local_jacobian_srb(p, 0.5, 0.3, eq);
  CHECK(r.J(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(r.J(1, 0) == r.J(0, 0));
  CHECK(r.J52 > 0.0);
  CHECK(r.max_mismatch <= 1e-10);
  // zero modes from O and C rows
  CHECK(r.verdict == Verdict::NotAsymptoticallyStable);

  r = local_jacobian_srb(p, 0.0, 0.0, eq);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 6; ++j) CHECK(r.J(i, j) == 0.0);
  CHECK(r.J52 == 0.0);
  int zeros = 0;
  for (const auto& x : r.xi_oracle)
    if (std::abs(x) < 1e-12) ++zeros;
  CHECK(zeros >= 4);
  const auto blk = eig2(r.J(4, 4), r.J(4, 5), r.J(5, 4), r.J(5, 5));
  CHECK(std::abs(r.xi[4] - blk[0]) == 0.0);
}

TEST_CASE("local Jacobian: closed form vs oracle on random draws") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    KineticsSRB p;
    p.muE = u(rng);
    p.muA = u(rng);
    p.KE = u(rng);
    p.KA = u(rng);
    p.KO = u(rng);
    p.KI = u(rng);
    p.KPr = u(rng);
    p.YE = 0.1 + 0.25 * u(rng);
    p.YA = 0.1 + 0.25 * u(rng);
    p.k = u(rng);
    p.Ksp = u(rng);
    p.alpha = u(rng);
    // off-hyperbola equilibria too, so the An/Cat block is not trivially zero
    std::array<double, 6> eq = local_equilibrium_srb(p, u(rng));
    eq[sCat] *= u(rng);
    const auto r = local_jacobian_srb(p, u(rng), u(rng), eq);
    worst = std::max(worst, r.max_mismatch);
    CHECK(r.max_mismatch <= 1e-10);
    CHECK(spectrum_distance(r.xi, eig6_oracle(r.J.cast<cdouble>())) <= 1e-10);
  }
  MESSAGE("worst Jacobian mismatch " << worst);
}

TEST_CASE("eig2 closed form") {
  const auto e = eig2(-1.0, 2.0, 1.0, -3.0);
  const double s3 = std::sqrt(3.0);
  const bool order = e[0].real() > e[1].real();
  const cdouble hi = order ? e[0] : e[1], lo = order ? e[1] : e[0];
  CHECK(std::abs(hi - cdouble(-2.0 + s3)) < 1e-15);
  CHECK(std::abs(lo - cdouble(-2.0 - s3)) < 1e-15);
  CHECK(hi.real() == doctest::Approx(-0.268).epsilon(1e-3));
  CHECK(lo.real() == doctest::Approx(-3.732).epsilon(1e-3));
}

TEST_CASE("eig6_oracle") {
  Matrix6c D = Matrix6c::Zero();
  Spectrum6 diag{cdouble(1, 0), cdouble(-2, 1), cdouble(0.5, -3), cdouble(4, 0), cdouble(-1, -1),
                 cdouble(0, 0)};
  for (int i = 0; i < 6; ++i) D(i, i) = diag[i];
  CHECK(spectrum_distance(eig6_oracle(D), diag) < 1e-14);

  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const Matrix6c M = random_matrix(rng);
    std::array<int, 6> perm{3, 0, 5, 1, 4, 2};
    Matrix6c P = Matrix6c::Zero();
    for (int i = 0; i < 6; ++i) P(i, perm[i]) = 1.0;
    const Matrix6c Mp = P * M * P.transpose();
    CHECK(spectrum_distance(eig6_oracle(M), eig6_oracle(Mp)) < 1e-10 * M.norm());
  }
  // dispersion sparsity: lower triangular head, 2x2 tail
  for (int k = 0; k < 100; ++k) {
    Matrix6c M = random_matrix(rng);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        const bool keep = (i < 4 && j <= i) || (i >= 4 && (j == 1 || j >= 4));
        if (!keep) M(i, j) = 0.0;
      }
    const auto blk = eig2(M(4, 4), M(4, 5), M(5, 4), M(5, 5));
    const Spectrum6 closed{M(0, 0), M(1, 1), M(2, 2), M(3, 3), blk[0], blk[1]};
    CHECK(spectrum_distance(closed, eig6_oracle(M)) < 1e-10);
  }
  Matrix6c bad = Matrix6c::Zero();
  bad(2, 3) = std::nan("");
  CHECK_THROWS_AS(eig6_oracle(bad), DomainError);
}

TEST_CASE("dispersion: omega = 0 with flat porosity is the reaction matrix") {
  KineticsSRB p;
  const auto prof = flat_profiles(21, 0.4, 0.3, 0.35, 1.0);
  const auto eq = local_equilibrium_srb(p, 0.5);
  const auto row = dispersion_matrix_srb(0.0, 7, prof, p, eq);
  const auto c = dispersion_coeffs(7, prof, p, eq);
  for (int j = 0; j < 6; ++j) CHECK(std::abs(c.B[j]) < 1e-12);
  CHECK(row.M(0, 0) == cdouble(-c.a[1]));
  CHECK(row.M(1, 0) == cdouble(-c.a[1]));
  CHECK(row.M(1, 1) == cdouble(-c.a[2]));
  CHECK(row.M(2, 0) == cdouble(-c.a[3]));
  CHECK(row.M(2, 1) == cdouble(-c.a[4]));
  CHECK(row.M(2, 2) == cdouble(0.0));
  CHECK(row.M(3, 1) == cdouble(-c.a[5]));
  CHECK(row.M(3, 3) == cdouble(0.0));
  CHECK(row.M(4, 1) == cdouble(c.a[8]));
  CHECK(row.M(4, 4) == cdouble(-c.a[6]));
  CHECK(row.M(4, 5) == cdouble(-c.a[7]));
  CHECK(row.M(5, 4) == cdouble(-c.a[6]));
  CHECK(row.M(5, 5) == cdouble(-c.a[7]));
  CHECK(row.M.imag().norm() == 0.0);
  // a1 = muE XE / (YE KE)
  CHECK(c.a[1] == doctest::Approx(p.muE * 0.4 / (p.YE * p.KE)));
  CHECK(c.a[3] == doctest::Approx(c.a[1] / 6.0));
  p.a3_consistent = true;
  const auto c2 = dispersion_coeffs(7, prof, p, eq);
  CHECK(c2.a[3] == doctest::Approx(c.a[1] * (1.0 - p.YE) / 6.0));
}

TEST_CASE("dispersion: diagonal modes shift by -D omega^2") {
  KineticsSRB p;
  const auto prof = srb_profiles(41);
  const auto eq = local_equilibrium_srb(p, 0.5);
  double worst = 0.0;
  for (std::size_t z : {0u, 13u, 40u}) {
    const auto c = dispersion_coeffs(z, prof, p, eq);
    const auto base = dispersion_matrix_srb(0.0, z, prof, p, eq);
    for (int k = 1; k <= 50; ++k) {
      const double w = 0.2 * k;
      const auto row = dispersion_matrix_srb(w, z, prof, p, eq);
      CHECK(row.max_mismatch <= 1e-10 * std::max(1.0, row.M.norm()));
      for (int i = 0; i < 4; ++i) {
        const double d = row.eta[i].real() - base.eta[i].real() + c.D[i] * w * w;
        worst = std::max(worst, std::abs(d));
      }
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("dispersion: B from the porosity gradient") {
  KineticsSRB p;
  const std::size_t n = 201;
  const auto prof = srb_profiles(n, 2.0);
  const auto eq = local_equilibrium_srb(p, 0.5);
  for (std::size_t z : {0u, 50u, 200u}) {
    const auto c = dispersion_coeffs(z, prof, p, eq);
    const double x = prof.grid.x(z);
    const double f = 0.3 + 0.2 * x * x, fx = 0.4 * x;
    for (int j = 0; j < 6; ++j) {
      // D = D0 exp(-sqrt(1 - f)); dD/dx = D fx / (2 sqrt(1 - f))
      const double D = p.D0[j] * std::exp(-std::sqrt(1.0 - f));
      CHECK(c.D[j] == doctest::Approx(D).epsilon(1e-14));
      const double B = D * fx / (2.0 * std::sqrt(1.0 - f)) / prof.L_star;
      CHECK(std::abs(c.B[j] - B) < 1e-4);
    }
  }
  CHECK_THROWS_AS(dispersion_coeffs(n, prof, p, eq), DomainError);
}

TEST_CASE("a6, a7 positive exactly when the Ksp product is below one") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  const auto prof = flat_profiles(5, 0.3, 0.2, 0.4, 1.0);
  for (int k = 0; k < 500; ++k) {
    KineticsSRB p;
    p.Ksp = u(rng);
    std::array<double, 6> eq{0.0, 0.0, p.KO / 2.0, 0.0, u(rng), u(rng)};
    const auto c = dispersion_coeffs(2, prof, p, eq);
    const bool below = 1.0 > p.Ksp * eq[sAn] * eq[sCat];
    CHECK((c.a[6] > 0.0 && c.a[7] > 0.0) == below);
  }
}

TEST_CASE("stability verdict") {
  KineticsSRB p;
  const auto prof = srb_profiles(51);
  const auto eq = local_equilibrium_srb(p, 0.5);
  std::vector<double> omegas;
  for (int k = 1; k <= 20; ++k) omegas.push_back(0.5 * k);

  SUBCASE("diffusive domination is stable") {
    KineticsSRB q = p;
    for (double& d : q.D0) d *= 50.0;
    const auto rep = dispersion_sweep(omegas, prof, q, eq, 2);
    CHECK(rep.rows.size() == omegas.size() * prof.grid.n());
    CHECK(rep.verdict.ksp_condition);
    CHECK(rep.verdict.stable);
  }
  SUBCASE("defaults") {
    const auto rep = dispersion_sweep(omegas, prof, p, eq, 1);
    CHECK(rep.verdict.stable);
    CHECK(rep.verdict.reason == "all conditions hold");
    // deterministic regardless of worker count
    const auto rep4 = dispersion_sweep(omegas, prof, p, eq, 4);
    for (std::size_t r = 0; r < rep.rows.size(); ++r)
      for (int i = 0; i < 6; ++i) CHECK(rep.rows[r].eta[i] == rep4.rows[r].eta[i]);
  }
  SUBCASE("Ksp gate overrides the eigenvalues") {
    const auto rows = dispersion_sweep(omegas, prof, p, eq, 1).rows;
    std::array<double, 6> eq_hi = eq;
    eq_hi[sCat] = 1.0 / (p.Ksp * eq[sAn]);  // product exactly one
    const auto v = stability_verdict(rows, p, eq_hi);
    CHECK_FALSE(v.ksp_condition);
    CHECK_FALSE(v.stable);
    CHECK(v.mode == 0);
    eq_hi[sCat] *= 3.0;
    CHECK_FALSE(stability_verdict(rows, p, eq_hi).stable);
  }
  SUBCASE("omega = 0 row carries the zero modes") {
    const auto rep = dispersion_sweep({0.0}, prof, p, eq, 1);
    CHECK_FALSE(rep.verdict.stable);
    CHECK(rep.verdict.ksp_condition);
    CHECK((rep.verdict.mode == 5 || rep.verdict.mode == 6));
  }
  CHECK_THROWS_AS(stability_verdict({}, p, eq), DomainError);
}

TEST_CASE("Ksp sweep flips the verdict once") {
  const auto prof = srb_profiles(21);
  std::vector<double> omegas;
  for (int k = 1; k <= 10; ++k) omegas.push_back(k);
  int flips = 0;
  bool prev = true;
  double flip_at = 0.0;
  for (int k = 0; k <= 40; ++k) {
    KineticsSRB p;
    p.Ksp = 0.5 + 0.025 * k;
    const auto eq = local_equilibrium_srb(p, 0.5);
    const bool st = dispersion_sweep(omegas, prof, p, eq).verdict.stable;
    if (k == 0) CHECK(st);
    if (k > 0 && st != prev) {
      ++flips;
      flip_at = p.Ksp;
    }
    prev = st;
  }
  CHECK(flips == 1);
  // on the saturation hyperbola the product is Ksp^2
  CHECK(flip_at == doctest::Approx(1.0));
}

TEST_CASE("linearized steady SRB: zero couplings keep boundary values") {
  KineticsSRB p;
  p.Ksp = 1.0;
  const auto eq = local_equilibrium_srb(p, 2.0);  // product one: a6 = a7 = 0
  const auto prof = flat_profiles(41, 0.0, 0.0, 0.3, 1.2);
  const std::array<double, 6> bnd{0.1, -0.2, 0.3, 0.05, 0.7, -0.4};
  const auto S = linearized_steady_solve_srb(prof, p, eq, bnd);
  for (int j = 0; j < 6; ++j)
    for (double v : S[j]) CHECK(v == doctest::Approx(bnd[j]).epsilon(1e-12));
}

TEST_CASE("linearized steady SRB: S_E follows the cosh profile") {
  KineticsSRB p;
  const double L = 1.3, fPo = 0.3, XE = 0.4;
  double prev = 0.0;
  for (std::size_t n : {101u, 201u, 401u}) {
    const auto prof = flat_profiles(n, XE, 0.0, fPo, L);
    const auto eq = local_equilibrium_srb(p, 0.5);
    const auto c = dispersion_coeffs(0, prof, p, eq);
    const std::array<double, 6> bnd{0.2, 0.0, 0.0, 0.0, 0.0, 0.0};
    const auto S = linearized_steady_solve_srb(prof, p, eq, bnd);
    const double kk = L * std::sqrt(c.a[1] / c.D[sE]);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      err = std::max(err, std::abs(S[sE][i] - 0.2 * std::cosh(kk * prof.grid.x(i)) /
                                                  std::cosh(kk)));
    CHECK(err < 1e-3);
    if (prev > 0.0) CHECK(std::log2(prev / err) > 1.8);
    prev = err;
  }
}

TEST_CASE("linearized steady SRB: full chain satisfies its equations") {
  KineticsSRB p;
  const auto eq = local_equilibrium_srb(p, 0.5);
  const std::array<double, 6> bnd{0.1, 0.05, -0.02, 0.03, 0.01, -0.01};
  std::array<std::vector<double>, 6> coarse;
  double prev_diff = 0.0;
  for (std::size_t n : {101u, 201u, 401u}) {
    const auto prof = srb_profiles(n);
    const auto S = linearized_steady_solve_srb(prof, p, eq, bnd);
    const double h = prof.grid.h(), L = prof.L_star;
    // independent defect of -D s''/L^2 - B s'/L + sigma s = f at interior nodes
    double defect = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const auto c = dispersion_coeffs(i, prof, p, eq);
      auto op = [&](int j) {
        const auto& s = S[j];
        return -c.D[j] / (L * L) * (s[i + 1] - 2.0 * s[i] + s[i - 1]) / (h * h) -
               c.B[j] / L * (s[i + 1] - s[i - 1]) / (2.0 * h);
      };
      const auto& a = c.a;
      defect = std::max(defect, std::abs(op(sE) + a[1] * S[sE][i]));
      defect = std::max(defect, std::abs(op(sA) + a[2] * S[sA][i] + a[1] * S[sE][i]));
      defect = std::max(defect, std::abs(op(sO) + a[3] * S[sE][i] + a[4] * S[sA][i]));
      defect = std::max(defect, std::abs(op(sC) + a[5] * S[sA][i]));
      defect = std::max(defect, std::abs(op(sAn) + a[6] * S[sAn][i] + a[7] * S[sCat][i] -
                                         a[8] * S[sA][i]));
      defect = std::max(defect, std::abs(op(sCat) + a[6] * S[sAn][i] + a[7] * S[sCat][i]));
    }
    CHECK(defect < 1e-8);
    for (int j = 0; j < 6; ++j) CHECK(std::abs(S[j].back() - bnd[j]) < 1e-12);
    if (n > 101) {
      // refinement: compare on the coarse nodes
      double diff = 0.0;
      const std::size_t stride = (n - 1) / (coarse[0].size() - 1);
      for (int j = 0; j < 6; ++j)
        for (std::size_t i = 0; i < coarse[j].size(); ++i)
          diff = std::max(diff, std::abs(S[j][i * stride] - coarse[j][i]));
      if (prev_diff > 0.0) CHECK(prev_diff / diff > 3.0);
      prev_diff = diff;
    }
    coarse = S;
  }
}

TEST_CASE("dispersion at omega = 0 shares the zero modes of the local Jacobian") {
  KineticsSRB p;
  const double XE = 0.3, XA = 0.2;
  const auto prof = flat_profiles(11, XE, XA, 0.4, 1.0);
  const auto eq = local_equilibrium_srb(p, 0.8);
  const auto row = dispersion_matrix_srb(0.0, 5, prof, p, eq);
  const auto jac = local_jacobian_srb(p, XE, XA, eq);
  auto zeros = [](const Spectrum6& s) {
    int z = 0;
    for (const auto& v : s)
      if (std::abs(v) < 1e-12) ++z;
    return z;
  };
  CHECK(zeros(row.eta) == 3);
  CHECK(zeros(jac.xi) == 3);
  // the nonzero head modes carry the same sign
  CHECK(row.eta[0].real() < 0.0);
  CHECK(jac.xi[0].real() < 0.0);
  CHECK(row.eta[1].real() < 0.0);
  CHECK(jac.xi[1].real() < 0.0);
  const auto v = stability_verdict({row}, p, eq);
  CHECK_FALSE(v.stable);
}
