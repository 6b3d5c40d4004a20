#include "biofilm/kinetics.hpp"

#include <cmath>
#include <string>

#include "biofilm/error.hpp"

namespace biofilm {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be > 0");
}
void require_nonneg(double v, const char* name) {
  if (!(v >= 0.0)) throw ConfigError(std::string(name) + " must be >= 0");
}
void require_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw ConfigError(std::string(name) + " must lie in (0,1)");
}

void check_conc(const std::array<double, 3>& S) {
  for (double s : S)
    if (!(s >= 0.0)) throw DomainError("negative substrate concentration");
}

}  // namespace

double monod(double s, double K) {
  if (!(K > 0.0)) throw DomainError("monod: half-saturation must be positive");
  if (!(s >= 0.0)) throw DomainError("monod: negative concentration");
  return s / (K + s);
}

void KineticsWG::validate() const {
  require_positive(mu1, "mu1");
  require_positive(mu2, "mu2");
  require_positive(K11, "K11");
  require_positive(K13, "K13");
  require_positive(K22, "K22");
  require_positive(K23, "K23");
  require_nonneg(b1, "b1");
  require_nonneg(b2, "b2");
  // k = 0 is the only case with a nontrivial steady state
  require_nonneg(k1, "k1");
  require_nonneg(k2, "k2");
  require_positive(D1, "D1");
  require_positive(D2, "D2");
  require_positive(D3, "D3");
  require_positive(Y1, "Y1");
  require_positive(Y2, "Y2");
  require_positive(alpha1, "alpha1");
  require_positive(alpha2, "alpha2");
}

RateCoeffs rate_coeffs_wg(double S1, double S2, double S3, const KineticsWG& p) {
  check_conc({S1, S2, S3});
  const double m13 = monod(S3, p.K13);
  const double m23 = monod(S3, p.K23);
  const double A = p.mu1 * monod(S1, p.K11) * m13 - p.b1 * m13;
  const double B = p.mu2 * monod(S2, p.K22) * m23 - p.b2 * m23;
  return {A, A - p.k1, B, B - p.k2};
}

std::array<double, 3> biomass_rhs_wg(const std::array<double, 3>& X,
                                     const std::array<double, 3>& S, const KineticsWG& p) {
  for (double x : X)
    if (!(x >= 0.0)) throw DomainError("negative biomass fraction");
  const auto r = rate_coeffs_wg(S[0], S[1], S[2], p);
  const double X1 = X[0], X2 = X[1], X3 = X[2];
  return {
      -r.A * X1 * X1 + r.A1 * X1 - r.B * X1 * X2,
      -r.B * X2 * X2 + r.A2 * X2 - r.A * X1 * X2,
      -r.A * X1 * X3 - r.B * X2 * X3 + p.k1 * X1 + p.k2 * X2,
  };
}

double growth_rate_wg(const std::array<double, 3>& X, const std::array<double, 3>& S,
                      const KineticsWG& p) {
  const auto r = rate_coeffs_wg(S[0], S[1], S[2], p);
  return r.A * X[0] + r.B * X[1];
}

std::array<double, 3> substrate_rhs_wg(double X1, double X2, const std::array<double, 3>& S,
                                       const KineticsWG& p) {
  check_conc(S);
  if (!(X1 >= 0.0 && X2 >= 0.0)) throw DomainError("negative biomass fraction");
  const double m11 = monod(S[0], p.K11);
  const double m13 = monod(S[2], p.K13);
  const double m22 = monod(S[1], p.K22);
  const double m23 = monod(S[2], p.K23);
  const double H1 = p.beta1() * m11 * m13 * X1;
  const double H2 = p.beta2() * m22 * m23 * X2;
  const double H3 = p.beta3() * m11 * m13 * X1 - p.beta4() * m13 * X1 -
                    p.beta5() * m22 * m23 * X2 - p.beta6() * m23 * X2;
  return {H1, H2, H3};
}

RescaledWG rescaled_wg(const KineticsWG& p) {
  const auto b = p.betas();
  return {{b[0] / p.K11, b[1] / p.K22, b[2] / p.K13, b[3] / p.K13, b[4] / p.K13, b[5] / p.K13},
          p.K23 / p.K13};
}

void KineticsSRB::validate() const {
  require_positive(muE, "muE");
  require_positive(muA, "muA");
  require_positive(KE, "KE");
  require_positive(KA, "KA");
  require_positive(KO, "KO");
  require_positive(KI, "KI");
  require_positive(KPr, "KPr");
  require_positive(kE, "kE");
  require_positive(kA, "kA");
  require_unit(YE, "YE");
  require_unit(YA, "YA");
  require_unit(YAC, "YAC");
  require_positive(k, "k");
  require_positive(Ksp, "Ksp");
  require_positive(alpha, "alpha");
  for (double d : D0) require_positive(d, "D0");
  require_unit(XPo_bar, "XPo_bar");
  for (double r : rho) require_positive(r, "rho");
}

double saturation_index(double S_An, double S_Cat, double Ksp) {
  if (!(Ksp > 0.0)) throw DomainError("saturation_index: Ksp must be positive");
  if (!(S_An >= 0.0 && S_Cat >= 0.0)) throw DomainError("saturation_index: negative concentration");
  return S_An * S_Cat / Ksp;
}

double diffusion_coeff(double f_Po, double D0) {
  if (!(f_Po >= 0.0 && f_Po <= 1.0)) throw DomainError("diffusion_coeff: porosity outside [0,1]");
  return D0 * std::exp(-std::sqrt(1.0 - f_Po));
}

std::array<double, 5> biomass_rhs_srb(std::span<const double, 5> X, std::span<const double, 6> S,
                                      const KineticsSRB& p) {
  for (double x : X)
    if (!(x >= 0.0)) throw DomainError("negative biomass");
  for (double s : S)
    if (!(s >= 0.0)) throw DomainError("negative substrate concentration");
  if (!(p.XPo_bar < 1.0)) throw DomainError("XPo_bar = 1 makes the porosity source singular");
  const double sat = saturation_index(S[sAn], S[sCat], p.Ksp);
  const double mE = monod(S[sE], p.KE);
  const double mA = monod(S[sA], p.KA);
  const double inhib = p.KI / (p.KI + S[sO]);
  const double mO = monod(S[sO], p.KO);
  std::array<double, 5> F{};
  F[kE] = p.muE * mE * X[kE] - p.kE * X[kE];
  F[kA] = p.muA * mA * inhib * (mO + 1.0) * X[kA] - p.kA * X[kA];
  F[kI] = p.kE * X[kE] + p.kA * X[kA];
  F[kPr] = p.k * (sat - 1.0) * (sat - 1.0);
  F[kPo] = p.XPo_bar / (1.0 - p.XPo_bar) * (X[kE] + X[kA]) - X[kPr];
  return F;
}

std::array<double, 6> substrate_rhs_srb(std::span<const double, 5> X, std::span<const double, 6> S,
                                        const KineticsSRB& p) {
  for (double x : X)
    if (!(x >= 0.0)) throw DomainError("negative biomass");
  for (double s : S)
    if (!(s >= 0.0)) throw DomainError("negative substrate concentration");
  const double sat = saturation_index(S[sAn], S[sCat], p.Ksp);
  const double prec = p.k * (sat - 1.0) * (sat - 1.0);
  const double mE = monod(S[sE], p.KE);
  const double mA = monod(S[sA], p.KA);
  const double mO = monod(S[sO], p.KO);
  const double inhib = p.KI / (p.KI + S[sO]);
  const double XE = X[kE], XA = X[kA];
  std::array<double, 6> R{};
  R[sE] = -(1.0 / p.YE) * p.muE * mE * XE;
  R[sA] = -(2.0 * (1.0 - p.YE) / (3.0 * p.YE)) * p.muE * mE * XE -
          p.muA * mA * inhib * (mO + 1.0) * XA;
  R[sO] = -(p.muE * (1.0 - p.YE) / (6.0 * p.YE)) * mE * XE -
          (p.muA * (1.0 - p.YA) / (2.0 * p.YA)) * mA * mO * inhib * XA;
  R[sC] = p.muA * (1.0 - p.YAC) / p.YAC * mA * inhib * XA;
  R[sAn] = -prec + p.alpha * S[sA] / (p.KPr + S[sA]) * XA;
  R[sCat] = -prec;
  return R;
}

}  // namespace biofilm
