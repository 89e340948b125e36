#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "kneser/circle_field.hpp"
#include "kneser/correspondence.hpp"
#include "kneser/curve.hpp"

namespace kneser {

// K(s, t) = Re[conj(g(t) - g(s)) i g'(s)]
double kernel_K(const JordanCurve& curve, double s, double t);
double kernel_K(cplx g_s, cplx gprime_s, cplx g_t);

// K_F(t, tau) = f'(tau) K(f(t), f(tau)).
double kernel_KF(const BoundaryMap& map, double t, double tau);
// The same quantity as Re[conj(F(t) - F(tau)) i F'(tau)].
double kernel_KF_direct(const BoundaryMap& map, double t, double tau);

struct KernelBound {
  double abs_kernel = 0.0;
  double bound = 0.0;  // integral of omega over [0, min(|s - t|, l - |s - t|)]
};

// Throws BoundViolated if |K| exceeds the bound by more than 1e-9.
KernelBound kernel_bound_check(const JordanCurve& curve, double s, double t);

struct IdentityDefect {
  double lhs = 0.0;  // int_0^y x^-2 int_0^x omega(a t) dt dx
  double rhs = 0.0;  // int_0^y omega(a x)/x - omega(a x)/y dx
  double defect = 0.0;
};

// Both sides of the integration-by-parts identity for a modulus omega,
// by nested tanh-sinh quadrature. Throws NonDini when int_0 omega(ax)/x dx
// does not settle as the lower cut-off shrinks.
IdentityDefect integration_identity_check(const std::function<double(double)>& omega, double a, double y);

enum class TForm { Singular, Cotangent };

std::string to_string(TForm form);

// T[f](tau) = int_0^{2pi} K(f(t), f(tau)) / (2 sin^2((t - tau)/2)) dt/2pi
double t_operator_singular(const BoundaryMap& map, double tau, std::size_t n);
// T[f](tau) = int_{-pi}^{pi} f'(t + tau) sin[beta(f(t + tau)) - beta(f(tau))] cot(t/2) dt/2pi
double t_operator_cotangent(const BoundaryMap& map, double tau, std::size_t n);

// J_w(e^{i tau}) = f'(tau) T[f](tau), T by the cotangent form.
double boundary_jacobian(const BoundaryMap& map, double tau, std::size_t n);

struct TOperatorResult {
  CircleField values;
  TForm form = TForm::Cotangent;
  std::size_t quadrature_n = 0;
  double min = 0.0;
  double argmin = 0.0;
  double max = 0.0;
  // max |singular - cotangent| over the spot-check nodes
  double estimated_error = 0.0;
  std::vector<std::size_t> spot_nodes;
};

// T at the n nodes 2pi j / n via the cotangent form, with 16 spot checks
// against the singular form (skipped when spot_checks is false).
TOperatorResult t_field(const BoundaryMap& map, std::size_t n, bool spot_checks = true);

struct MollificationStep {
  int n = 0;
  double discrepancy = 0.0;  // max over nodes |T[psi_n] - T[f]|
};

std::vector<MollificationStep> t_convergence_under_mollification(const BoundaryMap& map,
                                                                 const std::vector<int>& schedule,
                                                                 std::size_t nodes);

}  // namespace kneser
