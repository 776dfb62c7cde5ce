#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pvi/params.hpp"
#include "pvi/types.hpp"

namespace pvi {

/// (q_1..q_n, p_1..p_n) of the coupled system.
struct CanonicalState {
  Vector q;
  Vector p;

  Vector packed() const;
  static CanonicalState unpack(const Vector& z);
};

/// (x_0..x_n, y_0..y_n) of the symmetric form; physical states lie on
/// sum x_i y_i + eta = 0.
struct SymmetricState {
  Vector x;
  Vector y;

  Vector packed() const;
  static SymmetricState unpack(const Vector& z);
  cplx constraint(cplx eta) const { return (x.array() * y.array()).sum() + eta; }
};

/// Partial derivatives of a Hamiltonian with respect to positions and momenta.
struct Gradient {
  Vector d_position;
  Vector d_momentum;
};

// Coupled system: t(t-1) dq/dt = dH/dp, t(t-1) dp/dt = -dH/dq.
cplx cp6_hamiltonian(const ParameterSet& p, const CanonicalState& s, cplx t);
Gradient cp6_gradient(const ParameterSet& p, const CanonicalState& s, cplx t);
Vector coupled_p6_field(const ParameterSet& p, const CanonicalState& s, cplx t);

// Symmetric form: dx/dt = dH/dy, dy/dt = -dH/dx with the 1/t and 1/(1-t) blocks.
cplx symmetric_hamiltonian(const ParameterSet& p, const SymmetricState& s, cplx t);
Gradient symmetric_gradient(const ParameterSet& p, const SymmetricState& s, cplx t);
Vector symmetric_field(const ParameterSet& p, const SymmetricState& s, cplx t);

// Degenerate hierarchy of level r = p.level(); returns H = (tH)/t.
cplx degenerate_hamiltonian(const ParameterSet& p, const SymmetricState& s, cplx t);
Gradient degenerate_gradient(const ParameterSet& p, const SymmetricState& s, cplx t);
Vector degenerate_field(const ParameterSet& p, const SymmetricState& s, cplx t);

/// Level r-1 field after the confluence substitution (t -> eps t, parameter
/// replacement, x_i -> x_i/eps and y_i -> eps y_i for i <= r-2), expressed
/// in the new variables. Tends to degenerate_field(target, ...) as eps -> 0.
Vector confluence_scaled_field(const ParameterSet& target, const SymmetricState& s, cplx t,
                               double eps);

struct ChartImage {
  CanonicalState state;
  cplx eta;
};

/// q_i = t x_{i-1}/x_n, p_i = x_n y_{i-1}/t and eta = -sum x_j y_j.
ChartImage symmetric_to_canonical(const SymmetricState& s, cplx t);
/// Inverse chart; the free scale x_n is supplied by the caller.
SymmetricState canonical_to_symmetric(const CanonicalState& c, cplx eta, cplx x_n, cplx t);

/// Right side of t(1-t) d/dt log x_n in canonical variables.
cplx xn_log_derivative(const ParameterSet& p, const CanonicalState& c, cplx eta, cplx t);

/// The five canonical systems of ranks one and two.
enum class CanonicalCase { P5, P3, N2R1, N2R2, N2R3 };

struct CanonicalCaseInfo {
  const char* name;
  int n;
  int r;
  bool flips_time;
};
CanonicalCaseInfo case_info(CanonicalCase which);
CanonicalCase parse_canonical_case(const std::string& name);

/// H = (tH)/t of the selected system in its own time variable.
cplx canonical_case_hamiltonian(CanonicalCase which, const ParameterSet& p, const CanonicalState& s, cplx t);
Gradient canonical_case_gradient(CanonicalCase which, const ParameterSet& p, const CanonicalState& s, cplx t);
Vector canonical_case_field(CanonicalCase which, const ParameterSet& p, const CanonicalState& s, cplx t);

/// Canonical coordinates of a degenerate-system state.
CanonicalState canonical_case_coordinates(CanonicalCase which, const ParameterSet& p, const SymmetricState& s);

/// d/dt of canonical_case_coordinates along degenerate_field, in the canonical
/// time t (the degenerate system is evaluated at -t when the case flips time).
Vector canonical_case_pushforward(CanonicalCase which, const ParameterSet& p, const SymmetricState& s, cplx t);

// Rank one, p = eta = 0: t(t-1) dq/dt = alpha_1 q^2 + ((alpha_3+alpha_0)t - (alpha_0+alpha_1)) q - alpha_3 t.
cplx riccati_rhs(const ParameterSet& p, cplx q, cplx t);

/// |t(t-1) q'(t) - riccati_rhs| relative to the largest term, q' by a
/// five-point central difference with step h.
double riccati_residual(const ParameterSet& p, const std::function<cplx(double)>& q, double t,
                        double h = 5e-5);

/// q(t) = t(1-t)/alpha_1 * d/dt log((t-1)^alpha_3 x(t)) with x the Gauss series
/// 2F1(alpha_1+alpha_2+alpha_3, alpha_3; alpha_2+alpha_3; t).
cplx riccati_from_gauss(const ParameterSet& p, double t);

struct RiccatiSample {
  double t;
  cplx q;
  double residual;
};
std::vector<RiccatiSample> riccati_and_gauss_n1(const ParameterSet& p, const std::vector<double>& ts);

/// Relative error of an analytic gradient against a five-point central
/// difference of H along each coordinate.
double gradient_relative_error(const std::function<cplx(const Vector&)>& hamiltonian,
                               const Vector& point, const Vector& analytic, double h = 1e-3);

}  // namespace pvi
