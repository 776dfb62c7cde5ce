#pragma once

#include <functional>
#include <vector>

#include "pvi/hyperfn.hpp"
#include "pvi/params.hpp"
#include "pvi/types.hpp"

namespace pvi {

enum class SystemKind {
  Fuchsian,   ///< dx/dt = (A0/t + A1/(1-t)) x
  Confluent,  ///< dx/dt = (A0/t + A1) x
};

struct LinearSystem {
  int n = 1;
  Matrix A0;
  Matrix A1;
  SystemKind kind = SystemKind::Fuchsian;
  ParameterSet params;
  /// Index k of the gauge frame, or -1 for the untransformed system.
  int gauge_index = -1;

  Matrix coefficient(cplx t) const;
  Vector rhs(cplx t, const Vector& x) const { return coefficient(t) * x; }
};

/// The x-system obtained from the symmetric Hamiltonian at y = 0, eta = 0.
LinearSystem build_fuchsian(const ParameterSet& p);
/// The y-system at x_0..x_{n-1} = 0, x_n y_n + eta = 0, eta = alpha_{2n+1}.
LinearSystem build_dual(const ParameterSet& p);
/// The confluent x-system of a degenerate parameter set of level r.
LinearSystem build_confluent(const ParameterSet& p);

/// Local exponent -alpha_{2k+2}^{2n-2k-1} of the k-th solution at t = 0.
cplx fundamental_exponent(const ParameterSet& p, int k);

/// G_k(t) = t^{alpha_{2k+2}^{2n-2k-1}} (sum t^{-1} E_{i,i+k+1} + sum E_{i,i-n+k}),
/// so that x^k = G_k(t) x.
Matrix gauge_matrix(const ParameterSet& p, int k, cplx t);

/// The Fuchsian system rewritten in the k-th gauge frame.
LinearSystem gauge_transform(const LinearSystem& sys, int k);

/// The pre-confluence system of level r-1 after t -> eps t, the parameter
/// replacement and x_i -> x_i / eps (i <= r-2), written as a matrix in the
/// new variables. Tends to the confluent coefficient matrix of `target` as eps -> 0.
Matrix confluence_scaled_matrix(const ParameterSet& target, double eps, cplx t);

struct ResidueSpectra {
  std::vector<cplx> at_zero;
  std::vector<cplx> at_one;       // empty for confluent systems
  std::vector<cplx> at_infinity;  // empty for confluent systems
};

/// Spectra read off the structure: diag(A0) at 0, the rank-one -A1 at 1 and the
/// lower-triangular A1 - A0 at infinity. Throws InvalidArgument when the
/// structure does not hold.
ResidueSpectra structural_spectra(const LinearSystem& sys);

/// The eigenvalue list written as partial sums of the parameters.
ResidueSpectra listed_spectra(const ParameterSet& p);

enum class SeriesSource { Recurrence, ClosedForm, Hypergeometric };
enum class SeriesFrame { Gauge, Original };

/// One component x_i = t^{exponent + shift} * prefactor * F(t).
struct ComponentSeries {
  int l = 0;
  int shift = 0;
  cplx prefactor = 1;
  HGSpec spec;
};

struct SeriesSolution {
  int k = 0;
  cplx exponent = 0;
  std::vector<Vector> coeffs;
  SeriesSource source = SeriesSource::ClosedForm;
  SeriesFrame frame = SeriesFrame::Gauge;
  /// Row-ordered hypergeometric components; filled for Hypergeometric only.
  std::vector<ComponentSeries> components;

  /// Gauge frame: sum coeffs[i] t^i. Original frame: t^exponent times that, or
  /// the component series summed to rtol when available.
  Vector evaluate(cplx t, double rtol = 1e-15) const;
  /// Frobenius data (exponent, coefficients) of one component in the original frame.
  std::pair<cplx, std::vector<cplx>> component_frobenius(int i) const;
};

/// floor-style residue: i - m(n+1) with m(n+1) <= i < (m+1)(n+1).
int mod_floor(long i, long modulus);

SeriesSolution solve_recurrence(const LinearSystem& gauge_sys, int depth);
SeriesSolution closed_form_coeffs(const ParameterSet& p, int k, int depth);
SeriesSolution fundamental_solution(const ParameterSet& p, int k, int depth = 40);
SeriesSolution confluent_fundamental_solution(const ParameterSet& p, int k, int depth = 40);

/// Scalar equation satisfied by component i of any solution: the generalized
/// equation for generic sets, the confluent one for degenerate sets.
HGSpec component_ode_params(const ParameterSet& p, int i);

/// Five-point central-difference residual |x'(t) - M(t) x(t)| / |x(t)| with step h.
double system_residual(const LinearSystem& sys, const std::function<Vector(cplx)>& x, double t,
                       double h = 1e-6);

}  // namespace pvi
