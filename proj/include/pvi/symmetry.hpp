#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pvi/dynamics.hpp"
#include "pvi/integrator.hpp"
#include "pvi/params.hpp"

namespace pvi {

/// Cyclic Cartan matrix of the affine root system with 2n+2 nodes.
struct CartanData {
  int n = 1;
  Eigen::MatrixXi a;

  static CartanData affine(int n);
  int size() const { return 2 * n + 2; }
};

/// A function on the symmetric phase space through its partial derivatives
/// at the point of interest. Coordinates have constant gradients; brackets of
/// polynomial expressions need their gradients at the point.
struct PhaseFunction {
  Vector dx;
  Vector dy;
};

PhaseFunction coordinate_x(int n, int i);
PhaseFunction coordinate_y(int n, int i);
PhaseFunction linear_combination(cplx a, const PhaseFunction& f, cplx b, const PhaseFunction& g);

/// {f, g} with {x_i, y_j} = -delta_ij.
cplx poisson_bracket(const PhaseFunction& f, const PhaseFunction& g);

/// A generator denominator vanished (or an intermediate value blew up).
class SingularTransform : public DomainError {
 public:
  SingularTransform(int generator, std::string denominator, long position = -1);
  int generator() const { return generator_; }
  /// Index of the failing letter inside a word, -1 outside words.
  long position() const { return position_; }
  const std::string& denominator() const { return denominator_; }

 private:
  int generator_;
  std::string denominator_;
  long position_;
};

struct WeylImage {
  SymmetricState state;
  ParameterSet params;
};

/// Denominator of generator i at the point (x_n - t x_0, y_i, x_{i-1} - x_i or y_n).
cplx generator_denominator(int i, const SymmetricState& s, const ParameterSet& p, double t);

/// Birational action of r_i on (x, y) and on (alpha, eta).
WeylImage apply_generator(int i, const SymmetricState& s, const ParameterSet& p, double t);

/// Left-to-right composition: word[0] is applied first.
WeylImage apply_word(const std::vector<int>& word, const SymmetricState& s, const ParameterSet& p, double t);

/// Parses "0,3,1".
std::vector<int> parse_word(const std::string& text);

struct RelationCheck {
  std::vector<int> word;
  double state_error = 0;
  double param_error = 0;
  bool pass = false;
};

struct RelationReport {
  int n = 1;
  int trials = 0;
  int checked = 0;
  int failed = 0;
  double max_state_error = 0;
  double max_param_error = 0;
  /// Largest |sum alpha' - sum alpha| over all single generators.
  double max_sum_drift = 0;
  /// Largest |sum x'y' + eta'| after single generators applied to constrained points.
  double max_constraint_error = 0;
  std::vector<RelationCheck> failures;
};

/// The words r_i r_i and (r_i r_j)^(2 - a_ij) for i < j.
std::vector<std::vector<int>> relation_words(int n);

/// Checks every relation word at `trials` random regular points (denominators
/// of every intermediate step at least `margin` relative to the coordinates they are built from).
RelationReport verify_relations(int n, int trials, std::uint64_t seed, double tol = 1e-12, double margin = 0.05);

struct MappingReport {
  int generator = 0;
  int samples = 0;
  double max_residual = 0;
};

/// Integrates the symmetric system from `start` over [t0, t1], applies r_i at
/// sample points and compares a finite-difference time derivative of the
/// image with the field of the transformed system.
MappingReport verify_solution_mapping(int generator, const ParameterSet& p, const SymmetricState& start, double t0,
                                      double t1, int samples = 8, const IntegratorOptions& options = {});

/// Random point on the constraint manifold with entries of moderate size.
/// A nonzero `imag` adds imaginary parts of that relative size.
SymmetricState sample_constrained_state(int n, cplx eta, std::uint64_t seed, double y_scale = 1.0,
                                        double imag = 0.0);

}  // namespace pvi
