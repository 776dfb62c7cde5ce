#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pvi/types.hpp"

namespace pvi {

/// Parameters (n; alpha_0..alpha_{2n+1}; eta) of the coupled hierarchy.
///
/// A generic set satisfies sum(alpha) = 1. A degenerate set of level r
/// (1 <= r <= n+1) has alpha_{2i} = 0 for i < r and
/// sum_j alpha_{2j+1} + sum_{j>=r} alpha_{2j} = 1, which is the same total.
/// Indices are read modulo 2n+2.
class ParameterSet {
 public:
  static constexpr double kConstraintTol = 1e-12;

  static ParameterSet generic(int n, std::vector<cplx> alpha, cplx eta);
  static ParameterSet degenerate(int n, int r, std::vector<cplx> alpha, cplx eta);

  int n() const { return n_; }
  /// 0 for generic sets, otherwise the degeneration level r.
  int level() const { return r_; }
  bool is_generic() const { return r_ == 0; }
  int period() const { return 2 * n_ + 2; }

  cplx alpha(long k) const { return alpha_[wrap(k)]; }
  std::span<const cplx> alphas() const { return alpha_; }
  cplx eta() const { return eta_; }

  /// Sum of the odd-indexed alphas (residue data at t = 1).
  cplx odd_sum() const;
  cplx total() const;

  /// Copy with different values but the same rank and kind (no validation).
  ParameterSet with_values(std::vector<cplx> alpha, cplx eta) const;
  /// Copy re-labelled with another kind after checking its invariants.
  ParameterSet as_level(int r) const;

  std::size_t wrap(long k) const {
    const long m = period();
    return static_cast<std::size_t>(((k % m) + m) % m);
  }

 private:
  ParameterSet(int n, int r, std::vector<cplx> alpha, cplx eta);
  void validate() const;

  int n_ = 1;
  int r_ = 0;
  std::vector<cplx> alpha_;
  cplx eta_{};

  friend ParameterSet degenerate_replace(const ParameterSet&, double);
};

/// alpha_k^l = alpha_k + ... + alpha_{k+l} (indices mod 2n+2); 0 when l < 0.
/// Lengths beyond one period keep summing around the circle.
cplx partial_sum(const ParameterSet& p, long k, long l);

/// Same as partial_sum but with the length taken modulo 2n+2 first, i.e. the
/// arc from k that ends at k+l without completing extra turns.
cplx reduced_partial_sum(const ParameterSet& p, long k, long l);

/// Distance of z to the nearest integer (complex distance).
double distance_to_integers(cplx z);

/// Smallest distance to Z over the non-resonance quantities of a generic set:
/// alpha_{2i}^{2j-1}, alpha_{2i-1}^{2j-1} (i = 1..n, j = 1..n-i+1) and odd_sum().
double resonance_margin(const ParameterSet& p);

/// Same idea for degenerate sets: every even- or odd-started arc of even
/// length below one period (those are the b-parameters and exponent gaps).
double degenerate_resonance_margin(const ParameterSet& p);

/// Generator seeded from (seed, stream); distinct streams are independent.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

/// Deterministic rejection sampler of real generic parameter sets whose
/// resonance_margin is at least `margin`.
ParameterSet sample_generic(int n, std::uint64_t seed, double margin = 0.05);

/// Smallest distance to Z over every arc alpha_k^l shorter than one period.
/// Small values mean some series nearly terminates.
double arc_margin(const ParameterSet& p);

/// Generic set with every entry at least `margin` (needs margin < 1/(2n+2)),
/// so arc_margin >= margin: no series is close to terminating and float
/// recurrences keep their digits.
ParameterSet sample_separated(int n, std::uint64_t seed, double margin = 0.05);

/// Degenerate counterpart of sample_generic.
ParameterSet sample_degenerate(int n, int r, std::uint64_t seed, double margin = 0.05);

/// Confluence replacement alpha_{2r-2} -> -1/eps, alpha_{2r-1} -> alpha_{2r-1} + 1/eps,
/// where r = p.level() + 1. The result is labelled with p's level. The total
/// is preserved whenever p has alpha_{2r-2} = 0.
ParameterSet degenerate_replace(const ParameterSet& p, double eps);

}  // namespace pvi
