#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "pvi/dynamics.hpp"
#include "pvi/hyperfn.hpp"
#include "pvi/integrator.hpp"
#include "pvi/linear.hpp"
#include "pvi/params.hpp"

namespace pvi::io {

using json = nlohmann::json;

/// Complex numbers are a bare number (real) or [re, im].
json complex_to_json(cplx z);
cplx complex_from_json(const json& j);
json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);
json matrix_to_json(const Matrix& m);

/// {"n": N, "r": R (0 or absent for generic), "alpha": [...], "eta": z}
json params_to_json(const ParameterSet& p);
ParameterSet params_from_json(const json& j);

/// {"x": [...], "y": [...]} or {"q": [...], "p": [...]}
json state_to_json(const SymmetricState& s);
json state_to_json(const CanonicalState& s);
SymmetricState symmetric_state_from_json(const json& j);
CanonicalState canonical_state_from_json(const json& j);

/// {"upper": [...], "lower": [...], "factorial": bool}
json hgspec_to_json(const HGSpec& s);
HGSpec hgspec_from_json(const json& j);

/// {"kind", "n", "params", "A0", "A1", "gauge_index"}
json system_to_json(const LinearSystem& sys);
/// {"k", "exponent", "frame", "source", "coefficients": [[...]...], "components": [...]}
json solution_to_json(const SeriesSolution& s);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Header "t,re_<name>,im_<name>,..." then one row per sample, every value
/// printed with max_digits10 so that reading it back is exact.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr, const std::vector<std::string>& names);
Trajectory read_trajectory_csv(std::istream& is, std::vector<std::string>* names = nullptr);

/// Coordinate labels: x0..xn,y0..yn or q1..qn,p1..pn.
std::vector<std::string> symmetric_names(int n);
std::vector<std::string> canonical_names(int n);

}  // namespace pvi::io
