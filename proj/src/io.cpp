#include "pvi/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace pvi::io {

json complex_to_json(cplx z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InvalidArgument("expected a number or [re, im], got " + j.dump());
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw InvalidArgument("expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row(i).transpose()));
  return out;
}

json params_to_json(const ParameterSet& p) {
  json alpha = json::array();
  for (cplx a : p.alphas()) alpha.push_back(complex_to_json(a));
  return {{"n", p.n()}, {"r", p.level()}, {"alpha", alpha}, {"eta", complex_to_json(p.eta())}};
}

ParameterSet params_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    const int r = j.value("r", 0);
    std::vector<cplx> alpha;
    for (const auto& a : j.at("alpha")) alpha.push_back(complex_from_json(a));
    const cplx eta = complex_from_json(j.at("eta"));
    return r == 0 ? ParameterSet::generic(n, std::move(alpha), eta)
                  : ParameterSet::degenerate(n, r, std::move(alpha), eta);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed parameter file: ") + e.what());
  }
}

json state_to_json(const SymmetricState& s) { return {{"x", vector_to_json(s.x)}, {"y", vector_to_json(s.y)}}; }
json state_to_json(const CanonicalState& s) { return {{"q", vector_to_json(s.q)}, {"p", vector_to_json(s.p)}}; }

SymmetricState symmetric_state_from_json(const json& j) {
  if (!j.contains("x") || !j.contains("y")) throw InvalidArgument("state file needs \"x\" and \"y\"");
  SymmetricState s{vector_from_json(j["x"]), vector_from_json(j["y"])};
  if (s.x.size() != s.y.size() || s.x.size() < 2) throw InvalidArgument("x and y must have equal length >= 2");
  return s;
}

CanonicalState canonical_state_from_json(const json& j) {
  if (!j.contains("q") || !j.contains("p")) throw InvalidArgument("state file needs \"q\" and \"p\"");
  CanonicalState s{vector_from_json(j["q"]), vector_from_json(j["p"])};
  if (s.q.size() != s.p.size() || s.q.size() < 1) throw InvalidArgument("q and p must have equal length >= 1");
  return s;
}

json hgspec_to_json(const HGSpec& s) {
  json up = json::array(), lo = json::array();
  for (cplx a : s.upper) up.push_back(complex_to_json(a));
  for (cplx b : s.lower) lo.push_back(complex_to_json(b));
  return {{"upper", up}, {"lower", lo}, {"factorial", s.includes_factorial}};
}

HGSpec hgspec_from_json(const json& j) {
  HGSpec s;
  for (const auto& a : j.at("upper")) s.upper.push_back(complex_from_json(a));
  for (const auto& b : j.at("lower")) s.lower.push_back(complex_from_json(b));
  s.includes_factorial = j.value("factorial", true);
  return s;
}

json system_to_json(const LinearSystem& sys) {
  return {{"kind", sys.kind == SystemKind::Fuchsian ? "fuchsian" : "confluent"},
          {"n", sys.n},
          {"params", params_to_json(sys.params)},
          {"gauge_index", sys.gauge_index},
          {"A0", matrix_to_json(sys.A0)},
          {"A1", matrix_to_json(sys.A1)}};
}

json solution_to_json(const SeriesSolution& s) {
  static const char* sources[] = {"recurrence", "closed_form", "hypergeometric"};
  json coeffs = json::array();
  for (const auto& c : s.coeffs) coeffs.push_back(vector_to_json(c));
  json comps = json::array();
  for (const auto& c : s.components)
    comps.push_back({{"l", c.l}, {"shift", c.shift}, {"prefactor", complex_to_json(c.prefactor)},
                     {"series", hgspec_to_json(c.spec)}});
  return {{"k", s.k},
          {"exponent", complex_to_json(s.exponent)},
          {"frame", s.frame == SeriesFrame::Gauge ? "gauge" : "original"},
          {"source", sources[static_cast<int>(s.source)]},
          {"coefficients", coeffs},
          {"components", comps}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed for " + path);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr, const std::vector<std::string>& names) {
  os << "t";
  for (const auto& n : names) os << ",re_" << n << ",im_" << n;
  os << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    const Vector& z = tr.states[i];
    if (static_cast<std::size_t>(z.size()) != names.size())
      throw InvalidArgument("write_trajectory_csv: column names do not match the state size");
    os << tr.t[i];
    for (Eigen::Index k = 0; k < z.size(); ++k) os << ',' << z(k).real() << ',' << z(k).imag();
    os << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& is, std::vector<std::string>* names) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("empty trajectory file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.empty() || header[0] != "t" || header.size() % 2 != 1)
    throw InvalidArgument("trajectory header must be t followed by re_/im_ pairs");
  const std::size_t dim = (header.size() - 1) / 2;
  if (names) {
    names->clear();
    for (std::size_t k = 0; k < dim; ++k) names->push_back(header[1 + 2 * k].substr(3));
  }
  Trajectory tr;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(std::strtod(cell.c_str(), nullptr));
    if (vals.size() != header.size()) throw InvalidArgument("trajectory row has the wrong number of columns");
    Vector z(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < dim; ++k) z(static_cast<Eigen::Index>(k)) = {vals[1 + 2 * k], vals[2 + 2 * k]};
    tr.t.push_back(vals[0]);
    tr.states.push_back(std::move(z));
  }
  return tr;
}

std::vector<std::string> symmetric_names(int n) {
  std::vector<std::string> out;
  for (int i = 0; i <= n; ++i) out.push_back("x" + std::to_string(i));
  for (int i = 0; i <= n; ++i) out.push_back("y" + std::to_string(i));
  return out;
}

std::vector<std::string> canonical_names(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back("q" + std::to_string(i));
  for (int i = 1; i <= n; ++i) out.push_back("p" + std::to_string(i));
  return out;
}

}  // namespace pvi::io
