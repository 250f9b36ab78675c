#include "qdiv/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qdiv {

namespace {

using nlohmann::json;

json parse_or_throw(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("invalid JSON");
  return j;
}

Matrix parse_complex_matrix(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty())
    throw ParseError(std::string(what) + ": expected a nonempty array of rows");
  const size_t d = rows.size();
  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (size_t i = 0; i < d; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || row.size() != d)
      throw ParseError(std::string(what) + ": row " + std::to_string(i) +
                       " is not a length-" + std::to_string(d) + " array");
    for (size_t j = 0; j < d; ++j) {
      const auto& cell = row[j];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
          !cell[1].is_number())
        throw ParseError(std::string(what) + ": entry (" + std::to_string(i) + "," +
                         std::to_string(j) + ") is not an [re, im] pair");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          Complex(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return m;
}

json emit_complex_matrix(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

FdState parse_state_json(const std::string& text) {
  const json j = parse_or_throw(text);
  if (!j.contains("blocks")) throw ParseError("state: missing \"blocks\"");
  const auto& blocks = j["blocks"];
  if (!blocks.is_array() || blocks.empty())
    throw ParseError("state: \"blocks\" must be a nonempty array");
  std::vector<HermMatrix> parsed;
  parsed.reserve(blocks.size());
  for (size_t k = 0; k < blocks.size(); ++k) {
    const Matrix m = parse_complex_matrix(blocks[k], "state block");
    try {
      parsed.emplace_back(m);
    } catch (const NonHermitianError& e) {
      throw ValidationError("state block " + std::to_string(k) + ": " + e.what());
    }
  }
  try {
    return FdState(std::move(parsed));
  } catch (const NegativeSpectrumError& e) {
    throw ValidationError(std::string("state: ") + e.what());
  }
}

FdState load_state(const std::string& path) { return parse_state_json(read_text_file(path)); }

std::string emit_state_json(const FdState& state) {
  json j;
  j["blocks"] = json::array();
  for (const auto& blk : state.blocks()) j["blocks"].push_back(emit_complex_matrix(blk.entries()));
  return j.dump();
}

Subalgebra parse_subalgebra_json(const std::string& text) {
  const json j = parse_or_throw(text);
  if (!j.contains("dim") || !j.contains("unitary") || !j.contains("pattern"))
    throw ParseError("subalgebra: need \"dim\", \"unitary\" and \"pattern\"");
  const auto dim = j["dim"].get<Eigen::Index>();
  const Matrix u = parse_complex_matrix(j["unitary"], "subalgebra unitary");
  if (u.rows() != dim) throw ParseError("subalgebra: unitary size differs from dim");
  std::vector<std::pair<int, int>> pattern;
  for (const auto& entry : j["pattern"]) {
    if (!entry.is_array() || entry.size() != 2)
      throw ParseError("subalgebra: pattern entries must be [block_dim, multiplicity]");
    pattern.emplace_back(entry[0].get<int>(), entry[1].get<int>());
  }
  try {
    return Subalgebra(u, std::move(pattern));
  } catch (const ValidationError&) {
    throw;
  }
}

Subalgebra load_subalgebra(const std::string& path) {
  return parse_subalgebra_json(read_text_file(path));
}

SubalgebraChain parse_chain_json(const std::string& text) {
  const json j = parse_or_throw(text);
  if (!j.contains("links") || !j["links"].is_array() || j["links"].empty())
    throw ParseError("chain: need a nonempty \"links\" array");
  std::vector<Subalgebra> links;
  for (const auto& link : j["links"]) links.push_back(parse_subalgebra_json(link.dump()));
  return SubalgebraChain(std::move(links));
}

SubalgebraChain load_chain(const std::string& path) {
  return parse_chain_json(read_text_file(path));
}

UnitIntervalMeasure parse_measure_json(const std::string& text) {
  const json j = parse_or_throw(text);
  std::vector<std::pair<double, double>> atoms;
  if (j.contains("atoms")) {
    for (const auto& a : j["atoms"]) {
      if (!a.is_array() || a.size() != 2)
        throw ParseError("measure: atoms must be [location, mass] pairs");
      atoms.emplace_back(a[0].get<double>(), a[1].get<double>());
    }
  }
  try {
    if (!j.contains("density")) return UnitIntervalMeasure::atomic(std::move(atoms));
    const auto& dj = j["density"];
    const std::string kind = dj.value("kind", "");
    if (kind == "uniform") {
      const double mass = dj.value("mass", 1.0);
      return UnitIntervalMeasure::sampled([mass](double) { return mass; }, std::move(atoms));
    }
    if (kind == "samples") {
      if (!dj.contains("values")) throw ParseError("measure: samples density needs \"values\"");
      const auto values = dj["values"].get<std::vector<double>>();
      UnitIntervalMeasure::Density d;
      gauss_legendre_unit(static_cast<int>(values.size()), d.nodes, d.weights);
      d.values = values;
      return UnitIntervalMeasure::with_parts(std::move(atoms), std::move(d));
    }
    throw ParseError("measure: density kind must be \"uniform\" or \"samples\"");
  } catch (const ValidationError&) {
    throw;
  }
}

UnitIntervalMeasure load_measure(const std::string& path) {
  return parse_measure_json(read_text_file(path));
}

std::string csv_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string csv_number(const ExtReal& v) { return csv_number(v.as_double()); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace qdiv
