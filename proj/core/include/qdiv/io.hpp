#pragma once

#include <string>

#include "qdiv/algebra.hpp"
#include "qdiv/classical.hpp"
#include "qdiv/state.hpp"

namespace qdiv {

// State JSON: {"blocks": [b, ...]} with each block a row-major complex matrix
// whose entries are [re, im] pairs. Validated (hermiticity, PSD) on load.
FdState parse_state_json(const std::string& text);
FdState load_state(const std::string& path);
std::string emit_state_json(const FdState& state);

// Subalgebra JSON: {"dim": d, "unitary": [[[re,im],...],...], "pattern": [[m,n],...]}.
Subalgebra parse_subalgebra_json(const std::string& text);
Subalgebra load_subalgebra(const std::string& path);

// Chain JSON: {"links": [subalgebra, ...]}.
SubalgebraChain parse_chain_json(const std::string& text);
SubalgebraChain load_chain(const std::string& path);

// Measure JSON: {"atoms": [[lambda, mass], ...], "density": {"kind": "uniform",
// "mass": m} | {"kind": "samples", "values": [...]}}. Sample values live on the
// default shared Gauss-Legendre grid.
UnitIntervalMeasure parse_measure_json(const std::string& text);
UnitIntervalMeasure load_measure(const std::string& path);

// CSV numeric format: 12 significant digits, "inf"/"-inf" literals.
std::string csv_number(double v);
std::string csv_number(const ExtReal& v);

std::string read_text_file(const std::string& path);

}  // namespace qdiv
