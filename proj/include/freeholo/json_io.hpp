#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "freeholo/domain.hpp"
#include "freeholo/expand.hpp"
#include "freeholo/freepoly.hpp"
#include "freeholo/matcore.hpp"
#include "freeholo/ncharness.hpp"
#include "freeholo/realization.hpp"

// JSON encodings used by fixture files and CLI reports. Decoders throw
// FixtureError on shape or type problems.

namespace freeholo {

using nlohmann::json;

/// {"rows":n,"cols":m,"re":[...],"im":[...]} row-major.
json matrix_to_json(const CMatrix& a);
CMatrix matrix_from_json(const json& j);

/// {"d":d,"n":n,"parts":[matrix,...]}
json tuple_to_json(const MatrixTuple& x);
MatrixTuple tuple_from_json(const json& j);

/// {"nvars":d,"terms":[{"word":[1,2],"re":..,"im":..}]} in graded-lex order.
json poly_to_json(const FreePoly& p);
FreePoly poly_from_json(const json& j);

/// {"alpha":[re,im],"B":..,"C":..,"D":..,"ell":l,"I":..,"J":..}
json colligation_to_json(const Colligation& v);
Colligation colligation_from_json(const json& j);

/// {"I":..,"J":..,"d":..,"entries":[[string,...],...]} using the canonical printer.
json delta_to_json(const PolyMatrix& delta);

json neumann_to_json(const NeumannReport& r);

/// {"K":..,"components":[poly,...],"M":..,"r":..}; M and r are null without a certificate.
json series_to_json(const SeriesExpansion& s);

/// {"suite","trials","tolerance","max_residual","failures":[{"seed","residual","digest"}],"verdict"}
json report_to_json(const PropertyReport& r);

/// Reads and parses a JSON file; FixtureError on I/O or syntax errors.
json read_json_file(const std::string& path);

}  // namespace freeholo
