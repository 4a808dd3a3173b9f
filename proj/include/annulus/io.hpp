#pragma once

#include <string>

#include "annulus/contact.hpp"
#include "annulus/map.hpp"
#include "annulus/pseudo.hpp"
#include "annulus/reduction.hpp"
#include "json.hpp"

namespace annulus::io {

using nlohmann::json;

// Malformed documents raise Error("ParseError").
json to_json(const AnnulusMap& m);
AnnulusMap graph_from_json(const json& j);

json to_json(const SplitRecord& r);
SplitRecord split_from_json(const json& j);

json to_json(const ConstructionSequence& s);
ConstructionSequence cert_from_json(const json& j);

// Exact numbers are ["p", "q"] fractions of decimal integers; Q(sqrt3) values
// are {"rational": x, "sqrt3": y} for x + y sqrt3; float mode writes decimal
// strings. Groups are {"kind": "translation", "vector": [x, y]} or
// {"kind": "rotation", "order": k, "center": [x, y]} with exact entries.
json to_json(const SymmetryGroup& g);
SymmetryGroup group_from_json(const json& j);

json to_json(const ContactSystem& s);
ContactSystem system_from_json(const json& j);

json to_json(const PptRealization& r);
PptRealization ppt_from_json(const json& j);

enum class DocKind { Graph, Certificate, ContactSystem, Ppt };
// Guesses the document type from its top-level fields.
DocKind classify(const json& j);

// Reads a whole file, or stdin for "-".
std::string read_text(const std::string& path);
json read_json(const std::string& path);

// Reject keys outside `allowed` and require those in `required`.
void check_keys(const json& j, std::initializer_list<const char*> allowed,
                std::initializer_list<const char*> required, const std::string& what);

}  // namespace annulus::io
