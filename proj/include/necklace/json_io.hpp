#pragma once

// JSON schemas (version 1) for specs, IFS files and analysis reports, plus
// DOT export of contact graphs.

#include "necklace/catalog.hpp"
#include "necklace/cut_analysis.hpp"
#include "necklace/geometry.hpp"
#include "necklace/rigidity.hpp"

#include <json.hpp>

#include <string>

namespace necklace {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Throws MalformedInput with a path to the offending field.
NecklaceSpec spec_from_json(const Json& j);
GeometricIFS ifs_from_json(const Json& j);

Json to_json(const Address& a, int n);
Json to_json(const Word& w, int n);
Json to_json(const NecklaceSpec& spec);
Json to_json(const GeometricIFS& ifs);

/// Reads a file, or a built-in entry named "builtin:NAME". Throws
/// MalformedInput for unreadable or invalid documents.
Json read_json_document(const std::string& path);
NecklaceSpec load_spec(const std::string& path);
GeometricIFS load_ifs(const std::string& path);

Json validation_json(const NecklaceSpec& spec, const ValidationReport& r);
Json goodness_json(const NecklaceSpec& spec, const GoodnessReport& r);
Json components_json(const ComponentSet& set);
Json cut_json(const CutReport& r, int n);
Json survey_json(const ExtremalSurvey& s, int n);
Json suite_json(const SuiteReport& r, int n);
/// Automaton {states, transitions, accepting} plus truncated σ tables.
Json closure_json(const RigidMapClosure& c, const std::vector<SigmaTable>& tables, int table_depth);
Json uniqueness_json(const UniquenessReport& r);
Json extraction_json(const Extraction& e, int n);
Json graph_json(const ContactGraph& g);
std::string graph_dot(const ContactGraph& g);
Json catalog_json(const std::vector<CatalogEntry>& entries);

/// Sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);

} // namespace necklace
