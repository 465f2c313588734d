#pragma once

// Cut invariants: N(A, F) of a cut, candidate 2-cuts, the extremal survey
// and the consolidated theorem checks.

#include "necklace/contact_graph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace necklace {

struct CutReport {
    std::vector<PointClass> points;
    bool is_cut = false;
    ComponentSet components;
    /// Parallel to components.components.
    std::vector<std::size_t> ncp_per_component;
    std::size_t N = 0;
    /// Components whose closure attains N.
    std::vector<std::size_t> extremal_components;
};

/// Throws NotACut when S is not a (minimal) cut.
CutReport n_of_cut(const TopologyEngine& engine, const std::vector<PointClass>& S);

struct CandidatePair {
    PointClass a;
    PointClass b;
    /// First copy (by level, then lexicographically) holding both as main nodes.
    Word copy;
    Symbol ka = 0;
    Symbol kb = 0;
};

struct CandidateList {
    std::vector<CandidatePair> pairs;
    /// Count before deduplication: C(n,2) per copy.
    std::size_t raw_count = 0;
};

/// Pairs of main nodes of a common copy of level <= L, deduplicated by class.
CandidateList candidate_2cuts(const TopologyEngine& engine, int L);

/// Main-node classes of copies up to `level` that are cut points.
std::vector<PointClass> main_node_cut_points(const TopologyEngine& engine, int level, int threads = 1);

struct SurveyOptions {
    int level_cap = 2;
    int threads = 1;
    /// Level up to which main nodes are screened for cut points.
    int cut_point_level = 3;
};

struct SurveyVerdicts {
    bool good = false;
    bool cut_point_free = false;
    bool n2_equals_n_minus_2 = false;
    /// Every {z_{k-1}, z_k} is an extremal cut.
    bool node_pairs_extremal = false;
    /// Extremal set equals the node pairs exactly.
    bool extremal_equals_node_pairs = false;
    /// True when the good-necklace prediction applies (good and cut-point free).
    bool prediction_asserted = false;
};

struct ExtremalSurvey {
    int level_cap = 0;
    std::size_t raw_candidates = 0;
    std::size_t candidates_examined = 0;
    std::size_t cuts_found = 0;
    std::size_t N2 = 0;
    std::vector<CandidatePair> extremal_pairs;
    std::vector<CutReport> extremal_cuts;
    std::vector<PointClass> cut_points;
    SurveyVerdicts verdicts;
    GraphOptions graph_options;
    int cut_point_level = 0;
};

ExtremalSurvey survey_extremal(const TopologyEngine& engine, const SurveyOptions& options = {});

/// True when {a, b} is the node pair {z_{k-1}, z_k} for some k.
bool is_node_pair(const NecklaceSpec& spec, const PointClass& a, const PointClass& b);

struct ExtremalComponentVerdict {
    Symbol k = 0;
    CutReport report;
    /// Component avoiding copy k.
    std::size_t external = 0;
    bool external_extremal = false;
    bool unique = false;
};

/// Analyzes the cut {z_{k-1}, z_k}.
ExtremalComponentVerdict extremal_components(const TopologyEngine& engine, Symbol k);

enum class ClaimStatus { pass, fail, not_asserted };

std::string to_string(ClaimStatus s);

struct ClaimResult {
    std::string name;
    ClaimStatus status = ClaimStatus::not_asserted;
    std::string detail;
    std::vector<std::string> witnesses;
};

struct SuiteReport {
    bool good = false;
    bool cut_point_free = false;
    std::vector<ClaimResult> claims;
    ExtremalSurvey survey;
    bool all_pass() const;
};

/// Boundary points of copy w: contacts of its cylinder at level |w|.
std::vector<PointClass> copy_boundary(const TopologyEngine& engine, const Word& w);

struct SuiteOptions {
    SurveyOptions survey;
    /// Copies up to this level are checked for the copy-complement claims.
    int copy_level = 3;
};

SuiteReport verify_theorem_suite(const TopologyEngine& engine, const SuiteOptions& options = {});

} // namespace necklace
