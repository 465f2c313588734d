#pragma once

// Randomized structural properties over a corpus of built-in, relabeled and
// random glue tables. Shared by the doctest suite and the acceptance binary.

#include "oracles.hpp"

#include "necklace/cut_analysis.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace props {

using namespace necklace;

struct CorpusEntry {
    std::string name;
    NecklaceSpec spec;
    /// Index of the entry this one relabels, or -1.
    int relabels = -1;
};

struct Violation {
    std::string spec;
    std::string property;
    std::string detail;
};

struct PropertyRun {
    std::size_t specs = 0;
    std::size_t checks = 0;
    std::vector<std::string> skipped;
    std::vector<Violation> violations;
};

inline std::string glue_text(const NecklaceSpec& s)
{
    std::string t;
    for (const GlueRule& r : s.glue()) {
        t += (t.empty() ? "" : " ") + r.u.to_string(s.n()) + "/" + r.v.to_string(s.n());
    }
    return t;
}

inline std::vector<CorpusEntry> corpus(std::uint32_t seed, std::size_t random_count = 6, std::size_t relabel_count = 2)
{
    std::mt19937 rng(seed);
    std::vector<CorpusEntry> out;
    for (const NecklaceSpec& s : {gasket_spec(), good4_spec(), fig2_spec()}) {
        out.push_back({s.label(), s, -1});
    }
    for (const NecklaceSpec& s : oracle::random_valid_specs(rng, random_count, 20000)) {
        out.push_back({"random " + glue_text(s), s, -1});
    }
    const std::size_t originals = out.size();
    for (std::size_t i = 0; i < originals; ++i) {
        const auto group = dihedral_group(out[i].spec.n());
        for (std::size_t r = 0; r < relabel_count; ++r) {
            const DihedralElement& sigma = group[std::uniform_int_distribution<std::size_t>(1, group.size() - 1)(rng)];
            out.push_back({out[i].name + " relabeled by #" + std::to_string(sigma.index()), apply_sigma(out[i].spec, sigma),
                           static_cast<int>(i)});
        }
    }
    return out;
}

struct Summary {
    bool ok = false;
    bool good = false;
    bool cut_point_free = false;
    std::size_t N2 = 0;
    std::size_t extremal = 0;
    std::size_t cut_points = 0;
};

inline GraphOptions property_graph_options()
{
    GraphOptions g;
    g.max_level = 7;
    g.max_cells = 100000;
    return g;
}

/// Checks one spec and returns its survey summary for relabeling comparisons.
inline Summary check_spec(const CorpusEntry& entry, PropertyRun& run, int copy_level)
{
    const NecklaceSpec& spec = entry.spec;
    const int n = spec.n();
    Summary sum;
    auto fail = [&](const std::string& prop, const std::string& detail) {
        run.violations.push_back({entry.name, prop, detail});
    };
    try {
        TopologyEngine engine(spec, property_graph_options());
        SurveyOptions so;
        so.level_cap = 1;
        so.cut_point_level = 2;
        const ExtremalSurvey survey = survey_extremal(engine, so);
        sum.good = survey.verdicts.good;
        sum.cut_point_free = survey.verdicts.cut_point_free;
        sum.N2 = survey.N2;
        sum.extremal = survey.extremal_pairs.size();
        sum.cut_points = survey.cut_points.size();

        // Boundary law, plus an independent component count at the reported level.
        std::vector<CutReport> cuts = survey.extremal_cuts;
        for (Symbol k = 1; k <= n; ++k) {
            const CutVerdict v = engine.is_cut({engine.point(spec.left_side(k == 1 ? n : k - 1)), engine.point(spec.left_side(k))});
            if (v.cut) {
                CutReport r;
                r.points = v.full.removed;
                r.components = v.full;
                cuts.push_back(std::move(r));
            }
        }
        for (const CutReport& c : cuts) {
            const ComponentSet& set = c.components;
            for (std::size_t i = 0; i < set.components.size(); ++i) {
                ++run.checks;
                if (set.components[i].boundary.size() != set.removed.size()) {
                    fail("boundary law", "component " + std::to_string(i) + " closure meets "
                                             + std::to_string(set.components[i].boundary.size()) + " of "
                                             + std::to_string(set.removed.size()) + " removed points");
                }
            }
            const auto g = engine.graph(set.stable_at);
            std::set<std::uint32_t> skip;
            for (const PointClass& p : set.removed) {
                if (auto id = g->find_contact(p)) {
                    skip.insert(*id);
                }
            }
            ++run.checks;
            const std::size_t naive = oracle::count_components(*g, std::vector<char>(g->cylinder_count(), 1), skip);
            if (naive != set.components.size()) {
                fail("component count", "escalation reports " + std::to_string(set.components.size()) + ", union-find at level "
                                            + std::to_string(set.stable_at) + " finds " + std::to_string(naive));
            }
        }

        if (sum.cut_point_free) {
            ++run.checks;
            if (survey.N2 > static_cast<std::size_t>(n - 2)) {
                fail("N <= n - 2", "N2 = " + std::to_string(survey.N2));
            }
        }
        if (sum.good) {
            for (int level = 1; level <= copy_level; ++level) {
                for (const Word& w : oracle::words(n, level)) {
                    const ComponentSet set = engine.components_without_copy(w, level >= 2);
                    ++run.checks;
                    if (set.components.size() != 1) {
                        fail("copy complement connected", "copy " + w.to_string(n) + " leaves "
                                                              + std::to_string(set.components.size()) + " components");
                    }
                    if (level >= 2 && copy_boundary(engine, w).size() == 2 && set.components.size() == 1) {
                        ++run.checks;
                        const std::size_t ncp = set.ncp_list().front();
                        if (ncp >= static_cast<std::size_t>(n - 2)) {
                            fail("copy complement ncp", "copy " + w.to_string(n) + ": ncp " + std::to_string(ncp));
                        }
                    }
                }
            }
        }
        sum.ok = true;
    } catch (const Error& e) {
        run.skipped.push_back(entry.name + ": " + e.what());
    }
    return sum;
}

inline PropertyRun run_properties(const std::vector<CorpusEntry>& entries, int copy_level = 3)
{
    PropertyRun run;
    std::vector<Summary> sums;
    for (const CorpusEntry& e : entries) {
        ++run.specs;
        sums.push_back(check_spec(e, run, copy_level));
        if (e.relabels >= 0 && sums.back().ok && sums[static_cast<std::size_t>(e.relabels)].ok) {
            const Summary& a = sums[static_cast<std::size_t>(e.relabels)];
            const Summary& b = sums.back();
            ++run.checks;
            if (a.good != b.good || a.cut_point_free != b.cut_point_free || a.N2 != b.N2 || a.extremal != b.extremal
                || a.cut_points != b.cut_points) {
                run.violations.push_back({e.name, "relabeling invariance",
                                          "N2 " + std::to_string(a.N2) + " vs " + std::to_string(b.N2) + ", extremal "
                                              + std::to_string(a.extremal) + " vs " + std::to_string(b.extremal)});
            }
        }
    }
    return run;
}

} // namespace props
