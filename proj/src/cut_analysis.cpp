#include "necklace/cut_analysis.hpp"

#include "necklace/detail/parallel.hpp"
#include "necklace/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace necklace {

namespace {

struct SequenceOrder {
    bool operator()(const Address& a, const Address& b) const { return sequence_less(a, b); }
};

CutReport make_report(std::vector<PointClass> points, ComponentSet set)
{
    CutReport r;
    r.points = std::move(points);
    r.is_cut = set.components.size() >= 2;
    r.ncp_per_component = set.ncp_list();
    r.N = r.ncp_per_component.empty() ? 0 : *std::max_element(r.ncp_per_component.begin(), r.ncp_per_component.end());
    for (std::size_t i = 0; i < r.ncp_per_component.size(); ++i) {
        if (r.ncp_per_component[i] == r.N) {
            r.extremal_components.push_back(i);
        }
    }
    r.components = std::move(set);
    return r;
}

std::vector<PointClass> node_classes(const TopologyEngine& engine)
{
    std::vector<PointClass> out;
    for (Symbol k = 1; k <= engine.spec().n(); ++k) {
        out.push_back(engine.point(main_node_address(engine.spec(), Word(), k)));
    }
    return out;
}

std::string pair_text(const CandidatePair& p, int n)
{
    return "{" + p.a.canonical().to_string(n) + ", " + p.b.canonical().to_string(n) + "}";
}

void for_each_word(int n, int level, const auto& fn)
{
    std::vector<Symbol> w(static_cast<std::size_t>(level), 1);
    while (true) {
        fn(Word(w));
        int i = level - 1;
        while (i >= 0 && w[static_cast<std::size_t>(i)] == n) {
            w[static_cast<std::size_t>(i)] = 1;
            --i;
        }
        if (i < 0) {
            return;
        }
        ++w[static_cast<std::size_t>(i)];
    }
}

} // namespace

CutReport n_of_cut(const TopologyEngine& engine, const std::vector<PointClass>& S)
{
    const CutVerdict verdict = engine.is_cut(S);
    if (!verdict.cut) {
        std::string names;
        for (const PointClass& p : S) {
            names += (names.empty() ? "" : ", ") + p.canonical().to_string(engine.spec().n());
        }
        throw NotACut("{" + names + "} is not a cut");
    }
    return make_report(S, engine.components_minus(S, true));
}

CandidateList candidate_2cuts(const TopologyEngine& engine, int L)
{
    const NecklaceSpec& spec = engine.spec();
    const int n = spec.n();
    CandidateList out;
    std::set<std::pair<Address, Address>> seen;
    for (int level = 0; level <= L; ++level) {
        for_each_word(n, level, [&](const Word& w) {
            std::vector<PointClass> nodes;
            for (Symbol k = 1; k <= n; ++k) {
                nodes.push_back(engine.point(main_node_address(spec, w, k)));
            }
            for (Symbol i = 0; i < n; ++i) {
                for (Symbol j = static_cast<Symbol>(i + 1); j < n; ++j) {
                    ++out.raw_count;
                    CandidatePair p{nodes[i], nodes[j], w, static_cast<Symbol>(i + 1), static_cast<Symbol>(j + 1)};
                    if (p.a == p.b) {
                        continue;
                    }
                    if (sequence_less(p.b.canonical(), p.a.canonical())) {
                        std::swap(p.a, p.b);
                        std::swap(p.ka, p.kb);
                    }
                    if (seen.emplace(p.a.canonical(), p.b.canonical()).second) {
                        out.pairs.push_back(std::move(p));
                    }
                }
            }
        });
    }
    return out;
}

std::vector<PointClass> main_node_cut_points(const TopologyEngine& engine, int level, int threads)
{
    const NecklaceSpec& spec = engine.spec();
    std::map<Address, PointClass, SequenceOrder> points;
    for (int l = 0; l <= level; ++l) {
        for_each_word(spec.n(), l, [&](const Word& w) {
            for (Symbol k = 1; k <= spec.n(); ++k) {
                PointClass p = engine.point(main_node_address(spec, w, k));
                points.emplace(p.canonical(), std::move(p));
            }
        });
    }
    std::vector<PointClass> list;
    for (auto& [key, p] : points) {
        list.push_back(std::move(p));
    }
    std::vector<char> cut(list.size(), 0);
    detail::parallel_for(list.size(), threads, [&](std::size_t i) {
        cut[i] = engine.components_minus({list[i]}).components.size() >= 2 ? 1 : 0;
    });
    std::vector<PointClass> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (cut[i]) {
            out.push_back(list[i]);
        }
    }
    return out;
}

bool is_node_pair(const NecklaceSpec& spec, const PointClass& a, const PointClass& b)
{
    for (Symbol k = 1; k <= spec.n(); ++k) {
        const Address left = spec.left_side(cyclic_prev(k, spec.n()));
        const Address right = spec.left_side(k);
        if ((a.contains(left) && b.contains(right)) || (a.contains(right) && b.contains(left))) {
            return true;
        }
    }
    return false;
}

ExtremalSurvey survey_extremal(const TopologyEngine& engine, const SurveyOptions& options)
{
    const NecklaceSpec& spec = engine.spec();
    const int n = spec.n();
    ExtremalSurvey survey;
    survey.level_cap = options.level_cap;
    survey.graph_options = engine.options();
    survey.cut_point_level = std::max(options.cut_point_level, options.level_cap);

    const CandidateList candidates = candidate_2cuts(engine, options.level_cap);
    survey.raw_candidates = candidates.raw_count;
    survey.candidates_examined = candidates.pairs.size();

    survey.cut_points = main_node_cut_points(engine, survey.cut_point_level, options.threads);
    std::set<Address> cut_point_keys;
    for (const PointClass& p : survey.cut_points) {
        cut_point_keys.insert(p.canonical());
    }

    std::vector<std::optional<CutReport>> reports(candidates.pairs.size());
    detail::parallel_for(candidates.pairs.size(), options.threads, [&](std::size_t i) {
        const CandidatePair& p = candidates.pairs[i];
        // A set containing a cut point is never a minimal 2-cut.
        if (cut_point_keys.contains(p.a.canonical()) || cut_point_keys.contains(p.b.canonical())) {
            return;
        }
        ComponentSet set = engine.components_minus({p.a, p.b}, true);
        if (set.components.size() >= 2) {
            reports[i] = make_report({p.a, p.b}, std::move(set));
        }
    });

    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (reports[i]) {
            ++survey.cuts_found;
            survey.N2 = std::max(survey.N2, reports[i]->N);
        }
    }
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (reports[i] && reports[i]->N == survey.N2) {
            survey.extremal_pairs.push_back(candidates.pairs[i]);
            survey.extremal_cuts.push_back(std::move(*reports[i]));
        }
    }

    SurveyVerdicts& v = survey.verdicts;
    v.good = check_goodness(spec, engine.options().class_depth).good;
    v.cut_point_free = survey.cut_points.empty();
    v.n2_equals_n_minus_2 = survey.cuts_found > 0 && survey.N2 == static_cast<std::size_t>(n - 2);
    const auto nodes = node_classes(engine);
    std::size_t node_pairs_found = 0;
    for (Symbol k = 1; k <= n; ++k) {
        const PointClass& a = nodes[cyclic_prev(k, n) - 1];
        const PointClass& b = nodes[k - 1];
        const bool found = std::any_of(survey.extremal_pairs.begin(), survey.extremal_pairs.end(), [&](const CandidatePair& p) {
            return (p.a == a && p.b == b) || (p.a == b && p.b == a);
        });
        node_pairs_found += found ? 1 : 0;
    }
    v.node_pairs_extremal = node_pairs_found == static_cast<std::size_t>(n);
    v.extremal_equals_node_pairs = v.node_pairs_extremal && survey.extremal_pairs.size() == static_cast<std::size_t>(n);
    v.prediction_asserted = v.good && v.cut_point_free;
    return survey;
}

ExtremalComponentVerdict extremal_components(const TopologyEngine& engine, Symbol k)
{
    const NecklaceSpec& spec = engine.spec();
    if (k < 1 || k > spec.n()) {
        throw Error("extremal_components: k outside 1..n");
    }
    const auto nodes = node_classes(engine);
    ExtremalComponentVerdict out;
    out.k = k;
    out.report = n_of_cut(engine, {nodes[cyclic_prev(k, spec.n()) - 1], nodes[k - 1]});
    const ComponentSet& set = out.report.components;
    bool found = false;
    for (std::size_t i = 0; i < set.components.size(); ++i) {
        const bool avoids = std::none_of(set.components[i].cylinders.begin(), set.components[i].cylinders.end(),
                                         [&](std::uint32_t c) { return set.cylinder_word(c)[0] == k; });
        if (avoids) {
            out.external = i;
            found = true;
            break;
        }
    }
    if (!found) {
        throw Error("cut {z_" + std::to_string(cyclic_prev(k, spec.n())) + ", z_" + std::to_string(k)
                    + "} has no component outside copy " + std::to_string(k));
    }
    const auto& ext = out.report.extremal_components;
    out.external_extremal = std::find(ext.begin(), ext.end(), out.external) != ext.end();
    out.unique = out.external_extremal && ext.size() == 1;
    return out;
}

std::string to_string(ClaimStatus s)
{
    switch (s) {
    case ClaimStatus::pass:
        return "pass";
    case ClaimStatus::fail:
        return "fail";
    case ClaimStatus::not_asserted:
        return "not_asserted";
    }
    return "unknown";
}

bool SuiteReport::all_pass() const
{
    return std::none_of(claims.begin(), claims.end(), [](const ClaimResult& c) { return c.status == ClaimStatus::fail; });
}

std::vector<PointClass> copy_boundary(const TopologyEngine& engine, const Word& w)
{
    if (w.empty()) {
        return {};
    }
    const auto g = engine.graph(static_cast<int>(w.size()));
    std::vector<PointClass> out;
    for (std::uint32_t id : g->contacts_of(g->cylinder_index(w))) {
        out.push_back(g->contacts()[id].point);
    }
    return out;
}

SuiteReport verify_theorem_suite(const TopologyEngine& engine, const SuiteOptions& options)
{
    const NecklaceSpec& spec = engine.spec();
    const int n = spec.n();
    SuiteReport report;
    report.survey = survey_extremal(engine, options.survey);
    report.good = report.survey.verdicts.good;
    report.cut_point_free = report.survey.verdicts.cut_point_free;
    const bool cpf = report.cut_point_free;
    const bool good = report.good;

    auto status = [](bool asserted, bool holds) {
        return asserted ? (holds ? ClaimStatus::pass : ClaimStatus::fail) : ClaimStatus::not_asserted;
    };

    {
        ClaimResult c;
        c.name = "n2_equals_n_minus_2";
        c.status = status(cpf, report.survey.verdicts.n2_equals_n_minus_2);
        c.detail = "N2 = " + std::to_string(report.survey.N2) + ", n - 2 = " + std::to_string(n - 2)
                   + (cpf ? "" : "; hypothesis fails: cut points present");
        for (const PointClass& p : report.survey.cut_points) {
            c.witnesses.push_back("cut point " + p.canonical().to_string(n));
        }
        report.claims.push_back(std::move(c));
    }
    {
        ClaimResult c;
        c.name = "node_pairs_only_extremal";
        c.status = status(good && cpf, report.survey.verdicts.extremal_equals_node_pairs);
        c.detail = std::to_string(report.survey.extremal_pairs.size()) + " extremal cuts"
                   + (good ? "" : "; hypothesis fails: not good");
        for (const CandidatePair& p : report.survey.extremal_pairs) {
            if (!is_node_pair(spec, p.a, p.b)) {
                c.witnesses.push_back("extremal cut " + pair_text(p, n));
            }
        }
        report.claims.push_back(std::move(c));
    }
    {
        ClaimResult ext;
        ext.name = "external_component_extremal";
        ClaimResult uniq;
        uniq.name = "external_component_unique";
        bool all_ext = true;
        bool all_unique = true;
        for (Symbol k = 1; k <= n; ++k) {
            const auto v = extremal_components(engine, k);
            if (!v.external_extremal) {
                all_ext = false;
                ext.witnesses.push_back("k = " + std::to_string(k));
            }
            if (!v.unique) {
                all_unique = false;
                uniq.witnesses.push_back("k = " + std::to_string(k) + ": " + std::to_string(v.report.extremal_components.size())
                                         + " extremal components");
            }
        }
        ext.status = status(cpf, all_ext);
        ext.detail = "cuts {z_(k-1), z_k} for k = 1.." + std::to_string(n);
        uniq.status = status(good && cpf, all_unique);
        uniq.detail = ext.detail + (good ? "" : "; hypothesis fails: not good");
        report.claims.push_back(std::move(ext));
        report.claims.push_back(std::move(uniq));
    }
    {
        ClaimResult conn;
        conn.name = "copy_complement_connected";
        ClaimResult low;
        low.name = "copy_complement_ncp_below_n_minus_2";
        std::size_t checked_conn = 0;
        std::size_t checked_low = 0;
        bool conn_ok = true;
        bool low_ok = true;
        for (int level = 1; level <= options.copy_level; ++level) {
            for_each_word(n, level, [&](const Word& w) {
                const ComponentSet set = engine.components_without_copy(w, level >= 2);
                ++checked_conn;
                if (set.components.size() != 1) {
                    conn_ok = false;
                    conn.witnesses.push_back("copy " + w.to_string(n) + ": " + std::to_string(set.components.size())
                                             + " components");
                }
                if (level >= 2 && copy_boundary(engine, w).size() == 2) {
                    ++checked_low;
                    const auto ncps = set.ncp_list();
                    const std::size_t worst = ncps.empty() ? 0 : *std::max_element(ncps.begin(), ncps.end());
                    if (set.components.size() != 1 || worst >= static_cast<std::size_t>(n - 2)) {
                        low_ok = false;
                        low.witnesses.push_back("copy " + w.to_string(n) + ": ncp " + std::to_string(worst));
                    }
                }
            });
        }
        conn.status = status(good, conn_ok);
        conn.detail = std::to_string(checked_conn) + " copies of level 1.." + std::to_string(options.copy_level)
                      + (good ? "" : "; hypothesis fails: not good");
        low.status = status(good, low_ok);
        low.detail = std::to_string(checked_low) + " copies of level 2.." + std::to_string(options.copy_level)
                     + " with two boundary points" + (good ? "" : "; hypothesis fails: not good");
        report.claims.push_back(std::move(conn));
        report.claims.push_back(std::move(low));
    }
    return report;
}

} // namespace necklace
