#include "necklace/json_io.hpp"

#include "necklace/errors.hpp"

#include <fstream>
#include <sstream>

namespace necklace {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key)) {
        throw MalformedInput(where + ": missing field \"" + key + "\"");
    }
    return j.at(key);
}

int int_field(const Json& j, const char* key, const std::string& where)
{
    const Json& v = field(j, key, where);
    if (!v.is_number_integer()) {
        throw MalformedInput(where + "." + key + ": expected an integer");
    }
    return v.get<int>();
}

double number_field(const Json& j, const char* key, const std::string& where)
{
    const Json& v = field(j, key, where);
    if (!v.is_number()) {
        throw MalformedInput(where + "." + key + ": expected a number");
    }
    return v.get<double>();
}

void check_version(const Json& j, const std::string& where)
{
    if (!j.is_object()) {
        throw MalformedInput(where + ": expected an object");
    }
    if (j.contains("v") && j.at("v") != kSchemaVersion) {
        throw MalformedInput(where + ".v: unsupported schema version " + j.at("v").dump());
    }
}

Word word_from_json(const Json& j, int n, const std::string& where)
{
    if (!j.is_array()) {
        throw MalformedInput(where + ": expected an array of symbols");
    }
    Word w;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_integer() || j[i].get<int>() < 1 || j[i].get<int>() > n) {
            throw MalformedInput(where + "[" + std::to_string(i) + "]: expected a symbol in 1.." + std::to_string(n));
        }
        w.push_back(static_cast<Symbol>(j[i].get<int>()));
    }
    return w;
}

Address address_from_json(const Json& j, int n, const std::string& where)
{
    if (j.is_string()) {
        return parse_address(j.get<std::string>(), n);
    }
    Word pre = word_from_json(field(j, "pre", where), n, where + ".pre");
    Word per = word_from_json(field(j, "per", where), n, where + ".per");
    if (per.empty()) {
        throw MalformedInput(where + ".per: the period must be nonempty");
    }
    return Address(std::move(pre), std::move(per));
}

double round12(double x) { return std::stod(format_number(x)); }

Json class_json(const PointClass& p, int n)
{
    Json reps = Json::array();
    for (const Address& a : p.representatives) {
        reps.push_back(a.to_string(n));
    }
    return {{"canonical", to_json(p.canonical(), n)}, {"representatives", reps}};
}

Json strings(const std::vector<std::string>& v)
{
    Json out = Json::array();
    for (const std::string& s : v) {
        out.push_back(s);
    }
    return out;
}

Json graph_options_json(const GraphOptions& o)
{
    return {{"class_depth", o.class_depth}, {"window", o.window},         {"max_level", o.max_level},
            {"m0", o.m0},                   {"max_cells", o.max_cells},   {"class_cap", o.class_cap}};
}

} // namespace

NecklaceSpec spec_from_json(const Json& j)
{
    check_version(j, "spec");
    const int n = int_field(j, "n", "spec");
    if (n < 3 || n > kMaxSymbols) {
        throw MalformedInput("spec.n: expected 3.." + std::to_string(kMaxSymbols) + ", got " + std::to_string(n));
    }
    const Json& glue = field(j, "glue", "spec");
    if (!glue.is_array()) {
        throw MalformedInput("spec.glue: expected an array");
    }
    std::vector<GlueRule> rules;
    for (std::size_t i = 0; i < glue.size(); ++i) {
        const std::string where = "spec.glue[" + std::to_string(i) + "]";
        const int k = int_field(glue[i], "k", where);
        if (k < 1 || k > n) {
            throw MalformedInput(where + ".k: expected 1.." + std::to_string(n));
        }
        rules.push_back({static_cast<Symbol>(k), address_from_json(field(glue[i], "u", where), n, where + ".u"),
                         address_from_json(field(glue[i], "v", where), n, where + ".v")});
    }
    std::string label;
    if (j.contains("label")) {
        if (!j.at("label").is_string()) {
            throw MalformedInput("spec.label: expected a string");
        }
        label = j.at("label").get<std::string>();
    }
    return NecklaceSpec(n, std::move(rules), std::move(label));
}

GeometricIFS ifs_from_json(const Json& j)
{
    check_version(j, "ifs");
    const Json& maps = field(j, "maps", "ifs");
    if (!maps.is_array()) {
        throw MalformedInput("ifs.maps: expected an array");
    }
    std::vector<AffineMap2D> out;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        const std::string where = "ifs.maps[" + std::to_string(i) + "]";
        out.push_back({number_field(maps[i], "a11", where), number_field(maps[i], "a12", where),
                       number_field(maps[i], "a21", where), number_field(maps[i], "a22", where),
                       number_field(maps[i], "tx", where), number_field(maps[i], "ty", where)});
    }
    std::string label;
    if (j.contains("label") && j.at("label").is_string()) {
        label = j.at("label").get<std::string>();
    }
    return GeometricIFS(std::move(out), std::move(label));
}

Json to_json(const Word& w, int n)
{
    (void)n;
    Json out = Json::array();
    for (Symbol s : w.symbols()) {
        out.push_back(static_cast<int>(s));
    }
    return out;
}

Json to_json(const Address& a, int n)
{
    return {{"pre", to_json(a.preperiod(), n)}, {"per", to_json(a.period(), n)}, {"text", a.to_string(n)}};
}

Json to_json(const NecklaceSpec& spec)
{
    Json glue = Json::array();
    for (const GlueRule& r : spec.glue()) {
        glue.push_back({{"k", static_cast<int>(r.k)}, {"u", to_json(r.u, spec.n())}, {"v", to_json(r.v, spec.n())}});
    }
    return {{"v", kSchemaVersion}, {"n", spec.n()}, {"label", spec.label()}, {"glue", glue}};
}

Json to_json(const GeometricIFS& ifs)
{
    Json maps = Json::array();
    for (const AffineMap2D& f : ifs.maps()) {
        maps.push_back({{"a11", round12(f.a11)}, {"a12", round12(f.a12)}, {"a21", round12(f.a21)},
                        {"a22", round12(f.a22)}, {"tx", round12(f.tx)},   {"ty", round12(f.ty)}});
    }
    return {{"v", kSchemaVersion}, {"label", ifs.label()}, {"maps", maps}};
}

Json read_json_document(const std::string& path)
{
    constexpr std::string_view builtin = "builtin:";
    if (path.starts_with(builtin)) {
        const std::string name = path.substr(builtin.size());
        for (const CatalogEntry& e : builtin_examples()) {
            if (e.name == name) {
                return e.spec ? to_json(*e.spec) : to_json(*e.ifs);
            }
        }
        throw MalformedInput("unknown built-in \"" + name + "\"");
    }
    std::ifstream in(path);
    if (!in) {
        throw MalformedInput(path + ": cannot open");
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw MalformedInput(path + ": " + e.what());
    }
}

NecklaceSpec load_spec(const std::string& path)
{
    constexpr std::string_view builtin = "builtin:";
    if (path.starts_with(builtin)) {
        for (const CatalogEntry& e : builtin_examples()) {
            if (e.name == path.substr(builtin.size()) && e.spec) {
                return *e.spec;
            }
        }
    }
    try {
        return spec_from_json(read_json_document(path));
    } catch (const Json::exception& e) {
        throw MalformedInput(path + ": " + e.what());
    }
}

GeometricIFS load_ifs(const std::string& path)
{
    try {
        return ifs_from_json(read_json_document(path));
    } catch (const Json::exception& e) {
        throw MalformedInput(path + ": " + e.what());
    }
}

Json validation_json(const NecklaceSpec& spec, const ValidationReport& r)
{
    const int n = spec.n();
    Json pairs = Json::array();
    for (const PairContacts& p : r.pairs) {
        Json contacts = Json::array();
        for (const Address& a : p.contacts) {
            contacts.push_back(to_json(a, n));
        }
        pairs.push_back({{"i", static_cast<int>(p.i)},
                         {"j", static_cast<int>(p.j)},
                         {"adjacent", p.adjacent},
                         {"contacts", contacts},
                         {"ok", p.ok}});
    }
    Json witnesses = Json::array();
    for (auto [i, j] : r.witnesses) {
        witnesses.push_back({static_cast<int>(i), static_cast<int>(j)});
    }
    return {{"v", kSchemaVersion}, {"label", spec.label()}, {"n", n},     {"depth", r.depth},
            {"pass", r.pass},      {"pairs", pairs},        {"witnesses", witnesses}, {"problems", strings(r.problems)}};
}

Json goodness_json(const NecklaceSpec& spec, const GoodnessReport& r)
{
    Json entries = Json::array();
    for (const GoodnessEntry& e : r.entries) {
        Json left = Json::array(), right = Json::array();
        for (Symbol s : e.left_node_children) {
            left.push_back(static_cast<int>(s));
        }
        for (Symbol s : e.right_node_children) {
            right.push_back(static_cast<int>(s));
        }
        entries.push_back({{"k", static_cast<int>(e.k)}, {"left_node_children", left}, {"right_node_children", right}});
    }
    Json witnesses = Json::array();
    for (auto [k, j] : r.witnesses) {
        witnesses.push_back({static_cast<int>(k), static_cast<int>(j)});
    }
    return {{"v", kSchemaVersion}, {"label", spec.label()}, {"good", r.good}, {"entries", entries}, {"witnesses", witnesses}};
}

Json components_json(const ComponentSet& set)
{
    const int n = set.n;
    Json removed = Json::array();
    for (const PointClass& p : set.removed) {
        removed.push_back(class_json(p, n));
    }
    Json excluded = Json::array();
    for (const Word& w : set.excluded) {
        excluded.push_back(w.to_string(n));
    }
    Json comps = Json::array();
    for (std::size_t i = 0; i < set.components.size(); ++i) {
        const Component& c = set.components[i];
        Json cover = Json::array();
        for (const Word& w : set.covering_words(i)) {
            cover.push_back(w.empty() ? "ε" : w.to_string(n));
        }
        Json boundary = Json::array();
        for (std::size_t b : c.boundary) {
            boundary.push_back(set.removed[b].canonical().to_string(n));
        }
        Json entry{{"copies", cover}, {"cylinders", c.cylinders.size()}, {"boundary", boundary}};
        entry["ncp"] = c.ncp ? Json(*c.ncp) : Json(nullptr);
        comps.push_back(entry);
    }
    return {{"v", kSchemaVersion},
            {"removed", removed},
            {"excluded", excluded},
            {"count", set.components.size()},
            {"components", comps},
            {"start_level", set.start_level},
            {"stable_at", set.stable_at},
            {"counts_per_level", set.counts_per_level}};
}

Json cut_json(const CutReport& r, int n)
{
    Json points = Json::array();
    for (const PointClass& p : r.points) {
        points.push_back(to_json(p.canonical(), n));
    }
    Json j = components_json(r.components);
    j.erase("v");
    j["points"] = points;
    j["is_cut"] = r.is_cut;
    j["N"] = r.N;
    j["ncp_per_component"] = r.ncp_per_component;
    j["extremal_components"] = r.extremal_components;
    return j;
}

Json survey_json(const ExtremalSurvey& s, int n)
{
    Json extremal = Json::array();
    for (std::size_t i = 0; i < s.extremal_pairs.size(); ++i) {
        const CandidatePair& p = s.extremal_pairs[i];
        Json cut = cut_json(s.extremal_cuts[i], n);
        cut["copy"] = p.copy.empty() ? "ε" : p.copy.to_string(n);
        cut["node_indices"] = {static_cast<int>(p.ka), static_cast<int>(p.kb)};
        extremal.push_back(cut);
    }
    Json cut_points = Json::array();
    for (const PointClass& p : s.cut_points) {
        cut_points.push_back(to_json(p.canonical(), n));
    }
    const SurveyVerdicts& v = s.verdicts;
    return {{"v", kSchemaVersion},
            {"N2", s.N2},
            {"extremal", extremal},
            {"candidates", s.candidates_examined},
            {"raw_candidates", s.raw_candidates},
            {"cuts_found", s.cuts_found},
            {"cut_points", cut_points},
            {"caps",
             {{"level_cap", s.level_cap}, {"cut_point_level", s.cut_point_level}, {"graph", graph_options_json(s.graph_options)}}},
            {"verdicts",
             {{"good", v.good},
              {"cut_point_free", v.cut_point_free},
              {"n2_equals_n_minus_2", v.n2_equals_n_minus_2},
              {"node_pairs_extremal", v.node_pairs_extremal},
              {"extremal_equals_node_pairs", v.extremal_equals_node_pairs},
              {"prediction_asserted", v.prediction_asserted}}}};
}

Json suite_json(const SuiteReport& r, int n)
{
    Json claims = Json::array();
    for (const ClaimResult& c : r.claims) {
        claims.push_back(
            {{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}, {"witnesses", strings(c.witnesses)}});
    }
    Json survey = survey_json(r.survey, n);
    survey.erase("v");
    return {{"v", kSchemaVersion},
            {"good", r.good},
            {"cut_point_free", r.cut_point_free},
            {"claims", claims},
            {"all_pass", r.all_pass()},
            {"survey", survey}};
}

Json closure_json(const RigidMapClosure& c, const std::vector<SigmaTable>& tables, int table_depth)
{
    const int n = c.n;
    Json states = Json::array();
    Json transitions = Json::array();
    Json accepting = Json::array();
    for (std::size_t s = 0; s < c.states.size(); ++s) {
        const ClosureState& st = c.states[s];
        Json pins = Json::array();
        for (const Pin& p : st.context) {
            pins.push_back({p.from.to_string(n), p.to.to_string(n)});
        }
        states.push_back({{"id", s}, {"pins", pins}, {"depth", st.depth}, {"expanded", st.expanded}});
        if (st.live) {
            accepting.push_back(s);
        }
        for (std::size_t ci : c.live_choices(s)) {
            const auto& [group_index, children] = st.choices[ci];
            transitions.push_back(
                {{"from", s}, {"sigma", DihedralElement::from_index(n, group_index).to_string()}, {"children", children}});
        }
    }
    Json maps = Json::array();
    for (const SigmaTable& t : tables) {
        Json m = Json::object();
        for (const auto& [w, sigma] : t) {
            m[w.empty() ? "ε" : w.to_string(n)] = sigma.to_string();
        }
        maps.push_back(m);
    }
    Json roots = Json::array();
    for (int g : c.root_choices) {
        roots.push_back(DihedralElement::from_index(n, g).to_string());
    }
    Json out{{"v", kSchemaVersion},
             {"n", n},
             {"n_mismatch", c.n_mismatch},
             {"depth", c.depth},
             {"closed", c.closed},
             {"cardinality", to_string(c.cardinality)},
             {"root_choices", roots},
             {"branching_states", c.branching_states},
             {"automaton", {{"states", states}, {"transitions", transitions}, {"accepting", accepting}}},
             {"table_depth", table_depth},
             {"maps", maps}};
    out["count"] = c.count ? Json(*c.count) : Json(nullptr);
    return out;
}

Json uniqueness_json(const UniquenessReport& r)
{
    Json entries = Json::array();
    for (const UniquenessEntry& e : r.entries) {
        entries.push_back({{"sigma", e.sigma.to_string()},
                           {"isomorphic", e.isomorphic},
                           {"good", e.good},
                           {"survey_matches", e.survey_matches}});
    }
    return {{"v", kSchemaVersion}, {"skipped", r.skipped}, {"warning", r.warning}, {"entries", entries}, {"pass", r.pass}};
}

Json extraction_json(const Extraction& e, int n)
{
    Json pairs = Json::array();
    for (const PairContact& p : e.contacts.pairs) {
        pairs.push_back({{"i", static_cast<int>(p.i)},
                         {"j", static_cast<int>(p.j)},
                         {"status", to_string(p.status)},
                         {"level", p.level},
                         {"surviving", p.surviving},
                         {"chain_i", p.chain_i.to_string(n)},
                         {"chain_j", p.chain_j.to_string(n)}});
    }
    Json conf = Json::array();
    for (const RuleConfidence& c : e.confidence) {
        conf.push_back({{"k", static_cast<int>(c.k)},
                        {"periodic", c.periodic},
                        {"repetitions_u", c.repetitions_u},
                        {"repetitions_v", c.repetitions_v}});
    }
    Json out{{"v", kSchemaVersion},
             {"contacts", pairs},
             {"diameter", round12(e.contacts.diameter)},
             {"tol", e.contacts.options.tol},
             {"level_cap", e.contacts.options.level_cap},
             {"confidence", conf},
             {"problems", strings(e.problems)}};
    out["spec"] = e.spec ? to_json(*e.spec) : Json(nullptr);
    return out;
}

Json graph_json(const ContactGraph& g)
{
    const int n = g.n();
    Json cylinders = Json::array();
    for (std::uint32_t c = 0; c < g.cylinder_count(); ++c) {
        const Word w = g.cylinder_word(c);
        cylinders.push_back(w.empty() ? "ε" : w.to_string(n));
    }
    Json contacts = Json::array();
    for (const ContactPoint& cp : g.contacts()) {
        Json incident = Json::array();
        for (std::uint32_t c : cp.incident) {
            incident.push_back(g.cylinder_word(c).to_string(n));
        }
        contacts.push_back({{"canonical", to_json(cp.point.canonical(), n)}, {"incident", incident}});
    }
    return {{"v", kSchemaVersion}, {"level", g.level()}, {"cylinders", cylinders}, {"contacts", contacts}};
}

std::string graph_dot(const ContactGraph& g)
{
    const int n = g.n();
    std::ostringstream os;
    os << "graph level" << g.level() << " {\n  node [shape=box];\n";
    for (std::uint32_t c = 0; c < g.cylinder_count(); ++c) {
        os << "  c" << c << " [label=\"" << g.cylinder_word(c).to_string(n) << "\"];\n";
    }
    for (std::size_t i = 0; i < g.contacts().size(); ++i) {
        const ContactPoint& cp = g.contacts()[i];
        os << "  p" << i << " [shape=point, xlabel=\"" << cp.point.canonical().to_string(n) << "\"];\n";
        for (std::uint32_t c : cp.incident) {
            os << "  p" << i << " -- c" << c << ";\n";
        }
    }
    os << "}\n";
    return os.str();
}

Json catalog_json(const std::vector<CatalogEntry>& entries)
{
    Json list = Json::array();
    for (const CatalogEntry& e : entries) {
        Json j{{"name", e.name}, {"description", e.description}, {"notes", e.notes}};
        j["spec"] = e.spec ? to_json(*e.spec) : Json(nullptr);
        j["ifs"] = e.ifs ? to_json(*e.ifs) : Json(nullptr);
        list.push_back(j);
    }
    return {{"v", kSchemaVersion}, {"entries", list}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

} // namespace necklace
