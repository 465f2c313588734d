#include "necklace/cli.hpp"

#include "necklace/errors.hpp"
#include "necklace/json_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

namespace necklace {

namespace {

struct UsageError : Error {
    using Error::Error;
};

struct Options {
    std::vector<std::string> inputs;
    int depth = kDefaultClassDepth;
    int window = 2;
    int max_level = 10;
    int level_cap = 2;
    int threads = 1;
    int level = -1;
    double tol = 1e-9;
    std::vector<std::string> points;
    std::vector<int> nodes;
    std::string copy;
    std::string out;
    std::string spec;
    std::string write_dir;
    bool ncp = false;
    bool dot = false;
};

GraphOptions graph_options(const Options& o)
{
    GraphOptions g;
    g.class_depth = o.depth;
    g.window = o.window;
    g.max_level = o.max_level;
    return g;
}

Address cli_address(const std::string& text, int n)
{
    try {
        return parse_address(text, n);
    } catch (const MalformedInput& e) {
        throw UsageError(std::string("--point ") + text + ": " + e.what());
    }
}

Symbol cli_node(int k, int n)
{
    if (k < 1 || k > n) {
        throw UsageError("--node " + std::to_string(k) + ": expected 1.." + std::to_string(n));
    }
    return static_cast<Symbol>(k);
}

std::vector<PointClass> removed_points(const TopologyEngine& engine, const Options& o)
{
    const NecklaceSpec& spec = engine.spec();
    std::vector<PointClass> S;
    for (const std::string& p : o.points) {
        S.push_back(engine.point(cli_address(p, spec.n())));
    }
    for (int k : o.nodes) {
        S.push_back(engine.point(spec.left_side(cli_node(k, spec.n()))));
    }
    return S;
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text)) {
        throw UsageError("cannot write " + path.string());
    }
}

using Handler = std::function<void(const Options&, std::ostream&)>;

void cmd_validate(const Options& o, std::ostream& out)
{
    const NecklaceSpec spec = load_spec(o.inputs.at(0));
    out << dump(validation_json(spec, validate_spec(spec, o.depth)));
}

void cmd_goodness(const Options& o, std::ostream& out)
{
    const NecklaceSpec spec = load_spec(o.inputs.at(0));
    out << dump(goodness_json(spec, check_goodness(spec, o.depth)));
}

void cmd_components(const Options& o, std::ostream& out)
{
    const NecklaceSpec spec = load_spec(o.inputs.at(0));
    const TopologyEngine engine(spec, graph_options(o));
    if (o.points.empty() && o.nodes.empty() && o.copy.empty()) {
        const auto g = engine.graph(o.level < 0 ? 2 : o.level);
        out << (o.dot ? graph_dot(*g) : dump(graph_json(*g)));
        return;
    }
    if (!o.copy.empty()) {
        if (!o.points.empty() || !o.nodes.empty()) {
            throw UsageError("--copy cannot be combined with --point or --node");
        }
        Word w;
        try {
            w = parse_word(o.copy, spec.n());
        } catch (const MalformedInput& e) {
            throw UsageError(std::string("--copy: ") + e.what());
        }
        out << dump(components_json(engine.components_without_copy(w, o.ncp)));
        return;
    }
    const std::vector<PointClass> S = removed_points(engine, o);
    Json j = components_json(engine.components_minus(S, o.ncp));
    const CutVerdict verdict = engine.is_cut(S);
    j["is_cut"] = verdict.cut;
    out << dump(j);
}

SurveyOptions survey_options(const Options& o)
{
    SurveyOptions s;
    s.level_cap = o.level_cap;
    s.threads = o.threads;
    if (o.level >= 0) {
        s.cut_point_level = o.level;
    }
    return s;
}

void cmd_survey(const Options& o, std::ostream& out)
{
    const NecklaceSpec spec = load_spec(o.inputs.at(0));
    const TopologyEngine engine(spec, graph_options(o));
    out << dump(survey_json(survey_extremal(engine, survey_options(o)), spec.n()));
}

void cmd_theorems(const Options& o, std::ostream& out)
{
    const NecklaceSpec spec = load_spec(o.inputs.at(0));
    const TopologyEngine engine(spec, graph_options(o));
    SuiteOptions s;
    s.survey = survey_options(o);
    s.survey.cut_point_level = 3;
    if (o.level >= 0) {
        s.copy_level = o.level;
    }
    out << dump(suite_json(verify_theorem_suite(engine, s), spec.n()));
}

void cmd_rigid(const Options& o, std::ostream& out)
{
    if (o.inputs.size() != 2) {
        throw UsageError("rigid expects two spec files");
    }
    const NecklaceSpec F = load_spec(o.inputs[0]);
    const NecklaceSpec G = load_spec(o.inputs[1]);
    const RigidMapClosure closure = rigid_maps(F, G, o.depth);
    const int table_depth = o.level < 0 ? 2 : o.level;
    std::vector<SigmaTable> tables;
    if (closure.closed && table_depth <= o.depth) {
        tables = map_tables(closure, table_depth);
    }
    Json j = closure_json(closure, tables, table_depth);
    if (F.n() == G.n() && F == G && closure.closed && !tables.empty()) {
        const GroupCheck g = check_group_property(closure, table_depth);
        j["group"] = {{"contains_identity", g.contains_identity},
                      {"closed_under_composition", g.closed_under_composition},
                      {"closed_under_inverse", g.closed_under_inverse},
                      {"tables", g.tables},
                      {"depth", g.depth}};
    }
    out << dump(j);
}

void cmd_uniqueness(const Options& o, std::ostream& out)
{
    const NecklaceSpec spec = load_spec(o.inputs.at(0));
    out << dump(uniqueness_json(verify_nifs_uniqueness(spec, o.level_cap, o.threads)));
}

ContactOptions contact_options(const Options& o, bool max_level_set)
{
    ContactOptions c;
    c.tol = o.tol;
    if (max_level_set) {
        c.level_cap = o.max_level;
    }
    return c;
}

void cmd_extract(const Options& o, std::ostream& out, bool max_level_set)
{
    const GeometricIFS ifs = load_ifs(o.inputs.at(0));
    const Extraction e = spec_from_geometry(ifs, contact_options(o, max_level_set));
    Json j = extraction_json(e, ifs.n());
    if (!o.spec.empty()) {
        const NecklaceSpec ref = load_spec(o.spec);
        if (e.spec) {
            const IsomorphismResult iso = spec_isomorphic(*e.spec, ref, o.depth);
            j["isomorphic"] = {{"sigma", iso.sigma ? Json(iso.sigma->to_string()) : Json(nullptr)}, {"reason", iso.reason}};
        } else {
            j["isomorphic"] = {{"sigma", nullptr}, {"reason", "no spec extracted"}};
        }
    }
    out << dump(j);
}

void cmd_render(const Options& o, std::ostream& out, bool max_level_set)
{
    if (o.out.empty()) {
        throw UsageError("render needs --out PATH");
    }
    const GeometricIFS ifs = load_ifs(o.inputs.at(0));
    const int m = o.level < 0 ? 5 : o.level;
    std::vector<Mark> marks;
    for (const std::string& p : o.points) {
        marks.push_back({p, cli_address(p, ifs.n()), 1});
    }
    if (!o.nodes.empty()) {
        std::optional<NecklaceSpec> spec;
        if (!o.spec.empty()) {
            spec = load_spec(o.spec);
        } else {
            spec = spec_from_geometry(ifs, contact_options(o, max_level_set)).spec;
        }
        if (!spec || spec->n() != ifs.n()) {
            throw UsageError("--node needs a spec matching the IFS (pass --spec)");
        }
        for (int k : o.nodes) {
            const Symbol s = cli_node(k, ifs.n());
            marks.push_back({"z" + std::to_string(k), spec->left_side(s), 0});
        }
    }
    write_file(o.out, render_svg(ifs, m, marks, default_max_cells()));
    Json jm = Json::array();
    for (const Mark& mk : marks) {
        const Vec2 p = ifs.point(mk.address);
        jm.push_back({{"label", mk.label},
                      {"address", mk.address.to_string(ifs.n())},
                      {"x", std::stod(format_number(p.x))},
                      {"y", std::stod(format_number(p.y))}});
    }
    out << dump({{"v", kSchemaVersion}, {"out", o.out}, {"level", m}, {"marks", jm}});
}

void cmd_catalog(const Options& o, std::ostream& out)
{
    const auto entries = builtin_examples();
    Json j = catalog_json(entries);
    if (!o.write_dir.empty()) {
        std::filesystem::create_directories(o.write_dir);
        Json written = Json::array();
        for (const CatalogEntry& e : entries) {
            if (e.spec) {
                const auto path = std::filesystem::path(o.write_dir) / (e.name + ".json");
                write_file(path, dump(to_json(*e.spec)));
                written.push_back(path.string());
            }
            if (e.ifs) {
                const auto path = std::filesystem::path(o.write_dir) / (e.name + "_ifs.json");
                write_file(path, dump(to_json(*e.ifs)));
                written.push_back(path.string());
            }
        }
        j["written"] = written;
    }
    out << dump(j);
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Topology of necklace attractors: validation, cut invariants, rigidity and geometry", "necklace"};
    app.require_subcommand(1, 1);
    Options o;

    auto positional = [&](CLI::App* sub, const char* what, int count) {
        sub->add_option("input", o.inputs, what)->required()->expected(count);
    };
    auto depth = [&](CLI::App* sub) {
        sub->add_option("--depth", o.depth, "Identification closure depth")->capture_default_str()->check(CLI::Range(1, 64));
    };
    auto escalation = [&](CLI::App* sub) {
        sub->add_option("--window", o.window, "Levels that must agree before accepting a result")
            ->capture_default_str()
            ->check(CLI::Range(1, 16));
        sub->add_option("--max-level", o.max_level, "Highest contact-graph level")->capture_default_str()->check(CLI::Range(1, 64));
    };
    auto threads = [&](CLI::App* sub) {
        sub->add_option("--threads", o.threads, "Worker threads")->capture_default_str()->check(CLI::Range(1, 256));
    };
    auto points = [&](CLI::App* sub) {
        sub->add_option("--point", o.points, "Address such as 1(2), repeatable");
        sub->add_option("--node", o.nodes, "Main node index k (the point z_k), repeatable");
    };

    auto* validate = app.add_subcommand("validate", "Check the necklace intersection pattern of a spec");
    positional(validate, "Spec JSON", 1);
    depth(validate);

    auto* goodness = app.add_subcommand("goodness", "Check whether a spec is good");
    positional(goodness, "Spec JSON", 1);
    depth(goodness);

    auto* components = app.add_subcommand("components", "Components after removing points or a copy; graph export without them");
    positional(components, "Spec JSON", 1);
    depth(components);
    escalation(components);
    threads(components);
    points(components);
    components->add_option("--copy", o.copy, "Remove the copy with this word");
    components->add_flag("--ncp", o.ncp, "Count cut points of each component closure");
    components->add_option("--level", o.level, "Graph level for export (default 2)")->check(CLI::Range(0, 64));
    components->add_flag("--dot", o.dot, "Export the graph as DOT");

    auto* survey = app.add_subcommand("survey", "Survey 2-cuts among main nodes and report N_2 and extremal cuts");
    positional(survey, "Spec JSON", 1);
    depth(survey);
    escalation(survey);
    threads(survey);
    survey->add_option("--level-cap", o.level_cap, "Copies up to this level supply candidate pairs")
        ->capture_default_str()
        ->check(CLI::Range(0, 8));
    survey->add_option("--level", o.level, "Main nodes up to this level are screened for cut points (default 3)")
        ->check(CLI::Range(0, 8));

    auto* theorems = app.add_subcommand("theorems", "Check the cut-invariant claims for a spec");
    positional(theorems, "Spec JSON", 1);
    depth(theorems);
    escalation(theorems);
    threads(theorems);
    theorems->add_option("--level-cap", o.level_cap, "Survey level cap")->capture_default_str()->check(CLI::Range(0, 8));
    theorems->add_option("--level", o.level, "Copies up to this level are checked (default 3)")->check(CLI::Range(1, 8));

    auto* rigid = app.add_subcommand("rigid", "Rigid homeomorphisms between two necklaces");
    positional(rigid, "Spec JSON files F and G", 2);
    rigid->add_option("--depth", o.depth, "Expansion depth of the automaton")->check(CLI::Range(1, 64));
    rigid->add_option("--level", o.level, "Depth of the listed σ tables (default 2)")->check(CLI::Range(0, 8));

    auto* uniqueness = app.add_subcommand("uniqueness", "Relabel by every dihedral σ and compare");
    positional(uniqueness, "Spec JSON", 1);
    uniqueness->add_option("--level-cap", o.level_cap, "Survey level cap")->capture_default_str()->check(CLI::Range(0, 8));
    threads(uniqueness);

    auto* extract = app.add_subcommand("extract", "Read glue data off a planar IFS");
    positional(extract, "IFS JSON", 1);
    extract->add_option("--tol", o.tol, "Contact tolerance relative to the hull diameter")->capture_default_str();
    extract->add_option("--max-level", o.max_level, "Contact resolution level cap (default 24)")->check(CLI::Range(2, 40));
    extract->add_option("--spec", o.spec, "Reference spec to compare against");
    extract->add_option("--depth", o.depth, "Closure depth for the comparison")->check(CLI::Range(1, 64));

    auto* render = app.add_subcommand("render", "Write an SVG of the level-m cells");
    positional(render, "IFS JSON", 1);
    render->add_option("--level", o.level, "Cell level (default 5)")->check(CLI::Range(0, 16));
    render->add_option("--out", o.out, "SVG output path");
    points(render);
    render->add_option("--spec", o.spec, "Spec used to place --node marks");
    render->add_option("--tol", o.tol, "Contact tolerance when the spec is extracted")->capture_default_str();
    render->add_option("--max-level", o.max_level, "Contact resolution level cap")->check(CLI::Range(2, 40));

    auto* catalog = app.add_subcommand("catalog", "List built-in examples");
    catalog->add_option("--write-dir", o.write_dir, "Write each entry as JSON into this directory");

    std::vector<std::string> argv_store{"necklace"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (std::string& s : argv_store) {
        argv.push_back(s.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "necklace: " << e.what() << "\n";
        return exit_usage;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string verb = sub->get_name();
    const bool max_level_set = sub->get_option_no_throw("--max-level") && sub->count("--max-level") > 0;
    const std::map<std::string, Handler> handlers{
        {"validate", cmd_validate},
        {"goodness", cmd_goodness},
        {"components", cmd_components},
        {"survey", cmd_survey},
        {"theorems", cmd_theorems},
        {"rigid", cmd_rigid},
        {"uniqueness", cmd_uniqueness},
        {"extract", [&](const Options& opt, std::ostream& os) { cmd_extract(opt, os, max_level_set); }},
        {"render", [&](const Options& opt, std::ostream& os) { cmd_render(opt, os, max_level_set); }},
        {"catalog", cmd_catalog},
    };
    if (verb == "rigid" && sub->count("--depth") == 0) {
        o.depth = 6;
    }
    try {
        handlers.at(verb)(o, out);
        return exit_ok;
    } catch (const UsageError& e) {
        err << "necklace " << verb << ": " << e.what() << "\n";
        return exit_usage;
    } catch (const ParameterError& e) {
        err << "necklace " << verb << ": parameter error: " << e.what() << "\n";
        return exit_usage;
    } catch (const CapExceeded& e) {
        err << "necklace " << verb << ": cap exceeded: " << e.what() << "\n";
        return exit_cap;
    } catch (const MalformedInput& e) {
        err << "necklace " << verb << ": malformed input: " << e.what() << "\n";
        return exit_malformed;
    } catch (const std::exception& e) {
        err << "necklace " << verb << ": " << e.what() << "\n";
        return exit_usage;
    }
}

} // namespace necklace
