#include "necklace/rigidity.hpp"

#include "necklace/cut_analysis.hpp"
#include "necklace/errors.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <unordered_map>

namespace necklace {

Symbol DihedralElement::operator()(Symbol k) const
{
    const int shifted = (k - 1 + rotation) % n + 1;
    return static_cast<Symbol>(reflected ? n - shifted + 1 : shifted);
}

DihedralElement DihedralElement::from_index(int n, int index)
{
    if (index < 0 || index >= 2 * n) {
        throw Error("dihedral index " + std::to_string(index) + " outside 0.." + std::to_string(2 * n - 1));
    }
    return {n, index % n, index >= n};
}

std::optional<DihedralElement> DihedralElement::from_images(int n, const std::vector<Symbol>& images)
{
    for (const DihedralElement& g : dihedral_group(n)) {
        bool same = true;
        for (Symbol k = 1; k <= n && same; ++k) {
            same = g(k) == images[k - 1];
        }
        if (same) {
            return g;
        }
    }
    return std::nullopt;
}

DihedralElement DihedralElement::inverse() const
{
    std::vector<Symbol> images(static_cast<std::size_t>(n));
    for (Symbol k = 1; k <= n; ++k) {
        images[(*this)(k) - 1] = k;
    }
    return *from_images(n, images);
}

std::string DihedralElement::to_string() const
{
    if (!reflected && rotation == 0) {
        return "id";
    }
    std::string out = reflected ? "s" : "";
    if (rotation == 1) {
        out += "τ";
    } else if (rotation > 1) {
        out += "τ^" + std::to_string(rotation);
    }
    return out;
}

DihedralElement compose(const DihedralElement& a, const DihedralElement& b)
{
    std::vector<Symbol> images;
    for (Symbol k = 1; k <= a.n; ++k) {
        images.push_back(a(b(k)));
    }
    return *DihedralElement::from_images(a.n, images);
}

std::vector<DihedralElement> dihedral_group(int n)
{
    std::vector<DihedralElement> out;
    for (int i = 0; i < 2 * n; ++i) {
        out.push_back(DihedralElement::from_index(n, i));
    }
    return out;
}

Address map_symbols(const Address& a, const DihedralElement& sigma)
{
    auto map_word = [&](const Word& w) {
        std::vector<Symbol> out;
        for (Symbol s : w.symbols()) {
            out.push_back(sigma(s));
        }
        return Word(std::move(out));
    };
    return Address(map_word(a.preperiod()), map_word(a.period()));
}

NecklaceSpec apply_sigma(const NecklaceSpec& spec, const DihedralElement& sigma)
{
    const int n = spec.n();
    const DihedralElement inv = sigma.inverse();
    std::vector<GlueRule> glue;
    for (Symbol k = 1; k <= n; ++k) {
        if (sigma.orientation_preserving()) {
            const GlueRule& old = spec.rule(sigma(k));
            glue.push_back({k, map_symbols(old.u, inv), map_symbols(old.v, inv)});
        } else {
            // σ(k+1) = σ(k) - 1, so the old node between them is z_{σ(k)-1}.
            const GlueRule& old = spec.rule(cyclic_prev(sigma(k), n));
            glue.push_back({k, map_symbols(old.v, inv), map_symbols(old.u, inv)});
        }
    }
    const bool identity = sigma == DihedralElement::identity(n);
    return NecklaceSpec(n, std::move(glue), identity ? spec.label() : spec.label() + "∘" + sigma.to_string());
}

bool same_identifications(const NecklaceSpec& a, const NecklaceSpec& b, int depth)
{
    if (a.n() != b.n()) {
        return false;
    }
    auto holds_in = [depth](const NecklaceSpec& rules, const NecklaceSpec& closure) {
        const Identifier id(closure);
        for (Symbol k = 1; k <= rules.n(); ++k) {
            if (!id.point_class(rules.left_side(k), depth).contains(rules.right_side(k))) {
                return false;
            }
        }
        return true;
    };
    return holds_in(a, b) && holds_in(b, a);
}

IsomorphismResult spec_isomorphic(const NecklaceSpec& a, const NecklaceSpec& b, int depth)
{
    IsomorphismResult out;
    if (a.n() != b.n()) {
        out.reason = "m=n fails: " + std::to_string(a.n()) + " maps vs " + std::to_string(b.n());
        return out;
    }
    for (const DihedralElement& g : dihedral_group(a.n())) {
        if (same_identifications(apply_sigma(a, g), b, depth)) {
            out.sigma = g;
            out.reason = "identifications agree under " + g.to_string();
            return out;
        }
    }
    out.reason = "no relabeling in the dihedral group matches the identifications";
    return out;
}

std::string to_string(Cardinality c)
{
    switch (c) {
    case Cardinality::empty:
        return "empty";
    case Cardinality::finite:
        return "finite";
    case Cardinality::uncountable:
        return "uncountable";
    case Cardinality::unknown:
        return "unknown";
    }
    return "unknown";
}

std::vector<std::size_t> RigidMapClosure::live_choices(std::size_t s) const
{
    std::vector<std::size_t> out;
    const ClosureState& st = states[s];
    for (std::size_t c = 0; c < st.choices.size(); ++c) {
        const auto& children = st.choices[c].second;
        if (std::all_of(children.begin(), children.end(), [&](std::size_t child) { return states[child].live; })) {
            out.push_back(c);
        }
    }
    return out;
}

namespace {

/// Canonical forms and copy-relative views of points of one spec.
class PointOracle {
public:
    explicit PointOracle(const NecklaceSpec& spec) : id_(spec) { }

    const NecklaceSpec& spec() const { return id_.spec(); }

    const PointClass& point(const Address& a)
    {
        if (auto it = by_address_.find(a); it != by_address_.end()) {
            return classes_[it->second];
        }
        PointClass c = id_.point_class(a, kDefaultClassDepth + static_cast<int>(a.preperiod().size()));
        const std::size_t idx = classes_.size();
        for (const Address& r : c.representatives) {
            by_address_.emplace(r, idx);
        }
        classes_.push_back(std::move(c));
        return classes_[idx];
    }

    Address canonical(const Address& a) { return point(a).canonical(); }

    std::vector<Symbol> firsts(const Address& a) { return point(a).first_symbols(); }

    /// The point as seen inside 1-level copy k, if it lies there.
    std::optional<Address> strip(const Address& a, Symbol k)
    {
        for (const Address& r : point(a).representatives) {
            if (r.at(0) == k) {
                return canonical(r.suffix(1));
            }
        }
        return std::nullopt;
    }

    /// The common point of adjacent 1-level copies a and b.
    Address node_between(Symbol a, Symbol b)
    {
        const int n = spec().n();
        return canonical(b == cyclic_next(a, n) ? spec().left_side(a) : spec().left_side(b));
    }

private:
    Identifier id_;
    std::deque<PointClass> classes_;
    std::unordered_map<Address, std::size_t> by_address_;
};

/// Child contexts for `sigma` at a copy with pins `context`, or nullopt when
/// the pins rule sigma out.
std::optional<std::vector<std::vector<Pin>>> child_contexts(PointOracle& f, PointOracle& g, const std::vector<Pin>& context,
                                                            const DihedralElement& sigma)
{
    const int n = f.spec().n();
    for (const Pin& pin : context) {
        std::vector<Symbol> mapped;
        for (Symbol s : f.firsts(pin.from)) {
            mapped.push_back(sigma(s));
        }
        std::sort(mapped.begin(), mapped.end());
        if (mapped != g.firsts(pin.to)) {
            return std::nullopt;
        }
    }
    std::vector<std::vector<Pin>> out;
    for (Symbol k = 1; k <= n; ++k) {
        const Symbol gk = sigma(k);
        std::vector<Pin> pins;
        for (const Pin& pin : context) {
            if (auto from = f.strip(pin.from, k)) {
                pins.push_back({*from, *g.strip(pin.to, gk)});
            }
        }
        const Symbol prev = cyclic_prev(k, n);
        const Symbol next = cyclic_next(k, n);
        pins.push_back({*f.strip(f.node_between(prev, k), k), *g.strip(g.node_between(sigma(prev), gk), gk)});
        pins.push_back({*f.strip(f.node_between(k, next), k), *g.strip(g.node_between(gk, sigma(next)), gk)});
        std::sort(pins.begin(), pins.end());
        pins.erase(std::unique(pins.begin(), pins.end()), pins.end());
        for (std::size_t i = 1; i < pins.size(); ++i) {
            if (pins[i].from == pins[i - 1].from) {
                return std::nullopt;
            }
        }
        std::vector<Address> targets;
        for (const Pin& p : pins) {
            targets.push_back(p.to);
        }
        std::sort(targets.begin(), targets.end());
        if (std::adjacent_find(targets.begin(), targets.end()) != targets.end()) {
            return std::nullopt;
        }
        out.push_back(std::move(pins));
    }
    return out;
}

} // namespace

RigidMapClosure rigid_maps(const NecklaceSpec& F, const NecklaceSpec& G, int depth)
{
    RigidMapClosure closure;
    closure.n = F.n();
    closure.depth = depth;
    if (F.n() != G.n()) {
        closure.n_mismatch = true;
        closure.closed = true;
        closure.cardinality = Cardinality::empty;
        closure.count = 0;
        return closure;
    }
    const int n = F.n();
    PointOracle f(F);
    PointOracle g(G);
    const auto group = dihedral_group(n);

    std::map<std::vector<Pin>, std::size_t> index;
    auto intern = [&](std::vector<Pin> ctx, int d) {
        auto [it, inserted] = index.emplace(ctx, closure.states.size());
        if (inserted) {
            ClosureState st;
            st.context = std::move(ctx);
            st.depth = d;
            closure.states.push_back(std::move(st));
        }
        return it->second;
    };
    intern({}, 0);
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        const std::size_t s = queue.front();
        queue.pop_front();
        if (closure.states[s].depth >= depth) {
            continue;
        }
        const int d = closure.states[s].depth;
        const std::vector<Pin> context = closure.states[s].context;
        std::vector<std::pair<int, std::vector<std::size_t>>> choices;
        for (const DihedralElement& sigma : group) {
            auto children = child_contexts(f, g, context, sigma);
            if (!children) {
                continue;
            }
            std::vector<std::size_t> ids;
            for (auto& ctx : *children) {
                const std::size_t before = closure.states.size();
                const std::size_t id = intern(std::move(ctx), d + 1);
                if (id == before) {
                    queue.push_back(id);
                }
                ids.push_back(id);
            }
            choices.emplace_back(sigma.index(), std::move(ids));
        }
        closure.states[s].choices = std::move(choices);
        closure.states[s].expanded = true;
    }
    closure.closed = std::all_of(closure.states.begin(), closure.states.end(), [](const ClosureState& st) { return st.expanded; });

    // Greatest fixed point: a state stays live while some choice keeps all
    // children live. Unexpanded states are assumed live.
    for (ClosureState& st : closure.states) {
        st.live = true;
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t s = 0; s < closure.states.size(); ++s) {
            if (closure.states[s].live && closure.states[s].expanded && closure.live_choices(s).empty()) {
                closure.states[s].live = false;
                changed = true;
            }
        }
    }

    if (!closure.states[0].live) {
        closure.cardinality = closure.closed ? Cardinality::empty : Cardinality::unknown;
        closure.count = 0;
        return closure;
    }
    for (std::size_t c : closure.live_choices(0)) {
        closure.root_choices.push_back(closure.states[0].choices[c].first);
    }

    // Reachable part of the live automaton.
    const std::size_t S = closure.states.size();
    std::vector<std::vector<std::size_t>> edges(S);
    std::vector<char> reachable(S, 0);
    std::vector<std::size_t> stack{0};
    reachable[0] = 1;
    while (!stack.empty()) {
        const std::size_t s = stack.back();
        stack.pop_back();
        for (std::size_t c : closure.live_choices(s)) {
            for (std::size_t child : closure.states[s].choices[c].second) {
                edges[s].push_back(child);
                if (!reachable[child]) {
                    reachable[child] = 1;
                    stack.push_back(child);
                }
            }
        }
    }
    for (std::size_t s = 1; s < S; ++s) {
        if (reachable[s] && closure.live_choices(s).size() >= 2) {
            closure.branching_states.push_back(s);
        }
    }
    if (!closure.closed) {
        closure.cardinality = Cardinality::unknown;
        return closure;
    }

    // States on a cycle, and everything below them, occur infinitely often in
    // a map; a branching state there gives uncountably many maps.
    std::vector<char> recurrent(S, 0);
    for (std::size_t s = 0; s < S; ++s) {
        if (!reachable[s]) {
            continue;
        }
        std::vector<char> seen(S, 0);
        std::vector<std::size_t> work(edges[s].begin(), edges[s].end());
        while (!work.empty()) {
            const std::size_t t = work.back();
            work.pop_back();
            if (t == s) {
                recurrent[s] = 1;
                break;
            }
            if (!seen[t]) {
                seen[t] = 1;
                work.insert(work.end(), edges[t].begin(), edges[t].end());
            }
        }
    }
    std::vector<char> below_cycle(S, 0);
    for (std::size_t s = 0; s < S; ++s) {
        if (recurrent[s] && !below_cycle[s]) {
            std::vector<std::size_t> work{s};
            below_cycle[s] = 1;
            while (!work.empty()) {
                const std::size_t t = work.back();
                work.pop_back();
                for (std::size_t u : edges[t]) {
                    if (!below_cycle[u]) {
                        below_cycle[u] = 1;
                        work.push_back(u);
                    }
                }
            }
        }
    }
    if (std::any_of(closure.branching_states.begin(), closure.branching_states.end(),
                    [&](std::size_t s) { return below_cycle[s]; })) {
        closure.cardinality = Cardinality::uncountable;
        return closure;
    }

    // Every branching state occurs finitely often; count the trees.
    std::vector<std::optional<std::uint64_t>> memo(S);
    std::function<std::uint64_t(std::size_t)> count = [&](std::size_t s) -> std::uint64_t {
        if (below_cycle[s]) {
            return 1;
        }
        if (memo[s]) {
            return *memo[s];
        }
        std::uint64_t total = 0;
        for (std::size_t c : closure.live_choices(s)) {
            std::uint64_t product = 1;
            for (std::size_t child : closure.states[s].choices[c].second) {
                product *= count(child);
            }
            total += product;
        }
        memo[s] = total;
        return total;
    };
    closure.count = count(0);
    closure.cardinality = Cardinality::finite;
    return closure;
}

std::vector<SigmaTable> map_tables(const RigidMapClosure& closure, int depth, std::size_t cap)
{
    std::vector<SigmaTable> out;
    if (closure.n_mismatch || closure.states.empty() || !closure.states[0].live) {
        return out;
    }
    const int n = closure.n;
    // Nodes are processed breadth first; each fixes the σ at one copy.
    std::vector<std::pair<Word, std::size_t>> nodes{{Word(), 0}};
    SigmaTable table;
    std::function<void(std::size_t)> visit = [&](std::size_t i) {
        if (i == nodes.size()) {
            if (out.size() >= cap) {
                throw CapExceeded("more than " + std::to_string(cap) + " truncated map tables");
            }
            out.push_back(table);
            return;
        }
        const auto [word, state] = nodes[i];
        const ClosureState& st = closure.states[state];
        if (!st.expanded) {
            throw CapExceeded("map tables need copies below the closure depth");
        }
        for (std::size_t c : closure.live_choices(state)) {
            const auto& [group_index, children] = st.choices[c];
            table[word] = DihedralElement::from_index(n, group_index);
            const std::size_t mark = nodes.size();
            if (static_cast<int>(word.size()) + 1 < depth) {
                for (Symbol k = 1; k <= n; ++k) {
                    nodes.emplace_back(word + k, children[k - 1]);
                }
            }
            visit(i + 1);
            nodes.resize(mark);
        }
        table.erase(word);
    };
    visit(0);
    return out;
}

bool admits(const RigidMapClosure& closure, const SigmaTable& table)
{
    if (closure.n_mismatch || closure.states.empty() || !closure.states[0].live) {
        return false;
    }
    std::vector<std::pair<Word, std::size_t>> stack{{Word(), 0}};
    while (!stack.empty()) {
        const auto [word, state] = stack.back();
        stack.pop_back();
        const auto it = table.find(word);
        if (it == table.end()) {
            continue;
        }
        const ClosureState& st = closure.states[state];
        bool found = false;
        for (std::size_t c : closure.live_choices(state)) {
            if (st.choices[c].first == it->second.index()) {
                for (Symbol k = 1; k <= closure.n; ++k) {
                    stack.emplace_back(word + k, st.choices[c].second[k - 1]);
                }
                found = true;
                break;
            }
        }
        if (!found) {
            return false;
        }
    }
    return true;
}

Word image_word(const SigmaTable& table, const Word& w)
{
    Word prefix;
    Word out;
    for (Symbol s : w.symbols()) {
        out.push_back(table.at(prefix)(s));
        prefix.push_back(s);
    }
    return out;
}

SigmaTable compose_tables(const SigmaTable& outer, const SigmaTable& inner, int depth)
{
    SigmaTable out;
    for (const auto& [w, sigma] : inner) {
        if (static_cast<int>(w.size()) < depth) {
            out[w] = compose(outer.at(image_word(inner, w)), sigma);
        }
    }
    return out;
}

SigmaTable inverse_table(const SigmaTable& table, int depth)
{
    SigmaTable out;
    for (const auto& [w, sigma] : table) {
        if (static_cast<int>(w.size()) < depth) {
            out[image_word(table, w)] = sigma.inverse();
        }
    }
    return out;
}

GroupCheck check_group_property(const RigidMapClosure& closure, int depth)
{
    GroupCheck out;
    out.depth = depth;
    const auto tables = map_tables(closure, depth);
    out.tables = tables.size();
    const std::set<SigmaTable> all(tables.begin(), tables.end());
    SigmaTable identity;
    for (const auto& [w, sigma] : tables.empty() ? SigmaTable() : tables.front()) {
        identity[w] = DihedralElement::identity(closure.n);
    }
    out.contains_identity = !tables.empty() && all.contains(identity);
    out.closed_under_inverse = std::all_of(tables.begin(), tables.end(),
                                           [&](const SigmaTable& t) { return all.contains(inverse_table(t, depth)); });
    out.closed_under_composition = true;
    for (const SigmaTable& a : tables) {
        for (const SigmaTable& b : tables) {
            if (!all.contains(compose_tables(a, b, depth))) {
                out.closed_under_composition = false;
                return out;
            }
        }
    }
    return out;
}

std::optional<Address> map_address(const RigidMapClosure& closure, int root_choice, const Address& a)
{
    if (closure.n_mismatch || closure.states.empty()) {
        return std::nullopt;
    }
    const int n = closure.n;
    const std::size_t pre = a.preperiod().size();
    const std::size_t per = a.period().size();
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
    std::vector<Symbol> out;
    std::size_t state = 0;
    for (std::size_t i = 0;; ++i) {
        const std::size_t phase = i < pre ? i : pre + (i - pre) % per;
        if (i >= pre) {
            auto [it, inserted] = seen.emplace(std::make_pair(state, phase), i);
            if (!inserted) {
                const std::size_t start = it->second;
                return Address(Word(std::vector<Symbol>(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(start))),
                               Word(std::vector<Symbol>(out.begin() + static_cast<std::ptrdiff_t>(start), out.end())));
            }
        }
        const ClosureState& st = closure.states[state];
        if (!st.expanded) {
            return std::nullopt;
        }
        const auto live = closure.live_choices(state);
        std::optional<std::size_t> pick;
        if (i == 0) {
            for (std::size_t c : live) {
                if (st.choices[c].first == root_choice) {
                    pick = c;
                }
            }
        } else if (live.size() == 1) {
            pick = live.front();
        }
        if (!pick) {
            return std::nullopt;
        }
        const DihedralElement sigma = DihedralElement::from_index(n, st.choices[*pick].first);
        const Symbol s = a.at(i);
        out.push_back(sigma(s));
        state = st.choices[*pick].second[s - 1];
    }
}

UniquenessReport verify_nifs_uniqueness(const NecklaceSpec& spec, int level_cap, int threads)
{
    UniquenessReport report;
    if (!check_goodness(spec).good) {
        report.skipped = true;
        report.warning = "spec is not good; uniqueness of the NIFS is only claimed for good necklaces";
        return report;
    }
    SurveyOptions options;
    options.level_cap = level_cap;
    options.cut_point_level = level_cap;
    options.threads = threads;

    auto pair_keys = [](const TopologyEngine& engine, const ExtremalSurvey& survey, const DihedralElement* relabel) {
        std::set<std::pair<Address, Address>> keys;
        for (const CandidatePair& p : survey.extremal_pairs) {
            Address a = p.a.canonical();
            Address b = p.b.canonical();
            if (relabel) {
                a = engine.point(map_symbols(a, *relabel)).canonical();
                b = engine.point(map_symbols(b, *relabel)).canonical();
            }
            if (sequence_less(b, a)) {
                std::swap(a, b);
            }
            keys.emplace(a, b);
        }
        return keys;
    };

    const TopologyEngine base(spec);
    const ExtremalSurvey reference = survey_extremal(base, options);
    const auto reference_keys = pair_keys(base, reference, nullptr);

    report.pass = true;
    for (const DihedralElement& sigma : dihedral_group(spec.n())) {
        UniquenessEntry e;
        e.sigma = sigma;
        const NecklaceSpec relabeled = apply_sigma(spec, sigma);
        e.isomorphic = spec_isomorphic(relabeled, spec).sigma.has_value();
        e.good = check_goodness(relabeled).good;
        const TopologyEngine engine(relabeled);
        const ExtremalSurvey survey = survey_extremal(engine, options);
        // New symbol k stands for old symbol σ(k).
        e.survey_matches = survey.N2 == reference.N2 && pair_keys(base, survey, &sigma) == reference_keys;
        report.pass = report.pass && e.isomorphic && e.good && e.survey_matches;
        report.entries.push_back(e);
    }
    return report;
}

EmbeddingCheck embedding_image_copy_check(const NecklaceSpec& F, const Word& w, const SigmaTable& map, int depth)
{
    EmbeddingCheck out;
    out.depth = depth;
    const int n = F.n();
    for (int j = 0; j <= depth; ++j) {
        std::set<Word> image;
        std::set<Word> copy;
        std::vector<Symbol> v(static_cast<std::size_t>(j), 1);
        while (true) {
            const Word word(v);
            image.insert(w + image_word(map, word));
            copy.insert(w + word);
            int i = j - 1;
            while (i >= 0 && v[static_cast<std::size_t>(i)] == n) {
                v[static_cast<std::size_t>(i)] = 1;
                --i;
            }
            if (i < 0) {
                break;
            }
            ++v[static_cast<std::size_t>(i)];
        }
        if (image != copy) {
            out.mismatches.push_back("level " + std::to_string(j) + ": image has " + std::to_string(image.size())
                                     + " cylinders, copy has " + std::to_string(copy.size()));
        }
    }
    out.pass = out.mismatches.empty();
    return out;
}

} // namespace necklace
