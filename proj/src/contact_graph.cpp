#include "necklace/contact_graph.hpp"

#include "necklace/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <tuple>

namespace necklace {

std::size_t default_max_cells()
{
    constexpr std::size_t fallback = 400000;
    if (const char* env = std::getenv("NECKLACE_MAX_CELLS")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return fallback;
}

namespace {

std::size_t checked_power(int n, int m, std::size_t cap)
{
    std::size_t out = 1;
    for (int i = 0; i < m; ++i) {
        if (out > cap / static_cast<std::size_t>(n)) {
            return cap + 1;
        }
        out *= static_cast<std::size_t>(n);
    }
    return out;
}

std::uint32_t power(int n, int m)
{
    std::uint32_t out = 1;
    for (int i = 0; i < m; ++i) {
        out *= static_cast<std::uint32_t>(n);
    }
    return out;
}

} // namespace

ContactGraph::ContactGraph(int n, int level, std::vector<ContactPoint> contacts)
    : n_(n), level_(level), cylinder_count_(power(n, level)), contacts_(std::move(contacts))
{
    std::vector<std::uint32_t> degree(cylinder_count_ + 1, 0);
    for (const ContactPoint& c : contacts_) {
        for (std::uint32_t cyl : c.incident) {
            ++degree[cyl + 1];
        }
    }
    std::partial_sum(degree.begin(), degree.end(), degree.begin());
    adjacency_offsets_ = degree;
    adjacency_.resize(adjacency_offsets_.back());
    std::vector<std::uint32_t> fill(adjacency_offsets_.begin(), adjacency_offsets_.end() - 1);
    for (std::uint32_t id = 0; id < contacts_.size(); ++id) {
        for (std::uint32_t cyl : contacts_[id].incident) {
            adjacency_[fill[cyl]++] = id;
        }
        for (const Address& a : contacts_[id].point.representatives) {
            by_representative_.emplace(a, id);
        }
    }
}

std::span<const std::uint32_t> ContactGraph::contacts_of(std::uint32_t c) const
{
    return std::span<const std::uint32_t>(adjacency_).subspan(adjacency_offsets_[c], adjacency_offsets_[c + 1] - adjacency_offsets_[c]);
}

Word ContactGraph::cylinder_word(std::uint32_t index) const
{
    std::vector<Symbol> out(static_cast<std::size_t>(level_));
    for (int i = level_ - 1; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = static_cast<Symbol>(index % static_cast<std::uint32_t>(n_) + 1);
        index /= static_cast<std::uint32_t>(n_);
    }
    return Word(std::move(out));
}

std::uint32_t ContactGraph::cylinder_index(const Word& w) const
{
    std::uint32_t idx = 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(level_); ++i) {
        idx = idx * static_cast<std::uint32_t>(n_) + (w[i] - 1u);
    }
    return idx;
}

std::pair<std::uint32_t, std::uint32_t> ContactGraph::cylinders_in(const Word& w) const
{
    if (w.size() > static_cast<std::size_t>(level_)) {
        const std::uint32_t c = cylinder_index(w.prefix(static_cast<std::size_t>(level_)));
        return {c, c + 1};
    }
    std::uint32_t idx = 0;
    for (Symbol s : w.symbols()) {
        idx = idx * static_cast<std::uint32_t>(n_) + (s - 1u);
    }
    const std::uint32_t span = power(n_, level_ - static_cast<int>(w.size()));
    return {idx * span, (idx + 1) * span};
}

std::optional<std::uint32_t> ContactGraph::find_contact(const PointClass& p) const
{
    for (const Address& a : p.representatives) {
        if (auto it = by_representative_.find(a); it != by_representative_.end()) {
            return it->second;
        }
    }
    return std::nullopt;
}

ContactGraph build_contact_graph(const NecklaceSpec& spec, int m, const GraphOptions& options)
{
    if (m < 0) {
        throw Error("contact graph level must be >= 0");
    }
    const int n = spec.n();
    const std::size_t cells = checked_power(n, m, options.max_cells);
    if (cells > options.max_cells) {
        throw CapExceeded("level " + std::to_string(m) + " needs " + std::to_string(n) + "^" + std::to_string(m)
                          + " cylinders, above the cap of " + std::to_string(options.max_cells));
    }
    const Identifier id(spec, options.class_cap);
    const int depth = std::max(options.class_depth, m + static_cast<int>(spec.max_side_length()) + 2);

    std::unordered_map<Address, std::size_t> seen;
    std::vector<ContactPoint> contacts;
    for (int len = 0; len < m; ++len) {
        std::vector<Symbol> p(static_cast<std::size_t>(len), 1);
        while (true) {
            const Word prefix(p);
            for (Symbol k = 1; k <= n; ++k) {
                Address seed = spec.left_side(k).prepend(prefix);
                if (seen.contains(seed)) {
                    continue;
                }
                ContactPoint cp;
                cp.point = id.point_class(seed, depth);
                std::set<std::uint32_t> incident;
                for (const Address& a : cp.point.representatives) {
                    std::uint32_t idx = 0;
                    for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) {
                        idx = idx * static_cast<std::uint32_t>(n) + (a.at(i) - 1u);
                    }
                    incident.insert(idx);
                    seen.emplace(a, contacts.size());
                }
                cp.incident.assign(incident.begin(), incident.end());
                contacts.push_back(std::move(cp));
            }
            // Next word of this length in lexicographic order.
            int i = len - 1;
            while (i >= 0 && p[static_cast<std::size_t>(i)] == n) {
                p[static_cast<std::size_t>(i)] = 1;
                --i;
            }
            if (i < 0) {
                break;
            }
            ++p[static_cast<std::size_t>(i)];
        }
    }
    std::erase_if(contacts, [](const ContactPoint& c) { return c.incident.size() < 2; });
    std::sort(contacts.begin(), contacts.end(),
              [](const ContactPoint& a, const ContactPoint& b) { return sequence_less(a.point.canonical(), b.point.canonical()); });
    return ContactGraph(n, m, std::move(contacts));
}

std::vector<std::uint32_t> articulation_contacts(const ContactGraph& g, const std::vector<char>& in_set)
{
    // Bipartite graph: local vertices 0..C-1 are cylinders, C.. are contacts.
    std::vector<std::uint32_t> local(g.cylinder_count(), UINT32_MAX);
    std::vector<std::uint32_t> cylinders;
    for (std::uint32_t c = 0; c < g.cylinder_count(); ++c) {
        if (in_set[c]) {
            local[c] = static_cast<std::uint32_t>(cylinders.size());
            cylinders.push_back(c);
        }
    }
    const std::size_t C = cylinders.size();
    std::vector<std::uint32_t> contact_ids;
    std::vector<std::vector<std::uint32_t>> adj(C);
    for (std::uint32_t id = 0; id < g.contacts().size(); ++id) {
        std::vector<std::uint32_t> members;
        for (std::uint32_t cyl : g.contacts()[id].incident) {
            if (in_set[cyl]) {
                members.push_back(local[cyl]);
            }
        }
        if (members.size() < 2) {
            continue;
        }
        const auto v = static_cast<std::uint32_t>(C + contact_ids.size());
        contact_ids.push_back(id);
        adj.emplace_back(members);
        for (std::uint32_t c : members) {
            adj[c].push_back(v);
        }
    }

    const std::size_t V = adj.size();
    std::vector<std::uint32_t> disc(V, 0), low(V, 0), parent(V, UINT32_MAX), next_edge(V, 0);
    std::vector<char> is_cut(V, 0);
    std::uint32_t timer = 0;
    std::vector<std::uint32_t> stack;
    for (std::uint32_t root = 0; root < V; ++root) {
        if (disc[root] != 0) {
            continue;
        }
        std::size_t root_children = 0;
        disc[root] = low[root] = ++timer;
        stack.push_back(root);
        while (!stack.empty()) {
            const std::uint32_t v = stack.back();
            if (next_edge[v] < adj[v].size()) {
                const std::uint32_t w = adj[v][next_edge[v]++];
                if (disc[w] == 0) {
                    parent[w] = v;
                    disc[w] = low[w] = ++timer;
                    stack.push_back(w);
                    if (v == root) {
                        ++root_children;
                    }
                } else if (w != parent[v]) {
                    low[v] = std::min(low[v], disc[w]);
                }
                continue;
            }
            stack.pop_back();
            const std::uint32_t p = parent[v];
            if (p != UINT32_MAX) {
                low[p] = std::min(low[p], low[v]);
                if (p != root && low[v] >= disc[p]) {
                    is_cut[p] = 1;
                }
            }
        }
        if (root_children >= 2) {
            is_cut[root] = 1;
        }
    }
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < contact_ids.size(); ++i) {
        if (is_cut[C + i]) {
            out.push_back(contact_ids[i]);
        }
    }
    return out;
}

Word ComponentSet::cylinder_word(std::uint32_t index) const
{
    std::vector<Symbol> out(static_cast<std::size_t>(stable_at));
    for (int i = stable_at - 1; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = static_cast<Symbol>(index % static_cast<std::uint32_t>(n) + 1);
        index /= static_cast<std::uint32_t>(n);
    }
    return Word(std::move(out));
}

std::vector<Word> ComponentSet::covering_words(std::size_t i) const
{
    const auto nn = static_cast<std::uint32_t>(n);
    // full[l] = level-l words all of whose level-m descendants are present.
    std::vector<std::vector<std::uint32_t>> full(static_cast<std::size_t>(stable_at) + 1);
    full[static_cast<std::size_t>(stable_at)] = components[i].cylinders;
    for (int l = stable_at; l > 0; --l) {
        std::vector<std::uint32_t>& out = full[static_cast<std::size_t>(l - 1)];
        const auto& cur = full[static_cast<std::size_t>(l)];
        for (std::size_t a = 0; a < cur.size();) {
            const std::uint32_t parent = cur[a] / nn;
            std::size_t b = a;
            while (b < cur.size() && cur[b] / nn == parent) {
                ++b;
            }
            if (b - a == nn) {
                out.push_back(parent);
            }
            a = b;
        }
    }
    auto word_of = [&](std::uint32_t idx, int level) {
        std::vector<Symbol> w(static_cast<std::size_t>(level));
        for (int k = level - 1; k >= 0; --k) {
            w[static_cast<std::size_t>(k)] = static_cast<Symbol>(idx % nn + 1);
            idx /= nn;
        }
        return Word(std::move(w));
    };
    std::vector<Word> words;
    for (int l = 0; l <= stable_at; ++l) {
        for (std::uint32_t idx : full[static_cast<std::size_t>(l)]) {
            const bool parent_full = l > 0 && std::binary_search(full[static_cast<std::size_t>(l - 1)].begin(),
                                                                  full[static_cast<std::size_t>(l - 1)].end(), idx / nn);
            if (!parent_full) {
                words.push_back(word_of(idx, l));
            }
        }
    }
    std::sort(words.begin(), words.end());
    return words;
}

std::vector<std::size_t> ComponentSet::ncp_list() const
{
    std::vector<std::size_t> out;
    for (const Component& c : components) {
        out.push_back(c.ncp.value_or(0));
    }
    return out;
}

TopologyEngine::TopologyEngine(const NecklaceSpec& spec, GraphOptions options)
    : identifier_(spec, options.class_cap), options_(options)
{
}

PointClass TopologyEngine::point(const Address& a) const
{
    return identifier_.point_class(a, options_.class_depth + static_cast<int>(a.preperiod().size()));
}

std::shared_ptr<const ContactGraph> TopologyEngine::graph(int m) const
{
    std::promise<std::shared_ptr<const ContactGraph>> promise;
    std::shared_future<std::shared_ptr<const ContactGraph>> future;
    bool build = false;
    {
        const std::lock_guard lock(mutex_);
        auto it = graphs_.find(m);
        if (it == graphs_.end()) {
            future = promise.get_future().share();
            graphs_.emplace(m, future);
            build = true;
        } else {
            future = it->second;
        }
    }
    if (build) {
        try {
            promise.set_value(std::make_shared<const ContactGraph>(build_contact_graph(spec(), m, options_)));
        } catch (...) {
            promise.set_exception(std::current_exception());
        }
    }
    return future.get();
}

namespace {

struct LevelResult {
    ComponentSet set;
    bool separated = true;
};

using Signature = std::vector<std::tuple<std::vector<std::uint32_t>, std::vector<std::size_t>, std::size_t>>;

Signature signature_of(const ComponentSet& set, int base_level)
{
    const std::uint32_t scale = power(set.n, set.stable_at - base_level);
    Signature sig;
    for (const Component& c : set.components) {
        std::vector<std::uint32_t> ancestors;
        for (std::uint32_t cyl : c.cylinders) {
            ancestors.push_back(cyl / scale);
        }
        ancestors.erase(std::unique(ancestors.begin(), ancestors.end()), ancestors.end());
        sig.emplace_back(std::move(ancestors), c.boundary, c.ncp.value_or(0));
    }
    std::sort(sig.begin(), sig.end());
    return sig;
}

LevelResult analyze_level(const ContactGraph& g, const std::vector<PointClass>& removed, const std::vector<Word>& excluded,
                          bool with_ncp)
{
    const int m = g.level();
    const std::size_t N = g.cylinder_count();
    LevelResult out;
    out.set.n = g.n();
    out.set.removed = removed;
    out.set.excluded = excluded;
    out.set.stable_at = m;
    out.set.with_ncp = with_ncp;

    std::vector<char> in_universe(N, 1);
    for (const Word& w : excluded) {
        const auto [lo, hi] = g.cylinders_in(w);
        std::fill(in_universe.begin() + lo, in_universe.begin() + hi, 0);
    }

    // Each removed point is either a contact vertex or sits inside one cylinder.
    std::vector<char> removed_contact(g.contacts().size(), 0);
    std::vector<std::vector<std::uint32_t>> touching(removed.size());
    std::vector<std::uint8_t> hits(N, 0);
    for (std::size_t i = 0; i < removed.size(); ++i) {
        if (auto id = g.find_contact(removed[i])) {
            removed_contact[*id] = 1;
            touching[i] = g.contacts()[*id].incident;
        } else {
            const std::size_t jl = removed[i].junction_level();
            if (jl != 0 && jl <= static_cast<std::size_t>(m)) {
                throw Error("point " + removed[i].canonical().to_string(g.n()) + " missing from the level-"
                            + std::to_string(m) + " graph");
            }
            touching[i] = {g.cylinder_index(removed[i].canonical().prefix(static_cast<std::size_t>(m)))};
        }
        for (std::uint32_t c : touching[i]) {
            if (++hits[c] >= 2) {
                out.separated = false;
            }
        }
    }

    std::vector<std::int32_t> comp(N, -1);
    std::vector<std::uint32_t> stack;
    for (std::uint32_t start = 0; start < N; ++start) {
        if (!in_universe[start] || comp[start] != -1) {
            continue;
        }
        const auto cid = static_cast<std::int32_t>(out.set.components.size());
        Component component;
        comp[start] = cid;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::uint32_t c = stack.back();
            stack.pop_back();
            component.cylinders.push_back(c);
            for (std::uint32_t id : g.contacts_of(c)) {
                if (removed_contact[id]) {
                    continue;
                }
                for (std::uint32_t d : g.contacts()[id].incident) {
                    if (in_universe[d] && comp[d] == -1) {
                        comp[d] = cid;
                        stack.push_back(d);
                    }
                }
            }
        }
        std::sort(component.cylinders.begin(), component.cylinders.end());
        out.set.components.push_back(std::move(component));
    }

    for (std::size_t i = 0; i < removed.size(); ++i) {
        for (std::uint32_t c : touching[i]) {
            if (in_universe[c]) {
                auto& b = out.set.components[static_cast<std::size_t>(comp[c])].boundary;
                if (b.empty() || b.back() != i) {
                    b.push_back(i);
                }
            }
        }
    }
    for (Component& component : out.set.components) {
        std::sort(component.boundary.begin(), component.boundary.end());
        component.boundary.erase(std::unique(component.boundary.begin(), component.boundary.end()), component.boundary.end());
    }

    if (with_ncp) {
        std::vector<char> in_set(N, 0);
        for (Component& component : out.set.components) {
            for (std::uint32_t c : component.cylinders) {
                in_set[c] = 1;
            }
            component.ncp = articulation_contacts(g, in_set).size();
            for (std::uint32_t c : component.cylinders) {
                in_set[c] = 0;
            }
        }
    }
    return out;
}

} // namespace

ComponentSet TopologyEngine::escalate(const std::vector<PointClass>& S, const std::vector<Word>& excluded, bool with_ncp) const
{
    int deepest = 0;
    for (const PointClass& p : S) {
        deepest = std::max(deepest, static_cast<int>(p.junction_level()));
    }
    for (const Word& w : excluded) {
        deepest = std::max(deepest, static_cast<int>(w.size()));
    }
    const int m0 = std::max({options_.m0 > 0 ? options_.m0 : deepest + 2, deepest, 1});
    const int window = std::max(options_.window, 1);

    if (m0 + window - 1 > options_.max_level) {
        throw CapExceeded("escalation starts at level " + std::to_string(m0) + " and needs " + std::to_string(window)
                          + " levels, above the max level " + std::to_string(options_.max_level));
    }

    std::optional<Signature> previous;
    int streak = 0;
    std::vector<std::size_t> counts;
    for (int m = m0; m <= options_.max_level; ++m) {
        const auto g = graph(m);
        LevelResult r = analyze_level(*g, S, excluded, with_ncp);
        counts.push_back(r.set.components.size());
        if (r.separated) {
            Signature sig = signature_of(r.set, m0);
            streak = previous && *previous == sig ? streak + 1 : 1;
            previous = std::move(sig);
        } else {
            streak = 0;
            previous.reset();
        }
        if (streak >= window) {
            r.set.start_level = m0;
            r.set.counts_per_level = std::move(counts);
            return std::move(r.set);
        }
    }
    throw CapExceeded("components did not stabilize between levels " + std::to_string(m0) + " and "
                      + std::to_string(options_.max_level) + " (window " + std::to_string(window) + ")");
}

ComponentSet TopologyEngine::components_minus(const std::vector<PointClass>& S, bool with_ncp) const
{
    return escalate(S, {}, with_ncp);
}

ComponentSet TopologyEngine::components_without_copy(const Word& w, bool with_ncp) const
{
    return escalate({}, {w}, with_ncp);
}

std::size_t TopologyEngine::ncp_closure(const ComponentSet& set, std::size_t i) const
{
    if (set.with_ncp) {
        return set.components.at(i).ncp.value_or(0);
    }
    return escalate(set.removed, set.excluded, true).components.at(i).ncp.value_or(0);
}

CutVerdict TopologyEngine::is_cut(const std::vector<PointClass>& S) const
{
    if (S.empty()) {
        throw Error("is_cut: empty point set");
    }
    if (S.size() > 16) {
        throw CapExceeded("is_cut: minimality check limited to 16 points");
    }
    CutVerdict v;
    v.full = components_minus(S);
    v.cut = v.full.components.size() >= 2;
    const std::uint32_t all = (1u << S.size()) - 1;
    for (std::uint32_t mask = 1; mask < all; ++mask) {
        SubsetEvidence e;
        std::vector<PointClass> sub;
        for (std::size_t i = 0; i < S.size(); ++i) {
            if (mask & (1u << i)) {
                e.subset.push_back(i);
                sub.push_back(S[i]);
            }
        }
        e.components = components_minus(sub).components.size();
        if (e.components != 1) {
            v.cut = false;
        }
        v.evidence.push_back(std::move(e));
    }
    return v;
}

ComponentSet components_minus(const NecklaceSpec& spec, const std::vector<PointClass>& S, int m0, int window)
{
    GraphOptions options;
    options.m0 = m0;
    options.window = window;
    return TopologyEngine(spec, options).components_minus(S);
}

std::size_t ncp_closure(const NecklaceSpec& spec, const ComponentSet& set, std::size_t i)
{
    return TopologyEngine(spec).ncp_closure(set, i);
}

CutVerdict is_cut(const NecklaceSpec& spec, const std::vector<PointClass>& S)
{
    return TopologyEngine(spec).is_cut(S);
}

} // namespace necklace
