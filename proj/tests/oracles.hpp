#pragma once

// Independent reference computations used by the tests. They trade speed for
// obviousness and share only the address primitives with the library.

#include "necklace/catalog.hpp"
#include "necklace/contact_graph.hpp"
#include "necklace/errors.hpp"
#include "necklace/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using namespace necklace;

/// Naive fixed point: apply every rule in both directions at every position
/// <= depth until nothing new appears.
inline std::set<Address> closure(const NecklaceSpec& spec, const Address& a, int depth, std::size_t cap = 20000)
{
    std::set<Address> seen{a};
    bool grew = true;
    while (grew && seen.size() < cap) {
        grew = false;
        const std::vector<Address> snapshot(seen.begin(), seen.end());
        for (const Address& x : snapshot) {
            for (int p = 0; p <= depth; ++p) {
                const Address tail = x.suffix(static_cast<std::size_t>(p));
                const Word head = x.prefix(static_cast<std::size_t>(p));
                for (Symbol k = 1; k <= spec.n(); ++k) {
                    if (tail == spec.left_side(k)) {
                        grew |= seen.insert(spec.right_side(k).prepend(head)).second;
                    }
                    if (tail == spec.right_side(k)) {
                        grew |= seen.insert(spec.left_side(k).prepend(head)).second;
                    }
                }
            }
        }
    }
    return seen;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x)
    {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

/// Components of the cylinders with in_set[c] != 0, joined through contacts
/// not listed in `skip`.
inline std::size_t count_components(const ContactGraph& g, const std::vector<char>& in_set, const std::set<std::uint32_t>& skip = {})
{
    UnionFind uf(g.cylinder_count());
    for (std::uint32_t i = 0; i < g.contacts().size(); ++i) {
        if (skip.contains(i)) {
            continue;
        }
        std::vector<std::uint32_t> inc;
        for (std::uint32_t c : g.contacts()[i].incident) {
            if (in_set[c]) {
                inc.push_back(c);
            }
        }
        for (std::size_t j = 1; j < inc.size(); ++j) {
            uf.unite(inc[0], inc[j]);
        }
    }
    std::set<std::size_t> roots;
    for (std::uint32_t c = 0; c < g.cylinder_count(); ++c) {
        if (in_set[c]) {
            roots.insert(uf.find(c));
        }
    }
    return roots.size();
}

/// Contacts whose deletion raises the component count, by deleting each one.
inline std::vector<std::uint32_t> articulation(const ContactGraph& g, const std::vector<char>& in_set)
{
    const std::size_t base = count_components(g, in_set);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < g.contacts().size(); ++i) {
        std::size_t inside = 0;
        for (std::uint32_t c : g.contacts()[i].incident) {
            inside += in_set[c] ? 1 : 0;
        }
        if (inside >= 2 && count_components(g, in_set, {i}) > base) {
            out.push_back(i);
        }
    }
    return out;
}

inline std::vector<Word> words(int n, int m)
{
    std::vector<Word> out{Word()};
    for (int l = 0; l < m; ++l) {
        std::vector<Word> next;
        for (const Word& w : out) {
            for (Symbol k = 1; k <= n; ++k) {
                next.push_back(w + k);
            }
        }
        out = std::move(next);
    }
    return out;
}

/// Every tail of every address of a root main node. A point where two
/// level-m cylinders meet is w·t for one of these tails t.
inline std::vector<Address> contact_tails(const NecklaceSpec& spec)
{
    std::set<Address> tails;
    for (Symbol k = 1; k <= spec.n(); ++k) {
        for (const Address& r : closure(spec, spec.left_side(k), 10)) {
            for (std::size_t j = 1; j <= r.defining_length(); ++j) {
                tails.insert(r.suffix(j));
            }
        }
    }
    return {tails.begin(), tails.end()};
}

using IncidenceSets = std::vector<std::vector<std::uint32_t>>;

inline IncidenceSets sorted_incidence(const ContactGraph& g)
{
    IncidenceSets out;
    for (const ContactPoint& cp : g.contacts()) {
        out.push_back(cp.incident);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Level-m contact structure read off coordinates: cylinders meet where
/// their boundary points coincide.
inline IncidenceSets geometric_incidence(const GeometricIFS& ifs, const NecklaceSpec& spec, int m, double tol = 1e-9)
{
    struct Hit {
        Vec2 p;
        std::uint32_t cylinder;
    };
    std::vector<Hit> hits;
    const auto tails = contact_tails(spec);
    const auto all = words(spec.n(), m);
    for (std::uint32_t c = 0; c < all.size(); ++c) {
        for (const Address& t : tails) {
            hits.push_back({ifs.point(t.prepend(all[c])), c});
        }
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.p.x < b.p.x; });
    std::vector<char> used(hits.size(), 0);
    IncidenceSets out;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        if (used[i]) {
            continue;
        }
        std::set<std::uint32_t> cyl;
        for (std::size_t j = i; j < hits.size() && hits[j].p.x - hits[i].p.x < tol; ++j) {
            if (!used[j] && distance(hits[i].p, hits[j].p) < tol) {
                used[j] = 1;
                cyl.insert(hits[j].cylinder);
            }
        }
        if (cyl.size() >= 2) {
            out.emplace_back(cyl.begin(), cyl.end());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Same structure from the naive closure, for specs without coordinates.
inline IncidenceSets symbolic_incidence(const NecklaceSpec& spec, int m)
{
    const int depth = m + static_cast<int>(spec.max_side_length()) + 2;
    std::map<Address, std::set<std::uint32_t>> by_class;
    const auto tails = contact_tails(spec);
    const auto all = words(spec.n(), m);
    for (std::uint32_t c = 0; c < all.size(); ++c) {
        for (const Address& t : tails) {
            by_class[*closure(spec, t.prepend(all[c]), depth).begin()].insert(c);
        }
    }
    IncidenceSets out;
    for (const auto& [key, cyl] : by_class) {
        if (cyl.size() >= 2) {
            out.emplace_back(cyl.begin(), cyl.end());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Image of a level-m cylinder under per-copy σ choices given by `sigma_at`.
inline Word image(const std::function<DihedralElement(const Word&)>& sigma_at, const Word& w)
{
    Word src, dst;
    for (Symbol s : w.symbols()) {
        dst.push_back(sigma_at(src)(s));
        src.push_back(s);
    }
    return dst;
}

/// True when the cylinder map induced by `sigma_at` carries the level-m
/// contact structure of F onto that of G.
inline bool preserves_contacts(const IncidenceSets& f, const IncidenceSets& g, int n, int m,
                               const std::function<DihedralElement(const Word&)>& sigma_at)
{
    const auto all = words(n, m);
    std::map<Word, std::uint32_t> index;
    for (std::uint32_t c = 0; c < all.size(); ++c) {
        index[all[c]] = c;
    }
    IncidenceSets mapped;
    for (const auto& inc : f) {
        std::vector<std::uint32_t> img;
        for (std::uint32_t c : inc) {
            img.push_back(index.at(image(sigma_at, all[c])));
        }
        std::sort(img.begin(), img.end());
        mapped.push_back(img);
    }
    std::sort(mapped.begin(), mapped.end());
    return mapped == g;
}

/// Counts σ tables on copies of level < depth whose cylinder map preserves
/// the level-depth contact structure, by backtracking over all 2n choices
/// per copy. Each assignment is checked against the contacts it completes.
inline std::size_t count_rigid_tables(const NecklaceSpec& F, const NecklaceSpec& G, int depth)
{
    const int n = F.n();
    std::vector<IncidenceSets> f(static_cast<std::size_t>(depth) + 1);
    std::vector<std::set<std::vector<std::uint32_t>>> g(static_cast<std::size_t>(depth) + 1);
    std::vector<std::vector<Word>> level_words(static_cast<std::size_t>(depth) + 1);
    std::vector<std::map<Word, std::uint32_t>> index(static_cast<std::size_t>(depth) + 1);
    for (int l = 1; l <= depth; ++l) {
        f[l] = symbolic_incidence(F, l);
        const IncidenceSets gl = symbolic_incidence(G, l);
        g[l] = {gl.begin(), gl.end()};
        level_words[l] = words(n, l);
        for (std::uint32_t c = 0; c < level_words[l].size(); ++c) {
            index[l][level_words[l][c]] = c;
        }
    }
    std::vector<Word> nodes;
    for (int l = 0; l < depth; ++l) {
        for (const Word& w : words(n, l)) {
            nodes.push_back(w);
        }
    }
    const auto group = dihedral_group(n);
    std::map<Word, DihedralElement> table;
    auto sigma_at = [&](const Word& w) { return table.at(w); };
    auto consistent = [&](int l) {
        for (const auto& inc : f[l]) {
            std::vector<std::uint32_t> img;
            for (std::uint32_t c : inc) {
                const Word& w = level_words[l][c];
                if (!table.contains(w.prefix(w.size() - 1))) {
                    break;
                }
                img.push_back(index[l].at(image(sigma_at, w)));
            }
            if (img.size() != inc.size()) {
                continue;
            }
            std::sort(img.begin(), img.end());
            if (!g[l].contains(img)) {
                return false;
            }
        }
        return true;
    };
    std::size_t count = 0;
    std::function<void(std::size_t)> visit = [&](std::size_t i) {
        if (i == nodes.size()) {
            ++count;
            return;
        }
        for (const DihedralElement& s : group) {
            table[nodes[i]] = s;
            if (consistent(static_cast<int>(nodes[i].size()) + 1)) {
                visit(i + 1);
            }
        }
        table.erase(nodes[i]);
    };
    visit(0);
    return count;
}

/// Random glue tables over short eventually constant addresses, kept only
/// when they validate.
inline std::vector<NecklaceSpec> random_valid_specs(std::mt19937& rng, std::size_t count, std::size_t attempts = 4000)
{
    std::vector<NecklaceSpec> out;
    for (std::size_t t = 0; t < attempts && out.size() < count; ++t) {
        const int n = std::uniform_int_distribution<int>(3, 5)(rng);
        auto sym = [&] { return static_cast<Symbol>(std::uniform_int_distribution<int>(1, n)(rng)); };
        auto addr = [&] {
            Word pre;
            if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
                pre.push_back(sym());
            }
            return Address(pre, Word{sym()});
        };
        std::vector<GlueRule> glue;
        for (Symbol k = 1; k <= n; ++k) {
            glue.push_back({k, addr(), addr()});
        }
        try {
            NecklaceSpec spec(n, glue, "random");
            // Deep validation also rejects tables whose classes keep growing.
            if (validate_spec(spec, kDefaultClassDepth).pass) {
                check_goodness(spec);
                out.push_back(spec);
            }
        } catch (const Error&) {
        }
    }
    return out;
}

} // namespace oracle
