#include "necklace/spec.hpp"

#include "necklace/errors.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>

namespace necklace {

namespace {

void check_symbols(const Word& w, int n, const char* what, int k)
{
    for (Symbol s : w.symbols()) {
        if (s < 1 || s > n) {
            throw MalformedInput("glue rule " + std::to_string(k) + ": " + what + " symbol " + std::to_string(s)
                                 + " outside 1.." + std::to_string(n));
        }
    }
}

std::vector<Symbol> sorted_unique(std::vector<Symbol> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace

NecklaceSpec::NecklaceSpec(int n, std::vector<GlueRule> glue, std::string label)
    : n_(n), glue_(std::move(glue)), label_(std::move(label))
{
    if (n_ < 3 || n_ > kMaxSymbols) {
        throw MalformedInput("spec: n must lie in 3.." + std::to_string(kMaxSymbols) + ", got " + std::to_string(n_));
    }
    if (glue_.size() != static_cast<std::size_t>(n_)) {
        throw MalformedInput("spec: expected " + std::to_string(n_) + " glue rules, got " + std::to_string(glue_.size()));
    }
    std::sort(glue_.begin(), glue_.end(), [](const GlueRule& a, const GlueRule& b) { return a.k < b.k; });
    for (std::size_t i = 0; i < glue_.size(); ++i) {
        const GlueRule& r = glue_[i];
        if (r.k < 1 || r.k > n_) {
            throw MalformedInput("spec: glue index " + std::to_string(r.k) + " outside 1.." + std::to_string(n_));
        }
        if (i > 0 && glue_[i - 1].k == r.k) {
            throw MalformedInput("spec: duplicate glue index " + std::to_string(r.k));
        }
        check_symbols(r.u.preperiod(), n_, "u", r.k);
        check_symbols(r.u.period(), n_, "u", r.k);
        check_symbols(r.v.preperiod(), n_, "v", r.k);
        check_symbols(r.v.period(), n_, "v", r.k);
    }
    for (const GlueRule& r : glue_) {
        left_.push_back(r.u.prepend(Word{r.k}));
        right_.push_back(r.v.prepend(Word{cyclic_next(r.k, n_)}));
    }
}

std::size_t NecklaceSpec::max_side_length() const
{
    std::size_t best = 0;
    for (std::size_t i = 0; i < left_.size(); ++i) {
        best = std::max({best, left_[i].defining_length(), right_[i].defining_length()});
    }
    return best;
}

bool PointClass::contains(const Address& a) const
{
    return std::find(representatives.begin(), representatives.end(), a) != representatives.end();
}

std::vector<Symbol> PointClass::first_symbols() const
{
    std::vector<Symbol> out;
    for (const Address& a : representatives) {
        out.push_back(a.at(0));
    }
    return sorted_unique(std::move(out));
}

std::vector<Symbol> PointClass::symbols_after(Symbol k) const
{
    std::vector<Symbol> out;
    for (const Address& a : representatives) {
        if (a.at(0) == k) {
            out.push_back(a.at(1));
        }
    }
    return sorted_unique(std::move(out));
}

bool PointClass::in_copy(const Word& w) const
{
    return std::any_of(representatives.begin(), representatives.end(), [&](const Address& a) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (a.at(i) != w[i]) {
                return false;
            }
        }
        return true;
    });
}

std::size_t PointClass::junction_level() const
{
    if (representatives.size() < 2) {
        return 0;
    }
    std::size_t lcp = static_cast<std::size_t>(-1);
    for (std::size_t i = 1; i < representatives.size(); ++i) {
        lcp = std::min(lcp, common_prefix_length(representatives[0], representatives[i]));
    }
    return lcp + 1;
}

Identifier::Identifier(const NecklaceSpec& spec, std::size_t class_cap)
    : spec_(spec), class_cap_(class_cap), sides_by_symbol_(static_cast<std::size_t>(spec.n()) + 1)
{
    for (Symbol k = 1; k <= spec.n(); ++k) {
        const Address& l = spec.left_side(k);
        const Address& r = spec.right_side(k);
        sides_by_symbol_[l.at(0)].emplace_back(l, r);
        sides_by_symbol_[r.at(0)].emplace_back(r, l);
    }
}

PointClass Identifier::point_class(const Address& a, int depth) const
{
    std::unordered_set<Address> seen{a};
    std::deque<Address> queue{a};
    while (!queue.empty()) {
        const Address x = std::move(queue.front());
        queue.pop_front();
        for (int p = 0; p <= depth; ++p) {
            for (const auto& [side, partner] : sides_by_symbol_[x.at(static_cast<std::size_t>(p))]) {
                if (!x.suffix_equals(static_cast<std::size_t>(p), side)) {
                    continue;
                }
                Address y = partner.prepend(x.prefix(static_cast<std::size_t>(p)));
                if (seen.insert(y).second) {
                    if (seen.size() > class_cap_) {
                        throw CapExceeded("identification class of " + a.to_string(spec_.n()) + " exceeds "
                                          + std::to_string(class_cap_) + " addresses");
                    }
                    queue.push_back(std::move(y));
                }
            }
        }
    }
    PointClass out;
    out.representatives.assign(seen.begin(), seen.end());
    std::sort(out.representatives.begin(), out.representatives.end(), sequence_less);
    return out;
}

PointClass point_class(const NecklaceSpec& spec, const Address& a, int depth)
{
    return Identifier(spec).point_class(a, depth);
}

Address main_node_address(const NecklaceSpec& spec, const Word& w, Symbol k)
{
    return spec.left_side(k).prepend(w);
}

std::vector<PointClass> main_nodes(const NecklaceSpec& spec, const Word& w, int depth)
{
    const Identifier id(spec);
    std::vector<PointClass> out;
    for (Symbol k = 1; k <= spec.n(); ++k) {
        out.push_back(id.point_class(main_node_address(spec, w, k), depth + static_cast<int>(w.size())));
    }
    return out;
}

ValidationReport validate_spec(const NecklaceSpec& spec, int depth)
{
    if (depth < 1) {
        throw Error("validate_spec: depth must be >= 1");
    }
    const int n = spec.n();
    const Identifier id(spec);
    ValidationReport report;
    report.depth = depth;

    // Only position-0 rule applications change the first symbol, so every
    // class meeting two 1-level copies contains one of the z_k.
    std::vector<PointClass> classes;
    for (Symbol k = 1; k <= n; ++k) {
        PointClass c = id.point_class(spec.left_side(k), depth);
        if (std::find(classes.begin(), classes.end(), c) == classes.end()) {
            classes.push_back(std::move(c));
        }
    }
    for (const PointClass& c : classes) {
        const auto firsts = c.first_symbols();
        if (firsts.size() > 2) {
            report.problems.push_back("point " + c.canonical().to_string(n) + " lies in " + std::to_string(firsts.size())
                                      + " copies of level 1");
        }
    }
    for (Symbol i = 1; i <= n; ++i) {
        for (Symbol j = static_cast<Symbol>(i + 1); j <= n; ++j) {
            PairContacts pc;
            pc.i = i;
            pc.j = j;
            pc.adjacent = cyclically_adjacent(i, j, n);
            for (const PointClass& c : classes) {
                const auto firsts = c.first_symbols();
                if (std::binary_search(firsts.begin(), firsts.end(), i) && std::binary_search(firsts.begin(), firsts.end(), j)) {
                    pc.contacts.push_back(c.canonical());
                }
            }
            pc.ok = pc.contacts.size() == (pc.adjacent ? 1u : 0u);
            if (!pc.ok) {
                report.witnesses.emplace_back(i, j);
                report.problems.push_back("copies " + std::to_string(i) + " and " + std::to_string(j) + " share "
                                          + std::to_string(pc.contacts.size()) + " points, expected "
                                          + (pc.adjacent ? "1" : "0"));
            }
            report.pairs.push_back(std::move(pc));
        }
    }
    report.pass = report.problems.empty();
    return report;
}

Word smallest_copy_containing(const NecklaceSpec& spec, const std::vector<PointClass>& pts, std::size_t cap)
{
    (void)spec;
    if (pts.empty()) {
        throw Error("smallest_copy_containing: empty point set");
    }
    Word best;
    for (std::size_t len = 1; len <= cap; ++len) {
        std::set<Word> candidates;
        for (const Address& a : pts.front().representatives) {
            candidates.insert(a.prefix(len));
        }
        bool found = false;
        for (const Word& w : candidates) {
            if (std::all_of(pts.begin() + 1, pts.end(), [&](const PointClass& c) { return c.in_copy(w); })) {
                best = w;
                found = true;
                break;
            }
        }
        if (!found) {
            break;
        }
    }
    return best;
}

GoodnessReport check_goodness(const NecklaceSpec& spec, int depth)
{
    const int n = spec.n();
    const Identifier id(spec);
    GoodnessReport report;
    for (Symbol k = 1; k <= n; ++k) {
        const PointClass left = id.point_class(spec.left_side(cyclic_prev(k, n)), depth);
        const PointClass right = id.point_class(spec.left_side(k), depth);
        GoodnessEntry e;
        e.k = k;
        e.left_node_children = left.symbols_after(k);
        e.right_node_children = right.symbols_after(k);
        std::vector<Symbol> both;
        std::set_intersection(e.left_node_children.begin(), e.left_node_children.end(), e.right_node_children.begin(),
                              e.right_node_children.end(), std::back_inserter(both));
        for (Symbol j : both) {
            report.witnesses.emplace_back(k, j);
        }
        report.entries.push_back(std::move(e));
    }
    report.good = report.witnesses.empty();
    return report;
}

} // namespace necklace
