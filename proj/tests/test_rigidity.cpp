#include "necklace/catalog.hpp"
#include "necklace/cut_analysis.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace necklace;

namespace {

const SigmaTable& table_with_root(const std::vector<SigmaTable>& tables, const DihedralElement& root)
{
    for (const SigmaTable& t : tables) {
        if (t.at(Word()) == root) {
            return t;
        }
    }
    throw std::runtime_error("no table with root " + root.to_string());
}

// Inside F_1, the reflection fixing 2 and 4 at every level; identity elsewhere.
DihedralElement partial_reflection(const Word& w)
{
    if (!w.empty() && w[0] == 1) {
        return *DihedralElement::from_images(4, {3, 2, 1, 4});
    }
    return DihedralElement::identity(4);
}

} // namespace

TEST_CASE("dihedral group laws")
{
    for (int n : {3, 4, 5, 7}) {
        const auto G = dihedral_group(n);
        REQUIRE(G.size() == static_cast<std::size_t>(2 * n));
        const DihedralElement id = DihedralElement::identity(n);
        const DihedralElement tau{n, 1, false};
        const DihedralElement s{n, 0, true};
        DihedralElement p = id;
        for (int i = 0; i < n; ++i) {
            p = compose(tau, p);
        }
        CHECK(p == id);
        CHECK(compose(s, s) == id);
        CHECK(compose(compose(s, tau), s) == tau.inverse());
        for (const auto& a : G) {
            CHECK(compose(a, a.inverse()) == id);
            CHECK(DihedralElement::from_index(n, a.index()) == a);
            std::vector<Symbol> images;
            for (Symbol k = 1; k <= n; ++k) {
                images.push_back(a(k));
            }
            CHECK(DihedralElement::from_images(n, images) == a);
            for (const auto& b : G) {
                const auto ab = compose(a, b);
                CHECK(std::find(G.begin(), G.end(), ab) != G.end());
                for (Symbol k = 1; k <= n; ++k) {
                    CHECK(ab(k) == a(b(k)));
                }
            }
        }
        CHECK(tau(static_cast<Symbol>(n)) == 1);
        CHECK(s(1) == n);
    }
    CHECK_FALSE(DihedralElement::from_images(4, {1, 3, 2, 4}).has_value());
    CHECK(DihedralElement{4, 2, true}.to_string() == "sτ^2");
}

TEST_CASE("apply_sigma examples")
{
    const NecklaceSpec g4 = good4_spec();
    CHECK(apply_sigma(g4, {4, 1, false}) == g4);
    const NecklaceSpec reflected = apply_sigma(g4, {4, 0, true});
    CHECK(validate_spec(reflected, 6).pass);
    CHECK(apply_sigma(gasket_spec(), {3, 3 % 3, false}) == gasket_spec());
    CHECK(apply_sigma(gasket_spec(), DihedralElement::identity(3)) == gasket_spec());

    // A non-symmetric table is shifted: rule k of the result comes from rule k+1.
    const NecklaceSpec f = fig2_spec();
    const DihedralElement tau{4, 1, false};
    const NecklaceSpec shifted = apply_sigma(f, tau);
    for (Symbol k = 1; k <= 4; ++k) {
        CHECK(shifted.rule(k).u == map_symbols(f.rule(cyclic_next(k, 4)).u, tau.inverse()));
        CHECK(shifted.rule(k).v == map_symbols(f.rule(cyclic_next(k, 4)).v, tau.inverse()));
    }
}

TEST_CASE("relabeling preserves validity and goodness")
{
    for (const NecklaceSpec& spec : {gasket_spec(), good4_spec(), fig2_spec()}) {
        const bool good = check_goodness(spec).good;
        for (const auto& sigma : dihedral_group(spec.n())) {
            const NecklaceSpec r = apply_sigma(spec, sigma);
            CHECK(validate_spec(r, 6).pass);
            CHECK(check_goodness(r).good == good);
            CHECK(same_identifications(apply_sigma(r, sigma.inverse()), spec));
        }
    }
}

TEST_CASE("spec_isomorphic examples")
{
    const NecklaceSpec g4 = good4_spec();
    CHECK(spec_isomorphic(g4, apply_sigma(g4, {4, 2, false})).sigma.has_value());
    const auto none = spec_isomorphic(gasket_spec(), g4);
    CHECK_FALSE(none.sigma.has_value());
    CHECK(none.reason.find("m=n") != std::string::npos);

    auto glue = gasket_spec().glue();
    std::reverse(glue.begin(), glue.end());
    CHECK(spec_isomorphic(gasket_spec(), NecklaceSpec(3, glue)).sigma == DihedralElement::identity(3));

    const NecklaceSpec f = fig2_spec();
    for (const auto& sigma : dihedral_group(4)) {
        const auto r = spec_isomorphic(f, apply_sigma(f, sigma));
        REQUIRE(r.sigma.has_value());
        CHECK(same_identifications(apply_sigma(f, *r.sigma), apply_sigma(f, sigma)));
    }
    // fig2 has no symmetry, so the relabeling is recovered exactly.
    CHECK(*spec_isomorphic(f, apply_sigma(f, {4, 3, true})).sigma == DihedralElement{4, 3, true});
    CHECK_FALSE(spec_isomorphic(f, g4).sigma.has_value());
}

TEST_CASE("rigid maps of the gasket")
{
    const auto c = rigid_maps(gasket_spec(), gasket_spec(), 6);
    CHECK(c.closed);
    CHECK(c.cardinality == Cardinality::finite);
    CHECK(c.count == 6u);
    CHECK(c.root_choices.size() == 6);
    CHECK(c.branching_states.empty());
    // Exhaustive search over all σ tables on copies of level <= 2.
    CHECK(oracle::count_rigid_tables(gasket_spec(), gasket_spec(), 3) == 6);
    CHECK(map_tables(c, 3).size() == 6);
    const auto group = check_group_property(c, 3);
    CHECK(group.contains_identity);
    CHECK(group.closed_under_composition);
    CHECK(group.closed_under_inverse);
}

TEST_CASE("rigid maps of GOOD4 branch below the root")
{
    const auto c = rigid_maps(good4_spec(), good4_spec(), 6);
    CHECK(c.closed);
    CHECK(c.root_choices.size() == 8);
    CHECK(c.cardinality == Cardinality::uncountable);
    CHECK_FALSE(c.branching_states.empty());
    CHECK(oracle::count_rigid_tables(good4_spec(), good4_spec(), 2) == 128);
    const auto tables = map_tables(c, 2);
    CHECK(tables.size() == 128);
    for (const auto& t : tables) {
        CHECK(admits(c, t));
    }
    const auto group = check_group_property(c, 2);
    CHECK(group.contains_identity);
    CHECK(group.closed_under_composition);
    CHECK(group.closed_under_inverse);
}

TEST_CASE("the partial reflection of F_1 preserves every GOOD4 contact graph it touches")
{
    for (int m = 2; m <= 5; ++m) {
        const auto inc = oracle::sorted_incidence(build_contact_graph(good4_spec(), m));
        CHECK(oracle::preserves_contacts(inc, inc, 4, m, partial_reflection));
    }
    // The automaton admits it too.
    const auto closure = rigid_maps(good4_spec(), good4_spec(), 6);
    SigmaTable t;
    for (int l = 0; l < 5; ++l) {
        for (const Word& w : oracle::words(4, l)) {
            t[w] = partial_reflection(w);
        }
    }
    CHECK(admits(closure, t));
    t[{1, 2}] = DihedralElement{4, 1, false};
    CHECK_FALSE(admits(closure, t));
}

TEST_CASE("rigid maps between different n are empty")
{
    const auto c = rigid_maps(gasket_spec(), good4_spec(), 6);
    CHECK(c.n_mismatch);
    CHECK(c.cardinality == Cardinality::empty);
    CHECK(c.count == 0u);
}

TEST_CASE("gasket rigid maps move points like their root σ and keep extremal cuts")
{
    const NecklaceSpec g = gasket_spec();
    const auto c = rigid_maps(g, g, 6);
    const TopologyEngine engine(g);
    const auto survey = survey_extremal(engine, {});
    std::set<std::set<Address>> cuts;
    for (const auto& p : survey.extremal_pairs) {
        cuts.insert({p.a.canonical(), p.b.canonical()});
    }
    for (int root : c.root_choices) {
        const DihedralElement sigma = DihedralElement::from_index(3, root);
        const auto z = main_nodes(g, {});
        for (Symbol k = 1; k <= 3; ++k) {
            const auto img = map_address(c, root, z[k - 1].canonical());
            REQUIRE(img.has_value());
            const PointClass cls = point_class(g, *img);
            // The gasket's node z_k sits between copies k and k+1.
            const auto fs = cls.first_symbols();
            CHECK(std::find(fs.begin(), fs.end(), sigma(k)) != fs.end());
            CHECK(std::find(fs.begin(), fs.end(), sigma(cyclic_next(k, 3))) != fs.end());
        }
        std::set<std::set<Address>> mapped;
        for (const auto& cut : cuts) {
            std::set<Address> m;
            for (const Address& a : cut) {
                m.insert(point_class(g, *map_address(c, root, a)).canonical());
            }
            mapped.insert(m);
        }
        CHECK(mapped == cuts);
    }
}

TEST_CASE("verify_nifs_uniqueness")
{
    const auto g = verify_nifs_uniqueness(gasket_spec());
    CHECK(g.pass);
    CHECK(g.entries.size() == 6);
    const auto h = verify_nifs_uniqueness(good4_spec());
    CHECK(h.pass);
    CHECK(h.entries.size() == 8);
    const auto f = verify_nifs_uniqueness(fig2_spec());
    CHECK(f.skipped);
    CHECK_FALSE(f.warning.empty());
}

TEST_CASE("embedding_image_copy_check examples")
{
    const NecklaceSpec g = gasket_spec();
    const auto tables = map_tables(rigid_maps(g, g, 6), 4);
    CHECK(embedding_image_copy_check(g, {1, 2}, table_with_root(tables, DihedralElement::identity(3)), 4).pass);
    CHECK(embedding_image_copy_check(g, {1}, table_with_root(tables, {3, 1, false}), 4).pass);
    const auto g4 = map_tables(rigid_maps(good4_spec(), good4_spec(), 6), 2);
    CHECK(embedding_image_copy_check(good4_spec(), {}, table_with_root(g4, {4, 0, true}), 2).pass);
}
