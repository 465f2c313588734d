#include "necklace/catalog.hpp"

#include "necklace/errors.hpp"

#include <cmath>
#include <numbers>

namespace necklace {

namespace {

NecklaceSpec rotating_spec(int n, std::string label)
{
    std::vector<GlueRule> glue;
    for (Symbol k = 1; k <= n; ++k) {
        glue.push_back({k, Address({}, {cyclic_next(k, n)}), Address({}, {k})});
    }
    return NecklaceSpec(n, std::move(glue), std::move(label));
}

Vec2 mul(Vec2 p, Vec2 q) { return {p.x * q.x - p.y * q.y, p.x * q.y + p.y * q.x}; }

} // namespace

NecklaceSpec gasket_spec() { return rotating_spec(3, "gasket"); }

NecklaceSpec good4_spec() { return rotating_spec(4, "good4"); }

NecklaceSpec fig2_spec()
{
    std::vector<GlueRule> glue{
        {1, Address({}, {3}), Address({}, {3})},
        {2, Address({1}, {3}), Address({1}, {3})},
        {3, Address({4, 1}, {3}), Address({}, {3})},
        {4, Address({1}, {3}), Address({1}, {3})},
    };
    return NecklaceSpec(4, std::move(glue), "fig2");
}

GeometricIFS gasket_ifs()
{
    const Vec2 p[3] = {{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}};
    std::vector<AffineMap2D> maps;
    for (Vec2 q : p) {
        maps.push_back({0.5, 0, 0, 0.5, q.x / 2, q.y / 2});
    }
    return GeometricIFS(std::move(maps), "gasket");
}

Vec2 fig2_apex(double alpha, double beta)
{
    const double deg = std::numbers::pi / 180;
    const double gamma = 180 - alpha - beta;
    const double r = std::sin(beta * deg) / std::sin(gamma * deg);
    return {r * std::cos(alpha * deg), r * std::sin(alpha * deg)};
}

GeometricIFS fig2_family(const Fig2Parameters& params)
{
    const double a = params.a;
    const double alpha = params.alpha;
    const double beta = params.beta;
    const double gamma = 180 - alpha - beta;
    if (!(a > 0 && a < 1)) {
        throw ParameterError("fig2: a must lie in (0, 1)");
    }
    if (!(beta > 0 && 4 * beta < 2 * alpha && 2 * alpha < gamma)) {
        throw ParameterError("fig2: angles must satisfy 0 < 4β < 2α < γ");
    }
    const Vec2 v = fig2_apex(alpha, beta);
    const Vec2 one_minus_v{1 - v.x, -v.y};
    std::vector<AffineMap2D> maps{
        AffineMap2D::complex_linear(v, {-v.x, -v.y}),
        AffineMap2D::complex_antilinear({a, 0}, {-a, 0}),
        AffineMap2D::complex_linear({a, 0}, {1 - a, 0}),
        AffineMap2D::complex_antilinear(v, mul(one_minus_v, {a, 0})),
    };
    GeometricIFS ifs(std::move(maps), "fig2");
    const Polygon& hull = ifs.invariant_hull();
    for (auto [i, j] : {std::pair<Symbol, Symbol>{1, 3}, {2, 4}}) {
        const double gap = separation_gap(transform(ifs.map(i), hull), transform(ifs.map(j), hull));
        if (!(gap > 0)) {
            throw ParameterError("fig2: copies " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
        }
    }
    return ifs;
}

GeometricIFS square_ifs()
{
    const Vec2 c[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    std::vector<AffineMap2D> maps;
    for (Vec2 q : c) {
        maps.push_back({0.5, 0, 0, 0.5, q.x / 2, q.y / 2});
    }
    return GeometricIFS(std::move(maps), "square");
}

GeometricIFS perturbed_gasket_ifs()
{
    std::vector<AffineMap2D> maps = gasket_ifs().maps();
    const Vec2 p{0.5, std::sqrt(3.0) / 2};
    maps[2] = {0.45, 0, 0, 0.45, p.x * 0.55, p.y * 0.55};
    return GeometricIFS(std::move(maps), "perturbed-gasket");
}

std::vector<CatalogEntry> builtin_examples()
{
    std::vector<CatalogEntry> out;
    out.push_back({"gasket", "Sierpinski gasket, n = 3", gasket_spec(), gasket_ifs(),
                   "f_k(x) = (x + p_k)/2 with p_1 = (0,0), p_2 = (1,0), p_3 = (1/2, sqrt(3)/2)."});
    out.push_back({"good4", "Four copies glued in a ring, u_k = (k+1)^w, v_k = k^w", good4_spec(), std::nullopt,
                   "Symbolic only."});
    out.push_back({"fig2", "Non-good four-copy necklace in the triangle 0, 1, v", fig2_spec(), fig2_family(),
                   "Reconstructed maps, a = 0.3, alpha = 40, beta = 15 degrees: f1 = v - v x, f2 = a - a conj(x), "
                   "f3 = a + (1-a) x, f4 = v + (1-v) a conj(x). Main nodes 0, a, a+(1-a)v, v."});
    out.push_back({"square", "Four corner maps of the unit square (diagonal copies touch)", std::nullopt, square_ifs(),
                   "Rejected by extraction."});
    out.push_back({"perturbed-gasket", "Gasket with the top map scaled to 0.45", std::nullopt, perturbed_gasket_ifs(),
                   "Copies 1-3 and 2-3 separate."});
    return out;
}

} // namespace necklace
