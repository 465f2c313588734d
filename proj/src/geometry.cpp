#include "necklace/geometry.hpp"

#include "necklace/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace necklace {

double Vec2::norm() const { return std::hypot(x, y); }

double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

AffineMap2D AffineMap2D::compose(const AffineMap2D& inner) const
{
    AffineMap2D out;
    out.a11 = a11 * inner.a11 + a12 * inner.a21;
    out.a12 = a11 * inner.a12 + a12 * inner.a22;
    out.a21 = a21 * inner.a11 + a22 * inner.a21;
    out.a22 = a21 * inner.a12 + a22 * inner.a22;
    out.tx = a11 * inner.tx + a12 * inner.ty + tx;
    out.ty = a21 * inner.tx + a22 * inner.ty + ty;
    return out;
}

double AffineMap2D::contraction() const
{
    // Largest singular value of [[a11 a12] [a21 a22]].
    const double s = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
    const double d = determinant();
    return std::sqrt((s + std::sqrt(std::max(0.0, s * s - 4 * d * d))) / 2);
}

Vec2 AffineMap2D::fixed_point() const
{
    // Solve (I - A) x = t.
    const double b11 = 1 - a11, b12 = -a12, b21 = -a21, b22 = 1 - a22;
    const double det = b11 * b22 - b12 * b21;
    return {(b22 * tx - b12 * ty) / det, (-b21 * tx + b11 * ty) / det};
}

AffineMap2D AffineMap2D::complex_linear(Vec2 alpha, Vec2 beta)
{
    return {beta.x, -beta.y, beta.y, beta.x, alpha.x, alpha.y};
}

AffineMap2D AffineMap2D::complex_antilinear(Vec2 alpha, Vec2 beta)
{
    return {beta.x, beta.y, beta.y, -beta.x, alpha.x, alpha.y};
}

Polygon convex_hull(std::vector<Vec2> points)
{
    std::sort(points.begin(), points.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    points.erase(std::unique(points.begin(), points.end(), [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }),
                 points.end());
    if (points.size() < 3) {
        return points;
    }
    Polygon hull(2 * points.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross(points[i] - hull[k - 2]) <= 0) {
            --k;
        }
        hull[k++] = points[i];
    }
    for (std::size_t i = points.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && (hull[k - 1] - hull[k - 2]).cross(points[i - 1] - hull[k - 2]) <= 0) {
            --k;
        }
        hull[k++] = points[i - 1];
    }
    hull.resize(k - 1);
    return hull;
}

double separation_gap(const Polygon& p, const Polygon& q)
{
    double best = -std::numeric_limits<double>::infinity();
    auto scan = [&](const Polygon& poly) {
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Vec2 e = poly[(i + 1) % poly.size()] - poly[i];
            const double len = e.norm();
            if (len == 0) {
                continue;
            }
            const Vec2 normal{-e.y / len, e.x / len};
            double pmin = std::numeric_limits<double>::infinity(), pmax = -pmin;
            double qmin = pmin, qmax = -pmin;
            for (Vec2 v : p) {
                pmin = std::min(pmin, v.dot(normal));
                pmax = std::max(pmax, v.dot(normal));
            }
            for (Vec2 v : q) {
                qmin = std::min(qmin, v.dot(normal));
                qmax = std::max(qmax, v.dot(normal));
            }
            best = std::max({best, qmin - pmax, pmin - qmax});
        }
    };
    scan(p);
    scan(q);
    return best;
}

Polygon transform(const AffineMap2D& f, const Polygon& p)
{
    Polygon out;
    out.reserve(p.size());
    for (Vec2 v : p) {
        out.push_back(f(v));
    }
    return out;
}

double polygon_diameter(const Polygon& p)
{
    double d = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            d = std::max(d, distance(p[i], p[j]));
        }
    }
    return d;
}

namespace {

bool inside_convex(const Polygon& hull, Vec2 v, double eps)
{
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Vec2 a = hull[i];
        const Vec2 e = hull[(i + 1) % hull.size()] - a;
        if (e.cross(v - a) < -eps * e.norm()) {
            return false;
        }
    }
    return true;
}

Polygon regular_polygon(Vec2 c, double circumradius, int sides)
{
    Polygon out;
    for (int i = 0; i < sides; ++i) {
        const double t = 2 * std::numbers::pi * i / sides;
        out.push_back({c.x + circumradius * std::cos(t), c.y + circumradius * std::sin(t)});
    }
    return out;
}

} // namespace

GeometricIFS::GeometricIFS(std::vector<AffineMap2D> maps, std::string label) : maps_(std::move(maps)), label_(std::move(label))
{
    if (maps_.size() < 3) {
        throw MalformedInput("IFS needs at least 3 maps, got " + std::to_string(maps_.size()));
    }
    if (maps_.size() > static_cast<std::size_t>(kMaxSymbols)) {
        throw MalformedInput("IFS has too many maps");
    }
    for (std::size_t i = 0; i < maps_.size(); ++i) {
        const double c = maps_[i].contraction();
        if (!(c < 1) || !std::isfinite(c)) {
            throw MalformedInput("map " + std::to_string(i + 1) + " is not a contraction (norm " + format_number(c) + ")");
        }
        if (std::abs(maps_[i].determinant()) < 1e-14) {
            throw MalformedInput("map " + std::to_string(i + 1) + " is not invertible");
        }
    }

    Vec2 c{};
    for (const AffineMap2D& f : maps_) {
        c = c + f.fixed_point() * (1.0 / static_cast<double>(maps_.size()));
    }
    center_ = c;
    for (const AffineMap2D& f : maps_) {
        radius_ = std::max(radius_, distance(f(c), c) / (1 - f.contraction()));
    }

    // Grow the hull of the fixed points until it is mapped into itself.
    std::vector<Vec2> pts;
    for (const AffineMap2D& f : maps_) {
        pts.push_back(f.fixed_point());
    }
    Polygon hull = convex_hull(pts);
    for (int iter = 0; iter < 64 && hull.size() >= 3; ++iter) {
        const double eps = 1e-12 * std::max(polygon_diameter(hull), 1e-300);
        bool invariant = true;
        std::vector<Vec2> next = hull;
        for (const AffineMap2D& f : maps_) {
            for (Vec2 v : hull) {
                const Vec2 w = f(v);
                next.push_back(w);
                invariant = invariant && inside_convex(hull, w, eps);
            }
        }
        if (invariant) {
            hull_ = hull;
            return;
        }
        hull = convex_hull(std::move(next));
    }
    // Fallback: a regular 64-gon around an invariant disk, enlarged so the
    // polygon itself is invariant.
    constexpr int sides = 64;
    const double stretch = 1 / std::cos(std::numbers::pi / sides);
    double r = radius_;
    for (const AffineMap2D& f : maps_) {
        const double cf = f.contraction() * stretch;
        if (cf >= 1) {
            throw MalformedInput("IFS contraction too weak for a polygonal bound");
        }
        r = std::max(r, distance(f(c), c) / (1 - cf));
    }
    hull_ = regular_polygon(c, r * stretch, sides);
}

double GeometricIFS::max_contraction() const
{
    double c = 0;
    for (const AffineMap2D& f : maps_) {
        c = std::max(c, f.contraction());
    }
    return c;
}

AffineMap2D GeometricIFS::word_map(const Word& w) const
{
    AffineMap2D out;
    for (Symbol s : w.symbols()) {
        out = out.compose(map(s));
    }
    return out;
}

Vec2 GeometricIFS::point(const Address& a) const
{
    for (Symbol s : a.preperiod().symbols()) {
        if (s < 1 || s > n()) {
            throw MalformedInput("address symbol outside 1.." + std::to_string(n()));
        }
    }
    for (Symbol s : a.period().symbols()) {
        if (s < 1 || s > n()) {
            throw MalformedInput("address symbol outside 1.." + std::to_string(n()));
        }
    }
    return word_map(a.preperiod())(word_map(a.period()).fixed_point());
}

double CellTree::max_radius() const
{
    double r = 0;
    for (const Disk& d : disks) {
        r = std::max(r, d.radius);
    }
    return r;
}

CellTree attractor_cells(const GeometricIFS& ifs, int m, std::size_t max_cells)
{
    CellTree tree;
    tree.level = m;
    tree.root_radius = ifs.root_radius();
    struct Cell {
        AffineMap2D map;
        double scale;
    };
    std::vector<Cell> cells{{AffineMap2D(), 1.0}};
    for (int l = 0; l < m; ++l) {
        if (cells.size() * static_cast<std::size_t>(ifs.n()) > max_cells) {
            throw CapExceeded("level " + std::to_string(m) + " needs more than " + std::to_string(max_cells) + " cells");
        }
        std::vector<Cell> next;
        next.reserve(cells.size() * static_cast<std::size_t>(ifs.n()));
        for (const Cell& c : cells) {
            for (Symbol k = 1; k <= ifs.n(); ++k) {
                next.push_back({c.map.compose(ifs.map(k)), c.scale * ifs.map(k).contraction()});
            }
        }
        cells = std::move(next);
    }
    for (const Cell& c : cells) {
        tree.disks.push_back({c.map(ifs.root_center()), ifs.root_radius() * c.scale});
    }
    return tree;
}

std::string to_string(ContactStatus s)
{
    switch (s) {
    case ContactStatus::disjoint:
        return "disjoint";
    case ContactStatus::contact:
        return "contact";
    case ContactStatus::extended:
        return "extended";
    case ContactStatus::unresolved:
        return "unresolved";
    }
    return "unresolved";
}

const PairContact& ContactReport::pair(Symbol i, Symbol j) const
{
    if (i > j) {
        std::swap(i, j);
    }
    for (const PairContact& p : pairs) {
        if (p.i == i && p.j == j) {
            return p;
        }
    }
    throw Error("no contact record for copies " + std::to_string(i) + " and " + std::to_string(j));
}

namespace {

struct Cell {
    Word word;
    AffineMap2D map;
    Polygon poly;
};

Cell make_cell(const GeometricIFS& ifs, Word word, const AffineMap2D& map)
{
    Cell c{std::move(word), map, {}};
    c.poly = transform(map, ifs.invariant_hull());
    return c;
}

PairContact resolve_pair(const GeometricIFS& ifs, Symbol i, Symbol j, double tol_abs, const ContactOptions& options)
{
    PairContact out;
    out.i = i;
    out.j = j;
    std::vector<std::pair<Cell, Cell>> pairs;
    {
        Cell a = make_cell(ifs, Word{i}, ifs.map(i));
        Cell b = make_cell(ifs, Word{j}, ifs.map(j));
        if (separation_gap(a.poly, b.poly) > tol_abs) {
            out.status = ContactStatus::disjoint;
            out.level = 1;
            return out;
        }
        pairs.emplace_back(std::move(a), std::move(b));
    }
    double start_diameter = 0;
    for (int level = 2; level <= options.level_cap; ++level) {
        std::vector<Cell> left_children, right_children;
        std::vector<std::pair<Cell, Cell>> next;
        for (const auto& [a, b] : pairs) {
            std::vector<Cell> ca, cb;
            for (Symbol k = 1; k <= ifs.n(); ++k) {
                ca.push_back(make_cell(ifs, a.word + k, a.map.compose(ifs.map(k))));
                cb.push_back(make_cell(ifs, b.word + k, b.map.compose(ifs.map(k))));
            }
            for (const Cell& x : ca) {
                for (const Cell& y : cb) {
                    if (separation_gap(x.poly, y.poly) <= tol_abs) {
                        next.emplace_back(x, y);
                    }
                }
            }
            if (next.size() > options.pair_cap) {
                out.status = ContactStatus::extended;
                out.level = level;
                out.surviving = next.size();
                return out;
            }
        }
        if (next.empty()) {
            out.status = ContactStatus::disjoint;
            out.level = level;
            return out;
        }
        pairs = std::move(next);
        if (level == 2) {
            Polygon all;
            for (const auto& [a, b] : pairs) {
                all.insert(all.end(), a.poly.begin(), a.poly.end());
                all.insert(all.end(), b.poly.begin(), b.poly.end());
            }
            start_diameter = polygon_diameter(convex_hull(all));
        }
    }
    out.level = options.level_cap;
    out.surviving = pairs.size();
    Polygon all;
    for (const auto& [a, b] : pairs) {
        all.insert(all.end(), a.poly.begin(), a.poly.end());
        all.insert(all.end(), b.poly.begin(), b.poly.end());
    }
    const double final_diameter = polygon_diameter(convex_hull(all));
    // A single contact point shows up as touching cells shrinking onto it.
    if (final_diameter <= 1e-3 * std::max(start_diameter, tol_abs)) {
        out.status = ContactStatus::contact;
        auto least = std::min_element(pairs.begin(), pairs.end(), [](const auto& p, const auto& q) {
            return std::tie(p.first.word, p.second.word) < std::tie(q.first.word, q.second.word);
        });
        out.chain_i = least->first.word;
        out.chain_j = least->second.word;
    } else {
        out.status = ContactStatus::unresolved;
    }
    return out;
}

} // namespace

ContactReport detect_contacts(const GeometricIFS& ifs, const ContactOptions& options)
{
    if (!(options.tol > 0)) {
        throw ParameterError("contact tolerance must be positive");
    }
    ContactReport report;
    report.options = options;
    report.diameter = polygon_diameter(ifs.invariant_hull());
    const double tol_abs = options.tol * report.diameter;
    for (Symbol i = 1; i <= ifs.n(); ++i) {
        for (Symbol j = static_cast<Symbol>(i + 1); j <= ifs.n(); ++j) {
            report.pairs.push_back(resolve_pair(ifs, i, j, tol_abs, options));
        }
    }
    return report;
}

std::optional<std::pair<Address, std::size_t>> detect_period(const Word& w)
{
    const std::size_t L = w.size();
    for (std::size_t total = 1; total <= L; ++total) {
        for (std::size_t q = 1; q <= total; ++q) {
            const std::size_t p = total - q;
            if (L < p + 2 * q) {
                continue;
            }
            bool ok = true;
            for (std::size_t i = p; i + q < L && ok; ++i) {
                ok = w[i] == w[i + q];
            }
            if (ok) {
                Address a(w.prefix(p), w.drop_front(p).prefix(q));
                return std::make_pair(std::move(a), (L - p) / q);
            }
        }
    }
    return std::nullopt;
}

Extraction spec_from_geometry(const GeometricIFS& ifs, const ContactOptions& options)
{
    Extraction out;
    out.contacts = detect_contacts(ifs, options);
    const int n = ifs.n();
    for (const PairContact& pc : out.contacts.pairs) {
        const bool adjacent = cyclically_adjacent(pc.i, pc.j, n);
        if (adjacent && pc.status != ContactStatus::contact) {
            out.problems.push_back("adjacent copies " + std::to_string(pc.i) + " and " + std::to_string(pc.j) + " are "
                                   + to_string(pc.status) + ", expected a single contact point");
        }
        if (!adjacent && pc.status != ContactStatus::disjoint) {
            out.problems.push_back("non-adjacent copies " + std::to_string(pc.i) + " and " + std::to_string(pc.j) + " are "
                                   + to_string(pc.status) + ", expected disjoint");
        }
    }
    if (!out.problems.empty()) {
        return out;
    }
    std::vector<GlueRule> glue;
    for (Symbol k = 1; k <= n; ++k) {
        const Symbol next = cyclic_next(k, n);
        const PairContact& pc = out.contacts.pair(k, next);
        const Word& left = pc.i == k ? pc.chain_i : pc.chain_j;
        const Word& right = pc.i == k ? pc.chain_j : pc.chain_i;
        const auto u = detect_period(left.drop_front(1));
        const auto v = detect_period(right.drop_front(1));
        RuleConfidence conf;
        conf.k = k;
        conf.periodic = u && v;
        conf.repetitions_u = u ? u->second : 0;
        conf.repetitions_v = v ? v->second : 0;
        out.confidence.push_back(conf);
        if (!conf.periodic) {
            out.problems.push_back("no repeating tail in the contact chain of z_" + std::to_string(k));
            continue;
        }
        glue.push_back({k, u->first, v->first});
    }
    if (out.problems.empty()) {
        out.spec.emplace(n, std::move(glue), ifs.label());
    }
    return out;
}

std::string format_number(double v)
{
    if (v == 0) {
        return "0";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string render_svg(const GeometricIFS& ifs, int m, const std::vector<Mark>& marks, std::size_t max_cells)
{
    static const char* const palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::size_t count = 1;
    for (int i = 0; i < m; ++i) {
        count *= static_cast<std::size_t>(ifs.n());
        if (count > max_cells) {
            throw CapExceeded("render level " + std::to_string(m) + " exceeds " + std::to_string(max_cells) + " cells");
        }
    }
    const Polygon& hull = ifs.invariant_hull();
    double minx = hull[0].x, maxx = hull[0].x, miny = hull[0].y, maxy = hull[0].y;
    for (Vec2 v : hull) {
        minx = std::min(minx, v.x);
        maxx = std::max(maxx, v.x);
        miny = std::min(miny, v.y);
        maxy = std::max(maxy, v.y);
    }
    const double span = std::max(maxx - minx, maxy - miny);
    const double pad = 0.05 * span;
    const double scale = 1000 / (span + 2 * pad);
    auto X = [&](double x) { return format_number((x - minx + pad) * scale); };
    auto Y = [&](double y) { return format_number((maxy - y + pad) * scale); };
    const double width = (maxx - minx + 2 * pad) * scale;
    const double height = (maxy - miny + 2 * pad) * scale;

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << format_number(width) << "\" height=\""
       << format_number(height) << "\" viewBox=\"0 0 " << format_number(width) << ' ' << format_number(height) << "\">\n";
    os << "<title>" << (ifs.label().empty() ? "necklace" : ifs.label()) << " level " << m << "</title>\n";
    os << "<g id=\"cells\" fill=\"#c8d3e6\" stroke=\"#44556b\" stroke-width=\"0.5\">\n";
    std::vector<Symbol> w(static_cast<std::size_t>(m), 1);
    while (true) {
        const Polygon cell = transform(ifs.word_map(Word(w)), hull);
        os << "<polygon points=\"";
        for (std::size_t i = 0; i < cell.size(); ++i) {
            os << (i ? " " : "") << X(cell[i].x) << ',' << Y(cell[i].y);
        }
        os << "\"/>\n";
        int i = m - 1;
        while (i >= 0 && w[static_cast<std::size_t>(i)] == ifs.n()) {
            w[static_cast<std::size_t>(i)] = 1;
            --i;
        }
        if (i < 0) {
            break;
        }
        ++w[static_cast<std::size_t>(i)];
    }
    os << "</g>\n";
    os << "<g id=\"marks\" font-family=\"sans-serif\" font-size=\"18\">\n";
    std::vector<int> groups;
    for (const Mark& mk : marks) {
        if (std::find(groups.begin(), groups.end(), mk.group) == groups.end()) {
            groups.push_back(mk.group);
        }
    }
    for (int g : groups) {
        const char* color = palette[static_cast<std::size_t>(g) % std::size(palette)];
        std::vector<Vec2> pts;
        for (const Mark& mk : marks) {
            if (mk.group == g) {
                pts.push_back(ifs.point(mk.address));
            }
        }
        if (pts.size() >= 2) {
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" stroke-dasharray=\"6,4\" points=\"";
            for (std::size_t i = 0; i < pts.size(); ++i) {
                os << (i ? " " : "") << X(pts[i].x) << ',' << Y(pts[i].y);
            }
            os << "\"/>\n";
        }
        for (const Mark& mk : marks) {
            if (mk.group != g) {
                continue;
            }
            const Vec2 p = ifs.point(mk.address);
            os << "<circle cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y) << "\" r=\"6\" fill=\"" << color << "\"/>\n";
            os << "<text x=\"" << format_number((p.x - minx + pad) * scale + 9) << "\" y=\""
               << format_number((maxy - p.y + pad) * scale - 9) << "\" fill=\"" << color << "\">" << mk.label << "</text>\n";
        }
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

} // namespace necklace
