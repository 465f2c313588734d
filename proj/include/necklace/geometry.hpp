#pragma once

// Planar IFS realizations: cells, contact detection between 1-level copies,
// extraction of glue data, and SVG rendering.

#include "necklace/spec.hpp"

#include <optional>
#include <string>
#include <vector>

namespace necklace {

struct Vec2 {
    double x = 0;
    double y = 0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const;
};

double distance(Vec2 a, Vec2 b);

/// x ↦ A x + t.
struct AffineMap2D {
    double a11 = 1, a12 = 0, a21 = 0, a22 = 1;
    double tx = 0, ty = 0;

    Vec2 operator()(Vec2 p) const { return {a11 * p.x + a12 * p.y + tx, a21 * p.x + a22 * p.y + ty}; }
    /// this ∘ inner
    AffineMap2D compose(const AffineMap2D& inner) const;
    double determinant() const { return a11 * a22 - a12 * a21; }
    /// Largest singular value of the linear part.
    double contraction() const;
    /// The unique fixed point (the map must be a contraction).
    Vec2 fixed_point() const;

    /// z ↦ alpha + beta z, in complex notation.
    static AffineMap2D complex_linear(Vec2 alpha, Vec2 beta);
    /// z ↦ alpha + beta conj(z).
    static AffineMap2D complex_antilinear(Vec2 alpha, Vec2 beta);
};

using Polygon = std::vector<Vec2>;

/// Convex hull, counter-clockwise, collinear points dropped.
Polygon convex_hull(std::vector<Vec2> points);
/// Signed separation of two convex polygons along their edge normals; > 0
/// means disjoint by at least that much, <= 0 means touching or overlapping.
double separation_gap(const Polygon& p, const Polygon& q);
Polygon transform(const AffineMap2D& f, const Polygon& p);
double polygon_diameter(const Polygon& p);

class GeometricIFS {
public:
    /// Throws MalformedInput unless n >= 3 and every map is an invertible
    /// contraction.
    GeometricIFS(std::vector<AffineMap2D> maps, std::string label = {});

    int n() const { return static_cast<int>(maps_.size()); }
    const std::vector<AffineMap2D>& maps() const { return maps_; }
    const AffineMap2D& map(Symbol k) const { return maps_[k - 1]; }
    const std::string& label() const { return label_; }
    double max_contraction() const;

    /// f_{w1} ∘ ... ∘ f_{wm}
    AffineMap2D word_map(const Word& w) const;
    /// Point coded by an address.
    Vec2 point(const Address& a) const;

    /// Convex polygon H with f_k(H) ⊆ H for all k (so F ⊆ H).
    const Polygon& invariant_hull() const { return hull_; }
    Vec2 root_center() const { return center_; }
    /// Radius of a disk around root_center() mapped into itself by every f_k.
    double root_radius() const { return radius_; }

private:
    std::vector<AffineMap2D> maps_;
    std::string label_;
    Polygon hull_;
    Vec2 center_;
    double radius_ = 0;
};

struct Disk {
    Vec2 center;
    double radius = 0;
};

struct CellTree {
    int level = 0;
    double root_radius = 0;
    /// One disk per level-m word, in lexicographic order; together they cover F.
    std::vector<Disk> disks;
    double max_radius() const;
};

/// Throws CapExceeded past max_cells disks.
CellTree attractor_cells(const GeometricIFS& ifs, int m, std::size_t max_cells = 400000);

enum class ContactStatus { disjoint, contact, extended, unresolved };

std::string to_string(ContactStatus s);

struct PairContact {
    Symbol i = 0;
    Symbol j = 0;
    ContactStatus status = ContactStatus::unresolved;
    /// Level at which the status was decided.
    int level = 0;
    /// Touching cell pairs at the final level.
    std::size_t surviving = 0;
    /// Lexicographically least touching pair at the final level (cells of
    /// copy i and copy j); empty unless status is contact.
    Word chain_i;
    Word chain_j;
};

struct ContactOptions {
    /// Relative to the diameter of the invariant hull.
    double tol = 1e-9;
    int level_cap = 24;
    std::size_t pair_cap = 4096;
};

struct ContactReport {
    double diameter = 0;
    ContactOptions options;
    std::vector<PairContact> pairs;
    const PairContact& pair(Symbol i, Symbol j) const;
};

ContactReport detect_contacts(const GeometricIFS& ifs, const ContactOptions& options = {});

struct RuleConfidence {
    Symbol k = 0;
    bool periodic = false;
    /// Full repetitions of the detected period inside the chain.
    std::size_t repetitions_u = 0;
    std::size_t repetitions_v = 0;
};

struct Extraction {
    std::optional<NecklaceSpec> spec;
    std::vector<RuleConfidence> confidence;
    std::vector<std::string> problems;
    ContactReport contacts;
};

/// Reads off u_k, v_k from the contact chains. A non-necklace pattern or a
/// chain without a repeating tail yields no spec and a list of problems.
Extraction spec_from_geometry(const GeometricIFS& ifs, const ContactOptions& options = {});

/// Smallest pre·per^ω agreeing with `w`, with the period repeated at least
/// twice. Returns the repetition count alongside.
std::optional<std::pair<Address, std::size_t>> detect_period(const Word& w);

struct Mark {
    std::string label;
    Address address;
    /// Marks sharing a group are drawn in the same color and joined.
    int group = 0;
};

/// SVG 1.1 document of the level-m cells with labeled marks.
std::string render_svg(const GeometricIFS& ifs, int m, const std::vector<Mark>& marks, std::size_t max_cells = 400000);

/// Compact "%.12g" formatting used in SVG and JSON output.
std::string format_number(double v);

} // namespace necklace
