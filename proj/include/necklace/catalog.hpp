#pragma once

// Built-in necklaces: the Sierpinski gasket, the symbolic four-copy example
// GOOD4, and a reconstruction of the non-good four-copy example (fig2).

#include "necklace/geometry.hpp"
#include "necklace/spec.hpp"

#include <optional>
#include <string>
#include <vector>

namespace necklace {

/// u_k = (k+1)^ω, v_k = k^ω for n = 3.
NecklaceSpec gasket_spec();
/// Same pattern for n = 4.
NecklaceSpec good4_spec();
/// Glue table of the fig2 reconstruction (not good; F_31 holds z_2 and z_3).
NecklaceSpec fig2_spec();

/// f_k(x) = (x + p_k) / 2 over the unit equilateral triangle.
GeometricIFS gasket_ifs();

struct Fig2Parameters {
    double a = 0.3;
    /// Angles of the triangle 0, 1, v at 0 and at 1, in degrees.
    double alpha = 40;
    double beta = 15;
};

/// v = (sin β / sin γ) e^{iα}, the apex of the triangle with angles α, β, γ.
Vec2 fig2_apex(double alpha, double beta);

/// Four similarities with main nodes 0, a, a+(1-a)v, v:
///   f1 = v - v x,  f2 = a - a conj(x),  f3 = a + (1-a) x,  f4 = v + (1-v) a conj(x).
/// Throws ParameterError unless 0 < a < 1, 4β < 2α < γ, and the two pairs of
/// non-adjacent copies are separated.
GeometricIFS fig2_family(const Fig2Parameters& params = {});

/// Four corner maps of the unit square with ratio 1/2 (not a necklace).
GeometricIFS square_ifs();
/// Gasket IFS with the third map's ratio lowered to 0.45 (copies pull apart).
GeometricIFS perturbed_gasket_ifs();

struct CatalogEntry {
    std::string name;
    std::string description;
    std::optional<NecklaceSpec> spec;
    std::optional<GeometricIFS> ifs;
    /// Free text on how the entry was built.
    std::string notes;
};

std::vector<CatalogEntry> builtin_examples();

} // namespace necklace
