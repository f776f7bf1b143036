#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gasket/errors.hpp"

namespace gasket {

// Lattice basis of the gasket: e1 = (1,0), e2 = (1/2, sqrt(3)/2).
struct LatticePoint {
    long long n1 = 0;  // e1 coefficient
    long long n2 = 0;  // e2 coefficient
    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

// Label of a lattice point n*e1 + m*e2: p1^n o p2^m (u) in the 3-group
// {id,(u,v,w),(u,w,v)}; reduces to (n + 2m) mod 3.
enum class LatticeLabel : int { u = 0, v = 1, w = 2 };

LatticeLabel vertex_label(long long n, long long m);
char label_char(LatticeLabel l);

enum class AddressKind { cell, vertex };

// Symbolic coordinate in the blown-up gasket G^(M): IFS refinement digits over
// {0,1,2} (branches contracting towards corners 0,1,2 of the current
// triangle). A cell address of depth m denotes the closed triangle of side
// 2^(M-m); a vertex address additionally selects one of the cell's corners.
struct Address {
    int blowup = 0;                // M >= 0
    std::vector<std::uint8_t> digits;
    AddressKind kind = AddressKind::cell;
    int corner = 0;                // used when kind == vertex

    int depth() const { return static_cast<int>(digits.size()); }
    // Cell side length 2^(M-m).
    double side() const;

    // Anchor (image of the origin corner) in lattice units of the cell side.
    LatticePoint anchor_lattice() const;
    // Lattice coordinates of the denoted point (anchor or selected corner),
    // still in units of the cell side.
    LatticePoint point_lattice() const;
    // Planar coordinates of the denoted point.
    std::pair<double, double> point() const;

    std::string str() const;
    static Address parse(const std::string& text);

    friend bool operator==(const Address&, const Address&) = default;
};

// Planar coordinates of (n1*e1 + n2*e2) * unit.
std::pair<double, double> lattice_to_plane(LatticePoint p, double unit);

// mu-measure of a depth-m cell in G^(M): 3^(M-m).
double cell_measure(int depth, int blowup);

// Projection pi0 onto the unit gasket: the label-matching rotation of the
// unit triangle containing the cell. Requires depth >= blowup (cells of side
// <= 1). Idempotent; measure-preserving on fibers.
Address project0(const Address& addr);

// All depth-m cell addresses of G^(M), in digit-lexicographic order (3^m).
std::vector<Address> enumerate_cells(int blowup, int depth);

// Closed planar triangles of two cells share at least one point.
bool cells_intersect(const Address& a, const Address& b);

}  // namespace gasket
