#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "gasket/address.hpp"

namespace gasket {

// Level-m graph approximation of G^(M): vertices are the lattice points at
// resolution 2^(M-m), edges are cell sides. Vertices are stored in canonical
// order (sorted by (n2,n1) lattice coordinates), so the graphs of G^(1)@m and
// G^(0)@m come out with identical adjacency structure (only the planar side
// length and the vertex weights differ).
struct LevelGraph {
    int blowup = 0;
    int depth = 0;
    long long extent = 1;  // lattice range: 0 <= n1,n2, n1+n2 <= extent = 2^depth

    std::vector<LatticePoint> vertices;            // canonical order
    std::vector<std::array<int, 2>> edges;         // i < j
    std::vector<std::vector<int>> adjacency;
    std::vector<double> weights;                   // mu-mass per vertex, sums to 3^M
    std::vector<std::array<int, 3>> cell_corners;  // per depth-m cell (digit-lex order)
    std::vector<Address> cells;                    // matching cell addresses

    double side() const { return std::ldexp(1.0, blowup - depth); }
    std::pair<double, double> coords(int v) const {
        return lattice_to_plane(vertices[static_cast<std::size_t>(v)], side());
    }
    // Lookup by lattice coordinates; -1 if absent.
    int index_of(LatticePoint p) const;
    // On one of the three outer edges of the enclosing triangle.
    bool on_outer_boundary(int v) const {
        const auto& p = vertices[static_cast<std::size_t>(v)];
        return p.n1 == 0 || p.n2 == 0 || p.n1 + p.n2 == extent;
    }
    std::vector<int> interior_vertices() const;
    // Vertex as an Address (containing cell plus corner).
    Address vertex_address(int v) const;
};

LevelGraph build_graph(int blowup, int depth);

}  // namespace gasket
