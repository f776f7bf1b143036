#include "gasket/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>

namespace gasket {

namespace {

int env_limit(const char* name, int fallback) {
    if (const char* v = std::getenv(name)) return std::atoi(v);
    return fallback;
}

}  // namespace

int LevelGraph::index_of(LatticePoint p) const {
    auto cmp = [](const LatticePoint& a, const LatticePoint& b) {
        return a.n2 != b.n2 ? a.n2 < b.n2 : a.n1 < b.n1;
    };
    auto it = std::lower_bound(vertices.begin(), vertices.end(), p, cmp);
    if (it == vertices.end() || !(*it == p)) return -1;
    return static_cast<int>(it - vertices.begin());
}

std::vector<int> LevelGraph::interior_vertices() const {
    std::vector<int> keep;
    for (int v = 0; v < static_cast<int>(vertices.size()); ++v)
        if (!on_outer_boundary(v)) keep.push_back(v);
    return keep;
}

Address LevelGraph::vertex_address(int v) const {
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (int k = 0; k < 3; ++k) {
            if (cell_corners[c][static_cast<std::size_t>(k)] == v) {
                Address a = cells[c];
                a.kind = AddressKind::vertex;
                a.corner = k;
                return a;
            }
        }
    }
    throw DomainError("vertex_address: vertex index out of range");
}

LevelGraph build_graph(int blowup, int depth) {
    const int max_blowup = env_limit("GASKETLAB_MAX_BLOWUP", 6);
    const int max_depth = env_limit("GASKETLAB_MAX_DEPTH", 9);
    if (blowup < 0 || depth < 0) throw DomainError("build_graph: negative argument");
    if (blowup > max_blowup || depth > max_depth)
        throw ResourceError("build_graph: size guardrail exceeded (M=" + std::to_string(blowup) +
                            ", m=" + std::to_string(depth) + ")");

    LevelGraph g;
    g.blowup = blowup;
    g.depth = depth;
    g.extent = 1LL << depth;
    g.cells = enumerate_cells(blowup, depth);

    auto cmp = [](const LatticePoint& a, const LatticePoint& b) {
        return a.n2 != b.n2 ? a.n2 < b.n2 : a.n1 < b.n1;
    };
    std::map<LatticePoint, int, decltype(cmp)> index(cmp);
    std::vector<std::array<LatticePoint, 3>> corner_points(g.cells.size());
    for (std::size_t c = 0; c < g.cells.size(); ++c) {
        LatticePoint a = g.cells[c].anchor_lattice();
        corner_points[c] = {LatticePoint{a.n1, a.n2}, LatticePoint{a.n1 + 1, a.n2},
                            LatticePoint{a.n1, a.n2 + 1}};
        for (const auto& p : corner_points[c]) index.emplace(p, 0);
    }
    g.vertices.reserve(index.size());
    for (auto& [p, idx] : index) {
        idx = static_cast<int>(g.vertices.size());
        g.vertices.push_back(p);
    }

    const double corner_mass = cell_measure(depth, blowup) / 3.0;
    g.weights.assign(g.vertices.size(), 0.0);
    g.adjacency.assign(g.vertices.size(), {});
    g.cell_corners.resize(g.cells.size());
    for (std::size_t c = 0; c < g.cells.size(); ++c) {
        std::array<int, 3> vi{};
        for (int k = 0; k < 3; ++k) {
            vi[static_cast<std::size_t>(k)] = index.at(corner_points[c][static_cast<std::size_t>(k)]);
            g.weights[static_cast<std::size_t>(vi[static_cast<std::size_t>(k)])] += corner_mass;
        }
        g.cell_corners[c] = vi;
        for (int p = 0; p < 3; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                int i = vi[static_cast<std::size_t>(p)], j = vi[static_cast<std::size_t>(q)];
                if (i > j) std::swap(i, j);
                g.edges.push_back({i, j});
                g.adjacency[static_cast<std::size_t>(i)].push_back(j);
                g.adjacency[static_cast<std::size_t>(j)].push_back(i);
            }
        }
    }
    for (auto& nb : g.adjacency) std::sort(nb.begin(), nb.end());
    return g;
}

}  // namespace gasket
