// geometry.hpp — The five Platonic site networks: vertex coordinates,
// edge adjacency, coordination numbers, and distance-dependent couplings.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "platonet/types.hpp"

namespace platonet {

enum class Solid { tetrahedron, octahedron, cube, icosahedron, dodecahedron };

inline const char* to_string(Solid s) {
    switch (s) {
        case Solid::tetrahedron: return "tetrahedron";
        case Solid::octahedron: return "octahedron";
        case Solid::cube: return "cube";
        case Solid::icosahedron: return "icosahedron";
        case Solid::dodecahedron: return "dodecahedron";
    }
    return "?";
}

inline std::optional<Solid> solid_from_string(const std::string& name) {
    for (Solid s : {Solid::tetrahedron, Solid::octahedron, Solid::cube,
                    Solid::icosahedron, Solid::dodecahedron}) {
        if (name == to_string(s)) return s;
    }
    return std::nullopt;
}

enum class CouplingMode { all_pairs, nearest_neighbor };

inline const char* to_string(CouplingMode m) {
    return m == CouplingMode::all_pairs ? "all-pairs" : "nearest-neighbor";
}

struct PlatonicSolid {
    Solid kind{Solid::tetrahedron};
    std::vector<Eigen::Vector3d> vertices;   // listing order defines site labels
    double edge_length{0.0};
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> adjacency;

    int size() const { return static_cast<int>(vertices.size()); }

    int degree(int i) const {
        int d = 0;
        for (int j = 0; j < size(); ++j) d += adjacency(i, j) ? 1 : 0;
        return d;
    }

    double distance(int i, int j) const { return (vertices[i] - vertices[j]).norm(); }

    Eigen::Vector3d centroid() const {
        Eigen::Vector3d c = Eigen::Vector3d::Zero();
        for (const auto& v : vertices) c += v;
        return c / static_cast<double>(vertices.size());
    }

    // Index of the antipodal vertex (reflection through the centroid), or -1
    // when no vertex sits there (tetrahedron).
    int antipode(int i) const {
        const Eigen::Vector3d w = 2.0 * centroid() - vertices[i];
        for (int j = 0; j < size(); ++j) {
            if ((vertices[j] - w).norm() < 1e-9 * (edge_length > 0 ? edge_length : 1.0))
                return j;
        }
        return -1;
    }
};

struct CouplingMatrix {
    RealMatrix J;              // symmetric, zero diagonal, units 1/time (hbar = 1)
    CouplingMode mode{CouplingMode::all_pairs};
    double v{1.0};             // dipole strength

    double nearest_neighbor_value() const {
        double m = 0.0;
        for (int i = 0; i < J.rows(); ++i)
            for (int j = 0; j < J.cols(); ++j) m = std::max(m, J(i, j));
        return m;
    }
};

namespace detail {

inline std::vector<Eigen::Vector3d> vertex_table(Solid kind) {
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    const double ip = 1.0 / phi;
    const double s2 = 1.0 / std::sqrt(2.0);
    std::vector<Eigen::Vector3d> v;
    switch (kind) {
        case Solid::tetrahedron: {
            // alternate cube corners, scaled to edge length 1 (the paper prints
            // no tetrahedron coordinates)
            const double a = 1.0 / (2.0 * std::sqrt(2.0));
            v = {{a, a, a}, {a, -a, -a}, {-a, a, -a}, {-a, -a, a}};
            break;
        }
        case Solid::octahedron:
            // caption order: (0,0,+-1/sqrt2),(0,+-1/sqrt2,0),(+-1/sqrt2,0,0);
            // antipodal pairs (1,2),(3,4),(5,6), unit edge
            v = {{0, 0, s2}, {0, 0, -s2}, {0, s2, 0}, {0, -s2, 0}, {s2, 0, 0}, {-s2, 0, 0}};
            break;
        case Solid::cube:
            // site 1 at the origin, site 7 = (1,1,1) its antipode; listing chosen
            // so antipodal pairs are (1,7),(2,5),(3,6),(4,8) and site 8 is a
            // nearest neighbor of site 1 (initial conditions charge site 1, the
            // sink attaches to site 8)
            v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0},
                 {0, 1, 1}, {1, 0, 1}, {1, 1, 1}, {0, 0, 1}};
            break;
        case Solid::icosahedron:
            // caption set (0,+-phi,+-1),(+-1,0,+-phi),(+-phi,+-1,0); listing
            // chosen so sites 1..4 are nearest neighbors of site 12 (the
            // sink-attached site) and site 9 is the antipode of site 12
            v = {{0, phi, 1}, {0, phi, -1}, {1, 0, phi}, {1, 0, -phi},
                 {-1, 0, phi}, {0, -phi, 1}, {-1, 0, -phi}, {0, -phi, -1},
                 {-phi, -1, 0}, {phi, -1, 0}, {-phi, 1, 0}, {phi, 1, 0}};
            break;
        case Solid::dodecahedron: {
            // regular set keeping the caption's printed rings (+-1,+-1,+-1),
            // (0,+-phi,+-1/phi), (+-phi,+-1/phi,0); the caption's remaining ring
            // is inconsistent with regularity and is replaced by (+-1/phi,0,+-phi).
            // Listing by graph distance from the sink site 20 = (1,1,1):
            // sites 1,5,9 = its nearest neighbors, 2,6,10 their antipodes,
            // 3,4,7,8,11,12 = second shell, 13..18 = third shell, 19 = antipode.
            const Eigen::Vector3d s{1, 1, 1};
            const Eigen::Vector3d n1{0, phi, ip}, n2{phi, ip, 0}, n3{ip, 0, phi};
            const Eigen::Vector3d a1{-1, 1, 1}, a2{0, phi, -ip};      // shell 2 via n1
            const Eigen::Vector3d b1{1, 1, -1}, b2{phi, -ip, 0};      // shell 2 via n2
            const Eigen::Vector3d c1{1, -1, 1}, c2{-ip, 0, phi};      // shell 2 via n3
            v = {n1, -n1, a1, a2, n2, -n2, b1, b2, n3, -n3, c1, c2,
                 -a1, -a2, -b1, -b2, -c1, -c2, -s, s};
            break;
        }
    }
    return v;
}

} // namespace detail

// Construct a solid: coordinates as printed in the paper's captions where
// given, adjacency = minimal pairwise distance within relative tolerance 1e-9.
inline PlatonicSolid build_solid(Solid kind) {
    PlatonicSolid sol;
    sol.kind = kind;
    sol.vertices = detail::vertex_table(kind);
    const int n = sol.size();

    double dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) dmin = std::min(dmin, sol.distance(i, j));
    sol.edge_length = dmin;

    sol.adjacency.resize(n, n);
    sol.adjacency.setConstant(false);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && std::abs(sol.distance(i, j) - dmin) < 1e-9 * dmin)
                sol.adjacency(i, j) = true;
    return sol;
}

// N_c = vertex degree + 1 (all Platonic vertices have the same degree).
inline int coordination_number(const PlatonicSolid& s) { return s.degree(0) + 1; }

// J[i][j] = v / r_ij^3 for coupled pairs, zero otherwise. In
// nearest-neighbor mode only adjacent pairs couple (all entries equal).
inline CouplingMatrix coupling_matrix(const PlatonicSolid& s, CouplingMode mode,
                                      double v = 1.0) {
    if (!(v > 0.0)) throw std::invalid_argument("coupling_matrix: v must be positive");
    const int n = s.size();
    CouplingMatrix c;
    c.mode = mode;
    c.v = v;
    c.J = RealMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (mode == CouplingMode::nearest_neighbor && !s.adjacency(i, j)) continue;
            const double r = s.distance(i, j);
            c.J(i, j) = v / (r * r * r);
        }
    }
    return c;
}

} // namespace platonet
