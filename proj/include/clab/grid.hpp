/**
 * @file grid.hpp
 * @brief Uniform node grid on (-a, b) x (0, 1) and node-sampled fields
 */
#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace clab {

/// Nx, Ny count intervals, so the grid has (Nx+1) x (Ny+1) nodes.
struct Grid2D {
    double a = 1.0;
    double b = 1.0;
    int Nx = 256;
    int Ny = 128;

    Grid2D() = default;
    Grid2D(double a_, double b_, int nx, int ny);

    double hx() const { return (a + b) / Nx; }
    double hy() const { return 1.0 / Ny; }
    double x(int i) const { return -a + i * hx(); }
    double y(int j) const { return j * hy(); }
    /// Column index of the line x = 0.
    int i0() const;
    std::size_t nodes() const { return static_cast<std::size_t>(Nx + 1) * (Ny + 1); }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * (Nx + 1) + i; }
    Grid2D refined() const { return Grid2D(a, b, 2 * Nx, 2 * Ny); }
};

struct Field2D {
    Grid2D grid;
    std::vector<double> u;

    Field2D() = default;
    explicit Field2D(const Grid2D& g, double fill = 0.0) : grid(g), u(g.nodes(), fill) {}

    double& operator()(int i, int j) { return u[grid.idx(i, j)]; }
    double operator()(int i, int j) const { return u[grid.idx(i, j)]; }
};

/// Sample f(x, y) at every node.
Field2D sample(const Grid2D& g, const std::function<double(double, double)>& f);

/// Dirichlet data u(x,0)=0, u(x,1)=1, u(-a,y)=y^{4/3}, u(b,y)=y at a node.
double dirichlet_value(const Grid2D& g, int i, int j);
bool on_boundary(const Grid2D& g, int i, int j);
/// Overwrite the boundary nodes with the Dirichlet data.
void impose_dirichlet(Field2D& f);

/// Distance to the rectangle boundary.
double boundary_distance(const Grid2D& g, double x, double y);

/// CSV with columns i,j,x,y,u and a comment header.
std::string field_csv(const Field2D& f, const std::string& name);

}  // namespace clab
