/**
 * @file grid.cpp
 * @brief Grid geometry, Dirichlet data and field export
 */

#include "clab/grid.hpp"

#include "clab/errors.hpp"
#include "clab/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace clab {

Grid2D::Grid2D(double a_, double b_, int nx, int ny) : a(a_), b(b_), Nx(nx), Ny(ny) {
    if (!(a > 0.0 && b > 0.0)) throw DomainError("Grid2D: a and b must be positive");
    if (Nx < 8 || Ny < 8) throw DomainError("Grid2D: need at least 8 intervals per direction");
    const double r = a / hx();
    if (std::abs(r - std::round(r)) > 1e-9)
        throw DomainError("Grid2D: x = 0 must be a grid line (a/hx = " + fmt17(r) + ")");
}

int Grid2D::i0() const { return static_cast<int>(std::lround(a / hx())); }

Field2D sample(const Grid2D& g, const std::function<double(double, double)>& f) {
    Field2D out(g);
    for (int j = 0; j <= g.Ny; ++j)
        for (int i = 0; i <= g.Nx; ++i) out(i, j) = f(g.x(i), g.y(j));
    return out;
}

bool on_boundary(const Grid2D& g, int i, int j) {
    return i == 0 || j == 0 || i == g.Nx || j == g.Ny;
}

double dirichlet_value(const Grid2D& g, int i, int j) {
    if (j == 0) return 0.0;
    if (j == g.Ny) return 1.0;
    const double y = g.y(j);
    if (i == 0) return std::pow(y, 4.0 / 3.0);
    if (i == g.Nx) return y;
    throw DomainError("dirichlet_value: interior node");
}

void impose_dirichlet(Field2D& f) {
    const Grid2D& g = f.grid;
    for (int j = 0; j <= g.Ny; ++j)
        for (int i = 0; i <= g.Nx; ++i)
            if (on_boundary(g, i, j)) f(i, j) = dirichlet_value(g, i, j);
}

double boundary_distance(const Grid2D& g, double x, double y) {
    return std::min({x + g.a, g.b - x, y, 1.0 - y});
}

std::string field_csv(const Field2D& f, const std::string& name) {
    const Grid2D& g = f.grid;
    std::ostringstream os;
    os << "# field=" << name << " a=" << fmt17(g.a) << " b=" << fmt17(g.b) << " Nx=" << g.Nx
       << " Ny=" << g.Ny << "\n";
    os << "i,j,x,y,u\n";
    for (int j = 0; j <= g.Ny; ++j)
        for (int i = 0; i <= g.Nx; ++i)
            os << i << "," << j << "," << fmt17(g.x(i)) << "," << fmt17(g.y(j)) << ","
               << fmt17(f(i, j)) << "\n";
    return os.str();
}

}  // namespace clab
