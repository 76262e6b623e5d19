#include "varns/grid.hpp"

#include "varns/errors.hpp"

#include <cmath>

namespace varns {

std::string_view to_string(Boundary b) {
    return b == Boundary::Periodic ? "periodic" : "wall";
}

Boundary boundary_from_string(std::string_view s) {
    if (s == "periodic" || s == "Periodic") return Boundary::Periodic;
    if (s == "wall" || s == "Wall") return Boundary::Wall;
    throw DomainError("unknown boundary kind '" + std::string(s) + "'");
}

Grid::Grid(int dim, std::array<double, max_dim> extent, std::array<int, max_dim> nodes,
           std::array<Boundary, max_dim> boundary, int time_nodes, double dt)
    : dim_(dim), extent_(extent), nodes_(nodes), boundary_(boundary), time_nodes_(time_nodes),
      dt_(dt) {
    if (dim < 1 || dim > max_dim) throw DomainError("grid dimension must be 1, 2 or 3");
    if (time_nodes < 1) throw DomainError("time_nodes must be >= 1");
    if (time_nodes > 1 && !(dt > 0.0)) throw DomainError("dt must be positive for unsteady grids");
    if (time_nodes == 1) dt_ = 0.0;
    for (int a = 0; a < max_dim; ++a) {
        if (a >= dim) {
            nodes_[a] = 1;
            extent_[a] = 0.0;
            spacing_[a] = 0.0;
            continue;
        }
        if (nodes_[a] < 3) throw DomainError("every axis needs at least 3 nodes");
        if (!(extent_[a] > 0.0) || !std::isfinite(extent_[a]))
            throw DomainError("axis extents must be positive and finite");
        spacing_[a] = boundary_[a] == Boundary::Wall ? extent_[a] / (nodes_[a] - 1)
                                                     : extent_[a] / nodes_[a];
    }
    space_size_ = 1;
    for (int a = max_dim - 1; a >= 0; --a) {
        stride_[a] = a < dim ? space_size_ : 0;
        space_size_ *= static_cast<std::size_t>(nodes_[a]);
    }
}

Grid Grid::uniform(int dim, double extent, int nodes, Boundary boundary, int time_nodes, double dt) {
    return Grid(dim, {extent, extent, extent}, {nodes, nodes, nodes}, {boundary, boundary, boundary},
                time_nodes, dt);
}

int Grid::check_axis(int axis) const {
    if (axis < 0 || axis >= dim_) throw DomainError("axis " + std::to_string(axis) + " out of range");
    return axis;
}

bool Grid::has_wall() const {
    for (int a = 0; a < dim_; ++a)
        if (boundary_[a] == Boundary::Wall) return true;
    return false;
}

std::size_t Grid::space_index(std::array<int, max_dim> idx) const {
    std::size_t s = 0;
    for (int a = 0; a < dim_; ++a) s += stride_[a] * static_cast<std::size_t>(idx[a]);
    return s;
}

std::array<int, Grid::max_dim> Grid::space_multi_index(std::size_t s) const {
    std::array<int, max_dim> idx{0, 0, 0};
    for (int a = 0; a < dim_; ++a) {
        idx[a] = static_cast<int>(s / stride_[a]);
        s %= stride_[a];
    }
    return idx;
}

bool Grid::on_wall(std::size_t s) const {
    const auto idx = space_multi_index(s);
    for (int a = 0; a < dim_; ++a)
        if (boundary_[a] == Boundary::Wall && (idx[a] == 0 || idx[a] == nodes_[a] - 1)) return true;
    return false;
}

Grid Grid::steady_slice() const { return with_time(1, 0.0); }

Grid Grid::with_time(int time_nodes, double dt) const {
    return Grid(dim_, extent_, nodes_, boundary_, time_nodes, dt);
}

} // namespace varns
