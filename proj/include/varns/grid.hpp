#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace varns {

enum class Boundary { Periodic, Wall };

std::string_view to_string(Boundary b);
Boundary boundary_from_string(std::string_view s);

/// Structured space-time mesh on a box [0, extent_0] x ... x [0, tau].
///
/// Spatial node k on a Wall axis sits at k * h with h = extent / (n - 1), so
/// both end points are nodes. On a Periodic axis h = extent / n and the node at
/// x = extent is the image of node 0. A single time node encodes a steady
/// problem.
///
/// Linear node numbering is time-major, then axis0-major:
///   index = t * space_size() + (i0 * n1 + i1) * n2 + i2
class Grid {
public:
    static constexpr int max_dim = 3;

    Grid() = default;
    Grid(int dim, std::array<double, max_dim> extent, std::array<int, max_dim> nodes,
         std::array<Boundary, max_dim> boundary, int time_nodes = 1, double dt = 0.0);

    /// Convenience: same extent, node count and boundary kind on every axis.
    static Grid uniform(int dim, double extent, int nodes, Boundary boundary,
                        int time_nodes = 1, double dt = 0.0);

    int dim() const { return dim_; }
    double extent(int axis) const { return extent_.at(check_axis(axis)); }
    int nodes(int axis) const { return nodes_.at(check_axis(axis)); }
    Boundary boundary(int axis) const { return boundary_.at(check_axis(axis)); }
    double spacing(int axis) const { return spacing_.at(check_axis(axis)); }
    int time_nodes() const { return time_nodes_; }
    double dt() const { return dt_; }
    double tau() const { return dt_ * static_cast<double>(time_nodes_ - 1); }
    bool steady() const { return time_nodes_ == 1; }

    bool has_wall() const;
    bool all_periodic() const { return !has_wall(); }

    std::size_t space_size() const { return space_size_; }
    std::size_t size() const { return space_size_ * static_cast<std::size_t>(time_nodes_); }

    /// Row-major strides in the spatial index; unused axes have stride 0.
    std::size_t stride(int axis) const { return stride_.at(check_axis(axis)); }

    std::size_t space_index(std::array<int, max_dim> idx) const;
    std::array<int, max_dim> space_multi_index(std::size_t s) const;
    std::size_t index(std::size_t space, int time) const {
        return static_cast<std::size_t>(time) * space_size_ + space;
    }

    double coordinate(int axis, int i) const { return spacing(axis) * i; }
    double time(int k) const { return dt_ * k; }

    /// True if spatial node s lies on a face of a Wall axis.
    bool on_wall(std::size_t s) const;

    /// Same spatial layout with a single (steady) time node.
    Grid steady_slice() const;
    /// Same spatial layout with a different time discretization.
    Grid with_time(int time_nodes, double dt) const;

    bool operator==(const Grid&) const = default;

private:
    int check_axis(int axis) const;

    int dim_ = 1;
    std::array<double, max_dim> extent_{1.0, 1.0, 1.0};
    std::array<int, max_dim> nodes_{3, 1, 1};
    std::array<Boundary, max_dim> boundary_{Boundary::Wall, Boundary::Wall, Boundary::Wall};
    std::array<double, max_dim> spacing_{0.5, 0.0, 0.0};
    std::array<std::size_t, max_dim> stride_{1, 0, 0};
    std::size_t space_size_ = 3;
    int time_nodes_ = 1;
    double dt_ = 0.0;
};

} // namespace varns
