#pragma once

#include "varns/grid.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace varns {

/// Real values on every space-time node of a grid.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(Grid grid, double value = 0.0);
    ScalarField(Grid grid, std::vector<double> values);

    /// Samples f(x, t) with x padded to three coordinates.
    static ScalarField sample(const Grid& grid,
                              const std::function<double(const std::array<double, 3>&, double)>& f);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& at(std::size_t space, int time) { return values_[grid_.index(space, time)]; }
    double at(std::size_t space, int time) const { return values_[grid_.index(space, time)]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    std::span<const double> slice(int time) const;

    double max_abs() const;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double c);

private:
    Grid grid_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double c, ScalarField a);
/// Node-wise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

/// One ScalarField per spatial axis.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(const Grid& grid, double value = 0.0);
    explicit VectorField(std::vector<ScalarField> components);

    const Grid& grid() const { return components_.front().grid(); }
    int dim() const { return static_cast<int>(components_.size()); }

    ScalarField& operator[](int i) { return components_.at(static_cast<std::size_t>(i)); }
    const ScalarField& operator[](int i) const { return components_.at(static_cast<std::size_t>(i)); }

    double max_abs() const;

    VectorField& operator+=(const VectorField& o);
    VectorField& operator-=(const VectorField& o);
    VectorField& operator*=(double c);

private:
    std::vector<ScalarField> components_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double c, VectorField a);

/// The four unknowns (u, p, w, r) of the dual functional.
struct FieldQuartet {
    VectorField u;
    ScalarField p;
    VectorField w;
    ScalarField r;

    static FieldQuartet zeros(const Grid& grid);

    const Grid& grid() const { return p.grid(); }
    /// Throws DomainError if the four fields do not share one grid.
    void check_consistent() const;
    /// (w, r, u, p)
    FieldQuartet swapped() const { return {w, r, u, p}; }
};

FieldQuartet operator+(const FieldQuartet& a, const FieldQuartet& b);
FieldQuartet operator*(double c, const FieldQuartet& a);

/// Copies time level k of f onto a steady grid.
ScalarField extract_slice(const ScalarField& f, int time);
VectorField extract_slice(const VectorField& v, int time);

} // namespace varns
