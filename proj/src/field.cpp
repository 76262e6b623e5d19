#include "varns/field.hpp"

#include "varns/errors.hpp"

#include <algorithm>
#include <cmath>

namespace varns {

ScalarField::ScalarField(Grid grid, double value)
    : grid_(std::move(grid)), values_(grid_.size(), value) {}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw DomainError("value array does not match grid node count");
}

ScalarField ScalarField::sample(const Grid& grid,
                                const std::function<double(const std::array<double, 3>&, double)>& f) {
    ScalarField out(grid);
    for (int k = 0; k < grid.time_nodes(); ++k) {
        const double t = grid.time(k);
        for (std::size_t s = 0; s < grid.space_size(); ++s) {
            const auto idx = grid.space_multi_index(s);
            std::array<double, 3> x{0.0, 0.0, 0.0};
            for (int a = 0; a < grid.dim(); ++a) x[a] = grid.coordinate(a, idx[a]);
            out.at(s, k) = f(x, t);
        }
    }
    return out;
}

std::span<const double> ScalarField::slice(int time) const {
    return std::span<const double>(values_).subspan(grid_.index(0, time), grid_.space_size());
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    if (!(grid_ == o.grid_)) throw DomainError("grid mismatch in field addition");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    if (!(grid_ == o.grid_)) throw DomainError("grid mismatch in field subtraction");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double c, ScalarField a) { return a *= c; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid() == b.grid())) throw DomainError("grid mismatch in node-wise product");
    ScalarField out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

VectorField::VectorField(const Grid& grid, double value) {
    components_.reserve(static_cast<std::size_t>(grid.dim()));
    for (int i = 0; i < grid.dim(); ++i) components_.emplace_back(grid, value);
}

VectorField::VectorField(std::vector<ScalarField> components) : components_(std::move(components)) {
    if (components_.empty()) throw DomainError("vector field needs at least one component");
    const Grid& g = components_.front().grid();
    if (static_cast<int>(components_.size()) != g.dim())
        throw DomainError("component count must equal grid dimension");
    for (const auto& c : components_)
        if (!(c.grid() == g)) throw DomainError("vector components live on different grids");
}

double VectorField::max_abs() const {
    double m = 0.0;
    for (const auto& c : components_) m = std::max(m, c.max_abs());
    return m;
}

VectorField& VectorField::operator+=(const VectorField& o) {
    if (dim() != o.dim()) throw DomainError("component count mismatch");
    for (int i = 0; i < dim(); ++i) (*this)[i] += o[i];
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
    if (dim() != o.dim()) throw DomainError("component count mismatch");
    for (int i = 0; i < dim(); ++i) (*this)[i] -= o[i];
    return *this;
}

VectorField& VectorField::operator*=(double c) {
    for (auto& comp : components_) comp *= c;
    return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double c, VectorField a) { return a *= c; }

FieldQuartet FieldQuartet::zeros(const Grid& grid) {
    return {VectorField(grid), ScalarField(grid), VectorField(grid), ScalarField(grid)};
}

void FieldQuartet::check_consistent() const {
    const Grid& g = p.grid();
    if (!(r.grid() == g) || u.dim() != g.dim() || w.dim() != g.dim() || !(u.grid() == g) ||
        !(w.grid() == g))
        throw DomainError("fields of the quartet live on different grids");
}

FieldQuartet operator+(const FieldQuartet& a, const FieldQuartet& b) {
    return {a.u + b.u, a.p + b.p, a.w + b.w, a.r + b.r};
}

FieldQuartet operator*(double c, const FieldQuartet& a) {
    return {c * a.u, c * a.p, c * a.w, c * a.r};
}

ScalarField extract_slice(const ScalarField& f, int time) {
    const auto s = f.slice(time);
    return ScalarField(f.grid().steady_slice(), std::vector<double>(s.begin(), s.end()));
}

VectorField extract_slice(const VectorField& v, int time) {
    std::vector<ScalarField> comps;
    for (int i = 0; i < v.dim(); ++i) comps.push_back(extract_slice(v[i], time));
    return VectorField(std::move(comps));
}

} // namespace varns
