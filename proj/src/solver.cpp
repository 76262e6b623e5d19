#include "varns/solver.hpp"

#include "varns/errors.hpp"
#include "varns/io.hpp"
#include "varns/lagrangian.hpp"
#include "varns/operators.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace varns {
namespace {

using Vector = Eigen::VectorXd;
using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using Triplets = std::vector<Eigen::Triplet<double>>;
using LU = Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>>;

Vector to_vector(const ScalarField& f) {
    return Eigen::Map<const Vector>(f.values().data(), static_cast<Eigen::Index>(f.size()));
}

ScalarField to_field(const Grid& g, const Vector& v) {
    return ScalarField(g, std::vector<double>(v.data(), v.data() + v.size()));
}

double rms(const Vector& v) {
    return v.size() == 0 ? 0.0 : v.norm() / std::sqrt(static_cast<double>(v.size()));
}

/// Pressure modes invisible to the central gradient: on every Periodic axis
/// with an even node count, odd and even nodes decouple.
bool splits_parity(const Grid& g, int axis) {
    return g.boundary(axis) == Boundary::Periodic && g.nodes(axis) % 2 == 0;
}

int parity_class(const Grid& g, std::size_t s) {
    const auto idx = g.space_multi_index(s);
    int cls = 0;
    for (int a = 0; a < g.dim(); ++a)
        if (splits_parity(g, a)) cls = 2 * cls + idx[a] % 2;
    return cls;
}

int parity_class_count(const Grid& g) {
    int n = 1;
    for (int a = 0; a < g.dim(); ++a)
        if (splits_parity(g, a)) n *= 2;
    return n;
}

/// One representative per parity class, away from walls.
std::vector<char> pressure_pins(const Grid& g) {
    std::vector<char> pin(g.space_size(), 0);
    for (std::size_t s = 0; s < g.space_size(); ++s) {
        const auto idx = g.space_multi_index(s);
        bool rep = true;
        for (int a = 0; a < g.dim(); ++a) {
            const int want_lo = g.boundary(a) == Boundary::Wall ? 1 : 0;
            const int want_hi = want_lo + (splits_parity(g, a) ? 1 : 0);
            rep = rep && idx[a] >= want_lo && idx[a] <= want_hi;
        }
        pin[s] = rep;
    }
    return pin;
}

/// Removes the mean of each parity class, level by level.
void normalise_pressure(ScalarField& P) {
    const Grid& g = P.grid();
    const int nc = parity_class_count(g);
    std::vector<int> cls(g.space_size());
    for (std::size_t s = 0; s < g.space_size(); ++s) cls[s] = parity_class(g, s);
    for (int t = 0; t < g.time_nodes(); ++t) {
        std::vector<double> sum(nc, 0.0), count(nc, 0.0);
        for (std::size_t s = 0; s < g.space_size(); ++s) {
            sum[cls[s]] += P.at(s, t);
            count[cls[s]] += 1.0;
        }
        for (std::size_t s = 0; s < g.space_size(); ++s) P.at(s, t) -= sum[cls[s]] / count[cls[s]];
    }
}

/// Appends the rows of `m` accepted by `keep` into the global triplet list.
void add_block(Triplets& trips, const SparseMatrix& m, Eigen::Index row_off, Eigen::Index col_off,
               const std::function<bool(Eigen::Index)>& keep, double scale = 1.0) {
    for (Eigen::Index row = 0; row < m.outerSize(); ++row) {
        if (!keep(row)) continue;
        for (SparseMatrix::InnerIterator it(m, row); it; ++it)
            trips.emplace_back(row_off + row, col_off + it.col(), scale * it.value());
    }
}

void add_identity(Triplets& trips, Eigen::Index n, Eigen::Index row_off, Eigen::Index col_off,
                  const std::function<bool(Eigen::Index)>& keep, double scale = 1.0) {
    for (Eigen::Index row = 0; row < n; ++row)
        if (keep(row)) trips.emplace_back(row_off + row, col_off + row, scale);
}

SparseMatrix diag(const Vector& v) {
    SparseMatrix m(v.size(), v.size());
    m.reserve(Eigen::VectorXi::Constant(v.size(), 1));
    for (Eigen::Index i = 0; i < v.size(); ++i) m.insert(i, i) = v[i];
    m.makeCompressed();
    return m;
}

ColMatrix build(Eigen::Index n, const Triplets& trips) {
    ColMatrix m(n, n);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

void factorize(LU& lu, const ColMatrix& m, const std::string& what) {
    lu.compute(m);
    if (lu.info() != Eigen::Success) throw NumericalError(what + ": sparse LU failed (" + lu.lastErrorMessage() + ")");
}

double uw_gap(const FieldQuartet& q) {
    double diff = 0.0, base = 0.0;
    for (int i = 0; i < q.u.dim(); ++i)
        for (std::size_t n = 0; n < q.p.size(); ++n) {
            diff += std::pow(q.u[i][n] - q.w[i][n], 2);
            base += q.u[i][n] * q.u[i][n];
        }
    return base > 0.0 ? std::sqrt(diff / base) : std::sqrt(diff);
}

} // namespace

void SolveConfig::validate() const {
    if (!(nu > 0.0)) throw DomainError("nu must be positive");
    if (!(newton_tol > 0.0)) throw DomainError("newton_tol must be positive");
    if (max_newton < 1) throw DomainError("max_newton must be at least 1");
    if (continuation_steps < 0) throw DomainError("continuation_steps must be non-negative");
    if (time_scheme != "CrankNicolson") throw DomainError("time_scheme must be CrankNicolson");
    if (!(linear_tol > 0.0)) throw DomainError("linear_tol must be positive");
    if (max_picard < 1) throw DomainError("max_picard must be at least 1");
    if (max_pseudo_steps < 1) throw DomainError("max_pseudo_steps must be at least 1");
}

std::string Trajectory::history_csv() const {
    io::CsvTable table({"iter", "residual", "u_w_gap", "J"});
    for (const auto& h : history)
        table.add_row({std::to_string(h.iter), io::format_real(h.residual),
                       io::format_real(h.u_w_gap), io::format_real(h.J)});
    return table.str();
}

FieldQuartet taylor_green(double nu, const Grid& g) {
    if (g.dim() != 2 || !g.all_periodic())
        throw DomainError("Taylor-Green data needs a 2D periodic grid");
    const double two_pi = 2.0 * std::numbers::pi;
    for (int a = 0; a < 2; ++a)
        if (std::abs(g.extent(a) - two_pi) > 1e-12)
            throw DomainError("Taylor-Green data needs extents of 2 pi");
    FieldQuartet q = FieldQuartet::zeros(g);
    q.u[0] = ScalarField::sample(g, [nu](const std::array<double, 3>& x, double t) {
        return -std::cos(x[0]) * std::sin(x[1]) * std::exp(-2.0 * nu * t);
    });
    q.u[1] = ScalarField::sample(g, [nu](const std::array<double, 3>& x, double t) {
        return std::sin(x[0]) * std::cos(x[1]) * std::exp(-2.0 * nu * t);
    });
    const ScalarField P = ScalarField::sample(g, [nu](const std::array<double, 3>& x, double t) {
        return -0.25 * (std::cos(2.0 * x[0]) + std::cos(2.0 * x[1])) * std::exp(-4.0 * nu * t);
    });
    q.p = P;
    for (std::size_t n = 0; n < P.size(); ++n)
        q.p[n] -= 0.5 * (q.u[0][n] * q.u[0][n] + q.u[1][n] * q.u[1][n]);
    q.w = q.u;
    q.r = q.p;
    return q;
}

ScalarField physical_pressure(const VectorField& u, const ScalarField& p) {
    ScalarField P = p;
    for (int i = 0; i < u.dim(); ++i)
        for (std::size_t n = 0; n < P.size(); ++n) P[n] += 0.5 * u[i][n] * u[i][n];
    return P;
}

Trajectory march_reduced(const VectorField& initial, const SolveConfig& config, const Grid& grid) {
    config.validate();
    if (grid.dim() != 2 || !grid.all_periodic())
        throw DomainError("march_reduced needs a 2D periodic grid");
    if (grid.time_nodes() < 2 || !(grid.dt() > 0.0))
        throw DomainError("march_reduced needs at least two time nodes and dt > 0");
    const Grid slice = grid.steady_slice();
    if (initial.dim() != 2 || !(initial.grid() == slice))
        throw DomainError("initial field must live on the steady slice of the grid");
    const double div0 = divergence(initial).max_abs();
    if (div0 > 1e-8) {
        std::ostringstream msg;
        msg << "initial field is not discretely divergence-free (max |div| = " << div0 << ")";
        throw DomainError(msg.str());
    }

    const Eigen::Index S = static_cast<Eigen::Index>(slice.space_size());
    const double dt = grid.dt(), nu = config.nu;
    const SparseMatrix G[2] = {gradient_matrix(slice, 0), gradient_matrix(slice, 1)};
    const SparseMatrix L = laplacian_matrix(slice);
    SparseMatrix I(S, S);
    I.setIdentity();

    // Wide-stencil pressure Poisson operator with one pinned node per class.
    const auto pins = pressure_pins(slice);
    const SparseMatrix K = SparseMatrix(G[0] * G[0]) + SparseMatrix(G[1] * G[1]);
    Triplets kt;
    add_block(kt, K, 0, 0, [&](Eigen::Index r) { return !pins[r]; });
    add_identity(kt, S, 0, 0, [&](Eigen::Index r) { return pins[r] != 0; });
    LU poisson;
    factorize(poisson, build(S, kt), "pressure projection");

    const int T = grid.time_nodes();
    std::vector<std::array<Vector, 2>> levels(T);
    levels[0] = {to_vector(initial[0]), to_vector(initial[1])};
    std::vector<Vector> half_pressure(T - 1);
    Vector P = Vector::Zero(S);

    Trajectory traj;
    for (int n = 0; n + 1 < T; ++n) {
        const auto& vn = levels[n];
        std::array<Vector, 2> vk = vn;
        bool done = false;
        double change = 0.0;
        int k = 0;
        for (; k < config.max_picard && !done; ++k) {
            const Vector a0 = 0.5 * (vk[0] + vn[0]);
            const Vector a1 = 0.5 * (vk[1] + vn[1]);
            const SparseMatrix A = SparseMatrix(diag(a0) * G[0]) + SparseMatrix(diag(a1) * G[1]);
            const SparseMatrix lhs = I / dt + 0.5 * A - 0.5 * nu * L;
            const SparseMatrix rhs = I / dt - 0.5 * A + 0.5 * nu * L;
            LU momentum;
            factorize(momentum, ColMatrix(lhs), "momentum step");
            std::array<Vector, 2> vstar;
            for (int i = 0; i < 2; ++i) vstar[i] = momentum.solve(rhs * vn[i] - G[i] * P);
            Vector div = (G[0] * vstar[0] + G[1] * vstar[1]) / dt;
            for (Eigen::Index s = 0; s < S; ++s)
                if (pins[s]) div[s] = 0.0;
            const Vector phi = poisson.solve(div);
            if (!phi.allFinite()) throw NumericalError("pressure projection produced non-finite values");
            change = 0.0;
            double scale = 1.0;
            for (int i = 0; i < 2; ++i) {
                const Vector corr = dt * (G[i] * phi);
                const Vector next = vstar[i] - corr;
                change = std::max({change, (next - vk[i]).cwiseAbs().maxCoeff(),
                                   corr.cwiseAbs().maxCoeff()});
                scale = std::max(scale, next.cwiseAbs().maxCoeff());
                vk[i] = next;
            }
            P += phi;
            done = change <= config.linear_tol * scale;
        }
        if (!done) {
            std::ostringstream msg;
            msg << "Picard iteration did not converge at step " << n + 1 << " (change " << change
                << ")";
            throw NumericalError(msg.str());
        }
        levels[n + 1] = vk;
        half_pressure[n] = P;
        traj.history.push_back({n + 1, change, 0.0, 0.0});
    }

    FieldQuartet q = FieldQuartet::zeros(grid);
    ScalarField Pfull(grid);
    for (int t = 0; t < T; ++t) {
        Vector Pt;
        if (T == 2)
            Pt = half_pressure[0];
        else if (t == 0)
            Pt = 1.5 * half_pressure[0] - 0.5 * half_pressure[1];
        else if (t == T - 1)
            Pt = 1.5 * half_pressure[T - 2] - 0.5 * half_pressure[T - 3];
        else
            Pt = 0.5 * (half_pressure[t - 1] + half_pressure[t]);
        for (Eigen::Index s = 0; s < S; ++s) {
            for (int i = 0; i < 2; ++i) q.u[i].at(s, t) = levels[t][i][s];
            Pfull.at(s, t) = Pt[s];
        }
    }
    normalise_pressure(Pfull);
    q.p = Pfull;
    for (std::size_t n = 0; n < q.p.size(); ++n)
        q.p[n] -= 0.5 * (q.u[0][n] * q.u[0][n] + q.u[1][n] * q.u[1][n]);
    q.w = q.u;
    q.r = q.p;
    traj.state = std::move(q);
    traj.converged = true;
    traj.iterations = T - 1;
    traj.residual = traj.history.empty() ? 0.0 : traj.history.back().residual;
    traj.u_w_gap = 0.0;
    if (T >= 3) {
        const LagrangianReport rep = evaluate_lagrangian(traj.state, nu);
        traj.J = rep.J;
        traj.J_scale = rep.magnitude;
    }
    return traj;
}

namespace {

/// Discrete Euler-Lagrange system of the dual functional with the space-time
/// constraint rows described at newton_dual.
class DualSystem {
public:
    DualSystem(const Grid& g, const VectorField& initial, double c)
        : g_(g), d_(g.dim()), S_(static_cast<Eigen::Index>(g.space_size())),
          N_(static_cast<Eigen::Index>(g.size())), T_(g.time_nodes()), c_(c),
          L_(laplacian_matrix(g)), Dt_(time_derivative_matrix(g)), pins_(pressure_pins(g)) {
        for (int a = 0; a < d_; ++a) G_.push_back(gradient_matrix(g, a));
        for (int i = 0; i < d_; ++i) initial_.push_back(to_vector(initial[i]));
    }

    Eigen::Index size() const { return (2 * d_ + 2) * N_; }

    Vector pack(const FieldQuartet& q) const {
        Vector x(size());
        for (int i = 0; i < d_; ++i) {
            x.segment(u(i), N_) = to_vector(q.u[i]);
            x.segment(w(i), N_) = to_vector(q.w[i]);
        }
        x.segment(p(), N_) = to_vector(q.p);
        x.segment(r(), N_) = to_vector(q.r);
        return x;
    }

    FieldQuartet unpack(const Vector& x) const {
        FieldQuartet q = FieldQuartet::zeros(g_);
        for (int i = 0; i < d_; ++i) {
            q.u[i] = to_field(g_, x.segment(u(i), N_));
            q.w[i] = to_field(g_, x.segment(w(i), N_));
        }
        q.p = to_field(g_, x.segment(p(), N_));
        q.r = to_field(g_, x.segment(r(), N_));
        return q;
    }

    Vector residual(const Vector& x, double nu) const {
        const Fields f = fields(x);
        std::vector<Vector> Ru(d_), Rw(d_);
        for (int i = 0; i < d_; ++i) {
            Ru[i] = nu * (L_ * f.u[i]) - G_[i] * f.p - Dt_ * f.w[i];
            Rw[i] = nu * (L_ * f.w[i]) - G_[i] * f.r - Dt_ * f.u[i];
            for (int j = 0; j < d_; ++j) {
                Ru[i] -= 0.5 * f.s[j].cwiseProduct(f.gw[i][j] + f.gw[j][i]);
                Rw[i] -= 0.5 * f.s[j].cwiseProduct(f.gu[i][j] + f.gu[j][i]);
            }
        }
        Vector divu = Vector::Zero(N_), divw = Vector::Zero(N_);
        for (int i = 0; i < d_; ++i) {
            divu += f.gu[i][i];
            divw += f.gw[i][i];
        }

        Vector F(size());
        for (Eigen::Index n = 0; n < N_; ++n) {
            const int t = time(n);
            const Eigen::Index s = n % S_;
            for (int i = 0; i < d_; ++i) {
                if (t == 0) {
                    F[u(i) + n] = f.u[i][n] - initial_[i][s];
                    F[w(i) + n] = f.w[i][n] - initial_[i][s];
                } else if (t == T_ - 1) {
                    F[u(i) + n] = f.u[i][n] - f.w[i][n];
                    F[w(i) + n] = Ru[i][n] + Rw[i][n];
                } else {
                    F[u(i) + n] = Ru[i][n];
                    F[w(i) + n] = Rw[i][n];
                }
            }
            F[p() + n] = pinned(n) ? f.p[n] - c_ : divu[n];
            if (t == T_ - 1)
                F[r() + n] = f.p[n] - f.r[n];
            else
                F[r() + n] = pinned(n) ? f.r[n] - c_ : divw[n];
        }
        return F;
    }

    ColMatrix jacobian(const Vector& x, double nu) const {
        const Fields f = fields(x);
        auto interior = [&](Eigen::Index n) { return time(n) > 0 && time(n) < T_ - 1; };
        auto last = [&](Eigen::Index n) { return time(n) == T_ - 1; };
        auto first = [&](Eigen::Index n) { return time(n) == 0; };
        auto rows_w = [&](Eigen::Index n) { return interior(n) || last(n); };

        SparseMatrix advect(N_, N_); // sum_j diag(s_j) G_j
        for (int j = 0; j < d_; ++j) advect += SparseMatrix(diag(f.s[j]) * G_[j]);

        Triplets trips;
        for (int i = 0; i < d_; ++i) {
            // Momentum rows of u_i: interior levels own them, the last level
            // adds them into the w_i rows.
            for (int k = 0; k < d_; ++k) {
                const SparseMatrix sym_w = diag(0.5 * (f.gw[i][k] + f.gw[k][i]));
                const SparseMatrix sym_u = diag(0.5 * (f.gu[i][k] + f.gu[k][i]));
                SparseMatrix du_uk = -sym_w;   // dRu_i / du_k
                SparseMatrix du_wk = -sym_w - SparseMatrix(0.5 * diag(f.s[k]) * G_[i]);
                SparseMatrix dw_wk = -sym_u;   // dRw_i / dw_k
                SparseMatrix dw_uk = -sym_u - SparseMatrix(0.5 * diag(f.s[k]) * G_[i]);
                if (i == k) {
                    du_uk += nu * L_;
                    du_wk -= Dt_ + 0.5 * advect;
                    dw_wk += nu * L_;
                    dw_uk -= Dt_ + 0.5 * advect;
                }
                add_block(trips, du_uk, u(i), u(k), interior);
                add_block(trips, du_wk, u(i), w(k), interior);
                add_block(trips, du_uk, w(i), u(k), last);
                add_block(trips, du_wk, w(i), w(k), last);
                add_block(trips, dw_uk, w(i), u(k), rows_w);
                add_block(trips, dw_wk, w(i), w(k), rows_w);
            }
            add_block(trips, G_[i], u(i), p(), interior, -1.0);
            add_block(trips, G_[i], w(i), p(), last, -1.0);
            add_block(trips, G_[i], w(i), r(), rows_w, -1.0);

            add_identity(trips, N_, u(i), u(i), first);
            add_identity(trips, N_, w(i), w(i), first);
            add_identity(trips, N_, u(i), u(i), last);
            add_identity(trips, N_, u(i), w(i), last, -1.0);

            add_block(trips, G_[i], p(), u(i), [&](Eigen::Index n) { return !pinned(n); });
            add_block(trips, G_[i], r(), w(i),
                      [&](Eigen::Index n) { return !pinned(n) && !last(n); });
        }
        add_identity(trips, N_, p(), p(), [&](Eigen::Index n) { return pinned(n); });
        add_identity(trips, N_, r(), r(), [&](Eigen::Index n) { return pinned(n) && !last(n); });
        add_identity(trips, N_, r(), p(), last);
        add_identity(trips, N_, r(), r(), last, -1.0);
        return build(size(), trips);
    }

private:
    struct Fields {
        std::vector<Vector> u, w, s;
        Vector p, r;
        std::vector<std::vector<Vector>> gu, gw; // g[i][j] = G_j v_i
    };

    Fields fields(const Vector& x) const {
        Fields f;
        for (int i = 0; i < d_; ++i) {
            f.u.push_back(x.segment(u(i), N_));
            f.w.push_back(x.segment(w(i), N_));
            f.s.push_back(f.u.back() + f.w.back());
        }
        f.p = x.segment(p(), N_);
        f.r = x.segment(r(), N_);
        f.gu.assign(d_, {});
        f.gw.assign(d_, {});
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j) {
                f.gu[i].push_back(G_[j] * f.u[i]);
                f.gw[i].push_back(G_[j] * f.w[i]);
            }
        return f;
    }

    Eigen::Index u(int i) const { return i * N_; }
    Eigen::Index w(int i) const { return (d_ + i) * N_; }
    Eigen::Index p() const { return 2 * d_ * N_; }
    Eigen::Index r() const { return (2 * d_ + 1) * N_; }
    int time(Eigen::Index n) const { return static_cast<int>(n / S_); }
    /// Level 0 pins every pressure node; later levels pin one node per class.
    bool pinned(Eigen::Index n) const { return time(n) == 0 || pins_[n % S_]; }

    Grid g_;
    int d_;
    Eigen::Index S_, N_;
    int T_;
    double c_;
    std::vector<SparseMatrix> G_;
    SparseMatrix L_, Dt_;
    std::vector<char> pins_;
    std::vector<Vector> initial_;
};

} // namespace

Trajectory newton_dual(const FieldQuartet& seed, const VectorField& initial,
                       const SolveConfig& config, const Grid& grid) {
    config.validate();
    if (!grid.all_periodic())
        throw DomainError("newton_dual supports periodic grids only");
    if (grid.time_nodes() < 3) throw DomainError("newton_dual needs at least three time nodes");
    seed.check_consistent();
    if (!(seed.grid() == grid)) throw DomainError("seed lives on a different grid");
    if (initial.dim() != grid.dim() || !(initial.grid() == grid.steady_slice()))
        throw DomainError("initial data must live on the steady slice of the grid");

    double c = 0.0;
    for (std::size_t n = 0; n < seed.p.size(); ++n) c += 0.5 * (seed.p[n] + seed.r[n]);
    c /= static_cast<double>(seed.p.size());

    const DualSystem sys(grid, initial, c);
    Vector x = sys.pack(seed);

    std::vector<double> ladder;
    for (int k = 0; k < config.continuation_steps; ++k)
        ladder.push_back(std::max(config.nu, 10.0 * config.nu / std::pow(2.0, k)));
    ladder.push_back(config.nu);

    Trajectory traj;
    auto record = [&](int iter, double res, double nu) {
        const FieldQuartet q = sys.unpack(x);
        traj.history.push_back({iter, res, uw_gap(q), evaluate_lagrangian(q, nu).J});
    };

    int total = 0;
    bool converged = false;
    for (std::size_t stage = 0; stage < ladder.size(); ++stage) {
        const double nu = ladder[stage];
        Vector F = sys.residual(x, nu);
        double res = rms(F);
        if (stage == 0) record(0, res, nu);
        converged = res <= config.newton_tol;
        for (int it = 0; it < config.max_newton && !converged; ++it) {
            LU lu;
            lu.compute(sys.jacobian(x, nu));
            if (lu.info() != Eigen::Success)
                throw NumericalError("singular Jacobian in newton_dual at nu = " + io::format_real(nu) +
                                     "; increase continuation_steps");
            const Vector step = lu.solve(-F);
            if (!step.allFinite())
                throw NumericalError("non-finite Newton step; increase continuation_steps");
            double alpha = 1.0;
            bool accepted = false;
            for (int half = 0; half < 40; ++half, alpha *= 0.5) {
                const Vector trial = x + alpha * step;
                const Vector Ft = sys.residual(trial, nu);
                if (rms(Ft) < res) {
                    x = trial;
                    F = Ft;
                    res = rms(Ft);
                    accepted = true;
                    break;
                }
            }
            ++total;
            record(total, res, nu);
            if (!accepted) {
                traj.message = "line search failed to reduce the residual";
                break;
            }
            converged = res <= config.newton_tol;
        }
        traj.residual = res;
        if (!converged) {
            if (traj.message.empty())
                traj.message = "max_newton reached at nu = " + io::format_real(nu);
            break;
        }
    }

    traj.state = sys.unpack(x);
    traj.converged = converged;
    traj.iterations = total;
    traj.u_w_gap = uw_gap(traj.state);
    const LagrangianReport rep = evaluate_lagrangian(traj.state, config.nu);
    traj.J = rep.J;
    traj.J_scale = rep.magnitude;
    if (converged) traj.message = "converged";
    return traj;
}

VectorField cavity_lid(const Grid& g, double speed) {
    VectorField v(g);
    const int top = g.dim() - 1;
    if (g.boundary(top) != Boundary::Wall) throw DomainError("cavity lid needs a Wall last axis");
    for (int t = 0; t < g.time_nodes(); ++t)
        for (std::size_t s = 0; s < g.space_size(); ++s) {
            const auto idx = g.space_multi_index(s);
            if (idx[top] != g.nodes(top) - 1) continue;
            bool edge = false;
            for (int a = 0; a < top; ++a)
                edge = edge || (g.boundary(a) == Boundary::Wall &&
                                (idx[a] == 0 || idx[a] == g.nodes(a) - 1));
            if (edge || g.dim() < 2) continue;
            const double xi = g.coordinate(0, idx[0]) / g.extent(0);
            v[0].at(s, t) = speed * 16.0 * xi * xi * (1.0 - xi) * (1.0 - xi);
        }
    return v;
}

namespace {

/// Collocated steady reduced Navier-Stokes equations in (v, P).
class SteadySystem {
public:
    SteadySystem(const Grid& g, const VectorField& boundary)
        : g_(g), d_(g.dim()), S_(static_cast<Eigen::Index>(g.space_size())),
          L_(laplacian_matrix(g)), pins_(pressure_pins(g)), wall_(g.space_size()),
          partner_(g.space_size()) {
        for (int a = 0; a < d_; ++a) G_.push_back(gradient_matrix(g, a));
        for (int i = 0; i < d_; ++i) boundary_.push_back(to_vector(boundary[i]));
        for (std::size_t s = 0; s < g.space_size(); ++s) {
            wall_[s] = g.on_wall(s);
            if (!wall_[s]) continue;
            const auto idx = g.space_multi_index(s);
            for (int a = 0; a < d_; ++a) {
                if (g.boundary(a) != Boundary::Wall) continue;
                int step = 0;
                if (idx[a] == 0) step = 1;
                if (idx[a] == g.nodes(a) - 1) step = -1;
                if (step == 0) continue;
                auto i1 = idx, i2 = idx;
                i1[a] += step;
                i2[a] += 2 * step;
                partner_[s] = {static_cast<Eigen::Index>(g.space_index(i1)),
                               static_cast<Eigen::Index>(g.space_index(i2))};
                break;
            }
        }
    }

    Eigen::Index size() const { return (d_ + 1) * S_; }
    Eigen::Index P() const { return d_ * S_; }
    bool momentum_row(Eigen::Index row) const { return row < P() && !wall_[row % S_]; }

    Vector initial_guess() const {
        Vector x = Vector::Zero(size());
        for (int i = 0; i < d_; ++i)
            for (Eigen::Index s = 0; s < S_; ++s)
                if (wall_[s]) x[i * S_ + s] = boundary_[i][s];
        return x;
    }

    /// Momentum rows hold -(nu lap v - grad P - v.grad v) so that their
    /// Jacobian is positive near rest.
    Vector residual(const Vector& x, double nu) const {
        std::vector<Vector> v(d_);
        for (int i = 0; i < d_; ++i) v[i] = x.segment(i * S_, S_);
        const Vector Pv = x.segment(P(), S_);
        Vector F(size());
        Vector div = Vector::Zero(S_);
        for (int i = 0; i < d_; ++i) {
            Vector f = nu * (L_ * v[i]) - G_[i] * Pv;
            for (int j = 0; j < d_; ++j) f -= v[j].cwiseProduct(G_[j] * v[i]);
            div += G_[i] * v[i];
            for (Eigen::Index s = 0; s < S_; ++s)
                F[i * S_ + s] = wall_[s] ? v[i][s] - boundary_[i][s] : -f[s];
        }
        for (Eigen::Index s = 0; s < S_; ++s) {
            if (wall_[s])
                F[P() + s] = Pv[s] - 2.0 * Pv[partner_[s][0]] + Pv[partner_[s][1]];
            else
                F[P() + s] = pins_[s] ? Pv[s] : div[s];
        }
        return F;
    }

    ColMatrix jacobian(const Vector& x, double nu, double inv_dtau) const {
        std::vector<Vector> v(d_);
        for (int i = 0; i < d_; ++i) v[i] = x.segment(i * S_, S_);
        SparseMatrix advect(S_, S_);
        for (int j = 0; j < d_; ++j) advect += SparseMatrix(diag(v[j]) * G_[j]);
        auto interior = [&](Eigen::Index s) { return !wall_[s]; };
        Triplets trips;
        for (int i = 0; i < d_; ++i) {
            for (int k = 0; k < d_; ++k) {
                SparseMatrix m = diag(G_[k] * v[i]);
                if (i == k) m += advect - nu * L_;
                add_block(trips, m, i * S_, k * S_, interior);
            }
            add_block(trips, G_[i], i * S_, P(), interior);
            add_identity(trips, S_, i * S_, i * S_, interior, inv_dtau);
            add_identity(trips, S_, i * S_, i * S_, [&](Eigen::Index s) { return wall_[s] != 0; });
            add_block(trips, G_[i], P(), i * S_, [&](Eigen::Index s) { return !wall_[s] && !pins_[s]; });
        }
        for (Eigen::Index s = 0; s < S_; ++s) {
            if (wall_[s]) {
                trips.emplace_back(P() + s, P() + s, 1.0);
                trips.emplace_back(P() + s, P() + partner_[s][0], -2.0);
                trips.emplace_back(P() + s, P() + partner_[s][1], 1.0);
            } else if (pins_[s]) {
                trips.emplace_back(P() + s, P() + s, 1.0);
            }
        }
        return build(size(), trips);
    }

    FieldQuartet quartet(const Vector& x) const {
        FieldQuartet q = FieldQuartet::zeros(g_);
        for (int i = 0; i < d_; ++i) q.u[i] = to_field(g_, x.segment(i * S_, S_));
        ScalarField Pf = to_field(g_, x.segment(P(), S_));
        if (g_.all_periodic()) normalise_pressure(Pf);
        q.p = Pf;
        for (int i = 0; i < d_; ++i)
            for (Eigen::Index s = 0; s < S_; ++s) q.p[s] -= 0.5 * q.u[i][s] * q.u[i][s];
        q.w = q.u;
        q.r = q.p;
        return q;
    }

private:
    Grid g_;
    int d_;
    Eigen::Index S_;
    std::vector<SparseMatrix> G_;
    SparseMatrix L_;
    std::vector<char> pins_;
    std::vector<char> wall_;
    std::vector<std::array<Eigen::Index, 2>> partner_;
    std::vector<Vector> boundary_;
};

} // namespace

SteadyResult steady_solve(const VectorField& boundary, const SolveConfig& config, const Grid& grid) {
    config.validate();
    if (!grid.steady()) throw DomainError("steady_solve needs a steady grid");
    if (boundary.dim() != grid.dim() || !(boundary.grid() == grid))
        throw DomainError("boundary data lives on a different grid");

    const SteadySystem sys(grid, boundary);
    const double nu = config.nu;
    Vector x = sys.initial_guess();
    Vector F = sys.residual(x, nu);
    double res = rms(F);
    const double res0 = res;

    double hmin = std::numeric_limits<double>::infinity();
    for (int a = 0; a < grid.dim(); ++a) hmin = std::min(hmin, grid.spacing(a));
    const double dtau0 = hmin * hmin / nu;

    SteadyResult out;
    out.history.push_back({0, res, 0.0, 0.0});
    double best = res;
    int best_step = 0;
    int step = 0;
    bool converged = res <= config.newton_tol;
    while (!converged && step < config.max_pseudo_steps) {
        ++step;
        const double dtau = std::min(1e12, dtau0 * res0 / std::max(res, 1e-300));
        LU lu;
        lu.compute(sys.jacobian(x, nu, 1.0 / dtau));
        if (lu.info() != Eigen::Success)
            throw NumericalError("singular pseudo-time Jacobian in steady_solve");
        const Vector delta = lu.solve(-F);
        if (!delta.allFinite()) throw NumericalError("non-finite pseudo-time update in steady_solve");
        x += delta;
        F = sys.residual(x, nu);
        res = rms(F);
        out.history.push_back({step, res, 0.0, 0.0});
        if (!std::isfinite(res)) throw NumericalError("steady_solve diverged");
        converged = res <= config.newton_tol;
        if (res < 0.99 * best) {
            best = res;
            best_step = step;
        } else if (step - best_step >= 100) {
            out.message = "residual stagnated over 100 pseudo steps";
            break;
        }
    }
    out.state = sys.quartet(x);
    out.converged = converged;
    out.steps = step;
    out.residual = res;
    if (converged)
        out.message = "converged";
    else if (out.message.empty())
        out.message = "max_pseudo_steps reached";
    out.certificate = uniqueness_certificate(out.state, nu);
    return out;
}

} // namespace varns
