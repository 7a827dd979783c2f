#include "boxgas/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "boxgas/errors.hpp"
#include "boxgas/parallel.hpp"

namespace boxgas {

namespace {

using cplx = std::complex<double>;

constexpr double stability_limit = 0.1;
constexpr double trace_drift_limit = 1e-7;

double bohr(int m, int n)
{
    return static_cast<double>(m) * m - static_cast<double>(n) * n;
}

Eigen::MatrixXd eigenfunction_table(double L, int n_max, std::span<const double> x)
{
    Eigen::MatrixXd psi(static_cast<Eigen::Index>(x.size()), n_max);
    for (Eigen::Index i = 0; i < psi.rows(); ++i) {
        const double xi = x[static_cast<std::size_t>(i)];
        if (xi < -0.5 * L || xi > 0.5 * L)
            throw DomainError("density profile: x outside the trap");
        for (int m = 1; m <= n_max; ++m)
            psi(i, m - 1) = full_eigenfunction(m, xi, L);
    }
    return psi;
}

} // namespace

DephasingModel DephasingModel::uniform(double gamma)
{
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw ConfigError("dephasing rate must be non-negative");
    DephasingModel model;
    model.gamma_ = gamma;
    return model;
}

DephasingModel DephasingModel::per_pair(Eigen::MatrixXd rates)
{
    if (rates.rows() != rates.cols())
        throw ConfigError("dephasing rate table must be square");
    for (Eigen::Index i = 0; i < rates.rows(); ++i)
        for (Eigen::Index j = 0; j < rates.cols(); ++j) {
            if (i == j)
                continue;
            if (!(rates(i, j) >= 0.0) || !std::isfinite(rates(i, j)))
                throw ConfigError("dephasing rates must be non-negative");
            if (rates(i, j) != rates(j, i))
                throw ConfigError("dephasing rate table must be symmetric");
        }
    rates.diagonal().setZero();
    DephasingModel model;
    model.gamma_ = rates.size() > 0 ? rates.maxCoeff() : 0.0;
    model.rates_ = std::move(rates);
    return model;
}

double DephasingModel::rate(int m, int n) const
{
    if (m == n)
        return 0.0;
    if (!rates_)
        return gamma_;
    return (*rates_)(m - 1, n - 1);
}

double DephasingModel::max_rate(int n_max) const
{
    if (!rates_)
        return gamma_;
    return rates_->topLeftCorner(n_max, n_max).maxCoeff();
}

Eigen::MatrixXd DephasingModel::kossakowski(int n_max) const
{
    if (!rates_)
        return gamma_ * Eigen::MatrixXd::Identity(n_max, n_max);
    const double shift = max_rate(n_max);
    Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n_max, n_max, shift)
                        - rates_->topLeftCorner(n_max, n_max);
    c.diagonal().setConstant(shift);
    return c;
}

bool DephasingModel::completely_positive(int n_max) const
{
    if (!rates_)
        return gamma_ >= 0.0;
    // Any diagonal shift changes no decay rate, so test the most favourable one:
    // c PSD on some shift iff -Gamma is conditionally positive semidefinite,
    // i.e. -P Gamma P >= 0 with P the projector orthogonal to the all-ones vector.
    const Eigen::MatrixXd g = rates_->topLeftCorner(n_max, n_max);
    const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n_max, n_max)
                              - Eigen::MatrixXd::Constant(n_max, n_max, 1.0 / n_max);
    const Eigen::MatrixXd form = -P * g * P;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(form, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff());
}

void DephasingModel::validate(int n_max) const
{
    if (rates_ && rates_->rows() < n_max)
        throw ConfigError("dephasing rate table smaller than the basis");
}

QuenchState evolve_closed_form(const QuenchState& state, const DephasingModel& model, double t)
{
    if (!(t >= 0.0))
        throw DomainError("evolve_closed_form: t must be non-negative");
    const int n = state.n_max();
    model.validate(n);
    QuenchState out = state;
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n; ++i) {
            if (i == j)
                continue;
            const cplx factor = std::exp(cplx(-model.rate(i, j) * t, -bohr(i, j) * t));
            out.rho(i - 1, j - 1) *= factor;
        }
    return out;
}

QuenchState evolve_integrator(const QuenchState& state, const DephasingModel& model, double t_end,
                              double dt)
{
    const int n = state.n_max();
    model.validate(n);
    if (!(dt > 0.0))
        throw ConfigError("evolve_integrator: dt must be positive");
    if (!(t_end >= 0.0))
        throw ConfigError("evolve_integrator: t_end must be non-negative");
    const double omega_max = bohr(n, 1);
    const double fastest = std::max(omega_max, model.max_rate(n));
    if (dt * fastest > stability_limit) {
        std::ostringstream os;
        os << "evolve_integrator: dt = " << dt << " exceeds the stability limit "
           << stability_limit / fastest << " for n_max = " << n;
        throw ConfigError(os.str());
    }

    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
    for (int m = 1; m <= n; ++m)
        H(m - 1, m - 1) = static_cast<double>(m) * m;
    const Eigen::MatrixXd c = model.kossakowski(n);
    const Eigen::MatrixXcd K = c.diagonal().cast<cplx>().asDiagonal();
    const cplx minus_i(0.0, -1.0);

    auto generator = [&](const Eigen::MatrixXcd& rho) -> Eigen::MatrixXcd {
        Eigen::MatrixXcd out = minus_i * (H * rho - rho * H);
        out += c.cast<cplx>().cwiseProduct(rho);
        out -= 0.5 * (K * rho + rho * K);
        return out;
    };

    const long steps = t_end == 0.0 ? 0 : static_cast<long>(std::ceil(t_end / dt - 1e-9));
    const double h = steps > 0 ? t_end / static_cast<double>(steps) : 0.0;
    const cplx trace0 = state.rho.trace();

    QuenchState out = state;
    Eigen::MatrixXcd& rho = out.rho;
    for (long s = 0; s < steps; ++s) {
        const Eigen::MatrixXcd k1 = generator(rho);
        const Eigen::MatrixXcd k2 = generator(rho + 0.5 * h * k1);
        const Eigen::MatrixXcd k3 = generator(rho + 0.5 * h * k2);
        const Eigen::MatrixXcd k4 = generator(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (std::abs(rho.trace() - trace0) > trace_drift_limit)
        throw IntegrationError("evolve_integrator: trace drifted beyond 1e-7");
    return out;
}

std::vector<double> density_profile(const QuenchState& state, std::span<const double> x)
{
    const Eigen::MatrixXd psi = eigenfunction_table(state.basis.config().L, state.n_max(), x);
    const Eigen::MatrixXcd a = psi.cast<cplx>() * state.rho;
    std::vector<double> p(x.size());
    for (Eigen::Index i = 0; i < psi.rows(); ++i) {
        const cplx v = a.row(i).cwiseProduct(psi.row(i).cast<cplx>()).sum();
        if (std::abs(v.imag()) > 1e-10)
            throw DomainError("density profile: imaginary residue; state is not Hermitian");
        p[static_cast<std::size_t>(i)] = v.real();
    }
    return p;
}

std::vector<double> diagonal_profile(const TrapConfig& cfg, std::span<const double> d,
                                     std::span<const double> x)
{
    const int n = static_cast<int>(d.size());
    const Eigen::MatrixXd psi = eigenfunction_table(cfg.L, n, x);
    const Eigen::Map<const Eigen::VectorXd> w(d.data(), n);
    const Eigen::VectorXd p = psi.cwiseAbs2() * w;
    return {p.data(), p.data() + p.size()};
}

std::vector<double> equilibrium_profile(const TrapConfig& cfg, std::span<const double> x)
{
    return diagonal_profile(cfg, thermal_occupations(cfg, Trap::Full), x);
}

std::vector<double> steady_profile(const TrapConfig& cfg, std::span<const double> x, int n_max)
{
    const auto dist = diagonal_distribution(cfg, dynamics_n_max(cfg, n_max));
    return diagonal_profile(cfg, dist.d, x);
}

std::vector<double> trap_grid(double L, int nx)
{
    if (nx < 2)
        throw ConfigError("profile grid needs at least 2 points");
    std::vector<double> x(static_cast<std::size_t>(nx));
    for (int i = 0; i < nx; ++i)
        x[static_cast<std::size_t>(i)] = -0.5 * L + L * i / (nx - 1);
    x.back() = 0.5 * L;
    return x;
}

double trapezoid(std::span<const double> x, std::span<const double> y)
{
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

int dynamics_n_max(const TrapConfig& cfg, int requested)
{
    if (requested > 0)
        return requested;
    return choose_n_max(cfg, 1e-7, 1e-6, 128);
}

ProfileGrid dynamics_movie(const TrapConfig& cfg, const DephasingModel& model,
                           std::span<const std::pair<double, double>> windows, int nx, int nt, int n_max,
                           int workers)
{
    cfg.validate();
    if (nt < 2)
        throw ConfigError("dynamics_movie: nt must be >= 2");
    double last_end = -1.0;
    for (const auto& [start, end] : windows) {
        if (!(start >= 0.0) || !(end > start))
            throw ConfigError("dynamics_movie: each window needs 0 <= t_start < t_end");
        if (start < last_end)
            throw ConfigError("dynamics_movie: windows must be increasing and non-overlapping");
        last_end = end;
    }

    ProfileGrid grid;
    grid.n_max = dynamics_n_max(cfg, n_max);
    const int n = grid.n_max;
    model.validate(n);
    grid.x = trap_grid(cfg.L, nx);
    for (const auto& [start, end] : windows)
        for (int j = 0; j < nt; ++j)
            grid.t.push_back(start + (end - start) * j / (nt - 1));

    const QuenchState state = build_quench_state(cfg, n);

    // Nyquist checks against the levels that actually carry population.
    int populated = 1;
    for (int m = n; m >= 1; --m)
        if (state.rho(m - 1, m - 1).real() > 1e-6) {
            populated = m;
            break;
        }
    const double omega = bohr(populated, 1);
    for (const auto& [start, end] : windows) {
        const double step = (end - start) / (nt - 1);
        if (omega > 0.0 && step > std::numbers::pi / omega) {
            std::ostringstream os;
            os << "time step " << step << " in window [" << start << ", " << end
               << "] exceeds the Nyquist limit " << std::numbers::pi / omega << " of levels up to m = "
               << populated;
            grid.warnings.push_back(os.str());
        }
    }
    if (nx - 1 < 2 * populated) {
        std::ostringstream os;
        os << "nx = " << nx << " under-resolves populated levels up to m = " << populated;
        grid.warnings.push_back(os.str());
    }

    const Eigen::MatrixXd psi = eigenfunction_table(cfg.L, n, grid.x);
    grid.p.resize(static_cast<Eigen::Index>(grid.x.size()), static_cast<Eigen::Index>(grid.t.size()));

    if (model.is_uniform()) {
        // rho(0) = V V^T with V(m, k) = <psi_m|phi_k> sqrt(p_k); the coherent part
        // evolves as a pure-state ensemble and the rest is the dephased profile.
        const auto p = thermal_occupations(cfg, Trap::Half);
        const auto levels = static_cast<Eigen::Index>(p.size());
        Eigen::MatrixXd V(n, levels);
        for (Eigen::Index k = 0; k < levels; ++k)
            for (int m = 1; m <= n; ++m)
                V(m - 1, k) = overlap(m, static_cast<int>(k + 1)) * std::sqrt(p[static_cast<std::size_t>(k)]);
        const Eigen::VectorXd populations = state.rho.diagonal().real();
        const Eigen::VectorXd dephased = psi.cwiseAbs2() * populations;
        parallel_for(grid.t.size(), workers, [&](std::size_t j) {
            const double t = grid.t[j];
            Eigen::VectorXcd phase(n);
            for (int m = 1; m <= n; ++m)
                phase(m - 1) = std::polar(1.0, -static_cast<double>(m) * m * t);
            const Eigen::MatrixXcd b = psi.cast<cplx>() * (phase.asDiagonal() * V.cast<cplx>());
            const Eigen::VectorXd coherent = b.cwiseAbs2().rowwise().sum();
            const double keep = std::exp(-model.gamma() * t);
            grid.p.col(static_cast<Eigen::Index>(j)) = keep * coherent + (1.0 - keep) * dephased;
        });
    } else {
        parallel_for(grid.t.size(), workers, [&](std::size_t j) {
            const auto evolved = evolve_closed_form(state, model, grid.t[j]);
            const auto col = density_profile(evolved, grid.x);
            grid.p.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(col.data(), nx);
        });
    }
    return grid;
}

} // namespace boxgas
