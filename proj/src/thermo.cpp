#include "boxgas/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "boxgas/errors.hpp"
#include "boxgas/parallel.hpp"

namespace boxgas {

namespace {

constexpr double eigen_floor = 1e-14;
constexpr double negativity_limit = -1e-8;

double xlogx(double x)
{
    return x > 0.0 ? x * std::log(x) : 0.0;
}

void require_sorted(std::span<const double> v, bool strict, const char* what)
{
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (strict ? !(v[i] > v[i - 1]) : !(v[i] >= v[i - 1]))
            throw DomainError(std::string(what) + " must be increasing");
    }
}

} // namespace

double entropy(const Eigen::MatrixXcd& rho)
{
    if (rho.rows() != rho.cols())
        throw DomainError("entropy: density matrix must be square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("entropy: eigendecomposition failed");
    double s = 0.0;
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        const double lambda = solver.eigenvalues()(i);
        if (lambda < negativity_limit) {
            std::ostringstream os;
            os << "entropy: eigenvalue " << lambda << " violates positivity";
            throw PositivityError(os.str());
        }
        if (lambda > eigen_floor)
            s -= xlogx(lambda);
    }
    return s;
}

double entropy_diagonal(std::span<const double> d)
{
    double s = 0.0;
    for (double x : d) {
        if (x < -1e-12)
            throw DomainError("entropy_diagonal: negative probability");
        s -= xlogx(x);
    }
    return s;
}

double equilibrium_entropy(const TrapConfig& cfg, Trap trap)
{
    cfg.validate();
    if (cfg.zero_temperature())
        return 0.0;
    return entropy_diagonal(thermal_occupations(cfg, trap));
}

int thermo_n_max(const TrapConfig& cfg, int requested)
{
    if (requested > 0)
        return requested;
    return choose_n_max(cfg, 1e-9, 1e-6, 512);
}

double delta_s_free_expansion(const TrapConfig& cfg, int n_max)
{
    const auto dist = diagonal_distribution(cfg, thermo_n_max(cfg, n_max));
    return entropy_diagonal(dist.d) - equilibrium_entropy(cfg, Trap::Half);
}

double delta_s_isothermal(const TrapConfig& cfg)
{
    return equilibrium_entropy(cfg, Trap::Full) - equilibrium_entropy(cfg, Trap::Half);
}

SweepResult sweep_ratio(const TrapConfig& base, std::span<const double> ratios, int n_max, int workers)
{
    base.validate();
    if (base.zero_temperature())
        throw DomainError("sweep_ratio: the ratio L/lambda_T needs T > 0");
    for (double r : ratios)
        if (!(r > 0.0))
            throw DomainError("sweep_ratio: ratios must be positive");
    require_sorted(ratios, true, "sweep_ratio: ratios");

    const std::size_t count = ratios.size();
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    SweepResult out;
    out.axis.assign(ratios.begin(), ratios.end());
    out.ds_fe.assign(count, nan);
    out.ds_iso.assign(count, nan);
    out.n_max_used.assign(count, 0);
    out.meta = base;
    std::vector<std::string> errors(count);

    parallel_for(count, workers, [&](std::size_t i) {
        try {
            const TrapConfig cfg = base.with_ratio(ratios[i]);
            const int size = thermo_n_max(cfg, n_max);
            out.n_max_used[i] = size;
            out.ds_fe[i] = delta_s_free_expansion(cfg, size);
            out.ds_iso[i] = delta_s_isothermal(cfg);
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "ratio " << ratios[i] << ": " << e.what();
            errors[i] = os.str();
        }
    });
    for (auto& e : errors)
        if (!e.empty())
            out.diagnostics.push_back(std::move(e));
    return out;
}

std::pair<SECurve, SECurve> se_curves(const TrapConfig& base, std::span<const double> temps, int n_max,
                                      int workers)
{
    base.validate();
    for (double t : temps)
        if (!(t >= 0.0))
            throw DomainError("se_curves: temperatures must be non-negative");
    require_sorted(temps, true, "se_curves: temperatures");

    const std::size_t count = temps.size();
    SECurve fe{std::vector<double>(temps.begin(), temps.end()), std::vector<double>(count),
               std::vector<double>(count), SECurveKind::FreeExpansion};
    SECurve eq{fe.temperatures, std::vector<double>(count), std::vector<double>(count),
               SECurveKind::Equilibrium};
    const double alpha = base.alpha();

    parallel_for(count, workers, [&](std::size_t i) {
        TrapConfig cfg = base;
        cfg.T = temps[i];
        const auto dist = diagonal_distribution(cfg, thermo_n_max(cfg, n_max));
        fe.energy[i] = post_quench_energy(cfg, dist) / alpha;
        fe.entropy[i] = entropy_diagonal(dist.d);
        eq.energy[i] = internal_energy(cfg, Trap::Full) / alpha;
        eq.entropy[i] = equilibrium_entropy(cfg, Trap::Full);
    });
    return {std::move(fe), std::move(eq)};
}

} // namespace boxgas
