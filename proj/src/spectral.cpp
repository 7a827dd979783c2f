#include "boxgas/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "boxgas/errors.hpp"

namespace boxgas {

namespace {

constexpr double pi = std::numbers::pi;

// ln(1e16): Gibbs weights below this many e-folds of the ground term are dropped.
constexpr double gibbs_log_cut = 36.841361487904734;

// sin(pi j / 2) for odd j.
int half_turn_sign(int j)
{
    const int r = ((j % 4) + 4) % 4;
    return r == 1 ? 1 : -1;
}

// Upper bound on sum_{odd m > M} m^-4.
double odd_quartic_tail(int M)
{
    const double a = (M % 2 == 0) ? M + 1.0 : M + 2.0;
    return 1.0 / (a * a * a * a) + 1.0 / (6.0 * a * a * a);
}

// Coefficient C with d_m <= C / m^4 for odd m > M, from levels 4n <= M,
// plus the mass r of levels too high for that envelope.
struct TailEnvelope {
    double coefficient = 0.0;
    double loose_mass = 0.0;
};

TailEnvelope tail_envelope(std::span<const double> w, int M)
{
    TailEnvelope env;
    const double k = 512.0 / (9.0 * pi * pi);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        if (4.0 * n <= M)
            env.coefficient += w[i] * k * n * n;
        else
            env.loose_mass += w[i];
    }
    return env;
}

} // namespace

void TrapConfig::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw DomainError(std::string("TrapConfig: ") + what);
    };
    require(std::isfinite(L) && L > 0.0, "L must be positive");
    require(std::isfinite(M) && M > 0.0, "M must be positive");
    require(std::isfinite(T) && T >= 0.0, "T must be non-negative");
    require(std::isfinite(hbar) && hbar > 0.0, "hbar must be positive");
    require(std::isfinite(kB) && kB > 0.0, "kB must be positive");
}

double TrapConfig::alpha() const
{
    return pi * pi * hbar * hbar / (2.0 * M * L * L);
}

double TrapConfig::q() const
{
    if (!(T > 0.0))
        throw DomainError("q is undefined at T = 0");
    return 4.0 * alpha() / (kB * T);
}

double TrapConfig::q(Trap trap) const
{
    return trap == Trap::Half ? q() : q() / 4.0;
}

double TrapConfig::thermal_wavelength() const
{
    if (!(T > 0.0))
        throw DomainError("thermal wavelength is undefined at T = 0");
    const double h = 2.0 * pi * hbar;
    return h / std::sqrt(2.0 * pi * M * kB * T);
}

double TrapConfig::ratio() const
{
    return L / thermal_wavelength();
}

TrapConfig TrapConfig::with_ratio(double ratio) const
{
    if (!(ratio > 0.0))
        throw DomainError("ratio L/lambda_T must be positive");
    TrapConfig out = *this;
    out.L = ratio * thermal_wavelength();
    return out;
}

double level_energy(const TrapConfig& cfg, Trap trap, int n)
{
    const double n2 = static_cast<double>(n) * n;
    return (trap == Trap::Half ? 4.0 : 1.0) * n2 * cfg.alpha();
}

SpectralBasis::SpectralBasis(const TrapConfig& cfg, int n_max)
    : cfg_(cfg), n_max_(n_max)
{
    cfg_.validate();
    if (n_max < 4)
        throw DomainError("SpectralBasis needs n_max >= 4");
    const double a = cfg_.alpha();
    energies_.resize(static_cast<std::size_t>(n_max));
    for (int m = 1; m <= n_max; ++m)
        energies_[static_cast<std::size_t>(m - 1)] = static_cast<double>(m) * m * a;
}

double SpectralBasis::eigenfunction(int m, double x) const
{
    return full_eigenfunction(m, x, cfg_.L);
}

double full_eigenfunction(int m, double x, double L)
{
    if (x <= -0.5 * L || x >= 0.5 * L)
        return 0.0;
    return std::sqrt(2.0 / L) * std::sin(m * pi * (x + 0.5 * L) / L);
}

double half_eigenfunction(int n, double x, double L)
{
    if (x <= -0.5 * L || x >= 0.0)
        return 0.0;
    return std::sqrt(4.0 / L) * std::sin(2.0 * pi * n * x / L);
}

double partition_function(double q, double tol)
{
    if (!(q > 0.0))
        throw DomainError("partition_function: q must be positive");
    if (!(tol > 0.0))
        throw DomainError("partition_function: tol must be positive");
    double sum = 0.0;
    for (long n = 1;; ++n) {
        const double term = std::exp(-q * static_cast<double>(n) * static_cast<double>(n));
        if (n > 1 && term < tol * sum)
            break;
        sum += term;
        if (term == 0.0)
            break;
    }
    return sum;
}

double log_partition_function(double q, double tol)
{
    if (!(q > 0.0))
        throw DomainError("log_partition_function: q must be positive");
    double sum = 1.0;
    for (long n = 2;; ++n) {
        const double e = static_cast<double>(n) * static_cast<double>(n) - 1.0;
        const double term = std::exp(-q * e);
        if (term < tol * sum)
            break;
        sum += term;
    }
    return -q + std::log(sum);
}

int gibbs_cutoff(double q)
{
    if (!(q > 0.0))
        throw DomainError("gibbs_cutoff: q must be positive");
    const double n = std::ceil(std::sqrt(1.0 + gibbs_log_cut / q)) - 1.0;
    return std::max(1, static_cast<int>(n));
}

double overlap(int m, int n)
{
    if (m < 1 || n < 1)
        throw DomainError("overlap: indices start at 1");
    const double parity = (n % 2 == 0) ? 1.0 : -1.0;
    if (m == 2 * n)
        return parity / std::numbers::sqrt2;
    if (m % 2 == 0)
        return 0.0;
    const double nn = n;
    const double mm = m;
    const double s = half_turn_sign(2 * n - m);
    return parity * s * std::sqrt(8.0) * 2.0 * nn / (pi * (4.0 * nn * nn - mm * mm));
}

std::vector<double> thermal_occupations(const TrapConfig& cfg, int basis_size, Trap trap)
{
    cfg.validate();
    if (basis_size < 1)
        throw DomainError("thermal_occupations: basis_size must be >= 1");
    std::vector<double> p(static_cast<std::size_t>(basis_size), 0.0);
    if (cfg.zero_temperature()) {
        p[0] = 1.0;
        return p;
    }
    const double q = cfg.q(trap);
    const int cut = gibbs_cutoff(q);
    double norm = 0.0;
    for (int n = cut; n >= 1; --n)
        norm += std::exp(-q * (static_cast<double>(n) * n - 1.0));
    for (int n = 1; n <= basis_size; ++n)
        p[static_cast<std::size_t>(n - 1)] = std::exp(-q * (static_cast<double>(n) * n - 1.0)) / norm;
    return p;
}

std::vector<double> thermal_occupations(const TrapConfig& cfg, Trap trap)
{
    cfg.validate();
    const int size = cfg.zero_temperature() ? 1 : gibbs_cutoff(cfg.q(trap));
    return thermal_occupations(cfg, size, trap);
}

double internal_energy(const TrapConfig& cfg, Trap trap)
{
    const auto p = thermal_occupations(cfg, trap);
    double e = 0.0;
    for (std::size_t i = p.size(); i-- > 0;)
        e += p[i] * level_energy(cfg, trap, static_cast<int>(i + 1));
    return e;
}

double quench_tail_mass_bound(std::span<const double> w, int M)
{
    if (M < 1)
        throw DomainError("quench_tail_mass_bound: n_max must be >= 1");
    const double odd_tail = odd_quartic_tail(M);
    const double k = 512.0 / (9.0 * pi * pi);
    double bound = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        if (2.0 * n > M)
            bound += 0.5 * w[i];
        bound += (4.0 * n <= M) ? w[i] * k * n * n * odd_tail : 0.5 * w[i];
    }
    return bound;
}

double quench_tail_entropy_bound(std::span<const double> w, int M)
{
    const TailEnvelope env = tail_envelope(w, M);
    double bound = 0.0;
    if (env.coefficient > 0.0) {
        const double a = (M % 2 == 0) ? M + 1.0 : M + 2.0;
        const double a3 = a * a * a;
        const double c = env.coefficient;
        if (c / (a3 * a) >= std::exp(-1.0))
            return std::numeric_limits<double>::infinity();
        const double log_ratio = 4.0 * std::log(a) - std::log(c);
        const double first = c / (a3 * a) * log_ratio;
        const double integral = c * (log_ratio / (3.0 * a3) + 4.0 / (9.0 * a3));
        bound += first + 0.5 * integral;
    }
    // Levels above the envelope: crude bound, in practice their mass is ~1e-16.
    if (env.loose_mass > 0.0)
        bound += env.loose_mass * (10.0 - std::log(env.loose_mass));
    return bound;
}

int choose_n_max(const TrapConfig& cfg, double mass_tol, double entropy_tol, int floor)
{
    const auto w = thermal_occupations(cfg, Trap::Half);
    auto ok = [&](int M) {
        return quench_tail_mass_bound(w, M) < mass_tol && quench_tail_entropy_bound(w, M) < entropy_tol;
    };
    int lo = std::max(4, floor);
    lo += lo % 2;
    if (ok(lo))
        return lo;
    int hi = lo;
    while (!ok(hi)) {
        lo = hi;
        hi *= 2;
        if (hi > (1 << 26))
            throw TruncationError("choose_n_max: no basis size meets the tail tolerance", hi);
    }
    // invariant: !ok(lo), ok(hi), both even
    while (hi - lo > 2) {
        int mid = lo + (hi - lo) / 2;
        mid -= mid % 2;
        if (mid == lo)
            mid += 2;
        if (ok(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace boxgas
