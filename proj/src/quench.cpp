#include "boxgas/quench.hpp"

#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "boxgas/errors.hpp"

namespace boxgas {

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> half_weights(const TrapConfig& cfg)
{
    return thermal_occupations(cfg, Trap::Half);
}

int resolve_n_max(const TrapConfig& cfg, int n_max)
{
    if (n_max == 0)
        return choose_n_max(cfg);
    if (n_max < 4)
        throw DomainError("n_max must be >= 4");
    return n_max;
}

void check_deficit(const TrapConfig& cfg, double deficit, double max_deficit, int n_max)
{
    if (deficit > max_deficit) {
        const int suggestion = choose_n_max(cfg, max_deficit, 1e-6, n_max + 2);
        std::ostringstream os;
        os << "basis of " << n_max << " levels misses " << deficit
           << " of the trace; try n_max = " << suggestion;
        throw TruncationError(os.str(), suggestion);
    }
}

// sum over odd m >= m0 of m^2 / (m^2 - a^2)^2, a = 2n even.
double odd_energy_tail(int m0, int n)
{
    const int a = 2 * n;
    if (m0 % 2 == 0)
        ++m0;
    double sum = 0.0;
    int m = m0;
    for (; m <= a; m += 2) {
        const double mm = m;
        const double den = mm * mm - double(a) * a;
        sum += mm * mm / (den * den);
    }
    // m > a from here: partial fractions
    // m^2/(m^2-a^2)^2 = 1/4 [1/(m-a)^2 + 1/(m+a)^2 + (1/a)(1/(m-a) - 1/(m+a))]
    const double lo = m - a;
    const double hi = m + a;
    double telescoped = 0.0;
    for (int j = m - a; j < m + a; j += 2)
        telescoped += 1.0 / j;
    sum += 0.25 * (0.25 * boost::math::trigamma(0.5 * lo) + 0.25 * boost::math::trigamma(0.5 * hi)
                   + telescoped / a);
    return sum;
}

} // namespace

QuenchState build_quench_state(const TrapConfig& cfg, int n_max, double max_deficit)
{
    cfg.validate();
    n_max = resolve_n_max(cfg, n_max);
    const auto p = half_weights(cfg);
    const auto levels = static_cast<Eigen::Index>(p.size());

    Eigen::MatrixXd amp(n_max, levels);
    for (Eigen::Index n = 0; n < levels; ++n)
        for (Eigen::Index m = 0; m < n_max; ++m)
            amp(m, n) = overlap(static_cast<int>(m + 1), static_cast<int>(n + 1));
    const Eigen::Map<const Eigen::VectorXd> weights(p.data(), levels);
    const Eigen::MatrixXd real_rho = amp * weights.asDiagonal() * amp.transpose();

    QuenchState state{SpectralBasis(cfg, n_max), real_rho.cast<std::complex<double>>(), cfg.T, 0.0, 0.0};
    state.tail_mass = 1.0 - real_rho.trace();
    state.tail_bound = quench_tail_mass_bound(p, n_max);
    check_deficit(cfg, state.tail_mass, max_deficit, n_max);
    return state;
}

OccupationDistribution diagonal_distribution(const TrapConfig& cfg, int n_max, double max_deficit)
{
    cfg.validate();
    n_max = resolve_n_max(cfg, n_max);
    OccupationDistribution out;
    out.temperature = cfg.T;
    out.d.assign(static_cast<std::size_t>(n_max), 0.0);

    if (cfg.zero_temperature()) {
        for (int m = 1; m <= n_max; m += 2) {
            const double den = static_cast<double>(m) * m - 4.0;
            out.d[static_cast<std::size_t>(m - 1)] = 32.0 / (den * den * pi * pi);
        }
        out.d[1] = 0.5;
    } else {
        const auto p_even = thermal_occupations(cfg, n_max / 2, Trap::Half);
        for (int k = 1; 2 * k <= n_max; ++k)
            out.d[static_cast<std::size_t>(2 * k - 1)] = 0.5 * p_even[static_cast<std::size_t>(k - 1)];
        const auto p = half_weights(cfg);
        for (int m = 1; m <= n_max; m += 2) {
            const double m2 = static_cast<double>(m) * m;
            double s = 0.0;
            for (std::size_t i = p.size(); i-- > 0;) {
                const double n2 = static_cast<double>(i + 1) * static_cast<double>(i + 1);
                const double den = m2 - 4.0 * n2;
                s += n2 * p[i] / (den * den);
            }
            out.d[static_cast<std::size_t>(m - 1)] = 32.0 * s / (pi * pi);
        }
    }

    for (int m = n_max; m >= 1; --m)
        (m % 2 == 0 ? out.even_mass : out.odd_mass) += out.d[static_cast<std::size_t>(m - 1)];
    out.tail_mass = 1.0 - (out.even_mass + out.odd_mass);
    out.tail_bound = quench_tail_mass_bound(half_weights(cfg), n_max);
    check_deficit(cfg, out.tail_mass, max_deficit, n_max);
    return out;
}

QuenchState dephase(const QuenchState& state)
{
    QuenchState out = state;
    out.rho = state.rho.diagonal().asDiagonal();
    return out;
}

double mean_energy(const QuenchState& state)
{
    const auto& e = state.basis.energies();
    double sum = 0.0;
    for (int m = state.n_max(); m >= 1; --m)
        sum += e[static_cast<std::size_t>(m - 1)] * state.rho(m - 1, m - 1).real();
    return sum;
}

double post_quench_energy(const TrapConfig& cfg, const OccupationDistribution& dist)
{
    const int M = dist.n_max();
    double units = 0.0;
    for (int m = M; m >= 1; --m)
        units += static_cast<double>(m) * m * dist.at(m);

    TrapConfig at_temp = cfg;
    at_temp.T = dist.temperature;
    const auto p = half_weights(at_temp);
    double tail = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const int n = static_cast<int>(i + 1);
        const double n2 = static_cast<double>(n) * n;
        tail += p[i] * 32.0 * n2 / (pi * pi) * odd_energy_tail(M + 1, n);
        if (2 * n > M)
            tail += p[i] * 2.0 * n2;
    }
    return (units + tail) * cfg.alpha();
}

} // namespace boxgas
