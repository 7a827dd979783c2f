#pragma once

#include <span>
#include <vector>

namespace boxgas {

/// Which square well: the half-size well (-L/2, 0) before the wall is
/// removed, or the full well (-L/2, L/2) after.
enum class Trap { Half, Full };

/// Physical parameters of a single particle in a 1D square trap.
///
/// L is the size of the full (post-expansion) trap; the particle starts in
/// the left half. All derived scales come from here.
struct TrapConfig {
    double L = 1.0;
    double M = 1.0;
    double T = 1.0;
    double hbar = 1.0;
    double kB = 1.0;

    /// Throws DomainError unless L, M, hbar, kB > 0 and T >= 0.
    void validate() const;

    bool zero_temperature() const { return T == 0.0; }

    /// Energy unit pi^2 hbar^2 / (2 M L^2); full-trap level m sits at m^2 alpha.
    double alpha() const;

    /// Boltzmann exponent of the half trap, 4 alpha / (kB T). Requires T > 0.
    double q() const;

    /// Boltzmann exponent for the chosen trap (q for Half, q/4 for Full).
    double q(Trap trap) const;

    /// Thermal de Broglie wavelength h (2 pi M kB T)^{-1/2}. Requires T > 0.
    double thermal_wavelength() const;

    /// L / lambda_T.
    double ratio() const;

    /// Same particle and temperature with L chosen so that L / lambda_T = ratio.
    TrapConfig with_ratio(double ratio) const;
};

double level_energy(const TrapConfig& cfg, Trap trap, int n);

/// Truncated eigenbasis of the full trap.
class SpectralBasis {
public:
    SpectralBasis(const TrapConfig& cfg, int n_max);

    int n_max() const { return n_max_; }
    const TrapConfig& config() const { return cfg_; }

    /// energies()[m-1] = m^2 alpha.
    const std::vector<double>& energies() const { return energies_; }
    double energy(int m) const { return energies_[static_cast<std::size_t>(m - 1)]; }

    /// psi_m(x) = sqrt(2/L) sin(m pi (x + L/2) / L), zero outside the trap.
    double eigenfunction(int m, double x) const;

private:
    TrapConfig cfg_;
    int n_max_;
    std::vector<double> energies_;
};

double full_eigenfunction(int m, double x, double L);

/// sqrt(4/L) sin(2 pi n x / L) on (-L/2, 0), zero elsewhere.
double half_eigenfunction(int n, double x, double L);

/// Sum_{n>=1} exp(-q n^2), cut when the next term drops below tol times the
/// running sum. Underflows to 0 for q beyond ~745; use log_partition_function
/// there.
double partition_function(double q, double tol = 1e-16);

/// ln Z, evaluated relative to the ground term so it is finite for any q > 0.
double log_partition_function(double q, double tol = 1e-16);

/// Number of Gibbs levels kept: smallest N with exp(-q((N+1)^2 - 1)) below
/// 1e-16 of the leading weight.
int gibbs_cutoff(double q);

/// <psi_m | phi_n>, full-trap level m against half-trap level n.
///
/// m = 2n gives (-1)^n / sqrt(2); other even m vanish; odd m give
/// (-1)^n s sqrt(8) 2n / (pi (4n^2 - m^2)) with s = sin(pi (2n - m) / 2).
double overlap(int m, int n);

/// Equilibrium occupations p_n of the chosen trap for n = 1..basis_size,
/// normalized by the untruncated partition function. T = 0 gives a point
/// mass on n = 1.
std::vector<double> thermal_occupations(const TrapConfig& cfg, int basis_size, Trap trap = Trap::Half);

/// Same as thermal_occupations with basis_size = gibbs_cutoff.
std::vector<double> thermal_occupations(const TrapConfig& cfg, Trap trap = Trap::Half);

/// Equilibrium mean energy by direct weighted sum; ground energy at T = 0.
double internal_energy(const TrapConfig& cfg, Trap trap);

/// Upper bound on the probability that the quench state puts above full-trap
/// level n_max, given half-trap populations half_weights[n-1].
double quench_tail_mass_bound(std::span<const double> half_weights, int n_max);

/// Upper bound on the entropy carried by the same tail (units of kB).
double quench_tail_entropy_bound(std::span<const double> half_weights, int n_max);

/// Smallest even n_max >= floor for which both tail bounds are met.
int choose_n_max(const TrapConfig& cfg, double mass_tol = 1e-9, double entropy_tol = 1e-6,
                 int floor = 4);

} // namespace boxgas
