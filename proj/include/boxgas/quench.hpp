#pragma once

#include <Eigen/Dense>
#include <vector>

#include "boxgas/spectral.hpp"

namespace boxgas {

/// Post-expansion density matrix in the full-trap eigenbasis.
///
/// rho(m1-1, m2-1) = sum_n <psi_m1|phi_n> <phi_n|psi_m2> p_n. The basis is
/// truncated at n_max; tail_mass is the probability the truncation drops
/// (1 - Tr rho, exact by completeness of the full-trap basis) and tail_bound
/// its analytic upper bound.
struct QuenchState {
    SpectralBasis basis;
    Eigen::MatrixXcd rho;
    double temperature = 0.0;
    double tail_mass = 0.0;
    double tail_bound = 0.0;

    int n_max() const { return basis.n_max(); }
};

/// Diagonal of the quench state, D_m for m = 1..n_max.
struct OccupationDistribution {
    std::vector<double> d;
    double even_mass = 0.0;
    double odd_mass = 0.0;
    double tail_mass = 0.0;
    double tail_bound = 0.0;
    double temperature = 0.0;

    int n_max() const { return static_cast<int>(d.size()); }
    double at(int m) const { return d[static_cast<std::size_t>(m - 1)]; }
};

/// n_max = 0 picks the size with choose_n_max. Throws TruncationError when the
/// retained trace misses more than max_deficit.
QuenchState build_quench_state(const TrapConfig& cfg, int n_max = 0, double max_deficit = 1e-6);

/// Even m: exp(-q m^2/4) / (2Z). Odd m: sum_n 32 n^2 exp(-q n^2) / (Z (m^2 - 4n^2)^2 pi^2).
/// T = 0 uses the ground-state limits D_2 = 1/2, D_odd = 32 / ((m^2 - 4)^2 pi^2).
OccupationDistribution diagonal_distribution(const TrapConfig& cfg, int n_max = 0,
                                             double max_deficit = 1e-6);

/// Drops every coherence. Idempotent.
QuenchState dephase(const QuenchState& state);

/// Tr[H_a rho] over the retained basis.
double mean_energy(const QuenchState& state);

/// Mean full-trap energy of the quench distribution including the exact
/// contribution of levels above n_max.
double post_quench_energy(const TrapConfig& cfg, const OccupationDistribution& dist);

} // namespace boxgas
