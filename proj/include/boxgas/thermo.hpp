#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "boxgas/quench.hpp"
#include "boxgas/spectral.hpp"

namespace boxgas {

/// Von Neumann entropy -Tr[rho ln rho] in units of kB. Eigenvalues below
/// 1e-14 count as zero; anything below -1e-8 throws PositivityError.
double entropy(const Eigen::MatrixXcd& rho);

/// -sum d ln d, the entropy of a diagonal state.
double entropy_diagonal(std::span<const double> d);

/// Equilibrium entropy of the chosen trap at cfg.T (zero at T = 0).
double equilibrium_entropy(const TrapConfig& cfg, Trap trap);

/// Entropy gained when the wall is removed and the coherences dephase:
/// S(D) - S_i with S_i the half-trap thermal entropy.
/// n_max = 0 selects max(512, choose_n_max(cfg)).
double delta_s_free_expansion(const TrapConfig& cfg, int n_max = 0);

/// S_eq(full trap, T) - S_eq(half trap, T).
double delta_s_isothermal(const TrapConfig& cfg);

/// Basis size used by the thermo routines when the caller passes 0.
int thermo_n_max(const TrapConfig& cfg, int requested);

struct SweepResult {
    std::vector<double> axis;
    std::vector<double> ds_fe;
    std::vector<double> ds_iso;
    std::vector<int> n_max_used;
    std::vector<std::string> diagnostics;
    TrapConfig meta;
};

/// Entropy changes on a grid of L / lambda_T at fixed temperature. Failed
/// points become NaN and leave a diagnostic line.
SweepResult sweep_ratio(const TrapConfig& base, std::span<const double> ratios, int n_max = 0,
                        int workers = 0);

enum class SECurveKind { FreeExpansion, Equilibrium };

struct SECurve {
    std::vector<double> temperatures;
    std::vector<double> energy;  // units of alpha
    std::vector<double> entropy; // units of kB
    SECurveKind kind = SECurveKind::FreeExpansion;
};

/// Entropy-energy curves at fixed L: the dephased free-expansion state
/// (conserved energy, S(D)) and the full-trap equilibrium state.
std::pair<SECurve, SECurve> se_curves(const TrapConfig& base, std::span<const double> temps,
                                      int n_max = 0, int workers = 0);

} // namespace boxgas
