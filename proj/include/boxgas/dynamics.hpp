#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "boxgas/quench.hpp"

namespace boxgas {

// Dynamics runs in reduced units: time in hbar/alpha, rates in alpha/hbar.
// The Bohr frequency of the (m, n) coherence is then m^2 - n^2.

/// Coherence decay rates of the pure-dephasing channel in the full-trap
/// eigenbasis. Either one uniform rate or a symmetric table of per-pair rates.
class DephasingModel {
public:
    static DephasingModel uniform(double gamma);

    /// rates(m-1, n-1) = Gamma_mn; the diagonal is ignored.
    static DephasingModel per_pair(Eigen::MatrixXd rates);

    bool is_uniform() const { return !rates_.has_value(); }
    double gamma() const { return gamma_; }

    /// Decay rate of rho_mn (1-based); zero for m == n.
    double rate(int m, int n) const;
    double max_rate(int n_max) const;

    /// Kossakowski matrix c of the GKSL form
    ///   D[rho] = sum_kl c_kl P_k rho P_l - 1/2 {sum_k c_kk P_k, rho}
    /// with projectors P_k = |psi_k><psi_k|, chosen so that rho_mn decays at
    /// (c_mm + c_nn)/2 - c_mn = Gamma_mn.
    Eigen::MatrixXd kossakowski(int n_max) const;

    /// True when the Kossakowski matrix is positive semidefinite.
    bool completely_positive(int n_max) const;

    void validate(int n_max) const;

private:
    double gamma_ = 0.0;
    std::optional<Eigen::MatrixXd> rates_;
};

/// rho_mn(t) = rho_mn(0) exp(-i (m^2 - n^2) t - Gamma_mn t).
QuenchState evolve_closed_form(const QuenchState& state, const DephasingModel& model, double t);

/// Classical RK4 on d rho/dt = -i[H, rho] + D[rho] with fixed step (the last
/// step is shortened to land on t_end). Requires dt * max(omega, Gamma) <= 0.1.
QuenchState evolve_integrator(const QuenchState& state, const DephasingModel& model, double t_end,
                              double dt);

/// p(x) = <x|rho|x> on the given grid. Points must lie in [-L/2, L/2].
std::vector<double> density_profile(const QuenchState& state, std::span<const double> x);

/// Profile of a diagonal state with populations d_m.
std::vector<double> diagonal_profile(const TrapConfig& cfg, std::span<const double> d,
                                     std::span<const double> x);

/// Full-trap thermal profile at cfg.T.
std::vector<double> equilibrium_profile(const TrapConfig& cfg, std::span<const double> x);

/// Profile of the fully dephased quench state.
std::vector<double> steady_profile(const TrapConfig& cfg, std::span<const double> x, int n_max = 0);

/// Evenly spaced grid over the closed trap [-L/2, L/2].
std::vector<double> trap_grid(double L, int nx);

/// Trapezoid rule on a grid.
double trapezoid(std::span<const double> x, std::span<const double> y);

struct ProfileGrid {
    std::vector<double> x;
    std::vector<double> t;
    Eigen::MatrixXd p; // p(i, j) = p(x_i, t_j)
    int n_max = 0;
    std::vector<std::string> warnings;
};

/// Default dynamics basis: max(128, smallest n_max with tail mass < 1e-7).
int dynamics_n_max(const TrapConfig& cfg, int requested);

/// Samples p(x, t) for each window [t_start, t_end] (nt times per window,
/// endpoints included) on an nx-point trap grid.
ProfileGrid dynamics_movie(const TrapConfig& cfg, const DephasingModel& model,
                           std::span<const std::pair<double, double>> windows, int nx, int nt,
                           int n_max = 0, int workers = 0);

} // namespace boxgas
