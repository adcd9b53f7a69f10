#pragma once

#include "qdsim/model.hpp"

#include <array>

namespace qdsim {

/// Linear-regime (⟨σ_z⟩ ≃ -1) effective matrix governing
/// i d/dt (⟨σ1⟩, ⟨σ2⟩, ⟨a⟩):
///
///   [ w~1              Omega12 - i g12/2   -i g  ]
///   [ Omega12 - i g12/2   w~2              -i g  ]
///   [ i g                 i g               w~c  ]
///
/// with w~j = wj - i gamma/2 - i Pj and w~c = wc - i kappa/2 + i Pc,
/// all in µeV (absolute frequencies).
Eigen::Matrix3cd build_effective(const Params& p, const PumpRates& pumps = {});

enum class ModeKind { PlusLike, MinusLike, CavityLike };

struct Mode {
    Complex frequency;      // µeV; Re = position, -2 Im = linewidth
    Eigen::Vector3cd vec;   // normalized (sigma1, sigma2, a) components
    ModeKind kind;

    double position() const { return frequency.real(); }
    double linewidth() const { return -2.0 * frequency.imag(); }
};

struct EffectiveModes {
    std::array<Mode, 3> modes;

    const Mode& of(ModeKind k) const;
    const Mode& plus_like() const { return of(ModeKind::PlusLike); }
    const Mode& minus_like() const { return of(ModeKind::MinusLike); }
    const Mode& cavity_like() const { return of(ModeKind::CavityLike); }
};

/// Eigen-decomposition of the effective matrix.  The mode with the largest
/// |a| component is cavity-like; of the remaining two, the one with the
/// dominant symmetric projection is plus-like, ties broken by the real part
/// (lower = minus-like, matching the red-shifted state).  Eigenvector
/// phases are fixed so that the symmetric projection is real and positive.
/// Throws on a numerically defective matrix.
EffectiveModes eigenmodes(const Eigen::Matrix3cd& m);

/// Moduli of the projections of the minus-like excitonic eigenvector onto
/// (sigma1+sigma2)/sqrt(2) and (sigma1-sigma2)/sqrt(2), normalized pairwise.
/// These are (|A|, |B|) without direct coupling and (mu, nu) with it.
struct CoeffPair {
    double sym;     // |A| or mu
    double antisym; // |B| or nu
};
CoeffPair coeffs_from_modes(const EffectiveModes& modes);

/// Closed-form coefficients of the atomic subsystem, delta = Delta12/Omega12:
///   mu = delta / sqrt(delta^2 + (1 + sqrt(1+delta^2))^2)
///   nu = (1 + sqrt(1+delta^2)) / sqrt(delta^2 + (1 + sqrt(1+delta^2))^2)
/// Reported as non-negative moduli; mu^2 + nu^2 = 1 exactly.  Throws for
/// omega12 = 0 (delta undefined; use the numeric route).
CoeffPair munu_analytic(double delta12_ueV, double omega12_ueV);

/// Every derived collective quantity of the coupled-detuned pair.  The
/// critical photon numbers follow the gamma12 ≃ gamma approximation as
/// printed; *_exact fields use the actual gamma12 of the parameter set.
struct CollectiveRates {
    double mu = 0, nu = 1;
    double g_minus = 0, g_plus = 0;         // couplings mu*sqrt(2)g, nu*sqrt(2)g, µeV
    double gamma_minus = 0, gamma_plus = 0; // free-space decays {mu^2,nu^2}(gamma+gamma12)
    double Gamma_minus = 0, Gamma_plus = 0; // cavity-enhanced widths {mu^2,nu^2} 8g^2/kappa
    double Gamma0 = 0;                      // 4g^2/kappa
    double Gamma_plus_resonant = 0;         // 8g^2/kappa
    double nc0 = 0;                         // gamma^2 / 8g^2
    double nc_plus = 0;                     // 2 nc0 (resonant superradiant state)
    double nc_minus = 0;                    // 2 mu^2 nc0
    double nc_plus_dd = 0;                  // 2 nu^2 nc0
    double nc_minus_exact = 0;              // (gamma_minus)^2 / (8 g_minus^2)
    double nc_plus_exact = 0;
};
CollectiveRates collective_rates(const Params& p);

/// Appendix-style decomposition of the collective spontaneous emission into
/// the symmetric branch, the antisymmetric branch, and the incoherent
/// cross-coupling of the two entangled states.
struct EmissionDecomposition {
    double symmetric_branch;     // nu^2 (gamma + gamma12)
    double antisymmetric_branch; // mu^2 (gamma + gamma12)
    double cross_coupling;       // mu nu (gamma + gamma12)
};
EmissionDecomposition emission_decomposition(double mu, double nu, double gamma,
                                             double gamma12);

} // namespace qdsim
