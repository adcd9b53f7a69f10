#pragma once

#include "qdsim/qspace.hpp"

#include <utility>
#include <vector>

namespace qdsim {

/// Internal unit system: every energy and rate in µeV, time in ns.
/// Conversions live here and in pump_amplitude; everything else stays µeV.
namespace units {

inline constexpr double hbar_ueV_ns  = 0.6582119569;          // µeV·ns
inline constexpr double hc_eV_nm     = 1239.8419843320026;    // eV·nm
inline constexpr double joule_per_eV = 1.602176634e-19;

inline double rate_ns(double energy_ueV) { return energy_ueV / hbar_ueV_ns; }
inline double energy_ueV(double rate_per_ns) { return rate_per_ns * hbar_ueV_ns; }

inline double photon_energy_eV(double lambda0_nm) { return hc_eV_nm / lambda0_nm; }

/// Photons per ns carried by a beam of the given power.
inline double photon_flux_ns(double power_W, double photon_eV)
{
    return power_W / (photon_eV * joule_per_eV) * 1e-9;
}

} // namespace units

struct DipoleRates {
    double omega12; // coherent exchange rate, µeV
    double gamma12; // incoherent cross-decay rate, µeV
};

/// Dipole-dipole rates for two parallel dipoles a distance d apart,
/// k = 2*pi*n_medium/lambda0.  omega12 = Re{gamma F(kd)} with
/// F(x) = -(3/4) e^{ix} [1/x + i/x^2 - 1/x^3]; gamma12 = -2 Im{gamma F(kd)},
/// the prefactor normalized so gamma12 -> gamma as kd -> 0 (the standard
/// small-distance collective-decay limit; see README for the convention note).
DipoleRates dipole_coupling(double d_nm, double lambda0_nm, double n_medium, double gamma_ueV);

/// Cavity drive amplitude in µeV for a beam of power P_W impinging on a
/// cavity of total linewidth kappa: E_p = hbar*sqrt((kappa/2hbar) * flux).
double pump_amplitude(double P_W, double kappa_ueV, double photon_energy_eV);

/// Incoherent pump rates (µeV) for the two dots and the cavity.  Zero in
/// every driven experiment; nonzero only for emission-spectrum probing.
struct PumpRates {
    double dot1 = 0.0;
    double dot2 = 0.0;
    double cavity = 0.0;
};

/// Full physical parameter set.  Frequencies are absolute (relative to an
/// arbitrary µeV reference); the rotating frame at omega_L is applied when
/// the Hamiltonian is built, so scans over omega_L are cheap re-builds.
struct Params {
    double g = 20.0;             // emitter-cavity coupling, µeV (equal for both dots)
    double kappa_left = 100.0;   // mirror loss rates, µeV
    double kappa_right = 100.0;
    double kappa_other = 0.0;
    double gamma = 0.6;          // free-space decay, µeV
    double gamma_star = 0.0;     // pure dephasing, µeV
    double omega1 = 0.0;         // dot 1 transition, µeV
    double omega2 = 0.0;         // dot 2 transition, µeV
    double omega_c = 0.0;        // cavity mode, µeV
    double omega_L = 0.0;        // drive laser, µeV
    double Omega12 = 0.0;        // coherent dipole-dipole rate, µeV
    double gamma12 = 0.0;        // incoherent dipole-dipole rate, µeV
    double P_laser_W = 1e-12;    // drive power, W
    double lambda0_nm = 930.0;   // vacuum wavelength (sets the absolute photon energy)
    double n_medium = 3.6;
    int fock_dim = 12;

    double kappa() const { return kappa_left + kappa_right + kappa_other; }
    double delta12() const { return (omega1 - omega2) / 2.0; }
    double photon_energy_eV() const { return units::photon_energy_eV(lambda0_nm); }
    double pump_ueV() const { return pump_amplitude(P_laser_W, kappa(), photon_energy_eV()); }

    SpaceLayout layout() const { return SpaceLayout(fock_dim); }

    /// Throws std::invalid_argument if a rate is negative, |gamma12| > gamma,
    /// or the truncation is too small.
    void validate() const;
};

/// Driven Tavis-Cummings Hamiltonian in the laser rotating frame, µeV:
///   H = (w1-wL) s1+s1 + (w2-wL) s2+s2 + (wc-wL) a†a
///     + i sqrt(2) g (a† (s1+s2)/sqrt(2) - h.c.)
///     + Omega12 (s1+ s2 + s1 s2+) - i E_p (a† - a)
Op hamiltonian(const Params& p, const SpaceLayout& layout);

/// Lindblad channels as (rate µeV, operator) pairs: (kappa, a), the two
/// collective emitters (gamma ± gamma12, (s1 ± s2)/sqrt(2)), and the two
/// dephasing channels (gamma_star, si+ si) only when gamma_star > 0.
std::vector<std::pair<double, Op>> collapse_ops(const Params& p, const SpaceLayout& layout);

namespace presets {

/// {g, kappa, gamma} = {20, 200, 0.6} µeV, symmetric two-sided cavity,
/// no dephasing, lambda0 = 930 nm in n = 3.6.
Params paper_default();

/// Single-dot reference: dot 2 parked 1000 µeV below dot 1 so it is inert
/// at the frequencies probed, no direct dipole-dipole coupling.
Params single_qd();

/// Two dots split by ±delta12 around the reference, dipole-dipole coupled
/// with Omega12 = 31 µeV and gamma12 = 0.988*gamma (the d = 10 nm values).
Params coupled(double delta12_ueV);

/// Two dots split by ±delta12, no direct coupling (Omega12 = gamma12 = 0).
Params detuned_only(double delta12_ueV);

/// Reflectivity-spectrum cases: 'a' resonant uncoupled, 'b' coupled
/// resonant, 'c' detuned (20 µeV) uncoupled, 'd' detuned (20) coupled,
/// 'e' detuned (10) coupled.
Params figure_case(char which);

/// Resolve a preset by name ("paper-default", "single-qd", "case-a".."case-e").
Params by_name(const std::string& name);

} // namespace presets

} // namespace qdsim
