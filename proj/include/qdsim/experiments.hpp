#pragma once

#include "qdsim/dynamics.hpp"
#include "qdsim/effective.hpp"

#include <optional>
#include <string>

namespace qdsim {

inline constexpr const char* version_string = "qdsim 0.1.0";

/// State a scan is frequency-tuned to: the single-dot reference line, the
/// superradiant |+''> / subradiant |-''> collective states, or the bare
/// symmetric state |+> of the resonant pair.
enum class TargetState { SingleQd, Superradiant, Subradiant, SymmetricBare };

std::string to_string(TargetState t);
TargetState target_from_string(const std::string& s);

/// Cavity Fock truncation policy.  Auto starts from a drive-strength
/// estimate and raises the truncation until the reflected intensity moves
/// by less than rel_tol under fock -> fock+2; Fixed solves at the given
/// truncation and only reports the same check as a flag.
struct TruncationPolicy {
    enum class Mode { Auto, Fixed };
    Mode mode = Mode::Auto;
    int fock = 12;
    int max_fock = 20;
    double rel_tol = 0.005;
};

struct FockChoice {
    int fock;
    bool converged;
    double reflectivity; // value at the chosen truncation
};

struct ScanSpec {
    Params params;
    TargetState target = TargetState::Subradiant;
    TruncationPolicy trunc;
    std::vector<double> grid;  // primary sweep axis
    std::vector<double> grid2; // secondary axis (power grid of the colormap)
    int jobs = 0;              // 0 = hardware concurrency
};

/// Labeled series with enough metadata to reproduce the run bit-for-bit.
struct ScanResult {
    std::string experiment;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata; // ordered key/value
    bool all_converged = true;

    int column(const std::string& name) const;
    std::vector<double> col(const std::string& name) const;
};

/// Steady-state reflectivity R = <a_out† a_out> / |alpha_in|^2 at the
/// truncation carried by the parameter set.
double reflectivity(const Params& p);

/// Reflectivity with the truncation policy applied.
FockChoice reflectivity_converged(const Params& p, const TruncationPolicy& pol);

/// Frequency of the target state from the effective-matrix eigenmodes,
/// iterated to a fixed point with omega_c following the mode.
double target_frequency(const Params& p, TargetState t);

/// Copy of p with laser and cavity tuned onto the target state.
Params tuned_to(const Params& p, TargetState t);

// Figure-level scans.  Grids and case parameters are carried by the spec.
ScanResult spectrum_scan(const ScanSpec& spec);      // grid: omega_L - (w1+w2)/2, µeV
ScanResult power_scan(const ScanSpec& spec);         // grid: laser power, W
ScanResult detuning_power_map(const ScanSpec& spec); // grid: delta12 µeV, grid2: power W
ScanResult g2_scan(const ScanSpec& spec);            // grid: tau ns (empty = auto)
ScanResult coefficients_scan(const ScanSpec& spec);  // grid: delta12 µeV

// Series utilities.
struct Peak {
    double position;
    double height;
    double fwhm; // 0 when a half-height crossing is missing on either side
};

/// Local maxima above min_height_frac * max(y), parabolic position
/// refinement, FWHM by linear interpolation at half height.
std::vector<Peak> find_peaks(const std::vector<double>& x, const std::vector<double>& y,
                             double min_height_frac = 0.05);

/// Power at which R first crosses 0.5, log-interpolated in P; empty when
/// the grid does not span the transition.
std::optional<double> half_reflectivity_power(const std::vector<double>& P_W,
                                              const std::vector<double>& R);

/// Full width at half depth of a correlation dip g2(tau) recovering to 1.
std::optional<double> dip_fwhm(const std::vector<double>& tau, const std::vector<double>& g2);

std::vector<double> linspace(double a, double b, int n);
std::vector<double> logspace(double a, double b, int n); // geometric, a > 0

/// Canonical parameter sets of the reproduced figures.
namespace figures {

ScanSpec fig3_coefficients();                    // |A|,|B| vs detuning, no direct coupling
ScanSpec fig4_coefficients();                    // mu,nu vs detuning with direct coupling
ScanSpec fig5_spectrum(char which, double P_W);  // cases 'a'..'e'
std::vector<double> fig5_powers();               // {1 pW, 1 nW, 10 nW}

struct Curve {
    std::string label;
    ScanSpec spec;
};
std::vector<Curve> fig6_power_curves();
ScanSpec fig7_map();
std::vector<Curve> fig8_g2_curves(); // P = 10 pW, grids sized per target

} // namespace figures

} // namespace qdsim
