#pragma once

#include "qdsim/model.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace qdsim {

/// Column-stacking vectorization: vec(X) stacks the columns of X, so
/// vec(A X B) = (B^T ⊗ A) vec(X).  This fixes the superoperator layout
/// bit-for-bit across implementations.
inline Vector vec(const Matrix& m)
{
    return Eigen::Map<const Vector>(m.data(), m.size());
}

inline Matrix unvec(const Vector& v, int dim)
{
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

/// Dense generator of the master equation on vectorized density matrices,
/// in ns^-1: d vec(rho)/dt = L vec(rho).
class Superoperator {
public:
    Superoperator(SpaceLayout layout, Matrix m) : layout_(layout), m_(std::move(m))
    {
        const int D = layout_.total_dim() * layout_.total_dim();
        if (m_.rows() != D || m_.cols() != D)
            throw std::invalid_argument("Superoperator: matrix must be total_dim^2 square");
    }

    const SpaceLayout& layout() const { return layout_; }
    const Matrix& matrix() const { return m_; }
    int dim() const { return int(m_.rows()); }

    /// || vec(1)^T L || per unit row norm; zero for a trace-preserving generator.
    double trace_defect() const;

private:
    SpaceLayout layout_;
    Matrix m_;
};

/// L such that d vec(rho)/dt = L vec(rho) for
///   rho' = i[rho, H] + sum_k rate_k D[c_k](rho),
/// with all energies divided by hbar so time is in ns.
Superoperator liouvillian(const Op& H, const std::vector<std::pair<double, Op>>& channels);

/// Unique steady state of L, solved by replacing one row with the trace
/// constraint and LU-solving, then Hermitizing and renormalizing.  Throws
/// if the null space is degenerate (reported with a condition estimate) or
/// the residual ||L vec(rho)|| exceeds 1e-9 ns^-1.
DensityMatrix steady_state(const Superoperator& L);

struct OdeOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double max_step_ns = 0.0;   // 0 = unrestricted; halve as a stiffness fallback
    long max_steps = 20'000'000;
};

/// Adaptive Dormand-Prince 5(4) integration of d vec(m)/dt = L vec(m),
/// reporting the state at each node of t_grid (ns, increasing, t0 >= 0).
/// Works on arbitrary seed matrices; no trace normalization is applied.
std::vector<Matrix> propagate_raw(const Superoperator& L, const Matrix& m0,
                                  const std::vector<double>& t_grid_ns,
                                  const OdeOptions& opt = {});

/// Density-matrix propagation; checks that the trace stays within 1e-7 of 1
/// across the grid and throws with diagnostics otherwise.
std::vector<DensityMatrix> propagate(const Superoperator& L, const DensityMatrix& rho0,
                                     const std::vector<double>& t_grid_ns,
                                     const OdeOptions& opt = {});

/// C(tau_k) = Tr(left * exp(L tau_k) seed), evaluated by streaming the
/// integration through the grid (states are not stored).
Vector correlation_from_seed(const Superoperator& L, const Matrix& seed, const Op& left,
                             const std::vector<double>& tau_grid_ns,
                             const OdeOptions& opt = {});

/// Quantum-regression two-time correlator <A(tau) B(0)> in the steady
/// state: the seeded matrix B rho_ss is propagated under L and traced
/// against A.  C(0) equals the static expectation <A B>.
Vector two_time_correlation(const Superoperator& L, const DensityMatrix& rho_ss,
                            const Op& A, const Op& B,
                            const std::vector<double>& tau_grid_ns,
                            const OdeOptions& opt = {});

/// Reflected-field operator for drive and detection on the left mirror:
///   a_out = alpha_in + sqrt(kappa_left/hbar) a,
/// in photon-flux-amplitude units (ns^-1/2), with the input amplitude
/// fixed by E_p/hbar = sqrt(kappa_left/hbar) alpha_in.  The relative sign
/// is chosen so the empty symmetric cavity at omega_L = omega_c reflects
/// nothing.
struct ReflectedField {
    Op a_out;
    double alpha_in; // sqrt(input photon flux), ns^-1/2
};
ReflectedField reflected_field(const Params& p, const SpaceLayout& layout);

/// Normalized second-order correlation of the reflected field,
///   g2(tau) = <a_out†(0) a_out†(tau) a_out(tau) a_out(0)> / <a_out† a_out>^2.
/// Throws if the reflected intensity vanishes.
Eigen::VectorXd g2_reflected(const Params& p, const std::vector<double>& tau_grid_ns,
                             const OdeOptions& opt = {});

/// Cavity emission spectrum S(w) ∝ Re ∫_0^∞ dτ e^{-iωτ} <a†(τ) a(0)> under
/// weak incoherent pumping (the coherent drive is switched off).  When no
/// pump rates are given, a small probe is applied to the dots, or to the
/// cavity if g = 0.  omega_grid is absolute, µeV.
Eigen::VectorXd emission_spectrum(const Params& p, const Eigen::VectorXd& omega_grid_ueV,
                                  std::optional<PumpRates> pumps = std::nullopt);

/// Lindblad channel list extended with incoherent pump terms
/// P1 L(s1+), P2 L(s2+), Pc L(a†).
std::vector<std::pair<double, Op>> collapse_ops_with_pumps(const Params& p,
                                                           const SpaceLayout& layout,
                                                           const PumpRates& pumps);

} // namespace qdsim
