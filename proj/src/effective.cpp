#include "qdsim/effective.hpp"

#include <cmath>
#include <sstream>

namespace qdsim {

Eigen::Matrix3cd build_effective(const Params& p, const PumpRates& pumps)
{
    p.validate();
    const Complex I(0.0, 1.0);
    const Complex w1 = p.omega1 - I * (p.gamma / 2.0 + pumps.dot1);
    const Complex w2 = p.omega2 - I * (p.gamma / 2.0 + pumps.dot2);
    const Complex wc = p.omega_c - I * p.kappa() / 2.0 + I * pumps.cavity;
    const Complex xi = p.Omega12 - I * p.gamma12 / 2.0;

    Eigen::Matrix3cd m;
    m << w1, xi, -I * p.g,
         xi, w2, -I * p.g,
         I * p.g, I * p.g, wc;
    return m;
}

const Mode& EffectiveModes::of(ModeKind k) const
{
    for (const Mode& m : modes)
        if (m.kind == k) return m;
    throw std::logic_error("EffectiveModes: tag not assigned");
}

EffectiveModes eigenmodes(const Eigen::Matrix3cd& m)
{
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(m, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigenmodes: eigensolver failed");

    const Eigen::Matrix3cd V = es.eigenvectors();
    Eigen::JacobiSVD<Eigen::Matrix3cd> svd(V);
    const double cond = svd.singularValues()(0) / svd.singularValues()(2);
    if (!(svd.singularValues()(2) > 1e-10)) {
        std::ostringstream msg;
        msg << "eigenmodes: defective effective matrix (eigenvector condition " << cond << ")";
        throw std::runtime_error(msg.str());
    }

    std::array<Mode, 3> raw;
    for (int i = 0; i < 3; ++i) {
        raw[i].frequency = es.eigenvalues()(i);
        raw[i].vec = V.col(i).normalized();
        raw[i].kind = ModeKind::CavityLike; // provisional
    }

    // Cavity-like: largest |a| component.
    int icav = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(raw[i].vec(2)) > std::abs(raw[icav].vec(2))) icav = i;

    int iexc[2], n = 0;
    for (int i = 0; i < 3; ++i)
        if (i != icav) iexc[n++] = i;

    auto sym_mod = [](const Mode& md) { return std::abs(md.vec(0) + md.vec(1)) / std::sqrt(2.0); };

    // Plus-like has the dominant symmetric projection; on a tie the
    // red-shifted mode is minus-like.
    int iplus, iminus;
    const double s0 = sym_mod(raw[iexc[0]]);
    const double s1 = sym_mod(raw[iexc[1]]);
    if (std::abs(s0 - s1) > 1e-6) {
        iplus = s0 > s1 ? iexc[0] : iexc[1];
    } else {
        iplus = raw[iexc[0]].frequency.real() >= raw[iexc[1]].frequency.real() ? iexc[0]
                                                                               : iexc[1];
    }
    iminus = (iplus == iexc[0]) ? iexc[1] : iexc[0];

    raw[icav].kind = ModeKind::CavityLike;
    raw[iplus].kind = ModeKind::PlusLike;
    raw[iminus].kind = ModeKind::MinusLike;

    // Fix the phase: symmetric projection real-positive (fall back to the
    // largest component for a purely antisymmetric vector).
    for (Mode& md : raw) {
        Complex s = (md.vec(0) + md.vec(1)) / std::sqrt(2.0);
        if (std::abs(s) < 1e-12) {
            int imax = 0;
            md.vec.cwiseAbs().maxCoeff(&imax);
            s = md.vec(imax);
        }
        md.vec *= std::conj(s) / std::abs(s);
    }

    return EffectiveModes{raw};
}

CoeffPair coeffs_from_modes(const EffectiveModes& modes)
{
    const Mode& minus = modes.minus_like();
    const double s = std::abs(minus.vec(0) + minus.vec(1)) / std::sqrt(2.0);
    const double t = std::abs(minus.vec(0) - minus.vec(1)) / std::sqrt(2.0);
    const double norm = std::hypot(s, t);
    if (!(norm > 0.0))
        throw std::invalid_argument("coeffs_from_modes: mode has no excitonic content");
    return {s / norm, t / norm};
}

CoeffPair munu_analytic(double delta12_ueV, double omega12_ueV)
{
    if (omega12_ueV == 0.0)
        throw std::invalid_argument("munu_analytic: omega12 = 0 leaves delta undefined; "
                                    "use the numeric eigenvector route");
    const double delta = delta12_ueV / omega12_ueV;
    const double root = std::sqrt(1.0 + delta * delta);
    const double den = std::sqrt(delta * delta + (1.0 + root) * (1.0 + root));
    return {std::abs(delta) / den, (1.0 + root) / den};
}

CollectiveRates collective_rates(const Params& p)
{
    p.validate();
    CollectiveRates r;

    if (p.Omega12 != 0.0) {
        const CoeffPair mn = munu_analytic(p.delta12(), p.Omega12);
        r.mu = mn.sym;
        r.nu = mn.antisym;
    } else {
        // No direct coupling: fall back to the numeric eigenvectors.
        const CoeffPair mn = coeffs_from_modes(eigenmodes(build_effective(p)));
        r.mu = mn.sym;
        r.nu = mn.antisym;
    }

    const double g2 = p.g * p.g;
    const double sqrt2g = std::sqrt(2.0) * p.g;
    r.g_minus = r.mu * sqrt2g;
    r.g_plus = r.nu * sqrt2g;
    r.gamma_minus = r.mu * r.mu * (p.gamma + p.gamma12);
    r.gamma_plus = r.nu * r.nu * (p.gamma + p.gamma12);
    r.Gamma0 = 4.0 * g2 / p.kappa();
    r.Gamma_plus_resonant = 8.0 * g2 / p.kappa();
    r.Gamma_minus = r.mu * r.mu * r.Gamma_plus_resonant;
    r.Gamma_plus = r.nu * r.nu * r.Gamma_plus_resonant;
    r.nc0 = p.gamma * p.gamma / (8.0 * g2);
    r.nc_plus = 2.0 * r.nc0;
    r.nc_minus = 2.0 * r.mu * r.mu * r.nc0;
    r.nc_plus_dd = 2.0 * r.nu * r.nu * r.nc0;
    r.nc_minus_exact =
        r.g_minus > 0 ? (r.gamma_minus * r.gamma_minus) / (8.0 * r.g_minus * r.g_minus) : 0.0;
    r.nc_plus_exact =
        r.g_plus > 0 ? (r.gamma_plus * r.gamma_plus) / (8.0 * r.g_plus * r.g_plus) : 0.0;
    return r;
}

EmissionDecomposition emission_decomposition(double mu, double nu, double gamma, double gamma12)
{
    if (std::abs(mu * mu + nu * nu - 1.0) > 1e-8)
        throw std::invalid_argument("emission_decomposition: mu^2 + nu^2 must be 1");
    const double total = gamma + gamma12;
    return {nu * nu * total, mu * mu * total, mu * nu * total};
}

} // namespace qdsim
