#include "qdsim/dynamics.hpp"
#include "qdsim/effective.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qdsim {

double Superoperator::trace_defect() const
{
    const int d = layout_.total_dim();
    Vector tr = vec(Matrix(Matrix::Identity(d, d)));
    double row_scale = m_.cwiseAbs().rowwise().sum().maxCoeff();
    if (row_scale == 0.0) return 0.0;
    return (tr.adjoint() * m_).norm() / row_scale;
}

Superoperator liouvillian(const Op& H, const std::vector<std::pair<double, Op>>& channels)
{
    const SpaceLayout layout = H.layout();
    const int d = layout.total_dim();
    const Matrix id = Matrix::Identity(d, d);
    const Complex I(0.0, 1.0);
    const double hbar = units::hbar_ueV_ns;

    // rho' = i[rho, H]/hbar  ->  (i/hbar)(H^T ⊗ 1 - 1 ⊗ H)
    Matrix L = (I / hbar) * (kron(H.matrix().transpose(), id) - kron(id, H.matrix()));

    for (const auto& [rate, c] : channels) {
        require_same_layout(layout, c.layout(), "liouvillian");
        if (rate < 0.0)
            throw std::invalid_argument("liouvillian: negative channel rate");
        if (rate == 0.0) continue;
        const Matrix& cm = c.matrix();
        const Matrix cdc = cm.adjoint() * cm;
        L += (rate / hbar)
           * (kron(cm.conjugate(), cm)
              - 0.5 * kron(id, cdc)
              - 0.5 * kron(cdc.transpose(), id));
    }
    return Superoperator(layout, std::move(L));
}

DensityMatrix steady_state(const Superoperator& L)
{
    const int d = L.layout().total_dim();
    const int D = L.dim();

    // Replace the first row with the trace constraint Tr(rho) = 1.
    Matrix M = L.matrix();
    M.row(0).setZero();
    for (int j = 0; j < d; ++j)
        M(0, j * d + j) = 1.0;

    Vector b = Vector::Zero(D);
    b(0) = 1.0;

    Eigen::PartialPivLU<Matrix> lu(M);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-13)) {
        std::ostringstream msg;
        msg << "steady_state: singular or degenerate null space (rcond = " << rcond << ")";
        throw std::runtime_error(msg.str());
    }

    Vector x = lu.solve(b);
    x += lu.solve(Vector(b - M * x)); // one step of iterative refinement

    Matrix rho = unvec(x, d);
    rho = (rho + Matrix(rho.adjoint())) / 2.0;
    rho /= rho.trace().real();

    const double residual = (L.matrix() * vec(rho)).norm();
    if (!(residual < 1e-9)) {
        std::ostringstream msg;
        msg << "steady_state: did not converge (residual = " << residual
            << " ns^-1, rcond = " << rcond << ")";
        throw std::runtime_error(msg.str());
    }
    return DensityMatrix(L.layout(), std::move(rho));
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
// b5 - b4 (error estimator weights), including the FSAL stage.
constexpr double E1 = B1 - 5179.0 / 57600, E3 = B3 - 7571.0 / 16695, E4 = B4 - 393.0 / 640,
                 E5 = B5 + 92097.0 / 339200, E6 = B6 - 187.0 / 2100, E7 = -1.0 / 40;

class Dopri5 {
public:
    Dopri5(const Matrix& A, const OdeOptions& opt) : A_(A), opt_(opt)
    {
        const int D = int(A.rows());
        for (Vector* k : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &ytmp_, &err_})
            k->resize(D);
        // Spectral-radius proxy from the largest row sum; explicit RK is
        // stability-limited for this stiff generator, so cap the step there.
        double rho = A.cwiseAbs().rowwise().sum().maxCoeff();
        stab_step_ = rho > 0 ? 2.0 / rho : 1.0;
    }

    // Advance y from t to t_end, calling nothing in between.
    void advance(Vector& y, double t, double t_end)
    {
        if (t_end <= t) return;
        if (!have_k1_) {
            k1_.noalias() = A_ * y;
            have_k1_ = true;
        }
        if (h_ <= 0.0) h_ = initial_step(y);
        long steps = 0;
        while (t < t_end) {
            double h = std::min(h_, t_end - t);
            if (opt_.max_step_ns > 0) h = std::min(h, opt_.max_step_ns);
            if (++steps > opt_.max_steps)
                throw std::runtime_error("propagate: step budget exhausted (stiffness or "
                                         "tolerance failure); try a larger max_step halving");

            ytmp_.noalias() = y + h * A21 * k1_;
            k2_.noalias() = A_ * ytmp_;
            ytmp_.noalias() = y + h * (A31 * k1_ + A32 * k2_);
            k3_.noalias() = A_ * ytmp_;
            ytmp_.noalias() = y + h * (A41 * k1_ + A42 * k2_ + A43 * k3_);
            k4_.noalias() = A_ * ytmp_;
            ytmp_.noalias() = y + h * (A51 * k1_ + A52 * k2_ + A53 * k3_ + A54 * k4_);
            k5_.noalias() = A_ * ytmp_;
            ytmp_.noalias() = y + h * (A61 * k1_ + A62 * k2_ + A63 * k3_ + A64 * k4_ + A65 * k5_);
            k6_.noalias() = A_ * ytmp_;
            // 5th-order solution; its derivative is the FSAL stage.
            ytmp_.noalias() = y + h * (B1 * k1_ + B3 * k3_ + B4 * k4_ + B5 * k5_ + B6 * k6_);
            k7_.noalias() = A_ * ytmp_;
            err_.noalias() = h * (E1 * k1_ + E3 * k3_ + E4 * k4_ + E5 * k5_ + E6 * k6_ + E7 * k7_);

            const double err = error_norm(y, ytmp_);
            if (err <= 1.0) {
                t += h;
                y.swap(ytmp_);
                k1_.swap(k7_);
                const double grow = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
                h_ = h * std::clamp(grow, 0.2, 5.0);
                h_ = std::min(h_, 4.0 * stab_step_);
            } else {
                h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
                if (h_ < 1e-15)
                    throw std::runtime_error("propagate: step size underflow");
            }
        }
    }

private:
    double initial_step(const Vector& y) const
    {
        const double ynorm = y.norm();
        const double fnorm = k1_.norm();
        double h = fnorm > 0 ? 0.01 * (ynorm + opt_.atol) / fnorm : stab_step_;
        return std::min(h, stab_step_);
    }

    double error_norm(const Vector& y0, const Vector& y1) const
    {
        const int D = int(y0.size());
        double acc = 0.0;
        for (int i = 0; i < D; ++i) {
            const double scale =
                opt_.atol + opt_.rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
            const double e = std::abs(err_(i)) / scale;
            acc += e * e;
        }
        return std::sqrt(acc / D);
    }

    const Matrix& A_;
    OdeOptions opt_;
    Vector k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, err_;
    double h_ = 0.0;
    double stab_step_ = 1.0;
    bool have_k1_ = false;
};

void check_grid(const std::vector<double>& t)
{
    if (t.empty())
        throw std::invalid_argument("propagate: empty time grid");
    if (t.front() < 0.0)
        throw std::invalid_argument("propagate: grid must start at t >= 0");
    for (size_t i = 1; i < t.size(); ++i)
        if (t[i] <= t[i - 1])
            throw std::invalid_argument("propagate: grid must be strictly increasing");
}

void integrate_over_grid(const Superoperator& L, const Matrix& m0,
                         const std::vector<double>& grid, const OdeOptions& opt,
                         const std::function<void(size_t, const Vector&)>& emit)
{
    check_grid(grid);
    Vector y = vec(m0);
    Dopri5 stepper(L.matrix(), opt);
    double t = 0.0;
    for (size_t k = 0; k < grid.size(); ++k) {
        stepper.advance(y, t, grid[k]);
        t = grid[k];
        emit(k, y);
    }
}

} // namespace

std::vector<Matrix> propagate_raw(const Superoperator& L, const Matrix& m0,
                                  const std::vector<double>& t_grid_ns, const OdeOptions& opt)
{
    const int d = L.layout().total_dim();
    if (m0.rows() != d || m0.cols() != d)
        throw std::invalid_argument("propagate_raw: seed does not match layout");
    std::vector<Matrix> out;
    out.reserve(t_grid_ns.size());
    integrate_over_grid(L, m0, t_grid_ns, opt,
                        [&](size_t, const Vector& y) { out.push_back(unvec(y, d)); });
    return out;
}

std::vector<DensityMatrix> propagate(const Superoperator& L, const DensityMatrix& rho0,
                                     const std::vector<double>& t_grid_ns, const OdeOptions& opt)
{
    require_same_layout(L.layout(), rho0.layout(), "propagate");
    std::vector<Matrix> raw = propagate_raw(L, rho0.matrix(), t_grid_ns, opt);
    std::vector<DensityMatrix> out;
    out.reserve(raw.size());
    for (size_t k = 0; k < raw.size(); ++k) {
        const double tr = raw[k].trace().real();
        if (std::abs(tr - 1.0) > 1e-7) {
            std::ostringstream msg;
            msg << "propagate: trace drifted to " << tr << " at t = " << t_grid_ns[k] << " ns";
            throw std::runtime_error(msg.str());
        }
        out.emplace_back(L.layout(), std::move(raw[k]), 1e-6);
    }
    return out;
}

Vector correlation_from_seed(const Superoperator& L, const Matrix& seed, const Op& left,
                             const std::vector<double>& tau_grid_ns, const OdeOptions& opt)
{
    require_same_layout(L.layout(), left.layout(), "correlation_from_seed");
    const int d = L.layout().total_dim();
    if (seed.rows() != d || seed.cols() != d)
        throw std::invalid_argument("correlation_from_seed: seed does not match layout");

    // Tr(A M) = sum_ij A_ij M_ji
    const Matrix At = left.matrix().transpose();
    Vector out(tau_grid_ns.size());
    integrate_over_grid(L, seed, tau_grid_ns, opt, [&](size_t k, const Vector& y) {
        out(k) = At.cwiseProduct(unvec(y, d)).sum();
    });
    return out;
}

Vector two_time_correlation(const Superoperator& L, const DensityMatrix& rho_ss, const Op& A,
                            const Op& B, const std::vector<double>& tau_grid_ns,
                            const OdeOptions& opt)
{
    require_same_layout(L.layout(), rho_ss.layout(), "two_time_correlation");
    return correlation_from_seed(L, B.matrix() * rho_ss.matrix(), A, tau_grid_ns, opt);
}

ReflectedField reflected_field(const Params& p, const SpaceLayout& layout)
{
    if (p.kappa_left <= 0.0)
        throw std::invalid_argument("reflected_field: kappa_left must be positive");
    const double root_kl = std::sqrt(units::rate_ns(p.kappa_left));
    const double alpha_in = units::rate_ns(p.pump_ueV()) / root_kl;
    Op a_out = root_kl * annihilator(layout) + alpha_in * identity_op(layout);
    return {std::move(a_out), alpha_in};
}

Eigen::VectorXd g2_reflected(const Params& p, const std::vector<double>& tau_grid_ns,
                             const OdeOptions& opt)
{
    p.validate();
    const SpaceLayout layout = p.layout();
    const Superoperator L = liouvillian(hamiltonian(p, layout), collapse_ops(p, layout));
    const DensityMatrix rho = steady_state(L);

    const ReflectedField rf = reflected_field(p, layout);
    const Op n_out = rf.a_out.dagger() * rf.a_out;
    const double intensity = expectation(n_out, rho).real();
    const double flux_in = rf.alpha_in * rf.alpha_in;
    if (!(intensity > 1e-14 * std::max(flux_in, 1e-30)))
        throw std::runtime_error("g2_reflected: reflected intensity is zero; g2 undefined");

    const Matrix seed = rf.a_out.matrix() * rho.matrix() * rf.a_out.matrix().adjoint();
    const Vector c = correlation_from_seed(L, seed, n_out, tau_grid_ns, opt);

    const double imag_resid = c.imag().cwiseAbs().maxCoeff();
    const double scale = std::max(c.real().cwiseAbs().maxCoeff(), intensity * intensity);
    if (imag_resid > 1e-9 * scale + 1e-20)
        throw std::runtime_error("g2_reflected: correlator has a spurious imaginary part");

    return c.real() / (intensity * intensity);
}

std::vector<std::pair<double, Op>> collapse_ops_with_pumps(const Params& p,
                                                           const SpaceLayout& layout,
                                                           const PumpRates& pumps)
{
    auto channels = collapse_ops(p, layout);
    if (pumps.dot1 < 0 || pumps.dot2 < 0 || pumps.cavity < 0)
        throw std::invalid_argument("collapse_ops_with_pumps: negative pump rate");
    if (pumps.dot1 > 0) channels.emplace_back(pumps.dot1, raising(layout, 1));
    if (pumps.dot2 > 0) channels.emplace_back(pumps.dot2, raising(layout, 2));
    if (pumps.cavity > 0) channels.emplace_back(pumps.cavity, creator(layout));
    return channels;
}

Eigen::VectorXd emission_spectrum(const Params& p, const Eigen::VectorXd& omega_grid_ueV,
                                  std::optional<PumpRates> pumps)
{
    p.validate();
    Params probe = p;
    probe.P_laser_W = 0.0; // spectra are taken under incoherent pumping only

    PumpRates pr;
    if (pumps) {
        pr = *pumps;
    } else if (probe.g > 0.0) {
        pr.dot1 = pr.dot2 = std::min(probe.gamma, 4.0 * probe.g * probe.g / probe.kappa()) / 50.0;
    } else {
        pr.cavity = probe.kappa() / 2000.0;
    }

    const SpaceLayout layout = probe.layout();
    const Superoperator L =
        liouvillian(hamiltonian(probe, layout), collapse_ops_with_pumps(probe, layout, pr));
    const DensityMatrix rho = steady_state(L);
    const Op a = annihilator(layout);

    // Time grid sized from the effective-mode content: long enough for the
    // narrowest line to ring down, fine enough for the fastest beat note.
    const EffectiveModes modes = eigenmodes(build_effective(probe, pr));
    double min_rate = std::numeric_limits<double>::infinity();
    double max_freq = 1.0;
    for (const auto& m : modes.modes) {
        // Modes with no cavity content never show up in <a†(tau) a(0)>;
        // their (possibly near-zero) linewidth must not size the grid.
        if (std::norm(m.vec(2)) < 1e-4) continue;
        const double lw = std::max(m.linewidth(), 1e-3);
        min_rate = std::min(min_rate, units::rate_ns(lw));
        max_freq = std::max(max_freq, std::abs(units::rate_ns(m.position() - probe.omega_L)));
    }
    for (int i = 0; i < omega_grid_ueV.size(); ++i)
        max_freq = std::max(max_freq, std::abs(units::rate_ns(omega_grid_ueV(i) - probe.omega_L)));

    const double tau_max = std::min(10.0 / min_rate, 200.0);
    double dt = std::min(0.25 / max_freq, tau_max / 400.0);
    const int n_tau = std::min<int>(int(std::ceil(tau_max / dt)) + 1, 40000);
    dt = tau_max / (n_tau - 1);

    std::vector<double> tau(n_tau);
    for (int i = 0; i < n_tau; ++i)
        tau[i] = i * dt;

    const Vector c = two_time_correlation(L, rho, creator(layout), a, tau);

    // One-sided Fourier transform, trapezoid weights.  The Hamiltonian is
    // built in the omega_L rotating frame, so the kernel uses omega - omega_L
    // to place peaks at absolute frequencies.
    Eigen::VectorXd s(omega_grid_ueV.size());
    for (int k = 0; k < omega_grid_ueV.size(); ++k) {
        const double w = units::rate_ns(omega_grid_ueV(k) - probe.omega_L);
        Complex acc = 0.0;
        for (int i = 0; i < n_tau; ++i) {
            const double weight = (i == 0 || i == n_tau - 1) ? 0.5 : 1.0;
            acc += weight * std::exp(Complex(0.0, -w * tau[i])) * c(i);
        }
        s(k) = (acc * dt / M_PI).real();
    }
    return s;
}

} // namespace qdsim
