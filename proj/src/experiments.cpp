#include "qdsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

namespace qdsim {

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void append_params_meta(ScanResult& r, const Params& p)
{
    auto& m = r.metadata;
    m.emplace_back("code_version", version_string);
    m.emplace_back("g_ueV", fmt(p.g));
    m.emplace_back("kappa_left_ueV", fmt(p.kappa_left));
    m.emplace_back("kappa_right_ueV", fmt(p.kappa_right));
    m.emplace_back("kappa_other_ueV", fmt(p.kappa_other));
    m.emplace_back("gamma_ueV", fmt(p.gamma));
    m.emplace_back("gamma_star_ueV", fmt(p.gamma_star));
    m.emplace_back("omega1_ueV", fmt(p.omega1));
    m.emplace_back("omega2_ueV", fmt(p.omega2));
    m.emplace_back("omega_c_ueV", fmt(p.omega_c));
    m.emplace_back("omega_L_ueV", fmt(p.omega_L));
    m.emplace_back("Omega12_ueV", fmt(p.Omega12));
    m.emplace_back("gamma12_ueV", fmt(p.gamma12));
    m.emplace_back("P_laser_W", fmt(p.P_laser_W));
    m.emplace_back("lambda0_nm", fmt(p.lambda0_nm));
    m.emplace_back("n_medium", fmt(p.n_medium));
    m.emplace_back("fock_dim", std::to_string(p.fock_dim));
}

void append_policy_meta(ScanResult& r, const TruncationPolicy& pol)
{
    r.metadata.emplace_back("fock_policy",
                            pol.mode == TruncationPolicy::Mode::Auto ? "auto" : "fixed");
    r.metadata.emplace_back("fock_policy_value", std::to_string(pol.fock));
    r.metadata.emplace_back("fock_max", std::to_string(pol.max_fock));
    r.metadata.emplace_back("fock_rel_tol", fmt(pol.rel_tol));
}

// Index-parallel map; results land by index so merge order never depends
// on scheduling.
template <typename F>
void parallel_for(int n, int jobs, F&& body)
{
    if (jobs <= 0) jobs = int(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (first_error) std::rethrow_exception(first_error);
}

double reflectivity_at(Params p, int fock)
{
    p.fock_dim = fock;
    const SpaceLayout layout = p.layout();
    const Superoperator L = liouvillian(hamiltonian(p, layout), collapse_ops(p, layout));
    const DensityMatrix rho = steady_state(L);
    const ReflectedField rf = reflected_field(p, layout);
    const double flux_in = rf.alpha_in * rf.alpha_in;
    if (flux_in <= 0.0)
        throw std::invalid_argument("reflectivity: zero input amplitude");
    return expectation(rf.a_out.dagger() * rf.a_out, rho).real() / flux_in;
}

int fock_estimate(const Params& p)
{
    const double n_empty = std::pow(2.0 * p.pump_ueV() / p.kappa(), 2);
    return std::max(4, int(std::ceil(n_empty + 5.0 * std::sqrt(n_empty) + 3.0)));
}

bool close_enough(double a, double b, double rel_tol)
{
    return std::abs(a - b) <= std::max(rel_tol * std::abs(b), 1e-4);
}

} // namespace

std::string to_string(TargetState t)
{
    switch (t) {
    case TargetState::SingleQd: return "single";
    case TargetState::Superradiant: return "superradiant";
    case TargetState::Subradiant: return "subradiant";
    case TargetState::SymmetricBare: return "symmetric";
    }
    return "?";
}

TargetState target_from_string(const std::string& s)
{
    if (s == "single") return TargetState::SingleQd;
    if (s == "superradiant") return TargetState::Superradiant;
    if (s == "subradiant") return TargetState::Subradiant;
    if (s == "symmetric") return TargetState::SymmetricBare;
    throw std::invalid_argument("unknown target state: " + s);
}

int ScanResult::column(const std::string& name) const
{
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return int(i);
    throw std::invalid_argument("ScanResult: no column named " + name);
}

std::vector<double> ScanResult::col(const std::string& name) const
{
    const int c = column(name);
    std::vector<double> out(rows.size());
    for (size_t i = 0; i < rows.size(); ++i)
        out[i] = rows[i][c];
    return out;
}

double reflectivity(const Params& p)
{
    return reflectivity_at(p, p.fock_dim);
}

FockChoice reflectivity_converged(const Params& p, const TruncationPolicy& pol)
{
    if (pol.mode == TruncationPolicy::Mode::Fixed) {
        const double r0 = reflectivity_at(p, pol.fock);
        const double r1 = reflectivity_at(p, pol.fock + 2);
        return {pol.fock, close_enough(r0, r1, pol.rel_tol), r0};
    }
    int n = std::max(4, std::min(fock_estimate(p), pol.max_fock - 2));
    double prev = reflectivity_at(p, n);
    while (n + 2 <= pol.max_fock) {
        const double next = reflectivity_at(p, n + 2);
        if (close_enough(prev, next, pol.rel_tol))
            return {n + 2, true, next};
        prev = next;
        n += 2;
    }
    return {n, false, prev};
}

double target_frequency(const Params& p, TargetState t)
{
    const double mean = (p.omega1 + p.omega2) / 2.0;
    const double split = std::hypot(p.delta12(), p.Omega12);
    double w = 0.0;
    switch (t) {
    case TargetState::SingleQd: w = p.omega1; break;
    case TargetState::Subradiant: w = mean - split; break;
    default: w = mean + split; break;
    }
    Params q = p;
    for (int it = 0; it < 3; ++it) {
        q.omega_c = w;
        q.omega_L = w;
        const EffectiveModes modes = eigenmodes(build_effective(q));
        const Mode& m =
            (t == TargetState::Subradiant) ? modes.minus_like() : modes.plus_like();
        w = m.position();
    }
    return w;
}

Params tuned_to(const Params& p, TargetState t)
{
    Params q = p;
    const double w = target_frequency(p, t);
    q.omega_c = w;
    q.omega_L = w;
    return q;
}

ScanResult spectrum_scan(const ScanSpec& spec)
{
    if (spec.grid.empty())
        throw std::invalid_argument("spectrum_scan: empty frequency grid");
    const double mean = (spec.params.omega1 + spec.params.omega2) / 2.0;

    ScanResult r;
    r.experiment = "spectrum";
    r.columns = {"omega_rel_ueV", "reflectivity", "converged"};
    r.rows.resize(spec.grid.size());

    parallel_for(int(spec.grid.size()), spec.jobs, [&](int i) {
        Params p = spec.params;
        p.omega_c = mean; // cavity centered between the two lines
        p.omega_L = mean + spec.grid[i];
        const FockChoice fc = reflectivity_converged(p, spec.trunc);
        r.rows[i] = {spec.grid[i], fc.reflectivity, fc.converged ? 1.0 : 0.0};
    });

    for (const auto& row : r.rows)
        r.all_converged = r.all_converged && row[2] > 0.5;
    append_params_meta(r, spec.params);
    append_policy_meta(r, spec.trunc);
    r.metadata.emplace_back("omega_axis", "omega_L minus (omega1+omega2)/2, cavity at the mean");
    return r;
}

ScanResult power_scan(const ScanSpec& spec)
{
    if (spec.grid.empty())
        throw std::invalid_argument("power_scan: empty power grid");
    const Params tuned = tuned_to(spec.params, spec.target);

    ScanResult r;
    r.experiment = "power";
    r.columns = {"P_W", "reflectivity", "converged"};
    r.rows.resize(spec.grid.size());

    parallel_for(int(spec.grid.size()), spec.jobs, [&](int i) {
        Params p = tuned;
        p.P_laser_W = spec.grid[i];
        const FockChoice fc = reflectivity_converged(p, spec.trunc);
        r.rows[i] = {spec.grid[i], fc.reflectivity, fc.converged ? 1.0 : 0.0};
    });

    for (const auto& row : r.rows)
        r.all_converged = r.all_converged && row[2] > 0.5;
    append_params_meta(r, tuned);
    append_policy_meta(r, spec.trunc);
    r.metadata.emplace_back("target", to_string(spec.target));
    r.metadata.emplace_back("tuned_omega_ueV", fmt(tuned.omega_L));
    return r;
}

ScanResult detuning_power_map(const ScanSpec& spec)
{
    if (spec.grid.empty() || spec.grid2.empty())
        throw std::invalid_argument("detuning_power_map: needs detuning and power grids");
    if (spec.params.Omega12 == 0.0)
        throw std::invalid_argument("detuning_power_map: Omega12 must be nonzero");

    const int nd = int(spec.grid.size());
    const int np = int(spec.grid2.size());

    ScanResult r;
    r.experiment = "map";
    r.columns = {"delta12_ueV", "P_W", "reflectivity", "mu2", "converged"};
    r.rows.resize(size_t(nd) * np);

    parallel_for(nd * np, spec.jobs, [&](int idx) {
        const int id = idx / np, ip = idx % np;
        const double d12 = spec.grid[id];
        Params p = spec.params;
        p.omega1 = +d12;
        p.omega2 = -d12;
        // Laser and cavity locked to the subradiant branch.
        const double w = -std::hypot(d12, p.Omega12);
        p.omega_c = w;
        p.omega_L = w;
        p.P_laser_W = spec.grid2[ip];
        const FockChoice fc = reflectivity_converged(p, spec.trunc);
        const CoeffPair mn = munu_analytic(d12, p.Omega12);
        r.rows[idx] = {d12, spec.grid2[ip], fc.reflectivity, mn.sym * mn.sym,
                       fc.converged ? 1.0 : 0.0};
    });

    for (const auto& row : r.rows)
        r.all_converged = r.all_converged && row[4] > 0.5;
    append_params_meta(r, spec.params);
    append_policy_meta(r, spec.trunc);
    r.metadata.emplace_back("tuning", "omega_L = omega_c = mean - sqrt(delta12^2 + Omega12^2)");
    return r;
}

ScanResult g2_scan(const ScanSpec& spec)
{
    Params tuned = tuned_to(spec.params, spec.target);

    // Pick the truncation from the steady-state intensity, then run the
    // correlator once at that truncation.
    const FockChoice fc = reflectivity_converged(tuned, spec.trunc);
    tuned.fock_dim = fc.fock;

    std::vector<double> tau = spec.grid;
    if (tau.empty()) {
        // Dip width scales with the inverse total linewidth of the target.
        const CollectiveRates cr = collective_rates(tuned);
        double width_ueV = cr.Gamma0 + tuned.gamma;
        if (spec.target == TargetState::Superradiant)
            width_ueV = cr.Gamma_plus + cr.gamma_plus;
        else if (spec.target == TargetState::Subradiant)
            width_ueV = cr.Gamma_minus + cr.gamma_minus;
        else if (spec.target == TargetState::SymmetricBare)
            width_ueV = cr.Gamma_plus_resonant + tuned.gamma;
        const double rate = units::rate_ns(width_ueV);
        tau = linspace(0.0, 12.0 / rate, 801);
    }

    const Eigen::VectorXd g2 = g2_reflected(tuned, tau);

    ScanResult r;
    r.experiment = "g2";
    r.columns = {"tau_ns", "g2", "converged"};
    r.rows.resize(tau.size());
    for (size_t i = 0; i < tau.size(); ++i)
        r.rows[i] = {tau[i], g2(int(i)), fc.converged ? 1.0 : 0.0};
    r.all_converged = fc.converged;
    append_params_meta(r, tuned);
    append_policy_meta(r, spec.trunc);
    r.metadata.emplace_back("target", to_string(spec.target));
    r.metadata.emplace_back("fock_used", std::to_string(fc.fock));
    return r;
}

ScanResult coefficients_scan(const ScanSpec& spec)
{
    if (spec.grid.empty())
        throw std::invalid_argument("coefficients_scan: empty detuning grid");
    const bool with_dd = spec.params.Omega12 != 0.0;

    ScanResult r;
    r.experiment = "coefficients";
    r.columns = {"delta12_ueV", "coeff_sym", "coeff_antisym"};
    if (with_dd) {
        r.columns.push_back("mu_analytic");
        r.columns.push_back("nu_analytic");
    }
    r.rows.resize(spec.grid.size());

    parallel_for(int(spec.grid.size()), spec.jobs, [&](int i) {
        Params p = spec.params;
        p.omega1 = +spec.grid[i];
        p.omega2 = -spec.grid[i];
        const CoeffPair mn = coeffs_from_modes(eigenmodes(build_effective(p)));
        std::vector<double> row = {spec.grid[i], mn.sym, mn.antisym};
        if (with_dd) {
            const CoeffPair an = munu_analytic(spec.grid[i], p.Omega12);
            row.push_back(an.sym);
            row.push_back(an.antisym);
        }
        r.rows[i] = std::move(row);
    });

    append_params_meta(r, spec.params);
    r.metadata.emplace_back("note", "coeff columns are the minus-like eigenvector projections");
    return r;
}

std::vector<Peak> find_peaks(const std::vector<double>& x, const std::vector<double>& y,
                             double min_height_frac)
{
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("find_peaks: need matching series of length >= 3");
    const double ymax = *std::max_element(y.begin(), y.end());
    const double floor_h = min_height_frac * ymax;

    std::vector<Peak> peaks;
    const int n = int(x.size());
    for (int i = 1; i + 1 < n; ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > floor_h)) continue;

        // Parabolic refinement through the three points around the maximum.
        const double d1 = y[i] - y[i - 1], d2 = y[i] - y[i + 1];
        double pos = x[i];
        double height = y[i];
        const double denom = d1 + d2;
        if (denom > 0) {
            const double shift = 0.5 * (d1 - d2) / denom;
            pos = x[i] + shift * (x[i + 1] - x[i - 1]) / 2.0;
            height = y[i] + 0.25 * (d1 - d2) * shift;
        }

        // Half-height crossings by linear interpolation.
        const double half = height / 2.0;
        double left = 0.0, right = 0.0;
        for (int j = i; j > 0; --j) {
            if (y[j - 1] <= half && y[j] > half) {
                left = x[j - 1] + (half - y[j - 1]) / (y[j] - y[j - 1]) * (x[j] - x[j - 1]);
                break;
            }
            if (y[j - 1] > y[j]) break; // climbing again: no crossing on this side
        }
        for (int j = i; j + 1 < n; ++j) {
            if (y[j + 1] <= half && y[j] > half) {
                right = x[j] + (y[j] - half) / (y[j] - y[j + 1]) * (x[j + 1] - x[j]);
                break;
            }
            if (y[j + 1] > y[j]) break;
        }
        peaks.push_back({pos, height, (left != 0.0 && right != 0.0) ? right - left : 0.0});
    }
    return peaks;
}

std::optional<double> half_reflectivity_power(const std::vector<double>& P_W,
                                              const std::vector<double>& R)
{
    if (P_W.size() != R.size() || P_W.size() < 2)
        throw std::invalid_argument("half_reflectivity_power: need matching series");
    for (size_t i = 1; i < P_W.size(); ++i) {
        if (R[i - 1] > 0.5 && R[i] <= 0.5) {
            const double f = (R[i - 1] - 0.5) / (R[i - 1] - R[i]);
            return std::exp(std::log(P_W[i - 1]) + f * (std::log(P_W[i]) - std::log(P_W[i - 1])));
        }
    }
    return std::nullopt;
}

std::optional<double> dip_fwhm(const std::vector<double>& tau, const std::vector<double>& g2)
{
    if (tau.size() != g2.size() || tau.size() < 3)
        throw std::invalid_argument("dip_fwhm: need matching series");
    // Half depth between the tau = 0 floor and the large-delay plateau of 1.
    const double half = 0.5 * (g2.front() + 1.0);
    for (size_t i = 1; i < tau.size(); ++i) {
        if (g2[i - 1] < half && g2[i] >= half) {
            const double f = (half - g2[i - 1]) / (g2[i] - g2[i - 1]);
            const double t_half = tau[i - 1] + f * (tau[i] - tau[i - 1]);
            return 2.0 * t_half; // dips are symmetric in tau
        }
    }
    return std::nullopt;
}

std::vector<double> linspace(double a, double b, int n)
{
    if (n < 2) throw std::invalid_argument("linspace: need n >= 2");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = a + (b - a) * i / (n - 1);
    return v;
}

std::vector<double> logspace(double a, double b, int n)
{
    if (n < 2 || a <= 0 || b <= 0) throw std::invalid_argument("logspace: need n >= 2, a,b > 0");
    std::vector<double> v(n);
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i)
        v[i] = std::exp(la + (lb - la) * i / (n - 1));
    return v;
}

namespace figures {

ScanSpec fig3_coefficients()
{
    ScanSpec s;
    s.params = presets::detuned_only(0.0);
    s.grid = linspace(0.0, 50.0, 201);
    return s;
}

ScanSpec fig4_coefficients()
{
    ScanSpec s;
    s.params = presets::coupled(0.0);
    s.grid = linspace(0.0, 50.0, 201);
    return s;
}

ScanSpec fig5_spectrum(char which, double P_W)
{
    ScanSpec s;
    s.params = presets::figure_case(which);
    s.params.P_laser_W = P_W;
    s.grid = linspace(-60.0, 60.0, 481);
    return s;
}

std::vector<double> fig5_powers() { return {1e-12, 1e-9, 1e-8}; }

std::vector<Curve> fig6_power_curves()
{
    const std::vector<double> powers = logspace(1e-13, 3e-8, 41);
    std::vector<Curve> curves;

    auto add = [&](const std::string& label, const Params& p, TargetState t) {
        ScanSpec s;
        s.params = p;
        s.target = t;
        s.grid = powers;
        curves.push_back({label, std::move(s)});
    };
    add("single_qd", presets::single_qd(), TargetState::SingleQd);
    add("superradiant_d20", presets::coupled(20.0), TargetState::Superradiant);
    add("subradiant_d20", presets::coupled(20.0), TargetState::Subradiant);
    add("subradiant_d10", presets::coupled(10.0), TargetState::Subradiant);
    return curves;
}

ScanSpec fig7_map()
{
    ScanSpec s;
    s.params = presets::coupled(0.0); // detuning supplied by the grid
    s.grid = logspace(0.5, 50.0, 25);
    s.grid2 = logspace(1e-14, 3e-8, 25);
    return s;
}

std::vector<Curve> fig8_g2_curves()
{
    std::vector<Curve> curves;
    auto add = [&](const std::string& label, const Params& base, TargetState t) {
        ScanSpec s;
        s.params = base;
        s.params.P_laser_W = 1e-11;
        s.target = t;
        curves.push_back({label, std::move(s)});
    };
    add("single_qd", presets::single_qd(), TargetState::SingleQd);
    add("superradiant_d20", presets::coupled(20.0), TargetState::Superradiant);
    add("subradiant_d20", presets::coupled(20.0), TargetState::Subradiant);
    add("subradiant_d10", presets::coupled(10.0), TargetState::Subradiant);
    return curves;
}

} // namespace figures

} // namespace qdsim
