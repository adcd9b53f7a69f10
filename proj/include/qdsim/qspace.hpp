#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <tuple>

namespace qdsim {

using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXcd;
using Vector  = Eigen::VectorXcd;

/// Kronecker product of two dense expressions.
template <typename DA, typename DB>
Matrix kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b.derived();
    return out;
}

/// Composite Hilbert space of one truncated bosonic mode (dim N) and two
/// two-level emitters, subsystem order (cavity, dot1, dot2).  The basis
/// index is row-major over that order,
///
///     idx(n, s1, s2) = (n*2 + s1)*2 + s2,   s = 0 ground, s = 1 excited,
///
/// so state dumps and CSV output are stable across runs.
struct SpaceLayout {
    int fock_dim;

    explicit SpaceLayout(int n_fock) : fock_dim(n_fock)
    {
        if (fock_dim < 2)
            throw std::invalid_argument("SpaceLayout: fock_dim must be >= 2");
    }

    int total_dim() const { return 4 * fock_dim; }

    int basis_index(int n, int s1, int s2) const
    {
        if (n < 0 || n >= fock_dim || (s1 & ~1) || (s2 & ~1))
            throw std::invalid_argument("SpaceLayout: basis labels out of range");
        return (n * 2 + s1) * 2 + s2;
    }

    std::tuple<int, int, int> basis_labels(int idx) const
    {
        if (idx < 0 || idx >= total_dim())
            throw std::invalid_argument("SpaceLayout: basis index out of range");
        return {idx / 4, (idx / 2) % 2, idx % 2};
    }

    bool operator==(const SpaceLayout&) const = default;
};

/// Dense operator on a SpaceLayout.  Arithmetic is only defined between
/// operators sharing a layout; mixing layouts throws.
class Op {
public:
    Op(SpaceLayout layout, Matrix m) : layout_(layout), m_(std::move(m))
    {
        if (m_.rows() != layout_.total_dim() || m_.cols() != layout_.total_dim())
            throw std::invalid_argument("Op: matrix does not match layout dimension");
    }

    const SpaceLayout& layout() const { return layout_; }
    const Matrix& matrix() const { return m_; }

    Op dagger() const { return Op(layout_, m_.adjoint()); }
    Complex trace() const { return m_.trace(); }

private:
    SpaceLayout layout_;
    Matrix m_;
};

inline void require_same_layout(const SpaceLayout& a, const SpaceLayout& b, const char* what)
{
    if (!(a == b))
        throw std::invalid_argument(std::string(what) + ": layout mismatch");
}

inline Op operator+(const Op& a, const Op& b)
{
    require_same_layout(a.layout(), b.layout(), "Op+");
    return Op(a.layout(), a.matrix() + b.matrix());
}

inline Op operator-(const Op& a, const Op& b)
{
    require_same_layout(a.layout(), b.layout(), "Op-");
    return Op(a.layout(), a.matrix() - b.matrix());
}

inline Op operator-(const Op& a) { return Op(a.layout(), -a.matrix()); }

inline Op operator*(const Op& a, const Op& b)
{
    require_same_layout(a.layout(), b.layout(), "Op*");
    return Op(a.layout(), a.matrix() * b.matrix());
}

inline Op operator*(Complex c, const Op& a) { return Op(a.layout(), c * a.matrix()); }
inline Op operator*(double c, const Op& a) { return Op(a.layout(), c * a.matrix()); }
inline Op operator*(const Op& a, Complex c) { return c * a; }
inline Op operator*(const Op& a, double c) { return c * a; }

inline Op commutator(const Op& a, const Op& b) { return a * b - b * a; }

/// System state: Hermitian, unit-trace, positive-semidefinite density matrix.
/// Construction checks Hermiticity and trace to a loose sanity tolerance;
/// the strict (1e-9 / -1e-8) bounds are asserted where results are produced.
class DensityMatrix {
public:
    DensityMatrix(SpaceLayout layout, Matrix m, double tol = 1e-6)
        : layout_(layout), m_(std::move(m))
    {
        if (m_.rows() != layout_.total_dim() || m_.cols() != layout_.total_dim())
            throw std::invalid_argument("DensityMatrix: matrix does not match layout");
        if (std::abs(m_.trace() - Complex(1.0)) > tol)
            throw std::invalid_argument("DensityMatrix: trace deviates from 1");
        if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol)
            throw std::invalid_argument("DensityMatrix: not Hermitian");
    }

    static DensityMatrix pure(const SpaceLayout& layout, const Vector& ket)
    {
        Vector psi = ket / ket.norm();
        return DensityMatrix(layout, psi * psi.adjoint());
    }

    static DensityMatrix vacuum(const SpaceLayout& layout)
    {
        Vector ket = Vector::Zero(layout.total_dim());
        ket(layout.basis_index(0, 0, 0)) = 1.0;
        return pure(layout, ket);
    }

    const SpaceLayout& layout() const { return layout_; }
    const Matrix& matrix() const { return m_; }

    double min_eigenvalue() const
    {
        Eigen::SelfAdjointEigenSolver<Matrix> es((m_ + m_.adjoint()) / 2.0);
        return es.eigenvalues().minCoeff();
    }

private:
    SpaceLayout layout_;
    Matrix m_;
};

/// Trace distance (1/2)||rho - sigma||_1.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// Elementary operators, all embedded in the composite space.
Op identity_op(const SpaceLayout& layout);
Op annihilator(const SpaceLayout& layout);           // a ⊗ 1 ⊗ 1, <n-1|a|n> = sqrt(n)
Op creator(const SpaceLayout& layout);
Op number_op(const SpaceLayout& layout);             // a†a
Op lowering(const SpaceLayout& layout, int which);   // sigma_i = |g_i><e_i|, which in {1,2}
Op raising(const SpaceLayout& layout, int which);
Op symmetric_lowering(const SpaceLayout& layout);    // (sigma_1 + sigma_2)/sqrt(2)
Op antisymmetric_lowering(const SpaceLayout& layout);

/// Tr(op * rho); throws on layout mismatch.
Complex expectation(const Op& op, const DensityMatrix& rho);

} // namespace qdsim
