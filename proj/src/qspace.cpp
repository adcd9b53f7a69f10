#include "qdsim/qspace.hpp"

namespace qdsim {

namespace {

Matrix fock_annihilator(int n_fock)
{
    Matrix a = Matrix::Zero(n_fock, n_fock);
    for (int n = 1; n < n_fock; ++n)
        a(n - 1, n) = std::sqrt(double(n));
    return a;
}

// sigma = |g><e| in the {|g>, |e>} = {0, 1} basis
Matrix tls_lowering()
{
    Matrix s = Matrix::Zero(2, 2);
    s(0, 1) = 1.0;
    return s;
}

Matrix embed(const SpaceLayout& layout, const Matrix& cav, const Matrix& d1, const Matrix& d2)
{
    return kron(kron(cav, d1), d2);
}

} // namespace

double trace_distance(const DensityMatrix& a, const DensityMatrix& b)
{
    require_same_layout(a.layout(), b.layout(), "trace_distance");
    Matrix d = a.matrix() - b.matrix();
    d = (d + Matrix(d.adjoint())) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(d);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Op identity_op(const SpaceLayout& layout)
{
    return Op(layout, Matrix::Identity(layout.total_dim(), layout.total_dim()));
}

Op annihilator(const SpaceLayout& layout)
{
    const Matrix id2 = Matrix::Identity(2, 2);
    return Op(layout, embed(layout, fock_annihilator(layout.fock_dim), id2, id2));
}

Op creator(const SpaceLayout& layout) { return annihilator(layout).dagger(); }

Op number_op(const SpaceLayout& layout)
{
    Op a = annihilator(layout);
    return a.dagger() * a;
}

Op lowering(const SpaceLayout& layout, int which)
{
    if (which != 1 && which != 2)
        throw std::invalid_argument("lowering: dot index must be 1 or 2");
    const Matrix idc = Matrix::Identity(layout.fock_dim, layout.fock_dim);
    const Matrix id2 = Matrix::Identity(2, 2);
    const Matrix s = tls_lowering();
    return Op(layout, which == 1 ? embed(layout, idc, s, id2) : embed(layout, idc, id2, s));
}

Op raising(const SpaceLayout& layout, int which) { return lowering(layout, which).dagger(); }

Op symmetric_lowering(const SpaceLayout& layout)
{
    return (1.0 / std::sqrt(2.0)) * (lowering(layout, 1) + lowering(layout, 2));
}

Op antisymmetric_lowering(const SpaceLayout& layout)
{
    return (1.0 / std::sqrt(2.0)) * (lowering(layout, 1) - lowering(layout, 2));
}

Complex expectation(const Op& op, const DensityMatrix& rho)
{
    require_same_layout(op.layout(), rho.layout(), "expectation");
    return (op.matrix() * rho.matrix()).trace();
}

} // namespace qdsim
