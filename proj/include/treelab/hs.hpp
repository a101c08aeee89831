#pragma once

// Finite-dimensional bench for the adjoint action T -> U T U* on
// Hilbert-Schmidt operators and the rank-one projections built from
// almost-invariant vectors.

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "treelab/random.hpp"

namespace treelab::hs {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// <a, b>, linear in the first argument.
inline Complex inner(Vector const& a, Vector const& b) { return b.dot(a); }

class HSOperator
{
  public:
    explicit HSOperator(Matrix m) : m_(std::move(m))
    {
        if (m_.rows() != m_.cols())
            throw std::invalid_argument("Hilbert-Schmidt operator must be square");
        if (!m_.allFinite())
            throw std::invalid_argument("Hilbert-Schmidt operator has non-finite entries");
    }

    static HSOperator identity(Eigen::Index dim) { return HSOperator(Matrix::Identity(dim, dim)); }

    Eigen::Index dim() const noexcept { return m_.rows(); }
    Matrix const& matrix() const noexcept { return m_; }

    double hs_norm_squared() const { return m_.squaredNorm(); }
    double hs_norm() const { return std::sqrt(hs_norm_squared()); }

    HSOperator adjoint() const { return HSOperator(m_.adjoint()); }

  private:
    Matrix m_;
};

class FiniteUnitary
{
  public:
    static constexpr double kTolerance = 1e-10;

    explicit FiniteUnitary(Matrix m) : m_(std::move(m))
    {
        if (m_.rows() != m_.cols())
            throw std::invalid_argument("unitary must be square");
        Matrix defect = m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols());
        if (defect.cwiseAbs().maxCoeff() > kTolerance)
            throw std::invalid_argument("matrix is not unitary within 1e-10");
    }

    static FiniteUnitary identity(Eigen::Index dim) { return FiniteUnitary(Matrix::Identity(dim, dim)); }

    // Real rotation by theta in the (e1, e2) plane.
    static FiniteUnitary rotation(double theta)
    {
        Matrix m(2, 2);
        m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
        return FiniteUnitary(m);
    }

    static FiniteUnitary diagonal(Vector const& phases)
    {
        Vector d(phases.size());
        for (Eigen::Index i = 0; i < phases.size(); ++i)
            d(i) = std::exp(Complex(0.0, 1.0) * phases(i).real());
        return FiniteUnitary(d.asDiagonal().toDenseMatrix());
    }

    Eigen::Index dim() const noexcept { return m_.rows(); }
    Matrix const& matrix() const noexcept { return m_; }
    Vector apply(Vector const& v) const { return m_ * v; }

  private:
    Matrix m_;
};

inline void require_dims(Eigen::Index a, Eigen::Index b)
{
    if (a != b)
        throw std::invalid_argument("dimension mismatch: " + std::to_string(a) + " vs " +
                                    std::to_string(b));
}

inline Complex trace(HSOperator const& t) { return t.matrix().trace(); }

// Psi(xi (x) xi'): eta -> <eta, xi> xi', i.e. the matrix xi' xi^*.
inline HSOperator rank_one(Vector const& xi, Vector const& xi_prime)
{
    require_dims(xi.size(), xi_prime.size());
    return HSOperator(xi_prime * xi.adjoint());
}

inline HSOperator adjoint_act(FiniteUnitary const& u, HSOperator const& t)
{
    require_dims(u.dim(), t.dim());
    return HSOperator(u.matrix() * t.matrix() * u.matrix().adjoint());
}

// <S, T>_Tr = Tr(T* S).
inline Complex hs_inner(HSOperator const& s, HSOperator const& t)
{
    require_dims(s.dim(), t.dim());
    return (t.matrix().adjoint() * s.matrix()).trace();
}

// Mutation hook for the self-test: when set, projection_defect adds P instead
// of subtracting it.
inline std::atomic<bool>& projection_defect_fault()
{
    static std::atomic<bool> flag{false};
    return flag;
}

// ||U P U* - P||_HS^2 for P the projection onto a unit vector xi.
inline double projection_defect(FiniteUnitary const& u, Vector const& xi)
{
    require_dims(u.dim(), xi.size());
    if (std::abs(xi.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("projection_defect needs a unit vector");
    HSOperator p = rank_one(xi, xi);
    Matrix moved = adjoint_act(u, p).matrix();
    double sign = projection_defect_fault().load() ? 1.0 : -1.0;
    return (moved + sign * p.matrix()).squaredNorm();
}

// 2 (1 - Re(<U xi, xi>^2)). Equals projection_defect whenever <U xi, xi> is
// real, in particular for orthogonal U and real xi.
inline double projection_defect_closed_form(FiniteUnitary const& u, Vector const& xi)
{
    Complex c = inner(u.apply(xi), xi);
    return 2.0 * (1.0 - (c * c).real());
}

// 2 (1 - |<U xi, xi>|^2), valid for every unitary and unit vector.
inline double projection_defect_modulus_form(FiniteUnitary const& u, Vector const& xi)
{
    return 2.0 * (1.0 - std::norm(inner(u.apply(xi), xi)));
}

// Tr(T1* alpha_U(T2)).
inline Complex hs_coefficient(HSOperator const& t1, HSOperator const& t2, FiniteUnitary const& u)
{
    require_dims(t1.dim(), t2.dim());
    return hs_inner(adjoint_act(u, t2), t1);
}

//---------------------------------------------------------------------------//
// Seeded random inputs

inline Vector random_gaussian_vector(Eigen::Index dim, std::uint64_t seed)
{
    CounterStream rng(combine(seed, 0x76656374ULL));
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        double re = rng.normal();
        double im = rng.normal();
        v(i) = Complex(re, im);
    }
    return v;
}

inline Vector random_unit_vector(Eigen::Index dim, std::uint64_t seed)
{
    Vector v = random_gaussian_vector(dim, seed);
    return v / v.norm();
}

inline Vector random_real_unit_vector(Eigen::Index dim, std::uint64_t seed)
{
    CounterStream rng(combine(seed, 0x7265616cULL));
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        v(i) = rng.normal();
    return v / v.norm();
}

namespace detail {
// Two passes of modified Gram-Schmidt on the columns.
inline Matrix orthonormalize(Matrix m)
{
    for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            for (Eigen::Index k = 0; k < j; ++k)
                m.col(j) -= m.col(k).dot(m.col(j)) * m.col(k);
            m.col(j) /= m.col(j).norm();
        }
    }
    return m;
}
}  // namespace detail

// Orthonormalized complex Gaussian matrix.
inline FiniteUnitary random_unitary(Eigen::Index dim, std::uint64_t seed)
{
    CounterStream rng(combine(seed, 0x756e6974ULL));
    Matrix m(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) {
            double re = rng.normal();
            double im = rng.normal();
            m(i, j) = Complex(re, im);
        }
    return FiniteUnitary(detail::orthonormalize(std::move(m)));
}

// Orthonormalized real Gaussian matrix, i.e. an orthogonal transformation.
inline FiniteUnitary random_orthogonal(Eigen::Index dim, std::uint64_t seed)
{
    CounterStream rng(combine(seed, 0x6f727468ULL));
    Matrix m(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i)
            m(i, j) = rng.normal();
    return FiniteUnitary(detail::orthonormalize(std::move(m)));
}

// Projection P f = <f, chi> chi / |A| for a window A = [-n, n] sampled on a
// uniform grid over [-half_width, half_width].
inline HSOperator discretized_window_projection(Eigen::Index grid_points, double half_width,
                                                double n)
{
    Vector chi = Vector::Zero(grid_points);
    for (Eigen::Index i = 0; i < grid_points; ++i) {
        double t = -half_width + 2.0 * half_width * (static_cast<double>(i) + 0.5) /
                                     static_cast<double>(grid_points);
        if (std::abs(t) <= n)
            chi(i) = 1.0;
    }
    if (chi.norm() == 0.0)
        throw std::invalid_argument("window does not meet the grid");
    chi /= chi.norm();
    return rank_one(chi, chi);
}

}  // namespace treelab::hs
