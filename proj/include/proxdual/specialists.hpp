#pragma once
//
// Closed-form and support-enumeration solvers for problems whose dual
// inclusion can be solved exactly:
//
//   - projection onto the k-sparse simplex { x >= 0, e^T x = 1, ||x||_0 <= k }
//     (sorting formula and the 1-D root of F(y) = e^T [(z + e y)^+]_k - 1),
//   - its spectral lift onto { X psd, Tr X = 1, rank X <= k },
//   - the l0 sparse-regression composite prox via support iteration on
//     the piecewise-affine dual inclusion.
//

#include "linmap.hpp"
#include "prox.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

namespace proxdual {

struct SparseSimplexResult
{
    Vector x;
    double y = 0.0;
};

namespace detail {

// indices sorted by descending value, ties by lowest index
inline std::vector< Index >
descending_order ( const Vector & z )
{
    std::vector< Index >  order( z.size() );

    std::iota( order.begin(), order.end(), Index( 0 ) );
    std::stable_sort( order.begin(), order.end(), [&] ( Index i, Index j ) { return z( i ) > z( j ); } );

    return order;
}

inline void
check_sparse_simplex_args ( const Vector & z, Index k )
{
    if ( k < 1 || k >= z.size() )
        throw ParameterError( "sparse simplex: need 1 <= k < n" );
}

}// namespace detail

//
// sort z descending, y_j = (1 - sum_{i<=j} z_(i)) / j, j* = largest j <= k
// with z_(j) + y_j > 0 (exact comparison), x = [(z + e y_{j*})^+]_k
//
inline SparseSimplexResult
sparse_simplex_project ( const Vector & z, Index k )
{
    detail::check_sparse_simplex_args( z, k );

    const auto  order = detail::descending_order( z );
    double      prefix = 0.0;
    double      y      = 0.0;

    for ( Index j = 1; j <= k; ++j )
    {
        const double  zj = z( order[ j - 1 ] );

        prefix += zj;

        const double  yj = ( 1.0 - prefix ) / double( j );

        if ( zj + yj > 0.0 )
            y = yj;
    }

    SparseSimplexResult  res{ Vector::Zero( z.size() ), y };

    for ( Index q = 0; q < k; ++q )
    {
        const auto  i = order[ q ];

        res.x( i ) = std::max( z( i ) + y, 0.0 );
    }

    return res;
}

//
// root of the nondecreasing piecewise-linear F(y) = e^T [(z + e y)^+]_k - 1:
// locate the bracketing pair of breakpoints -z_(i) by bisection, then solve
// the affine piece
//
inline double
sparse_simplex_root_1d ( const Vector & z, Index k )
{
    detail::check_sparse_simplex_args( z, k );

    const auto  order = detail::descending_order( z );
    Vector      top( k );

    for ( Index q = 0; q < k; ++q )
        top( q ) = z( order[ q ] );

    auto  F = [&] ( double y ) { return ( top.array() + y ).max( 0.0 ).sum() - 1.0; };

    // breakpoints in increasing order: -top(0) <= -top(1) <= ...
    std::vector< double >  bp( k );

    for ( Index q = 0; q < k; ++q )
        bp[ q ] = -top( q );

    // F(bp[0]) = -1 < 0; find the last breakpoint with F < 0
    Index  lo = 0, hi = k;

    while ( hi - lo > 1 )
    {
        const Index  mid = ( lo + hi ) / 2;

        if ( F( bp[ mid ] ) < 0.0 )
            lo = mid;
        else
            hi = mid;
    }

    // on (bp[lo], bp[lo+1]] the active set is the top lo+1 entries
    const Index   active = lo + 1;
    const double  sum    = top.head( active ).sum();

    return ( 1.0 - sum ) / double( active );
}

//
// X* = U Diag(sparse_simplex_project(eig(Z), k)) U^T
//
inline Matrix
sparse_simplex_matrix_project ( const Matrix & Z, Index k )
{
    if ( Z.rows() != Z.cols() )
        throw DimensionError( "sparse_simplex_matrix_project: matrix must be square" );

    const Matrix                             S = 0.5 * ( Z + Z.transpose() );
    Eigen::SelfAdjointEigenSolver< Matrix >  eig( S );

    if ( eig.info() != Eigen::Success )
        throw NumericalError( "sparse_simplex_matrix_project: eigensolver failed" );

    const auto  proj = sparse_simplex_project( eig.eigenvalues(), k );

    return eig.eigenvectors() * proj.x.asDiagonal() * eig.eigenvectors().transpose();
}

////////////////////////////////////////////////////////////////////////
//
// composite splitting
//

//
// A Prox_{lambda f}(x0 + A^T u) - Prox_{lambda g}(y0 - u)
//
inline Vector
composite_dual_residual ( const ProxOperator & fprox, const ProxOperator & gprox, const LinearMap & A,
                          const Vector & x0, const Vector & y0, const Vector & u )
{
    require_size( x0.size(), A.input_size(), "composite_dual_residual: x0" );
    require_size( y0.size(), A.output_dim(), "composite_dual_residual: y0" );
    require_size( u.size(), A.output_dim(), "composite_dual_residual: u" );

    return A.apply( fprox.evaluate( x0 + A.adjoint( u ) ).point ) - gprox.evaluate( y0 - u ).point;
}

enum class L0Status
{
    SupportIteration,     // support fixed-point iteration stabilised
    SupportEnumeration,   // dual root found by enumerating supports after cycling
    NoDualRoot,           // no support satisfies the inclusion; primal minimiser by enumeration
    NonConvergence        // cycling with n too large to enumerate
};

inline const char *
to_string ( L0Status s )
{
    switch ( s )
    {
        case L0Status::SupportIteration:   return "SupportIteration";
        case L0Status::SupportEnumeration: return "SupportEnumeration";
        case L0Status::NoDualRoot:         return "NoDualRoot";
        case L0Status::NonConvergence:     return "NonConvergence";
    }

    return "?";
}

struct L0Result
{
    Vector    u;
    Vector    x;
    L0Status  status          = L0Status::NonConvergence;
    int       support_updates = 0;

    bool dual_certified () const { return status == L0Status::SupportIteration || status == L0Status::SupportEnumeration; }
};

//
// lambda ||x||_0 + 1/2||x - x0||^2 + 1/2||A x - y0||^2 + lambda/2 ||A x - b||^2
//
inline double
l0_composite_objective ( const Matrix & A, const Vector & b, const Vector & x0, const Vector & y0, double lambda,
                         const Vector & x )
{
    const Vector  Ax = A * x;

    return lambda * double( ( x.array() != 0.0 ).count() ) + 0.5 * ( x - x0 ).squaredNorm() +
           0.5 * ( Ax - y0 ).squaredNorm() + 0.5 * lambda * ( Ax - b ).squaredNorm();
}

namespace detail {

using Support = std::vector< bool >;

struct L0System
{
    const Matrix & A;
    const Vector & b;
    const Vector & x0;
    const Vector & y0;
    double         lambda;
    double         tau;

    // u_S = -(I + (1+lambda) A_S A_S^T)^{-1} ((1+lambda) A_S (x0)_S - y0 - lambda b)
    Vector
    solve ( const Support & S ) const
    {
        const Index  m = A.rows();
        Matrix       M = Matrix::Identity( m, m );
        Vector       rhs = -y0 - lambda * b;

        for ( Index i = 0; i < A.cols(); ++i )
        {
            if ( !S[ i ] )
                continue;
            M.noalias() += ( 1.0 + lambda ) * A.col( i ) * A.col( i ).transpose();
            rhs += ( 1.0 + lambda ) * x0( i ) * A.col( i );
        }

        return -M.llt().solve( rhs );
    }

    Support
    support_of ( const Vector & u ) const
    {
        const Vector  t = x0 + A.transpose() * u;
        Support       S( t.size() );

        for ( Index i = 0; i < t.size(); ++i )
            S[ i ] = std::abs( t( i ) ) > tau;

        return S;
    }

    Vector
    threshold ( const Vector & u ) const
    {
        const Vector  t = x0 + A.transpose() * u;

        return ( t.array().abs() > tau ).select( t, 0.0 );
    }

    // primal minimiser restricted to support S
    Vector
    primal_on ( const Support & S ) const
    {
        std::vector< Index >  idx;

        for ( Index i = 0; i < Index( S.size() ); ++i )
            if ( S[ i ] )
                idx.push_back( i );

        Vector  x = Vector::Zero( A.cols() );

        if ( idx.empty() )
            return x;

        const Index  s = Index( idx.size() );
        Matrix       AS( A.rows(), s );

        for ( Index q = 0; q < s; ++q )
            AS.col( q ) = A.col( idx[ q ] );

        Vector  x0S( s );

        for ( Index q = 0; q < s; ++q )
            x0S( q ) = x0( idx[ q ] );

        const Matrix  H   = Matrix::Identity( s, s ) + ( 1.0 + lambda ) * AS.transpose() * AS;
        const Vector  rhs = x0S + AS.transpose() * ( y0 + lambda * b );
        const Vector  xS  = H.llt().solve( rhs );

        for ( Index q = 0; q < s; ++q )
            x( idx[ q ] ) = xS( q );

        return x;
    }
};

}// namespace detail

//
// Solve 0 in A H_tau(x0 + A^T u) - (y0 - u + lambda b)/(1 + lambda), tau = sqrt(2 lambda),
// by iterating on the active support S = { i : |(x0 + A^T u)_i| > tau }.
//
inline L0Result
l0_regression_dual_solve ( const LinearMap & map, const Vector & b, const Vector & x0, const Vector & y0, double lambda,
                           int max_updates = 100, Index enumeration_cap = 24 )
{
    const auto * dense = std::get_if< LinearMap::DenseRows >( &map.payload() );

    if ( !dense )
        throw UnsupportedError( "l0_regression_dual_solve: requires a DenseRows map" );
    if ( !( lambda > 0.0 ) )
        throw ParameterError( "l0_regression_dual_solve: lambda must be positive" );

    const Matrix &  A = dense->a;

    require_size( b.size(), A.rows(), "l0_regression_dual_solve: b" );
    require_size( y0.size(), A.rows(), "l0_regression_dual_solve: y0" );
    require_size( x0.size(), A.cols(), "l0_regression_dual_solve: x0" );

    const detail::L0System         sys{ A, b, x0, y0, lambda, std::sqrt( 2.0 * lambda ) };
    L0Result                       res;
    std::set< detail::Support >    seen;
    detail::Support                S = sys.support_of( Vector::Zero( A.rows() ) );

    for ( int it = 0; it < max_updates; ++it )
    {
        res.u = sys.solve( S );

        auto  next = sys.support_of( res.u );

        if ( next == S )
        {
            res.x      = sys.threshold( res.u );
            res.status = L0Status::SupportIteration;
            return res;
        }

        seen.insert( S );
        S = std::move( next );
        ++res.support_updates;

        if ( seen.count( S ) )
            break;
    }

    const Index  n = A.cols();

    if ( n > enumeration_cap )
    {
        res.x      = sys.threshold( res.u );
        res.status = L0Status::NonConvergence;
        return res;
    }

    // enumerate supports for a consistent root of the inclusion
    const std::uint64_t  count = std::uint64_t( 1 ) << n;
    detail::Support      T( n );

    for ( std::uint64_t mask = 0; mask < count; ++mask )
    {
        for ( Index i = 0; i < n; ++i )
            T[ i ] = ( mask >> i ) & 1U;

        const Vector  u = sys.solve( T );

        if ( sys.support_of( u ) == T )
        {
            res.u      = u;
            res.x      = sys.threshold( u );
            res.status = L0Status::SupportEnumeration;
            return res;
        }
    }

    // no multiplier exists on the zero branch: fall back to the primal minimiser
    double  best = std::numeric_limits< double >::infinity();

    for ( std::uint64_t mask = 0; mask < count; ++mask )
    {
        for ( Index i = 0; i < n; ++i )
            T[ i ] = ( mask >> i ) & 1U;

        const Vector  x = sys.primal_on( T );
        const double  v = l0_composite_objective( A, b, x0, y0, lambda, x );

        if ( v < best )
        {
            best  = v;
            res.x = x;
        }
    }

    res.status = L0Status::NoDualRoot;

    return res;
}

}// namespace proxdual
