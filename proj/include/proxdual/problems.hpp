#pragma once
//
// Instance generators for the benchmark families. Every generated array
// draws from its own pdrng-v1 stream (see rng.hpp); the stream ids are part
// of the instance recipe and must not be renumbered.
//

#include "dual.hpp"
#include "rng.hpp"
#include "solvers.hpp"
#include "specialists.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace proxdual {

struct InstanceMeta
{
    std::string    family;
    Index          n          = 0;
    Index          m          = 0;
    Index          rank       = 0;   // r for low-rank / EDM families
    Index          sparsity   = 0;   // k for sparse families
    double         sigma      = 0.0;
    double         lambda     = 0.0;
    double         rho        = 0.0;
    Index          omega_size = 0;   // EDM: exactly known off-diagonal pairs
    std::uint64_t  seed       = 0;
};

struct Instance
{
    DualProblem               problem;
    Vector                    ground_truth;
    Vector                    observation;
    std::optional< Vector >   reference;
    InstanceMeta              meta;
};

namespace streams {

inline constexpr std::uint64_t lowrank_u     = 1;
inline constexpr std::uint64_t lowrank_v     = 2;
inline constexpr std::uint64_t lowrank_noise = 3;
inline constexpr std::uint64_t edm_omega     = 11;
inline constexpr std::uint64_t edm_noise     = 12;
inline constexpr std::uint64_t scad_matrix   = 21;
inline constexpr std::uint64_t scad_support  = 22;
inline constexpr std::uint64_t scad_values   = 23;
inline constexpr std::uint64_t scad_noise    = 24;
inline constexpr std::uint64_t simplex_supp  = 31;
inline constexpr std::uint64_t simplex_wts   = 32;
inline constexpr std::uint64_t simplex_noise = 33;
inline constexpr std::uint64_t l0_matrix     = 41;
inline constexpr std::uint64_t l0_support    = 42;
inline constexpr std::uint64_t l0_values     = 43;
inline constexpr std::uint64_t l0_noise      = 44;

}// namespace streams

namespace detail {

// k distinct indices of {0..n-1} by partial Fisher-Yates, returned sorted
inline std::vector< Index >
random_subset ( CounterRng & rng, Index n, Index k )
{
    std::vector< Index >  perm( n );

    for ( Index i = 0; i < n; ++i )
        perm[ i ] = i;

    for ( Index i = 0; i < k; ++i )
    {
        const auto  j = i + Index( rng.below( std::uint64_t( n - i ) ) );

        std::swap( perm[ i ], perm[ j ] );
    }

    perm.resize( k );
    std::sort( perm.begin(), perm.end() );

    return perm;
}

// row-major fill, matching the JSON layout
inline Matrix
normal_rowmajor ( CounterRng & rng, Index rows, Index cols )
{
    return rng.normal_matrix( rows, cols );
}

}// namespace detail

//
// X = U V^T with U, V in R^{n x r} i.i.d. N(0,1), diag(X) fixed, Z = X + E
//
inline Instance
gen_lowrank_diag ( Index n, Index r, std::uint64_t seed )
{
    if ( r < 1 || r > n )
        throw ParameterError( "gen_lowrank_diag: need 1 <= r <= n" );

    CounterRng  ru( seed, streams::lowrank_u ), rv( seed, streams::lowrank_v ), re( seed, streams::lowrank_noise );
    const auto  U = detail::normal_rowmajor( ru, n, r );
    const auto  V = detail::normal_rowmajor( rv, n, r );
    const auto  E = detail::normal_rowmajor( re, n, n );
    Matrix      X = U * V.transpose();
    auto        map = LinearMap::diagonal( Shape::matrix( n, n ) );
    Vector      truth = flatten( X );
    Vector      b     = map.apply( truth );
    Vector      z     = flatten( X + E );

    InstanceMeta  meta{ "lowrank", n, n, r, 0, 1.0, 1.0, 0.0, 0, seed };

    return { DualProblem( ProxOperator::rank_projection( n, n, r ), std::move( map ), std::move( b ), z ),
             std::move( truth ), std::move( z ), std::nullopt, meta };
}

//
// helix x_i = (4 cos 3t_i, 4 sin 3t_i, 2 t_i), t_i = 2 pi (i-1)/(n-1); pairs
// i<j enter Omega with probability 1/n; off-Omega pairs get noise
// sigma * s(D) * eps_ij where s(D) is the sample standard deviation of the
// true off-diagonal squared distances
//
inline Instance
gen_edm_helix ( Index n, Index r = 3, double sigma = 1e-2, std::uint64_t seed = 0 )
{
    if ( n < 2 )
        throw ParameterError( "gen_edm_helix: need n >= 2" );

    Matrix  P( n, 3 );

    for ( Index i = 0; i < n; ++i )
    {
        const double  t = 2.0 * std::numbers::pi * double( i ) / double( n - 1 );

        P.row( i ) << 4.0 * std::cos( 3.0 * t ), 4.0 * std::sin( 3.0 * t ), 2.0 * t;
    }

    Matrix  D = Matrix::Zero( n, n );

    for ( Index i = 0; i < n; ++i )
        for ( Index j = i + 1; j < n; ++j )
            D( i, j ) = D( j, i ) = ( P.row( i ) - P.row( j ) ).squaredNorm();

    // sample std of the true distances
    const double  npairs = double( n ) * double( n - 1 ) / 2.0;
    double        mean   = 0.0;

    for ( Index i = 0; i < n; ++i )
        for ( Index j = i + 1; j < n; ++j )
            mean += D( i, j );
    mean /= npairs;

    double  var = 0.0;

    for ( Index i = 0; i < n; ++i )
        for ( Index j = i + 1; j < n; ++j )
            var += ( D( i, j ) - mean ) * ( D( i, j ) - mean );

    const double  sd = npairs > 1.0 ? std::sqrt( var / ( npairs - 1.0 ) ) : 0.0;

    CounterRng                                ro( seed, streams::edm_omega ), rn( seed, streams::edm_noise );
    std::vector< std::pair< Index, Index > >  entries, omega;
    Matrix                                    Z = D;

    for ( Index i = 0; i < n; ++i )
        entries.emplace_back( i, i );

    // one uniform and one normal per pair, lexicographic order
    for ( Index i = 0; i < n; ++i )
        for ( Index j = i + 1; j < n; ++j )
        {
            const bool    known = ro.uniform() < 1.0 / double( n );
            const double  eps   = rn.normal();

            if ( known )
                omega.emplace_back( i, j );
            else
                Z( i, j ) = Z( j, i ) = D( i, j ) + sigma * sd * eps;
        }

    entries.insert( entries.end(), omega.begin(), omega.end() );

    auto          map   = LinearMap::entry_mask( Shape::sym_matrix( n ), std::move( entries ) );
    Vector        truth = flatten( D );
    Vector        b     = map.apply( truth );
    Vector        z     = flatten( Z );
    InstanceMeta  meta{ "edm", n, map.output_dim(), r, 0, sigma, 1.0, 0.0, Index( omega.size() ), seed };

    return { DualProblem( ProxOperator::edm_cone_projection( n, r ), std::move( map ), std::move( b ), z ),
             std::move( truth ), std::move( z ), std::nullopt, meta };
}

//
// A: orthonormalised rows of an m x n Gaussian, m = ceil(n/10); x sparse
// with k = ceil(rho n) Gaussian nonzeros; b = A x; z = x + sigma xi;
// SCAD with mu = 1, a = 3.7 and prox parameter lambda
//
inline Instance
gen_scad ( Index n, double rho = 0.05, double sigma = 0.01, double lambda = 0.01, std::uint64_t seed = 0 )
{
    if ( n < 20 )
        throw ParameterError( "gen_scad: need n >= 20" );

    const Index  m = ( n + 9 ) / 10;
    const Index  k = Index( std::ceil( rho * double( n ) ) );

    CounterRng  rg( seed, streams::scad_matrix ), rs( seed, streams::scad_support ), rv( seed, streams::scad_values ),
                rn( seed, streams::scad_noise );

    const Matrix                           G = detail::normal_rowmajor( rg, m, n );
    Eigen::HouseholderQR< Matrix >         qr( G.transpose() );
    Matrix                                 Q = qr.householderQ() * Matrix::Identity( n, m );
    Matrix                                 A = Q.transpose();
    Vector                                 truth = Vector::Zero( n );

    for ( auto i : detail::random_subset( rs, n, k ) )
        truth( i ) = rv.normal();

    Vector        z   = truth + sigma * rn.normal_vector( n );
    auto          map = LinearMap::dense_rows( std::move( A ) );
    Vector        b   = map.apply( truth );
    InstanceMeta  meta{ "scad", n, m, 0, k, sigma, lambda, rho, 0, seed };

    return { DualProblem( ProxOperator::scad( 1.0, 3.7, lambda ), std::move( map ), std::move( b ), z ),
             std::move( truth ), std::move( z ), std::nullopt, meta };
}

//
// projection of z onto { x >= 0, e^T x = 1, ||x||_0 <= k }; the truth is a
// random k-sparse point of the simplex and z = truth + sigma xi
//
inline Instance
gen_sparse_simplex ( Index n, Index k, double sigma = 0.1, std::uint64_t seed = 0 )
{
    if ( k < 1 || k >= n )
        throw ParameterError( "gen_sparse_simplex: need 1 <= k < n" );

    CounterRng  rs( seed, streams::simplex_supp ), rw( seed, streams::simplex_wts ), rn( seed, streams::simplex_noise );
    Vector      truth = Vector::Zero( n );

    for ( auto i : detail::random_subset( rs, n, k ) )
        truth( i ) = 0.1 + rw.uniform();
    truth /= truth.sum();

    Vector        z   = truth + sigma * rn.normal_vector( n );
    auto          map = LinearMap::single_sum( n );
    Vector        b   = Vector::Ones( 1 );
    InstanceMeta  meta{ "sparse-simplex", n, 1, 0, k, sigma, 1.0, 0.0, 0, seed };
    Instance      inst{ DualProblem( ProxOperator::positive_part_topk( k ), std::move( map ), std::move( b ), z ),
                        std::move( truth ), z, std::nullopt, meta };

    inst.reference = sparse_simplex_project( z, k ).x;

    return inst;
}

//
// composite prox of ||A x - b||^2 + lambda ||x||_0 written over (x, w) with
// [A, -I](x, w) = 0: f = ||.||_0 on x, g = 1/2||. - b||^2 on w, centre (x0, y0)
//
struct L0Data
{
    Matrix A;
    Vector b;
    Vector x0;
    Vector y0;
    Vector truth;
};

inline L0Data
gen_l0_data ( Index n, Index m, double sigma, std::uint64_t seed )
{
    CounterRng  ra( seed, streams::l0_matrix ), rs( seed, streams::l0_support ), rv( seed, streams::l0_values ),
                rn( seed, streams::l0_noise );
    L0Data      d;

    d.A = detail::normal_rowmajor( ra, m, n ) / std::sqrt( double( m ) );

    d.truth = Vector::Zero( n );
    for ( auto i : detail::random_subset( rs, n, std::max< Index >( 1, n / 4 ) ) )
        d.truth( i ) = 2.0 * rv.normal();

    d.b  = d.A * d.truth;
    d.x0 = d.truth + sigma * rn.normal_vector( n );
    d.y0 = d.b + sigma * rn.normal_vector( m );

    return d;
}

inline Instance
gen_l0_regression ( Index n, Index m, double lambda, double sigma = 0.1, std::uint64_t seed = 0 )
{
    auto    d   = gen_l0_data( n, m, sigma, seed );
    auto    map = LinearMap::stack( { LinearMap::dense_rows( d.A ), LinearMap::dense_rows( -Matrix::Identity( m, m ) ) } );
    auto    op  = ProxOperator::product( { ProxOperator::hard_threshold( lambda ), ProxOperator::quadratic( d.b, lambda ) },
                                         { n, m }, lambda );
    Vector  z( n + m );

    z << d.x0, d.y0;

    // (truth, A truth) is feasible for [A, -I]
    Vector  truth( n + m );

    truth << d.truth, d.b;

    const auto    sol = l0_regression_dual_solve( LinearMap::dense_rows( d.A ), d.b, d.x0, d.y0, lambda );
    Vector        ref( n + m );
    InstanceMeta  meta{ "l0-regression", n, m, 0, 0, sigma, lambda, 0.0, 0, seed };

    ref << sol.x, d.A * sol.x;

    Instance  inst{ DualProblem( std::move( op ), std::move( map ), Vector::Zero( m ), z ), std::move( truth ), z,
                    std::nullopt, meta };

    inst.reference = std::move( ref );

    return inst;
}

// high-accuracy reference by SSN at tol 1e-14
inline void
attach_ssn_reference ( Instance & inst, double tol = 1e-14 )
{
    SolveOptions  opts;

    opts.tol = tol;

    const auto  rep = solve_ssn( inst.problem, opts );

    inst.reference = rep.x;
}

}// namespace proxdual
