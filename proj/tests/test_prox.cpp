#include <proxdual/prox.hpp>
#include <proxdual/rng.hpp>

#include <gtest/gtest.h>

#include <bit>

using namespace proxdual;

namespace {

Vector
vec ( std::initializer_list< double > v )
{
    Vector  x( Index( v.size() ) );
    Index   i = 0;

    for ( double d : v )
        x( i++ ) = d;

    return x;
}

Matrix
random_orthogonal ( CounterRng & g, Index n )
{
    Eigen::HouseholderQR< Matrix >  qr( g.normal_matrix( n, n ) );

    return qr.householderQ();
}

Matrix
random_symmetric ( CounterRng & g, Index n )
{
    const Matrix  M = g.normal_matrix( n, n );

    return 0.5 * ( M + M.transpose() );
}

// 37/27: the middle-branch value at z=2, mu=1, a=3.7, lambda=1
constexpr double scad_mid_value = 1.3703703703703705;

}// namespace

////////////////////////////////////////////////////////////////////////
//
// SCAD
//

TEST( ScadProx, ThresholdBranch )
{
    EXPECT_EQ( scad_prox( vec( { 0.5 } ), 1.0, 3.7, 1.0 ).point( 0 ), 0.0 );
    EXPECT_EQ( scad_prox( vec( { -1.0 } ), 1.0, 3.7, 1.0 ).point( 0 ), 0.0 );
}

TEST( ScadProx, IdentityBranch )
{
    EXPECT_EQ( scad_prox( vec( { 5.0 } ), 1.0, 3.7, 1.0 ).point( 0 ), 5.0 );
    EXPECT_EQ( scad_prox( vec( { -5.0 } ), 1.0, 3.7, 1.0 ).point( 0 ), -5.0 );
}

TEST( ScadProx, MiddleBranchFrozenValue )
{
    EXPECT_NEAR( scad_prox( vec( { 2.0 } ), 1.0, 3.7, 1.0 ).point( 0 ), scad_mid_value, 1e-14 );
    EXPECT_NEAR( scad_prox( vec( { -2.0 } ), 1.0, 3.7, 1.0 ).point( 0 ), -scad_mid_value, 1e-14 );
}

TEST( ScadProx, MiddleValueIsTheScalarMinimiser )
{
    const auto    op = ProxOperator::scad( 1.0, 3.7, 1.0 );
    const Vector  t  = vec( { 2.0 } );
    double        best_x = 0.0, best = std::numeric_limits< double >::infinity();

    for ( int i = -6000000; i <= 6000000; ++i )
    {
        const double  x = 1e-6 * i;
        const double  f = op.prox_objective( vec( { x } ), t );

        if ( f < best )
        {
            best   = f;
            best_x = x;
        }
    }

    EXPECT_NEAR( best_x, scad_mid_value, 2e-6 );
}

TEST( ScadProx, UpperKinkBindsToMiddleBranch )
{
    const auto  res = scad_prox( vec( { 3.7 } ), 1.0, 3.7, 1.0 );

    EXPECT_EQ( res.branch[ 0 ], 1 );
    EXPECT_NEAR( res.point( 0 ), 3.7, 1e-14 );

    const auto  low = scad_prox( vec( { 1.0 } ), 1.0, 3.7, 1.0 );

    EXPECT_EQ( low.branch[ 0 ], 0 );
    EXPECT_EQ( low.point( 0 ), 0.0 );
}

TEST( ScadProx, ParameterErrors )
{
    EXPECT_THROW( ProxOperator::scad( 1.0, 2.0, 1.0 ), ParameterError );
    EXPECT_THROW( ProxOperator::scad( 0.0, 3.7, 1.0 ), ParameterError );
    EXPECT_THROW( ProxOperator::scad( 1.0, 3.7, 0.0 ), ParameterError );
    EXPECT_THROW( ProxOperator::scad( 1.0, 3.7, -1.0 ), ParameterError );
}

TEST( ScadProx, JumpRegimeWhenStepExceedsCurvature )
{
    // lambda >= a * ref_lambda: the prox keeps or kills each entry
    const auto  op  = ProxOperator::scad( 1.0, 3.7, 0.1 ).with_lambda( 1.0 );
    const auto  res = op.evaluate( vec( { 0.5, 0.7, -2.0 } ) );

    // threshold sqrt(1 * 0.37) = 0.608...
    EXPECT_EQ( res.point( 0 ), 0.0 );
    EXPECT_EQ( res.point( 1 ), 0.7 );
    EXPECT_EQ( res.point( 2 ), -2.0 );
}

////////////////////////////////////////////////////////////////////////

TEST( HardThreshold, KinkMapsToZero )
{
    const auto  res = hard_threshold( vec( { 2.0, 1.0, 0.3 } ), 0.5 );

    EXPECT_EQ( res.point, vec( { 2.0, 0.0, 0.0 } ) );
}

TEST( HardThreshold, ZeroInput )
{
    EXPECT_EQ( hard_threshold( Vector::Zero( 3 ), 0.5 ).point, Vector::Zero( 3 ) );
}

TEST( HardThreshold, SmallLambda )
{
    EXPECT_EQ( hard_threshold( vec( { 0.25, -0.15 } ), 0.02 ).point, vec( { 0.25, 0.0 } ) );
}

TEST( PositivePartTopK, Examples )
{
    EXPECT_EQ( positive_part_topk( vec( { 0.6, 0.4, 0.3 } ), 2 ).point, vec( { 0.6, 0.4, 0.0 } ) );
    EXPECT_EQ( positive_part_topk( vec( { -1.0, -2.0 } ), 1 ).point, vec( { 0.0, 0.0 } ) );
    EXPECT_EQ( positive_part_topk( vec( { 0.5, 0.5, 0.1 } ), 1 ).point, vec( { 0.5, 0.0, 0.0 } ) );
}

TEST( PositivePartTopK, TieGoesToLowestIndex )
{
    EXPECT_EQ( positive_part_topk( vec( { 0.1, 0.5, 0.5, 0.5 } ), 2 ).point, vec( { 0.0, 0.5, 0.5, 0.0 } ) );
}

TEST( PositivePartTopK, RangeErrors )
{
    EXPECT_THROW( ProxOperator::positive_part_topk( 0 ), ParameterError );
    EXPECT_THROW( positive_part_topk( vec( { 1.0, 2.0 } ), 3 ), ParameterError );
}

////////////////////////////////////////////////////////////////////////
//
// spectral operators
//

TEST( RankProjection, DiagonalCase )
{
    const Matrix  Z   = vec( { 3.0, 2.0, 1.0 } ).asDiagonal();
    const auto    res = rank_projection( Z, 2 );
    const Matrix  want = vec( { 3.0, 2.0, 0.0 } ).asDiagonal();

    EXPECT_LE( ( as_matrix( res.point, 3, 3 ) - want ).norm(), 1e-12 );
    EXPECT_NEAR( res.envelope, 0.5, 1e-12 );
}

TEST( RankProjection, LowRankIsFixed )
{
    CounterRng    g( 21, 0 );
    const Matrix  Z = g.normal_matrix( 6, 2 ) * g.normal_matrix( 2, 5 );

    EXPECT_LE( ( as_matrix( rank_projection( Z, 3 ).point, 6, 5 ) - Z ).norm(), 1e-10 * Z.norm() );
}

TEST( RankProjection, RankOneAgainstJacobiSvd )
{
    CounterRng                g( 22, 0 );
    const Matrix              Z = g.normal_matrix( 4, 4 );
    Eigen::JacobiSVD< Matrix > svd( Z, Eigen::ComputeFullU | Eigen::ComputeFullV );
    const auto                s = svd.singularValues();
    const Matrix              want = s( 0 ) * svd.matrixU().col( 0 ) * svd.matrixV().col( 0 ).transpose();
    const auto                res  = rank_projection( Z, 1 );

    EXPECT_LE( ( as_matrix( res.point, 4, 4 ) - want ).norm(), 1e-10 );
    EXPECT_NEAR( 2.0 * res.envelope, s.tail( 3 ).squaredNorm(), 1e-10 );
}

TEST( RankProjection, ParameterErrors )
{
    EXPECT_THROW( ProxOperator::rank_projection( 3, 4, 0 ), ParameterError );
    EXPECT_THROW( ProxOperator::rank_projection( 3, 4, 4 ), ParameterError );
}

TEST( RankProjection, SpectralInvariance )
{
    CounterRng  g( 23, 0 );

    for ( int t = 0; t < 20; ++t )
    {
        const Matrix  Z  = g.normal_matrix( 5, 5 );
        const Matrix  Q  = random_orthogonal( g, 5 );
        const Matrix  lhs = as_matrix( rank_projection( Q * Z * Q.transpose(), 2 ).point, 5, 5 );
        const Matrix  rhs = Q * as_matrix( rank_projection( Z, 2 ).point, 5, 5 ) * Q.transpose();

        EXPECT_LE( ( lhs - rhs ).norm(), 1e-8 );
    }
}

TEST( PsdRankProjection, DiagonalCases )
{
    const Matrix  Z = vec( { 2.0, 1.0, -1.0 } ).asDiagonal();
    const Matrix  two = vec( { 2.0, 1.0, 0.0 } ).asDiagonal();
    const Matrix  one = vec( { 2.0, 0.0, 0.0 } ).asDiagonal();

    EXPECT_LE( ( as_matrix( psd_rank_projection( Z, 2 ).point, 3, 3 ) - two ).norm(), 1e-12 );
    EXPECT_LE( ( as_matrix( psd_rank_projection( Z, 1 ).point, 3, 3 ) - one ).norm(), 1e-12 );
}

TEST( PsdRankProjection, NegativeDefiniteGoesToZero )
{
    CounterRng    g( 24, 0 );
    const Matrix  B = g.normal_matrix( 4, 4 );
    const Matrix  Z = -( B * B.transpose() + Matrix::Identity( 4, 4 ) );

    for ( Index r = 1; r <= 4; ++r )
        EXPECT_LE( psd_rank_projection( Z, r ).point.norm(), 1e-12 );
}

TEST( EdmConeProjection, TwoByTwoExample )
{
    Matrix  D( 2, 2 );

    D << 0, -1, -1, 0;

    const Matrix  want = Matrix::Constant( 2, 2, -0.5 );

    EXPECT_LE( ( as_matrix( edm_cone_projection( D, 1 ).point, 2, 2 ) - want ).norm(), 1e-12 );
}

TEST( EdmConeProjection, TrueEdmIsFixedAndZeroMapsToZero )
{
    CounterRng    g( 25, 0 );
    const Matrix  P = g.normal_matrix( 6, 3 );
    Matrix        D( 6, 6 );

    for ( Index i = 0; i < 6; ++i )
        for ( Index j = 0; j < 6; ++j )
            D( i, j ) = ( P.row( i ) - P.row( j ) ).squaredNorm();

    EXPECT_LE( ( as_matrix( edm_cone_projection( D, 3 ).point, 6, 6 ) - D ).norm(), 1e-10 * D.norm() );
    EXPECT_LE( edm_cone_projection( Matrix::Zero( 4, 4 ), 2 ).point.norm(), 1e-14 );
}

TEST( EdmConeProjection, OutputSatisfiesTheConeConditions )
{
    CounterRng    g( 26, 0 );
    const Index   n = 7;
    const Matrix  J = Matrix::Identity( n, n ) - Matrix::Constant( n, n, 1.0 / n );

    for ( int t = 0; t < 20; ++t )
    {
        const Matrix  out = as_matrix( edm_cone_projection( random_symmetric( g, n ), 2 ).point, n, n );
        const Matrix  G   = -J * out * J;
        Eigen::SelfAdjointEigenSolver< Matrix >  eig( 0.5 * ( G + G.transpose() ) );
        const auto &  ev  = eig.eigenvalues();

        EXPECT_GE( ev.minCoeff(), -1e-8 );
        EXPECT_LE( ev( n - 3 ), 1e-8 );  // rank <= 2
    }
}

TEST( QuadraticProx, Examples )
{
    const Vector  b = vec( { 1.0, -2.0 } );

    EXPECT_LE( ( quadratic_prox( b, b, 0.7 ).point - b ).norm(), 1e-15 );
    EXPECT_LE( ( quadratic_prox( Vector::Zero( 2 ), vec( { 2.0, 4.0 } ), 1.0 ).point - vec( { 1.0, 2.0 } ) ).norm(), 1e-15 );
    EXPECT_LE( ( quadratic_prox( vec( { 4.0, 0.0 } ), vec( { 0.0, 4.0 } ), 3.0 ).point - vec( { 1.0, 3.0 } ) ).norm(), 1e-15 );
}

////////////////////////////////////////////////////////////////////////
//
// derivative action
//

TEST( ProxJvp, HardThresholdMask )
{
    const auto    op  = ProxOperator::hard_threshold( 0.5 );
    const Vector  at  = vec( { 2.0, 0.3 } );
    const auto    res = op.evaluate( at );

    EXPECT_EQ( prox_jvp( op, at, res, vec( { 1.0, 1.0 } ) ), vec( { 1.0, 0.0 } ) );
}

TEST( ProxJvp, ScadMiddleSlopeMatchesFiniteDifference )
{
    const auto    op  = ProxOperator::scad( 1.0, 3.7, 1.0 );
    const Vector  at  = vec( { 2.0 } );
    const auto    res = op.evaluate( at );
    const double  jvp = prox_jvp( op, at, res, vec( { 1.0 } ) )( 0 );
    const double  fd  = ( op.evaluate( vec( { 2.0 + 1e-6 } ) ).point( 0 ) - op.evaluate( vec( { 2.0 - 1e-6 } ) ).point( 0 ) ) / 2e-6;

    EXPECT_NEAR( jvp, scad_mid_value, 1e-14 );
    EXPECT_NEAR( jvp, fd, 1e-6 );
}

TEST( ProxJvp, FullRankRegionIsIdentity )
{
    const auto    op  = ProxOperator::rank_projection( 3, 3, 3 );
    const Vector  at  = flatten( Matrix( vec( { 3.0, 2.0, 1.0 } ).asDiagonal() ) );
    const auto    res = op.evaluate( at );
    CounterRng    g( 27, 0 );
    const Vector  E   = g.normal_vector( 9 );

    EXPECT_LE( ( prox_jvp( op, at, res, E ) - E ).norm(), 1e-6 * E.norm() );
}

TEST( ProxJvp, SpectralMatchesCentralDifference )
{
    CounterRng    g( 28, 0 );
    const auto    op  = ProxOperator::rank_projection( 5, 5, 2 );
    const Vector  at  = g.normal_vector( 25 );
    const auto    res = op.evaluate( at );
    const Vector  dir = g.normal_vector( 25 );
    const double  h   = 1e-5;
    const Vector  fd  = ( op.evaluate( at + h * dir ).point - op.evaluate( at - h * dir ).point ) / ( 2.0 * h );

    EXPECT_LE( ( prox_jvp( op, at, res, dir ) - fd ).norm(), 1e-5 * ( 1.0 + fd.norm() ) );
}

////////////////////////////////////////////////////////////////////////
//
// properties
//

TEST( ProxProperties, SeparableOperatorsBeatEveryEnumeratedCandidate )
{
    CounterRng  g( 29, 0 );

    for ( int t = 0; t < 200; ++t )
    {
        const Index   n = 1 + Index( g.below( 8 ) );
        const Vector  z = 2.0 * g.normal_vector( n );

        // hard threshold: each entry is 0 or z_i
        {
            const auto  op  = ProxOperator::hard_threshold( 0.05 + g.uniform() );
            const auto  res = op.evaluate( z );

            for ( std::uint64_t mask = 0; mask < ( std::uint64_t( 1 ) << n ); ++mask )
            {
                Vector  c = Vector::Zero( n );

                for ( Index i = 0; i < n; ++i )
                    if ( mask >> i & 1 )
                        c( i ) = z( i );
                EXPECT_LE( op.prox_objective( res.point, z ), op.prox_objective( c, z ) + 1e-10 );
            }
        }
        // top-k: positive part restricted to every support of size <= k
        {
            const Index  k   = 1 + Index( g.below( std::uint64_t( n ) ) );
            const auto   op  = ProxOperator::positive_part_topk( k );
            const auto   res = op.evaluate( z );

            for ( std::uint64_t mask = 0; mask < ( std::uint64_t( 1 ) << n ); ++mask )
            {
                if ( std::popcount( mask ) > k )
                    continue;

                Vector  c = Vector::Zero( n );

                for ( Index i = 0; i < n; ++i )
                    if ( mask >> i & 1 )
                        c( i ) = std::max( z( i ), 0.0 );
                EXPECT_LE( op.prox_objective( res.point, z ), op.prox_objective( c, z ) + 1e-10 );
            }
        }
        // SCAD: per-entry scan over a fine grid
        {
            const double  lambda = 0.1 + g.uniform();
            const auto    op     = ProxOperator::scad( 1.0, 3.7, lambda );
            const auto    res    = op.evaluate( z );

            for ( Index i = 0; i < n; ++i )
            {
                const auto    scalar = ProxOperator::scad( 1.0, 3.7, lambda );
                const Vector  zi     = z.segment( i, 1 );
                const double  got    = scalar.prox_objective( res.point.segment( i, 1 ), zi );

                for ( int s = -4000; s <= 4000; ++s )
                    EXPECT_LE( got, scalar.prox_objective( Vector::Constant( 1, zi( 0 ) + 1e-3 * s ), zi ) + 1e-10 );
            }
        }
    }
}

TEST( ProxProperties, ProjectionsAreIdempotent )
{
    CounterRng  g( 30, 0 );

    for ( int t = 0; t < 100; ++t )
    {
        const std::vector< std::pair< ProxOperator, Vector > >  cases{
            { ProxOperator::nonnegative(), g.normal_vector( 6 ) },
            { ProxOperator::positive_part_topk( 2 ), g.normal_vector( 6 ) },
            { ProxOperator::rank_projection( 4, 5, 2 ), g.normal_vector( 20 ) },
            { ProxOperator::psd_rank_projection( 5, 2 ), flatten( random_symmetric( g, 5 ) ) },
            { ProxOperator::edm_cone_projection( 5, 2 ), flatten( random_symmetric( g, 5 ) ) } };

        for ( const auto & [ op, z ] : cases )
        {
            ASSERT_TRUE( op.is_projection() );

            const Vector  p  = op.evaluate( z ).point;
            const Vector  pp = op.evaluate( p ).point;

            EXPECT_LE( ( pp - p ).norm(), 1e-10 * ( 1.0 + p.norm() ) ) << op.name();
        }
    }
}

TEST( ProxProperties, EnvelopeMatchesRecomputation )
{
    CounterRng  g( 31, 0 );

    for ( int t = 0; t < 50; ++t )
    {
        const std::vector< std::pair< ProxOperator, Vector > >  cases{
            { ProxOperator::scad( 1.0, 3.7, 0.3 ), g.normal_vector( 8 ) },
            { ProxOperator::scad( 1.0, 3.7, 0.1 ).with_lambda( 0.5 ), g.normal_vector( 8 ) },
            { ProxOperator::hard_threshold( 0.2 ), g.normal_vector( 8 ) },
            { ProxOperator::nonnegative(), g.normal_vector( 8 ) },
            { ProxOperator::positive_part_topk( 3 ), g.normal_vector( 8 ) },
            { ProxOperator::rank_projection( 4, 5, 2 ), g.normal_vector( 20 ) },
            { ProxOperator::psd_rank_projection( 5, 2 ), flatten( random_symmetric( g, 5 ) ) },
            { ProxOperator::edm_cone_projection( 5, 2 ), flatten( random_symmetric( g, 5 ) ) },
            { ProxOperator::quadratic( g.normal_vector( 8 ), 0.7 ), g.normal_vector( 8 ) },
            { ProxOperator::product( { ProxOperator::hard_threshold( 1.0 ), ProxOperator::quadratic( g.normal_vector( 3 ), 1.0 ) },
                                     { 5, 3 }, 0.4 ),
              g.normal_vector( 8 ) } };

        for ( const auto & [ op, z ] : cases )
        {
            const auto    res  = op.evaluate( z );
            const double  want = op.prox_objective( res.point, z, 1e-6 );

            EXPECT_LE( std::abs( res.envelope - want ), 1e-10 * ( 1.0 + std::abs( want ) ) ) << op.name();
        }
    }
}

TEST( ProxProperties, ConvexOperatorsAreFirmlyNonexpansive )
{
    CounterRng  g( 32, 0 );

    for ( int t = 0; t < 100; ++t )
        for ( const auto & op : { ProxOperator::quadratic( g.normal_vector( 6 ), 0.1 + 2.0 * g.uniform() ),
                                  ProxOperator::nonnegative() } )
        {
            ASSERT_TRUE( op.is_convex() );

            const Vector  a  = g.normal_vector( 6 );
            const Vector  b  = g.normal_vector( 6 );
            const Vector  dp = op.evaluate( a ).point - op.evaluate( b ).point;

            EXPECT_LE( dp.squaredNorm(), dp.dot( a - b ) + 1e-12 );
        }
}

TEST( ProxProperties, ProductActsBlockwise )
{
    CounterRng    g( 33, 0 );
    const Vector  b  = g.normal_vector( 3 );
    const auto    op = ProxOperator::product( { ProxOperator::hard_threshold( 1.0 ), ProxOperator::quadratic( b, 1.0 ) },
                                              { 4, 3 }, 0.3 );
    const Vector  z  = g.normal_vector( 7 );
    const auto    res = op.evaluate( z );

    EXPECT_EQ( res.point.head( 4 ), hard_threshold( z.head( 4 ), 0.3 ).point );
    EXPECT_LE( ( res.point.tail( 3 ) - quadratic_prox( z.tail( 3 ), b, 0.3 ).point ).norm(), 1e-15 );
}
