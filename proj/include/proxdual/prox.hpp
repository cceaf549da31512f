#pragma once
//
// Catalog of proximal operators Prox_{lambda f} and set projections, each
// returning the prox point, the Moreau envelope value
//
//     E_{lambda f}(t) = lambda f(p) + 1/2 ||p - t||^2 ,   p = Prox_{lambda f}(t),
//
// and a generalised-derivative payload used by Newton-type dual solvers.
//
// Set-valued proxes are resolved to a single deterministic branch:
//   - hard thresholding maps |t_i| = tau to 0,
//   - top-k ties keep the lowest index,
//   - rank projections keep the first r columns of the factorisation.
//

#include "core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

namespace proxdual {

struct DiagonalDeriv
{
    Vector slope;
};

// spectral data of the last evaluation; `margin` is the spectral distance to
// the nearest point where the projection stops being smooth
struct SpectralDeriv
{
    Matrix left;
    Vector values;
    Matrix right;
    double margin = std::numeric_limits< double >::infinity();
};

using Derivative = std::variant< std::monostate, DiagonalDeriv, SpectralDeriv >;

struct ProxResult
{
    Vector              point;
    double              envelope = 0.0;
    Derivative          deriv;
    // active piece of the piecewise description (per entry for separable
    // operators, kept-count for spectral ones)
    std::vector< int >  branch;
};

class ProxOperator
{
public:
    // MCP-shaped SCAD variant whose exact prox is the three-branch firm
    // thresholding rule; the penalty curvature is fixed to a * ref_lambda
    struct Scad
    {
        double mu;
        double a;
        double ref_lambda;
        // scales the middle-branch slope; anything but 1 breaks the prox
        // (used to check that the gradient oracle catches a wrong slope)
        double slope_scale = 1.0;
    };
    struct HardThreshold
    {
    };
    struct Nonnegative
    {
    };
    struct PositivePartTopK
    {
        Index k;
    };
    struct RankProjection
    {
        Index rows;
        Index cols;
        Index r;
    };
    struct PsdRankProjection
    {
        Index n;
        Index r;
    };
    struct EdmConeProjection
    {
        Index n;
        Index r;
    };
    // f(x) = 1/2 ||x - b||^2
    struct QuadraticShift
    {
        Vector b;
    };
    // f(x_1, x_2, ...) = f_1(x_1) + f_2(x_2) + ... on consecutive blocks
    struct Product
    {
        std::vector< ProxOperator > parts;
        std::vector< Index >        sizes;
    };

    using Kind = std::variant< Scad, HardThreshold, Nonnegative, PositivePartTopK, RankProjection,
                               PsdRankProjection, EdmConeProjection, QuadraticShift, Product >;

    static ProxOperator
    scad ( double mu, double a, double lambda, double slope_scale = 1.0 )
    {
        if ( !( a > 2.0 ) || !( mu > 0.0 ) )
            throw ParameterError( "scad: requires a > 2 and mu > 0" );

        return ProxOperator( Scad{ mu, a, check_lambda( lambda ), slope_scale }, lambda );
    }

    static ProxOperator hard_threshold ( double lambda ) { return ProxOperator( HardThreshold{}, check_lambda( lambda ) ); }
    static ProxOperator nonnegative () { return ProxOperator( Nonnegative{}, 1.0 ); }

    static ProxOperator
    positive_part_topk ( Index k )
    {
        if ( k < 1 )
            throw ParameterError( "positive_part_topk: k must be >= 1" );

        return ProxOperator( PositivePartTopK{ k }, 1.0 );
    }

    static ProxOperator
    rank_projection ( Index rows, Index cols, Index r )
    {
        if ( r < 1 || r > std::min( rows, cols ) )
            throw ParameterError( "rank_projection: need 1 <= r <= min(rows, cols)" );

        return ProxOperator( RankProjection{ rows, cols, r }, 1.0 );
    }

    static ProxOperator
    psd_rank_projection ( Index n, Index r )
    {
        if ( r < 1 || r > n )
            throw ParameterError( "psd_rank_projection: need 1 <= r <= n" );

        return ProxOperator( PsdRankProjection{ n, r }, 1.0 );
    }

    static ProxOperator
    edm_cone_projection ( Index n, Index r )
    {
        if ( r < 1 || r > n )
            throw ParameterError( "edm_cone_projection: need 1 <= r <= n" );

        return ProxOperator( EdmConeProjection{ n, r }, 1.0 );
    }

    static ProxOperator quadratic ( Vector b, double lambda ) { return ProxOperator( QuadraticShift{ std::move( b ) }, check_lambda( lambda ) ); }

    // block-separable sum; every part is re-parameterised to the common lambda
    static ProxOperator
    product ( std::vector< ProxOperator > parts, std::vector< Index > sizes, double lambda )
    {
        if ( parts.empty() || parts.size() != sizes.size() )
            throw ParameterError( "product: need one size per part" );

        for ( auto & op : parts )
            op = op.with_lambda( lambda );

        return ProxOperator( Product{ std::move( parts ), std::move( sizes ) }, check_lambda( lambda ) );
    }

    const Kind & kind () const { return _kind; }
    double       lambda () const { return _lambda; }

    bool
    is_projection () const
    {
        if ( const auto * p = std::get_if< Product >( &_kind ) )
            return std::all_of( p->parts.begin(), p->parts.end(), [] ( const auto & op ) { return op.is_projection(); } );

        return !std::holds_alternative< Scad >( _kind ) && !std::holds_alternative< HardThreshold >( _kind ) &&
               !std::holds_alternative< QuadraticShift >( _kind );
    }

    bool
    is_convex () const
    {
        if ( const auto * p = std::get_if< Product >( &_kind ) )
            return std::all_of( p->parts.begin(), p->parts.end(), [] ( const auto & op ) { return op.is_convex(); } );

        return std::holds_alternative< Nonnegative >( _kind ) || std::holds_alternative< QuadraticShift >( _kind );
    }

    // the same f with a different prox parameter
    ProxOperator
    with_lambda ( double lambda ) const
    {
        ProxOperator  op = *this;

        op._lambda = check_lambda( lambda );
        if ( auto * p = std::get_if< Product >( &op._kind ) )
            for ( auto & part : p->parts )
                part = part.with_lambda( lambda );

        return op;
    }

    std::string
    name () const
    {
        constexpr const char *  names[] = { "scad", "hard-threshold", "nonnegative", "topk",
                                            "rank", "psd-rank", "edm", "quadratic", "product" };

        return names[ _kind.index() ];
    }

    ProxResult
    evaluate ( const Vector & t ) const
    {
        return std::visit( [&] ( const auto & k ) { return eval( k, t ); }, _kind );
    }

    //
    // f(x), +inf outside dom f; set membership for indicators is tested with
    // relative tolerance `tol`
    //
    double
    penalty ( const Vector & x, double tol = 1e-8 ) const
    {
        return std::visit( [&] ( const auto & k ) { return value( k, x, tol ); }, _kind );
    }

    bool in_domain ( const Vector & x, double tol = 1e-8 ) const { return std::isfinite( penalty( x, tol ) ); }

    // lambda f(x) + 1/2 ||x - center||^2
    double
    prox_objective ( const Vector & x, const Vector & center, double tol = 1e-8 ) const
    {
        const double  f = penalty( x, tol );

        if ( !std::isfinite( f ) )
            return f;

        return _lambda * f + 0.5 * ( x - center ).squaredNorm();
    }

private:
    ProxOperator ( Kind kind, double lambda )
        : _kind( std::move( kind ) )
        , _lambda( lambda )
    {}

    static double
    check_lambda ( double lambda )
    {
        if ( !( lambda > 0.0 ) || !std::isfinite( lambda ) )
            throw ParameterError( "prox parameter lambda must be positive" );

        return lambda;
    }

    static constexpr double inf = std::numeric_limits< double >::infinity();

    ////////////////////////////////////////////////////////////////////
    //
    // separable operators
    //

    ProxResult
    eval ( const Scad & s, const Vector & t ) const
    {
        const Index   n     = t.size();
        const double  gamma = s.a * s.ref_lambda;
        ProxResult    res;
        Vector        slope( n );

        res.point.resize( n );
        res.branch.resize( n );

        if ( _lambda < gamma )
        {
            const double  lo = s.mu * _lambda;
            const double  hi = s.mu * gamma;
            const double  mid_slope = s.slope_scale / ( 1.0 - _lambda / gamma );

            for ( Index i = 0; i < n; ++i )
            {
                const double  ti = t( i );
                const double  ai = std::abs( ti );

                if ( ai <= lo )
                {
                    res.point( i ) = 0.0;
                    slope( i )     = 0.0;
                    res.branch[ i ] = 0;
                }
                else if ( ai <= hi )
                {
                    res.point( i ) = std::copysign( ai - lo, ti ) * mid_slope;
                    slope( i )     = mid_slope;
                    res.branch[ i ] = ti > 0 ? 1 : -1;
                }
                else
                {
                    res.point( i ) = ti;
                    slope( i )     = 1.0;
                    res.branch[ i ] = ti > 0 ? 2 : -2;
                }
            }
        }
        else
        {
            // penalty curvature dominates: the prox degenerates to a jump
            const double  thr = s.mu * std::sqrt( _lambda * gamma );

            for ( Index i = 0; i < n; ++i )
            {
                const bool  keep = std::abs( t( i ) ) > thr;

                res.point( i )  = keep ? t( i ) : 0.0;
                slope( i )      = keep ? 1.0 : 0.0;
                res.branch[ i ] = keep ? 2 : 0;
            }
        }

        res.envelope = _lambda * value( s, res.point, 0.0 ) + 0.5 * ( res.point - t ).squaredNorm();
        res.deriv    = DiagonalDeriv{ std::move( slope ) };

        return res;
    }

    ProxResult
    eval ( const HardThreshold &, const Vector & t ) const
    {
        const double  tau = std::sqrt( 2.0 * _lambda );
        const Index   n   = t.size();
        ProxResult    res;
        Vector        slope( n );

        res.point.resize( n );
        res.branch.resize( n );

        for ( Index i = 0; i < n; ++i )
        {
            const bool  keep = std::abs( t( i ) ) > tau;

            res.point( i )  = keep ? t( i ) : 0.0;
            slope( i )      = keep ? 1.0 : 0.0;
            res.branch[ i ] = keep ? 1 : 0;
        }

        res.envelope = _lambda * value( HardThreshold{}, res.point, 0.0 ) + 0.5 * ( res.point - t ).squaredNorm();
        res.deriv    = DiagonalDeriv{ std::move( slope ) };

        return res;
    }

    ProxResult
    eval ( const Nonnegative &, const Vector & t ) const
    {
        ProxResult  res;

        res.point = t.cwiseMax( 0.0 );
        res.branch.resize( t.size() );
        for ( Index i = 0; i < t.size(); ++i )
            res.branch[ i ] = t( i ) > 0.0 ? 1 : 0;
        res.envelope = 0.5 * ( res.point - t ).squaredNorm();
        res.deriv    = DiagonalDeriv{ ( t.array() > 0.0 ).cast< double >().matrix() };

        return res;
    }

    ProxResult
    eval ( const PositivePartTopK & p, const Vector & t ) const
    {
        const Index  n = t.size();

        if ( p.k > n )
            throw ParameterError( "positive_part_topk: k exceeds dimension" );

        std::vector< Index >  order( n );

        std::iota( order.begin(), order.end(), Index( 0 ) );
        std::stable_sort( order.begin(), order.end(), [&] ( Index i, Index j ) { return t( i ) > t( j ); } );

        ProxResult  res;
        Vector      slope = Vector::Zero( n );

        res.point = Vector::Zero( n );
        res.branch.assign( n, 0 );

        for ( Index q = 0; q < p.k; ++q )
        {
            const auto  i = order[ q ];

            if ( t( i ) > 0.0 )
            {
                res.point( i )  = t( i );
                slope( i )      = 1.0;
                res.branch[ i ] = 1;
            }
        }

        res.envelope = 0.5 * ( res.point - t ).squaredNorm();
        res.deriv    = DiagonalDeriv{ std::move( slope ) };

        return res;
    }

    ProxResult
    eval ( const QuadraticShift & q, const Vector & t ) const
    {
        require_size( t.size(), q.b.size(), "quadratic_prox" );

        ProxResult  res;

        res.point    = ( t + _lambda * q.b ) / ( 1.0 + _lambda );
        res.envelope = _lambda * 0.5 * ( res.point - q.b ).squaredNorm() + 0.5 * ( res.point - t ).squaredNorm();
        res.deriv    = DiagonalDeriv{ Vector::Constant( t.size(), 1.0 / ( 1.0 + _lambda ) ) };
        res.branch.assign( t.size(), 0 );

        return res;
    }

    ////////////////////////////////////////////////////////////////////
    //
    // spectral operators
    //

    ProxResult
    eval ( const RankProjection & p, const Vector & t ) const
    {
        require_size( t.size(), p.rows * p.cols, "rank_projection" );

        Eigen::BDCSVD< Matrix >  svd( as_matrix( t, p.rows, p.cols ), Eigen::ComputeThinU | Eigen::ComputeThinV );

        if ( svd.info() != Eigen::Success )
            throw NumericalError( "rank_projection: SVD failed" );

        const auto &  sv = svd.singularValues();
        const Index   q  = sv.size();
        ProxResult    res;
        Matrix        X = svd.matrixU().leftCols( p.r ) * sv.head( p.r ).asDiagonal() *
                          svd.matrixV().leftCols( p.r ).transpose();

        res.point    = flatten( X );
        res.envelope = 0.5 * sv.tail( q - p.r ).squaredNorm();
        res.branch   = { int( p.r ) };

        SpectralDeriv  d{ svd.matrixU(), sv, svd.matrixV() };

        if ( p.r < q )
            d.margin = sv( p.r - 1 ) - sv( p.r );
        res.deriv = std::move( d );

        return res;
    }

    struct PsdPart
    {
        Matrix         X;
        SpectralDeriv  deriv;
        int            kept;
    };

    // sum over the r largest eigenvalues, clipped at zero, of lambda_i u_i u_i^T
    static PsdPart
    psd_rank_part ( const Matrix & S, Index r )
    {
        const Index                              n = S.rows();
        Eigen::SelfAdjointEigenSolver< Matrix >  eig( S );

        if ( eig.info() != Eigen::Success )
            throw NumericalError( "psd_rank_projection: eigensolver failed" );

        // descending order
        const Vector  ev = eig.eigenvalues().reverse();
        const Matrix  U  = eig.eigenvectors().rowwise().reverse();
        Matrix        X  = Matrix::Zero( n, n );
        int           kept = 0;
        double        margin = std::numeric_limits< double >::infinity();

        for ( Index i = 0; i < r; ++i )
        {
            margin = std::min( margin, std::abs( ev( i ) ) );
            if ( ev( i ) > 0.0 )
            {
                X.noalias() += ev( i ) * U.col( i ) * U.col( i ).transpose();
                ++kept;
            }
        }

        if ( r < n && ev( r - 1 ) > 0.0 && ev( r ) > 0.0 )
            margin = std::min( margin, ev( r - 1 ) - ev( r ) );

        return { std::move( X ), SpectralDeriv{ U, ev, U, margin }, kept };
    }

    ProxResult
    eval ( const PsdRankProjection & p, const Vector & t ) const
    {
        require_size( t.size(), p.n * p.n, "psd_rank_projection" );

        const auto    T = as_matrix( t, p.n, p.n );
        const Matrix  S = 0.5 * ( T + T.transpose() );
        auto          part = psd_rank_part( S, p.r );
        ProxResult    res;

        res.point    = flatten( part.X );
        res.envelope = 0.5 * ( res.point - t ).squaredNorm();
        res.branch   = { part.kept };
        res.deriv    = std::move( part.deriv );

        return res;
    }

    // J D J with J = I - e e^T / n
    static Matrix
    double_center ( const Matrix & D )
    {
        const Vector  col_mean = D.colwise().mean().transpose();
        const Vector  row_mean = D.rowwise().mean();
        const double  mean     = D.mean();
        Matrix        C        = D;

        C.colwise() -= row_mean;
        C.rowwise() -= col_mean.transpose();
        C.array() += mean;

        return C;
    }

    //
    // Pi_K(D) = -Pi_{S_+(r)}(-J D J) + (D - J D J)
    //
    ProxResult
    eval ( const EdmConeProjection & p, const Vector & t ) const
    {
        require_size( t.size(), p.n * p.n, "edm_cone_projection" );

        const auto    T = as_matrix( t, p.n, p.n );
        const Matrix  D = 0.5 * ( T + T.transpose() );
        Matrix        C = double_center( D );

        C = 0.5 * ( C + C.transpose() );

        auto          part = psd_rank_part( -C, p.r );
        const Matrix  X    = -part.X + ( D - C );
        ProxResult    res;

        res.point    = flatten( X );
        res.envelope = 0.5 * ( res.point - t ).squaredNorm();
        res.branch   = { part.kept };
        res.deriv    = std::move( part.deriv );

        return res;
    }

    ////////////////////////////////////////////////////////////////////
    //
    // block-separable sums
    //

    void
    check_blocks ( const Product & p, Index n ) const
    {
        Index  total = 0;

        for ( auto len : p.sizes )
            total += len;
        require_size( n, total, "product prox" );
    }

    ProxResult
    eval ( const Product & p, const Vector & t ) const
    {
        check_blocks( p, t.size() );

        ProxResult  res;
        Vector      slope( t.size() );
        bool        diagonal = true;
        double      margin   = std::numeric_limits< double >::infinity();
        Index       ofs      = 0;

        res.point.resize( t.size() );

        for ( std::size_t q = 0; q < p.parts.size(); ++q )
        {
            const auto  len  = p.sizes[ q ];
            auto        part = p.parts[ q ].evaluate( t.segment( ofs, len ) );

            res.point.segment( ofs, len ) = part.point;
            res.envelope += part.envelope;
            res.branch.insert( res.branch.end(), part.branch.begin(), part.branch.end() );

            if ( const auto * d = std::get_if< DiagonalDeriv >( &part.deriv ) )
                slope.segment( ofs, len ) = d->slope;
            else
            {
                diagonal = false;
                if ( const auto * sd = std::get_if< SpectralDeriv >( &part.deriv ) )
                    margin = std::min( margin, sd->margin );
            }

            ofs += len;
        }

        if ( diagonal )
            res.deriv = DiagonalDeriv{ std::move( slope ) };
        else
        {
            // mixed blocks: directional derivatives by finite differences
            SpectralDeriv  d;

            d.margin  = margin;
            res.deriv = std::move( d );
        }

        return res;
    }

    double
    value ( const Product & p, const Vector & x, double tol ) const
    {
        check_blocks( p, x.size() );

        double  sum = 0.0;
        Index   ofs = 0;

        for ( std::size_t q = 0; q < p.parts.size(); ++q )
        {
            sum += p.parts[ q ].penalty( x.segment( ofs, p.sizes[ q ] ), tol );
            ofs += p.sizes[ q ];
        }

        return sum;
    }

    ////////////////////////////////////////////////////////////////////
    //
    // function values
    //

    double
    value ( const Scad & s, const Vector & x, double ) const
    {
        const double  gamma = s.a * s.ref_lambda;
        const double  knee  = s.mu * gamma;
        double        sum   = 0.0;

        for ( Index i = 0; i < x.size(); ++i )
        {
            const double  ax = std::abs( x( i ) );

            sum += ax <= knee ? s.mu * ax - ax * ax / ( 2.0 * gamma ) : 0.5 * s.mu * s.mu * gamma;
        }

        return sum;
    }

    double value ( const HardThreshold &, const Vector & x, double ) const { return double( ( x.array() != 0.0 ).count() ); }

    static double
    scale_of ( const Vector & x )
    {
        return std::max( 1.0, x.lpNorm< Eigen::Infinity >() );
    }

    double
    value ( const Nonnegative &, const Vector & x, double tol ) const
    {
        return x.size() == 0 || x.minCoeff() >= -tol * scale_of( x ) ? 0.0 : inf;
    }

    double
    value ( const PositivePartTopK & p, const Vector & x, double tol ) const
    {
        const double  thr = tol * scale_of( x );

        if ( x.size() && x.minCoeff() < -thr )
            return inf;

        return ( x.array() > thr ).count() <= p.k ? 0.0 : inf;
    }

    double
    value ( const RankProjection & p, const Vector & x, double tol ) const
    {
        require_size( x.size(), p.rows * p.cols, "rank_projection" );

        Eigen::BDCSVD< Matrix >  svd( as_matrix( x, p.rows, p.cols ) );
        const auto &             sv = svd.singularValues();

        if ( p.r >= sv.size() )
            return 0.0;

        return sv( p.r ) <= tol * std::max( 1.0, sv( 0 ) ) ? 0.0 : inf;
    }

    static bool
    psd_rank_member ( const Matrix & S, Index r, double tol )
    {
        Eigen::SelfAdjointEigenSolver< Matrix >  eig( S, Eigen::EigenvaluesOnly );
        const Vector &                           ev  = eig.eigenvalues();
        const double                             thr = tol * std::max( 1.0, ev.cwiseAbs().maxCoeff() );

        return ev.minCoeff() >= -thr && ( ev.array() > thr ).count() <= r;
    }

    static bool
    symmetric ( const Matrix & X, double tol )
    {
        return ( X - X.transpose() ).lpNorm< Eigen::Infinity >() <= tol * std::max( 1.0, X.lpNorm< Eigen::Infinity >() );
    }

    double
    value ( const PsdRankProjection & p, const Vector & x, double tol ) const
    {
        require_size( x.size(), p.n * p.n, "psd_rank_projection" );

        const auto  X = as_matrix( x, p.n, p.n );

        if ( !symmetric( X, tol ) )
            return inf;

        return psd_rank_member( 0.5 * ( X + X.transpose() ), p.r, tol ) ? 0.0 : inf;
    }

    double
    value ( const EdmConeProjection & p, const Vector & x, double tol ) const
    {
        require_size( x.size(), p.n * p.n, "edm_cone_projection" );

        const auto  X = as_matrix( x, p.n, p.n );

        if ( !symmetric( X, tol ) )
            return inf;

        const Matrix  C = double_center( 0.5 * ( X + X.transpose() ) );

        return psd_rank_member( -0.5 * ( C + C.transpose() ), p.r, tol ) ? 0.0 : inf;
    }

    double
    value ( const QuadraticShift & q, const Vector & x, double ) const
    {
        require_size( x.size(), q.b.size(), "quadratic" );

        return 0.5 * ( x - q.b ).squaredNorm();
    }

    Kind    _kind;
    double  _lambda;
};

////////////////////////////////////////////////////////////////////////
//
// free-function entry points
//

inline ProxResult
scad_prox ( const Vector & z, double mu, double a, double lambda )
{
    return ProxOperator::scad( mu, a, lambda ).evaluate( z );
}

inline ProxResult
hard_threshold ( const Vector & z, double lambda )
{
    return ProxOperator::hard_threshold( lambda ).evaluate( z );
}

inline ProxResult
positive_part_topk ( const Vector & z, Index k )
{
    if ( k > z.size() )
        throw ParameterError( "positive_part_topk: k exceeds dimension" );

    return ProxOperator::positive_part_topk( k ).evaluate( z );
}

inline ProxResult
rank_projection ( const Matrix & Z, Index r )
{
    return ProxOperator::rank_projection( Z.rows(), Z.cols(), r ).evaluate( flatten( Z ) );
}

inline ProxResult
psd_rank_projection ( const Matrix & Z, Index r )
{
    if ( Z.rows() != Z.cols() )
        throw DimensionError( "psd_rank_projection: matrix must be square" );

    return ProxOperator::psd_rank_projection( Z.rows(), r ).evaluate( flatten( Z ) );
}

inline ProxResult
edm_cone_projection ( const Matrix & D, Index r )
{
    if ( D.rows() != D.cols() )
        throw DimensionError( "edm_cone_projection: matrix must be square" );

    return ProxOperator::edm_cone_projection( D.rows(), r ).evaluate( flatten( D ) );
}

inline ProxResult
quadratic_prox ( const Vector & w, const Vector & b, double lambda )
{
    return ProxOperator::quadratic( b, lambda ).evaluate( w );
}

//
// generalised Jacobian of the prox at `at` applied to `direction`; `res` must
// be the evaluation of `op` at `at`
//
inline Vector
prox_jvp ( const ProxOperator & op, const Vector & at, const ProxResult & res, const Vector & direction )
{
    require_size( direction.size(), at.size(), "prox_jvp" );

    if ( const auto * d = std::get_if< DiagonalDeriv >( &res.deriv ) )
        return d->slope.cwiseProduct( direction );

    if ( std::holds_alternative< SpectralDeriv >( res.deriv ) )
    {
        const double  len = direction.norm();

        if ( len == 0.0 )
            return Vector::Zero( at.size() );

        // forward difference along the unit direction
        const double  h    = 1e-8 * ( 1.0 + at.norm() );
        const Vector  step = at + ( h / len ) * direction;

        return ( op.evaluate( step ).point - res.point ) * ( len / h );
    }

    throw UnsupportedError( "prox_jvp: no derivative information for " + op.name() );
}

}// namespace proxdual
