#pragma once
//
// Dual problem of the affine-constrained proximal problem
//
//     min_x  lambda f(x) + 1/2 ||x - z||^2   s.t.  A x = b
//
// with dual objective (to be minimised)
//
//     Phi_z(y) = 1/2 ||v||^2 - E_{lambda f}(v) - <b, y> - 1/2 ||z||^2,   v = z + A^* y,
//
// gradient A Prox_{lambda f}(v) - b, primal recovery x = Prox_{lambda f}(v),
// and the residuals / duality-gap certificate used to accept a solution.
//

#include "linmap.hpp"
#include "prox.hpp"

#include <cmath>
#include <optional>
#include <utility>

namespace proxdual {

struct Residuals
{
    double                  feas = 0.0;
    std::optional< double > obj;
    std::optional< double > sol;
};

struct DualEvaluation
{
    double      value = 0.0;
    Vector      gradient;
    Vector      v;
    ProxResult  prox;
};

struct FdCheckResult
{
    double max_error    = 0.0;
    bool   inconclusive = false;
};

class DualProblem
{
public:
    DualProblem ( ProxOperator prox, LinearMap map, Vector b, Vector z )
        : _prox( std::move( prox ) )
        , _map( std::move( map ) )
        , _b( std::move( b ) )
        , _z( std::move( z ) )
    {
        require_size( _b.size(), _map.output_dim(), "DualProblem: b" );
        require_size( _z.size(), _map.input_size(), "DualProblem: z" );

        const auto [ lo, hi ] = _map.gram_extreme_eigs();

        if ( !( lo > 1e-10 * hi ) )
            throw ParameterError( "DualProblem: constraint map is not surjective (A A^* is singular)" );

        _Az_minus_b = _map.apply( _z ) - _b;
    }

    const ProxOperator & prox () const { return _prox; }
    const LinearMap &    map () const { return _map; }
    const Vector &       b () const { return _b; }
    const Vector &       z () const { return _z; }
    double               lambda () const { return _prox.lambda(); }
    Index                dual_dim () const { return _map.output_dim(); }
    Index                primal_dim () const { return _map.input_size(); }

    Vector v_of ( const Vector & y ) const { return _z + _map.adjoint( y ); }

    //
    // value and gradient from a single prox evaluation; the value uses
    // 1/2||v||^2 - 1/2||z||^2 = <A z, y> + 1/2 ||A^* y||^2 to avoid cancellation
    //
    DualEvaluation
    evaluate ( const Vector & y ) const
    {
        require_size( y.size(), dual_dim(), "DualProblem::evaluate" );

        DualEvaluation  ev;
        const Vector    Aty = _map.adjoint( y );

        ev.v        = _z + Aty;
        ev.prox     = _prox.evaluate( ev.v );
        ev.value    = _Az_minus_b.dot( y ) + 0.5 * Aty.squaredNorm() - ev.prox.envelope;
        ev.gradient = _map.apply( ev.prox.point ) - _b;

        return ev;
    }

    double value ( const Vector & y ) const { return evaluate( y ).value; }

    // objective lambda f(x) + 1/2 ||x - z||^2 (+inf outside dom f)
    double primal_objective ( const Vector & x ) const { return _prox.prox_objective( x, _z ); }

    double
    feasibility ( const Vector & x ) const
    {
        return ( _map.apply( x ) - _b ).norm() / ( 1.0 + _b.norm() );
    }

    Residuals
    residuals ( const Vector & x, const std::optional< Vector > & xref = std::nullopt ) const
    {
        require_size( x.size(), primal_dim(), "residuals" );

        Residuals  r;

        r.feas = feasibility( x );
        if ( xref )
        {
            require_size( xref->size(), primal_dim(), "residuals: reference" );

            const double  f    = primal_objective( x );
            const double  fref = primal_objective( *xref );

            r.obj = std::abs( f - fref ) / ( 1.0 + std::abs( fref ) );
            r.sol = ( x - *xref ).norm() / ( 1.0 + xref->norm() );
        }

        return r;
    }

    //
    // |f_{lambda,z}(x) + Phi_z(y)| / (1 + |f_{lambda,z}(x)|)
    //
    double
    duality_gap ( const Vector & x, const Vector & y ) const
    {
        const double  f = primal_objective( x );

        if ( !std::isfinite( f ) )
            throw DomainError( "duality_gap_certificate: x is outside dom f" );

        return std::abs( f + value( y ) ) / ( 1.0 + std::abs( f ) );
    }

    //
    // max_i |central difference - analytic gradient| / (1 + |analytic|);
    // inconclusive when the prox changes branch inside the stencil
    //
    FdCheckResult
    fd_gradient_check ( const Vector & y, double h ) const
    {
        const auto     base = evaluate( y );
        FdCheckResult  out;
        Vector         e = Vector::Zero( dual_dim() );

        for ( Index i = 0; i < dual_dim(); ++i )
        {
            e( i ) = h;

            const auto  plus  = evaluate( y + e );
            const auto  minus = evaluate( y - e );

            e( i ) = 0.0;

            if ( branch_changed( base, plus, h, i ) || branch_changed( base, minus, h, i ) )
                out.inconclusive = true;

            const double  fd = ( plus.value - minus.value ) / ( 2.0 * h );
            const double  g  = base.gradient( i );

            out.max_error = std::max( out.max_error, std::abs( fd - g ) / ( 1.0 + std::abs( g ) ) );
        }

        return out;
    }

private:
    bool
    branch_changed ( const DualEvaluation & base, const DualEvaluation & probe, double h, Index coord ) const
    {
        if ( base.prox.branch != probe.prox.branch )
            return true;

        if ( const auto * s = std::get_if< SpectralDeriv >( &base.prox.deriv ) )
        {
            // eigen/singular values move by at most ||h A^* e_i||
            Vector  e = Vector::Zero( dual_dim() );

            e( coord ) = h;

            return s->margin <= 2.0 * _map.adjoint( e ).norm();
        }

        return false;
    }

    ProxOperator  _prox;
    LinearMap     _map;
    Vector        _b;
    Vector        _z;
    Vector        _Az_minus_b;
};

////////////////////////////////////////////////////////////////////////
//
// free-function entry points
//

inline double
dual_value ( const DualProblem & p, const Vector & y )
{
    return p.value( y );
}

// (A x - b, x) with x = Prox_{lambda f}(z + A^* y)
inline std::pair< Vector, Vector >
dual_gradient ( const DualProblem & p, const Vector & y )
{
    auto  ev = p.evaluate( y );

    return { std::move( ev.gradient ), std::move( ev.prox.point ) };
}

inline Vector
recover_primal ( const DualProblem & p, const Vector & y )
{
    require_size( y.size(), p.dual_dim(), "recover_primal" );

    return p.prox().evaluate( p.v_of( y ) ).point;
}

inline Residuals
residuals ( const DualProblem & p, const Vector & x, const std::optional< Vector > & xref = std::nullopt )
{
    return p.residuals( x, xref );
}

inline double
duality_gap_certificate ( const DualProblem & p, const Vector & x, const Vector & y )
{
    return p.duality_gap( x, y );
}

inline FdCheckResult
fd_gradient_check ( const DualProblem & p, const Vector & y, double h )
{
    return p.fd_gradient_check( y, h );
}

}// namespace proxdual
