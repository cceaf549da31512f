#pragma once
//
// Solvers for the affine-constrained prox problem.
//
// Dual (on Phi_z, started at y = 0):
//   - gradient descent with BB1 steps and a nonmonotone Armijo rule,
//   - limited-memory BFGS with Armijo backtracking,
//   - semismooth Newton with eps-regularised matrix-free CG.
// Primal:
//   - two-block ADMM on x = w with the affine set handled in the w-block,
//   - alternating projection between the affine set and K.
//
// All solvers stop once the primal point x lies in dom f and
// ||A x - b|| / (1 + ||b||) < tol, or on the iteration / time limits.
//

#include "dual.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <string>
#include <vector>

namespace proxdual {

struct SolveOptions
{
    double         tol                = 1e-6;
    double         time_limit_secs    = 600.0;
    int            iter_limit         = 1000;
    double         armijo_gamma       = 1e-4;
    double         backtrack_sigma    = 0.5;
    int            max_backtracks     = 50;
    int            nonmonotone_memory = 10;
    int            lbfgs_memory       = 10;
    double         bb_min_step        = 1e-10;
    double         bb_max_step        = 1e10;
    // CG stops once ||residual|| <= ssn_cg_rel_tol * ||F(y)||
    double         ssn_cg_rel_tol     = 1e-2;
    int            ssn_cg_max_iter    = 200;
    double         ssn_reg_cap        = 0.1;
    double         admm_rho0          = 1.0;
    double         admm_mu            = 10.0;
    double         admm_tau           = 2.0;
    std::uint64_t  seed               = 0;

    void
    validate () const
    {
        if ( !( tol > 0.0 ) || !( time_limit_secs > 0.0 ) || iter_limit < 0 )
            throw ParameterError( "SolveOptions: tol and limits must be positive" );
        if ( !( armijo_gamma > 0.0 && armijo_gamma < 1.0 ) || !( backtrack_sigma > 0.0 && backtrack_sigma < 1.0 ) )
            throw ParameterError( "SolveOptions: armijo_gamma and backtrack_sigma must lie in (0,1)" );
        if ( nonmonotone_memory < 1 || lbfgs_memory < 1 )
            throw ParameterError( "SolveOptions: memories must be >= 1" );
        if ( !( admm_rho0 > 0.0 ) || !( admm_mu > 1.0 ) || !( admm_tau > 1.0 ) )
            throw ParameterError( "SolveOptions: ADMM parameters out of range" );
    }
};

enum class Termination
{
    Converged,
    IterLimit,
    TimeLimit,
    LineSearchFail,
    Error
};

inline const char *
to_string ( Termination t )
{
    switch ( t )
    {
        case Termination::Converged:      return "Converged";
        case Termination::IterLimit:      return "IterLimit";
        case Termination::TimeLimit:      return "TimeLimit";
        case Termination::LineSearchFail: return "LineSearchFail";
        case Termination::Error:          return "Error";
    }

    return "?";
}

// one row per iterate; primal solvers store the primal objective in `phi`
// and ||x - w|| in `grad_norm`
struct TraceRecord
{
    int    iter      = 0;
    double phi       = 0.0;
    double grad_norm = 0.0;
    double r_feas    = 0.0;
    double elapsed_s = 0.0;
};

struct SolveReport
{
    std::string                 solver;
    Vector                      y;
    Vector                      x;
    Residuals                   residuals;
    int                         iterations     = 0;
    double                      wall_time_secs = 0.0;
    Termination                 termination    = Termination::IterLimit;
    std::vector< TraceRecord >  trace;
    // SSN: number of steps that fell back to -F(y)
    int                         gradient_fallbacks = 0;

    bool converged () const { return termination == Termination::Converged; }
};

namespace detail {

class Stopwatch
{
public:
    double
    elapsed () const
    {
        return std::chrono::duration< double >( std::chrono::steady_clock::now() - _start ).count();
    }

private:
    std::chrono::steady_clock::time_point  _start = std::chrono::steady_clock::now();
};

// allowance for round-off in Phi when comparing values in a line search
inline double
roundoff_slack ( double ref )
{
    return 16.0 * std::numeric_limits< double >::epsilon() * ( 1.0 + std::abs( ref ) );
}

inline bool
accept_point ( const DualProblem & p, const Vector & x, double tol )
{
    return p.feasibility( x ) < tol && p.prox().in_domain( x );
}

//
// shared loop bookkeeping for the three dual solvers
//
class DualRun
{
public:
    DualRun ( const DualProblem & p, const SolveOptions & opts, std::string name, const Vector & y0 )
        : _p( p )
        , _opts( opts )
    {
        opts.validate();
        require_size( y0.size(), p.dual_dim(), name.c_str() );

        report.solver = std::move( name );
        y             = y0;
        ev            = p.evaluate( y );
        record();
    }

    // true if the run must stop before taking another step
    bool
    stop ()
    {
        if ( accept_point( _p, ev.prox.point, _opts.tol ) )
            return finish( Termination::Converged );
        if ( report.iterations >= _opts.iter_limit )
            return finish( Termination::IterLimit );
        if ( _clock.elapsed() >= _opts.time_limit_secs )
            return finish( Termination::TimeLimit );

        return false;
    }

    void
    step_to ( Vector y_new, DualEvaluation ev_new )
    {
        y  = std::move( y_new );
        ev = std::move( ev_new );
        ++report.iterations;
        record();
    }

    bool finish ( Termination t )
    {
        report.termination    = t;
        report.y              = y;
        report.x              = ev.prox.point;
        report.residuals      = _p.residuals( report.x );
        report.wall_time_secs = _clock.elapsed();

        return true;
    }

    //
    // backtracking from `alpha` along `dir` until
    //     Phi(y + alpha dir) <= ref + gamma alpha <g, dir>
    //
    bool
    backtrack ( const Vector & dir, double alpha, double ref, double slope, Vector & y_new, DualEvaluation & ev_new,
                double * accepted = nullptr ) const
    {
        for ( int t = 0; t <= _opts.max_backtracks; ++t )
        {
            y_new  = y + alpha * dir;
            ev_new = _p.evaluate( y_new );

            if ( ev_new.value <= ref + _opts.armijo_gamma * alpha * slope + roundoff_slack( ref ) )
            {
                if ( accepted )
                    *accepted = alpha;
                return true;
            }

            alpha *= _opts.backtrack_sigma;
        }

        return false;
    }

    SolveReport     report;
    Vector          y;
    DualEvaluation  ev;

private:
    void
    record ()
    {
        report.trace.push_back(
            { report.iterations, ev.value, ev.gradient.norm(), _p.feasibility( ev.prox.point ), _clock.elapsed() } );
    }

    const DualProblem &   _p;
    const SolveOptions &  _opts;
    Stopwatch             _clock;
};

}// namespace detail

////////////////////////////////////////////////////////////////////////
//
// gradient descent, BB1 stepsize, nonmonotone Armijo
//
inline SolveReport
solve_gd_bb ( const DualProblem & p, const SolveOptions & opts, const Vector & y0 )
{
    detail::DualRun        run( p, opts, "D-GD", y0 );
    std::deque< double >   history{ run.ev.value };
    Vector                 s, u;

    while ( !run.stop() )
    {
        const Vector &  g = run.ev.gradient;
        double          alpha;

        if ( run.report.iterations == 0 )
            alpha = 1.0 / ( 1.0 + g.norm() );
        else
        {
            const double  su = s.dot( u );

            alpha = su > 0.0 ? s.squaredNorm() / su : opts.bb_max_step;
            alpha = std::clamp( alpha, opts.bb_min_step, opts.bb_max_step );
        }

        const double    ref = *std::max_element( history.begin(), history.end() );
        Vector          y_new;
        DualEvaluation  ev_new;

        if ( !run.backtrack( -g, alpha, ref, -g.squaredNorm(), y_new, ev_new ) )
        {
            run.finish( Termination::LineSearchFail );
            break;
        }

        s = y_new - run.y;
        u = ev_new.gradient - g;

        history.push_back( ev_new.value );
        if ( int( history.size() ) > opts.nonmonotone_memory )
            history.pop_front();

        run.step_to( std::move( y_new ), std::move( ev_new ) );
    }

    return std::move( run.report );
}

inline SolveReport
solve_gd_bb ( const DualProblem & p, const SolveOptions & opts = {} )
{
    return solve_gd_bb( p, opts, Vector::Zero( p.dual_dim() ) );
}

////////////////////////////////////////////////////////////////////////
//
// limited-memory BFGS, two-loop recursion
//
inline SolveReport
solve_lbfgs ( const DualProblem & p, const SolveOptions & opts, const Vector & y0 )
{
    struct Pair
    {
        Vector s, u;
        double rho;
    };

    detail::DualRun     run( p, opts, "D-LBFGS", y0 );
    std::deque< Pair >  pairs;

    while ( !run.stop() )
    {
        const Vector &  g = run.ev.gradient;
        Vector          d = -g;

        if ( pairs.empty() )
            d /= ( 1.0 + g.norm() );
        else
        {
            std::vector< double >  a( pairs.size() );

            for ( Index i = Index( pairs.size() ) - 1; i >= 0; --i )
            {
                a[ i ] = pairs[ i ].rho * pairs[ i ].s.dot( d );
                d -= a[ i ] * pairs[ i ].u;
            }

            d *= pairs.back().s.dot( pairs.back().u ) / pairs.back().u.squaredNorm();

            for ( std::size_t i = 0; i < pairs.size(); ++i )
            {
                const double  b = pairs[ i ].rho * pairs[ i ].u.dot( d );

                d += ( a[ i ] - b ) * pairs[ i ].s;
            }
        }

        double  slope = g.dot( d );

        if ( !( slope < 0.0 ) )
        {
            d     = -g / ( 1.0 + g.norm() );
            slope = g.dot( d );
        }

        Vector          y_new;
        DualEvaluation  ev_new;

        if ( !run.backtrack( d, 1.0, run.ev.value, slope, y_new, ev_new ) )
        {
            run.finish( Termination::LineSearchFail );
            break;
        }

        Vector        s  = y_new - run.y;
        Vector        u  = ev_new.gradient - g;
        const double  su = s.dot( u );

        if ( su > 1e-12 * s.norm() * u.norm() )
        {
            pairs.push_back( { std::move( s ), std::move( u ), 1.0 / su } );
            if ( int( pairs.size() ) > opts.lbfgs_memory )
                pairs.pop_front();
        }

        run.step_to( std::move( y_new ), std::move( ev_new ) );
    }

    return std::move( run.report );
}

inline SolveReport
solve_lbfgs ( const DualProblem & p, const SolveOptions & opts = {} )
{
    return solve_lbfgs( p, opts, Vector::Zero( p.dual_dim() ) );
}

////////////////////////////////////////////////////////////////////////
//
// semismooth Newton: (J + eps I) d = -F(y), J d = A Prox'(v) A^* d,
// eps = min(cap, |F|) times the Rayleigh quotient of J along F
//
inline SolveReport
solve_ssn ( const DualProblem & p, const SolveOptions & opts, const Vector & y0 )
{
    detail::DualRun  run( p, opts, "D-SSN", y0 );
    const Index      m = p.dual_dim();

    while ( !run.stop() )
    {
        const Vector &  F     = run.ev.gradient;
        const double    Fnorm = F.norm();

        auto  jvp = [&] ( const Vector & d ) -> Vector {
            return p.map().apply( prox_jvp( p.prox(), run.ev.v, run.ev.prox, p.map().adjoint( d ) ) );
        };

        // regulariser relative to the curvature seen along F
        const double  scale = Fnorm > 0.0 ? std::max( F.dot( jvp( F ) ) / ( Fnorm * Fnorm ), 0.0 ) : 0.0;
        const double  eps   = std::min( opts.ssn_reg_cap, Fnorm ) * ( scale > 0.0 ? scale : 1.0 );

        auto  jac = [&] ( const Vector & d ) -> Vector { return jvp( d ) + eps * d; };

        // conjugate gradients from d = 0
        Vector  d = Vector::Zero( m );
        Vector  r = -F;
        Vector  q = r;
        double  rr        = r.squaredNorm();
        bool    breakdown = false;

        for ( int it = 0; it < std::min< int >( opts.ssn_cg_max_iter, int( 2 * m ) ); ++it )
        {
            if ( std::sqrt( rr ) <= opts.ssn_cg_rel_tol * Fnorm )
                break;

            const Vector  Jq  = jac( q );
            const double  qJq = q.dot( Jq );

            if ( !( qJq > 0.0 ) )
            {
                breakdown = true;
                break;
            }

            const double  a = rr / qJq;

            d += a * q;
            r -= a * Jq;

            const double  rr_new = r.squaredNorm();

            q  = r + ( rr_new / rr ) * q;
            rr = rr_new;
        }

        double  slope = F.dot( d );

        if ( breakdown || !( slope < 0.0 ) || !d.allFinite() )
        {
            d     = -F;
            slope = -Fnorm * Fnorm;
            ++run.report.gradient_fallbacks;
        }

        Vector          y_new;
        DualEvaluation  ev_new;

        if ( !run.backtrack( d, 1.0, run.ev.value, slope, y_new, ev_new ) )
        {
            run.finish( Termination::LineSearchFail );
            break;
        }

        run.step_to( std::move( y_new ), std::move( ev_new ) );
    }

    return std::move( run.report );
}

inline SolveReport
solve_ssn ( const DualProblem & p, const SolveOptions & opts = {} )
{
    return solve_ssn( p, opts, Vector::Zero( p.dual_dim() ) );
}

////////////////////////////////////////////////////////////////////////
//
// ADMM on  min lambda f(x) + 1/2||w - z||^2  s.t.  A w = b, x = w
// (scaled dual u, adaptive penalty rho)
//
inline SolveReport
solve_admm ( const DualProblem & p, const SolveOptions & opts = {} )
{
    opts.validate();

    detail::Stopwatch      clock;
    const AffineProjector  affine( p.map(), p.b() );
    SolveReport            rep;
    double                 rho = opts.admm_rho0;
    Vector                 w   = affine.project( p.z() );
    Vector                 u   = Vector::Zero( w.size() );
    Vector                 x   = p.prox().with_lambda( p.lambda() / rho ).evaluate( w - u ).point;

    rep.solver = "P-ADMM";

    auto  record = [&] ( double gap ) {
        rep.trace.push_back( { rep.iterations, p.primal_objective( x ), gap, p.feasibility( x ), clock.elapsed() } );
    };

    record( ( x - w ).norm() );

    while ( true )
    {
        if ( detail::accept_point( p, x, opts.tol ) )
        {
            rep.termination = Termination::Converged;
            break;
        }
        if ( rep.iterations >= opts.iter_limit )
        {
            rep.termination = Termination::IterLimit;
            break;
        }
        if ( clock.elapsed() >= opts.time_limit_secs )
        {
            rep.termination = Termination::TimeLimit;
            break;
        }

        x = p.prox().with_lambda( p.lambda() / rho ).evaluate( w - u ).point;

        const Vector  w_prev = w;

        w = affine.project( ( p.z() + rho * ( x + u ) ) / ( 1.0 + rho ) );
        u += x - w;

        const double  r_primal = ( x - w ).norm();
        const double  r_dual   = rho * ( w - w_prev ).norm();

        if ( r_primal > opts.admm_mu * r_dual )
        {
            rho *= opts.admm_tau;
            u /= opts.admm_tau;
        }
        else if ( r_dual > opts.admm_mu * r_primal )
        {
            rho /= opts.admm_tau;
            u *= opts.admm_tau;
        }

        ++rep.iterations;
        record( r_primal );
    }

    rep.x              = x;
    rep.residuals      = p.residuals( x );
    rep.wall_time_secs = clock.elapsed();

    return rep;
}

////////////////////////////////////////////////////////////////////////
//
// alternating projection x <- Pi_K(Pi_E(x)), x_0 = z; reports the K-iterate
//
inline SolveReport
solve_altproj ( const DualProblem & p, const SolveOptions & opts = {} )
{
    opts.validate();

    if ( !p.prox().is_projection() )
        throw UnsupportedError( "solve_altproj: requires a set projection, got " + p.prox().name() );

    detail::Stopwatch      clock;
    const AffineProjector  affine( p.map(), p.b() );
    SolveReport            rep;
    Vector                 x = p.z();

    rep.solver = "P-AltProj";

    auto  record = [&] ( double gap ) {
        rep.trace.push_back( { rep.iterations, p.primal_objective( x ), gap, p.feasibility( x ), clock.elapsed() } );
    };

    record( 0.0 );

    while ( true )
    {
        if ( detail::accept_point( p, x, opts.tol ) )
        {
            rep.termination = Termination::Converged;
            break;
        }
        if ( rep.iterations >= opts.iter_limit )
        {
            rep.termination = Termination::IterLimit;
            break;
        }
        if ( clock.elapsed() >= opts.time_limit_secs )
        {
            rep.termination = Termination::TimeLimit;
            break;
        }

        const Vector  w = affine.project( x );

        x = p.prox().evaluate( w ).point;
        ++rep.iterations;
        record( ( x - w ).norm() );
    }

    rep.x              = x;
    rep.residuals      = p.residuals( x );
    rep.wall_time_secs = clock.elapsed();

    return rep;
}

}// namespace proxdual
