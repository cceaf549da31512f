#pragma once
//
// Acceptance suite. Each criterion runs in isolation: an exception inside
// one is reported as Error and the rest still run.
//

#include "bench.hpp"

#include <Eigen/Eigenvalues>

#include <bit>
#include <functional>
#include <limits>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace proxdual {

enum class CriterionStatus
{
    Pass,
    Fail,
    Error
};

inline const char *
to_string ( CriterionStatus s )
{
    switch ( s )
    {
        case CriterionStatus::Pass:  return "PASS";
        case CriterionStatus::Fail:  return "FAIL";
        case CriterionStatus::Error: return "ERROR";
    }

    return "?";
}

struct CriterionResult
{
    int                         id = 0;
    std::string                 title;
    CriterionStatus             status = CriterionStatus::Pass;
    std::vector< std::string >  lines;     // measured vs required
    std::vector< std::string >  failed;    // names of violated checks
    double                      seconds = 0.0;
};

struct AcceptanceOptions
{
    std::set< int >  only;                     // empty: all criteria
    std::uint64_t    seed = 0;
    // mutation hooks
    double           scad_slope_scale = 1.0;   // applied to the SCAD kind in the gradient oracle
    std::set< int >  inject_error;             // these criteria throw right after starting
};

namespace acceptance {

// collects measured-vs-required lines for one criterion
class Checker
{
public:
    explicit Checker ( CriterionResult & out )
        : _out( out )
    {}

    bool
    at_most ( const std::string & what, double measured, double bound )
    {
        return record( what, measured <= bound, fmt( measured ) + " <= " + fmt( bound ) );
    }

    bool
    at_least ( const std::string & what, double measured, double bound )
    {
        return record( what, measured >= bound, fmt( measured ) + " >= " + fmt( bound ) );
    }

    bool
    greater ( const std::string & what, double measured, double bound )
    {
        return record( what, measured > bound, fmt( measured ) + " > " + fmt( bound ) );
    }

    bool
    holds ( const std::string & what, bool ok, const std::string & detail )
    {
        return record( what, ok, detail );
    }

    void note ( const std::string & s ) { _out.lines.push_back( "       " + s ); }

    static std::string
    fmt ( double v )
    {
        char  buf[ 32 ];

        std::snprintf( buf, sizeof buf, "%.3g", v );

        return buf;
    }

private:
    bool
    record ( const std::string & what, bool ok, const std::string & detail )
    {
        _out.lines.push_back( std::string( ok ? "  ok   " : "  FAIL " ) + what + ": " + detail );
        if ( !ok )
        {
            _out.failed.push_back( what );
            _out.status = CriterionStatus::Fail;
        }

        return ok;
    }

    CriterionResult & _out;
};

////////////////////////////////////////////////////////////////////////

inline void
lowrank_table ( Checker & c, const AcceptanceOptions & ao )
{
    detail::Stopwatch  clock;
    auto               inst = gen_lowrank_diag( 50, 5, ao.seed );

    attach_ssn_reference( inst, 1e-14 );

    SolveOptions  opts;

    opts.tol = 1e-14;

    const std::map< std::string, int >  iter_cap{ { "ssn", 60 }, { "gd", 150 }, { "lbfgs", 180 } };

    for ( const std::string key : { "gd", "lbfgs", "ssn", "admm", "altproj" } )
    {
        const auto  rep = run_solver( key, inst.problem, opts );
        const auto  r   = inst.problem.residuals( rep.x, inst.reference );
        const auto  lab = method_label( key );

        c.at_most( lab + " R_feas", r.feas, 1e-12 );
        if ( key == "altproj" )
            c.at_least( lab + " R_obj", *r.obj, 1e-6 );
        else
        {
            c.at_most( lab + " R_obj", *r.obj, 1e-12 );
            c.at_most( lab + " R_sol", *r.sol, 1e-10 );
        }
        if ( iter_cap.count( key ) )
            c.at_most( lab + " iterations", rep.iterations, iter_cap.at( key ) );
        c.note( lab + " " + to_string( rep.termination ) + " iter=" + std::to_string( rep.iterations ) );
    }

    c.at_most( "total seconds", clock.elapsed(), 10.0 );
}

inline void
lowrank_scaling ( Checker & c, const AcceptanceOptions & ao )
{
    const auto    inst = gen_lowrank_diag( 300, 5, ao.seed );
    SolveOptions  opts;

    opts.tol = 1e-6;

    double  slowest = 0.0;

    for ( const std::string key : { "gd", "lbfgs", "ssn" } )
    {
        const auto  rep = run_solver( key, inst.problem, opts );
        const auto  lab = method_label( key );

        c.holds( lab + " converged", rep.converged(), to_string( rep.termination ) );
        c.at_most( lab + " iterations", rep.iterations, 100 );
        c.at_most( lab + " seconds", rep.wall_time_secs, 30.0 );
        slowest = std::max( slowest, rep.wall_time_secs );
    }

    // past 5x the slowest dual time ADMM has already lost; cap its budget there
    auto  admm_opts = opts;

    admm_opts.iter_limit      = 1000;
    admm_opts.time_limit_secs = 5.0 * slowest * 1.02 + 0.05;

    const auto    admm     = solve_admm( inst.problem, admm_opts );
    const bool    no_tol   = admm.termination == Termination::IterLimit && admm.iterations >= 1000;
    const double  ratio    = admm.wall_time_secs / std::max( slowest, 1e-12 );

    c.note( "P-ADMM " + std::string( to_string( admm.termination ) ) + " iter=" + std::to_string( admm.iterations ) +
            " seconds=" + Checker::fmt( admm.wall_time_secs ) + " slowest dual=" + Checker::fmt( slowest ) );
    c.holds( "P-ADMM misses tol within 1000 iterations or takes >= 5x the slowest dual solver",
             no_tol || ratio >= 5.0,
             ( no_tol ? std::string( "1000 iterations without reaching tol, " ) : std::string() ) + "time ratio " +
                 Checker::fmt( ratio ) + ( admm.converged() ? " (converged)" : " (not converged)" ) );
}

// largest of the last three ratios ||F_{k+1}|| / ||F_k|| along a trace
inline double
final_decay_ratio ( const std::vector< TraceRecord > & trace )
{
    double  worst = 0.0;
    int     count = 0;

    for ( std::size_t i = trace.size(); i-- > 1 && count < 3; ++count )
        worst = std::max( worst, trace[ i ].grad_norm / trace[ i - 1 ].grad_norm );

    return worst;
}

inline void
edm_helix ( Checker & c, const AcceptanceOptions & ao )
{
    detail::Stopwatch  clock;
    const auto         inst = gen_edm_helix( 200, 3, 1e-2, ao.seed );
    SolveOptions       opts;

    opts.tol = 1e-6;
    c.note( "m=" + std::to_string( inst.meta.m ) + " |Omega|=" + std::to_string( inst.meta.omega_size ) );

    for ( const std::string key : { "gd", "lbfgs", "ssn" } )
    {
        const auto  rep = run_solver( key, inst.problem, opts );
        const auto  lab = method_label( key );

        c.holds( lab + " converged", rep.converged(),
                 std::string( to_string( rep.termination ) ) + " iter=" + std::to_string( rep.iterations ) );

        if ( key == "ssn" )
        {
            c.at_most( lab + " iterations", rep.iterations, 15 );
            c.at_most( lab + " decay ratio over last 3 steps", final_decay_ratio( rep.trace ), 0.5 );
        }
    }

    c.at_most( "total seconds", clock.elapsed(), 60.0 );
}

inline void
scad_table ( Checker & c, const AcceptanceOptions & ao )
{
    SolveOptions  opts;

    opts.tol = 1e-6;

    {
        const auto  inst = gen_scad( 2000, 0.05, 0.01, 0.01, ao.seed );

        for ( const std::string key : { "gd", "lbfgs", "ssn" } )
        {
            const auto  rep = run_solver( key, inst.problem, opts );
            const auto  lab = "lambda=0.01 " + method_label( key );

            c.holds( lab + " converged", rep.converged(), to_string( rep.termination ) );
            c.at_most( lab + " iterations", rep.iterations, 50 );
        }
    }
    {
        const auto  inst = gen_scad( 2000, 0.05, 0.01, 1.0, ao.seed );

        for ( const std::string key : { "gd", "lbfgs", "ssn" } )
        {
            const auto  rep = run_solver( key, inst.problem, opts );
            const auto  lab = "lambda=1 " + method_label( key );

            if ( key == "gd" )
            {
                c.holds( lab + " converged", rep.converged(), to_string( rep.termination ) );
                c.at_most( lab + " iterations", rep.iterations, 600 );
            }
            else
                c.note( lab + " " + to_string( rep.termination ) + " iter=" + std::to_string( rep.iterations ) );

            if ( rep.converged() )
                c.at_most( lab + " duality gap", inst.problem.duality_gap( rep.x, rep.y ), 1e-4 );
        }
    }
}

////////////////////////////////////////////////////////////////////////
//
// small random problems, one generator per prox kind
//

struct KindSample
{
    DualProblem  problem;
    Vector       y;
};

inline Vector
scaled_normal ( CounterRng & rng, Index n, double scale )
{
    return scale * rng.normal_vector( n );
}

inline Matrix
gaussian_rows ( CounterRng & rng, Index m, Index n )
{
    Matrix  a( m, n );

    for ( Index i = 0; i < m; ++i )
        for ( Index j = 0; j < n; ++j )
            a( i, j ) = rng.normal();

    return a / std::sqrt( double( n ) );
}

using KindFactory = std::function< KindSample ( CounterRng & ) >;

inline std::vector< std::pair< std::string, KindFactory > >
kind_catalog ( double scad_slope_scale )
{
    std::vector< std::pair< std::string, KindFactory > >  cat;

    cat.emplace_back( "scad", [=] ( CounterRng & g ) {
        const double  lambda = 0.05 + 0.45 * g.uniform();
        const auto    inst   = gen_scad( 40, 0.1, 0.2, lambda, g.next_u64() );
        DualProblem   p( ProxOperator::scad( 1.0, 3.7, lambda, scad_slope_scale ), inst.problem.map(),
                         inst.problem.b(), inst.problem.z() );

        return KindSample{ std::move( p ), scaled_normal( g, inst.problem.dual_dim(), 0.5 ) };
    } );
    cat.emplace_back( "hard-threshold", [] ( CounterRng & g ) {
        const double  lambda = 0.05 + 0.5 * g.uniform();
        DualProblem   p( ProxOperator::hard_threshold( lambda ), LinearMap::dense_rows( gaussian_rows( g, 5, 20 ) ),
                         g.normal_vector( 5 ), g.normal_vector( 20 ) );

        return KindSample{ std::move( p ), scaled_normal( g, 5, 1.0 ) };
    } );
    cat.emplace_back( "nonnegative", [] ( CounterRng & g ) {
        DualProblem  p( ProxOperator::nonnegative(), LinearMap::dense_rows( gaussian_rows( g, 5, 20 ) ),
                        g.normal_vector( 5 ), g.normal_vector( 20 ) );

        return KindSample{ std::move( p ), scaled_normal( g, 5, 1.0 ) };
    } );
    cat.emplace_back( "topk", [] ( CounterRng & g ) {
        const auto  inst = gen_sparse_simplex( 12, 3, 0.2, g.next_u64() );

        return KindSample{ inst.problem, scaled_normal( g, 1, 0.5 ) };
    } );
    cat.emplace_back( "rank", [] ( CounterRng & g ) {
        const auto  inst = gen_lowrank_diag( 8, 2, g.next_u64() );

        return KindSample{ inst.problem, scaled_normal( g, inst.problem.dual_dim(), 1.0 ) };
    } );
    cat.emplace_back( "psd-rank", [] ( CounterRng & g ) {
        const Index  n = 7;
        Matrix       Z = g.normal_matrix( n, n );

        Z = 0.5 * ( Z + Z.transpose() ).eval();
        DualProblem  p( ProxOperator::psd_rank_projection( n, 2 ), LinearMap::diagonal( Shape::sym_matrix( n ) ),
                        g.normal_vector( n ).cwiseAbs(), flatten( Z ) );

        return KindSample{ std::move( p ), scaled_normal( g, n, 1.0 ) };
    } );
    cat.emplace_back( "edm", [] ( CounterRng & g ) {
        const auto  inst = gen_edm_helix( 12, 3, 1e-2, g.next_u64() );

        return KindSample{ inst.problem, scaled_normal( g, inst.problem.dual_dim(), 1.0 ) };
    } );
    cat.emplace_back( "quadratic", [] ( CounterRng & g ) {
        DualProblem  p( ProxOperator::quadratic( g.normal_vector( 20 ), 0.1 + g.uniform() ),
                        LinearMap::dense_rows( gaussian_rows( g, 5, 20 ) ), g.normal_vector( 5 ), g.normal_vector( 20 ) );

        return KindSample{ std::move( p ), scaled_normal( g, 5, 1.0 ) };
    } );
    cat.emplace_back( "product", [] ( CounterRng & g ) {
        const auto  inst = gen_l0_regression( 8, 4, 0.05 + 0.5 * g.uniform(), 0.3, g.next_u64() );

        return KindSample{ inst.problem, scaled_normal( g, inst.problem.dual_dim(), 1.0 ) };
    } );

    return cat;
}

inline void
gradient_oracle ( Checker & c, const AcceptanceOptions & ao )
{
    detail::Stopwatch  clock;
    std::uint64_t      stream = 500;

    for ( const auto & [ name, factory ] : kind_catalog( ao.scad_slope_scale ) )
    {
        CounterRng  g( ao.seed, stream++ );
        double      worst    = 0.0;
        int         accepted = 0, rejected = 0;

        while ( accepted < 50 && rejected < 2000 )
        {
            const auto    s   = factory( g );
            const double  h   = 1e-6 * ( 1.0 + s.y.norm() );
            const auto    res = s.problem.fd_gradient_check( s.y, h );

            if ( res.inconclusive )
            {
                ++rejected;
                continue;
            }

            worst = std::max( worst, res.max_error );
            ++accepted;
        }

        c.holds( name + " pairs away from kinks", accepted == 50,
                 std::to_string( accepted ) + " of 50 (" + std::to_string( rejected ) + " rejected)" );
        c.at_most( name + " max fd error", worst, 1e-5 );
    }

    c.at_most( "total seconds", clock.elapsed(), 30.0 );
}

////////////////////////////////////////////////////////////////////////
//
// exhaustive oracles
//

// min ||x - z|| over the k-sparse unit simplex by enumerating positive supports
inline double
simplex_distance_brute_force ( const Vector & z, Index k )
{
    const Index  n    = z.size();
    double       best = std::numeric_limits< double >::infinity();

    for ( std::uint64_t mask = 1; mask < ( std::uint64_t( 1 ) << n ); ++mask )
    {
        const Index  sz = Index( std::popcount( mask ) );

        if ( sz > k )
            continue;

        double  sum = 0.0;

        for ( Index i = 0; i < n; ++i )
            if ( mask >> i & 1 )
                sum += z( i );

        const double  shift = ( 1.0 - sum ) / double( sz );
        Vector        x     = Vector::Zero( n );
        bool          ok    = true;

        for ( Index i = 0; i < n; ++i )
            if ( mask >> i & 1 )
            {
                x( i ) = z( i ) + shift;
                ok     = ok && x( i ) >= 0.0;
            }

        if ( ok )
            best = std::min( best, ( x - z ).norm() );
    }

    return best;
}

// min over supports S of the composite l0 objective with x supported on S
inline double
l0_brute_force ( const L0Data & d, double lambda )
{
    const Index  n    = d.A.cols();
    double       best = std::numeric_limits< double >::infinity();

    for ( std::uint64_t mask = 0; mask < ( std::uint64_t( 1 ) << n ); ++mask )
    {
        std::vector< Index >  s;

        for ( Index i = 0; i < n; ++i )
            if ( mask >> i & 1 )
                s.push_back( i );

        Vector  x = Vector::Zero( n );

        if ( !s.empty() )
        {
            const Index  q = Index( s.size() );
            Matrix       As( d.A.rows(), q );
            Vector       x0s( q );

            for ( Index j = 0; j < q; ++j )
            {
                As.col( j ) = d.A.col( s[ j ] );
                x0s( j )    = d.x0( s[ j ] );
            }

            const Matrix  H   = Matrix::Identity( q, q ) + ( 1.0 + lambda ) * As.transpose() * As;
            const Vector  rhs = x0s + As.transpose() * ( d.y0 + lambda * d.b );
            const Vector  xs  = H.ldlt().solve( rhs );

            for ( Index j = 0; j < q; ++j )
                x( s[ j ] ) = xs( j );
        }

        best = std::min( best, l0_composite_objective( d.A, d.b, d.x0, d.y0, lambda, x ) );
    }

    return best;
}

inline std::vector< std::pair< std::string, Instance > >
catalog_instances ( std::uint64_t seed )
{
    std::vector< std::pair< std::string, Instance > >  cat;

    cat.emplace_back( "lowrank", gen_lowrank_diag( 30, 3, seed ) );
    cat.emplace_back( "edm", gen_edm_helix( 40, 3, 1e-2, seed ) );
    cat.emplace_back( "scad", gen_scad( 200, 0.05, 0.01, 0.1, seed ) );
    cat.emplace_back( "sparse-simplex", gen_sparse_simplex( 20, 3, 0.1, seed ) );
    cat.emplace_back( "l0-regression", gen_l0_regression( 10, 5, 0.1, 0.1, seed ) );

    return cat;
}

inline void
global_optimality ( Checker & c, const AcceptanceOptions & ao )
{
    detail::Stopwatch  clock;

    {
        CounterRng  g( ao.seed, 600 );
        double      worst = 0.0;

        for ( int t = 0; t < 500; ++t )
        {
            const Index   k   = 1 + Index( g.below( 3 ) );
            const Index   n   = k + 1 + Index( g.below( std::uint64_t( 8 - k ) ) );
            const Vector  z   = 0.6 * g.normal_vector( n );
            const auto    res = sparse_simplex_project( z, k );

            worst = std::max( worst, std::abs( ( res.x - z ).norm() - simplex_distance_brute_force( z, k ) ) );
        }

        c.at_most( "sparse simplex vs brute force, 500 draws, max distance gap", worst, 1e-10 );
    }
    {
        CounterRng  g( ao.seed, 601 );
        double      worst = 0.0;
        int         certified = 0;

        for ( int t = 0; t < 200; ++t )
        {
            const Index   n      = 2 + Index( g.below( 9 ) );
            const Index   m      = 1 + Index( g.below( std::uint64_t( n ) ) );
            const double  lambda = 0.02 + 0.6 * g.uniform();
            const auto    d      = gen_l0_data( n, m, 0.5, g.next_u64() );
            const auto    sol    = l0_regression_dual_solve( LinearMap::dense_rows( d.A ), d.b, d.x0, d.y0, lambda );
            const double  fa     = l0_composite_objective( d.A, d.b, d.x0, d.y0, lambda, sol.x );
            const double  fb     = l0_brute_force( d, lambda );

            worst = std::max( worst, std::abs( fa - fb ) / ( 1.0 + std::abs( fb ) ) );
            certified += sol.dual_certified() ? 1 : 0;
        }

        c.at_most( "l0 support iteration vs exhaustive supports, 200 draws, max relative objective gap", worst, 1e-10 );
        c.note( std::to_string( certified ) + " of 200 l0 solutions carry a dual root" );
    }
    {
        SolveOptions  opts;

        opts.tol = 1e-8;

        for ( const auto & [ name, inst ] : catalog_instances( ao.seed ) )
            for ( const std::string key : { "gd", "lbfgs", "ssn" } )
            {
                const auto  rep = run_solver( key, inst.problem, opts );
                const auto  lab = name + " " + method_label( key );

                if ( rep.converged() )
                    c.at_most( lab + " duality gap", inst.problem.duality_gap( rep.x, rep.y ), 100.0 * opts.tol );
                else
                    c.note( lab + " " + to_string( rep.termination ) + " (no certificate required)" );
            }
    }

    c.at_most( "total seconds", clock.elapsed(), 120.0 );
}

inline void
dual_convexity ( Checker & c, const AcceptanceOptions & ao )
{
    std::uint64_t  stream = 700;

    for ( const auto & [ name, inst ] : catalog_instances( ao.seed ) )
    {
        CounterRng     g( ao.seed, stream++ );
        const auto &   p     = inst.problem;
        const Index    m     = p.dual_dim();
        double         sub   = 0.0, mono = 0.0;

        for ( int t = 0; t < 200; ++t )
        {
            const double  scale = std::pow( 10.0, -2.0 + 3.0 * g.uniform() );
            const Vector  y1    = scale * g.normal_vector( m );
            const Vector  y2    = scale * g.normal_vector( m );
            const auto    e1    = p.evaluate( y1 );
            const auto    e2    = p.evaluate( y2 );
            const Vector  dy    = y2 - y1;

            // Phi(y2) >= Phi(y1) + <g1, y2 - y1>
            const double  gap = e1.value + e1.gradient.dot( dy ) - e2.value;

            sub = std::max( sub, gap / ( 1.0 + std::abs( e1.value ) + std::abs( e2.value ) ) );

            // <g2 - g1, y2 - y1> >= 0
            const Vector  dg  = e2.gradient - e1.gradient;
            const double  neg = -dg.dot( dy );

            mono = std::max( mono, neg / ( 1.0 + dg.norm() * dy.norm() ) );
        }

        c.at_most( name + " subgradient inequality violation", sub, 1e-8 );
        c.at_most( name + " monotonicity violation", mono, 1e-8 );
    }
}

inline void
strong_convexity ( Checker & c, const AcceptanceOptions & ao )
{
    const auto    inst = gen_lowrank_diag( 40, 3, ao.seed );
    SolveOptions  opts;

    opts.tol = 1e-12;

    const auto   rep = solve_ssn( inst.problem, opts );
    const auto & p   = inst.problem;
    const Index  m   = p.dual_dim();

    c.holds( "D-SSN converged", rep.converged(), to_string( rep.termination ) );

    const double  h = 1e-6 * ( 1.0 + rep.y.norm() );
    Matrix        H( m, m );
    Vector        e = Vector::Zero( m );

    for ( Index j = 0; j < m; ++j )
    {
        e( j ) = h;
        H.col( j ) = ( p.evaluate( rep.y + e ).gradient - p.evaluate( rep.y - e ).gradient ) / ( 2.0 * h );
        e( j ) = 0.0;
    }

    const Matrix                                 Hs = 0.5 * ( H + H.transpose() );
    Eigen::SelfAdjointEigenSolver< Matrix >      eig( Hs, Eigen::EigenvaluesOnly );
    const double                                 lo = eig.eigenvalues().minCoeff();
    const double                                 hi = eig.eigenvalues().maxCoeff();

    c.note( "m=" + std::to_string( m ) + " eigenvalues in [" + Checker::fmt( lo ) + ", " + Checker::fmt( hi ) + "]" );
    c.greater( "min eigenvalue of fd Hessian", lo, 1e-8 * hi );
}

}// namespace acceptance

struct CriterionSpec
{
    int                                                                id;
    std::string                                                        title;
    std::function< void ( acceptance::Checker &, const AcceptanceOptions & ) > run;
};

inline std::vector< CriterionSpec >
acceptance_criteria ()
{
    return { { 1, "lowrank n=50 table", acceptance::lowrank_table },
             { 2, "lowrank n=300 scaling", acceptance::lowrank_scaling },
             { 3, "EDM helix n=200", acceptance::edm_helix },
             { 4, "SCAD n=2000 table", acceptance::scad_table },
             { 5, "gradient oracle", acceptance::gradient_oracle },
             { 6, "global optimality oracles", acceptance::global_optimality },
             { 7, "dual convexity", acceptance::dual_convexity },
             { 8, "strong convexity probe", acceptance::strong_convexity } };
}

inline std::vector< CriterionResult >
run_acceptance ( const AcceptanceOptions & ao = {}, std::ostream * log = nullptr )
{
    std::vector< CriterionResult >  results;

    for ( const auto & spec : acceptance_criteria() )
    {
        if ( !ao.only.empty() && !ao.only.count( spec.id ) )
            continue;

        CriterionResult      res;
        detail::Stopwatch    clock;
        acceptance::Checker  check( res );

        res.id    = spec.id;
        res.title = spec.title;

        try
        {
            if ( ao.inject_error.count( spec.id ) )
                throw std::runtime_error( "injected failure" );
            spec.run( check, ao );
        }
        catch ( const std::exception & e )
        {
            res.status = CriterionStatus::Error;
            res.lines.push_back( std::string( "  error " ) + e.what() );
        }

        res.seconds = clock.elapsed();

        if ( log )
        {
            *log << to_string( res.status ) << "  criterion " << res.id << ": " << res.title << " ("
                 << format_seconds( res.seconds ) << " s)";
            if ( !res.failed.empty() )
            {
                *log << "  violated:";
                for ( const auto & f : res.failed )
                    *log << " [" << f << "]";
            }
            *log << '\n';
            for ( const auto & l : res.lines )
                *log << l << '\n';
            log->flush();
        }

        results.push_back( std::move( res ) );
    }

    return results;
}

inline bool
all_passed ( const std::vector< CriterionResult > & results )
{
    return std::all_of( results.begin(), results.end(),
                        [] ( const auto & r ) { return r.status == CriterionStatus::Pass; } );
}

}// namespace proxdual
