#pragma once
//
// Experiment harness: instance generation, solver matrix, result tables
// (CSV / markdown) and per-run iteration traces.
//
// CSV columns: method,r_feas,r_obj,r_sol,iter,time_s. Residuals are written
// as %.2e, times as %.2f, and a missing value as "-".
//

#include "io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace proxdual {

enum class ReferencePolicy
{
    Ssn,         // SSN at tol 1e-14
    ClosedForm,  // the generator's specialist solution
    None
};

inline const char *
to_string ( ReferencePolicy p )
{
    switch ( p )
    {
        case ReferencePolicy::Ssn:        return "ssn-1e-14";
        case ReferencePolicy::ClosedForm: return "closed-form";
        case ReferencePolicy::None:       return "none";
    }

    return "?";
}

inline ReferencePolicy
parse_reference_policy ( const std::string & s )
{
    if ( s == "ssn-1e-14" )
        return ReferencePolicy::Ssn;
    if ( s == "closed-form" )
        return ReferencePolicy::ClosedForm;
    if ( s == "none" )
        return ReferencePolicy::None;

    throw ParameterError( "unknown reference policy '" + s + "' (ssn-1e-14 | closed-form | none)" );
}

// seed used when none is given: $PROXDUAL_SEED, else 0
inline std::uint64_t
default_seed ()
{
    const char *  s = std::getenv( "PROXDUAL_SEED" );

    if ( !s || !*s )
        return 0;

    char *  end = nullptr;
    auto    v   = std::strtoull( s, &end, 10 );

    if ( *end != '\0' )
        throw ParameterError( std::string( "PROXDUAL_SEED is not an unsigned integer: " ) + s );

    return v;
}

inline const std::vector< std::string > &
known_families ()
{
    static const std::vector< std::string >  f{ "lowrank", "edm", "scad", "sparse-simplex", "l0-regression" };

    return f;
}

inline const std::vector< std::string > &
known_solvers ()
{
    static const std::vector< std::string >  s{ "gd", "lbfgs", "ssn", "admm", "altproj" };

    return s;
}

// "gd" -> "D-GD" etc.; the table label of a solver key
inline std::string
method_label ( const std::string & key )
{
    if ( key == "gd" )      return "D-GD";
    if ( key == "lbfgs" )   return "D-LBFGS";
    if ( key == "ssn" )     return "D-SSN";
    if ( key == "admm" )    return "P-ADMM";
    if ( key == "altproj" ) return "P-AltProj";

    throw ParameterError( "unknown solver '" + key + "' (gd | lbfgs | ssn | admm | altproj)" );
}

struct ExperimentConfig
{
    std::string                      family = "lowrank";
    Index                            n      = 50;
    std::optional< Index >           r;
    std::optional< Index >           k;
    std::optional< Index >           m;        // l0-regression rows
    std::optional< double >          lambda;
    std::optional< double >          sigma;
    std::optional< double >          rho;
    std::vector< std::string >       solvers = { "gd", "lbfgs", "ssn" };
    SolveOptions                     options;
    std::uint64_t                    seed = default_seed();
    std::string                      out_dir;  // empty: no files written
    std::optional< ReferencePolicy > reference;
    bool                             traces = true;
    // false writes every time as 0.00 so that tables are byte-reproducible
    bool                             timing = true;

    Index  rank () const { return r.value_or( family == "edm" ? 3 : 5 ); }
    Index  sparsity () const { return k.value_or( 3 ); }
    Index  rows () const { return m.value_or( std::max< Index >( 1, n / 2 ) ); }
    double lambda_or_default () const { return lambda.value_or( family == "l0-regression" ? 0.1 : 0.01 ); }
    double rho_or_default () const { return rho.value_or( 0.05 ); }

    double
    sigma_or_default () const
    {
        if ( sigma )
            return *sigma;
        if ( family == "edm" )
            return 1e-2;
        if ( family == "scad" )
            return 0.01;

        return 0.1;
    }

    ReferencePolicy
    reference_policy () const
    {
        if ( reference )
            return *reference;

        return ( family == "sparse-simplex" || family == "l0-regression" ) ? ReferencePolicy::ClosedForm
                                                                           : ReferencePolicy::Ssn;
    }

    void
    validate () const
    {
        if ( std::find( known_families().begin(), known_families().end(), family ) == known_families().end() )
            throw ParameterError( "unknown family '" + family + "'" );
        if ( solvers.empty() )
            throw ParameterError( "no solvers selected" );
        for ( const auto & s : solvers )
            method_label( s );
        options.validate();

        if ( family == "lowrank" && ( n < 1 || rank() < 1 || rank() > n ) )
            throw ParameterError( "lowrank: need 1 <= r <= n" );
        if ( family == "edm" && ( n < 2 || rank() < 1 || rank() > n ) )
            throw ParameterError( "edm: need n >= 2 and 1 <= r <= n" );
        if ( family == "scad" && ( n < 20 || !( lambda_or_default() > 0.0 ) || !( rho_or_default() > 0.0 ) ||
                                   rho_or_default() > 1.0 ) )
            throw ParameterError( "scad: need n >= 20, lambda > 0 and 0 < rho <= 1" );
        if ( family == "sparse-simplex" && ( sparsity() < 1 || sparsity() >= n ) )
            throw ParameterError( "sparse-simplex: need 1 <= k < n" );
        if ( family == "l0-regression" && ( n < 1 || rows() < 1 || !( lambda_or_default() > 0.0 ) ) )
            throw ParameterError( "l0-regression: need n, m >= 1 and lambda > 0" );
        if ( !( sigma_or_default() >= 0.0 ) )
            throw ParameterError( "sigma must be nonnegative" );

        const auto  policy = reference_policy();

        if ( policy == ReferencePolicy::ClosedForm && family != "sparse-simplex" && family != "l0-regression" )
            throw ParameterError( "closed-form reference is only available for sparse-simplex and l0-regression" );
    }
};

////////////////////////////////////////////////////////////////////////
//
// JSON config; unknown keys are rejected
//

namespace detail {

inline void
reject_unknown ( const Json & j, const std::set< std::string > & allowed, const std::string & where )
{
    for ( const auto & [ key, _ ] : j.items() )
        if ( !allowed.count( key ) )
            throw ParameterError( where + ": unknown key '" + key + "'" );
}

inline void
options_from_json ( const Json & j, SolveOptions & o )
{
    reject_unknown( j,
                    { "tol", "time_limit", "iter_limit", "armijo_gamma", "backtrack_sigma", "max_backtracks",
                      "nonmonotone_memory", "lbfgs_memory", "bb_min_step", "bb_max_step", "ssn_cg_rel_tol",
                      "ssn_cg_max_iter", "ssn_reg_cap", "admm_rho0", "admm_mu", "admm_tau" },
                    "options" );

    o.tol                = j.value( "tol", o.tol );
    o.time_limit_secs    = j.value( "time_limit", o.time_limit_secs );
    o.iter_limit         = j.value( "iter_limit", o.iter_limit );
    o.armijo_gamma       = j.value( "armijo_gamma", o.armijo_gamma );
    o.backtrack_sigma    = j.value( "backtrack_sigma", o.backtrack_sigma );
    o.max_backtracks     = j.value( "max_backtracks", o.max_backtracks );
    o.nonmonotone_memory = j.value( "nonmonotone_memory", o.nonmonotone_memory );
    o.lbfgs_memory       = j.value( "lbfgs_memory", o.lbfgs_memory );
    o.bb_min_step        = j.value( "bb_min_step", o.bb_min_step );
    o.bb_max_step        = j.value( "bb_max_step", o.bb_max_step );
    o.ssn_cg_rel_tol     = j.value( "ssn_cg_rel_tol", o.ssn_cg_rel_tol );
    o.ssn_cg_max_iter    = j.value( "ssn_cg_max_iter", o.ssn_cg_max_iter );
    o.ssn_reg_cap        = j.value( "ssn_reg_cap", o.ssn_reg_cap );
    o.admm_rho0          = j.value( "admm_rho0", o.admm_rho0 );
    o.admm_mu            = j.value( "admm_mu", o.admm_mu );
    o.admm_tau           = j.value( "admm_tau", o.admm_tau );
}

}// namespace detail

inline ExperimentConfig
config_from_json ( const Json & j, ExperimentConfig cfg = {} )
{
    detail::reject_unknown( j,
                            { "family", "n", "r", "k", "m", "lambda", "sigma", "rho", "solvers", "options", "seed",
                              "out", "reference", "traces", "timing" },
                            "config" );

    cfg.family = j.value( "family", cfg.family );
    cfg.n      = j.value( "n", cfg.n );
    if ( j.contains( "r" ) )      cfg.r      = j[ "r" ].get< Index >();
    if ( j.contains( "k" ) )      cfg.k      = j[ "k" ].get< Index >();
    if ( j.contains( "m" ) )      cfg.m      = j[ "m" ].get< Index >();
    if ( j.contains( "lambda" ) ) cfg.lambda = j[ "lambda" ].get< double >();
    if ( j.contains( "sigma" ) )  cfg.sigma  = j[ "sigma" ].get< double >();
    if ( j.contains( "rho" ) )    cfg.rho    = j[ "rho" ].get< double >();
    if ( j.contains( "solvers" ) )
        cfg.solvers = j[ "solvers" ].get< std::vector< std::string > >();
    if ( j.contains( "options" ) )
        detail::options_from_json( j[ "options" ], cfg.options );
    cfg.seed    = j.value( "seed", cfg.seed );
    cfg.out_dir = j.value( "out", cfg.out_dir );
    if ( j.contains( "reference" ) )
        cfg.reference = parse_reference_policy( j[ "reference" ].get< std::string >() );
    cfg.traces = j.value( "traces", cfg.traces );
    cfg.timing = j.value( "timing", cfg.timing );

    return cfg;
}

inline Json
config_to_json ( const ExperimentConfig & cfg )
{
    const auto &  o = cfg.options;
    Json          j{ { "family", cfg.family },
                     { "n", cfg.n },
                     { "solvers", cfg.solvers },
                     { "seed", cfg.seed },
                     { "out", cfg.out_dir },
                     { "reference", to_string( cfg.reference_policy() ) },
                     { "traces", cfg.traces },
                     { "timing", cfg.timing } };

    if ( cfg.r )      j[ "r" ]      = *cfg.r;
    if ( cfg.k )      j[ "k" ]      = *cfg.k;
    if ( cfg.m )      j[ "m" ]      = *cfg.m;
    if ( cfg.lambda ) j[ "lambda" ] = *cfg.lambda;
    if ( cfg.sigma )  j[ "sigma" ]  = *cfg.sigma;
    if ( cfg.rho )    j[ "rho" ]    = *cfg.rho;

    j[ "options" ] = { { "tol", o.tol },
                       { "time_limit", o.time_limit_secs },
                       { "iter_limit", o.iter_limit },
                       { "armijo_gamma", o.armijo_gamma },
                       { "backtrack_sigma", o.backtrack_sigma },
                       { "max_backtracks", o.max_backtracks },
                       { "nonmonotone_memory", o.nonmonotone_memory },
                       { "lbfgs_memory", o.lbfgs_memory },
                       { "bb_min_step", o.bb_min_step },
                       { "bb_max_step", o.bb_max_step },
                       { "ssn_cg_rel_tol", o.ssn_cg_rel_tol },
                       { "ssn_cg_max_iter", o.ssn_cg_max_iter },
                       { "ssn_reg_cap", o.ssn_reg_cap },
                       { "admm_rho0", o.admm_rho0 },
                       { "admm_mu", o.admm_mu },
                       { "admm_tau", o.admm_tau } };

    return j;
}

////////////////////////////////////////////////////////////////////////

// instance for a config; reference attached per the config's policy
inline Instance
make_instance ( const ExperimentConfig & cfg )
{
    cfg.validate();

    const auto  make = [&] () -> Instance {
        if ( cfg.family == "lowrank" )
            return gen_lowrank_diag( cfg.n, cfg.rank(), cfg.seed );
        if ( cfg.family == "edm" )
            return gen_edm_helix( cfg.n, cfg.rank(), cfg.sigma_or_default(), cfg.seed );
        if ( cfg.family == "scad" )
            return gen_scad( cfg.n, cfg.rho_or_default(), cfg.sigma_or_default(), cfg.lambda_or_default(), cfg.seed );
        if ( cfg.family == "sparse-simplex" )
            return gen_sparse_simplex( cfg.n, cfg.sparsity(), cfg.sigma_or_default(), cfg.seed );

        return gen_l0_regression( cfg.n, cfg.rows(), cfg.lambda_or_default(), cfg.sigma_or_default(), cfg.seed );
    };

    Instance  inst = make();

    switch ( cfg.reference_policy() )
    {
        case ReferencePolicy::Ssn:
            attach_ssn_reference( inst );
            break;
        case ReferencePolicy::ClosedForm:
            break;
        case ReferencePolicy::None:
            inst.reference.reset();
            break;
    }

    return inst;
}

inline SolveReport
run_solver ( const std::string & key, const DualProblem & p, const SolveOptions & opts )
{
    if ( key == "gd" )
        return solve_gd_bb( p, opts );
    if ( key == "lbfgs" )
        return solve_lbfgs( p, opts );
    if ( key == "ssn" )
        return solve_ssn( p, opts );
    if ( key == "admm" )
        return solve_admm( p, opts );
    if ( key == "altproj" )
        return solve_altproj( p, opts );

    throw ParameterError( "unknown solver '" + key + "'" );
}

////////////////////////////////////////////////////////////////////////
//
// table rows
//

struct BenchRow
{
    std::string                  method;
    std::optional< double >      r_feas;
    std::optional< double >      r_obj;
    std::optional< double >      r_sol;
    int                          iter   = 0;
    double                       time_s = 0.0;
    // not part of the CSV; parsed rows leave it empty
    std::optional< Termination > termination;
    std::string                  error;
};

struct ExperimentResult
{
    InstanceMeta                meta;
    std::vector< BenchRow >     rows;
    std::vector< SolveReport >  reports;  // one per row; empty report for Error rows
};

inline std::string
format_residual ( const std::optional< double > & v )
{
    if ( !v )
        return "-";

    char  buf[ 32 ];

    std::snprintf( buf, sizeof buf, "%.2e", *v );

    return buf;
}

inline std::string
format_seconds ( double t )
{
    char  buf[ 32 ];

    std::snprintf( buf, sizeof buf, "%.2f", t );

    return buf;
}

inline void
write_trace_csv ( const std::vector< TraceRecord > & trace, const std::string & path )
{
    std::ofstream  out( path );

    if ( !out )
        throw std::runtime_error( "cannot open '" + path + "' for writing" );

    out << "iter,phi,grad_norm,r_feas,elapsed_s\n";
    for ( const auto & t : trace )
    {
        char  buf[ 160 ];

        std::snprintf( buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.6f\n", t.iter, t.phi, t.grad_norm, t.r_feas,
                       t.elapsed_s );
        out << buf;
    }

    if ( !out )
        throw std::runtime_error( "write to '" + path + "' failed" );
}

inline std::string
trace_path ( const ExperimentConfig & cfg, const std::string & method )
{
    return ( std::filesystem::path( cfg.out_dir ) /
             ( "trace_" + cfg.family + "_n" + std::to_string( cfg.n ) + "_" + method + ".csv" ) )
        .string();
}

//
// one row per solver; a solver that throws yields an Error row and the
// remaining solvers still run
//
inline ExperimentResult
run_experiment ( const ExperimentConfig & cfg )
{
    const Instance    inst = make_instance( cfg );
    ExperimentResult  res;

    res.meta = inst.meta;

    if ( !cfg.out_dir.empty() )
        std::filesystem::create_directories( cfg.out_dir );

    for ( const auto & key : cfg.solvers )
    {
        BenchRow  row;

        row.method = method_label( key );

        try
        {
            auto  rep = run_solver( key, inst.problem, cfg.options );
            auto  r   = inst.problem.residuals( rep.x, inst.reference );

            row.r_feas      = r.feas;
            row.r_obj       = r.obj;
            row.r_sol       = r.sol;
            row.iter        = rep.iterations;
            row.time_s      = cfg.timing ? rep.wall_time_secs : 0.0;
            row.termination = rep.termination;

            if ( cfg.traces && !cfg.out_dir.empty() )
            {
                auto  trace = rep.trace;

                if ( !cfg.timing )
                    for ( auto & t : trace )
                        t.elapsed_s = 0.0;
                write_trace_csv( trace, trace_path( cfg, row.method ) );
            }

            res.reports.push_back( std::move( rep ) );
        }
        catch ( const std::exception & e )
        {
            row.termination = Termination::Error;
            row.error       = e.what();
            res.reports.emplace_back();
            res.reports.back().solver      = row.method;
            res.reports.back().termination = Termination::Error;
        }

        res.rows.push_back( std::move( row ) );
    }

    return res;
}

////////////////////////////////////////////////////////////////////////

enum class TableFormat
{
    Csv,
    Markdown
};

inline TableFormat
parse_table_format ( const std::string & s )
{
    if ( s == "csv" )
        return TableFormat::Csv;
    if ( s == "markdown" || s == "md" )
        return TableFormat::Markdown;

    throw ParameterError( "unknown table format '" + s + "' (csv | markdown)" );
}

inline std::string
emit_table ( const std::vector< BenchRow > & rows, TableFormat format, const std::string & caption = {} )
{
    if ( rows.empty() )
        throw ParameterError( "emit_table: no rows to emit" );

    std::ostringstream  out;

    if ( format == TableFormat::Csv )
    {
        out << "method,r_feas,r_obj,r_sol,iter,time_s\n";
        for ( const auto & r : rows )
            out << r.method << ',' << format_residual( r.r_feas ) << ',' << format_residual( r.r_obj ) << ','
                << format_residual( r.r_sol ) << ',' << r.iter << ',' << format_seconds( r.time_s ) << '\n';

        return out.str();
    }

    if ( !caption.empty() )
        out << caption << "\n\n";
    out << "| Method | R_feas | R_obj | R_sol | Iter | Time(s) | Status |\n";
    out << "|---|---|---|---|---|---|---|\n";
    for ( const auto & r : rows )
        out << "| " << r.method << " | " << format_residual( r.r_feas ) << " | " << format_residual( r.r_obj )
            << " | " << format_residual( r.r_sol ) << " | " << r.iter << " | " << format_seconds( r.time_s )
            << " | " << ( r.termination ? to_string( *r.termination ) : "-" ) << " |\n";

    return out.str();
}

// "family=edm n=200 m=288 |Omega|=88 seed=0"
inline std::string
table_caption ( const InstanceMeta & m )
{
    std::ostringstream  out;

    out << "family=" << m.family << " n=" << m.n << " m=" << m.m;
    if ( m.family == "edm" )
        out << " |Omega|=" << m.omega_size;
    if ( m.rank )
        out << " r=" << m.rank;
    if ( m.sparsity )
        out << " k=" << m.sparsity;
    if ( m.family == "scad" || m.family == "l0-regression" )
        out << " lambda=" << m.lambda;
    out << " seed=" << m.seed;

    return out.str();
}

inline void
write_text ( const std::string & text, const std::string & path )
{
    std::ofstream  out( path, std::ios::binary );

    if ( !out )
        throw std::runtime_error( "cannot open '" + path + "' for writing" );

    out << text;
    if ( !out )
        throw std::runtime_error( "write to '" + path + "' failed" );
}

namespace detail {

inline std::optional< double >
parse_cell ( const std::string & s, const std::string & what )
{
    if ( s == "-" )
        return std::nullopt;

    std::size_t  used = 0;
    double       v    = 0.0;

    try
    {
        v = std::stod( s, &used );
    }
    catch ( const std::exception & )
    {
        used = 0;
    }
    if ( used != s.size() || s.empty() )
        throw ParameterError( "parse_csv: bad " + what + " value '" + s + "'" );

    return v;
}

}// namespace detail

inline std::vector< BenchRow >
parse_csv ( const std::string & text )
{
    std::istringstream  in( text );
    std::string         line;

    if ( !std::getline( in, line ) || line != "method,r_feas,r_obj,r_sol,iter,time_s" )
        throw ParameterError( "parse_csv: missing or unexpected header" );

    std::vector< BenchRow >  rows;

    while ( std::getline( in, line ) )
    {
        if ( line.empty() )
            continue;

        std::vector< std::string >  cells;
        std::istringstream          ls( line );
        std::string                 cell;

        while ( std::getline( ls, cell, ',' ) )
            cells.push_back( cell );
        if ( cells.size() != 6 )
            throw ParameterError( "parse_csv: expected 6 fields in '" + line + "'" );

        BenchRow  r;

        r.method = cells[ 0 ];
        r.r_feas = detail::parse_cell( cells[ 1 ], "r_feas" );
        r.r_obj  = detail::parse_cell( cells[ 2 ], "r_obj" );
        r.r_sol  = detail::parse_cell( cells[ 3 ], "r_sol" );

        const auto  it = detail::parse_cell( cells[ 4 ], "iter" );
        const auto  t  = detail::parse_cell( cells[ 5 ], "time_s" );

        if ( !it || *it != double( int( *it ) ) || !t )
            throw ParameterError( "parse_csv: bad iter/time in '" + line + "'" );

        r.iter   = int( *it );
        r.time_s = *t;
        rows.push_back( std::move( r ) );
    }

    if ( rows.empty() )
        throw ParameterError( "parse_csv: no data rows" );

    return rows;
}

}// namespace proxdual
