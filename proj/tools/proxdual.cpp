// proxdual command-line driver: gen / solve / bench / accept

#include <proxdual/acceptance.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace proxdual;

namespace {

struct Flags
{
    std::string                 config;
    std::string                 family;
    Index                       n = 0;
    Index                       r = 0;
    Index                       k = 0;
    Index                       m = 0;
    double                      lambda = 0.0;
    double                      sigma  = 0.0;
    double                      rho    = 0.0;
    std::vector< std::string >  solvers;
    double                      tol        = 0.0;
    int                         iter_limit = 0;
    double                      time_limit = 0.0;
    std::uint64_t               seed       = 0;
    std::string                 out;
    std::string                 format = "csv";
    std::string                 reference;
    std::string                 instance;
    bool                        no_timing = false;
    bool                        no_traces = false;
};

void
add_problem_flags ( CLI::App * cmd, Flags & f )
{
    cmd->add_option( "--config", f.config, "JSON config file; flags given on the command line override it" );
    cmd->add_option( "--family", f.family, "lowrank | edm | scad | sparse-simplex | l0-regression" );
    cmd->add_option( "--n", f.n, "problem size" );
    cmd->add_option( "--r", f.r, "rank (lowrank, edm)" );
    cmd->add_option( "--k", f.k, "sparsity (sparse-simplex)" );
    cmd->add_option( "--m", f.m, "rows of A (l0-regression)" );
    cmd->add_option( "--lambda", f.lambda, "prox parameter (scad, l0-regression)" );
    cmd->add_option( "--sigma", f.sigma, "noise level" );
    cmd->add_option( "--rho", f.rho, "support fraction (scad)" );
    cmd->add_option( "--seed", f.seed, "instance seed (default $PROXDUAL_SEED or 0)" );
}

void
add_solve_flags ( CLI::App * cmd, Flags & f )
{
    cmd->add_option( "--solver", f.solvers, "gd | lbfgs | ssn | admm | altproj (repeatable or comma separated)" )
        ->delimiter( ',' );
    cmd->add_option( "--tol", f.tol, "feasibility tolerance" );
    cmd->add_option( "--iter-limit", f.iter_limit, "iteration limit" );
    cmd->add_option( "--time-limit", f.time_limit, "wall-time limit in seconds" );
    cmd->add_option( "--format", f.format, "csv | markdown" );
    cmd->add_option( "--reference", f.reference, "ssn-1e-14 | closed-form | none" );
    cmd->add_flag( "--no-timing", f.no_timing, "write all times as 0.00 (byte-reproducible tables)" );
    cmd->add_flag( "--no-traces", f.no_traces, "do not write per-iteration trace files" );
}

bool
given ( const CLI::App * cmd, const std::string & name )
{
    return cmd->count( name ) > 0;
}

ExperimentConfig
build_config ( const CLI::App * cmd, const Flags & f )
{
    ExperimentConfig  cfg;

    if ( !f.config.empty() )
    {
        std::ifstream  in( f.config );

        if ( !in )
            throw std::runtime_error( "cannot open config '" + f.config + "'" );
        cfg = config_from_json( Json::parse( in ) );
    }

    if ( given( cmd, "--family" ) )     cfg.family  = f.family;
    if ( given( cmd, "--n" ) )          cfg.n       = f.n;
    if ( given( cmd, "--r" ) )          cfg.r       = f.r;
    if ( given( cmd, "--k" ) )          cfg.k       = f.k;
    if ( given( cmd, "--m" ) )          cfg.m       = f.m;
    if ( given( cmd, "--lambda" ) )     cfg.lambda  = f.lambda;
    if ( given( cmd, "--sigma" ) )      cfg.sigma   = f.sigma;
    if ( given( cmd, "--rho" ) )        cfg.rho     = f.rho;
    if ( given( cmd, "--seed" ) )       cfg.seed    = f.seed;
    if ( given( cmd, "--out" ) )        cfg.out_dir = f.out;
    if ( cmd->get_option_no_throw( "--solver" ) && given( cmd, "--solver" ) )
        cfg.solvers = f.solvers;
    if ( cmd->get_option_no_throw( "--tol" ) && given( cmd, "--tol" ) )
        cfg.options.tol = f.tol;
    if ( cmd->get_option_no_throw( "--iter-limit" ) && given( cmd, "--iter-limit" ) )
        cfg.options.iter_limit = f.iter_limit;
    if ( cmd->get_option_no_throw( "--time-limit" ) && given( cmd, "--time-limit" ) )
        cfg.options.time_limit_secs = f.time_limit;
    if ( cmd->get_option_no_throw( "--reference" ) && given( cmd, "--reference" ) )
        cfg.reference = parse_reference_policy( f.reference );
    if ( f.no_timing )
        cfg.timing = false;
    if ( f.no_traces )
        cfg.traces = false;

    cfg.validate();

    return cfg;
}

void
emit ( const std::string & text, const std::string & out_dir, const std::string & name )
{
    std::cout << text;
    if ( !out_dir.empty() )
    {
        std::filesystem::create_directories( out_dir );
        write_text( text, ( std::filesystem::path( out_dir ) / name ).string() );
    }
}

int
cmd_gen ( const CLI::App * cmd, const Flags & f )
{
    auto        cfg  = build_config( cmd, f );
    const auto  inst = make_instance( cfg );
    const auto  text = instance_to_json( inst ).dump() + "\n";

    if ( f.out.empty() )
        std::cout << text;
    else
    {
        write_text( text, f.out );
        std::cerr << "wrote " << f.out << '\n';
    }

    return 0;
}

int
cmd_solve ( const CLI::App * cmd, const Flags & f )
{
    auto      cfg  = build_config( cmd, f );
    Instance  inst = f.instance.empty() ? make_instance( cfg ) : load_instance( f.instance );

    std::vector< BenchRow >  rows;

    for ( const auto & key : cfg.solvers )
    {
        BenchRow  row;

        row.method = method_label( key );
        try
        {
            const auto  rep = run_solver( key, inst.problem, cfg.options );
            const auto  r   = inst.problem.residuals( rep.x, inst.reference );

            row.r_feas      = r.feas;
            row.r_obj       = r.obj;
            row.r_sol       = r.sol;
            row.iter        = rep.iterations;
            row.time_s      = cfg.timing ? rep.wall_time_secs : 0.0;
            row.termination = rep.termination;
        }
        catch ( const std::exception & e )
        {
            row.termination = Termination::Error;
            std::cerr << row.method << ": " << e.what() << '\n';
        }
        rows.push_back( std::move( row ) );
    }

    const auto  fmt = parse_table_format( f.format );

    emit( emit_table( rows, fmt, table_caption( inst.meta ) ), cfg.out_dir,
          fmt == TableFormat::Csv ? "solve.csv" : "solve.md" );

    return 0;
}

int
cmd_bench ( const CLI::App * cmd, const Flags & f )
{
    const auto  cfg = build_config( cmd, f );
    const auto  res = run_experiment( cfg );
    const auto  fmt = parse_table_format( f.format );

    for ( const auto & r : res.rows )
        if ( !r.error.empty() )
            std::cerr << r.method << ": " << r.error << '\n';

    emit( emit_table( res.rows, fmt, table_caption( res.meta ) ), cfg.out_dir,
          fmt == TableFormat::Csv ? "table.csv" : "table.md" );

    return 0;
}

}// namespace

int
main ( int argc, char ** argv )
{
    CLI::App  app{ "Affine-constrained proximal maps through the convex dual" };
    Flags     f;

    app.require_subcommand( 1 );

    auto *  gen = app.add_subcommand( "gen", "generate an instance and write it as JSON" );

    add_problem_flags( gen, f );
    gen->add_option( "--out", f.out, "output file (default stdout)" );
    gen->add_option( "--reference", f.reference, "ssn-1e-14 | closed-form | none" );

    auto *  solve = app.add_subcommand( "solve", "solve one instance with the selected solvers" );

    add_problem_flags( solve, f );
    add_solve_flags( solve, f );
    solve->add_option( "--instance", f.instance, "instance JSON written by gen" );
    solve->add_option( "--out", f.out, "directory for the result table" );

    auto *  bench = app.add_subcommand( "bench", "run an experiment and emit its table and traces" );

    add_problem_flags( bench, f );
    add_solve_flags( bench, f );
    bench->add_option( "--out", f.out, "directory for the table and trace files" );

    AcceptanceOptions  ao;
    std::vector< int > only, inject;
    auto *             accept = app.add_subcommand( "accept", "run the acceptance suite" );

    accept->add_option( "--only", only, "criterion ids to run" )->delimiter( ',' );
    accept->add_option( "--seed", ao.seed, "base seed" );
    accept->add_option( "--scad-slope-scale", ao.scad_slope_scale, "mutation test: scale the SCAD middle slope" );
    accept->add_option( "--inject-error", inject, "isolation test: make these criteria throw" )->delimiter( ',' );

    CLI11_PARSE( app, argc, argv );

    try
    {
        if ( *gen )
            return cmd_gen( gen, f );
        if ( *solve )
            return cmd_solve( solve, f );
        if ( *bench )
            return cmd_bench( bench, f );

        ao.only         = { only.begin(), only.end() };
        ao.inject_error = { inject.begin(), inject.end() };

        const auto  results = run_acceptance( ao, &std::cout );
        const bool  ok      = all_passed( results );

        std::cout << ( ok ? "all criteria passed" : "acceptance FAILED" ) << '\n';

        return ok ? 0 : 1;
    }
    catch ( const std::exception & e )
    {
        std::cerr << "error: " << e.what() << '\n';

        return 2;
    }
}
