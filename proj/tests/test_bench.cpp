#include <proxdual/acceptance.hpp>
#include <proxdual/io.hpp>

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace proxdual;

namespace {

std::filesystem::path
scratch_dir ( const std::string & name )
{
    const auto  d = std::filesystem::temp_directory_path() /
                    ( "proxdual_test_" + name + "_" + std::to_string( ::testing::UnitTest::GetInstance()->random_seed() ) );

    std::filesystem::remove_all( d );
    std::filesystem::create_directories( d );

    return d;
}

std::string
slurp ( const std::filesystem::path & p )
{
    std::ifstream       in( p, std::ios::binary );
    std::ostringstream  s;

    s << in.rdbuf();

    return s.str();
}

ExperimentConfig
small_config ( const std::string & family, Index n )
{
    ExperimentConfig  cfg;

    cfg.family      = family;
    cfg.n           = n;
    cfg.seed        = 5;
    cfg.options.tol = 1e-8;
    cfg.timing      = false;
    cfg.traces      = false;

    return cfg;
}

}// namespace

TEST( Tables, Formatting )
{
    EXPECT_EQ( format_residual( 1.234e-7 ), "1.23e-07" );
    EXPECT_EQ( format_residual( std::nullopt ), "-" );
    EXPECT_EQ( format_seconds( 0.126 ), "0.13" );

    BenchRow  r;

    r.method = "D-SSN";
    r.r_feas = 1.234e-7;
    r.iter   = 12;
    r.time_s = 0.5;

    const auto  csv = emit_table( { r }, TableFormat::Csv );

    EXPECT_EQ( csv, "method,r_feas,r_obj,r_sol,iter,time_s\nD-SSN,1.23e-07,-,-,12,0.50\n" );
    EXPECT_EQ( std::count( csv.begin(), csv.end(), '\n' ), 2 );
    EXPECT_THROW( emit_table( {}, TableFormat::Csv ), ParameterError );
    EXPECT_THROW( parse_table_format( "xml" ), ParameterError );
}

TEST( Tables, CsvRoundTrip )
{
    auto        cfg = small_config( "lowrank", 20 );
    const auto  res = run_experiment( cfg );
    const auto  csv = emit_table( res.rows, TableFormat::Csv );
    const auto  back = parse_csv( csv );

    ASSERT_EQ( back.size(), res.rows.size() );
    for ( std::size_t i = 0; i < back.size(); ++i )
    {
        EXPECT_EQ( back[ i ].method, res.rows[ i ].method );
        EXPECT_EQ( back[ i ].iter, res.rows[ i ].iter );
        EXPECT_EQ( format_residual( back[ i ].r_feas ), format_residual( res.rows[ i ].r_feas ) );
        EXPECT_EQ( format_residual( back[ i ].r_obj ), format_residual( res.rows[ i ].r_obj ) );
        EXPECT_EQ( format_residual( back[ i ].r_sol ), format_residual( res.rows[ i ].r_sol ) );
    }
    EXPECT_EQ( emit_table( back, TableFormat::Csv ), csv );

    EXPECT_THROW( parse_csv( "method,r_feas,r_obj,r_sol,iter,time_s\n" ), ParameterError );
    EXPECT_THROW( parse_csv( "method,r_feas\nD-GD,1\n" ), ParameterError );
    EXPECT_THROW( parse_csv( "method,r_feas,r_obj,r_sol,iter,time_s\nD-GD,x,-,-,1,0.00\n" ), ParameterError );
}

TEST( Tables, MarkdownCarriesStatusAndCaption )
{
    auto        cfg = small_config( "edm", 15 );
    const auto  res = run_experiment( cfg );
    const auto  md  = emit_table( res.rows, TableFormat::Markdown, table_caption( res.meta ) );

    EXPECT_NE( md.find( "|Omega|=" ), std::string::npos );
    EXPECT_NE( md.find( "| Status |" ), std::string::npos );
    EXPECT_NE( md.find( "Converged" ), std::string::npos );
}

TEST( Experiments, SameSeedSameBytes )
{
    for ( const std::string family : { "lowrank", "scad", "sparse-simplex" } )
    {
        auto  cfg = small_config( family, family == "scad" ? 100 : 20 );

        cfg.solvers = { "gd", "lbfgs", "ssn", "admm" };

        const auto  a = emit_table( run_experiment( cfg ).rows, TableFormat::Csv );
        const auto  b = emit_table( run_experiment( cfg ).rows, TableFormat::Csv );

        EXPECT_EQ( a, b ) << family;
    }
}

TEST( Experiments, SolverExceptionBecomesErrorRow )
{
    auto  cfg = small_config( "scad", 60 );

    cfg.solvers = { "altproj", "ssn" };

    const auto  res = run_experiment( cfg );

    ASSERT_EQ( res.rows.size(), 2u );
    EXPECT_EQ( res.rows[ 0 ].method, "P-AltProj" );
    EXPECT_EQ( res.rows[ 0 ].termination, Termination::Error );
    EXPECT_FALSE( res.rows[ 0 ].error.empty() );
    EXPECT_FALSE( res.rows[ 0 ].r_feas.has_value() );
    EXPECT_EQ( res.rows[ 1 ].termination, Termination::Converged );
    EXPECT_NE( emit_table( res.rows, TableFormat::Markdown ).find( "Error" ), std::string::npos );
}

TEST( Experiments, TraceFilesAreWritten )
{
    const auto  dir = scratch_dir( "traces" );
    auto        cfg = small_config( "lowrank", 20 );

    cfg.out_dir = dir.string();
    cfg.traces  = true;

    const auto  res = run_experiment( cfg );

    for ( std::size_t i = 0; i < res.rows.size(); ++i )
    {
        const auto  text = slurp( trace_path( cfg, res.rows[ i ].method ) );

        EXPECT_EQ( text.rfind( "iter,phi,grad_norm,r_feas,elapsed_s\n", 0 ), 0u );
        EXPECT_EQ( std::count( text.begin(), text.end(), '\n' ), std::ptrdiff_t( res.reports[ i ].trace.size() + 1 ) );
    }
    std::filesystem::remove_all( dir );
}

TEST( Experiments, ClosedFormReferenceOnlyWhereAvailable )
{
    auto  cfg = small_config( "lowrank", 20 );

    cfg.reference = ReferencePolicy::ClosedForm;
    EXPECT_THROW( cfg.validate(), ParameterError );

    auto  simplex = small_config( "sparse-simplex", 20 );

    EXPECT_EQ( simplex.reference_policy(), ReferencePolicy::ClosedForm );
    EXPECT_NO_THROW( simplex.validate() );

    cfg.reference = ReferencePolicy::None;

    const auto  res = run_experiment( cfg );

    EXPECT_FALSE( res.rows[ 0 ].r_obj.has_value() );
}

////////////////////////////////////////////////////////////////////////

TEST( Config, JsonRoundTripAndUnknownKeys )
{
    auto  cfg = small_config( "scad", 200 );

    cfg.lambda          = 0.5;
    cfg.rho             = 0.1;
    cfg.solvers         = { "ssn", "admm" };
    cfg.options.tol     = 1e-9;
    cfg.options.iter_limit = 77;

    const auto  back = config_from_json( Json::parse( config_to_json( cfg ).dump() ) );

    EXPECT_EQ( config_to_json( back ), config_to_json( cfg ) );
    EXPECT_EQ( back.lambda, 0.5 );
    EXPECT_EQ( back.options.iter_limit, 77 );

    EXPECT_THROW( config_from_json( Json::parse( R"({"family":"lowrank","nn":3})" ) ), ParameterError );
    EXPECT_THROW( config_from_json( Json::parse( R"({"options":{"tolerance":1e-3}})" ) ), ParameterError );
    EXPECT_THROW( config_from_json( Json::parse( R"({"family":"cubes"})" ) ).validate(), ParameterError );
    EXPECT_THROW( config_from_json( Json::parse( R"({"solvers":["newton"]})" ) ).validate(), ParameterError );
}

TEST( Config, SeedFromEnvironment )
{
    ::setenv( "PROXDUAL_SEED", "1234", 1 );
    EXPECT_EQ( default_seed(), 1234u );
    EXPECT_EQ( ExperimentConfig{}.seed, 1234u );
    ::setenv( "PROXDUAL_SEED", "12x", 1 );
    EXPECT_THROW( default_seed(), ParameterError );
    ::unsetenv( "PROXDUAL_SEED" );
    EXPECT_EQ( default_seed(), 0u );
}

TEST( Instances, JsonRoundTripIsBitwise )
{
    const std::vector< Instance >  insts = { gen_lowrank_diag( 12, 2, 3 ), gen_edm_helix( 12, 3, 1e-2, 3 ),
                                             gen_scad( 40, 0.1, 0.02, 0.05, 3 ), gen_sparse_simplex( 15, 3, 0.1, 3 ),
                                             gen_l0_regression( 6, 3, 0.1, 0.1, 3 ) };
    const auto                     dir = scratch_dir( "instances" );

    for ( const auto & inst : insts )
    {
        const auto  path = ( dir / ( inst.meta.family + ".json" ) ).string();

        save_instance( inst, path );

        const auto  back = load_instance( path );

        EXPECT_EQ( back.problem.z(), inst.problem.z() ) << inst.meta.family;
        EXPECT_EQ( back.problem.b(), inst.problem.b() ) << inst.meta.family;
        EXPECT_EQ( back.problem.map().dense(), inst.problem.map().dense() ) << inst.meta.family;
        EXPECT_EQ( back.problem.prox().name(), inst.problem.prox().name() ) << inst.meta.family;
        EXPECT_EQ( back.ground_truth, inst.ground_truth ) << inst.meta.family;
        ASSERT_EQ( back.reference.has_value(), inst.reference.has_value() ) << inst.meta.family;
        if ( inst.reference )
        {
            EXPECT_EQ( *back.reference, *inst.reference ) << inst.meta.family;
        }
        EXPECT_EQ( instance_to_json( back ).dump(), instance_to_json( inst ).dump() ) << inst.meta.family;

        const Vector  y = Vector::Constant( inst.problem.dual_dim(), 0.25 );

        EXPECT_EQ( back.problem.value( y ), inst.problem.value( y ) ) << inst.meta.family;
    }
    std::filesystem::remove_all( dir );
}

TEST( Instances, MalformedJsonIsRejected )
{
    EXPECT_ANY_THROW( instance_from_json( Json::parse( R"({"format":"something-else"})" ) ) );
    EXPECT_ANY_THROW( io::matrix_from_json( Json::parse( R"({"rows":2,"cols":2,"data":[1,2,3]})" ) ) );
}

////////////////////////////////////////////////////////////////////////

TEST( AcceptanceHooks, TamperedScadSlopeFailsTheGradientOracle )
{
    AcceptanceOptions  ao;

    ao.only             = { 5 };
    ao.scad_slope_scale = 1.05;

    const auto  res = run_acceptance( ao );

    ASSERT_EQ( res.size(), 1u );
    EXPECT_EQ( res[ 0 ].id, 5 );
    EXPECT_EQ( res[ 0 ].status, CriterionStatus::Fail );
    ASSERT_FALSE( res[ 0 ].failed.empty() );
    EXPECT_NE( res[ 0 ].failed[ 0 ].find( "scad" ), std::string::npos );
    EXPECT_FALSE( all_passed( res ) );
}

TEST( AcceptanceHooks, InjectedErrorIsIsolated )
{
    AcceptanceOptions   ao;
    std::ostringstream  log;

    ao.only         = { 5, 7, 8 };
    ao.inject_error = { 7 };

    const auto  res = run_acceptance( ao, &log );

    ASSERT_EQ( res.size(), 3u );
    EXPECT_EQ( res[ 0 ].status, CriterionStatus::Pass );
    EXPECT_EQ( res[ 1 ].status, CriterionStatus::Error );
    EXPECT_EQ( res[ 2 ].status, CriterionStatus::Pass );
    EXPECT_FALSE( all_passed( res ) );
    EXPECT_NE( log.str().find( "criterion 7" ), std::string::npos );
}
