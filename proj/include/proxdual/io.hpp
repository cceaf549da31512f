#pragma once
//
// JSON (de)serialisation of instances. Arrays are stored dense and
// row-major as {"rows", "cols", "data"}; doubles are written in shortest
// round-trip form, so a load reproduces every value bit for bit.
//

#include "problems.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace proxdual {

using Json = nlohmann::json;

namespace io {

inline Json
array_to_json ( const Matrix & a )
{
    Json  data = Json::array();

    for ( Index i = 0; i < a.rows(); ++i )
        for ( Index j = 0; j < a.cols(); ++j )
            data.push_back( a( i, j ) );

    return { { "rows", a.rows() }, { "cols", a.cols() }, { "data", std::move( data ) } };
}

inline Json array_to_json ( const Vector & v ) { return array_to_json( Matrix( v ) ); }

inline Matrix
matrix_from_json ( const Json & j )
{
    const Index   rows = j.at( "rows" ).get< Index >();
    const Index   cols = j.at( "cols" ).get< Index >();
    const auto &  data = j.at( "data" );

    if ( rows < 0 || cols < 0 || Index( data.size() ) != rows * cols )
        throw DimensionError( "matrix_from_json: data length does not match rows x cols" );

    Matrix  a( rows, cols );

    for ( Index i = 0; i < rows; ++i )
        for ( Index j2 = 0; j2 < cols; ++j2 )
            a( i, j2 ) = data[ std::size_t( i * cols + j2 ) ].get< double >();

    return a;
}

inline Vector
vector_from_json ( const Json & j )
{
    Matrix  a = matrix_from_json( j );

    if ( a.cols() != 1 )
        throw DimensionError( "vector_from_json: expected a single column" );

    return a.col( 0 );
}

////////////////////////////////////////////////////////////////////////

inline Json
map_to_json ( const LinearMap & map )
{
    const auto &  s = map.input_shape();
    Json          j{ { "shape", { { "rows", s.rows }, { "cols", s.cols }, { "symmetric", s.symmetric } } } };

    std::visit(
        [&] ( const auto & p ) {
            using T = std::decay_t< decltype( p ) >;

            if constexpr ( std::is_same_v< T, LinearMap::DenseRows > )
            {
                j[ "kind" ]   = "dense";
                j[ "matrix" ] = array_to_json( p.a );
            }
            else if constexpr ( std::is_same_v< T, LinearMap::EntryMask > )
            {
                j[ "kind" ] = "entries";
                j[ "entries" ] = Json::array();
                for ( const auto & [ r, c ] : p.entries )
                    j[ "entries" ].push_back( { r, c } );
            }
            else if constexpr ( std::is_same_v< T, LinearMap::SingleSum > )
                j[ "kind" ] = "sum";
            else
            {
                j[ "kind" ]   = "stack";
                j[ "blocks" ] = Json::array();
                for ( const auto & blk : p.blocks )
                    j[ "blocks" ].push_back( map_to_json( blk ) );
            }
        },
        map.payload() );

    return j;
}

inline LinearMap
map_from_json ( const Json & j )
{
    const auto &  js    = j.at( "shape" );
    const Shape   shape{ js.at( "rows" ).get< Index >(), js.at( "cols" ).get< Index >(), js.at( "symmetric" ).get< bool >() };
    const auto    kind  = j.at( "kind" ).get< std::string >();

    if ( kind == "dense" )
        return LinearMap::dense_rows( matrix_from_json( j.at( "matrix" ) ) );
    if ( kind == "entries" )
    {
        std::vector< std::pair< Index, Index > >  entries;

        for ( const auto & e : j.at( "entries" ) )
            entries.emplace_back( e.at( 0 ).get< Index >(), e.at( 1 ).get< Index >() );

        return LinearMap::entry_mask( shape, std::move( entries ) );
    }
    if ( kind == "sum" )
        return LinearMap::single_sum( shape.size() );
    if ( kind == "stack" )
    {
        std::vector< LinearMap >  blocks;

        for ( const auto & b : j.at( "blocks" ) )
            blocks.push_back( map_from_json( b ) );

        return LinearMap::stack( std::move( blocks ) );
    }

    throw ParameterError( "map_from_json: unknown kind '" + kind + "'" );
}

////////////////////////////////////////////////////////////////////////

inline Json
prox_to_json ( const ProxOperator & op )
{
    Json  j{ { "kind", op.name() }, { "lambda", op.lambda() } };

    std::visit(
        [&] ( const auto & k ) {
            using T = std::decay_t< decltype( k ) >;

            if constexpr ( std::is_same_v< T, ProxOperator::Scad > )
            {
                j[ "mu" ]         = k.mu;
                j[ "a" ]          = k.a;
                j[ "ref_lambda" ] = k.ref_lambda;
                if ( k.slope_scale != 1.0 )
                    j[ "slope_scale" ] = k.slope_scale;
            }
            else if constexpr ( std::is_same_v< T, ProxOperator::PositivePartTopK > )
                j[ "k" ] = k.k;
            else if constexpr ( std::is_same_v< T, ProxOperator::RankProjection > )
            {
                j[ "rows" ] = k.rows;
                j[ "cols" ] = k.cols;
                j[ "r" ]    = k.r;
            }
            else if constexpr ( std::is_same_v< T, ProxOperator::PsdRankProjection > ||
                                std::is_same_v< T, ProxOperator::EdmConeProjection > )
            {
                j[ "n" ] = k.n;
                j[ "r" ] = k.r;
            }
            else if constexpr ( std::is_same_v< T, ProxOperator::QuadraticShift > )
                j[ "b" ] = array_to_json( k.b );
            else if constexpr ( std::is_same_v< T, ProxOperator::Product > )
            {
                j[ "parts" ] = Json::array();
                for ( const auto & part : k.parts )
                    j[ "parts" ].push_back( prox_to_json( part ) );
                j[ "sizes" ] = k.sizes;
            }
        },
        op.kind() );

    return j;
}

inline ProxOperator
prox_from_json ( const Json & j )
{
    const auto    kind   = j.at( "kind" ).get< std::string >();
    const double  lambda = j.at( "lambda" ).get< double >();

    if ( kind == "scad" )
        return ProxOperator::scad( j.at( "mu" ), j.at( "a" ), j.at( "ref_lambda" ), j.value( "slope_scale", 1.0 ) )
            .with_lambda( lambda );
    if ( kind == "hard-threshold" )
        return ProxOperator::hard_threshold( lambda );
    if ( kind == "nonnegative" )
        return ProxOperator::nonnegative();
    if ( kind == "topk" )
        return ProxOperator::positive_part_topk( j.at( "k" ) );
    if ( kind == "rank" )
        return ProxOperator::rank_projection( j.at( "rows" ), j.at( "cols" ), j.at( "r" ) );
    if ( kind == "psd-rank" )
        return ProxOperator::psd_rank_projection( j.at( "n" ), j.at( "r" ) );
    if ( kind == "edm" )
        return ProxOperator::edm_cone_projection( j.at( "n" ), j.at( "r" ) );
    if ( kind == "quadratic" )
        return ProxOperator::quadratic( vector_from_json( j.at( "b" ) ), lambda );
    if ( kind == "product" )
    {
        std::vector< ProxOperator >  parts;

        for ( const auto & p : j.at( "parts" ) )
            parts.push_back( prox_from_json( p ) );

        return ProxOperator::product( std::move( parts ), j.at( "sizes" ).get< std::vector< Index > >(), lambda );
    }

    throw ParameterError( "prox_from_json: unknown kind '" + kind + "'" );
}

}// namespace io

////////////////////////////////////////////////////////////////////////

inline Json
instance_to_json ( const Instance & inst )
{
    const auto &  m = inst.meta;
    const auto &  p = inst.problem;
    Json          j;

    j[ "format" ] = "proxdual-instance-1";
    j[ "meta" ]   = { { "family", m.family }, { "n", m.n },         { "m", m.m },           { "rank", m.rank },
                      { "sparsity", m.sparsity }, { "sigma", m.sigma }, { "lambda", m.lambda }, { "rho", m.rho },
                      { "omega_size", m.omega_size }, { "seed", m.seed } };
    j[ "prox" ]         = io::prox_to_json( p.prox() );
    j[ "map" ]          = io::map_to_json( p.map() );
    j[ "b" ]            = io::array_to_json( p.b() );
    j[ "z" ]            = io::array_to_json( p.z() );
    j[ "ground_truth" ] = io::array_to_json( inst.ground_truth );
    j[ "observation" ]  = io::array_to_json( inst.observation );
    j[ "reference" ]    = inst.reference ? io::array_to_json( *inst.reference ) : Json();

    return j;
}

inline Instance
instance_from_json ( const Json & j )
{
    if ( j.value( "format", std::string() ) != "proxdual-instance-1" )
        throw ParameterError( "instance_from_json: unrecognised format tag" );

    const auto &  jm = j.at( "meta" );
    InstanceMeta  meta{ jm.at( "family" ),   jm.at( "n" ),      jm.at( "m" ),   jm.at( "rank" ),
                        jm.at( "sparsity" ), jm.at( "sigma" ),  jm.at( "lambda" ), jm.at( "rho" ),
                        jm.at( "omega_size" ), jm.at( "seed" ) };

    Instance  inst{ DualProblem( io::prox_from_json( j.at( "prox" ) ), io::map_from_json( j.at( "map" ) ),
                                 io::vector_from_json( j.at( "b" ) ), io::vector_from_json( j.at( "z" ) ) ),
                    io::vector_from_json( j.at( "ground_truth" ) ), io::vector_from_json( j.at( "observation" ) ),
                    std::nullopt, std::move( meta ) };

    if ( !j.at( "reference" ).is_null() )
        inst.reference = io::vector_from_json( j.at( "reference" ) );

    return inst;
}

inline void
save_instance ( const Instance & inst, const std::string & path )
{
    std::ofstream  out( path );

    if ( !out )
        throw std::runtime_error( "cannot open '" + path + "' for writing" );

    out << instance_to_json( inst ).dump() << '\n';
    if ( !out )
        throw std::runtime_error( "write to '" + path + "' failed" );
}

inline Instance
load_instance ( const std::string & path )
{
    std::ifstream  in( path );

    if ( !in )
        throw std::runtime_error( "cannot open '" + path + "'" );

    return instance_from_json( Json::parse( in ) );
}

}// namespace proxdual
